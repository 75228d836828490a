//! Numerical evaluation of the leading constant `c_{S,H}`.

mod alpha;
mod omega;
mod theta;

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use alpha::{alpha_polytope, AlphaMode, AlphaPolytope, AlphaValue};
pub use omega::{omega_infinity, omega_infinity_polydisk, omega_infinity_stratum, region_forms, Stratum, OMEGA_PREFACTOR};
pub use theta::{euler_factor, theta0, Theta0, TAIL_CONSTANT};

use crate::error::{Error, Result};
use crate::qfield::FieldCtx;
use crate::surfaces::SurfaceId;

/// Samples per independent RNG stream.
pub(crate) const CHUNK: u64 = 1 << 16;

/// Stream `chunk` of the generator for `seed`; results do not depend on how
/// chunks are scheduled across threads.
pub(crate) fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// A Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// `(2π)⁶ h_K⁶ / (Δ_K⁴ ω_K⁶)`.
pub fn field_factor(k: &FieldCtx) -> f64 {
    let h = k.class_number() as f64;
    let disc = k.disc() as f64;
    let w = k.omega_count() as f64;
    (2.0 * PI).powi(6) * h.powi(6) / (disc.powi(4) * w.powi(6))
}

/// `c = α · (2π)⁶ h_K⁶ / (Δ_K⁴ ω_K⁶) · θ₀ · ω_∞`.
pub fn peyre_constant(k: &FieldCtx, alpha: f64, theta0: f64, omega_inf: f64) -> Result<f64> {
    for (name, v) in [("α", alpha), ("θ₀", theta0), ("ω_∞", omega_inf)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} = {v} must be positive and finite")));
        }
    }
    Ok(alpha * field_factor(k) * theta0 * omega_inf)
}

/// `c · B (log B)⁵`.
pub fn predicted_n(c: f64, bound: f64) -> f64 {
    c * bound * bound.ln().powi(5)
}

/// Every factor of `c_{S,H}` for one surface and field.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantReport {
    pub surface: SurfaceId,
    pub field_d: i64,
    pub alpha: AlphaValue,
    pub theta0: Theta0,
    pub omega_inf: Estimate,
    pub c: f64,
    /// First-order propagated standard error of `c`.
    pub c_stderr: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ConstantOptions {
    pub prime_bound: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for ConstantOptions {
    fn default() -> Self {
        ConstantOptions { prime_bound: 100_000, samples: 1_000_000, seed: 1 }
    }
}

/// Exact `α` where the polytope is a simplex, Monte Carlo otherwise.
pub fn constant_report(k: &FieldCtx, s: SurfaceId, opts: ConstantOptions) -> Result<ConstantReport> {
    let alpha = match alpha_polytope(s, AlphaMode::ExactSimplex) {
        Ok(a) => a,
        Err(Error::Unsupported(_)) if s != SurfaceId::S0 => {
            alpha_polytope(s, AlphaMode::MonteCarlo { samples: opts.samples.max(10_000), seed: opts.seed })?
        }
        Err(e) => return Err(e),
    };
    let theta0 = theta0(k, opts.prime_bound)?;
    let omega_inf = omega_infinity(s, opts.samples, opts.seed)?;
    let c = peyre_constant(k, alpha.value(), theta0.value, omega_inf.value)?;
    let rel = ((alpha.stderr() / alpha.value()).powi(2)
        + (theta0.tail / theta0.value).powi(2)
        + (omega_inf.stderr / omega_inf.value).powi(2))
    .sqrt();
    Ok(ConstantReport { surface: s, field_d: k.d(), alpha, theta0, omega_inf, c, c_stderr: c * rel })
}
