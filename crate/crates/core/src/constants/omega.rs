use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{chunk_rng, Estimate, CHUNK};
use crate::error::{Error, Result};
use crate::surfaces::SurfaceId;

pub const OMEGA_PREFACTOR: f64 = 12.0 / PI;

/// The five cubic forms whose squared moduli bound the region of integration.
/// For S2 the three variables are `(z₀, z₂, z₃)`.
pub fn region_forms(s: SurfaceId, z: [Complex64; 3]) -> Result<[Complex64; 5]> {
    let [a, b, c] = z;
    Ok(match s {
        SurfaceId::S1 => {
            let u = a + c;
            [a * b * u, b * b * b, b * b * u, b * c * u, a * c * u]
        }
        SurfaceId::S2 => [a * a * a, a * b * c, a * a * b, a * a * c, c * (b * b + a * c)],
        SurfaceId::S3 => {
            let u = a * b + c * c;
            [a * b * b, b * b * b, b * b * c, b * u, a * u]
        }
        SurfaceId::S4 => [a * a * a, a * b * b, a * a * b, a * a * c, a * c * c + b * b * b],
        SurfaceId::S0 => return Err(Error::Unsupported("no archimedean density for S0".into())),
    })
}

fn in_region(s: SurfaceId, z: [Complex64; 3]) -> bool {
    region_forms(s, z).is_ok_and(|f| f.iter().all(|v| v.norm_sqr() <= 1.0))
}

/// Which part of the sample space to cover: everything, or one of the two
/// equal-probability halves split by the radius of the bounded coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stratum {
    All,
    Inner,
    Outer,
}

impl Stratum {
    fn range(self) -> (f64, f64) {
        match self {
            Stratum::All => (0.0, 1.0),
            Stratum::Inner => (0.0, 0.5),
            Stratum::Outer => (0.5, 1.0),
        }
    }
}

/// `w` in the unit disk mapped to `z = w / (1 − |w|)`, with `dz / dP(w)`.
/// `w` is uniform in area, or uniform in radius when `radial` is set.
fn compactified<R: Rng>(rng: &mut R, radial: bool) -> Option<(Complex64, f64)> {
    let u = rng.gen::<f64>();
    let r = if radial { u } else { u.sqrt() };
    let q = 1.0 - r;
    if q <= 0.0 {
        return None;
    }
    let z = Complex64::from_polar(r / q, 2.0 * PI * rng.gen::<f64>());
    let density = if radial { 1.0 / (2.0 * PI * r) } else { 1.0 / PI };
    Some((z, 1.0 / (density * q * q * q)))
}

/// Each region is fibred over `(P, Q)` with `|P| ≤ 1`; exactly one form is
/// quadratic in the fibre coordinate `X`, as `a (X − x₀)² + b`.
struct Fibration {
    surface: SurfaceId,
}

impl Fibration {
    /// `(a, x₀, b)` for the quadratic form in `X`.
    fn quadratic(&self, p: Complex64, q: Complex64) -> (Complex64, Complex64, Complex64) {
        match self.surface {
            // z₀ z₂² + z₁³ with (P, Q, X) = (z₀, z₁, z₂)
            SurfaceId::S4 => (p, Complex64::new(0.0, 0.0), q * q * q),
            // z₃(z₂² + z₀z₃) with (P, Q, X) = (z₀, z₂, z₃)
            SurfaceId::S2 => (p, -q * q / (2.0 * p), -q.powi(4) / (4.0 * p)),
            // z₀(z₀z₁ + z₂²) with (P, Q, X) = (z₁, z₂, z₀)
            SurfaceId::S3 => (p, -q * q / (2.0 * p), -q.powi(4) / (4.0 * p)),
            // z₀ z₂ (z₀ + z₂) with (P, Q, X) = (z₁, z₀ + z₂, z₀)
            _ => (-q, q / 2.0, q * q * q / 4.0),
        }
    }

    fn coords(&self, p: Complex64, q: Complex64, x: Complex64) -> [Complex64; 3] {
        match self.surface {
            SurfaceId::S4 | SurfaceId::S2 => [p, q, x],
            SurfaceId::S3 => [x, p, q],
            _ => [x, p, q - x],
        }
    }
}

/// Samples `X` from the set `{|a (X − x₀)² + b| ≤ 1}`; returns `X` and
/// `dX / dP(X)`. With `u = (X − x₀)²` the set is the disk `|u + b/a| ≤ 1/|a|`,
/// and `dA(X) = dA(u) / (4|u|)` on each of two branches, so in polar
/// coordinates `(r, φ)` for `u` the measure is `dr dφ / 2` per branch pair.
fn fibre_sample<R: Rng>(rng: &mut R, a: Complex64, x0: Complex64, b: Complex64) -> Option<(Complex64, f64)> {
    let rho = 1.0 / a.norm();
    let centre = -b / a;
    let m = centre.norm();
    if !(rho.is_finite() && m.is_finite()) {
        return None;
    }
    let (psi, arc) = if m <= rho {
        (PI * (2.0 * rng.gen::<f64>() - 1.0), 2.0 * PI)
    } else {
        let half = (rho / m).asin();
        (half * (2.0 * rng.gen::<f64>() - 1.0), 2.0 * half)
    };
    let disc = (rho * rho - m * m * psi.sin().powi(2)).max(0.0).sqrt();
    let hi = m * psi.cos() + disc;
    let lo = (m * psi.cos() - disc).max(0.0);
    let len = hi - lo;
    if len <= 0.0 {
        return None;
    }
    let r = lo + len * rng.gen::<f64>();
    let u = Complex64::from_polar(r, centre.arg() + psi);
    let root = u.sqrt();
    let x = if rng.gen::<bool>() { x0 + root } else { x0 - root };
    Some((x, arc * len / 2.0))
}

/// `ω_∞ = (12/π) vol{z ∈ ℂ³ : |f_j(z)| ≤ 1}` by Monte Carlo. The bounded
/// coordinate is sampled with uniform radius, the unbounded one through the
/// compactifying map `w ↦ w / (1 − |w|)` with `|w|` uniform, and the fibre
/// coordinate uniformly in arc length and radius of the disk for `(X − x₀)²`.
pub fn omega_infinity_stratum(s: SurfaceId, samples: u64, seed: u64, stratum: Stratum) -> Result<Estimate> {
    region_forms(s, [Complex64::new(0.0, 0.0); 3])?;
    if samples < 100_000 {
        return Err(Error::Domain(format!("{samples} samples is below the minimum of 10⁵")));
    }
    let fib = Fibration { surface: s };
    let (lo, hi) = stratum.range();
    monte_carlo(samples, seed, |rng| {
        let r = lo + (hi - lo) * rng.gen::<f64>();
        let p = Complex64::from_polar(r, 2.0 * PI * rng.gen::<f64>());
        let jp = 2.0 * PI * r * (hi - lo);
        let (q, jq) = compactified(rng, true)?;
        let (a, x0, b) = fib.quadratic(p, q);
        let (x, jx) = fibre_sample(rng, a, x0, b)?;
        let j = jp * jq * jx;
        (j.is_finite() && in_region(s, fib.coords(p, q, x))).then_some(j)
    })
}

/// The same volume with every coordinate sampled through `w ↦ w / (1 − |w|)`.
/// Unbiased, but its variance is infinite on all four regions.
pub fn omega_infinity_polydisk(s: SurfaceId, samples: u64, seed: u64) -> Result<Estimate> {
    region_forms(s, [Complex64::new(0.0, 0.0); 3])?;
    monte_carlo(samples, seed, |rng| {
        let (z0, j0) = compactified(rng, false)?;
        let (z1, j1) = compactified(rng, false)?;
        let (z2, j2) = compactified(rng, false)?;
        let j = j0 * j1 * j2;
        (j.is_finite() && in_region(s, [z0, z1, z2])).then_some(j)
    })
}

fn monte_carlo<F>(samples: u64, seed: u64, draw: F) -> Result<Estimate>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> Option<f64> + Sync,
{
    let sums: Vec<(f64, f64)> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let n = CHUNK.min(samples - c * CHUNK);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                if let Some(v) = draw(&mut rng) {
                    s1 += v;
                    s2 += v * v;
                }
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = sums.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples as f64;
    let mean = s1 / n;
    let var = (s2 / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(Estimate { value: OMEGA_PREFACTOR * mean, stderr: OMEGA_PREFACTOR * (var / n).sqrt(), samples, seed })
}

pub fn omega_infinity(s: SurfaceId, samples: u64, seed: u64) -> Result<Estimate> {
    omega_infinity_stratum(s, samples, seed, Stratum::All)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_inside() {
        for s in SurfaceId::COUNTED {
            assert!(in_region(s, [Complex64::new(0.1, 0.0); 3]));
            assert!(!in_region(s, [Complex64::new(2.0, 0.0); 3]));
        }
    }

    #[test]
    fn positive_and_deterministic() {
        let a = omega_infinity(SurfaceId::S4, 100_000, 3).unwrap();
        let b = omega_infinity(SurfaceId::S4, 100_000, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.value > 0.0 && a.stderr > 0.0);
        assert!(omega_infinity(SurfaceId::S4, 10, 3).is_err());
    }
}
