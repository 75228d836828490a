use serde::Serialize;

use crate::error::{Error, Result};
use crate::qfield::primes::{kronecker, primes_up_to};
use crate::qfield::FieldCtx;

/// `sup_{0 < x ≤ 1/2} −log f(x) / x²` is below this, where `f` is the Euler factor.
pub const TAIL_CONSTANT: f64 = 21.0;

/// The Euler factor `(1 − x)⁶ (1 + 6x + x²)` at `x = 1/N𝔭`.
pub fn euler_factor(x: f64) -> f64 {
    (1.0 - x).powi(6) * (1.0 + 6.0 * x + x * x)
}

fn log_euler_factor(x: f64) -> f64 {
    6.0 * (-x).ln_1p() + (6.0 * x + x * x).ln_1p()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Theta0 {
    pub value: f64,
    pub prime_bound: u64,
    /// Upper bound for `|θ₀ − value|`.
    pub tail: f64,
    pub prime_ideals: u64,
}

/// Bound on `Σ_{N𝔭 > P} N𝔭⁻²`: at most two ideals of norm `p` and one of norm
/// `p²` lie over each `p`.
fn tail_sum_bound(p: u64) -> f64 {
    let pf = p as f64;
    let r = pf.sqrt().floor();
    // Σ_{n>P} n⁻² < 1/P and Σ_{n>√P} n⁻⁴ < 1/(3 ⌊√P⌋³)
    2.0 / pf + 1.0 / (3.0 * r * r * r)
}

/// `θ₀` truncated to prime ideals of norm `≤ P`, with an explicit tail bound.
pub fn theta0(k: &FieldCtx, prime_bound: u64) -> Result<Theta0> {
    if prime_bound < 2 {
        return Err(Error::Domain(format!("prime bound {prime_bound} is below 2")));
    }
    let disc = k.disc();
    let mut terms = Vec::new();
    for p in primes_up_to(prime_bound) {
        let x = 1.0 / p as f64;
        match kronecker(disc, p) {
            1 => {
                terms.push(log_euler_factor(x));
                terms.push(log_euler_factor(x));
            }
            0 => terms.push(log_euler_factor(x)),
            _ => {
                if p.checked_mul(p).is_some_and(|q| q <= prime_bound) {
                    terms.push(log_euler_factor(x * x));
                }
            }
        }
    }
    // smallest terms first keeps the rounding error near one ulp of the result
    let log_sum: f64 = terms.iter().rev().fold((0.0f64, 0.0f64), |(s, c), &t| {
        let y = t - c;
        let u = s + y;
        (u, (u - s) - y)
    }).0;
    let value = log_sum.exp();
    let t = TAIL_CONSTANT * tail_sum_bound(prime_bound);
    Ok(Theta0 { value, prime_bound, tail: value * (1.0 - (-t).exp()), prime_ideals: terms.len() as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_constant_dominates() {
        let mut x = 1e-6;
        while x <= 0.5 {
            assert!(-log_euler_factor(x) <= TAIL_CONSTANT * x * x, "x={x}");
            assert!(euler_factor(x) > 0.0 && euler_factor(x) < 1.0);
            x *= 1.001;
        }
    }

    #[test]
    fn single_factor_values() {
        let k = FieldCtx::new(-1).unwrap();
        assert!((theta0(&k, 2).unwrap().value - 17.0 / 256.0).abs() < 1e-15);
        let k = FieldCtx::new(-3).unwrap();
        assert!((theta0(&k, 3).unwrap().value - 1792.0 / 6561.0).abs() < 1e-15);
        // 2 is inert in ℚ(√−3), so no prime ideal has norm ≤ 2
        let k = FieldCtx::new(-3).unwrap();
        assert_eq!(theta0(&k, 2).unwrap().value, 1.0);
    }
}
