use std::f64::consts::PI;

use proptest::prelude::*;

use quartic_core::constants::{
    alpha_polytope, constant_report, euler_factor, omega_infinity, omega_infinity_stratum, peyre_constant, theta0,
    AlphaMode, AlphaPolytope, AlphaValue, ConstantOptions, Stratum,
};
use quartic_core::qfield::prime_ideals_up_to;
use quartic_core::{FieldCtx, SurfaceId};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn theta0_is_positive_and_non_increasing(d in prop::sample::select(vec![-1i64, -2, -3, -5, -7, -11, -23]), p in 2u64..3000, extra in 0u64..3000) {
        let k = FieldCtx::new(d).unwrap();
        let a = theta0(&k, p).unwrap();
        let b = theta0(&k, p + extra).unwrap();
        prop_assert!(b.value > 0.0);
        prop_assert!(b.value <= a.value);
        prop_assert!(a.value - b.value <= a.tail);
    }
}

#[test]
fn theta0_equals_the_product_over_listed_ideals() {
    for d in [-1, -5, -15] {
        let k = FieldCtx::new(d).unwrap();
        let ideals = prime_ideals_up_to(&k, 500);
        let direct: f64 = ideals.iter().map(|p| euler_factor(1.0 / p.norm as f64)).product();
        let t = theta0(&k, 500).unwrap();
        assert_eq!(t.prime_ideals as usize, ideals.len());
        assert!((t.value - direct).abs() < 1e-13, "d={d}");
    }
}

#[test]
fn theta0_settles_by_one_hundred_thousand() {
    for d in [-1, -2, -3, -7, -11] {
        let k = FieldCtx::new(d).unwrap();
        let a = theta0(&k, 100_000).unwrap();
        let b = theta0(&k, 200_000).unwrap();
        let change = (a.value - b.value).abs();
        assert!(change < 1e-5 && a.tail > change, "d={d}");
    }
}

#[test]
fn exact_alpha_matches_stated_values() {
    for s in [SurfaceId::S3, SurfaceId::S4] {
        let want = AlphaPolytope::get(s).unwrap().expected();
        assert_eq!(alpha_polytope(s, AlphaMode::ExactSimplex).unwrap(), AlphaValue::Exact(want));
    }
}

#[test]
fn monte_carlo_alpha_within_five_sigma() {
    for s in SurfaceId::COUNTED {
        let want = AlphaPolytope::get(s).unwrap().expected();
        let want = *want.numer() as f64 / *want.denom() as f64;
        let got = alpha_polytope(s, AlphaMode::MonteCarlo { samples: 10_000_000, seed: 11 }).unwrap();
        assert!((got.value() - want).abs() < 5.0 * got.stderr(), "{s}: {} vs {want}", got.value());
        assert!((got.value() - want).abs() < 0.02 * want);
    }
}

#[test]
fn omega_strata_sum_to_the_total() {
    for s in SurfaceId::COUNTED {
        let all = omega_infinity_stratum(s, 1_000_000, 5, Stratum::All).unwrap();
        let inner = omega_infinity_stratum(s, 1_000_000, 6, Stratum::Inner).unwrap();
        let outer = omega_infinity_stratum(s, 1_000_000, 7, Stratum::Outer).unwrap();
        let sum = inner.value + outer.value;
        let se = (all.stderr.powi(2) + inner.stderr.powi(2) + outer.stderr.powi(2)).sqrt();
        assert!((sum - all.value).abs() < 3.0 * se, "{s}: {} vs {}", sum, all.value);
    }
}

#[test]
fn omega_two_seeds_agree() {
    let a = omega_infinity(SurfaceId::S4, 10_000_000, 1).unwrap();
    let b = omega_infinity(SurfaceId::S4, 10_000_000, 2).unwrap();
    assert!((a.value - b.value).abs() < 3.0 * a.stderr.hypot(b.stderr));
}

#[test]
fn omega_error_halves_with_four_times_the_samples() {
    let a = omega_infinity(SurfaceId::S1, 1_000_000, 4).unwrap();
    let b = omega_infinity(SurfaceId::S1, 4_000_000, 4).unwrap();
    let ratio = b.stderr / a.stderr;
    assert!((ratio - 0.5).abs() <= 0.1, "{ratio}");
}

#[test]
fn recomposed_constant() {
    let k = FieldCtx::new(-3).unwrap();
    let c = peyre_constant(&k, 1.0, 1.0, 1.0).unwrap();
    let want = (2.0 * PI).powi(6) / (81.0 * 6f64.powi(6));
    assert!((c - want).abs() < 1e-12);
    let r = constant_report(&k, SurfaceId::S4, ConstantOptions { prime_bound: 1000, samples: 200_000, seed: 9 }).unwrap();
    let again = peyre_constant(&k, r.alpha.value(), r.theta0.value, r.omega_inf.value).unwrap();
    assert_eq!(r.c, again);
    assert!(r.c_stderr > 0.0 && r.c_stderr < r.c);
}
