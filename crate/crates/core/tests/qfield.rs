use num_rational::Ratio;
use proptest::prelude::*;

use quartic_core::qfield::lattice::points_in_disk;
use quartic_core::qfield::primes::{factor, primes_above, primes_up_to};
use quartic_core::{Element, FieldCtx, Ideal};

const FIELDS: [i64; 9] = [-1, -2, -3, -5, -6, -7, -11, -15, -23];

fn field() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(FIELDS.to_vec()).prop_map(|d| FieldCtx::new(d).unwrap())
}

fn elem(r: i128) -> impl Strategy<Value = Element> {
    (-r..=r, -r..=r).prop_map(|(a, b)| Element::new(a, b))
}

fn nonzero(r: i128) -> impl Strategy<Value = Element> {
    elem(r).prop_filter("nonzero", |x| !x.is_zero())
}

fn ideal_gens() -> impl Strategy<Value = Vec<Element>> {
    prop::collection::vec(nonzero(30), 1..4)
}

proptest! {
    #[test]
    fn norm_is_multiplicative(k in field(), x in elem(1000), y in elem(1000)) {
        prop_assert_eq!(k.norm(k.mul(x, y)), k.norm(x) * k.norm(y));
    }

    #[test]
    fn ideal_norm_is_multiplicative(k in field(), g in ideal_gens(), h in ideal_gens()) {
        let i = Ideal::from_generators(&k, &g);
        let j = Ideal::from_generators(&k, &h);
        prop_assert_eq!(i.mul(&k, &j).norm(), i.norm() * j.norm());
    }

    #[test]
    fn generators_permuted_or_unit_scaled(k in field(), g in ideal_gens(), rot in 0usize..4, u in 0usize..6, slot in 0usize..4) {
        let i = Ideal::from_generators(&k, &g);
        let mut p = g.clone();
        p.rotate_left(rot % g.len());
        p.reverse();
        prop_assert_eq!(Ideal::from_generators(&k, &p), i);
        let units = k.units();
        let n = slot % g.len();
        p[n] = k.mul(p[n], units[u % units.len()]);
        prop_assert_eq!(Ideal::from_generators(&k, &p), i);
    }

    #[test]
    fn disk_points_match_box_scan(k in field(), g in ideal_gens(), x in 0i128..120) {
        let i = Ideal::from_generators(&k, &g);
        prop_assume!(i.norm() <= 60);
        let mut got = i.lattice_points(&k, Ratio::from_integer(x));
        got.sort();
        // |b| ≤ √X and |a| ≤ √X + |b| in the basis {1, ω}
        let r = 2 * ((x as f64).sqrt().ceil() as i128) + 2;
        let mut want = Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                let e = Element::new(a, b);
                if k.norm(e) <= x && i.contains(e) {
                    want.push(e);
                }
            }
        }
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn fractional_bounds_in_disk(k in field(), num in 0i128..200, den in 1i128..7) {
        let b = Ratio::new(num, den);
        let got = points_in_disk(&k, Element::ONE, Element::OMEGA, b);
        let r = 2 * ((num as f64).sqrt().ceil() as i128) + 2;
        let mut want = 0;
        for a in -r..=r {
            for c in -r..=r {
                want += (Ratio::from_integer(k.norm(Element::new(a, c))) <= b) as usize;
            }
        }
        prop_assert_eq!(got.len(), want);
    }
}

#[test]
fn primes_above_multiply_to_p_squared() {
    for d in FIELDS {
        let k = FieldCtx::new(d).unwrap();
        for p in primes_up_to(200) {
            let ps = primes_above(&k, p);
            let ramified = ps.len() == 1 && ps[0].1 == p;
            let prod: u64 = ps.iter().map(|(i, n)| {
                assert_eq!(i.norm() as u64, *n);
                n.pow(1 + ramified as u32)
            }).product();
            assert_eq!(prod, p * p, "d={d} p={p}");
        }
    }
}

#[test]
fn every_small_ideal_is_its_factorisation() {
    for d in FIELDS {
        let k = FieldCtx::new(d).unwrap();
        let mut seen = 0;
        for a in 1..=100i128 {
            for c in 1..=100 / a {
                for b in 0..a {
                    let Ok(i) = Ideal::from_hnf(&k, a, b, c) else { continue };
                    seen += 1;
                    let f = factor(&k, &i);
                    let prod = f.iter().fold(Ideal::UNIT, |acc, (p, e)| acc.mul(&k, &p.pow(&k, *e)));
                    assert_eq!(prod, i, "d={d} {i}");
                    assert!(f.iter().all(|(p, _)| primes_above(&k, factor_prime(p)).iter().any(|(q, _)| q == p)));
                }
            }
        }
        assert!(seen > 50, "d={d}");
    }
}

fn factor_prime(p: &Ideal) -> u64 {
    let n = p.norm() as u64;
    (2..=n).find(|q| n % q == 0).unwrap()
}

#[test]
fn stated_ideal_examples() {
    let k = FieldCtx::new(-1).unwrap();
    let i = Ideal::from_generators(&k, &[Element::from_int(2), Element::new(1, 1)]);
    assert_eq!(i, Ideal::principal(&k, Element::new(1, 1)));
    assert_eq!(i.norm(), 2);
    let k = FieldCtx::new(-5).unwrap();
    // ω = √−5 here
    let p = Ideal::from_generators(&k, &[Element::from_int(2), Element::new(1, 1)]);
    assert_eq!(p.norm(), 2);
    assert!(!p.is_principal(&k).unwrap());
    assert_eq!(p.mul(&k, &p), Ideal::principal(&k, Element::from_int(2)));
    assert_eq!(k.class_number(), 2);
}
