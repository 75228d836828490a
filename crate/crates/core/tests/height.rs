use num_rational::Ratio;
use proptest::prelude::*;

use quartic_core::height::{canonical_key_of, height_of};
use quartic_core::{Element, FieldCtx, FieldElem, ProjPoint};

fn field() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(vec![-1i64, -2, -3, -5, -6, -7, -11, -15, -23, -47]).prop_map(|d| FieldCtx::new(d).unwrap())
}

fn elem(r: i128) -> impl Strategy<Value = Element> {
    (-r..=r, -r..=r).prop_map(|(a, b)| Element::new(a, b))
}

fn point() -> impl Strategy<Value = [Element; 5]> {
    prop::array::uniform5(elem(40)).prop_filter("nonzero", |x| x.iter().any(|v| !v.is_zero()))
}

proptest! {
    #[test]
    fn height_is_scaling_invariant(k in field(), x in point(), l in elem(30), den in 1i128..20) {
        prop_assume!(!l.is_zero());
        let h = height_of(&k, &x);
        prop_assert!(h >= Ratio::from_integer(1));
        let scaled = x.map(|v| FieldElem::new(k.mul(v, l), den));
        let p = ProjPoint::new(&k, scaled).unwrap();
        prop_assert_eq!(p.height(), h);
        prop_assert_eq!(p.key(&k), canonical_key_of(&k, &x));
    }

    #[test]
    fn keys_separate_non_proportional_points(k in field(), x in point(), y in point()) {
        // proportional iff every 2x2 minor vanishes
        let proportional = (0..5).all(|i| (0..5).all(|j| (k.mul(x[i], y[j]) - k.mul(x[j], y[i])).is_zero()));
        prop_assert_eq!(canonical_key_of(&k, &x) == canonical_key_of(&k, &y), proportional);
    }

    #[test]
    fn height_bounds_from_coordinates(k in field(), x in point()) {
        let h = height_of(&k, &x);
        let maxn = x.iter().map(|&v| k.norm(v)).max().unwrap();
        prop_assert!(h <= Ratio::from_integer(maxn));
    }
}

#[test]
fn stated_heights() {
    let k = FieldCtx::new(-1).unwrap();
    let p = ProjPoint::from_elements(&k, [Element::new(1, 1), Element::ONE, Element::ZERO, Element::ZERO, Element::ZERO]).unwrap();
    assert_eq!(p.height(), Ratio::from_integer(2));
    let k = FieldCtx::new(-5).unwrap();
    let p = ProjPoint::from_elements(&k, [Element::from_int(2), Element::new(1, 1), Element::ZERO, Element::ZERO, Element::ZERO]).unwrap();
    assert_eq!(p.content().norm(), 2);
    assert_eq!(p.height(), Ratio::from_integer(3));
}
