use proptest::prelude::*;

use quartic_core::surfaces::{in_u_coords, lines, psi_coords, Line};
use quartic_core::{Element, FieldCtx, SurfaceId, SurfaceSpec};

fn e(v: [i128; 5]) -> [Element; 5] {
    v.map(Element::from_int)
}

fn elem() -> impl Strategy<Value = Element> {
    (-50i128..=50, -50i128..=50).prop_map(|(a, b)| Element::new(a, b))
}

proptest! {
    #[test]
    fn quadrics_vanish_on_psi(s in prop::sample::select(SurfaceId::COUNTED.to_vec()),
                              d in prop::sample::select(vec![-1i64, -2, -3, -5, -7, -11]),
                              y in prop::array::uniform3(elem())) {
        let k = FieldCtx::new(d).unwrap();
        let x = psi_coords(&k, s, y).unwrap();
        let spec = SurfaceSpec::get(s);
        prop_assert!(spec.on_surface_coords(&k, &x));
    }
}

#[test]
fn line_counts() {
    for (s, n) in [(SurfaceId::S1, 3), (SurfaceId::S2, 3), (SurfaceId::S3, 2), (SurfaceId::S4, 1)] {
        assert_eq!(lines(s).len(), n, "{s}");
        assert!(lines(s).iter().all(|l| l.lies_on(s)));
    }
}

#[test]
fn coordinate_line_on_s1_and_s4() {
    let k = FieldCtx::new(-1).unwrap();
    let want = Line::through(&k, &e([0, 1, 0, 0, 0]), &e([0, 0, 0, 0, 1])).unwrap();
    assert!(lines(SurfaceId::S4).contains(&want));
    assert!(lines(SurfaceId::S1).contains(&want));
}

#[test]
fn membership_in_u() {
    assert!(!in_u_coords(SurfaceId::S4, &e([0, 1, 0, 0, 0])));
    assert!(in_u_coords(SurfaceId::S2, &e([1, 1, 1, 1, -2])));
    assert!(in_u_coords(SurfaceId::S1, &e([1, 1, 1, -2, -2])));
}
