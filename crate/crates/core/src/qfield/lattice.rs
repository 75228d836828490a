use num_rational::Ratio;

use super::element::Element;
use super::field::FieldCtx;

/// Gram data of the norm form on the lattice `ℤv1 + ℤv2`:
/// `N(x·v1 + y·v2) = A x² + B xy + C y²`.
fn gram(k: &FieldCtx, v1: Element, v2: Element) -> (i128, i128, i128) {
    let a = k.norm(v1);
    let c = k.norm(v2);
    let b = k.norm(v1 + v2) - a - c;
    (a, b, c)
}

/// Lagrange–Gauss reduction; the result has `N(v1) ≤ N(v2)` and `|B| ≤ N(v1)`.
pub fn gauss_reduce(k: &FieldCtx, mut v1: Element, mut v2: Element) -> (Element, Element) {
    if k.norm(v1) > k.norm(v2) {
        std::mem::swap(&mut v1, &mut v2);
    }
    loop {
        let (a, b, _) = gram(k, v1, v2);
        // nearest integer to B / 2A
        let m = (b + a).div_euclid(2 * a);
        if m != 0 {
            v2 = v2 - v1.scale(m);
        }
        if k.norm(v2) < k.norm(v1) {
            std::mem::swap(&mut v1, &mut v2);
        } else {
            return (v1, v2);
        }
    }
}

/// A shortest nonzero vector of the lattice and its norm.
pub fn shortest_vector(k: &FieldCtx, v1: Element, v2: Element) -> (Element, i128) {
    let (r, _) = gauss_reduce(k, v1, v2);
    (r, k.norm(r))
}

/// Every `x ∈ ℤv1 + ℤv2` with `N(x) ≤ bound`, including zero. The basis must
/// span a rank-two lattice.
pub fn points_in_disk(k: &FieldCtx, v1: Element, v2: Element, bound: Ratio<i128>) -> Vec<Element> {
    let mut out = Vec::new();
    for_each_point_in_disk(k, v1, v2, bound, |x, _| out.push(x));
    out
}

/// Calls `f(x, N(x))` for every lattice point with `N(x) ≤ bound`.
pub fn for_each_point_in_disk(
    k: &FieldCtx,
    v1: Element,
    v2: Element,
    bound: Ratio<i128>,
    mut f: impl FnMut(Element, i128),
) {
    if bound < Ratio::from_integer(0) {
        return;
    }
    let (v1, v2) = gauss_reduce(k, v1, v2);
    let (a, b, c) = gram(k, v1, v2);
    let disc = 4 * a * c - b * b;
    assert!(disc > 0, "lattice basis is degenerate");
    let xf = *bound.numer() as f64 / *bound.denom() as f64;
    let (an, bn) = (a as f64, b as f64);
    let df = disc as f64;
    let ymax = (4.0 * an * xf / df).sqrt().floor() as i128 + 1;
    let within = |q: i128| q * *bound.denom() <= *bound.numer();
    for y in -ymax..=ymax {
        let yf = y as f64;
        let rad = 4.0 * an * xf - df * yf * yf;
        let s = if rad > 0.0 { rad.sqrt() } else { 0.0 };
        let lo = ((-bn * yf - s) / (2.0 * an)).floor() as i128 - 1;
        let hi = ((-bn * yf + s) / (2.0 * an)).ceil() as i128 + 1;
        for x in lo..=hi {
            let q = a * x * x + b * x * y + c * y * y;
            if within(q) {
                f(v1.scale(x) + v2.scale(y), q);
            }
        }
    }
}

/// Lattice points sorted by norm, with a prefix lookup for norm bounds.
#[derive(Clone, Debug, Default)]
pub struct SortedPoints {
    norms: Vec<i128>,
    elems: Vec<Element>,
}

impl SortedPoints {
    /// Nonzero points of `ℤv1 + ℤv2` with `N(x) ≤ bound`, ordered by norm then
    /// coordinates.
    pub fn new(k: &FieldCtx, v1: Element, v2: Element, bound: i128) -> Self {
        let mut pts: Vec<(i128, Element)> = Vec::new();
        for_each_point_in_disk(k, v1, v2, Ratio::from_integer(bound), |x, q| {
            if q > 0 {
                pts.push((q, x));
            }
        });
        pts.sort();
        SortedPoints { norms: pts.iter().map(|p| p.0).collect(), elems: pts.iter().map(|p| p.1).collect() }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Smallest norm present, if any.
    pub fn min_norm(&self) -> Option<i128> {
        self.norms.first().copied()
    }

    /// Points with norm `≤ bound`, as a slice of `(norms, elements)`.
    pub fn up_to(&self, bound: i128) -> (&[i128], &[Element]) {
        let n = self.norms.partition_point(|&q| q <= bound);
        (&self.norms[..n], &self.elems[..n])
    }

    pub fn up_to_f64(&self, bound: f64) -> (&[i128], &[Element]) {
        let n = self.norms.partition_point(|&q| (q as f64) <= bound);
        (&self.norms[..n], &self.elems[..n])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_matches_brute_force() {
        for d in [-1, -2, -3, -5, -23] {
            let k = FieldCtx::new(d).unwrap();
            let v1 = Element::new(3, 0);
            let v2 = Element::new(1, 1);
            for x in [0, 1, 7, 50] {
                let mut got = points_in_disk(&k, v1, v2, Ratio::from_integer(x));
                got.sort();
                let mut want = Vec::new();
                for a in -40..=40i128 {
                    for b in -40..=40i128 {
                        let e = Element::new(a, b);
                        let inside = (e.a - e.b) % 3 == 0;
                        if inside && k.norm(e) <= x {
                            want.push(e);
                        }
                    }
                }
                want.sort();
                assert_eq!(got, want, "d={d} X={x}");
            }
        }
    }

    #[test]
    fn shortest_vector_gaussian() {
        let k = FieldCtx::new(-1).unwrap();
        let (v, n) = shortest_vector(&k, Element::new(5, 0), Element::new(2, 1));
        assert_eq!(n, 5);
        assert_eq!(k.norm(v), 5);
    }

    #[test]
    fn sorted_points_prefix() {
        let k = FieldCtx::new(-1).unwrap();
        let sp = SortedPoints::new(&k, Element::ONE, Element::OMEGA, 10);
        assert_eq!(sp.min_norm(), Some(1));
        assert_eq!(sp.up_to(1).1.len(), 4);
        assert_eq!(sp.up_to(2).1.len(), 8);
        assert_eq!(sp.len(), 36);
    }
}
