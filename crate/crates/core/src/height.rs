//! Weil height on ℙ⁴(K) and projective normalisation.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qfield::{Element, FieldCtx, FieldElem, Ideal};

/// A point `(x₀ : … : x₄)` of ℙ⁴(K), stored with integral coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: [Element; 5],
    content: Ideal,
    height: Ratio<i128>,
}

/// Normalised representative: the first nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointKey(pub [FieldElem; 5]);

impl fmt::Display for PointKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(" : "))
    }
}

impl ProjPoint {
    /// Clears denominators and caches the content ideal and height.
    pub fn new(k: &FieldCtx, coords: [FieldElem; 5]) -> Result<ProjPoint> {
        if coords.iter().all(|x| x.is_zero()) {
            return Err(Error::Domain("all coordinates are zero".into()));
        }
        let l = coords.iter().fold(1i128, |l, x| l.lcm(&x.den));
        let ints = coords.map(|x| x.num.scale(l / x.den));
        Ok(ProjPoint::from_integral(k, ints))
    }

    pub fn from_elements(k: &FieldCtx, coords: [Element; 5]) -> Result<ProjPoint> {
        if coords.iter().all(|x| x.is_zero()) {
            return Err(Error::Domain("all coordinates are zero".into()));
        }
        Ok(ProjPoint::from_integral(k, coords))
    }

    fn from_integral(k: &FieldCtx, coords: [Element; 5]) -> ProjPoint {
        let content = Ideal::from_generators(k, &coords);
        let maxn = coords.iter().map(|&x| k.norm(x)).max().unwrap_or(0);
        let height = Ratio::new(maxn, content.norm());
        ProjPoint { coords, content, height }
    }

    pub fn coords(&self) -> &[Element; 5] {
        &self.coords
    }

    pub fn content(&self) -> &Ideal {
        &self.content
    }

    pub fn height(&self) -> Ratio<i128> {
        self.height
    }

    pub fn key(&self, k: &FieldCtx) -> PointKey {
        canonical_key_of(k, &self.coords)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(" : "))
    }
}

pub fn content_ideal(p: &ProjPoint) -> Ideal {
    p.content
}

pub fn weil_height(p: &ProjPoint) -> Ratio<i128> {
    p.height
}

pub fn canonical_key(k: &FieldCtx, p: &ProjPoint) -> PointKey {
    p.key(k)
}

/// Key of a nonzero coordinate vector; equal keys iff proportional over K.
pub fn canonical_key_of(k: &FieldCtx, coords: &[Element; 5]) -> PointKey {
    let lead = coords.iter().copied().find(|x| !x.is_zero()).expect("nonzero point");
    // x / lead = x · conj(lead) / N(lead)
    let cl = k.conj(lead);
    let nl = k.norm(lead);
    PointKey(coords.map(|x| FieldElem::new(k.mul(x, cl), nl)))
}

/// Height of a nonzero integral coordinate vector.
pub fn height_of(k: &FieldCtx, coords: &[Element; 5]) -> Ratio<i128> {
    let content = Ideal::from_generators(k, coords);
    let maxn = coords.iter().map(|&x| k.norm(x)).max().unwrap_or(0);
    Ratio::new(maxn, content.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(k: &FieldCtx, v: [(i128, i128); 5]) -> ProjPoint {
        ProjPoint::from_elements(k, v.map(|(a, b)| Element::new(a, b))).unwrap()
    }

    #[test]
    fn content_examples() {
        let k = FieldCtx::new(-1).unwrap();
        assert!(content_ideal(&pt(&k, [(1, 1), (1, 0), (0, 0), (0, 0), (0, 0)])).is_unit());
        assert_eq!(weil_height(&pt(&k, [(1, 1), (1, 0), (0, 0), (0, 0), (0, 0)])), Ratio::from_integer(2));
        let p = pt(&k, [(2, 0), (0, 2), (0, 0), (0, 0), (0, 0)]);
        assert_eq!(content_ideal(&p), Ideal::principal(&k, Element::from_int(2)));
        assert_eq!(p.height(), Ratio::from_integer(1));
        let k5 = FieldCtx::new(-5).unwrap();
        let p = pt(&k5, [(2, 0), (1, 1), (0, 0), (0, 0), (0, 0)]);
        assert_eq!(content_ideal(&p).norm(), 2);
        assert_eq!(weil_height(&p), Ratio::from_integer(3));
    }

    #[test]
    fn keys() {
        let k = FieldCtx::new(-1).unwrap();
        let a = pt(&k, [(2, 0), (0, 0), (0, 0), (0, 0), (2, 0)]);
        let b = pt(&k, [(1, 0), (0, 0), (0, 0), (0, 0), (1, 0)]);
        assert_eq!(a.key(&k), b.key(&k));
        let a = pt(&k, [(0, 1), (1, 0), (0, 0), (0, 0), (0, 0)]);
        let b = pt(&k, [(1, 0), (0, -1), (0, 0), (0, 0), (0, 0)]);
        assert_eq!(a.key(&k), b.key(&k));
        let a = pt(&k, [(1, 0), (1, 0), (1, 0), (-2, 0), (-2, 0)]);
        let b = pt(&k, [(1, 0), (1, 0), (1, 0), (2, 0), (2, 0)]);
        assert_ne!(a.key(&k), b.key(&k));
        assert_eq!(pt(&k, [(1, 0), (0, 0), (0, 0), (0, 0), (0, 0)]).height(), Ratio::from_integer(1));
    }

    #[test]
    fn rejects_zero_point() {
        let k = FieldCtx::new(-1).unwrap();
        assert!(ProjPoint::new(&k, [FieldElem::ZERO; 5]).is_err());
    }
}
