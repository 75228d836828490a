use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::element::{Element, FieldElem};
use super::field::FieldCtx;
use super::lattice;
use crate::error::{Error, Result};

/// An integral ideal of `𝒪_K` as the lattice `a·ℤ + (b + c·ω)·ℤ` in Hermite
/// normal form: `c | a`, `c | b`, `0 ≤ b < a`. The zero ideal is `(0, 0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ideal {
    a: i128,
    b: i128,
    c: i128,
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// Hermite normal form of the ℤ-span of `vecs` (coordinates in the basis `1, ω`).
/// Returns `None` when the span has rank one.
fn hnf(vecs: impl IntoIterator<Item = Element>) -> Option<(i128, i128, i128)> {
    // pivot holds the vector whose ω-coordinate is the running gcd
    let mut pivot: Option<Element> = None;
    let mut xg: i128 = 0;
    for v in vecs {
        if v.b == 0 {
            xg = xg.gcd(&v.a);
            continue;
        }
        match pivot {
            None => pivot = Some(v),
            Some(p) => {
                let eg = p.b.extended_gcd(&v.b);
                let (g, s, t) = (eg.gcd, eg.x, eg.y);
                let np = Element::new(s * p.a + t * v.a, g);
                let rest = (v.b / g) * p.a - (p.b / g) * v.a;
                xg = xg.gcd(&rest);
                pivot = Some(np);
            }
        }
        if let (Some(p), true) = (pivot.as_mut(), xg > 0) {
            p.a = p.a.rem_euclid(xg);
        }
    }
    match pivot {
        None if xg == 0 => Some((0, 0, 0)),
        None => None,
        Some(_) if xg == 0 => None,
        Some(p) => {
            let (c, bx) = if p.b < 0 { (-p.b, -p.a) } else { (p.b, p.a) };
            Some((xg, bx.rem_euclid(xg), c))
        }
    }
}

impl Ideal {
    pub const ZERO: Ideal = Ideal { a: 0, b: 0, c: 0 };
    pub const UNIT: Ideal = Ideal { a: 1, b: 0, c: 1 };

    /// Builds an ideal from an HNF triple, checking the normal-form conditions
    /// and closure under multiplication by `ω`.
    pub fn from_hnf(k: &FieldCtx, a: i128, b: i128, c: i128) -> Result<Ideal> {
        if (a, b, c) == (0, 0, 0) {
            return Ok(Ideal::ZERO);
        }
        if a <= 0 || c <= 0 || a % c != 0 || b % c != 0 || !(0..a).contains(&b) {
            return Err(Error::Domain(format!("({a}, {b}, {c}) is not in Hermite normal form")));
        }
        let i = Ideal { a, b, c };
        let closed = i.z_basis().iter().all(|&v| i.contains(k.mul(v, Element::OMEGA)));
        if !closed {
            return Err(Error::Domain(format!("({a}, {b}, {c}) is not an ideal")));
        }
        Ok(i)
    }

    pub(crate) fn from_z_span(vecs: impl IntoIterator<Item = Element>) -> Ideal {
        let (a, b, c) = hnf(vecs).expect("ideal lattices have full rank");
        Ideal { a, b, c }
    }

    /// The ideal generated over `𝒪_K` by `gens`; order independent.
    pub fn from_generators(k: &FieldCtx, gens: &[Element]) -> Ideal {
        Ideal::from_z_span(gens.iter().flat_map(|&g| [g, k.mul(g, Element::OMEGA)]))
    }

    pub fn principal(k: &FieldCtx, g: Element) -> Ideal {
        Ideal::from_generators(k, &[g])
    }

    pub fn hnf(&self) -> (i128, i128, i128) {
        (self.a, self.b, self.c)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0
    }

    pub fn is_unit(&self) -> bool {
        *self == Ideal::UNIT
    }

    /// Lattice index `[𝒪_K : I]`.
    pub fn norm(&self) -> i128 {
        self.a * self.c
    }

    pub fn z_basis(&self) -> [Element; 2] {
        [Element::new(self.a, 0), Element::new(self.b, self.c)]
    }

    pub fn contains(&self, x: Element) -> bool {
        if self.is_zero() {
            return x.is_zero();
        }
        if x.b % self.c != 0 {
            return false;
        }
        (x.a - (x.b / self.c) * self.b) % self.a == 0
    }

    pub fn mul(&self, k: &FieldCtx, o: &Ideal) -> Ideal {
        if self.is_zero() || o.is_zero() {
            return Ideal::ZERO;
        }
        let [u0, u1] = self.z_basis();
        let [v0, v1] = o.z_basis();
        Ideal::from_z_span([k.mul(u0, v0), k.mul(u0, v1), k.mul(u1, v0), k.mul(u1, v1)])
    }

    pub fn pow(&self, k: &FieldCtx, e: u32) -> Ideal {
        (0..e).fold(Ideal::UNIT, |acc, _| acc.mul(k, self))
    }

    /// `I + J`, the gcd of the two ideals.
    pub fn sum(&self, o: &Ideal) -> Ideal {
        let [u0, u1] = self.z_basis();
        let [v0, v1] = o.z_basis();
        Ideal::from_z_span([u0, u1, v0, v1])
    }

    pub fn is_coprime_to(&self, o: &Ideal) -> bool {
        if self.is_zero() {
            return o.is_unit();
        }
        if o.is_zero() {
            return self.is_unit();
        }
        if self.norm().gcd(&o.norm()) == 1 {
            return true;
        }
        self.sum(o).is_unit()
    }

    pub fn conj(&self, k: &FieldCtx) -> Ideal {
        let [u0, u1] = self.z_basis();
        Ideal::from_z_span([k.conj(u0), k.conj(u1)])
    }

    pub fn scale(&self, m: i128) -> Ideal {
        if m == 0 {
            return Ideal::ZERO;
        }
        let m = m.abs();
        Ideal { a: self.a * m, b: self.b * m, c: self.c * m }
    }

    /// Largest integer `m` with `I ⊆ m·𝒪_K`.
    pub fn content(&self) -> i128 {
        self.c
    }

    /// `I ⊆ J`.
    pub fn is_subset_of(&self, o: &Ideal) -> bool {
        self.z_basis().iter().all(|&v| o.contains(v))
    }

    /// A nonzero element of smallest norm.
    pub fn min_element(&self, k: &FieldCtx) -> Result<(Element, i128)> {
        if self.is_zero() {
            return Err(Error::Domain("minimum of the zero ideal".into()));
        }
        let [v0, v1] = self.z_basis();
        Ok(lattice::shortest_vector(k, v0, v1))
    }

    pub fn is_principal(&self, k: &FieldCtx) -> Result<bool> {
        let (_, m) = self.min_element(k)?;
        Ok(m == self.norm())
    }

    /// A generator when the ideal is principal.
    pub fn generator(&self, k: &FieldCtx) -> Result<Option<Element>> {
        let (g, m) = self.min_element(k)?;
        Ok((m == self.norm()).then_some(g))
    }

    /// Index into `k.class_reps()` of the class containing `I`.
    pub fn class_index(&self, k: &FieldCtx) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::Domain("class of the zero ideal".into()));
        }
        for (i, r) in k.class_reps().iter().enumerate() {
            if self.mul(k, &r.conj(k)).is_principal(k)? {
                return Ok(i);
            }
        }
        Err(Error::Consistency(format!("ideal {self} matches no class representative")))
    }

    pub fn lattice_points(&self, k: &FieldCtx, bound: Ratio<i128>) -> Vec<Element> {
        if self.is_zero() {
            return vec![Element::ZERO];
        }
        let [v0, v1] = self.z_basis();
        lattice::points_in_disk(k, v0, v1, bound)
    }
}

/// A fractional ideal `num / den` with `den > 0` minimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FracIdeal {
    num: Ideal,
    den: i128,
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl From<Ideal> for FracIdeal {
    fn from(i: Ideal) -> Self {
        FracIdeal { num: i, den: 1 }
    }
}

impl FracIdeal {
    pub const UNIT: FracIdeal = FracIdeal { num: Ideal::UNIT, den: 1 };

    pub fn new(num: Ideal, den: i128) -> FracIdeal {
        assert!(den > 0, "fractional ideal denominator must be positive");
        if num.is_zero() {
            return FracIdeal { num, den: 1 };
        }
        let g = num.content().gcd(&den);
        if g == 1 {
            FracIdeal { num, den }
        } else {
            let (a, b, c) = num.hnf();
            FracIdeal { num: Ideal { a: a / g, b: b / g, c: c / g }, den: den / g }
        }
    }

    pub fn principal(k: &FieldCtx, x: FieldElem) -> FracIdeal {
        FracIdeal::new(Ideal::principal(k, x.num), x.den)
    }

    pub fn numerator(&self) -> &Ideal {
        &self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    /// The integral ideal, if `den = 1`.
    pub fn as_integral(&self) -> Option<Ideal> {
        self.is_integral().then_some(self.num)
    }

    pub fn norm(&self) -> Ratio<i128> {
        Ratio::new(self.num.norm(), self.den * self.den)
    }

    pub fn mul(&self, k: &FieldCtx, o: &FracIdeal) -> FracIdeal {
        FracIdeal::new(self.num.mul(k, &o.num), self.den * o.den)
    }

    pub fn inverse(&self, k: &FieldCtx) -> Result<FracIdeal> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of the zero ideal".into()));
        }
        Ok(FracIdeal::new(self.num.conj(k).scale(self.den), self.num.norm()))
    }

    pub fn pow(&self, k: &FieldCtx, e: i32) -> Result<FracIdeal> {
        let base = if e < 0 { self.inverse(k)? } else { *self };
        Ok((0..e.unsigned_abs()).fold(FracIdeal::UNIT, |acc, _| acc.mul(k, &base)))
    }

    pub fn sum(&self, o: &FracIdeal) -> FracIdeal {
        let l = self.den.lcm(&o.den);
        FracIdeal::new(self.num.scale(l / self.den).sum(&o.num.scale(l / o.den)), l)
    }

    pub fn contains(&self, x: FieldElem) -> bool {
        // x = α/δ ∈ num/den  ⇔  α·den/δ ∈ num
        let scaled = x.num.scale(self.den);
        if !scaled.is_divisible_by(x.den) {
            return false;
        }
        self.num.contains(scaled.div_exact(x.den))
    }

    pub fn min_element(&self, k: &FieldCtx) -> Result<(FieldElem, Ratio<i128>)> {
        let (g, m) = self.num.min_element(k)?;
        Ok((FieldElem::new(g, self.den), Ratio::new(m, self.den * self.den)))
    }

    pub fn is_principal(&self, k: &FieldCtx) -> Result<bool> {
        self.num.is_principal(k)
    }

    pub fn class_index(&self, k: &FieldCtx) -> Result<usize> {
        self.num.class_index(k)
    }

    /// All `v ∈ self` with `|v| ≤ bound`.
    pub fn lattice_points(&self, k: &FieldCtx, bound: Ratio<i128>) -> Vec<FieldElem> {
        let scaled = bound * Ratio::from_integer(self.den * self.den);
        self.num
            .lattice_points(k, scaled)
            .into_iter()
            .map(|v| FieldElem::new(v, self.den))
            .collect()
    }
}
