use num_rational::Ratio;

use super::element::{Element, FieldElem};
use super::ideal::Ideal;
use super::{classgroup, lattice};
use crate::error::{Error, Result};

/// Largest `|Δ_K|` accepted.
pub const MAX_ABS_DISC: i64 = 1000;

/// An imaginary quadratic field `K = ℚ(√d)` together with its ring of
/// integers `ℤ[ω]` and a fixed system of integral ideal-class representatives.
///
/// `ω = √d` when `d ≢ 1 (mod 4)` and `ω = (1+√d)/2` otherwise, so that
/// `ω² = t·ω − n` with `t = tr(ω)` and `n = N(ω)`.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    d: i64,
    disc: i64,
    t: i128,
    n: i128,
    omega_count: u32,
    units: Vec<Element>,
    class_reps: Vec<Ideal>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
    }
}

impl Eq for FieldCtx {}

/// True when all values are below `2^40` in absolute value; `|t|, |n| < 2^10`
/// then keeps every product in [`FieldCtx::mul`] and [`FieldCtx::norm`] exact.
#[inline]
fn small(vals: &[i128]) -> bool {
    vals.iter().fold(0u128, |m, v| m | v.unsigned_abs()) < 1 << 40
}

pub fn is_squarefree(mut m: i64) -> bool {
    m = m.abs();
    let mut p = 2;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

impl FieldCtx {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::InvalidField(format!("d = {d} must be negative")));
        }
        if !is_squarefree(d) {
            return Err(Error::InvalidField(format!("d = {d} is not squarefree")));
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        if disc.abs() > MAX_ABS_DISC {
            return Err(Error::InvalidField(format!(
                "|disc| = {} exceeds the supported bound {MAX_ABS_DISC}",
                disc.abs()
            )));
        }
        let (t, n) = if d.rem_euclid(4) == 1 {
            (1, (1 - d as i128) / 4)
        } else {
            (0, -(d as i128))
        };
        let omega_count = match d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        };
        let mut k = FieldCtx { d, disc, t, n, omega_count, units: Vec::new(), class_reps: Vec::new() };
        k.units = lattice::points_in_disk(&k, Element::ONE, Element::OMEGA, Ratio::from_integer(1))
            .into_iter()
            .filter(|e| !e.is_zero())
            .collect();
        k.units.sort();
        debug_assert_eq!(k.units.len() as u32, k.omega_count);
        k.class_reps = classgroup::reduced_form_ideals(&k);
        Ok(k)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn omega_count(&self) -> u32 {
        self.omega_count
    }

    pub fn class_number(&self) -> usize {
        self.class_reps.len()
    }

    pub fn class_reps(&self) -> &[Ideal] {
        &self.class_reps
    }

    pub fn units(&self) -> &[Element] {
        &self.units
    }

    /// Trace and norm of `ω`.
    pub fn omega_trace_norm(&self) -> (i128, i128) {
        (self.t, self.n)
    }

    pub fn mul(&self, x: Element, y: Element) -> Element {
        if small(&[x.a, x.b, y.a, y.b]) {
            // every product is below 2^100, so wrapping arithmetic is exact
            let be = x.b.wrapping_mul(y.b);
            return Element::new(
                x.a.wrapping_mul(y.a).wrapping_sub(be.wrapping_mul(self.n)),
                x.a.wrapping_mul(y.b).wrapping_add(x.b.wrapping_mul(y.a)).wrapping_add(be.wrapping_mul(self.t)),
            );
        }
        let be = x.b * y.b;
        Element::new(x.a * y.a - be * self.n, x.a * y.b + x.b * y.a + be * self.t)
    }

    pub fn conj(&self, x: Element) -> Element {
        Element::new(x.a + x.b * self.t, -x.b)
    }

    /// `x · conj(x)`, which is the squared complex modulus `|x|²`.
    pub fn norm(&self, x: Element) -> i128 {
        if small(&[x.a, x.b]) {
            let (a, b) = (x.a, x.b);
            return a
                .wrapping_mul(a)
                .wrapping_add(self.t.wrapping_mul(a).wrapping_mul(b))
                .wrapping_add(self.n.wrapping_mul(b).wrapping_mul(b));
        }
        x.a * x.a + self.t * x.a * x.b + self.n * x.b * x.b
    }

    pub fn pow(&self, x: Element, e: u32) -> Element {
        let mut acc = Element::ONE;
        for _ in 0..e {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// Complex embedding with `Im ω > 0`.
    pub fn embed(&self, x: Element) -> (f64, f64) {
        let s = (self.disc.unsigned_abs() as f64).sqrt();
        (x.a as f64 + x.b as f64 * self.t as f64 / 2.0, x.b as f64 * s / 2.0)
    }

    pub fn fmul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        FieldElem::new(self.mul(x.num, y.num), x.den * y.den)
    }

    pub fn finv(&self, x: FieldElem) -> Result<FieldElem> {
        if x.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let nrm = self.norm(x.num);
        Ok(FieldElem::new(self.conj(x.num).scale(x.den), nrm))
    }

    pub fn fdiv(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem> {
        Ok(self.fmul(x, self.finv(y)?))
    }

    pub fn fpow(&self, x: FieldElem, e: i32) -> Result<FieldElem> {
        let base = if e < 0 { self.finv(x)? } else { x };
        let mut acc = FieldElem::ONE;
        for _ in 0..e.unsigned_abs() {
            acc = self.fmul(acc, base);
        }
        Ok(acc)
    }

    pub fn fnorm(&self, x: FieldElem) -> Ratio<i128> {
        Ratio::new(self.norm(x.num), x.den * x.den)
    }

    /// Lexicographically smallest associate `u·x` over the units of `𝒪_K`.
    pub fn canonical_associate(&self, x: FieldElem) -> FieldElem {
        self.units
            .iter()
            .map(|&u| FieldElem { num: self.mul(u, x.num), den: x.den })
            .min()
            .unwrap_or(x)
    }

    pub fn is_canonical_associate(&self, x: FieldElem) -> bool {
        self.canonical_associate(x) == x
    }

    /// Parses `a`, `a+b*w`, `(a+b*w)/m`, `p/q`; `w` is `ω`, `i` is accepted for `d = -1`.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        parse_field_elem(self, s)
    }

}

fn parse_field_elem(k: &FieldCtx, s: &str) -> Result<FieldElem> {
    let bad = || Error::Domain(format!("cannot parse field element {s:?}"));
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (body, den) = match s.rfind('/') {
        Some(pos) if !s[pos..].contains(')') => {
            let den: i128 = s[pos + 1..].parse().map_err(|_| bad())?;
            (s[..pos].to_string(), den)
        }
        _ => (s.clone(), 1),
    };
    let body = body.trim_start_matches('(').trim_end_matches(')').to_string();
    let mut a = 0i128;
    let mut b = 0i128;
    let mut term = String::new();
    let flush = |term: &str, a: &mut i128, b: &mut i128| -> Result<()> {
        if term.is_empty() {
            return Ok(());
        }
        let (sign, rest) = match term.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, term.strip_prefix('+').unwrap_or(term)),
        };
        let is_omega = rest.ends_with('w') || (k.d() == -1 && rest.ends_with('i'));
        if is_omega {
            let coef = rest[..rest.len() - 1].trim_end_matches('*');
            let c: i128 = if coef.is_empty() { 1 } else { coef.parse().map_err(|_| bad())? };
            *b += sign * c;
        } else {
            let c: i128 = rest.parse().map_err(|_| bad())?;
            *a += sign * c;
        }
        Ok(())
    };
    for (i, ch) in body.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 {
            flush(&term, &mut a, &mut b)?;
            term.clear();
        }
        term.push(ch);
    }
    flush(&term, &mut a, &mut b)?;
    if den == 0 {
        return Err(bad());
    }
    Ok(FieldElem::new(Element::new(a, b), den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants_and_units() {
        for (d, disc, w) in [(-1, -4, 4), (-3, -3, 6), (-5, -20, 2), (-2, -8, 2), (-7, -7, 2)] {
            let k = FieldCtx::new(d).unwrap();
            assert_eq!(k.disc(), disc);
            assert_eq!(k.omega_count(), w);
            assert_eq!(k.units().len() as u32, w);
            for &u in k.units() {
                assert_eq!(k.norm(u), 1);
            }
        }
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(FieldCtx::new(3).is_err());
        assert!(FieldCtx::new(-4).is_err());
        assert!(FieldCtx::new(-253).is_err()); // disc -1012
        assert!(FieldCtx::new(-995).is_ok()); // disc -995
    }

    #[test]
    fn norm_examples() {
        let k = FieldCtx::new(-1).unwrap();
        assert_eq!(k.norm(Element::new(1, 1)), 2);
        let k = FieldCtx::new(-3).unwrap();
        assert_eq!(k.norm(Element::OMEGA), 1);
        let k = FieldCtx::new(-5).unwrap();
        assert_eq!(k.norm(Element::new(1, 1)), 6);
    }

    #[test]
    fn norm_matches_complex_modulus() {
        for d in [-1, -2, -3, -5, -7, -15] {
            let k = FieldCtx::new(d).unwrap();
            for a in -4..=4 {
                for b in -4..=4 {
                    let x = Element::new(a, b);
                    let (re, im) = k.embed(x);
                    assert!((re * re + im * im - k.norm(x) as f64).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn division_roundtrip() {
        let k = FieldCtx::new(-5).unwrap();
        let x = FieldElem::new(Element::new(3, -2), 7);
        let y = FieldElem::new(Element::new(1, 1), 2);
        let q = k.fdiv(x, y).unwrap();
        assert_eq!(k.fmul(q, y), x);
        assert!(k.finv(FieldElem::ZERO).is_err());
    }

    #[test]
    fn parse_elements() {
        let k = FieldCtx::new(-1).unwrap();
        assert_eq!(k.parse_elem("1+i").unwrap(), FieldElem::integral(Element::new(1, 1)));
        assert_eq!(k.parse_elem("-2*w").unwrap(), FieldElem::integral(Element::new(0, -2)));
        assert_eq!(k.parse_elem("(1-w)/2").unwrap(), FieldElem::new(Element::new(1, -1), 2));
        assert_eq!(k.parse_elem("3/6").unwrap(), FieldElem::new(Element::new(1, 0), 2));
        assert!(k.parse_elem("x").is_err());
    }

    #[test]
    fn canonical_associate_is_unit_invariant() {
        let k = FieldCtx::new(-3).unwrap();
        let x = FieldElem::integral(Element::new(2, 5));
        let c = k.canonical_associate(x);
        for &u in k.units() {
            let y = k.fmul(FieldElem::integral(u), x);
            assert_eq!(k.canonical_associate(y), c);
        }
    }
}
