//! The quartic del Pezzo surfaces, their parameterisations and their lines.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration;
use crate::error::{Error, Result};
use crate::height::ProjPoint;
use crate::qfield::{Element, FieldCtx, FieldElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SurfaceId {
    S0,
    S1,
    S2,
    S3,
    S4,
}

impl SurfaceId {
    pub const COUNTED: [SurfaceId; 4] = [SurfaceId::S1, SurfaceId::S2, SurfaceId::S3, SurfaceId::S4];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for SurfaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.index())
    }
}

impl FromStr for SurfaceId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s0" => Ok(SurfaceId::S0),
            "s1" => Ok(SurfaceId::S1),
            "s2" => Ok(SurfaceId::S2),
            "s3" => Ok(SurfaceId::S3),
            "s4" => Ok(SurfaceId::S4),
            _ => Err(Error::Domain(format!("unknown surface {s:?}"))),
        }
    }
}

/// A quadratic form `Σ c·x_i·x_j` with integer coefficients.
pub type Quadric = &'static [(i128, usize, usize)];

/// Two quadrics cutting a surface in ℙ⁴ and its type.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceSpec {
    pub id: SurfaceId,
    pub quadrics: [Quadric; 2],
    pub singularity: &'static str,
}

const SPECS: [SurfaceSpec; 5] = [
    SurfaceSpec {
        id: SurfaceId::S0,
        quadrics: [&[(1, 0, 1), (-1, 2, 3)], &[(1, 0, 3), (1, 1, 3), (1, 2, 4)]],
        singularity: "A3",
    },
    SurfaceSpec {
        id: SurfaceId::S1,
        quadrics: [&[(1, 0, 3), (-1, 2, 4)], &[(1, 0, 1), (1, 1, 3), (1, 2, 2)]],
        singularity: "A3+A1",
    },
    SurfaceSpec {
        id: SurfaceId::S2,
        quadrics: [&[(1, 0, 1), (-1, 2, 3)], &[(1, 0, 4), (1, 1, 2), (1, 3, 3)]],
        singularity: "A4",
    },
    SurfaceSpec {
        id: SurfaceId::S3,
        quadrics: [&[(1, 0, 3), (-1, 1, 4)], &[(1, 0, 1), (1, 1, 3), (1, 2, 2)]],
        singularity: "D4",
    },
    SurfaceSpec {
        id: SurfaceId::S4,
        quadrics: [&[(1, 0, 1), (-1, 2, 2)], &[(1, 3, 3), (1, 0, 4), (1, 1, 2)]],
        singularity: "D5",
    },
];

impl SurfaceSpec {
    pub fn get(id: SurfaceId) -> &'static SurfaceSpec {
        &SPECS[id.index()]
    }

    pub fn eval_quadric(&self, k: &FieldCtx, q: usize, x: &[Element; 5]) -> Element {
        self.quadrics[q]
            .iter()
            .fold(Element::ZERO, |acc, &(c, i, j)| acc + k.mul(x[i], x[j]).scale(c))
    }

    pub fn eval_quadric_rational(&self, q: usize, x: &[Ratio<i128>; 5]) -> Ratio<i128> {
        self.quadrics[q]
            .iter()
            .fold(Ratio::zero(), |acc, &(c, i, j)| acc + x[i] * x[j] * c)
    }

    pub fn on_surface_coords(&self, k: &FieldCtx, x: &[Element; 5]) -> bool {
        (0..2).all(|q| self.eval_quadric(k, q, x).is_zero())
    }

    /// `B(x, y) = Q(x+y) − Q(x) − Q(y)` for both quadrics.
    fn bilinear_vanishes(&self, k: &FieldCtx, x: &[Element; 5], y: &[Element; 5]) -> bool {
        self.quadrics.iter().all(|q| {
            q.iter()
                .fold(Element::ZERO, |acc, &(c, i, j)| {
                    acc + (k.mul(x[i], y[j]) + k.mul(y[i], x[j])).scale(c)
                })
                .is_zero()
        })
    }
}

pub fn on_surface(k: &FieldCtx, s: SurfaceId, p: &ProjPoint) -> bool {
    SurfaceSpec::get(s).on_surface_coords(k, p.coords())
}

/// The birational map `ℙ² ⇢ S`.
pub fn psi_coords(k: &FieldCtx, s: SurfaceId, y: [Element; 3]) -> Result<[Element; 5]> {
    let m = |a: Element, b: Element| k.mul(a, b);
    let [y0, y1, y2] = y;
    let out = match s {
        SurfaceId::S0 => return Err(Error::Unsupported("no parameterisation is stored for s0".into())),
        SurfaceId::S1 => {
            let v = y0 + y2;
            [m(m(y0, y1), v), -m(m(y1, y1), y1), m(m(y1, y1), v), m(m(y1, y2), v), m(m(y0, y2), v)]
        }
        SurfaceId::S2 => {
            let y00 = m(y0, y0);
            [m(y00, y0), m(m(y0, y1), y2), m(y00, y1), m(y00, y2), -m(y2, m(y1, y1) + m(y0, y2))]
        }
        SurfaceId::S3 => {
            let w = m(y0, y1) + m(y2, y2);
            let y11 = m(y1, y1);
            [m(y0, y11), m(y11, y1), m(y11, y2), -m(y1, w), -m(y0, w)]
        }
        SurfaceId::S4 => {
            let y00 = m(y0, y0);
            [
                m(y00, y0),
                m(y0, m(y1, y1)),
                m(y00, y1),
                m(y00, y2),
                -(m(y0, m(y2, y2)) + m(m(y1, y1), y1)),
            ]
        }
    };
    Ok(out)
}

pub fn psi_eval(k: &FieldCtx, s: SurfaceId, y: [Element; 3]) -> Result<ProjPoint> {
    if y.iter().all(|v| v.is_zero()) {
        return Err(Error::Domain("y = (0, 0, 0)".into()));
    }
    let x = psi_coords(k, s, y)?;
    if x.iter().all(|v| v.is_zero()) {
        return Err(Error::Degenerate(format!("({}, {}, {}) is in the base locus", y[0], y[1], y[2])));
    }
    ProjPoint::from_elements(k, x)
}

/// A line in ℙ⁴ with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Line {
    /// Reduced row echelon basis of the 2-dimensional span.
    pub span: [[Ratio<i128>; 5]; 2],
    /// Three primitive integer linear forms whose common zero set is the line.
    pub cuts: [[i128; 5]; 3],
}

impl Line {
    pub fn contains_coords(&self, x: &[Element; 5]) -> bool {
        self.cuts.iter().all(|f| {
            f.iter()
                .zip(x)
                .fold(Element::ZERO, |acc, (&c, &xi)| acc + xi.scale(c))
                .is_zero()
        })
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.contains_coords(p.coords())
    }

    /// Exact check that `v₀`, `v₁` and `v₀ + v₁` lie on both quadrics.
    pub fn lies_on(&self, s: SurfaceId) -> bool {
        let spec = SurfaceSpec::get(s);
        let [a, b] = self.span;
        let mut c = a;
        for i in 0..5 {
            c[i] = a[i] + b[i];
        }
        [a, b, c]
            .iter()
            .all(|v| (0..2).all(|q| spec.eval_quadric_rational(q, v).is_zero()))
    }

    /// Builds the line through two independent points with rational coordinates
    /// (after scaling); `None` otherwise.
    pub fn through(k: &FieldCtx, x: &[Element; 5], y: &[Element; 5]) -> Option<Line> {
        let rows = rref(k, [x.map(FieldElem::from), y.map(FieldElem::from)])?;
        let mut span = [[Ratio::zero(); 5]; 2];
        for r in 0..2 {
            for c in 0..5 {
                span[r][c] = rows[r][c].as_rational()?;
            }
        }
        let pivots: Vec<usize> = (0..2).map(|r| (0..5).find(|&c| !span[r][c].is_zero()).unwrap()).collect();
        let free: Vec<usize> = (0..5).filter(|c| !pivots.contains(c)).collect();
        let mut cuts = [[0i128; 5]; 3];
        for (n, &f) in free.iter().enumerate() {
            let mut v = [Ratio::zero(); 5];
            v[f] = Ratio::one();
            for r in 0..2 {
                v[pivots[r]] = -span[r][f];
            }
            let l = v.iter().fold(1i128, |l, q| l.lcm(q.denom()));
            let ints = v.map(|q| (q * l).to_integer());
            let g = ints.iter().fold(0i128, |g, x| g.gcd(x));
            cuts[n] = ints.map(|x| x / g);
        }
        Some(Line { span, cuts })
    }
}

/// Row echelon form of a rank-2 matrix over K; `None` if the rank is below 2.
fn rref(k: &FieldCtx, mut m: [[FieldElem; 5]; 2]) -> Option<[[FieldElem; 5]; 2]> {
    let mut row = 0;
    for col in 0..5 {
        if row == 2 {
            break;
        }
        let Some(p) = (row..2).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = k.finv(m[row][col]).ok()?;
        for c in 0..5 {
            m[row][c] = k.fmul(m[row][c], inv);
        }
        for r in 0..2 {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..5 {
                    m[r][c] = m[r][c] - k.fmul(f, m[row][c]);
                }
            }
        }
        row += 1;
    }
    (row == 2).then_some(m)
}

/// All lines on `s` through pairs of surface points of height `≤ h0` over `k`.
pub fn find_lines(k: &FieldCtx, s: SurfaceId, h0: i128) -> Result<Vec<Line>> {
    let spec = SurfaceSpec::get(s);
    let pts: Vec<[Element; 5]> = enumeration::surface_points(k, s, Ratio::from_integer(h0))?
        .into_values()
        .map(|p| *p.coords())
        .collect();
    let mut lines: Vec<Line> = Vec::new();
    loop {
        let known = &lines;
        let on_known: Vec<u64> = pts
            .iter()
            .map(|x| known.iter().enumerate().fold(0u64, |m, (i, l)| m | ((l.contains_coords(x) as u64) << i)))
            .collect();
        // first pair, in index order, spanning a line on S not yet known
        let found = (1..pts.len()).into_par_iter().find_map_first(|i| {
            (0..i).find_map(|j| {
                if on_known[i] & on_known[j] != 0 || !spec.bilinear_vanishes(k, &pts[i], &pts[j]) {
                    return None;
                }
                Some(Line::through(k, &pts[i], &pts[j]))
            })
        });
        match found {
            None => break,
            Some(None) => {
                return Err(Error::Unsupported(format!("{s} contains a line not defined over Q")));
            }
            Some(Some(l)) => {
                if !l.lies_on(s) {
                    return Err(Error::Consistency(format!("line {:?} is not on {s}", l.cuts)));
                }
                lines.push(l);
            }
        }
    }
    let set: BTreeSet<Line> = lines.into_iter().collect();
    Ok(set.into_iter().collect())
}

/// Default search height for the line oracle.
pub const LINE_SEARCH_HEIGHT: i128 = 20;

static LINE_CACHE: [OnceLock<Vec<Line>>; 5] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// The lines of `s`, found once over ℚ(i) and cached.
pub fn lines(s: SurfaceId) -> &'static [Line] {
    LINE_CACHE[s.index()].get_or_init(|| {
        let k = FieldCtx::new(-1).expect("Q(i) is valid");
        find_lines(&k, s, LINE_SEARCH_HEIGHT).expect("line search over Q(i)")
    })
}

pub fn in_u_coords(s: SurfaceId, x: &[Element; 5]) -> bool {
    !lines(s).iter().any(|l| l.contains_coords(x))
}

pub fn in_u(k: &FieldCtx, s: SurfaceId, p: &ProjPoint) -> Result<bool> {
    if !on_surface(k, s, p) {
        return Err(Error::Domain(format!("{p} is not on {s}")));
    }
    Ok(in_u_coords(s, p.coords()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: [i128; 5]) -> [Element; 5] {
        v.map(Element::from_int)
    }

    #[test]
    fn membership_examples() {
        let k = FieldCtx::new(-1).unwrap();
        let s1 = SurfaceSpec::get(SurfaceId::S1);
        assert!(SurfaceSpec::get(SurfaceId::S2).on_surface_coords(&k, &e([1, 0, 0, 0, 0])));
        assert!(s1.on_surface_coords(&k, &e([1, 1, 1, -2, -2])));
        assert!(!s1.on_surface_coords(&k, &e([1, 1, 1, 1, 1])));
    }

    #[test]
    fn psi_examples() {
        let k = FieldCtx::new(-1).unwrap();
        let one = Element::ONE;
        assert_eq!(psi_coords(&k, SurfaceId::S1, [one; 3]).unwrap(), e([2, -1, 2, 2, 2]));
        assert_eq!(psi_coords(&k, SurfaceId::S2, [one; 3]).unwrap(), e([1, 1, 1, 1, -2]));
        assert_eq!(psi_coords(&k, SurfaceId::S4, [one, Element::ZERO, one]).unwrap(), e([1, 0, 0, 1, -1]));
        assert!(matches!(
            psi_eval(&k, SurfaceId::S1, [one, Element::ZERO, Element::ZERO]),
            Err(Error::Degenerate(_))
        ));
        assert!(psi_eval(&k, SurfaceId::S0, [one; 3]).is_err());
    }

    #[test]
    fn psi_lands_on_surface() {
        let k = FieldCtx::new(-7).unwrap();
        for s in SurfaceId::COUNTED {
            let spec = SurfaceSpec::get(s);
            for a in -2..=2 {
                for b in -2..=2 {
                    for c in [-1, 1, 3] {
                        let y = [Element::new(a, 1), Element::new(b, -1), Element::new(c, a)];
                        assert!(spec.on_surface_coords(&k, &psi_coords(&k, s, y).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn line_through_points() {
        let k = FieldCtx::new(-1).unwrap();
        let l = Line::through(&k, &e([0, 1, 0, 0, 0]), &e([0, 0, 0, 0, 1])).unwrap();
        assert!(l.lies_on(SurfaceId::S4));
        assert!(l.lies_on(SurfaceId::S1));
        assert!(l.contains_coords(&e([0, 3, 0, 0, -2])));
        assert!(!l.contains_coords(&e([1, 3, 0, 0, -2])));
    }
}
