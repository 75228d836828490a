//! Direct enumeration of rational points of bounded height on the surfaces.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::height::{PointKey, ProjPoint};
use crate::qfield::{Element, FieldCtx};
use crate::surfaces::{self, SurfaceId, SurfaceSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Exhaustive,
    Parameterization,
}

/// `a / b` when it lies in `𝒪_K`.
fn div_exact(k: &FieldCtx, a: Element, b: Element) -> Option<Element> {
    let n = k.norm(b);
    let p = k.mul(a, k.conj(b));
    p.is_divisible_by(n).then(|| p.div_exact(n))
}

/// Solves for the two dependent coordinates from a generic free triple.
fn solve_main(k: &FieldCtx, s: SurfaceId, f: [Element; 3]) -> Option<[Element; 5]> {
    let m = |a, b| k.mul(a, b);
    match s {
        SurfaceId::S1 => {
            let [x2, x3, x4] = f;
            if x3.is_zero() {
                return None;
            }
            let x0 = div_exact(k, m(x2, x4), x3)?;
            let v = x0 + x3;
            if v.is_zero() {
                return None;
            }
            let x1 = -div_exact(k, m(x2, x2), v)?;
            Some([x0, x1, x2, x3, x4])
        }
        SurfaceId::S2 => {
            let [x0, x2, x3] = f;
            if x0.is_zero() {
                return None;
            }
            let x1 = div_exact(k, m(x2, x3), x0)?;
            let x4 = -div_exact(k, m(x1, x2) + m(x3, x3), x0)?;
            Some([x0, x1, x2, x3, x4])
        }
        SurfaceId::S3 => {
            let [x1, x2, x3] = f;
            if x1.is_zero() {
                return None;
            }
            let x0 = -div_exact(k, m(x1, x3) + m(x2, x2), x1)?;
            let x4 = div_exact(k, m(x0, x3), x1)?;
            Some([x0, x1, x2, x3, x4])
        }
        SurfaceId::S4 => {
            let [x0, x2, x3] = f;
            if x0.is_zero() {
                return None;
            }
            let x1 = div_exact(k, m(x2, x2), x0)?;
            let x4 = -div_exact(k, m(x3, x3) + m(x1, x2), x0)?;
            Some([x0, x1, x2, x3, x4])
        }
        SurfaceId::S0 => None,
    }
}

/// Branches left over when the generic solve does not apply. Each branch has
/// two free coordinates; `None` for the solver means the rest vanish.
type Branch = ((usize, usize), Option<fn(&FieldCtx, Element, Element) -> Option<[Element; 5]>>);

fn s1_conic(k: &FieldCtx, x0: Element, x2: Element) -> Option<[Element; 5]> {
    if x0.is_zero() {
        return None;
    }
    let x1 = -div_exact(k, k.mul(x2, x2), x0)?;
    Some([x0, x1, x2, Element::ZERO, Element::ZERO])
}

fn side_branches(s: SurfaceId) -> &'static [Branch] {
    match s {
        SurfaceId::S1 => &[((0, 4), None), ((1, 4), None), ((0, 2), Some(s1_conic))],
        SurfaceId::S2 => &[((1, 4), None), ((2, 4), None)],
        SurfaceId::S3 => &[((0, 4), None), ((3, 4), None)],
        SurfaceId::S4 => &[((1, 4), None)],
        SurfaceId::S0 => &[],
    }
}

fn main_free(s: SurfaceId) -> [usize; 3] {
    match s {
        SurfaceId::S1 => [2, 3, 4],
        SurfaceId::S2 | SurfaceId::S4 => [0, 2, 3],
        SurfaceId::S3 => [1, 2, 3],
        SurfaceId::S0 => [0, 0, 0],
    }
}

/// Every point of `s` (lines included) with `H ≤ bound`, keyed canonically.
pub fn surface_points(k: &FieldCtx, s: SurfaceId, bound: Ratio<i128>) -> Result<BTreeMap<PointKey, ProjPoint>> {
    if s == SurfaceId::S0 {
        return Err(Error::Unsupported("s0 is stored as data only".into()));
    }
    let spec = SurfaceSpec::get(s);
    let mut out = BTreeMap::new();
    if bound < Ratio::from_integer(1) {
        return Ok(out);
    }
    for r in k.class_reps() {
        // with content r, every coordinate lies in r and has norm ≤ B·N(r)
        let x = bound * Ratio::from_integer(r.norm());
        let within = |e: &Element| r.contains(*e) && Ratio::from_integer(k.norm(*e)) <= x;
        let pts = r.lattice_points(k, x);
        let accept = |c: [Element; 5]| -> Option<(PointKey, ProjPoint)> {
            if c.iter().all(|e| e.is_zero()) || !c.iter().all(within) {
                return None;
            }
            assert!(spec.on_surface_coords(k, &c), "branch produced an off-surface point");
            let p = ProjPoint::from_elements(k, c).ok()?;
            (p.height() <= bound).then(|| (p.key(k), p))
        };
        let [i0, i1, i2] = main_free(s);
        let found: Vec<(PointKey, ProjPoint)> = pts
            .par_iter()
            .flat_map_iter(|&a| {
                let mut local = Vec::new();
                for &b in &pts {
                    for &c in &pts {
                        let mut f = [Element::ZERO; 3];
                        f[0] = a;
                        f[1] = b;
                        f[2] = c;
                        if let Some(sol) = solve_main(k, s, f) {
                            debug_assert!(sol[i0] == a && sol[i1] == b && sol[i2] == c);
                            local.extend(accept(sol));
                        }
                    }
                }
                local
            })
            .collect();
        out.extend(found);
        for &((i, j), solver) in side_branches(s) {
            for &a in &pts {
                for &b in &pts {
                    let c = match solver {
                        Some(f) => match f(k, a, b) {
                            Some(c) => c,
                            None => continue,
                        },
                        None => {
                            let mut c = [Element::ZERO; 5];
                            c[i] = a;
                            c[j] = b;
                            c
                        }
                    };
                    out.extend(accept(c));
                }
            }
        }
    }
    Ok(out)
}

/// Points of `U = S \ lines` with `H ≤ bound`.
pub fn u_points(k: &FieldCtx, s: SurfaceId, bound: Ratio<i128>) -> Result<BTreeMap<PointKey, ProjPoint>> {
    let mut pts = surface_points(k, s, bound)?;
    pts.retain(|_, p| surfaces::in_u_coords(s, p.coords()));
    Ok(pts)
}

/// Points of `U` reached as `ψ(y)` for `y ∈ 𝒪_K³` with `|y_i| ≤ radius`.
pub fn parameterized_points(
    k: &FieldCtx,
    s: SurfaceId,
    bound: Ratio<i128>,
    radius: i128,
) -> Result<BTreeMap<PointKey, ProjPoint>> {
    if s == SurfaceId::S0 {
        return Err(Error::Unsupported("s0 has no stored parameterisation".into()));
    }
    let ys = crate::qfield::lattice::points_in_disk(k, Element::ONE, Element::OMEGA, Ratio::from_integer(radius));
    let found: Vec<(PointKey, ProjPoint)> = ys
        .par_iter()
        .flat_map_iter(|&y0| {
            let mut local = Vec::new();
            for &y1 in &ys {
                for &y2 in &ys {
                    let Ok(p) = surfaces::psi_eval(k, s, [y0, y1, y2]) else { continue };
                    if p.height() <= bound && surfaces::in_u_coords(s, p.coords()) {
                        local.push((p.key(k), p));
                    }
                }
            }
            local
        })
        .collect();
    Ok(found.into_iter().collect())
}

/// Default `y` radius for the parameterisation method.
pub fn default_radius(bound: Ratio<i128>) -> i128 {
    let b = *bound.numer() as f64 / *bound.denom() as f64;
    b.max(0.0).cbrt().ceil() as i128 + 2
}

/// `N_{U,H}(B)`.
pub fn direct_count(k: &FieldCtx, s: SurfaceId, bound: Ratio<i128>, method: Method) -> Result<u64> {
    let pts = match method {
        Method::Exhaustive => u_points(k, s, bound)?,
        Method::Parameterization => parameterized_points(k, s, bound, default_radius(bound))?,
    };
    Ok(pts.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn below_one_is_empty() {
        let k = FieldCtx::new(-1).unwrap();
        for s in SurfaceId::COUNTED {
            assert_eq!(direct_count(&k, s, Ratio::new(1, 2), Method::Exhaustive).unwrap(), 0);
        }
    }

    #[test]
    fn s2_contains_known_points() {
        let k = FieldCtx::new(-1).unwrap();
        let pts = u_points(&k, SurfaceId::S2, Ratio::from_integer(4)).unwrap();
        for c in [[1, 1, 1, 1, -2], [1, 0, 0, 1, -1]] {
            let p = ProjPoint::from_elements(&k, c.map(Element::from_int)).unwrap();
            assert!(pts.contains_key(&p.key(&k)), "{p}");
        }
    }
}
