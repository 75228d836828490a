use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{chunk_rng, Estimate, CHUNK};
use crate::error::{Error, Result};
use crate::surfaces::SurfaceId;

type Q = Ratio<i128>;

/// The region `{t ∈ ℝ≥0⁵ : Σ a_i t_i ≤ 1 for each row}` in the coordinates
/// `(t₁, t₂, t₄, t₅, t₆)` given by `|η_j| = B^{t_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaPolytope {
    pub surface: SurfaceId,
    pub rows: Vec<[i64; 5]>,
    /// The value of `α` stated alongside the surface.
    pub expected: (i64, i64),
}

impl AlphaPolytope {
    pub fn get(s: SurfaceId) -> Result<AlphaPolytope> {
        let (rows, expected): (Vec<[i64; 5]>, _) = match s {
            SurfaceId::S1 => (vec![[2, 2, 2, 0, 1], [-1, -1, 2, 6, 4]], (1, 8640)),
            SurfaceId::S2 => (vec![[2, 4, 2, 3, 1], [-1, -2, 2, -3, 4]], (1, 21600)),
            SurfaceId::S3 => (vec![[4, 2, 3, 2, 2]], (1, 34560)),
            SurfaceId::S4 => (vec![[6, 5, 4, 2, 4]], (1, 345600)),
            SurfaceId::S0 => return Err(Error::Unsupported("no α polytope for S0".into())),
        };
        Ok(AlphaPolytope { surface: s, rows, expected })
    }

    pub fn expected(&self) -> Q {
        Q::new(self.expected.0 as i128, self.expected.1 as i128)
    }

    pub fn contains(&self, t: &[f64; 5]) -> bool {
        t.iter().all(|&x| x >= 0.0)
            && self.rows.iter().all(|r| r.iter().zip(t).map(|(&a, &x)| a as f64 * x).sum::<f64>() <= 1.0)
    }

    /// Exact vertices, by solving every 5-subset of the facet equations.
    pub fn vertices(&self) -> Vec<[Q; 5]> {
        let mut eqs: Vec<[Q; 6]> = Vec::new();
        for i in 0..5 {
            let mut e = [Q::zero(); 6];
            e[i] = Q::one();
            eqs.push(e);
        }
        for r in &self.rows {
            let mut e = [Q::one(); 6];
            for i in 0..5 {
                e[i] = Q::from_integer(r[i] as i128);
            }
            eqs.push(e);
        }
        let mut out: Vec<[Q; 5]> = Vec::new();
        let m = eqs.len();
        for mask in 0u32..1 << m {
            if mask.count_ones() != 5 {
                continue;
            }
            let sys: Vec<[Q; 6]> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| eqs[i]).collect();
            let Some(v) = solve5(sys) else { continue };
            let feasible = v.iter().all(|x| *x >= Q::zero())
                && self.rows.iter().all(|r| r.iter().zip(&v).map(|(&a, x)| *x * a as i128).sum::<Q>() <= Q::one());
            if feasible && !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    /// Coordinate-wise upper bounds; `None` if the region is unbounded.
    pub fn bounding_box(&self) -> Option<[Q; 5]> {
        let verts = self.vertices();
        // a bounded region in the positive orthant has every ray direction cut
        // by some row with a positive coefficient
        for i in 0..5 {
            if !self.rows.iter().any(|r| r[i] > 0) {
                return None;
            }
        }
        let mut b = [Q::zero(); 5];
        for v in &verts {
            for i in 0..5 {
                b[i] = b[i].max(v[i]);
            }
        }
        Some(b)
    }
}

fn solve5(mut a: Vec<[Q; 6]>) -> Option<[Q; 5]> {
    for col in 0..5 {
        let piv = (col..5).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        for c in col..6 {
            a[col][c] /= p;
        }
        for r in 0..5 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in col..6 {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
            }
        }
    }
    Some(std::array::from_fn(|i| a[i][5]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaMode {
    ExactSimplex,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum AlphaValue {
    Exact(#[serde(serialize_with = "ser_ratio")] Q),
    Estimate(Estimate),
}

fn ser_ratio<S: serde::Serializer>(r: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl AlphaValue {
    pub fn value(&self) -> f64 {
        match self {
            AlphaValue::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            AlphaValue::Estimate(e) => e.value,
        }
    }

    pub fn stderr(&self) -> f64 {
        match self {
            AlphaValue::Exact(_) => 0.0,
            AlphaValue::Estimate(e) => e.stderr,
        }
    }
}

/// `α = vol / 3`.
pub fn alpha_polytope(s: SurfaceId, mode: AlphaMode) -> Result<AlphaValue> {
    let poly = AlphaPolytope::get(s)?;
    match mode {
        AlphaMode::ExactSimplex => {
            let [row] = poly.rows.as_slice() else {
                return Err(Error::Unsupported(format!("exact α needs a single inequality; {s} has {}", poly.rows.len())));
            };
            let prod = row.iter().try_fold(120i128, |p, &a| if a > 0 { Some(p * a as i128) } else { None });
            let prod = prod.ok_or_else(|| Error::Unsupported("exact α needs positive coefficients".into()))?;
            Ok(AlphaValue::Exact(Q::new(1, 3 * prod)))
        }
        AlphaMode::MonteCarlo { samples, seed } => {
            if samples < 10_000 {
                return Err(Error::Domain(format!("{samples} samples is below the minimum of 10⁴")));
            }
            let bx = poly.bounding_box().ok_or_else(|| Error::Degenerate(format!("α region of {s} is unbounded")))?;
            let bf = bx.map(|b| *b.numer() as f64 / *b.denom() as f64);
            let box_vol: f64 = bf.iter().product();
            let hits: u64 = (0..samples.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| {
                    let mut rng = chunk_rng(seed, c);
                    let n = CHUNK.min(samples - c * CHUNK);
                    (0..n)
                        .filter(|_| {
                            let t: [f64; 5] = std::array::from_fn(|i| rng.gen::<f64>() * bf[i]);
                            poly.contains(&t)
                        })
                        .count() as u64
                })
                .collect::<Vec<_>>()
                .into_iter()
                .sum();
            let p = hits as f64 / samples as f64;
            let se = (p * (1.0 - p) / samples as f64).sqrt();
            Ok(AlphaValue::Estimate(Estimate { value: box_vol * p / 3.0, stderr: box_vol * se / 3.0, samples, seed }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_vertices() {
        let p = AlphaPolytope::get(SurfaceId::S4).unwrap();
        let v = p.vertices();
        assert_eq!(v.len(), 6);
        let b = p.bounding_box().unwrap();
        assert_eq!(b, [Q::new(1, 6), Q::new(1, 5), Q::new(1, 4), Q::new(1, 2), Q::new(1, 4)]);
    }

    #[test]
    fn two_row_box_is_bounded() {
        let p = AlphaPolytope::get(SurfaceId::S1).unwrap();
        let b = p.bounding_box().unwrap();
        // t₆ ≤ 1/3 from 2t₁ + t₆ ≤ 1 and 4t₆ − t₁ ≤ 1; t₅ ≤ 1/4 from 6t₅ ≤ 1 + t₁ + t₂ ≤ 3/2
        assert_eq!(b[4], Q::new(1, 3));
        assert_eq!(b[3], Q::new(1, 4));
    }

    #[test]
    fn exact_mode_rejects_two_rows() {
        assert!(alpha_polytope(SurfaceId::S1, AlphaMode::ExactSimplex).is_err());
        assert!(alpha_polytope(SurfaceId::S0, AlphaMode::ExactSimplex).is_err());
    }
}
