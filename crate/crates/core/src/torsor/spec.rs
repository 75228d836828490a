use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::height::ProjPoint;
use crate::qfield::{Element, FieldCtx, FieldElem, FracIdeal, Ideal};
use crate::surfaces::{SurfaceId, SurfaceSpec};

/// A signed Laurent monomial `c · ∏ η_j^{e_j}`; `exps[j]` is the exponent of `η_{j+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Term {
    pub coef: i128,
    pub exps: [i32; 9],
}

impl Term {
    /// Parses `"2 3 4^2 1^-1"` as `η₂η₃η₄²/η₁`, with an optional leading sign.
    pub fn parse(s: &str) -> Term {
        let s = s.trim();
        let (coef, body) = match s.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, s.strip_prefix('+').unwrap_or(s)),
        };
        let mut exps = [0; 9];
        for f in body.split_whitespace() {
            let (j, e) = match f.split_once('^') {
                Some((j, e)) => (j.parse::<usize>().unwrap(), e.parse::<i32>().unwrap()),
                None => (f.parse::<usize>().unwrap(), 1),
            };
            exps[j - 1] += e;
        }
        Term { coef, exps }
    }

    pub fn is_pure(&self) -> bool {
        self.exps.iter().all(|&e| e >= 0)
    }

    pub fn eval(&self, k: &FieldCtx, eta: &[FieldElem; 9]) -> Result<FieldElem> {
        let mut acc = FieldElem::from_int(self.coef);
        for (j, &e) in self.exps.iter().enumerate() {
            if e != 0 {
                acc = k.fmul(acc, k.fpow(eta[j], e)?);
            }
        }
        Ok(acc)
    }

    /// Degree in `Pic`, in the basis of the six class parameters.
    pub fn degree(&self, oj: &[[i32; 6]; 9]) -> [i32; 6] {
        let mut d = [0; 6];
        for (j, &e) in self.exps.iter().enumerate() {
            for (c, dc) in d.iter_mut().enumerate() {
                *dc += e * oj[j][c];
            }
        }
        d
    }
}

/// `|Σ terms| ≤ factor · B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightCondition {
    pub terms: Vec<Term>,
    pub factor: i128,
}

impl HeightCondition {
    fn parse(s: &str, factor: i128) -> HeightCondition {
        let mut terms = Vec::new();
        let mut cur = String::new();
        for tok in s.split_whitespace() {
            if tok == "+" || tok == "-" {
                terms.push(Term::parse(&cur));
                cur = if tok == "-" { "-".into() } else { String::new() };
            } else {
                cur.push(' ');
                cur.push_str(tok);
            }
        }
        terms.push(Term::parse(&cur));
        HeightCondition { terms, factor }
    }

    /// The single monomial when the condition is `|monomial| ≤ factor·B`.
    pub fn as_pure_monomial(&self) -> Option<&Term> {
        match self.terms.as_slice() {
            [t] if t.is_pure() => Some(t),
            _ => None,
        }
    }

    pub fn value(&self, k: &FieldCtx, eta: &[FieldElem; 9]) -> Result<Ratio<i128>> {
        let mut acc = FieldElem::ZERO;
        for t in &self.terms {
            acc = acc + t.eval(k, eta)?;
        }
        Ok(k.fnorm(acc))
    }

    pub fn holds(&self, k: &FieldCtx, eta: &[FieldElem; 9], bound: Ratio<i128>) -> Result<bool> {
        Ok(self.value(k, eta)? <= bound * Ratio::from_integer(self.factor))
    }
}

/// Universal torsor data of one surface.
#[derive(Clone, Debug, Serialize)]
pub struct TorsorSpec {
    pub surface: SurfaceId,
    /// `𝒪_j = ∏_k C_k^{oj[j][k]}`.
    pub oj_exponents: [[i32; 6]; 9],
    pub u_exponents: [i32; 6],
    pub height_conditions: Vec<HeightCondition>,
    /// Consequences of the height conditions used only to bound the search.
    pub derived_conditions: Vec<HeightCondition>,
    pub torsor_equation: [Term; 3],
    /// 1-based indices `j` with `η_j = 0` permitted.
    pub zero_allowed: Vec<usize>,
    /// 1-based indices required nonzero by the region of height conditions.
    pub nonzero_product: Vec<usize>,
    /// 1-based edges of the configuration graph.
    pub adjacency: Vec<(usize, usize)>,
    /// The Ψ monomials with signs as printed.
    pub psi_printed: [Term; 5],
    /// The Ψ monomials after sign calibration.
    pub psi: [Term; 5],
}

struct RawTables {
    oj: [[i32; 6]; 9],
    conds: [&'static str; 5],
    derived: &'static [(&'static str, i128)],
    torsor: [&'static str; 3],
    zero_allowed: &'static [usize],
    nonzero: &'static [usize],
    edges: &'static [(usize, usize)],
    psi: [&'static str; 5],
}

fn raw(s: SurfaceId) -> Result<RawTables> {
    Ok(match s {
        SurfaceId::S1 => RawTables {
            oj: [
                [0, 0, 0, 0, 0, 1],
                [0, 0, 0, 0, 1, 0],
                [1, -1, 0, 0, -1, -1],
                [0, 1, -1, 0, 0, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 1, -1, 0, 0],
                [1, -1, -1, -1, 0, 0],
                [1, 0, 0, 0, -1, 0],
                [1, 0, 0, 0, 0, -1],
            ],
            conds: [
                "2 3 4 5 6 7 8",
                "1^2 2^2 3^3 4^2 6",
                "1 2 3^2 4^2 5^2 6^2 7",
                "3 4^2 5^4 6^3 7^2 + 2 3 4 5 6 7 8",
                "2 7 8^2 1^-1 + 4 5^3 6^2 7^2 8 1^-1",
            ],
            derived: &[("3 4^2 5^4 6^3 7^2", 4)],
            torsor: ["4 5^3 6^2 7", "2 8", "1 9"],
            zero_allowed: &[8, 9],
            nonzero: &[1],
            edges: &[(1, 3), (1, 9), (2, 3), (2, 8), (3, 4), (4, 6), (5, 6), (5, 7), (7, 8), (7, 9), (8, 9)],
            psi: [
                "2 3 4 5 6 7 8",
                "-1^2 2^2 3^3 4^2 6",
                "1 2 3^2 4^2 5^2 6^2 7",
                "1 3 4 5 6 7 9",
                "7 8 9",
            ],
        },
        SurfaceId::S2 => RawTables {
            oj: [
                [0, 0, 0, 1, -1, 0],
                [0, 0, 0, 0, 1, -1],
                [1, -1, 0, -1, -1, 0],
                [0, 1, -1, 0, 0, 0],
                [0, 0, 0, 0, 0, 1],
                [0, 0, 1, 0, 0, 0],
                [1, -1, -1, 0, 0, 0],
                [1, 0, 0, -1, 0, 0],
                [2, 0, 0, -1, -1, -1],
            ],
            conds: [
                "1^2 2^4 3^3 4^2 5^3 6",
                "1 2 3 4 6 7 8",
                "1^2 2^3 3^2 4 5^2 8",
                "1 2^2 3^2 4^2 5 6^2 7",
                "1 7 8^2 5^-1 + 3 4^2 6^3 7^2 5^-1",
            ],
            derived: &[],
            torsor: ["3 4^2 6^3 7", "1 8^2", "5 9"],
            zero_allowed: &[8, 9],
            nonzero: &[5],
            edges: &[(1, 2), (1, 8), (2, 3), (2, 5), (3, 4), (4, 6), (5, 9), (6, 7), (7, 8), (7, 9), (8, 9)],
            psi: [
                "1^2 2^4 3^3 4^2 5^3 6",
                "1 2 3 4 6 7 8",
                "1^2 2^3 3^2 4 5^2 8",
                "1 2^2 3^2 4^2 5 6^2 7",
                "7 9",
            ],
        },
        SurfaceId::S3 => RawTables {
            oj: [
                [0, 0, 1, -1, 0, 0],
                [0, 1, -1, 0, 0, 0],
                [1, -1, -1, 0, 0, -1],
                [0, 0, 0, 1, -1, 0],
                [0, 0, 0, 0, 0, 1],
                [0, 0, 0, 0, 1, 0],
                [1, -1, 0, 0, 0, 0],
                [1, 0, 0, 0, 0, -1],
                [2, -1, -1, -1, -1, 0],
            ],
            conds: [
                "1^2 2 3^2 4 5^2 8",
                "1^4 2^2 3^3 4^3 5^2 6^2",
                "1^3 2^2 3^2 4^2 5 6 7",
                "1^2 2 3^2 4 5^2 8 + 1^2 2^2 3 4 7^2",
                "3 5^2 8^2 4^-1 6^-2 + 2 7^2 8 4^-1 6^-2",
            ],
            derived: &[],
            torsor: ["2 7^2", "3 5^2 8", "4 6^2 9"],
            zero_allowed: &[7, 8, 9],
            nonzero: &[4, 6],
            edges: &[(1, 2), (1, 3), (1, 4), (2, 7), (3, 5), (4, 6), (5, 8), (6, 9), (7, 8), (7, 9), (8, 9)],
            psi: [
                "1^2 2 3^2 4 5^2 8",
                "1^4 2^2 3^3 4^3 5^2 6^2",
                "1^3 2^2 3^2 4^2 5 6 7",
                "1^2 2 3 4^2 6^2 9",
                "8 9",
            ],
        },
        SurfaceId::S4 => RawTables {
            oj: [
                [0, 0, 0, 1, -1, 0],
                [0, 0, 0, 0, 1, -1],
                [1, -1, -1, -1, 0, 0],
                [0, 0, 1, -1, 0, 0],
                [0, 1, -1, 0, 0, 0],
                [0, 0, 0, 0, 0, 1],
                [1, -1, 0, 0, 0, 0],
                [1, 0, 0, 0, 0, 0],
                [3, -1, -1, -1, -1, -1],
            ],
            conds: [
                "1^6 2^5 3^3 4^4 5^2 6^4",
                "1^2 2 3 4^2 5^2 7^2",
                "1^4 2^3 3^2 4^3 5^2 6^2 7",
                "1^3 2^2 3^2 4^2 5 6 8",
                "3 8^2 2^-1 6^-2 + 4 5^2 7^3 2^-1 6^-2",
            ],
            derived: &[],
            torsor: ["3 8^2", "2 6^2 9", "4 5^2 7^3"],
            zero_allowed: &[7, 8, 9],
            nonzero: &[2, 6],
            edges: &[(1, 2), (1, 3), (1, 4), (2, 6), (3, 8), (4, 5), (5, 7), (6, 9), (7, 8), (7, 9), (8, 9)],
            psi: [
                "1^6 2^5 3^3 4^4 5^2 6^4",
                "1^2 2 3 4^2 5^2 7^2",
                "1^4 2^3 3^2 4^3 5^2 6^2 7",
                "1^3 2^2 3^2 4^2 5 6 8",
                "9",
            ],
        },
        SurfaceId::S0 => return Err(Error::Unsupported("no torsor data is stored for s0".into())),
    })
}

impl TorsorSpec {
    pub fn is_zero_allowed(&self, j: usize) -> bool {
        self.zero_allowed.contains(&j)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency.contains(&(i.min(j), i.max(j)))
    }

    /// 1-based nonadjacent pairs `(i, j)` with `i < j`.
    pub fn coprime_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 1..=9 {
            for i in 1..j {
                if !self.adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// `𝒪_j(C)` for the class tuple `c` (1-based `j`).
    pub fn oj(&self, k: &FieldCtx, c: &[Ideal; 6], j: usize) -> Result<FracIdeal> {
        tuple_power(k, c, &self.oj_exponents[j - 1])
    }

    pub fn u_c(&self, c: &[Ideal; 6]) -> Ratio<i128> {
        let mut u = Ratio::from_integer(1);
        for (ci, &e) in c.iter().zip(&self.u_exponents) {
            let n = Ratio::from_integer(ci.norm());
            u *= if e >= 0 { n.pow(e) } else { n.recip().pow(-e) };
        }
        u
    }

    /// Index (0-based) of the torsor-equation term containing `η₉`, and its
    /// cofactor.
    pub fn eta9_term(&self) -> (usize, Term) {
        let i = self.torsor_equation.iter().position(|t| t.exps[8] != 0).expect("η9 occurs");
        let mut t = self.torsor_equation[i];
        assert_eq!(t.exps[8], 1, "η9 occurs linearly");
        t.exps[8] = 0;
        (i, t)
    }

    /// Solves the torsor equation for `η₉`.
    pub fn solve_eta9(&self, k: &FieldCtx, eta: &[FieldElem; 9]) -> Result<FieldElem> {
        let (i, cof) = self.eta9_term();
        let mut rest = FieldElem::ZERO;
        for (n, t) in self.torsor_equation.iter().enumerate() {
            if n != i {
                rest = rest + t.eval(k, eta)?;
            }
        }
        k.fdiv(-rest, cof.eval(k, eta)?)
    }

    pub fn torsor_residual(&self, k: &FieldCtx, eta: &[FieldElem; 9]) -> Result<FieldElem> {
        let mut acc = FieldElem::ZERO;
        for t in &self.torsor_equation {
            acc = acc + t.eval(k, eta)?;
        }
        Ok(acc)
    }

    pub fn psi_coords(&self, k: &FieldCtx, eta: &[FieldElem; 9]) -> Result<[FieldElem; 5]> {
        psi_with(k, &self.psi, eta)
    }

    /// `Ψ(η)` as a point of ℙ⁴(K).
    pub fn psi_point(&self, k: &FieldCtx, eta: &[FieldElem; 9]) -> Result<ProjPoint> {
        let x = self.psi_coords(k, eta)?;
        ProjPoint::new(k, x).map_err(|_| Error::Degenerate("all Ψ monomials vanish".into()))
    }

    /// Determinant of the exponent rows of `η₁..η₆`.
    pub fn unit_block_det(&self) -> i64 {
        let m: Vec<Vec<i64>> =
            self.oj_exponents[..6].iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        det(m)
    }
}

fn det(mut m: Vec<Vec<i64>>) -> i64 {
    // fraction-free Bareiss elimination
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1;
    for i in 0..n {
        if m[i][i] == 0 {
            match (i + 1..n).find(|&r| m[r][i] != 0) {
                Some(r) => {
                    m.swap(i, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for r in i + 1..n {
            for c in i + 1..n {
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) / prev;
            }
        }
        prev = m[i][i];
    }
    sign * m[n - 1][n - 1]
}

fn tuple_power(k: &FieldCtx, c: &[Ideal; 6], exps: &[i32; 6]) -> Result<FracIdeal> {
    let mut acc = FracIdeal::UNIT;
    for (ci, &e) in c.iter().zip(exps) {
        if e != 0 {
            acc = acc.mul(k, &FracIdeal::from(*ci).pow(k, e)?);
        }
    }
    Ok(acc)
}

fn psi_with(k: &FieldCtx, psi: &[Term; 5], eta: &[FieldElem; 9]) -> Result<[FieldElem; 5]> {
    let mut out = [FieldElem::ZERO; 5];
    for (o, t) in out.iter_mut().zip(psi) {
        *o = t.eval(k, eta)?;
    }
    Ok(out)
}

/// Random solutions of the torsor equation over ℚ(i) with nonzero `η₁..η₈`.
fn random_torsor_solutions(k: &FieldCtx, spec: &TorsorSpec, n: usize, seed: u64) -> Vec<[FieldElem; 9]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut eta = [FieldElem::ZERO; 9];
        for e in eta.iter_mut().take(8) {
            loop {
                let x = Element::new(rng.gen_range(-1..=1), rng.gen_range(-1..=1));
                if !x.is_zero() {
                    *e = FieldElem::integral(x);
                    break;
                }
            }
        }
        if let Ok(e9) = spec.solve_eta9(k, &eta) {
            eta[8] = e9;
            out.push(eta);
        }
    }
    out
}

/// Picks the sign vector (first sign `+`) for which `Ψ` maps torsor solutions
/// onto the surface, flipping as few printed signs as possible.
pub fn calibrate_psi_signs(spec: &TorsorSpec, samples: usize) -> Result<[Term; 5]> {
    let k = FieldCtx::new(-1)?;
    let surf = SurfaceSpec::get(spec.surface);
    let sols = random_torsor_solutions(&k, spec, samples, 0x5eed);
    let mut good = Vec::new();
    for mask in 0..16u32 {
        let mut psi = spec.psi_printed;
        for (i, t) in psi.iter_mut().enumerate().skip(1) {
            t.coef = t.coef.abs() * if mask >> (i - 1) & 1 == 1 { -1 } else { 1 };
        }
        psi[0].coef = psi[0].coef.abs();
        let ok = sols.iter().all(|eta| {
            let Ok(x) = psi_with(&k, &psi, eta) else { return false };
            let Ok(p) = ProjPoint::new(&k, x) else { return false };
            surf.on_surface_coords(&k, p.coords())
        });
        if ok {
            good.push((psi.iter().zip(&spec.psi_printed).filter(|(a, b)| a.coef != b.coef).count(), psi));
        }
    }
    // sign symmetries of the surface leave several choices; keep the one
    // closest to the printed signs
    good.sort_by_key(|g| g.0);
    match good.as_slice() {
        [] => Err(Error::Consistency(format!("no sign choice puts Ψ on {}", spec.surface))),
        [a, b, ..] if a.0 == b.0 => {
            Err(Error::Consistency(format!("Ψ signs for {} are not determined", spec.surface)))
        }
        [a, ..] => Ok(a.1),
    }
}

pub fn build_torsor_spec(s: SurfaceId) -> Result<TorsorSpec> {
    let r = raw(s)?;
    let psi_printed = r.psi.map(Term::parse);
    let mut spec = TorsorSpec {
        surface: s,
        oj_exponents: r.oj,
        u_exponents: [3, -1, -1, -1, -1, -1],
        height_conditions: r.conds.iter().map(|c| HeightCondition::parse(c, 1)).collect(),
        derived_conditions: r.derived.iter().map(|&(c, f)| HeightCondition::parse(c, f)).collect(),
        torsor_equation: r.torsor.map(Term::parse),
        zero_allowed: r.zero_allowed.to_vec(),
        nonzero_product: r.nonzero.to_vec(),
        adjacency: r.edges.to_vec(),
        psi_printed,
        psi: psi_printed,
    };
    spec.psi = calibrate_psi_signs(&spec, 100)?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_terms() {
        let t = Term::parse("-1^2 2 3^-1");
        assert_eq!(t.coef, -1);
        assert_eq!(&t.exps[..3], &[2, 1, -1]);
        let c = HeightCondition::parse("2 7 8^2 1^-1 + 4 5^3 6^2 7^2 8 1^-1", 1);
        assert_eq!(c.terms.len(), 2);
        assert!(c.as_pure_monomial().is_none());
    }

    #[test]
    fn s1_equation_and_adjacency() {
        let spec = build_torsor_spec(SurfaceId::S1).unwrap();
        assert_eq!(spec.torsor_equation[0], Term::parse("4 5^3 6^2 7"));
        assert!(!spec.adjacent(1, 2));
        assert!(spec.adjacent(8, 9));
        assert!(spec.coprime_pairs().contains(&(1, 2)));
        assert!(!spec.coprime_pairs().contains(&(8, 9)));
        assert_eq!(build_torsor_spec(SurfaceId::S4).unwrap().zero_allowed, vec![7, 8, 9]);
        assert!(build_torsor_spec(SurfaceId::S0).is_err());
    }

    #[test]
    fn s1_sign_flip() {
        let spec = build_torsor_spec(SurfaceId::S1).unwrap();
        assert_eq!(spec.psi_printed[1].coef, -1);
        assert_eq!(spec.psi[1].coef, 1);
        for s in [SurfaceId::S2, SurfaceId::S3, SurfaceId::S4] {
            let spec = build_torsor_spec(s).unwrap();
            assert_eq!(spec.psi, spec.psi_printed, "{s}");
        }
    }

    #[test]
    fn bareiss_det() {
        assert_eq!(det(vec![vec![2, 1], vec![1, 1]]), 1);
        assert_eq!(det(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]), -3);
    }
}
