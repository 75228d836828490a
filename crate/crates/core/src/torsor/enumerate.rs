use rustc_hash::FxHashMap;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::spec::{Term, TorsorSpec};
use crate::error::{Error, Result};
use crate::height::{canonical_key_of, PointKey};
use crate::qfield::lattice::SortedPoints;
use crate::qfield::{gcd, Element, FieldCtx, FieldElem, Ideal};

/// `Full` enumerates all of `M_C(B)`; `UnitReduced` keeps only canonical
/// associates for `η₁..η₆`, one point per orbit of the unit torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Full,
    UnitReduced,
}

/// A solution `(η₁, …, η₉)`.
pub type TorsorPoint = [FieldElem; 9];

const MARGIN: f64 = 1.0 + 1e-9;
const MAX_MONOS: usize = 24;

fn overflow() -> Error {
    Error::Consistency("integer overflow in exact torsor arithmetic".into())
}

fn cmul(a: i128, b: i128) -> Result<i128> {
    if (a.unsigned_abs() | b.unsigned_abs()) < 1 << 63 {
        return Ok(a.wrapping_mul(b));
    }
    a.checked_mul(b).ok_or_else(overflow)
}

fn cpow(a: i128, e: u32) -> Result<i128> {
    a.checked_pow(e).ok_or_else(overflow)
}

/// Nonzero elements `α` of the numerator lattice, sorted by norm.
struct PointList {
    norms: Vec<f64>,
    alphas: Vec<Element>,
    anorms: Vec<i128>,
    // η_j 𝒪_j⁻¹ and its norm for each entry
    ideals: Vec<Ideal>,
    inorms: Vec<i128>,
    embs: Vec<Complex64>,
}

impl PointList {
    fn new(k: &FieldCtx, num: &Ideal, den: i128, bound: f64, canonical_only: bool) -> PointList {
        let d2 = (den * den) as f64;
        let nb = (bound * d2 * MARGIN).floor();
        let nb = if nb > 1e30 { i128::MAX / 4 } else { nb as i128 };
        let [v0, v1] = num.z_basis();
        let sp = SortedPoints::new(k, v0, v1, nb);
        let (ns, es) = sp.up_to(nb);
        let mut out = PointList { norms: Vec::new(), alphas: Vec::new(), anorms: Vec::new(), ideals: Vec::new(), inorms: Vec::new(), embs: Vec::new() };
        let conj_num = num.conj(k);
        for (&n, &e) in ns.iter().zip(es) {
            if canonical_only && !k.is_canonical_associate(FieldElem::integral(e)) {
                continue;
            }
            out.norms.push(n as f64 / d2);
            out.alphas.push(e);
            out.anorms.push(n);
            out.ideals.push(quotient_ideal(k, e, &conj_num, num.norm()));
            out.inorms.push(n / num.norm());
            let (re, im) = k.embed(e);
            out.embs.push(Complex64::new(re, im));
        }
        out
    }

    fn len_up_to(&self, bound: f64) -> usize {
        self.norms.partition_point(|&q| q <= bound * MARGIN)
    }
}

/// `α · N⁻¹ = α · conj(N) / N(N)` for `α ∈ N`.
fn quotient_ideal(k: &FieldCtx, alpha: Element, conj_num: &Ideal, num_norm: i128) -> Ideal {
    let [u0, u1] = conj_num.z_basis();
    let s = [k.mul(alpha, u0), k.mul(alpha, u1)].map(|v| v.div_exact(num_norm));
    Ideal::from_generators(k, &s)
}

/// A pure monomial bound `∏ |η_i|^{e_i} ≤ factor · X` used to bound the search.
#[derive(Clone, Debug)]
struct Bounder {
    exps: [i32; 9],
    factor: f64,
}

/// A monomial in the numerators `α_j = δ_j η_j`: `η^e = coef · α^e / scale`.
#[derive(Clone, Copy, Debug)]
struct CTerm {
    coef: i128,
    exps: [u32; 9],
    scale: i128,
}

/// `N(Σ mult·term) · lhs_k ≤ rhs_k · N(den)`, the exact form of a height
/// condition in the numerators `α`.
#[derive(Clone, Debug)]
struct CCond {
    // (index into monos, integer multiplier)
    terms: Vec<(usize, i128)>,
    den: usize,
    lhs_k: i128,
    rhs_k: i128,
    // index of the last variable occurring
    level: usize,
}

/// One condition term as a function of the next variable `w`: `mult · z · w^e`.
#[derive(Clone, Copy, Default)]
struct FTerm {
    z: Complex64,
    e: i32,
    mult: f64,
}

/// Floating copy of a condition about to become decidable, used to discard
/// candidates that fail it by a wide margin before any exact arithmetic.
#[derive(Clone, Copy, Default)]
struct FCond {
    terms: [FTerm; 2],
    nterms: usize,
    den: FTerm,
    ratio: f64,
}

const FLOAT_SLACK: f64 = 1e-9;

impl FCond {
    fn surely_fails(&self, w: Complex64) -> bool {
        let mut s = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for t in &self.terms[..self.nterms] {
            let v = t.z * w.powi(t.e) * t.mult;
            s += v;
            mag += v.norm_sqr().sqrt();
        }
        let d = self.den.z * w.powi(self.den.e);
        let limit = (d.norm_sqr() * self.ratio).sqrt();
        s.norm_sqr().sqrt() > limit * (1.0 + FLOAT_SLACK) + FLOAT_SLACK * mag
    }
}

/// Everything needed to enumerate `M_C(B)` for a fixed class tuple.
pub struct ClassSetup<'a> {
    k: &'a FieldCtx,
    spec: &'a TorsorSpec,
    class_tuple: [Ideal; 6],
    nums: [Ideal; 9],
    dens: [i128; 9],
    num_norms: [i128; 9],
    conj_nums: [Ideal; 9],
    x: Ratio<i128>,
    xf: f64,
    mins: [f64; 9],
    zero_ok: [bool; 9],
    lists: Vec<PointList>,
    bounders: Vec<Vec<Bounder>>,
    pairs_at: Vec<Vec<usize>>,
    // torsor terms without η₉, then every condition term; see `State::pre`
    monos: Vec<CTerm>,
    torsor_l: i128,
    torsor_scales: [i128; 3],
    conds: Vec<CCond>,
    conds_at: Vec<Vec<usize>>,
    // (monomial, exponent) pairs with a positive exponent of η_j
    active: Vec<Vec<(usize, u32)>>,
    // Ψ monomials as (index into `monos`, multiplier to a common denominator)
    psi: [(usize, i128); 5],
}

fn ratio_f64(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl<'a> ClassSetup<'a> {
    pub fn new(
        k: &'a FieldCtx,
        spec: &'a TorsorSpec,
        c: &[Ideal; 6],
        bound: Ratio<i128>,
        mode: Mode,
    ) -> Result<ClassSetup<'a>> {
        let mut nums = [Ideal::UNIT; 9];
        let mut dens = [1i128; 9];
        let mut num_norms = [1i128; 9];
        let mut mins = [0.0; 9];
        for j in 0..9 {
            let o = spec.oj(k, c, j + 1)?;
            nums[j] = *o.numerator();
            dens[j] = o.denominator();
            num_norms[j] = nums[j].norm();
            mins[j] = ratio_f64(o.min_element(k)?.1);
        }
        let zero_ok: [bool; 9] = std::array::from_fn(|j| spec.is_zero_allowed(j + 1));
        let x = spec.u_c(c) * bound;
        let xf = ratio_f64(x);

        let mut pure: Vec<Bounder> = Vec::new();
        for h in spec.height_conditions.iter().chain(&spec.derived_conditions) {
            if let Some(t) = h.as_pure_monomial() {
                if t.exps[8] == 0 {
                    pure.push(Bounder { exps: t.exps, factor: h.factor as f64 });
                }
            }
        }
        let bounders: Vec<Vec<Bounder>> =
            (0..8).map(|j| pure.iter().filter(|b| b.exps[j] > 0).cloned().collect()).collect();
        let mut lists = Vec::with_capacity(8);
        for j in 0..8 {
            // largest possible |η_j|: other variables at their lattice minima
            let mut g = f64::INFINITY;
            for b in &bounders[j] {
                if (0..8).any(|i| i != j && b.exps[i] > 0 && zero_ok[i]) {
                    continue;
                }
                let denom: f64 = (0..8).filter(|&i| i != j).map(|i| mins[i].powi(b.exps[i])).product();
                g = g.min((b.factor * xf / denom).powf(1.0 / b.exps[j] as f64));
            }
            if !g.is_finite() {
                return Err(Error::Consistency(format!("η{} has no bounding condition", j + 1)));
            }
            let canonical = mode == Mode::UnitReduced && j < 6;
            lists.push(PointList::new(k, &nums[j], dens[j], g, canonical));
        }
        let pairs = spec.coprime_pairs();
        let pairs_at: Vec<Vec<usize>> = (1..=9)
            .map(|j| pairs.iter().filter(|&&(_, b)| b == j).map(|&(a, _)| a - 1).collect())
            .collect();

        let compile = |t: &Term| -> Result<CTerm> {
            let mut exps = [0u32; 9];
            let mut scale = 1i128;
            for j in 0..9 {
                assert!(t.exps[j] >= 0);
                exps[j] = t.exps[j] as u32;
                scale = cmul(scale, cpow(dens[j], exps[j])?)?;
            }
            Ok(CTerm { coef: t.coef, exps, scale })
        };
        let i9 = spec.eta9_term().0;
        let (ia, ib) = match i9 {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let mut cof = spec.torsor_equation[i9];
        if cof.exps[8] != 1 || [ia, ib].iter().any(|&i| spec.torsor_equation[i].exps[8] != 0) {
            return Err(Error::Unsupported("η9 must occur linearly in exactly one torsor term".into()));
        }
        cof.exps[8] = 0;
        let mut monos = vec![
            compile(&spec.torsor_equation[ia])?,
            compile(&spec.torsor_equation[ib])?,
            compile(&cof)?,
        ];
        let torsor_scales = [monos[0].scale, monos[1].scale, compile(&spec.torsor_equation[i9])?.scale];
        let torsor_l = monos[0].scale.lcm(&monos[1].scale);
        let mut conds = Vec::new();
        for h in &spec.height_conditions {
            let mut den = [0i32; 9];
            for j in 0..9 {
                den[j] = h.terms.iter().map(|t| (-t.exps[j]).max(0)).max().unwrap_or(0);
            }
            let mut terms = Vec::new();
            for t in &h.terms {
                let mut nt = *t;
                for j in 0..9 {
                    nt.exps[j] += den[j];
                }
                terms.push(compile(&nt)?);
            }
            let den_term = compile(&Term { coef: 1, exps: den })?;
            let lcm = terms.iter().fold(1i128, |l, t| l.lcm(&t.scale));
            let level = (0..9)
                .rev()
                .find(|&j| den[j] > 0 || terms.iter().any(|t| t.exps[j] > 0))
                .unwrap_or(0);
            let mut idx = Vec::new();
            for t in &terms {
                idx.push((monos.len(), lcm / t.scale));
                monos.push(*t);
            }
            let den_idx = monos.len();
            monos.push(den_term);
            let ds = den_term.scale;
            conds.push(CCond {
                terms: idx,
                den: den_idx,
                lhs_k: cmul(*x.denom(), cmul(ds, ds)?)?,
                rhs_k: cmul(cmul(h.factor, *x.numer())?, cmul(lcm, lcm)?)?,
                level,
            });
        }
        let conds_at = (0..9).map(|j| (0..conds.len()).filter(|&c| conds[c].level == j).collect()).collect();
        let mut psi = [(0usize, 1i128); 5];
        let mut psi_lcm = 1i128;
        for (i, t) in spec.psi.iter().enumerate() {
            let t = compile(t)?;
            psi_lcm = psi_lcm.lcm(&t.scale);
            psi[i] = (monos.len(), t.scale);
            monos.push(t);
        }
        for p in psi.iter_mut() {
            p.1 = psi_lcm / p.1;
        }
        let active = (0..9)
            .map(|j| monos.iter().enumerate().filter(|(_, t)| t.exps[j] > 0).map(|(m, t)| (m, t.exps[j])).collect())
            .collect();
        if monos.len() > MAX_MONOS {
            return Err(Error::Unsupported("too many height-condition monomials".into()));
        }
        Ok(ClassSetup {
            k,
            spec,
            class_tuple: *c,
            nums,
            dens,
            num_norms,
            conj_nums: nums.map(|n| n.conj(k)),
            x,
            xf,
            mins,
            zero_ok,
            lists,
            bounders,
            pairs_at,
            monos,
            torsor_l,
            torsor_scales,
            conds,
            conds_at,
            active,
            psi,
        })
    }

    pub fn class_tuple(&self) -> &[Ideal; 6] {
        &self.class_tuple
    }

    /// `u_C · B`.
    pub fn scaled_bound(&self) -> Ratio<i128> {
        self.x
    }

    /// Number of candidate values for `η₁`, including zero when allowed.
    pub fn outer_len(&self) -> usize {
        self.lists[0].alphas.len() + self.zero_ok[0] as usize
    }

    fn dynamic_bound(&self, j: usize, norms: &[f64; 9]) -> f64 {
        let mut g = f64::INFINITY;
        'conds: for b in &self.bounders[j] {
            let mut denom = 1.0;
            for i in 0..8 {
                let e = b.exps[i];
                if i == j || e == 0 {
                    continue;
                }
                let n = if i < j {
                    norms[i]
                } else if self.zero_ok[i] {
                    continue 'conds;
                } else {
                    self.mins[i]
                };
                if n == 0.0 {
                    continue 'conds;
                }
                denom *= n.powi(e);
            }
            g = g.min((b.factor * self.xf / denom).powf(1.0 / b.exps[j] as f64));
        }
        g
    }

    fn ideal_of(&self, j: usize, alpha: Element) -> Ideal {
        quotient_ideal(self.k, alpha, &self.conj_nums[j], self.num_norms[j])
    }

    fn coprime(&self, i: usize, j: usize, st: &mut State) -> bool {
        let (ni, nj) = (st.inorm[i], st.inorm[j]);
        if ni == 0 {
            return nj == 1;
        }
        if nj == 0 {
            return ni == 1;
        }
        if gcd(ni, nj) == 1 {
            return true;
        }
        let a = match st.ideals[i] {
            Some(a) => a,
            None => *st.ideals[i].insert(self.ideal_of(i, st.alpha[i])),
        };
        let b = match st.ideals[j] {
            Some(b) => b,
            None => *st.ideals[j].insert(self.ideal_of(j, st.alpha[j])),
        };
        a.sum(&b).is_unit()
    }

    fn assign(&self, j: usize, alpha: Element, anorm: i128, nf: f64, ideal: Option<(Ideal, i128)>, st: &mut State) -> bool {
        st.alpha[j] = alpha;
        st.anorm[j] = anorm;
        st.norms[j] = nf;
        match ideal {
            Some((i, n)) => {
                st.inorm[j] = n;
                st.ideals[j] = Some(i);
            }
            None => {
                st.inorm[j] = anorm / self.num_norms[j];
                st.ideals[j] = None;
            }
        }
        self.pairs_at[j].iter().all(|&i| self.coprime(i, j, st))
    }

    fn new_state(&self) -> State {
        let mut st = State::default();
        for (m, t) in self.monos.iter().enumerate() {
            st.pre[0][m] = Element::from_int(t.coef);
        }
        st
    }

    /// Extends the prefix products by `α_j`.
    fn extend(&self, j: usize, st: &mut State) {
        let a = st.alpha[j];
        st.pre[j + 1] = st.pre[j];
        for &(m, e) in &self.active[j] {
            let mut v = st.pre[j][m];
            for _ in 0..e {
                v = self.k.mul(v, a);
            }
            st.pre[j + 1][m] = v;
        }
    }

    /// Solves the torsor equation for `α₉ = δ₉ η₉`; `None` if `η₉ ∉ 𝒪₉`.
    fn solve_alpha9(&self, st: &State) -> Result<Option<Element>> {
        let pre = &st.pre[8];
        let [sa, sb, sc] = self.torsor_scales;
        let l = self.torsor_l;
        let s = pre[0].scale(l / sa) + pre[1].scale(l / sb);
        let cof = pre[2];
        // α₉ = −s·scale_c / (l · cof)
        let p = self.k.mul(-s, self.k.conj(cof)).scale(sc);
        let q = cmul(l, self.k.norm(cof))?;
        if !p.is_divisible_by(q) {
            return Ok(None);
        }
        let a9 = p.div_exact(q);
        Ok(self.nums[8].contains(a9).then_some(a9))
    }

    /// Monomial `m` on the full tuple; `pre[8]` already covers `α₁..α₈`.
    fn term_value(&self, m: usize, st: &State) -> Element {
        let mut v = st.pre[8][m];
        for _ in 0..self.monos[m].exps[8] {
            v = self.k.mul(v, st.alpha[8]);
        }
        v
    }

    fn condition_holds(&self, c: &CCond, st: &State) -> Result<bool> {
        let value = |m: usize| if c.level == 8 { self.term_value(m, st) } else { st.pre[c.level + 1][m] };
        let mut s = Element::ZERO;
        for &(m, mult) in &c.terms {
            s = s + value(m).scale(mult);
        }
        let lhs = cmul(self.k.norm(s), c.lhs_k)?;
        let rhs = cmul(self.k.norm(value(c.den)), c.rhs_k)?;
        Ok(lhs <= rhs)
    }

    fn conditions_hold(&self, j: usize, st: &State) -> Result<bool> {
        for &c in &self.conds_at[j] {
            if !self.condition_holds(&self.conds[c], st)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn leaf(&self, st: &mut State, visit: &mut dyn FnMut(&Leaf)) -> Result<()> {
        let Some(a9) = self.solve_alpha9(st)? else { return Ok(()) };
        let n9 = self.k.norm(a9);
        if !self.assign(8, a9, n9, 0.0, None, st) {
            return Ok(());
        }
        for &j in &self.spec.nonzero_product {
            if st.alpha[j - 1].is_zero() {
                return Ok(());
            }
        }
        if self.conditions_hold(8, st)? {
            visit(&Leaf { setup: self, st });
        }
        Ok(())
    }

    fn descend(&self, j: usize, st: &mut State, visit: &mut dyn FnMut(&Leaf)) -> Result<()> {
        self.extend(j, st);
        if self.conditions_hold(j, st)? {
            self.rec(j + 1, st, visit)?;
        }
        Ok(())
    }

    fn float_conds(&self, j: usize, st: &State) -> ([FCond; 4], usize) {
        let mut out = [FCond::default(); 4];
        let mut n = 0;
        let term = |m: usize, mult: i128| {
            let (re, im) = self.k.embed(st.pre[j][m]);
            FTerm { z: Complex64::new(re, im), e: self.monos[m].exps[j] as i32, mult: mult as f64 }
        };
        for &c in self.conds_at[j].iter() {
            let c = &self.conds[c];
            if n == out.len() || c.terms.len() > 2 {
                continue;
            }
            let f = &mut out[n];
            for (i, &(m, mult)) in c.terms.iter().enumerate() {
                f.terms[i] = term(m, mult);
            }
            f.nterms = c.terms.len();
            f.den = term(c.den, 1);
            f.ratio = c.rhs_k as f64 / c.lhs_k as f64;
            n += 1;
        }
        (out, n)
    }

    fn rec(&self, j: usize, st: &mut State, visit: &mut dyn FnMut(&Leaf)) -> Result<()> {
        if j == 8 {
            return self.leaf(st, visit);
        }
        let g = self.dynamic_bound(j, &st.norms);
        if self.zero_ok[j] && self.assign(j, Element::ZERO, 0, 0.0, Some((Ideal::ZERO, 0)), st) {
            self.descend(j, st, visit)?;
        }
        let (fconds, nf) = self.float_conds(j, st);
        let list = &self.lists[j];
        for n in 0..list.len_up_to(g) {
            let w = list.embs[n];
            if fconds[..nf].iter().any(|f| f.surely_fails(w)) {
                continue;
            }
            if self.assign(j, list.alphas[n], list.anorms[n], list.norms[n], Some((list.ideals[n], list.inorms[n])), st) {
                self.descend(j, st, visit)?;
            }
        }
        Ok(())
    }

    /// Visits the points whose `η₁` is the `n`-th outer candidate.
    pub fn enumerate_outer(&self, n: usize, visit: &mut dyn FnMut(&Leaf)) -> Result<()> {
        let mut st = self.new_state();
        let zero = self.zero_ok[0] as usize;
        let ok = if n < zero {
            self.assign(0, Element::ZERO, 0, 0.0, Some((Ideal::ZERO, 0)), &mut st)
        } else {
            let l = &self.lists[0];
            let m = n - zero;
            if m >= l.alphas.len() {
                return Ok(());
            }
            self.assign(0, l.alphas[m], l.anorms[m], l.norms[m], Some((l.ideals[m], l.inorms[m])), &mut st)
        };
        if ok {
            self.descend(0, &mut st, visit)?;
        }
        Ok(())
    }

    pub fn enumerate(&self, visit: &mut dyn FnMut(&Leaf)) -> Result<()> {
        for n in 0..self.outer_len() {
            self.enumerate_outer(n, visit)?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct State {
    alpha: [Element; 9],
    anorm: [i128; 9],
    norms: [f64; 9],
    inorm: [i128; 9],
    ideals: [Option<Ideal>; 9],
    // pre[j][m]: monomial m evaluated on α₁..α_j
    pre: [[Element; MAX_MONOS]; 9],
}

/// A point of `M_C(B)` as seen by a visitor.
pub struct Leaf<'s, 'a> {
    setup: &'s ClassSetup<'a>,
    st: &'s State,
}

impl Leaf<'_, '_> {
    pub fn eta(&self) -> TorsorPoint {
        std::array::from_fn(|j| FieldElem::new(self.st.alpha[j], self.setup.dens[j]))
    }

    /// Integral coordinates proportional to `Ψ(η)`.
    pub fn psi_coords(&self) -> [Element; 5] {
        let s = self.setup;
        s.psi.map(|(m, mult)| s.term_value(m, self.st).scale(mult))
    }

    pub fn class_tuple(&self) -> &[Ideal; 6] {
        &self.setup.class_tuple
    }
}

/// All class tuples `C ∈ 𝒞⁶` in lexicographic order.
pub fn class_tuples(k: &FieldCtx) -> Vec<[Ideal; 6]> {
    let reps = k.class_reps();
    let h = reps.len();
    (0..h.pow(6))
        .map(|mut n| {
            let mut t = [Ideal::UNIT; 6];
            for slot in t.iter_mut().rev() {
                *slot = reps[n % h];
                n /= h;
            }
            t
        })
        .collect()
}

/// `M_C(B)` as a list.
pub fn enumerate_m(
    k: &FieldCtx,
    spec: &TorsorSpec,
    c: &[Ideal; 6],
    bound: Ratio<i128>,
) -> Result<Vec<TorsorPoint>> {
    let setup = ClassSetup::new(k, spec, c, bound, Mode::Full)?;
    let mut out = Vec::new();
    setup.enumerate(&mut |l| out.push(l.eta()))?;
    Ok(out)
}

/// Parallel fold over all enumerated points for every class tuple.
pub fn fold_points<T, F, R>(
    k: &FieldCtx,
    spec: &TorsorSpec,
    bound: Ratio<i128>,
    mode: Mode,
    init: impl Fn() -> T + Sync + Send,
    fold: F,
    reduce: R,
) -> Result<T>
where
    T: Send,
    F: Fn(&mut T, &Leaf) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let tuples = class_tuples(k);
    let setups: Vec<ClassSetup> = tuples
        .par_iter()
        .map(|c| ClassSetup::new(k, spec, c, bound, mode))
        .collect::<Result<_>>()?;
    let work: Vec<(usize, usize)> = setups
        .iter()
        .enumerate()
        .flat_map(|(i, s)| (0..s.outer_len()).map(move |n| (i, n)))
        .collect();
    work.par_iter()
        .map(|&(i, n)| {
            let mut acc = init();
            setups[i].enumerate_outer(n, &mut |l| fold(&mut acc, l))?;
            Ok(acc)
        })
        .try_reduce(&init, |a, b| Ok(reduce(a, b)))
}

/// Result of a torsor count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TorsorCount {
    /// `Σ_C |M_C(B)|` in full mode, or the number of reduced points.
    pub raw: u64,
    pub count: u64,
    pub mode: Mode,
}

/// Whether unit reduction is valid: the exponent rows of `η₁..η₆` are
/// unimodular and those variables never vanish.
pub fn unit_reduction_valid(spec: &TorsorSpec) -> bool {
    spec.unit_block_det().abs() == 1 && (1..=6).all(|j| !spec.is_zero_allowed(j))
}

/// Divides `Σ_C |M_C(B)|` by `ω_K⁶`, failing if it does not divide.
pub fn normalize_count(k: &FieldCtx, raw: u64, mode: Mode) -> Result<TorsorCount> {
    let count = match mode {
        Mode::UnitReduced => raw,
        Mode::Full => {
            let w6 = (k.omega_count() as u64).pow(6);
            if raw % w6 != 0 {
                return Err(Error::Consistency(format!("Σ|M_C(B)| = {raw} is not divisible by ω_K⁶ = {w6}")));
            }
            raw / w6
        }
    };
    Ok(TorsorCount { raw, count, mode })
}

/// `N_{U,H}(B) = ω_K⁻⁶ Σ_C |M_C(B)|`.
pub fn torsor_count(k: &FieldCtx, spec: &TorsorSpec, bound: Ratio<i128>, mode: Mode) -> Result<TorsorCount> {
    if mode == Mode::UnitReduced && !unit_reduction_valid(spec) {
        return Err(Error::Unsupported(format!("unit reduction is not valid for {}", spec.surface)));
    }
    let raw = fold_points(k, spec, bound, mode, || 0u64, |a, _| *a += 1, |a, b| a + b)?;
    normalize_count(k, raw, mode)
}

/// The raw count `Σ_C |M_C(B)|` together with the multiset of canonical keys
/// of the Ψ-images.
pub fn psi_multiset(
    k: &FieldCtx,
    spec: &TorsorSpec,
    bound: Ratio<i128>,
    mode: Mode,
) -> Result<(u64, FxHashMap<PointKey, u64>)> {
    fold_points(
        k,
        spec,
        bound,
        mode,
        || (0u64, FxHashMap::default()),
        |(n, m): &mut (u64, FxHashMap<PointKey, u64>), l| {
            *n += 1;
            *m.entry(canonical_key_of(k, &l.psi_coords())).or_default() += 1;
        },
        |(n1, mut m1), (n2, m2)| {
            for (key, c) in m2 {
                *m1.entry(key).or_default() += c;
            }
            (n1 + n2, m1)
        },
    )
}
