//! Characteristic roots λ(ζ) of P(λ, ζ) = 0 at ζ → ∞.
//!
//! Pole orders q come from the upper hull of the exponent points
//! (λ-degree, ζ-degree); leaders are the nonzero roots of each edge
//! polynomial, with multiplicities from an exact squarefree decomposition.

use crate::expr_parser::Operator;
use crate::newton_polygon::{build_polygon, SideKind};
use crate::numeric::poly::{roots_with_multiplicity, QPoly, RootError};
use crate::numeric::{MpComplex, MpFloat, RationalComplex};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharRootsError {
    #[error("operator has no ∂t term (deg_λ P = 0)")]
    NoTimeDerivative,
    #[error("edge polynomial vanishes identically")]
    DegenerateEdge,
    #[error("leader has multiplicity {0}; expansion needs a simple branch")]
    MultipleBranch(u32),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("leading coefficient is zero")]
    ZeroLeader,
    #[error("series is not a simple pole at infinity (κ = {kappa}, leading exponent {lead})")]
    NotSimplePole { kappa: u32, lead: String },
    #[error("root finding failed: {0}")]
    Root(#[from] RootError),
    #[error("leader index {0} out of range")]
    NoSuchLeader(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Leader {
    pub value: MpComplex,
    pub multiplicity: u32,
}

/// Branches λ(ζ) ∼ λ ζ^q sharing the pole order q.
#[derive(Clone, Debug, PartialEq)]
pub struct RootGroup {
    pub q: BigRational,
    pub kappa: u32,
    /// Sorted by descending modulus, then argument.
    pub leaders: Vec<Leader>,
    /// Exact edge polynomial in c (ascending), from which leaders come.
    pub edge: QPoly,
}

impl RootGroup {
    pub fn total_multiplicity(&self) -> u32 {
        self.leaders.iter().map(|l| l.multiplicity).sum()
    }

    /// Leader moduli repeated by multiplicity, descending.
    pub fn moduli_with_multiplicity(&self) -> Vec<MpFloat> {
        self.leaders.iter().flat_map(|l| std::iter::repeat_n(l.value.abs(), l.multiplicity as usize)).collect()
    }
}

#[derive(Serialize)]
pub struct LeaderView {
    pub re: f64,
    pub im: f64,
    pub mult: u32,
}

#[derive(Serialize)]
pub struct RootGroupView {
    pub q: String,
    pub kappa: u32,
    pub leaders: Vec<LeaderView>,
}

impl From<&RootGroup> for RootGroupView {
    fn from(g: &RootGroup) -> Self {
        RootGroupView {
            q: g.q.to_string(),
            kappa: g.kappa,
            leaders: g
                .leaders
                .iter()
                .map(|l| LeaderView { re: l.value.re.to_f64(), im: l.value.im.to_f64(), mult: l.multiplicity })
                .collect(),
        }
    }
}

/// A(j) = max α with a_{jα} ≠ 0.
fn top_alpha(op: &Operator) -> BTreeMap<u32, u32> {
    let mut a: BTreeMap<u32, u32> = BTreeMap::new();
    for &(j, al) in op.terms().keys() {
        let e = a.entry(j).or_insert(al);
        *e = (*e).max(al);
    }
    a
}

/// Upper-hull vertices of {(j, A(j))}, increasing j.
fn upper_hull(op: &Operator) -> Vec<(i64, i64)> {
    let pts: Vec<(i64, i64)> = top_alpha(op).into_iter().map(|(j, a)| (j as i64, a as i64)).collect();
    let mut h: Vec<(i64, i64)> = Vec::new();
    for p in pts {
        while h.len() >= 2 {
            let (o, a) = (h[h.len() - 2], h[h.len() - 1]);
            let cr = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cr >= 0 {
                h.pop();
            } else {
                break;
            }
        }
        h.push(p);
    }
    h
}

fn edge_value(q: &BigRational, j: u32, a: u32) -> BigRational {
    q * BigRational::from_integer(j.into()) + BigRational::from_integer(a.into())
}

fn sort_leaders(v: &mut [Leader]) {
    v.sort_by(|x, y| {
        let (mx, my) = (x.value.norm_sqr(), y.value.norm_sqr());
        my.partial_cmp(&mx).unwrap().then_with(|| x.value.arg().partial_cmp(&y.value.arg()).unwrap())
    });
}

pub fn root_groups(op: &Operator, prec: u32) -> Result<Vec<RootGroup>, CharRootsError> {
    if op.t_order() == 0 {
        return Err(CharRootsError::NoTimeDerivative);
    }
    let hull = upper_hull(op);
    let mut groups = Vec::new();
    for w in hull.windows(2) {
        let ((j1, a1), (j2, a2)) = (w[0], w[1]);
        let q = BigRational::new(BigInt::from(a1 - a2), BigInt::from(j2 - j1));
        let level = edge_value(&q, j1 as u32, a1 as u32);
        let mut c = vec![RationalComplex::zero(); (j2 - j1) as usize + 1];
        for (&(j, a), v) in op.terms() {
            if j as i64 >= j1 && j as i64 <= j2 && edge_value(&q, j, a) == level {
                c[(j as i64 - j1) as usize] += v;
            }
        }
        let edge = QPoly::new(c);
        if edge.degree() < 1 {
            return Err(CharRootsError::DegenerateEdge);
        }
        let mut leaders: Vec<Leader> = roots_with_multiplicity(&edge, prec)?
            .into_iter()
            .filter(|(z, _)| !z.is_zero())
            .map(|(value, multiplicity)| Leader { value, multiplicity })
            .collect();
        sort_leaders(&mut leaders);
        let kappa = q.denom().to_u32().expect("ramification fits u32");
        groups.push(RootGroup { q, kappa, leaders, edge });
    }
    groups.sort_by(|a, b| b.q.cmp(&a.q));
    Ok(groups)
}

/// λ(ζ) = Σ_i coeffs[i] ζ^{leadExp − i/κ}, i.e. a Laurent series in ξ = ζ^{1/κ}.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxSeries {
    pub kappa: u32,
    pub lead_exp: BigRational,
    pub coeffs: Vec<MpComplex>,
    pub prec: u32,
}

impl PuiseuxSeries {
    /// Evaluate at ζ using the principal ξ = ζ^{1/κ}.
    pub fn eval(&self, zeta: &MpComplex) -> MpComplex {
        let xi = zeta.root(self.kappa);
        let x = xi.recip();
        let n = (&self.lead_exp * BigRational::from_integer(self.kappa.into())).to_integer().to_i64().unwrap();
        let mut acc = MpComplex::zero(self.prec);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        &acc * &xi.powi(n)
    }

    fn n(&self) -> i64 {
        (&self.lead_exp * BigRational::from_integer(self.kappa.into())).to_integer().to_i64().unwrap()
    }
}

fn series_mul(a: &[MpComplex], b: &[MpComplex], len: usize, prec: u32) -> Vec<MpComplex> {
    let mut out = vec![MpComplex::zero(prec); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Newton–Puiseux expansion of the branch with the given leader.
///
/// With x = 1/ξ and λ = ξ^n y(x), P(λ, ξ^κ) = x^{−D} G(x, y); the
/// coefficients y_i follow from [x^i] G(x, y(x)) = 0 one at a time.
pub fn puiseux_expand(
    op: &Operator,
    group: &RootGroup,
    leader: usize,
    order: usize,
    prec: u32,
) -> Result<PuiseuxSeries, CharRootsError> {
    let l = group.leaders.get(leader).ok_or(CharRootsError::NoSuchLeader(leader))?;
    if l.multiplicity > 1 {
        return Err(CharRootsError::MultipleBranch(l.multiplicity));
    }
    let order = order.max(1);
    let kappa = group.kappa;
    let n = (&group.q * BigRational::from_integer(kappa.into())).to_integer().to_i64().unwrap();
    let k = kappa as i64;
    let d = op.terms().keys().map(|&(j, a)| n * j as i64 + k * a as i64).max().unwrap();
    let wp = prec + 32;
    // G(x, y) = Σ a x^{e} y^j
    let g_terms: Vec<(usize, usize, MpComplex)> = op
        .terms()
        .iter()
        .map(|(&(j, a), v)| ((d - n * j as i64 - k * a as i64) as usize, j as usize, MpComplex::from_rc(v, wp)))
        .collect();
    let c0 = l.value.with_prec(wp);
    // G_y(0, c0)
    let mut gy = MpComplex::zero(wp);
    for (e, j, a) in &g_terms {
        if *e == 0 && *j >= 1 {
            gy = &gy + &(&a.mul_i64(*j as i64) * &c0.powi(*j as i64 - 1));
        }
    }
    let gy_mag = gy.abs().mag_exp();
    let scale = c0.abs().mag_exp().max(0);
    if gy.is_zero() || gy_mag < scale - (prec as i64) / 2 {
        return Err(CharRootsError::PrecisionLoss("G_y(0, c) vanishes at working precision".into()));
    }
    let jmax = g_terms.iter().map(|t| t.1).max().unwrap();
    let mut y = vec![c0.clone()];
    for i in 1..order {
        let len = i + 1;
        let mut ycur = y.clone();
        ycur.resize(len, MpComplex::zero(wp));
        // powers of y mod x^{len}
        let mut pows = vec![{
            let mut one = vec![MpComplex::zero(wp); len];
            one[0] = MpComplex::one(wp);
            one
        }];
        for p in 1..=jmax {
            let next = series_mul(&pows[p - 1], &ycur, len, wp);
            pows.push(next);
        }
        let mut coeff = MpComplex::zero(wp);
        for (e, j, a) in &g_terms {
            if *e <= i {
                coeff = &coeff + &(a * &pows[*j][i - e]);
            }
        }
        y.push(-(&coeff / &gy));
    }
    Ok(PuiseuxSeries { kappa, lead_exp: group.q.clone(), coeffs: y.into_iter().map(|c| c.with_prec(prec)).collect(), prec })
}

/// |P(λ_N(ζ), ζ)| for a truncated branch.
pub fn residual_at(op: &Operator, ps: &PuiseuxSeries, zeta: &MpComplex) -> MpFloat {
    let lam = ps.eval(zeta);
    let mut acc = MpComplex::zero(ps.prec);
    for (&(j, a), v) in op.terms() {
        let t = &(&MpComplex::from_rc(v, ps.prec) * &lam.powi(j as i64)) * &zeta.powi(a as i64);
        acc = &acc + &t;
    }
    acc.abs()
}

/// The exponent D with P = ξ^{D} G: residuals of an N-term expansion decay like |ξ|^{D−N}.
pub fn leading_degree(op: &Operator, ps: &PuiseuxSeries) -> i64 {
    let n = ps.n();
    let k = ps.kappa as i64;
    op.terms().keys().map(|&(j, a)| n * j as i64 + k * a as i64).max().unwrap()
}

/// g^{p} for a power series g with g_0 ≠ 0, p = num/den, principal branch of g_0^p.
fn series_pow(g: &[MpComplex], num: i64, den: i64, prec: u32) -> Vec<MpComplex> {
    let p = MpFloat::from_i64(num, prec).div_i64(den);
    let mut b = vec![g[0].powf(&p)];
    let a0inv = g[0].recip();
    for k in 1..g.len() {
        let mut s = MpComplex::zero(prec);
        for i in 1..=k {
            let w = &(&p * &MpFloat::from_i64(i as i64, prec)) - &MpFloat::from_i64((k - i) as i64, prec);
            s = &s + &(&g[i] * &b[k - i]).scale(&w);
        }
        b.push((&s * &a0inv).div_i64(k as i64));
    }
    b
}

/// λ̃(ζ) = (λ(ζ^κ))^{1/κ} = ζ·g(ζ)^{1/κ} for a branch λ(ζ) ∼ λζ of ramification κ.
///
/// Input: leading exponent 1 with ramification κ, so that the coefficients
/// are those of g(ζ) in λ(ζ^κ) = ζ^κ g(ζ). Output has κ = 1.
pub fn rebranch_simple_pole(ps: &PuiseuxSeries) -> Result<PuiseuxSeries, CharRootsError> {
    if ps.lead_exp != BigRational::one() {
        return Err(CharRootsError::NotSimplePole { kappa: ps.kappa, lead: ps.lead_exp.to_string() });
    }
    if ps.coeffs.is_empty() || ps.coeffs[0].is_zero() {
        return Err(CharRootsError::ZeroLeader);
    }
    let wp = ps.prec + 16;
    let g: Vec<MpComplex> = ps.coeffs.iter().map(|c| c.with_prec(wp)).collect();
    let b = series_pow(&g, 1, ps.kappa as i64, wp);
    Ok(PuiseuxSeries {
        kappa: 1,
        lead_exp: BigRational::one(),
        coeffs: b.into_iter().map(|c| c.with_prec(ps.prec)).collect(),
        prec: ps.prec,
    })
}

fn check_simple_pole(ps: &PuiseuxSeries) -> Result<(), CharRootsError> {
    if ps.kappa != 1 || ps.lead_exp != BigRational::one() {
        return Err(CharRootsError::NotSimplePole { kappa: ps.kappa, lead: ps.lead_exp.to_string() });
    }
    if ps.coeffs.is_empty() || ps.coeffs[0].is_zero() {
        return Err(CharRootsError::ZeroLeader);
    }
    Ok(())
}

fn series_recip(a: &[MpComplex], prec: u32) -> Vec<MpComplex> {
    let inv0 = a[0].recip();
    let mut b = vec![inv0.clone()];
    for k in 1..a.len() {
        let mut s = MpComplex::zero(prec);
        for i in 1..=k {
            s = &s + &(&a[i] * &b[k - i]);
        }
        b.push(-(&s * &inv0));
    }
    b
}

/// Compositional inverse of λ̃(ζ) = Σ c_i ζ^{1−i} to `order` terms.
///
/// With x = 1/ζ, h(x) = 1/λ̃(1/x) = x/l(x) is a power series with h'(0) ≠ 0;
/// its reversion x(u) is built term by term from the powers of x(u), then
/// μ(w) = 1/x(1/w).
pub fn invert_series(ps: &PuiseuxSeries, order: usize) -> Result<PuiseuxSeries, CharRootsError> {
    check_simple_pole(ps)?;
    let wp = ps.prec + 32;
    let n = order.max(1) + 1;
    let mut l: Vec<MpComplex> = ps.coeffs.iter().map(|c| c.with_prec(wp)).collect();
    l.resize(n, MpComplex::zero(wp));
    // h(x) = Σ_{i≥1} h_i x^i with h_i = (1/l)_{i−1}
    let m = series_recip(&l, wp);
    let h: Vec<MpComplex> = std::iter::once(MpComplex::zero(wp)).chain(m).take(n + 1).collect();
    // powers P[i][k] = [u^k] x(u)^i
    let mut r = vec![MpComplex::zero(wp); n + 1];
    let mut pw: Vec<Vec<MpComplex>> = vec![vec![MpComplex::zero(wp); n + 1]; n + 1];
    let h1inv = h[1].recip();
    for k in 1..=n {
        for i in 2..=k {
            let mut s = MpComplex::zero(wp);
            for t in 1..=(k + 1 - i) {
                if !r[t].is_zero() && !pw[i - 1][k - t].is_zero() {
                    s = &s + &(&r[t] * &pw[i - 1][k - t]);
                }
            }
            pw[i][k] = s;
        }
        let mut t = MpComplex::zero(wp);
        for i in 2..=k {
            t = &t + &(&h[i] * &pw[i][k]);
        }
        let delta = if k == 1 { MpComplex::one(wp) } else { MpComplex::zero(wp) };
        r[k] = &(&delta - &t) * &h1inv;
        pw[1][k] = r[k].clone();
    }
    // x(u) = u (r_1 + r_2 u + …) ⇒ μ = w / (r_1 + r_2/w + …)
    let rr: Vec<MpComplex> = r[1..].to_vec();
    let mu = series_recip(&rr, wp);
    Ok(PuiseuxSeries {
        kappa: 1,
        lead_exp: BigRational::one(),
        coeffs: mu.into_iter().take(order.max(1)).map(|c| c.with_prec(ps.prec)).collect(),
        prec: ps.prec,
    })
}

/// outer(inner(w)) for two simple-pole series, as a simple-pole series in w.
pub fn compose(outer: &PuiseuxSeries, inner: &PuiseuxSeries, order: usize) -> Result<PuiseuxSeries, CharRootsError> {
    check_simple_pole(outer)?;
    check_simple_pole(inner)?;
    let wp = outer.prec.max(inner.prec) + 32;
    let n = order.max(1);
    let mut m: Vec<MpComplex> = inner.coeffs.iter().map(|c| c.with_prec(wp)).collect();
    m.resize(n, MpComplex::zero(wp));
    let minv = series_recip(&m, wp);
    let c = |i: usize| outer.coeffs.get(i).map(|x| x.with_prec(wp)).unwrap_or_else(|| MpComplex::zero(wp));
    // λ̃(μ) = w [c_0 m(u) + c_1 u + Σ_{i≥2} c_i u^i (1/m)^{i−1}]
    let mut out: Vec<MpComplex> = m.iter().map(|x| x * &c(0)).collect();
    if n > 1 {
        out[1] = &out[1] + &c(1);
    }
    let mut p = minv.clone();
    for i in 2..n {
        let ci = c(i);
        for k in 0..(n - i) {
            out[i + k] = &out[i + k] + &(&ci * &p[k]);
        }
        p = series_mul(&p, &minv, n, wp);
    }
    Ok(PuiseuxSeries {
        kappa: 1,
        lead_exp: BigRational::one(),
        coeffs: out.into_iter().map(|x| x.with_prec(outer.prec)).collect(),
        prec: outer.prec,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct ConsistencyEntry {
    /// Gevrey index of the side ("0" for the vertical side); `None` when a group has no side.
    pub side_s: Option<String>,
    pub group_q: Option<String>,
    pub side_lattice_length: Option<u32>,
    pub group_multiplicity: Option<u32>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct ConsistencyReport {
    pub entries: Vec<ConsistencyEntry>,
    pub all_ok: bool,
}

/// Pairs each side of index s ≥ 0 with the root group q = 1 + s.
pub fn slopes_consistency(op: &Operator, prec: u32) -> Result<ConsistencyReport, CharRootsError> {
    let np = build_polygon(op);
    let groups = if op.t_order() == 0 { vec![] } else { root_groups(op, prec)? };
    let mut entries = Vec::new();
    let mut used = vec![false; groups.len()];
    for side in &np.sides {
        let s = match &side.kind {
            SideKind::Finite { s, .. } => s.clone(),
            SideKind::Vertical => BigRational::zero(),
            SideKind::Horizontal => continue,
        };
        let q = &s + BigRational::one();
        let len = (side.to.y - side.from.y).unsigned_abs() as u32;
        let gi = groups.iter().position(|g| g.q == q);
        let (gq, gm) = match gi {
            Some(i) => {
                used[i] = true;
                (Some(groups[i].q.to_string()), Some(groups[i].total_multiplicity()))
            }
            None => (None, None),
        };
        entries.push(ConsistencyEntry {
            side_s: Some(s.to_string()),
            group_q: gq,
            side_lattice_length: Some(len),
            group_multiplicity: gm,
            ok: gi.is_some() && gm == Some(len),
        });
    }
    for (g, u) in groups.iter().zip(&used) {
        if !u && g.q >= BigRational::one() {
            entries.push(ConsistencyEntry {
                side_s: None,
                group_q: Some(g.q.to_string()),
                side_lattice_length: None,
                group_multiplicity: Some(g.total_multiplicity()),
                ok: false,
            });
        }
    }
    let all_ok = entries.iter().all(|e| e.ok);
    Ok(ConsistencyReport { entries, all_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_parser::parse_operator;

    const P: u32 = 128;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn c(re: f64, im: f64) -> MpComplex {
        MpComplex::from_f64(re, im, P)
    }

    fn near(a: &MpComplex, re: f64, im: f64, tol: f64) -> bool {
        let z = a.to_c64();
        (z.re - re).abs() < tol && (z.im - im).abs() < tol
    }

    #[test]
    fn groups_examples() {
        let g = root_groups(&parse_operator("Dt - Dz^2").unwrap(), P).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!((g[0].q.clone(), g[0].kappa), (q(2, 1), 1));
        assert!(near(&g[0].leaders[0].value, 1.0, 0.0, 1e-30));

        let g = root_groups(&parse_operator("Dt^2 - 3*Dz*Dt + 2*Dz^2").unwrap(), P).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].q, q(1, 1));
        assert!(near(&g[0].leaders[0].value, 2.0, 0.0, 1e-30));
        assert!(near(&g[0].leaders[1].value, 1.0, 0.0, 1e-30));

        let g = root_groups(&parse_operator("Dt^2 - Dz^3").unwrap(), P).unwrap();
        assert_eq!((g[0].q.clone(), g[0].kappa), (q(3, 2), 2));
        let mut re: Vec<f64> = g[0].leaders.iter().map(|l| l.value.re.to_f64()).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] + 1.0).abs() < 1e-30 && (re[1] - 1.0).abs() < 1e-30);
    }

    #[test]
    fn multiplicity_exact() {
        let g = root_groups(&parse_operator("(Dt - Dz)^2").unwrap(), P).unwrap();
        assert_eq!(g[0].leaders.len(), 1);
        assert_eq!(g[0].leaders[0].multiplicity, 2);
        let op = parse_operator("(Dt - Dz)^2").unwrap();
        assert!(matches!(puiseux_expand(&op, &g[0], 0, 4, P), Err(CharRootsError::MultipleBranch(2))));
    }

    #[test]
    fn puiseux_sqrt_zeta2_plus_1() {
        let op = parse_operator("Dt^2 - Dz^2 - 1").unwrap();
        let g = root_groups(&op, P).unwrap();
        let idx = g[0].leaders.iter().position(|l| l.value.re.to_f64() > 0.0).unwrap();
        let ps = puiseux_expand(&op, &g[0], idx, 8, P).unwrap();
        // √(ζ²+1) = ζ + 1/2 ζ^{-1} − 1/8 ζ^{-3} + 1/16 ζ^{-5} − 5/128 ζ^{-7}
        let want = [1.0, 0.0, 0.5, 0.0, -0.125, 0.0, 0.0625, 0.0];
        for (a, w) in ps.coeffs.iter().zip(want) {
            assert!(near(a, w, 0.0, 1e-30), "{:?} vs {w}", a.to_c64());
        }
    }

    #[test]
    fn puiseux_exact_cases() {
        let op = parse_operator("Dt - Dz^2").unwrap();
        let g = root_groups(&op, P).unwrap();
        let ps = puiseux_expand(&op, &g[0], 0, 6, P).unwrap();
        assert!(near(&ps.coeffs[0], 1.0, 0.0, 1e-30));
        assert!(ps.coeffs[1..].iter().all(|x| x.is_zero()));
        assert!(residual_at(&op, &ps, &c(10.0, 0.0)).is_zero());

        let op = parse_operator("Dt^2 - Dz^3").unwrap();
        let g = root_groups(&op, P).unwrap();
        let idx = g[0].leaders.iter().position(|l| l.value.re.to_f64() > 0.0).unwrap();
        let ps = puiseux_expand(&op, &g[0], idx, 6, P).unwrap();
        assert_eq!(ps.kappa, 2);
        assert!(ps.coeffs[1..].iter().all(|x| x.abs().to_f64() < 1e-30));
    }

    #[test]
    fn rebranch_examples() {
        let mk =
            |v: &[f64]| PuiseuxSeries { kappa: 2, lead_exp: q(1, 1), coeffs: v.iter().map(|&x| c(x, 0.0)).collect(), prec: P };
        let r = rebranch_simple_pole(&mk(&[1.0, 0.0, 0.0])).unwrap();
        assert!(near(&r.coeffs[0], 1.0, 0.0, 1e-30) && r.coeffs[1..].iter().all(|x| x.is_zero()));
        let r = rebranch_simple_pole(&mk(&[1.0, 0.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(near(&r.coeffs[2], 0.5, 0.0, 1e-30));
        assert!(near(&r.coeffs[4], -0.125, 0.0, 1e-30));
        let r = rebranch_simple_pole(&mk(&[4.0, 0.0])).unwrap();
        assert!(near(&r.coeffs[0], 2.0, 0.0, 1e-30));
        assert!(matches!(rebranch_simple_pole(&mk(&[0.0, 1.0])), Err(CharRootsError::ZeroLeader)));
    }

    #[test]
    fn invert_affine() {
        let ps = PuiseuxSeries { kappa: 1, lead_exp: q(1, 1), coeffs: vec![c(2.0, 0.0), c(1.0, 0.0)], prec: P };
        let inv = invert_series(&ps, 5).unwrap();
        assert!(near(&inv.coeffs[0], 0.5, 0.0, 1e-30));
        assert!(near(&inv.coeffs[1], -0.5, 0.0, 1e-30));
        assert!(inv.coeffs[2..].iter().all(|x| x.abs().to_f64() < 1e-30));
        let bad = PuiseuxSeries { kappa: 2, ..ps };
        assert!(matches!(invert_series(&bad, 3), Err(CharRootsError::NotSimplePole { .. })));
    }

    #[test]
    fn consistency_examples() {
        for (txt, s, qv) in [("Dt - Dz^2", "1", "2"), ("Dt^2 - Dz^3", "1/2", "3/2")] {
            let r = slopes_consistency(&parse_operator(txt).unwrap(), P).unwrap();
            assert!(r.all_ok, "{txt}: {r:?}");
            assert_eq!(r.entries.len(), 1);
            assert_eq!(r.entries[0].side_s.as_deref(), Some(s));
            assert_eq!(r.entries[0].group_q.as_deref(), Some(qv));
        }
        let r = slopes_consistency(&parse_operator("Dt").unwrap(), P).unwrap();
        assert!(r.entries.is_empty() && r.all_ok);
    }

    /// [u^n] x(u) = (1/n) [x^{n−1}] l(x)^n for x = u·l(x).
    fn lagrange_inverse(l: &[MpComplex], order: usize) -> Vec<MpComplex> {
        let mut r = vec![MpComplex::zero(P); order + 1];
        let mut lp = vec![MpComplex::one(P)];
        lp.resize(order + 1, MpComplex::zero(P));
        let mut lv = l.to_vec();
        lv.resize(order + 1, MpComplex::zero(P));
        for n in 1..=order {
            lp = series_mul(&lp, &lv, order + 1, P);
            r[n] = lp[n - 1].div_i64(n as i64);
        }
        let rr = r[1..].to_vec();
        series_recip(&rr, P)
    }

    #[test]
    fn invert_catalan_against_lagrange() {
        let ps = PuiseuxSeries { kappa: 1, lead_exp: q(1, 1), coeffs: vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], prec: P };
        let inv = invert_series(&ps, 10).unwrap();
        let catalan = [1.0, 0.0, -1.0, 0.0, -1.0, 0.0, -2.0, 0.0, -5.0, 0.0];
        for (a, w) in inv.coeffs.iter().zip(catalan) {
            assert!(near(a, w, 0.0, 1e-30), "{:?} vs {w}", a.to_c64());
        }
        let oracle = lagrange_inverse(&ps.coeffs, 10);
        for (a, b) in inv.coeffs.iter().zip(&oracle) {
            assert!((a - b).abs().to_f64() < 1e-30);
        }
        let id = compose(&ps, &inv, 10).unwrap();
        assert!(near(&id.coeffs[0], 1.0, 0.0, 1e-30));
        assert!(id.coeffs[1..].iter().all(|x| x.abs().to_f64() < 1e-30));
    }

    #[test]
    fn invert_generic_against_lagrange() {
        let ps = PuiseuxSeries {
            kappa: 1,
            lead_exp: q(1, 1),
            coeffs: vec![c(1.5, -0.5), c(0.25, 2.0), c(-1.0, 0.5), c(0.0, 0.75), c(2.0, 0.0)],
            prec: P,
        };
        let inv = invert_series(&ps, 12).unwrap();
        let oracle = lagrange_inverse(&ps.coeffs, 12);
        for (a, b) in inv.coeffs.iter().zip(&oracle) {
            assert!((a - b).abs().to_f64() < 1e-25 * (1.0 + b.abs().to_f64()));
        }
        let back = invert_series(&inv, 12).unwrap();
        for (i, a) in back.coeffs.iter().enumerate() {
            let b = ps.coeffs.get(i).cloned().unwrap_or_else(|| MpComplex::zero(P));
            assert!((a - &b).abs().to_f64() < 1e-25, "term {i}");
        }
    }
}
