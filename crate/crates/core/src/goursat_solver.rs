//! Truncated formal solutions of P(∂t,∂z)u = f with u − v = O(t^j z^α).
//!
//! The truncated problem is an exact sparse linear system over ℚ(i). Each
//! equation is pivoted on its highest (k, β) unknown, so for operators in
//! normal form elimination follows the Cauchy recursion; a window unknown is
//! accepted only when its reduced row has no free columns.

use crate::expr_parser::Operator;
use crate::numeric::{binomial, rat_to_f64, rising_ratio, RationalComplex};
use crate::par::Execution;
use crate::series_core::{apply_operator, build_goursat_data, BiSeries, GoursatData, SeriesError, UniSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("truncated system is inconsistent at equation ({m},{n})")]
    InconsistentSystem { m: u32, n: u32 },
    #[error("{undetermined} window coefficients depend on free unknowns ({free} free in total); enlarge the truncation")]
    WindowNotDetermined { undetermined: usize, free: usize },
    #[error("operator is not in normal form: {0}")]
    NotNormalForm(String),
    #[error("|λ1| = |λ2|")]
    EqualModuli,
    #[error("τ^{0} = 1")]
    ResonantTau(u32),
    #[error("characteristic speed is zero")]
    ZeroSpeed,
    #[error("Goursat data has (j, α) = ({have_j}, {have_alpha}), problem expects ({j}, {alpha})")]
    DataMismatch { j: u32, alpha: u32, have_j: u32, have_alpha: u32 },
    #[error("truncation ladder needs at least 3 increasing rungs")]
    BadLadder,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoursatProblem {
    pub op: Operator,
    pub f: BiSeries,
    pub data: GoursatData,
}

impl GoursatProblem {
    pub fn new(op: Operator, f: BiSeries, data: GoursatData) -> Self {
        Self { op, f, data }
    }

    pub fn j(&self) -> u32 {
        self.data.j()
    }

    pub fn alpha(&self) -> u32 {
        self.data.alpha()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveReport {
    pub window_t: u32,
    pub window_z: u32,
    pub trunc_t: u32,
    pub trunc_z: u32,
    pub uniquely_determined: bool,
    pub free_unknown_count: usize,
    pub residual_exact_zero: bool,
    pub stabilization: Vec<f64>,
}

type Row = BTreeMap<usize, RationalComplex>;

struct System {
    rows: Vec<(Row, RationalComplex, (u32, u32))>,
    ncols: usize,
}

/// Reduced echelon form: pivot column → (row, rhs).
struct Rref {
    pivots: BTreeMap<usize, (Row, RationalComplex)>,
}

fn axpy(row: &mut Row, rhs: &mut RationalComplex, a: &RationalComplex, other: &Row, orhs: &RationalComplex) {
    for (c, v) in other {
        let e = row.entry(*c).or_insert_with(RationalComplex::zero);
        *e -= &(a * v);
        if e.is_zero() {
            row.remove(c);
        }
    }
    *rhs -= &(a * orhs);
}

fn eliminate(sys: System) -> Result<Rref, SolverError> {
    let mut pivots: BTreeMap<usize, (Row, RationalComplex)> = BTreeMap::new();
    for (mut row, mut rhs, eq) in sys.rows {
        loop {
            let Some((&c, v)) = row.iter().next_back() else {
                if !rhs.is_zero() {
                    return Err(SolverError::InconsistentSystem { m: eq.0, n: eq.1 });
                }
                break;
            };
            let v = v.clone();
            if let Some((prow, prhs)) = pivots.get(&c) {
                axpy(&mut row, &mut rhs, &v, prow, prhs);
            } else {
                let inv = v.inv();
                let row: Row = row.into_iter().map(|(k, x)| (k, &x * &inv)).collect();
                pivots.insert(c, (row, &rhs * &inv));
                break;
            }
        }
    }
    // back substitution in ascending pivot order: lower pivots are final when used
    let cols: Vec<usize> = pivots.keys().copied().collect();
    for &c in &cols {
        let (mut row, mut rhs) = pivots.remove(&c).unwrap();
        loop {
            let target = row.iter().find(|(k, _)| **k != c && pivots.contains_key(k)).map(|(k, v)| (*k, v.clone()));
            match target {
                Some((k, v)) => {
                    let (prow, prhs) = &pivots[&k];
                    axpy(&mut row, &mut rhs, &v, prow, prhs);
                }
                None => break,
            }
        }
        pivots.insert(c, (row, rhs));
    }
    let _ = sys.ncols;
    Ok(Rref { pivots })
}

struct Layout {
    j: u32,
    alpha: u32,
    tz: u32,
}

impl Layout {
    /// Column of unknown (k, β); k-major so the highest t-order comes last.
    fn col(&self, k: u32, b: u32) -> usize {
        ((k - self.j) * (self.tz - self.alpha + 1) + (b - self.alpha)) as usize
    }

    fn kb(&self, c: usize) -> (u32, u32) {
        let w = (self.tz - self.alpha + 1) as usize;
        (self.j + (c / w) as u32, self.alpha + (c % w) as u32)
    }

    fn is_unknown(&self, k: u32, b: u32) -> bool {
        k >= self.j && b >= self.alpha
    }
}

fn check_f(f: &BiSeries, mt: u32, mz: u32) -> Result<(), SolverError> {
    if f.trunc_t() < mt || f.trunc_z() < mz {
        return Err(SeriesError::TruncationTooSmall { need_t: mt, need_z: mz, have_t: f.trunc_t(), have_z: f.trunc_z() }.into());
    }
    Ok(())
}

/// Solve the problem truncated at (K, B) and return the window (wt, wz).
pub fn solve_truncated(p: &GoursatProblem, tt: u32, tz: u32, wt: u32, wz: u32) -> Result<(BiSeries, SolveReport), SolverError> {
    let (mt, mz) = (p.op.t_order(), p.op.z_order());
    if tt < wt + mt || tz < wz + mz {
        return Err(SeriesError::TruncationTooSmall { need_t: wt + mt, need_z: wz + mz, have_t: tt, have_z: tz }.into());
    }
    let (eqt, eqz) = (tt - mt, tz - mz);
    check_f(&p.f, eqt, eqz)?;
    let (j, alpha) = (p.j(), p.alpha());
    let v = build_goursat_data(&p.data, tt, tz)?;
    let layout = Layout { j, alpha, tz };
    let ncols = if tt >= j && tz >= alpha { ((tt - j + 1) * (tz - alpha + 1)) as usize } else { 0 };
    let mut rows = Vec::new();
    for m in 0..=eqt {
        for n in 0..=eqz {
            let mut row = Row::new();
            let mut rhs = p.f.get(m, n);
            for (&(i, g), a) in p.op.terms() {
                let (k, b) = (m + i, n + g);
                let w = rising_ratio(m as u64, i as u64) * rising_ratio(n as u64, g as u64);
                let coef = a.scale_int(&w);
                if layout.is_unknown(k, b) {
                    let e = row.entry(layout.col(k, b)).or_insert_with(RationalComplex::zero);
                    *e += &coef;
                } else {
                    rhs -= &(&coef * &v.get(k, b));
                }
            }
            row.retain(|_, x| !x.is_zero());
            rows.push((row, rhs, (m, n)));
        }
    }
    let rref = eliminate(System { rows, ncols })?;
    let free = ncols - rref.pivots.len();
    // full solution with free unknowns set to zero
    let mut u = v.clone();
    for (c, (_, rhs)) in &rref.pivots {
        let (k, b) = layout.kb(*c);
        u.set(k, b, rhs.clone());
    }
    let mut undetermined = 0;
    for k in j..=wt {
        for b in alpha..=wz {
            let c = layout.col(k, b);
            let ok = rref.pivots.get(&c).is_some_and(|(row, _)| row.len() == 1);
            if !ok {
                undetermined += 1;
            }
        }
    }
    if undetermined > 0 {
        return Err(SolverError::WindowNotDetermined { undetermined, free });
    }
    let res = apply_operator(&p.op, &u)?;
    let residual_exact_zero = (0..=eqt).all(|m| (0..=eqz).all(|n| res.get(m, n) == p.f.get(m, n)));
    let report = SolveReport {
        window_t: wt,
        window_z: wz,
        trunc_t: tt,
        trunc_z: tz,
        uniquely_determined: true,
        free_unknown_count: free,
        residual_exact_zero,
        stabilization: vec![],
    };
    Ok((u.window(wt, wz), report))
}

/// Largest |coefficient| of P·u − f over m ≤ wt, n ≤ wz, as an exact squared modulus and a float.
pub fn residual(op: &Operator, u: &BiSeries, f: &BiSeries, wt: u32, wz: u32) -> Result<(BigRational, f64), SolverError> {
    let pu = apply_operator(op, u)?;
    if pu.trunc_t() < wt || pu.trunc_z() < wz {
        return Err(SeriesError::TruncationTooSmall {
            need_t: wt + op.t_order(),
            need_z: wz + op.z_order(),
            have_t: u.trunc_t(),
            have_z: u.trunc_z(),
        }
        .into());
    }
    check_f(f, wt, wz)?;
    let mut best = BigRational::zero();
    for m in 0..=wt {
        for n in 0..=wz {
            let d = (&pu.get(m, n) - &f.get(m, n)).norm_sqr();
            if d > best {
                best = d;
            }
        }
    }
    let mag = rat_to_f64(&best).sqrt();
    Ok((best, mag))
}

/// Ordinary Cauchy problem in normal form: ∂t^M u(0,·) = φ_k for k < M.
///
/// c_{m+M,n} = (f_{mn} − Σ' a_{iγ} (m+i)!/m! (n+γ)!/n! c_{m+i,n+γ}) / (a_M (m+M)!/m!).
pub fn cauchy_recursion(op: &Operator, phis: &[UniSeries], f: &BiSeries, tt: u32, tz: u32) -> Result<BiSeries, SolverError> {
    let m_ord = op.t_order();
    let top: Vec<_> = op.terms().iter().filter(|((i, _), _)| *i == m_ord).collect();
    if top.len() != 1 || top[0].0 .1 != 0 {
        return Err(SolverError::NotNormalForm(format!("top ∂t^{m_ord} coefficient is not a constant")));
    }
    if phis.len() != m_ord as usize {
        return Err(SolverError::DataMismatch { j: m_ord, alpha: 0, have_j: phis.len() as u32, have_alpha: 0 });
    }
    let a_top = top[0].1.clone();
    let rest: Vec<((u32, u32), RationalComplex)> =
        op.terms().iter().filter(|((i, _), _)| *i != m_ord).map(|(k, v)| (*k, v.clone())).collect();
    let mut memo: HashMap<(u32, u32), RationalComplex> = HashMap::new();
    let mut out = BiSeries::zero(tt, tz);
    for k in 0..=tt {
        for b in 0..=tz {
            let v = cauchy_coeff(k, b, m_ord, &a_top, &rest, phis, f, &mut memo)?;
            out.set(k, b, v);
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cauchy_coeff(
    k: u32,
    b: u32,
    m_ord: u32,
    a_top: &RationalComplex,
    rest: &[((u32, u32), RationalComplex)],
    phis: &[UniSeries],
    f: &BiSeries,
    memo: &mut HashMap<(u32, u32), RationalComplex>,
) -> Result<RationalComplex, SolverError> {
    if let Some(v) = memo.get(&(k, b)) {
        return Ok(v.clone());
    }
    let v = if k < m_ord {
        let phi = &phis[k as usize];
        if b > phi.trunc() {
            return Err(SeriesError::TruncationTooSmall { need_t: k, need_z: b, have_t: k, have_z: phi.trunc() }.into());
        }
        phi.get(b).scale(&BigRational::new(BigInt::one(), crate::numeric::factorial(k as u64)))
    } else {
        let m = k - m_ord;
        if m > f.trunc_t() || b > f.trunc_z() {
            return Err(SeriesError::TruncationTooSmall { need_t: m, need_z: b, have_t: f.trunc_t(), have_z: f.trunc_z() }.into());
        }
        let mut acc = f.get(m, b);
        for ((i, g), a) in rest {
            let c = cauchy_coeff(m + i, b + g, m_ord, a_top, rest, phis, f, memo)?;
            let w = rising_ratio(m as u64, *i as u64) * rising_ratio(b as u64, *g as u64);
            acc -= &(a * &c).scale_int(&w);
        }
        let d = a_top.scale_int(&rising_ratio(m as u64, m_ord as u64));
        &acc * &d.inv()
    };
    memo.insert((k, b), v.clone());
    Ok(v)
}

/// Closed-form solution w = f(λ1 t + z) + g(λ2 t + z) of
/// (∂t − λ1∂z)(∂t − λ2∂z)w = 0, w(0,z) = φ, w(t,0) = ψ.
///
/// Coefficients up to total degree 2·trunc are read from φ and ψ.
pub fn two_characteristic_oracle(
    l1: &RationalComplex,
    l2: &RationalComplex,
    phi: &UniSeries,
    psi: &UniSeries,
    trunc: u32,
) -> Result<BiSeries, SolverError> {
    if l1.is_zero() || l2.is_zero() {
        return Err(SolverError::ZeroSpeed);
    }
    if l1.norm_sqr() == l2.norm_sqr() {
        return Err(SolverError::EqualModuli);
    }
    let deg = 2 * trunc;
    if phi.trunc() < deg || psi.trunc() < deg {
        return Err(SeriesError::TruncationTooSmall { need_t: deg, need_z: deg, have_t: psi.trunc(), have_z: phi.trunc() }.into());
    }
    if phi.get(0) != psi.get(0) {
        return Err(
            SeriesError::IncompatibleData { k: 0, beta: 0, phi: phi.get(0).to_string(), psi: psi.get(0).to_string() }.into()
        );
    }
    let tau = l1 * &l2.inv();
    let l2inv = l2.inv();
    let half = RationalComplex::from_frac(1, 2);
    let mut fc = vec![&phi.get(0) * &half];
    let mut gc = vec![&phi.get(0) * &half];
    for n in 1..=deg {
        let big_f = &phi.get(n) - &(&psi.get(n) * &l2inv.pow(n));
        let den = &RationalComplex::one() - &tau.pow(n);
        if den.is_zero() {
            return Err(SolverError::ResonantTau(n));
        }
        let fnv = &big_f * &den.inv();
        gc.push(&phi.get(n) - &fnv);
        fc.push(fnv);
    }
    let mut w = BiSeries::zero(trunc, trunc);
    for k in 0..=trunc {
        let (p1, p2) = (l1.pow(k), l2.pow(k));
        for b in 0..=trunc {
            let n = k + b;
            let c = binomial(n as u64, k as u64);
            let v = &(&fc[n as usize] * &p1) + &(&gc[n as usize] * &p2);
            w.set(k, b, v.scale_int(&c));
        }
    }
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Rung {
    pub trunc_t: u32,
    pub trunc_z: u32,
    pub determined: bool,
    pub free_unknown_count: Option<usize>,
    /// max |Δ| against the previous determined rung; `None` for the first one.
    pub max_change: Option<f64>,
    pub exact_zero_change: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StabilizationReport {
    pub window_t: u32,
    pub window_z: u32,
    pub rungs: Vec<Rung>,
    pub first_determined: Option<usize>,
    pub stabilized: bool,
    pub note: String,
}

pub fn stabilization_check(
    p: &GoursatProblem,
    wt: u32,
    wz: u32,
    ladder: &[(u32, u32)],
    exec: Execution,
) -> Result<StabilizationReport, SolverError> {
    if ladder.len() < 3 || ladder.windows(2).any(|w| w[1].0 < w[0].0 || w[1].1 < w[0].1 || w[1] == w[0]) {
        return Err(SolverError::BadLadder);
    }
    let runs = exec.map(ladder, |&(tt, tz)| match solve_truncated(p, tt, tz, wt, wz) {
        Ok((u, r)) => Ok(Some((u, r))),
        Err(SolverError::WindowNotDetermined { .. }) => Ok(None),
        Err(e) => Err(e),
    });
    let mut rungs = Vec::new();
    let mut prev: Option<BiSeries> = None;
    let mut first = None;
    let mut stabilized = true;
    for (i, (run, &(tt, tz))) in runs.into_iter().zip(ladder).enumerate() {
        match run? {
            Some((u, r)) => {
                first.get_or_insert(i);
                let (mc, ez) = match &prev {
                    Some(pu) => {
                        let d = u.sub(pu);
                        let m = d.iter().map(|(_, v)| v.abs_f64()).fold(0.0, f64::max);
                        let z = d.is_zero();
                        stabilized &= z;
                        (Some(m), Some(z))
                    }
                    None => (None, None),
                };
                rungs.push(Rung {
                    trunc_t: tt,
                    trunc_z: tz,
                    determined: true,
                    free_unknown_count: Some(r.free_unknown_count),
                    max_change: mc,
                    exact_zero_change: ez,
                });
                prev = Some(u);
            }
            None => {
                if first.is_some() {
                    stabilized = false;
                }
                rungs.push(Rung {
                    trunc_t: tt,
                    trunc_z: tz,
                    determined: false,
                    free_unknown_count: None,
                    max_change: None,
                    exact_zero_change: None,
                });
            }
        }
    }
    let stabilized = stabilized && first.is_some();
    let note = match first {
        None => "WindowNotDetermined at every rung".to_string(),
        Some(i) if stabilized => format!("window determined from rung {i}; all later changes are exactly zero"),
        Some(i) => format!("window determined from rung {i} but later rungs change it"),
    };
    Ok(StabilizationReport { window_t: wt, window_z: wz, rungs, first_determined: first, stabilized, note })
}
