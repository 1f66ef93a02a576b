//! Heuristic k-summability evidence for a Goursat problem with one
//! positive Newton-polygon slope.

use super::profile::{angle_distance, borel_sum_eval, normalize_angle, singular_direction_scan, BorelProfile, DirectionScan};
use super::BorelError;
use crate::char_roots::root_groups;
use crate::goursat_solver::{cauchy_recursion, solve_truncated, GoursatProblem, SolverError};
use crate::newton_polygon::build_polygon;
use crate::par::Execution;
use crate::series_core::UniSeries;
use crate::solvability::classify;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use std::f64::consts::PI;

/// Leader arguments must agree modulo 2π/p to this tolerance.
const ARG_TOL: f64 = 1e-8;
/// A scan direction within this distance of the probed ray counts as hitting it.
const DIR_TOL: f64 = 0.05;
const MIN_CONFIDENCE: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    SummableEvidence,
    Obstructed { direction: f64, variable: String },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::SummableEvidence => "SUMMABLE-EVIDENCE",
            Verdict::Obstructed { .. } => "OBSTRUCTED",
            Verdict::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ZCheck {
    pub source: String,
    pub direction: f64,
    pub hit: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SummabilityReport {
    pub heuristic: bool,
    pub verdict: Verdict,
    pub direction: f64,
    pub s: String,
    #[serde(rename = "K")]
    pub k: f64,
    pub q: String,
    pub eta: f64,
    pub p: u32,
    pub trace_terms: u32,
    pub t_profile: Option<BorelProfile>,
    pub t_scan: DirectionScan,
    pub z_directions: Vec<f64>,
    pub z_checks: Vec<ZCheck>,
    pub notes: Vec<String>,
}

/// Smallest p ≤ 12 with every leader argument ≡ η (mod 2π/p).
fn alignment(args: &[f64]) -> Option<(f64, u32)> {
    let eta = *args.first()?;
    (1..=12u32)
        .find(|&p| {
            args.iter().all(|a| {
                let k = (a - eta) * p as f64 / (2.0 * PI);
                (k - k.round()).abs() * 2.0 * PI / p as f64 <= ARG_TOL
            })
        })
        .map(|p| (eta, p))
}

/// Monomial coefficients of û(t, 0) up to t^n.
fn solution_trace(p: &GoursatProblem, n: u32) -> Result<UniSeries, SolverError> {
    let mt = p.op.t_order();
    if p.alpha() == 0 && p.j() == mt {
        if let Ok(u) = cauchy_recursion(&p.op, p.data.phis(), &p.f, n, 0) {
            return Ok(u.t_trace());
        }
    }
    let limit = p.data.phis().iter().map(|s| s.trunc()).min().unwrap_or(u32::MAX).min(p.f.trunc_z());
    let mut tz = p.op.z_order().max(4);
    loop {
        match solve_truncated(p, n + mt, tz, n, 0) {
            Ok((u, _)) => return Ok(u.t_trace()),
            Err(SolverError::WindowNotDetermined { .. }) if tz < limit => tz = (tz * 2).min(limit),
            Err(e) => return Err(e),
        }
    }
}

fn radii_for(scale: Option<f64>) -> Vec<f64> {
    let base = scale.unwrap_or(1.0).clamp(1e-3, 1e3);
    (0..14).map(|i| 0.25 * base * 1.35f64.powi(i)).collect()
}

fn scan_hit(scan: &DirectionScan, dir: f64) -> Option<f64> {
    scan.singular_directions
        .iter()
        .filter(|d| d.confidence >= MIN_CONFIDENCE && angle_distance(d.direction, dir) <= DIR_TOL)
        .map(|d| d.direction)
        .next()
}

pub fn summability_verdict(p: &GoursatProblem, d: f64, prec: u32) -> Result<SummabilityReport, BorelError> {
    let d = normalize_angle(d);
    let np = build_polygon(&p.op);
    let slopes = np.positive_slopes();
    if slopes.len() != 1 {
        return Err(BorelError::HypothesisViolated(format!("{} positive slopes, exactly one required", slopes.len())));
    }
    let s = slopes[0].clone();
    let q = &s + BigRational::one();
    let group = root_groups(&p.op, prec)
        .map_err(|e| BorelError::HypothesisViolated(e.to_string()))?
        .into_iter()
        .find(|g| g.q == q)
        .ok_or_else(|| BorelError::HypothesisViolated(format!("no root group with q = {q}")))?;
    let args: Vec<f64> = group.leaders.iter().map(|l| l.value.arg().to_f64()).collect();
    let (eta, pp) = alignment(&args).ok_or_else(|| BorelError::HypothesisViolated("leader arguments are not aligned".into()))?;
    let mut notes = vec!["heuristic evidence from truncated series; not a proof".to_string()];
    let verdict_gate = classify(&p.op, &s, p.j(), p.alpha(), 8, prec, Execution::default())
        .map_err(|e| BorelError::Precondition(e.to_string()))?;
    if !verdict_gate.bijective_so_far() {
        return Err(BorelError::Precondition(format!("classify: {:?} is not bijective", verdict_gate.kind)));
    }
    let sf = s.to_f64().unwrap();
    let k = 1.0 / sf;
    let qf = q.to_f64().unwrap();

    let mut trace = None;
    for n in [24u32, 20, 16, 12] {
        if let Ok(t) = solution_trace(p, n) {
            trace = Some((n, t));
            break;
        }
    }
    let (n, trace) = trace.ok_or_else(|| BorelError::Precondition("data too short for a 12-term solution trace".into()))?;
    let t_scan = singular_direction_scan(&trace, &s, prec)?;
    let radius = {
        let bt = crate::series_core::borel_transform(&trace, &s, prec)?;
        let b: Vec<_> = (0..=bt.trunc()).map(|i| crate::numeric::MpComplex::from_rc(&bt.get(i), prec)).collect();
        super::profile::radius_estimate(&b)
    };
    let t_profile = match borel_sum_eval(&trace, &s, d, &radii_for(radius), prec) {
        Ok(pr) => Some(pr),
        Err(BorelError::PadeBreakdown { r, pole }) => {
            notes.push(format!("Padé continuation stopped at r = {r:.4} by pole ({:.4}, {:.4})", pole.0, pole.1));
            None
        }
        Err(e) => return Err(e),
    };

    let nz = (pp as f64 * qf).ceil() as u32;
    let mut z_dirs: Vec<f64> = Vec::new();
    for m in 0..nz.max(1) {
        let th = normalize_angle((d + eta + 2.0 * PI * m as f64 / pp as f64) / qf);
        if !z_dirs.iter().any(|x| angle_distance(*x, th) < 1e-9) {
            z_dirs.push(th);
        }
    }
    let mut z_checks = Vec::new();
    let zero = BigRational::from_integer(0.into());
    let mut sources: Vec<(String, UniSeries)> =
        p.data.phis().iter().enumerate().map(|(i, f)| (format!("phi{i}"), f.clone())).collect();
    if !p.f.is_zero() {
        sources.push(("f(0,z)".into(), p.f.z_section(0)));
    }
    for (name, series) in &sources {
        if series.trunc() < 12 {
            notes.push(format!("{name}: fewer than 12 terms, z-direction check skipped"));
            continue;
        }
        let scan = singular_direction_scan(series, &zero, prec)?;
        for &th in &z_dirs {
            z_checks.push(ZCheck { source: name.clone(), direction: th, hit: scan_hit(&scan, th) });
        }
    }
    for (i, psi) in p.data.psis().iter().enumerate() {
        if psi.trunc() >= 12 {
            let scan = singular_direction_scan(psi, &s, prec)?;
            z_checks.push(ZCheck { source: format!("B_s psi{i}"), direction: d, hit: scan_hit(&scan, d) });
        }
    }

    let verdict = if let Some(hit) = scan_hit(&t_scan, d) {
        Verdict::Obstructed { direction: hit, variable: "t".into() }
    } else if t_profile.is_none() {
        Verdict::Obstructed { direction: d, variable: "t".into() }
    } else if let Some(zc) = z_checks.iter().find(|c| c.hit.is_some()) {
        Verdict::Obstructed { direction: zc.hit.unwrap(), variable: zc.source.clone() }
    } else {
        match t_profile.as_ref().and_then(|pr| pr.growth_fit.clone()) {
            Some(g) if g.subexponential || g.k_est <= k + 0.15 => Verdict::SummableEvidence,
            Some(g) => Verdict::Inconclusive { reason: format!("growth order {:.3} exceeds K = {k:.3}", g.k_est) },
            None => Verdict::Inconclusive { reason: "no growth fit".into() },
        }
    };
    Ok(SummabilityReport {
        heuristic: true,
        verdict,
        direction: d,
        s: s.to_string(),
        k,
        q: q.to_string(),
        eta,
        p: pp,
        trace_terms: n,
        t_profile,
        t_scan,
        z_directions: z_dirs,
        z_checks,
        notes,
    })
}
