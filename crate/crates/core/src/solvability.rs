//! The Goursat solvability gate: (H_w), winding numbers, finite Toeplitz
//! sections, the spectral condition and the root-moduli classification.

use crate::char_roots::{root_groups, CharRootsError};
use crate::expr_parser::Operator;
use crate::newton_polygon::{build_polygon, require_contact, toeplitz_symbol, LaurentPoly, PolygonError};
use crate::numeric::linalg::{condition_1norm, det_exact, det_mp, hadamard_bound};
use crate::numeric::poly::{roots_with_multiplicity, QPoly, RootError};
use crate::numeric::{rat_to_f64, MpComplex, RationalComplex};
use crate::par::Execution;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolvabilityError {
    #[error("symbol vanishes on |z| = {0}")]
    ZeroOnContour(f64),
    #[error("winding number mismatch: root count {exact}, argument principle {numeric}")]
    MethodDisagreement { exact: i64, numeric: i64 },
    #[error("symbol is identically zero")]
    EmptySymbol,
    #[error("radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("interval from root moduli {moduli:?} disagrees with (H_w) scan {scan:?}")]
    CrossCheckMismatch { moduli: (f64, f64), scan: Vec<(f64, f64)> },
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Roots(#[from] CharRootsError),
    #[error(transparent)]
    RootFinding(#[from] RootError),
}

/// Relative tolerance under which two root moduli count as equal.
pub fn moduli_tolerance(prec: u32) -> f64 {
    2f64.powi(-((prec / 2).min(40) as i32))
}

fn ser_radius<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}

/// Open interval (lo, hi) of radii; hi may be +∞ (serialized as null).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WInterval {
    pub lo: f64,
    #[serde(serialize_with = "ser_radius")]
    pub hi: f64,
}

impl WInterval {
    pub fn contains(&self, w: f64) -> bool {
        w > self.lo && w < self.hi
    }

    /// A representative radius inside the interval.
    pub fn midpoint(&self) -> f64 {
        match (self.lo > 0.0, self.hi.is_finite()) {
            (true, true) => (self.lo * self.hi).sqrt(),
            (false, true) => self.hi / 2.0,
            (true, false) => self.lo * 2.0,
            (false, false) => 1.0,
        }
    }
}

/// f = z^{e} g(z) with g a polynomial, g(0) ≠ 0.
fn split_monomial(f: &LaurentPoly) -> (i64, QPoly) {
    let e = f.min_exp().unwrap_or(0);
    let deg = (f.max_exp().unwrap_or(0) - e) as usize;
    let mut c = vec![RationalComplex::zero(); deg + 1];
    for (k, v) in f.coeffs() {
        c[(k - e) as usize] = v.clone();
    }
    (e, QPoly::new(c))
}

/// Distinct zero moduli of f (ascending) with the number of zeros at each.
pub fn zero_moduli(f: &LaurentPoly, prec: u32) -> Result<(i64, Vec<(f64, u32)>), SolvabilityError> {
    let (e, g) = split_monomial(f);
    let mut mods: Vec<(f64, u32)> = Vec::new();
    if g.degree() >= 1 {
        for (r, m) in roots_with_multiplicity(&g, prec)? {
            mods.push((r.abs().to_f64(), m));
        }
    }
    mods.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let tol = moduli_tolerance(prec);
    let mut merged: Vec<(f64, u32)> = Vec::new();
    for (r, m) in mods {
        match merged.last_mut() {
            Some(last) if (r - last.0).abs() <= tol * r.max(last.0) => last.1 += m,
            _ => merged.push((r, m)),
        }
    }
    Ok((e, merged))
}

/// Winding number from the zeros of z^{-e}f inside |z| < w, plus e.
pub fn winding_by_roots(f: &LaurentPoly, w: f64, prec: u32) -> Result<i64, SolvabilityError> {
    let (e, mods) = zero_moduli(f, prec)?;
    let mut inside = 0i64;
    for (r, m) in mods {
        if (r - w).abs() <= 1e-10 * w {
            return Err(SolvabilityError::ZeroOnContour(w));
        }
        if r < w {
            inside += m as i64;
        }
    }
    Ok(inside + e)
}

fn arg_step(a: Complex64, b: Complex64) -> f64 {
    (b / a).arg()
}

/// Total change of arg f along the arc [t0, t1] of |z| = w, subdividing where
/// a single step turns by more than a quarter turn.
fn arc_delta(f: &LaurentPoly, w: f64, t0: f64, t1: f64, f0: Complex64, f1: Complex64, depth: u32) -> Option<f64> {
    let d = arg_step(f0, f1);
    if d.abs() < PI / 4.0 || depth == 0 {
        return Some(d);
    }
    let tm = 0.5 * (t0 + t1);
    let fm = f.eval_c64(Complex64::from_polar(w, tm));
    if fm.norm() == 0.0 {
        return None;
    }
    Some(arc_delta(f, w, t0, tm, f0, fm, depth - 1)? + arc_delta(f, w, tm, t1, fm, f1, depth - 1)?)
}

/// Winding number from the accumulated change of arg f on |z| = w.
pub fn winding_by_argument(f: &LaurentPoly, w: f64) -> Result<i64, SolvabilityError> {
    const SAMPLES: usize = 4096;
    let vals: Vec<Complex64> =
        (0..=SAMPLES).map(|k| f.eval_c64(Complex64::from_polar(w, 2.0 * PI * k as f64 / SAMPLES as f64))).collect();
    if vals.iter().any(|v| v.norm() == 0.0 || !v.is_finite()) {
        return Err(SolvabilityError::ZeroOnContour(w));
    }
    let mut total = 0.0;
    for k in 0..SAMPLES {
        let (t0, t1) = (2.0 * PI * k as f64 / SAMPLES as f64, 2.0 * PI * (k + 1) as f64 / SAMPLES as f64);
        total += arc_delta(f, w, t0, t1, vals[k], vals[k + 1], 48).ok_or(SolvabilityError::ZeroOnContour(w))?;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// I_w(f) = (1/2πi)∮_{|z|=w} d log f, by root counting and by the argument principle.
pub fn winding_number(f: &LaurentPoly, w: f64, prec: u32) -> Result<i64, SolvabilityError> {
    if !w.is_finite() || w <= 0.0 {
        return Err(SolvabilityError::BadRadius(w));
    }
    if f.is_zero() {
        return Err(SolvabilityError::EmptySymbol);
    }
    let exact = winding_by_roots(f, w, prec)?;
    let numeric = winding_by_argument(f, w)?;
    if exact != numeric {
        return Err(SolvabilityError::MethodDisagreement { exact, numeric });
    }
    Ok(exact)
}

/// Radii w for which f has no zero on |z| = w and I_w(f) = 0.
pub fn admissible_radii(f: &LaurentPoly, prec: u32) -> Result<Vec<WInterval>, SolvabilityError> {
    if f.is_zero() {
        return Err(SolvabilityError::EmptySymbol);
    }
    let (e, mods) = zero_moduli(f, prec)?;
    let mut bounds = vec![0.0];
    bounds.extend(mods.iter().map(|m| m.0));
    bounds.push(f64::INFINITY);
    let mut count = e;
    let mut out = Vec::new();
    for (i, w) in bounds.windows(2).enumerate() {
        if i > 0 {
            count += mods[i - 1].1 as i64;
        }
        if count == 0 {
            out.push(WInterval { lo: w[0], hi: w[1] });
        }
    }
    Ok(out)
}

/// Admissible w for (H_w) with f = z^j f_s at the point (j, α).
pub fn check_hw(op: &Operator, s: &BigRational, j: u32, alpha: u32, prec: u32) -> Result<Vec<WInterval>, SolvabilityError> {
    require_contact(op, s, j, alpha)?;
    let (_, f) = toeplitz_symbol(op, s, j)?;
    admissible_radii(&f, prec)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ToeplitzEntry {
    pub n: usize,
    /// Exact determinant when the symbol is exact.
    pub det: Option<String>,
    pub det_abs: f64,
    pub invertible: bool,
    pub condition_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ToeplitzReport {
    pub n_max: usize,
    pub exact: bool,
    pub results: Vec<ToeplitzEntry>,
    pub all_invertible: bool,
}

fn section<T: Clone>(coef: impl Fn(i64) -> T, n: usize) -> Vec<Vec<T>> {
    (0..=n).map(|r| (0..=n).map(|c| coef(r as i64 - c as i64)).collect()).collect()
}

fn condition_of(m: Vec<Vec<Complex64>>) -> f64 {
    condition_1norm(&m)
}

/// T_f(N) = (f_{r−c})_{r,c=0..N} for N = 0..N_max, decided by exact
/// fraction-free elimination.
pub fn toeplitz_sections(f: &LaurentPoly, n_max: usize, exec: Execution) -> ToeplitzReport {
    let results = exec.map_range(n_max + 1, |n| {
        let t = section(|k| f.get(k), n);
        let det = det_exact(&t);
        let cond = condition_of(t.iter().map(|r| r.iter().map(|x| x.to_complex64()).collect()).collect());
        ToeplitzEntry {
            n,
            det: Some(det.to_string()),
            det_abs: (rat_to_f64(&det.norm_sqr())).sqrt(),
            invertible: !det.is_zero(),
            condition_estimate: cond,
        }
    });
    let all_invertible = results.iter().all(|r| r.invertible);
    ToeplitzReport { n_max, exact: true, results, all_invertible }
}

/// Float-symbol variant: singular when |det| < 2^{−prec/2} times the Hadamard bound.
pub fn toeplitz_sections_mp(f: &BTreeMap<i64, MpComplex>, n_max: usize, prec: u32, exec: Execution) -> ToeplitzReport {
    let get = |k: i64| f.get(&k).map(|x| x.with_prec(prec)).unwrap_or_else(|| MpComplex::zero(prec));
    let results = exec.map_range(n_max + 1, |n| {
        let t = section(get, n);
        let det = det_mp(&t, prec + 32);
        let scale = hadamard_bound(&t, prec);
        let thresh = scale.mul_pow2(-((prec / 2) as i64));
        let da = det.abs();
        let invertible = !scale.is_zero() && da > thresh;
        let cond = condition_of(t.iter().map(|r| r.iter().map(|x| x.to_c64()).collect()).collect());
        ToeplitzEntry { n, det: None, det_abs: da.to_f64(), invertible, condition_estimate: cond }
    });
    let all_invertible = results.iter().all(|r| r.invertible);
    ToeplitzReport { n_max, exact: false, results, all_invertible }
}

/// h(w) = Σ_{(l,β)≠(j,α)} |a_{lβ}| w^{j−l} over the principal part.
fn spectral_h(terms: &[(i64, f64)], w: f64) -> f64 {
    terms.iter().map(|(e, a)| a * w.powi(*e as i32)).sum()
}

/// Witness w with h(w) < |a_{jα}|, if one exists.
///
/// h is convex in log w. When every exponent has the same sign h is monotone
/// and the witness is the radius where h = |a_{jα}|/2; otherwise it is the
/// minimizer found by golden-section search.
pub fn spectral_condition(op: &Operator, s: &BigRational, j: u32, alpha: u32) -> Result<Option<f64>, SolvabilityError> {
    let pp = require_contact(op, s, j, alpha)?;
    let a = match pp.terms().get(&(j, alpha)) {
        Some(v) => v.abs_f64(),
        None => return Ok(None),
    };
    let terms: Vec<(i64, f64)> =
        pp.terms().iter().filter(|(k, _)| **k != (j, alpha)).map(|(&(l, _), v)| (j as i64 - l as i64, v.abs_f64())).collect();
    if terms.is_empty() {
        return Ok(Some(1.0));
    }
    let pos = terms.iter().any(|t| t.0 > 0);
    let neg = terms.iter().any(|t| t.0 < 0);
    let h = |x: f64| spectral_h(&terms, x.exp());
    let (lo, hi) = (-200.0f64, 200.0f64);
    if pos != neg {
        // monotone: bisect h(e^x) = a/2
        let target = a / 2.0;
        let (mut l, mut r) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (l + r);
            let up = h(m) > target;
            if up == pos {
                r = m;
            } else {
                l = m;
            }
        }
        let x = 0.5 * (l + r);
        return Ok((h(x) < a).then(|| x.exp()));
    }
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut l, mut r) = (lo, hi);
    let mut c = r - g * (r - l);
    let mut d = l + g * (r - l);
    for _ in 0..300 {
        if h(c) < h(d) {
            r = d;
        } else {
            l = c;
        }
        c = r - g * (r - l);
        d = l + g * (r - l);
    }
    let x = 0.5 * (l + r);
    Ok((h(x) < a).then(|| x.exp()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    BijectiveGeneric,
    FredholmWithGap,
    NotFredholm,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SolvabilityVerdict {
    pub kind: VerdictKind,
    pub w_interval: Option<WInterval>,
    /// (|λ_{l,j_l}|, |λ_{l,j_l+1}|), with ∞ and 0 at the ends (serialized as null).
    pub gap_pair: Option<(Option<f64>, Option<f64>)>,
    pub toeplitz: Option<ToeplitzReport>,
    #[serde(rename = "spectralW")]
    pub spectral_w: Option<f64>,
    pub notes: Vec<String>,
}

impl SolvabilityVerdict {
    /// Bijective on every checked section (or generically).
    pub fn bijective_so_far(&self) -> bool {
        match self.kind {
            VerdictKind::BijectiveGeneric => true,
            VerdictKind::FredholmWithGap => self.toeplitz.as_ref().is_some_and(|t| t.all_invertible),
            VerdictKind::NotFredholm => false,
        }
    }
}

fn opt_finite(x: f64) -> Option<f64> {
    (x.is_finite() && x > 0.0).then_some(x)
}

pub fn classify(
    op: &Operator,
    s: &BigRational,
    j: u32,
    alpha: u32,
    n_max: usize,
    prec: u32,
    exec: Execution,
) -> Result<SolvabilityVerdict, SolvabilityError> {
    let pp = require_contact(op, s, j, alpha)?;
    let (_, f) = toeplitz_symbol(op, s, j)?;
    let scan = admissible_radii(&f, prec)?;
    let spectral_w = spectral_condition(op, s, j, alpha)?;
    let np = build_polygon(op);
    let mut notes = Vec::new();
    if np.side_for_index(s).is_none() {
        notes.push("s is not the index of a side: principal part is a monomial".into());
        return Ok(SolvabilityVerdict {
            kind: VerdictKind::BijectiveGeneric,
            w_interval: Some(WInterval { lo: 0.0, hi: f64::INFINITY }),
            gap_pair: None,
            toeplitz: None,
            spectral_w,
            notes,
        });
    }
    let q = s + BigRational::one();
    let group = root_groups(op, prec)?.into_iter().find(|g| g.q == q);
    let jtop = pp.terms().keys().map(|k| k.0).max().unwrap();
    let jbot = pp.terms().keys().map(|k| k.0).min().unwrap();
    let jl = (jtop - j) as usize;
    let moduli: Vec<f64> =
        group.as_ref().map(|g| g.moduli_with_multiplicity().iter().map(|m| m.to_f64()).collect()).unwrap_or_default();
    if moduli.len() != (jtop - jbot) as usize {
        notes.push(format!("root group q = {q} carries {} branches but the side spans {} λ-degrees", moduli.len(), jtop - jbot));
        return Ok(SolvabilityVerdict {
            kind: VerdictKind::NotFredholm,
            w_interval: None,
            gap_pair: None,
            toeplitz: None,
            spectral_w,
            notes,
        });
    }
    // λ_{l,0} = ∞, λ_{l,m_l+1} = 0
    let upper = if jl == 0 { f64::INFINITY } else { moduli[jl - 1] };
    let lower = if jl == moduli.len() { 0.0 } else { moduli[jl] };
    let gap_pair = Some((opt_finite(upper), opt_finite(lower)));
    let tol = moduli_tolerance(prec);
    if upper.is_finite() && lower > 0.0 && (upper - lower).abs() <= tol * upper {
        notes.push("MODULI_COLLISION: |λ_{l,j_l}| and |λ_{l,j_l+1}| coincide within tolerance".into());
        return Ok(SolvabilityVerdict {
            kind: VerdictKind::NotFredholm,
            w_interval: None,
            gap_pair,
            toeplitz: None,
            spectral_w,
            notes,
        });
    }
    let w = WInterval {
        lo: if upper.is_finite() { 1.0 / upper } else { 0.0 },
        hi: if lower > 0.0 { 1.0 / lower } else { f64::INFINITY },
    };
    let agrees = scan.len() == 1 && close(scan[0].lo, w.lo) && close(scan[0].hi, w.hi);
    if !agrees {
        return Err(SolvabilityError::CrossCheckMismatch {
            moduli: (w.lo, w.hi),
            scan: scan.iter().map(|i| (i.lo, i.hi)).collect(),
        });
    }
    let toeplitz = toeplitz_sections(&f, n_max, exec);
    notes.push(format!("bijectivity checked for Toeplitz sections N = 0..{n_max} only"));
    Ok(SolvabilityVerdict {
        kind: VerdictKind::FredholmWithGap,
        w_interval: Some(w),
        gap_pair,
        toeplitz: Some(toeplitz),
        spectral_w,
        notes,
    })
}

fn close(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_parser::parse_operator;

    const P: u32 = 128;

    fn lp(pairs: &[(i64, i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_pairs(&pairs.iter().map(|&(e, n, d)| (e, RationalComplex::from_frac(n, d))).collect::<Vec<_>>())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn winding_examples() {
        assert_eq!(winding_number(&lp(&[(0, 1, 1), (1, -1, 1)]), 0.5, P), Ok(0));
        assert_eq!(winding_number(&lp(&[(-1, 1, 1), (0, -1, 1)]), 0.5, P), Ok(-1));
        assert_eq!(winding_number(&lp(&[(-1, 1, 1), (0, -5, 2), (1, 1, 1)]), 1.0, P), Ok(0));
        assert!(matches!(winding_number(&lp(&[(0, 1, 1), (1, -1, 1)]), 1.0, P), Err(SolvabilityError::ZeroOnContour(_))));
    }

    #[test]
    fn hw_examples() {
        let heat = parse_operator("Dt - Dz^2").unwrap();
        assert_eq!(check_hw(&heat, &q(1, 1), 1, 0, P).unwrap(), vec![WInterval { lo: 0.0, hi: 1.0 }]);
        let r = check_hw(&heat, &q(1, 1), 0, 2, P).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].lo - 1.0).abs() < 1e-15 && r[0].hi.is_infinite());
        let op = parse_operator("(Dt - 2*Dz)*(Dt - 1/2*Dz)").unwrap();
        let r = check_hw(&op, &q(0, 1), 1, 1, P).unwrap();
        assert!((r[0].lo - 0.5).abs() < 1e-15 && (r[0].hi - 2.0).abs() < 1e-15);
        assert!(matches!(check_hw(&heat, &q(1, 1), 1, 1, P), Err(SolvabilityError::Polygon(PolygonError::NoContact { .. }))));
    }

    #[test]
    fn toeplitz_examples() {
        let r = toeplitz_sections(&lp(&[(0, 1, 1), (1, -1, 1)]), 6, Execution::default());
        assert!(r.all_invertible && r.results.len() == 7);
        assert!(r.results.iter().all(|e| e.det.as_deref() == Some("1")));
        let r = toeplitz_sections(&lp(&[(-1, 1, 1), (0, -5, 2), (1, 1, 1)]), 12, Execution::Sequential);
        assert!(r.all_invertible);
        let r = toeplitz_sections(&lp(&[(-1, 1, 1), (1, -1, 1)]), 3, Execution::Sequential);
        assert!(!r.results[0].invertible && !r.all_invertible);
        assert!(r.results[1].invertible && !r.results[2].invertible);
    }

    #[test]
    fn toeplitz_float_matches_exact() {
        let f = lp(&[(-1, 1, 1), (1, -1, 1), (0, 1, 3)]);
        let fm: BTreeMap<i64, MpComplex> = f.coeffs().iter().map(|(k, v)| (*k, MpComplex::from_rc(v, P))).collect();
        let a = toeplitz_sections(&f, 8, Execution::Sequential);
        let b = toeplitz_sections_mp(&fm, 8, P, Execution::Sequential);
        for (x, y) in a.results.iter().zip(&b.results) {
            assert_eq!(x.invertible, y.invertible, "N = {}", x.n);
        }
        let f = lp(&[(-1, 1, 1), (1, -1, 1)]);
        let fm: BTreeMap<i64, MpComplex> = f.coeffs().iter().map(|(k, v)| (*k, MpComplex::from_rc(v, P))).collect();
        assert!(!toeplitz_sections_mp(&fm, 4, P, Execution::Sequential).results[0].invertible);
    }

    #[test]
    fn spectral_examples() {
        let op = parse_operator("Dt*Dz + 1/10*Dz^2").unwrap();
        let w = spectral_condition(&op, &q(0, 1), 1, 1).unwrap().unwrap();
        assert!(w < 10.0);
        let heat = parse_operator("Dt - Dz^2").unwrap();
        let w = spectral_condition(&heat, &q(1, 1), 1, 0).unwrap().unwrap();
        assert!(w < 1.0 && (w - 0.5).abs() < 1e-12);
        let op = parse_operator("Dt + Dz").unwrap();
        let w = spectral_condition(&op, &q(0, 1), 1, 0).unwrap().unwrap();
        assert!((w - 0.5).abs() < 1e-12);
        // |a| = 1 < min h = 2 for h = w + 1/w
        let op = parse_operator("Dt^2*Dz^0 + Dt*Dz + Dz^2").unwrap();
        assert_eq!(spectral_condition(&op, &q(0, 1), 1, 1).unwrap(), None);
    }

    #[test]
    fn classify_examples() {
        let heat = parse_operator("Dt - Dz^2").unwrap();
        let v = classify(&heat, &q(1, 1), 1, 0, 8, P, Execution::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::FredholmWithGap);
        assert_eq!(v.w_interval, Some(WInterval { lo: 0.0, hi: 1.0 }));
        assert!(v.toeplitz.as_ref().unwrap().all_invertible);
        let v = classify(&heat, &q(1, 2), 0, 2, 8, P, Execution::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::BijectiveGeneric);
        let op = parse_operator("Dt^2 - 2*Dt*Dz + Dz^2").unwrap();
        let v = classify(&op, &q(0, 1), 1, 1, 8, P, Execution::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::NotFredholm);
        let op = parse_operator("(Dt - 2*Dz)*(Dt - 1/2*Dz)").unwrap();
        let v = classify(&op, &q(0, 1), 1, 1, 8, P, Execution::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::FredholmWithGap);
        let w = v.w_interval.unwrap();
        assert!((w.lo - 0.5).abs() < 1e-12 && (w.hi - 2.0).abs() < 1e-12);
        let op = parse_operator("Dt^2 + Dz^2").unwrap();
        let v = classify(&op, &q(0, 1), 1, 1, 8, P, Execution::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::NotFredholm);
        assert!(v.notes.iter().any(|n| n.starts_with("MODULI_COLLISION")));
    }
}
