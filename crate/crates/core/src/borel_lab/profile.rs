//! Borel-sum profiles along rays, growth fits and singular directions.

use super::pade::{pade, Pade};
use super::BorelError;
use crate::numeric::linalg::least_squares;
use crate::numeric::MpComplex;
use crate::series_core::{borel_transform, UniSeries};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use std::f64::consts::PI;

/// Relative guard: a Padé pole closer than this (times the radius scale) to the ray stops continuation.
pub const POLE_GUARD: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMethod {
    PartialSum,
    Pade,
}

impl SampleMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SampleMethod::PartialSum => "partial-sum",
            SampleMethod::Pade => "pade",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub r: f64,
    pub re: f64,
    pub im: f64,
    pub method: SampleMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GrowthFit {
    pub k_est: f64,
    pub type_est: f64,
    pub r2: f64,
    pub subexponential: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BorelProfile {
    pub s: String,
    pub direction: f64,
    pub samples: Vec<Sample>,
    /// `None` when no nonzero coefficient bounds the radius (polynomial transform).
    pub radius_estimate: Option<f64>,
    pub growth_fit: Option<GrowthFit>,
}

impl BorelProfile {
    /// CSV rows r,re,im,method.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,re,im,method\n");
        for s in &self.samples {
            out.push_str(&format!("{},{},{},{}\n", s.r, s.re, s.im, s.method.as_str()));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SingularDirection {
    pub direction: f64,
    pub modulus: f64,
    pub confidence: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DirectionScan {
    pub singular_directions: Vec<SingularDirection>,
    pub method: String,
}

/// Normalize an angle to (−π, π].
pub fn normalize_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

pub fn angle_distance(a: f64, b: f64) -> f64 {
    normalize_angle(a - b).abs()
}

fn to_mp(u: &UniSeries, prec: u32) -> Vec<MpComplex> {
    (0..=u.trunc()).map(|n| MpComplex::from_rc(&u.get(n), prec)).collect()
}

/// Cauchy–Hadamard estimate from the upper half of the coefficients:
/// min |b_n|^{−1/n} over nonzero b_n, n ≥ N/2.
pub fn radius_estimate(b: &[MpComplex]) -> Option<f64> {
    let n = b.len().saturating_sub(1);
    let mut best: Option<f64> = None;
    for (k, c) in b.iter().enumerate().skip((n / 2).max(1)) {
        if c.is_zero() {
            continue;
        }
        let r = (-c.abs().ln().to_f64() / k as f64).exp();
        best = Some(best.map_or(r, |x: f64| x.min(r)));
    }
    best
}

fn partial_sum(b: &[MpComplex], t: Complex64) -> (Complex64, f64) {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    let mut last = 0.0f64;
    let n = b.len();
    for (k, c) in b.iter().enumerate() {
        let term = c.to_c64() * p;
        acc += term;
        if k + 3 >= n {
            last = last.max(term.norm());
        }
        p *= t;
    }
    (acc, last)
}

/// Distance from pole p to the segment [0, r e^{id}].
fn distance_to_ray(p: Complex64, d: f64, r: f64) -> f64 {
    let u = Complex64::from_polar(1.0, d);
    let proj = (p * u.conj()).re.clamp(0.0, r);
    (p - u * proj).norm()
}

pub fn borel_sum_eval(u: &UniSeries, s: &BigRational, d: f64, radii: &[f64], prec: u32) -> Result<BorelProfile, BorelError> {
    if u.trunc() < 8 {
        return Err(BorelError::TooShort { need: 8, have: u.trunc() });
    }
    if radii.is_empty() || radii[0] <= 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(BorelError::BadRadii);
    }
    let bt = borel_transform(u, s, prec)?;
    let b = to_mp(&bt, prec);
    let radius = radius_estimate(&b);
    let scale = radius.unwrap_or(1.0).clamp(1e-6, 1e6);
    let mut approx: Option<(Pade, Vec<Complex64>)> = None;
    let mut samples = Vec::with_capacity(radii.len());
    for &r in radii {
        let t = Complex64::from_polar(r, d);
        let inside = radius.is_none_or(|rad| r <= 0.5 * rad);
        if inside {
            let (v, last) = partial_sum(&b, t);
            let tail = match radius {
                Some(rad) => last * (r / rad) / (1.0 - r / rad),
                None => 0.0,
            };
            if tail <= 1e-14 * v.norm().max(1.0) {
                samples.push(Sample { r, re: v.re, im: v.im, method: SampleMethod::PartialSum });
                continue;
            }
        }
        let (p, poles) = approx.get_or_insert_with(|| {
            let p = pade(&b, scale, prec);
            let poles = p.poles(prec);
            (p, poles)
        });
        let guard = POLE_GUARD * scale.max(1e-3);
        if let Some(pole) = poles.iter().find(|z| distance_to_ray(**z, d, r) < guard) {
            return Err(BorelError::PadeBreakdown { r, pole: (pole.re, pole.im) });
        }
        let v = p.eval(t);
        samples.push(Sample { r, re: v.re, im: v.im, method: SampleMethod::Pade });
    }
    let mut profile = BorelProfile { s: s.to_string(), direction: d, samples, radius_estimate: radius, growth_fit: None };
    profile.growth_fit = growth_order_fit(&profile).ok();
    Ok(profile)
}

/// Fit log log(|v| + e) = K log r + log B on the outer half of the samples.
pub fn growth_order_fit(profile: &BorelProfile) -> Result<GrowthFit, BorelError> {
    let n = profile.samples.len();
    if n < 6 {
        return Err(BorelError::InsufficientSpan(format!("{n} samples")));
    }
    let (r0, r1) = (profile.samples[0].r, profile.samples[n - 1].r);
    if r1 < 4.0 * r0 {
        return Err(BorelError::InsufficientSpan(format!("radii span {:.3}", r1 / r0)));
    }
    let outer = &profile.samples[n / 2..];
    let xs: Vec<Vec<f64>> = outer.iter().map(|s| vec![1.0, s.r.ln()]).collect();
    let ys: Vec<f64> = outer
        .iter()
        .map(|s| {
            let m = Complex64::new(s.re, s.im).norm();
            // ln(m + e) without overflow
            let lm = if m > 1e300 { m.ln() } else { (m + std::f64::consts::E).ln() };
            lm.ln()
        })
        .collect();
    let (beta, _) = least_squares(&xs, &ys).ok_or_else(|| BorelError::InsufficientSpan("degenerate radii".into()))?;
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let sst: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - beta[0] - beta[1] * x[1]).powi(2)).sum();
    let r2 = if sst <= 1e-300 { 1.0 } else { (1.0 - sse / sst).clamp(0.0, 1.0) };
    Ok(GrowthFit { k_est: beta[1], type_est: beta[0].exp(), r2, subexponential: beta[1] < 0.25 })
}

fn poles_of(b: &[MpComplex], prec: u32) -> Vec<Complex64> {
    let scale = radius_estimate(b).unwrap_or(1.0).clamp(1e-6, 1e6);
    pade(b, scale, prec).poles(prec)
}

/// Padé poles of B_s u at two truncation lengths; poles present at both
/// (argument within 0.05 rad, modulus within 25%) give singular directions.
pub fn singular_direction_scan(u: &UniSeries, s: &BigRational, prec: u32) -> Result<DirectionScan, BorelError> {
    if u.trunc() < 12 {
        return Err(BorelError::TooShort { need: 12, have: u.trunc() });
    }
    let bt = borel_transform(u, s, prec)?;
    let b = to_mp(&bt, prec);
    let pa = poles_of(&b, prec);
    let pb = poles_of(&b[..b.len() - 2], prec);
    let mut dirs: Vec<SingularDirection> = Vec::new();
    for p in &pa {
        if !p.norm().is_finite() || p.norm() == 0.0 {
            continue;
        }
        let best = pb
            .iter()
            .map(|q| (angle_distance(p.arg(), q.arg()), (q.norm() / p.norm()).ln().abs()))
            .filter(|(da, dm)| *da < 0.05 && *dm < 0.25f64.ln_1p())
            .min_by(|a, b| a.partial_cmp(b).unwrap());
        let Some((da, dm)) = best else { continue };
        let confidence = (1.0 - da / 0.05) * (1.0 - dm / 0.25f64.ln_1p());
        let dir = normalize_angle(p.arg());
        match dirs.iter_mut().find(|x| angle_distance(x.direction, dir) < 0.05) {
            Some(x) => {
                if p.norm() < x.modulus {
                    x.modulus = p.norm();
                }
                x.confidence = x.confidence.max(confidence);
            }
            None => dirs.push(SingularDirection { direction: dir, modulus: p.norm(), confidence }),
        }
    }
    dirs.sort_by(|a, b| b.confidence.partial_cmp(&a.confidence).unwrap());
    Ok(DirectionScan { singular_directions: dirs, method: "pade-pole-clustering".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{factorial, RationalComplex};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// û(t, 0) for the heat equation with φ = 1/(1−z): monomial coefficients (2k)!/k!.
    fn heat_trace(n: u32) -> UniSeries {
        UniSeries::from_vec(
            (0..=n).map(|k| RationalComplex::real(BigRational::new(factorial(2 * k as u64), factorial(k as u64)))).collect(),
        )
    }

    fn radii() -> Vec<f64> {
        (0..12).map(|i| 0.25 * 1.4f64.powi(i)).collect()
    }

    #[test]
    fn heat_trace_along_pi() {
        let p = borel_sum_eval(&heat_trace(20), &q(1, 1), PI, &radii(), 128).unwrap();
        for s in &p.samples {
            assert!((Complex64::new(s.re, s.im) - 1.0 / (1.0 + s.r)).norm() < 1e-6, "r = {}", s.r);
        }
        assert!(p.samples.iter().any(|s| s.method == SampleMethod::Pade));
        assert!(p.growth_fit.as_ref().unwrap().subexponential);
    }

    #[test]
    fn heat_trace_along_zero_breaks_down() {
        let r = borel_sum_eval(&heat_trace(20), &q(1, 1), 0.0, &radii(), 128);
        assert!(matches!(r, Err(BorelError::PadeBreakdown { .. })));
    }

    #[test]
    fn convergent_with_s0_matches_direct() {
        let g = UniSeries::from_vec((0..=20).map(|n| RationalComplex::from_frac(1, 1 << (n % 4 + 1) as i64)).collect());
        let p = borel_sum_eval(&g, &q(0, 1), 1.0, &[0.1, 0.2, 0.3], 128).unwrap();
        for s in &p.samples {
            let t = Complex64::from_polar(s.r, 1.0);
            let direct = (0.5 + t / 4.0 + t * t / 8.0 + t.powi(3) / 16.0) / (1.0 - t.powi(4));
            assert!((Complex64::new(s.re, s.im) - direct).norm() < 1e-12);
        }
    }

    fn synthetic(f: impl Fn(f64) -> f64) -> BorelProfile {
        let samples = (0..16)
            .map(|i| {
                let r = 1.0 + i as f64;
                Sample { r, re: f(r), im: 0.0, method: SampleMethod::PartialSum }
            })
            .collect();
        BorelProfile { s: "1".into(), direction: 0.0, samples, radius_estimate: None, growth_fit: None }
    }

    #[test]
    fn growth_fit_synthetic() {
        let g = growth_order_fit(&synthetic(|r| r.exp())).unwrap();
        assert!((g.k_est - 1.0).abs() < 0.1, "{g:?}");
        let g = growth_order_fit(&synthetic(|r| (2.0 * r * r).exp())).unwrap();
        assert!((g.k_est - 2.0).abs() < 0.1 && (g.type_est - 2.0).abs() < 0.3, "{g:?}");
        let g = growth_order_fit(&synthetic(|r| 1.0 / (1.0 + r))).unwrap();
        assert!(g.subexponential && g.k_est.abs() < 0.1);
        let mut short = synthetic(|r| r);
        short.samples.truncate(4);
        assert!(matches!(growth_order_fit(&short), Err(BorelError::InsufficientSpan(_))));
    }

    #[test]
    fn scan_examples() {
        let sc = singular_direction_scan(&heat_trace(24), &q(1, 1), 128).unwrap();
        assert_eq!(sc.singular_directions.len(), 1);
        assert!(sc.singular_directions[0].direction.abs() < 0.05);
        let alt = UniSeries::from_vec((0..=16).map(|n| RationalComplex::from_int(if n % 2 == 0 { 1 } else { -1 })).collect());
        let sc = singular_direction_scan(&alt, &q(0, 1), 128).unwrap();
        assert_eq!(sc.singular_directions.len(), 1);
        assert!(angle_distance(sc.singular_directions[0].direction, PI) < 0.05);
        let ones = UniSeries::from_vec((0..=24).map(|_| RationalComplex::one()).collect());
        let sc = singular_direction_scan(&ones, &q(1, 1), 128).unwrap();
        assert!(sc.singular_directions.iter().all(|d| d.confidence < 0.5), "{sc:?}");
    }
}
