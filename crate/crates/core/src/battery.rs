//! Seeded property batteries run by `goursat verify` and by the acceptance suite.
//!
//! Every instance draws from its own ChaCha stream keyed by (seed, check, index),
//! so reports do not depend on thread scheduling.

use crate::borel_lab::{
    e_kernel, mittag_leffler, moment_pseudodiff_numeric, moment_pseudodiff_series, summability_verdict, Verdict,
};
use crate::char_roots::slopes_consistency;
use crate::expr_parser::{parse_operator, Operator};
use crate::goursat_solver::{cauchy_recursion, solve_truncated, two_characteristic_oracle, GoursatProblem};
use crate::newton_polygon::LaurentPoly;
use crate::numeric::{factorial, MpComplex, MpFloat, RationalComplex};
use crate::par::Execution;
use crate::series_core::{borel_transform, gevrey_estimate, moment_diff, BiSeries, GoursatData, UniSeries};
use crate::solvability::{
    check_hw, classify, spectral_condition, toeplitz_sections, winding_by_argument, winding_by_roots, zero_moduli, WInterval,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub instances: usize,
    pub failures: usize,
    pub passed: bool,
    /// First failure, or a short summary when everything passed.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BatteryReport {
    pub schema_version: u32,
    pub seed: u64,
    pub precision_bits: u32,
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
}

impl CheckResult {
    pub fn line(&self) -> String {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        format!(
            "[{mark}] {:>2} {} ({}/{} ok): {}",
            self.id,
            self.name,
            self.instances - self.failures,
            self.instances,
            self.detail
        )
    }
}

fn rng_for(seed: u64, check: u32, i: usize) -> ChaCha8Rng {
    let key = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((check as u64) << 40) ^ i as u64;
    ChaCha8Rng::seed_from_u64(key)
}

fn tally(id: u32, name: &str, outcomes: Vec<Result<(), String>>, summary: String) -> CheckResult {
    let failures = outcomes.iter().filter(|o| o.is_err()).count();
    let detail =
        outcomes.iter().enumerate().find_map(|(i, o)| o.as_ref().err().map(|e| format!("instance {i}: {e}"))).unwrap_or(summary);
    CheckResult {
        id,
        name: name.into(),
        instances: outcomes.len(),
        failures,
        passed: failures == 0 && !outcomes.is_empty(),
        detail,
    }
}

fn single(id: u32, name: &str, r: Result<String, String>) -> CheckResult {
    match r {
        Ok(s) => tally(id, name, vec![Ok(())], s),
        Err(e) => tally(id, name, vec![Err(e)], String::new()),
    }
}

fn rand_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    BigRational::new(rng.gen_range(-num..=num).into(), rng.gen_range(1..=den).into())
}

fn rand_nonzero_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    loop {
        let r = rand_rat(rng, num, den);
        if !r.is_zero() {
            return r;
        }
    }
}

fn rand_rc(rng: &mut ChaCha8Rng, num: i64, den: i64) -> RationalComplex {
    let im = if rng.gen_bool(0.5) { rand_rat(rng, num, den) } else { BigRational::zero() };
    RationalComplex::new(rand_rat(rng, num, den), im)
}

fn rand_nonzero_rc(rng: &mut ChaCha8Rng, num: i64, den: i64) -> RationalComplex {
    loop {
        let r = rand_rc(rng, num, den);
        if !r.is_zero() {
            return r;
        }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// B_s∂t = ∂_{Γ_q}B_s, q = 1 + s, checked coefficientwise in exact arithmetic.
pub fn check_commutation(seed: u64, count: usize, prec: u32, exec: Execution) -> CheckResult {
    let outcomes = exec.map_range(count, |i| {
        let mut rng = rng_for(seed, 1, i);
        let s = BigRational::from_integer(BigInt::from(i % 3));
        let u = UniSeries::from_vec((0..20).map(|_| rand_rc(&mut rng, 9, 7)).collect());
        let lhs = borel_transform(&u.derivative(), &s, prec).map_err(|e| e.to_string())?;
        let bu = borel_transform(&u, &s, prec).map_err(|e| e.to_string())?;
        let rhs = moment_diff(&bu, &(&s + BigRational::one()), prec).map_err(|e| e.to_string())?;
        if !lhs.is_exact() || !rhs.is_exact() {
            return Err(format!("s = {s}: inexact result"));
        }
        if lhs != rhs {
            return Err(format!("s = {s}: sides differ"));
        }
        Ok(())
    });
    tally(1, "commutation B_s Dt = D_Gamma_q B_s", outcomes, format!("{count} series of length 20, s in {{0,1,2}}"))
}

/// Product of factors Dt − λDz^m and Dt² − λDz^m (m odd), total t-order ≤ 4.
pub fn random_factored_operator(rng: &mut ChaCha8Rng) -> Operator {
    let mut op = Operator::from_terms(&[((0, 0), RationalComplex::one())]).unwrap();
    let mut order = 0;
    let nf = rng.gen_range(1..=3);
    for _ in 0..nf {
        let lam = RationalComplex::real(rand_nonzero_rat(rng, 6, 4));
        let factor = if order <= 2 && rng.gen_bool(0.3) {
            let m = [1, 3, 5][rng.gen_range(0..3)];
            order += 2;
            Operator::from_terms(&[((2, 0), RationalComplex::one()), ((0, m), -&lam)]).unwrap()
        } else {
            let m = rng.gen_range(0..=3);
            order += 1;
            Operator::from_terms(&[((1, 0), RationalComplex::one()), ((0, m), -&lam)]).unwrap()
        };
        op = op.mul(&factor);
        if order >= 4 {
            break;
        }
    }
    op
}

/// Newton polygon slopes against root-group pole orders.
pub fn check_slopes(seed: u64, count: usize, prec: u32, exec: Execution) -> CheckResult {
    let outcomes = exec.map_range(count, |i| {
        let mut rng = rng_for(seed, 2, i);
        let op = random_factored_operator(&mut rng);
        let r = slopes_consistency(&op, prec).map_err(|e| format!("{op:?}: {e}"))?;
        if r.all_ok {
            Ok(())
        } else {
            Err(format!("{}: {:?}", crate::expr_parser::format_operator(&op), r.entries))
        }
    });
    tally(2, "Newton polygon slopes match root groups", outcomes, format!("{count} factored operators"))
}

fn random_laurent(rng: &mut ChaCha8Rng) -> LaurentPoly {
    let lo = rng.gen_range(-3..=1i64);
    let span = rng.gen_range(1..=5i64);
    let mut pairs: Vec<(i64, RationalComplex)> = (lo..=lo + span).map(|e| (e, rand_rc(rng, 5, 3))).collect();
    pairs[0].1 = rand_nonzero_rc(rng, 5, 3);
    pairs[span as usize].1 = rand_nonzero_rc(rng, 5, 3);
    LaurentPoly::from_pairs(&pairs)
}

/// Root counting against the argument principle, radii at least 1e-3 from every zero modulus.
pub fn check_winding(seed: u64, count: usize, prec: u32, exec: Execution) -> CheckResult {
    let outcomes = exec.map_range(count, |i| {
        let mut rng = rng_for(seed, 3, i);
        let f = random_laurent(&mut rng);
        let (_, mods) = zero_moduli(&f, prec).map_err(|e| e.to_string())?;
        let w = (0..1000)
            .map(|_| (rng.gen_range(-3.0f64..3.0)).exp())
            .find(|w| mods.iter().all(|(r, _)| (r - w).abs() >= 1e-3))
            .ok_or("no admissible radius found")?;
        let a = winding_by_roots(&f, w, prec).map_err(|e| e.to_string())?;
        let b = winding_by_argument(&f, w).map_err(|e| e.to_string())?;
        if a == b {
            Ok(())
        } else {
            Err(format!("w = {w}: roots {a}, argument {b}"))
        }
    });
    tally(3, "winding number: root count = argument principle", outcomes, format!("{count} Laurent polynomials"))
}

/// Terms (j, α0 + q(m − j)) on a side of index s = q − 1; returns the operator and a contact point.
fn random_principal_part(rng: &mut ChaCha8Rng) -> (Operator, BigRational, u32, u32) {
    let q = rng.gen_range(1..=3u32);
    let m = rng.gen_range(1..=3u32);
    let a0 = rng.gen_range(0..=1u32);
    let mut terms = Vec::new();
    for j in 0..=m {
        if j == 0 || j == m || rng.gen_bool(0.6) {
            terms.push(((j, a0 + q * (m - j)), rand_nonzero_rc(rng, 4, 3)));
        }
    }
    let pick = rng.gen_range(0..terms.len());
    if rng.gen_bool(0.5) {
        let boost = RationalComplex::from_int(8 * (m as i64 + 1));
        terms[pick].1 = &terms[pick].1 * &boost;
    }
    let (j, alpha) = terms[pick].0;
    let op = Operator::from_terms(&terms).unwrap();
    (op, BigRational::from_integer(BigInt::from(q - 1)), j, alpha)
}

/// Every spectral witness lies in an admissible interval of (H_w).
pub fn check_spectral(seed: u64, count: usize, prec: u32, exec: Execution) -> CheckResult {
    let outcomes = exec.map_range(count, |i| {
        let mut rng = rng_for(seed, 4, i);
        let (op, s, j, alpha) = random_principal_part(&mut rng);
        let Some(w) = spectral_condition(&op, &s, j, alpha).map_err(|e| e.to_string())? else {
            return Ok(false);
        };
        let adm = check_hw(&op, &s, j, alpha, prec).map_err(|e| e.to_string())?;
        if adm.iter().any(|iv| iv.contains(w)) {
            Ok(true)
        } else {
            Err(format!("witness w = {w} outside {adm:?} for {}", crate::expr_parser::format_operator(&op)))
        }
    });
    let witnesses = outcomes.iter().filter(|o| matches!(o, Ok(true))).count();
    let mut outcomes: Vec<Result<(), String>> = outcomes.into_iter().map(|o| o.map(|_| ())).collect();
    if witnesses == 0 {
        outcomes.push(Err("no instance produced a spectral witness".into()));
    }
    tally(4, "spectral witness satisfies (H_w)", outcomes, format!("{count} principal parts, {witnesses} with a witness"))
}

fn endpoint_close(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= 1e-10
}

/// classify's interval from root moduli against the zero scan of the symbol.
pub fn check_classify(seed: u64, count: usize, prec: u32, exec: Execution) -> CheckResult {
    let outcomes = exec.map_range(count, |i| {
        let mut rng = rng_for(seed, 5, i);
        let q = rng.gen_range(1..=2u32);
        let m = rng.gen_range(2..=3u32);
        let mut lams: Vec<RationalComplex> = Vec::new();
        while lams.len() < m as usize {
            let l = rand_nonzero_rc(&mut rng, 7, 4);
            let r = l.abs_f64();
            if lams.iter().all(|o| (o.abs_f64() - r).abs() >= 1e-2) {
                lams.push(l);
            }
        }
        let mut op = Operator::from_terms(&[((0, 0), RationalComplex::one())]).unwrap();
        for l in &lams {
            op = op.mul(&Operator::from_terms(&[((1, 0), RationalComplex::one()), ((0, q), -l)]).unwrap());
        }
        let s = BigRational::from_integer(BigInt::from(q - 1));
        let j = rng.gen_range(0..=m);
        let alpha = q * (m - j);
        let v = classify(&op, &s, j, alpha, 4, prec, Execution::Sequential).map_err(|e| e.to_string())?;
        let hw = check_hw(&op, &s, j, alpha, prec).map_err(|e| e.to_string())?;
        let want: Option<WInterval> = v.w_interval;
        match (want, hw.as_slice()) {
            (Some(a), [b]) if endpoint_close(a.lo, b.lo) && endpoint_close(a.hi, b.hi) => Ok(()),
            (a, b) => Err(format!("(j, α) = ({j}, {alpha}): classify {a:?}, check_Hw {b:?}")),
        }
    });
    tally(5, "classify interval = check_Hw interval", outcomes, format!("{count} one-slope factored operators"))
}

/// Heat equation Dt − Dz² with φ0 = 1/(1 − z).
pub fn heat_problem(trunc_t: u32, trunc_z: u32) -> GoursatProblem {
    let data = GoursatData::new(vec![UniSeries::geometric(trunc_z)], vec![]).unwrap();
    GoursatProblem::new(parse_operator("Dt - Dz^2").unwrap(), BiSeries::zero(trunc_t, trunc_z), data)
}

fn heat_pipeline() -> Result<String, String> {
    let p = heat_problem(24, 24);
    let (u, rep) = solve_truncated(&p, 18, 18, 6, 6).map_err(|e| e.to_string())?;
    if !rep.residual_exact_zero {
        return Err("solver residual not exactly zero".into());
    }
    for k in 0..=6u32 {
        for b in 0..=6u32 {
            let want = RationalComplex::real(factorial((2 * k + b) as u64).into());
            if u.u(k, b) != want {
                return Err(format!("u_({k},{b}) = {} instead of (2k+β)!", u.u(k, b)));
            }
        }
    }
    let heat = parse_operator("Dt - Dz^2").unwrap();
    // a_k needs nearly all of Σ_β: the ρ-weighted terms peak near β ≈ 2k
    let long =
        cauchy_recursion(&heat, &[UniSeries::geometric(160)], &BiSeries::zero(16, 160), 16, 120).map_err(|e| e.to_string())?;
    let g = gevrey_estimate(&long, 0.5, 4, 16).map_err(|e| e.to_string())?;
    if (g.s_hat - 1.0).abs() > 0.15 {
        return Err(format!("Gevrey estimate {} outside 1 ± 0.15", g.s_hat));
    }
    let trace = borel_transform(&long.t_trace(), &BigRational::one(), 128).map_err(|e| e.to_string())?;
    if trace != UniSeries::geometric(16) {
        return Err("B_1 trace is not the geometric series".into());
    }
    Ok(format!("window (6,6) exact, Gevrey estimate {:.4}, B_1 trace geometric", g.s_hat))
}

pub fn check_heat_pipeline() -> CheckResult {
    single(6, "heat pipeline", heat_pipeline())
}

fn rand_data_series(rng: &mut ChaCha8Rng, trunc: u32) -> UniSeries {
    UniSeries::from_vec((0..=trunc).map(|_| RationalComplex::real(rand_rat(rng, 5, 6))).collect())
}

/// Solver against the closed form f(λ1t + z) + g(λ2t + z).
pub fn check_two_characteristic(seed: u64, count: usize, exec: Execution) -> CheckResult {
    let outcomes = exec.map_range(count, |i| {
        let mut rng = rng_for(seed, 7, i);
        let (l1, l2) = loop {
            let a = RationalComplex::real(rand_nonzero_rat(&mut rng, 5, 3));
            let b = RationalComplex::real(rand_nonzero_rat(&mut rng, 5, 3));
            if a.norm_sqr() != b.norm_sqr() {
                break (a, b);
            }
        };
        let phi = rand_data_series(&mut rng, 40);
        let mut psi = rand_data_series(&mut rng, 40);
        psi.set(0, phi.get(0));
        let op = Operator::from_terms(&[((1, 0), RationalComplex::one()), ((0, 1), -&l1)])
            .unwrap()
            .mul(&Operator::from_terms(&[((1, 0), RationalComplex::one()), ((0, 1), -&l2)]).unwrap());
        let data = GoursatData::new(vec![phi.clone()], vec![psi.clone()]).map_err(|e| e.to_string())?;
        let p = GoursatProblem::new(op, BiSeries::zero(40, 40), data);
        let (u, _) = solve_truncated(&p, 16, 16, 5, 5).map_err(|e| e.to_string())?;
        let w = two_characteristic_oracle(&l1, &l2, &phi, &psi, 5).map_err(|e| e.to_string())?;
        if u == w {
            Ok(())
        } else {
            Err(format!("λ = ({l1}, {l2}): solver differs from closed form"))
        }
    });
    tally(7, "two-characteristic closed form", outcomes, format!("{count} instances on window (5,5)"))
}

fn heat_summability(prec: u32) -> Result<String, String> {
    let p = heat_problem(40, 60);
    let good = summability_verdict(&p, PI, prec).map_err(|e| e.to_string())?;
    if good.verdict != Verdict::SummableEvidence {
        return Err(format!("d = π gave {}", good.verdict.label()));
    }
    let bad = summability_verdict(&p, 0.0, prec).map_err(|e| e.to_string())?;
    match bad.verdict {
        Verdict::Obstructed { direction, .. } if direction.abs() <= 0.05 => {
            Ok(format!("d = π summable evidence; d = 0 obstructed at {direction:.2e}"))
        }
        v => Err(format!("d = 0 gave {v:?}")),
    }
}

pub fn check_heat_summability(prec: u32) -> CheckResult {
    single(8, "heat summability dichotomy", heat_summability(prec))
}

/// Contour quadrature of the moment pseudodifferential operator against its series definition.
pub fn check_moment_contour(seed: u64, count: usize, prec: u32, exec: Execution) -> CheckResult {
    let outcomes = exec.map_range(count, |i| {
        let mut rng = rng_for(seed, 9, i);
        let p = rng.gen_range(1..=3u32);
        let n = rng.gen_range(0..=4u32);
        let deg = rng.gen_range(0..=6usize);
        let phi = UniSeries::from_vec((0..=deg).map(|_| rand_rc(&mut rng, 4, 3)).collect());
        let z = Complex64::from_polar(rng.gen_range(0.0..0.5), rng.gen_range(-PI..PI));
        let eps = 4.0 * z.norm().max(0.25);
        let num = moment_pseudodiff_numeric(&phi, p, n, z, eps).map_err(|e| e.to_string())?;
        let ser = moment_pseudodiff_series(&phi, p, n, z, prec).map_err(|e| e.to_string())?;
        let err = (num.value() - ser).norm();
        if err <= 1e-6 {
            Ok(())
        } else {
            Err(format!("p = {p}, n = {n}, z = {z}: |Δ| = {err:.3e}"))
        }
    });
    tally(9, "moment operator: contour = series", outcomes, format!("{count} instances, p ≤ 3, n ≤ 4, deg φ ≤ 6"))
}

/// e·(1 + erf 1) from the exact rational series of erf, at 512 bits.
fn e_half_one_oracle() -> MpFloat {
    let wp = 512;
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    for n in 0..140u32 {
        if n > 0 {
            fact *= n;
        }
        let t = BigRational::new(BigInt::one(), &fact * BigInt::from(2 * n + 1));
        if n % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    let two_over_sqrt_pi = MpFloat::pi(wp).sqrt().recip().mul_pow2(1);
    let erf1 = &two_over_sqrt_pi * &MpFloat::from_ratio(&sum, wp);
    let e = MpFloat::one(wp).exp();
    &e * &(&MpFloat::one(wp) + &erf1)
}

fn special_functions(prec: u32) -> Result<String, String> {
    let one = BigRational::one();
    let mut worst_exp: f64 = 0.0;
    for r in [0.0, 0.5, 1.25, 2.5, 3.75, 5.0] {
        for k in 0..12 {
            let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / 12.0);
            let zm = MpComplex::from_c64(z, prec);
            let v = mittag_leffler(&one, &zm, prec).map_err(|e| e.to_string())?;
            let d = (&v - &zm.exp()).abs().to_f64();
            worst_exp = worst_exp.max(d);
        }
    }
    if worst_exp > 1e-12 {
        return Err(format!("|E_1 − exp| = {worst_exp:.3e}"));
    }
    let mut worst_e: f64 = 0.0;
    for a in [rat(1, 1), rat(3, 2), rat(2, 1), rat(5, 2), rat(3, 1)] {
        for x in [-3.0, -1.0, -0.25, 0.5, 1.5, 3.0] {
            for im in [0.0, 0.75] {
                let xm = MpComplex::from_f64(x, im, prec);
                let lhs = e_kernel(&a, 1, &xm, prec).map_err(|e| e.to_string())?;
                let rhs = &mittag_leffler(&a, &xm, prec).map_err(|e| e.to_string())? - &MpComplex::one(prec);
                worst_e = worst_e.max((&lhs - &rhs).abs().to_f64());
            }
        }
    }
    if worst_e > 1e-10 {
        return Err(format!("|e_(a,1) − (E_a − 1)| = {worst_e:.3e}"));
    }
    let v = mittag_leffler(&rat(1, 2), &MpComplex::one(prec), prec).map_err(|e| e.to_string())?;
    let d = (&v.abs() - &e_half_one_oracle().with_prec(prec)).abs().to_f64();
    if d > 1e-10 || v.im.abs().to_f64() > 1e-10 {
        return Err(format!("E_1/2(1) off the oracle by {d:.3e}"));
    }
    Ok(format!("max |E_1 − exp| = {worst_exp:.1e}, max |e_(a,1) − E_a + 1| = {worst_e:.1e}, E_1/2(1) within {d:.1e}"))
}

pub fn check_special_functions(prec: u32) -> CheckResult {
    single(10, "Mittag-Leffler identities", special_functions(prec))
}

fn lp(pairs: &[(i64, i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_pairs(&pairs.iter().map(|&(e, n, d)| (e, RationalComplex::from_frac(n, d))).collect::<Vec<_>>())
}

fn toeplitz(exec: Execution) -> Result<String, String> {
    let r = toeplitz_sections(&lp(&[(0, 1, 1), (1, -1, 1)]), 32, exec);
    if !(r.exact && r.all_invertible) {
        return Err("1 − z: a section is singular".into());
    }
    let r = toeplitz_sections(&lp(&[(-1, 1, 1), (1, -1, 1)]), 0, exec);
    if r.results[0].invertible {
        return Err("z⁻¹ − z: T(0) is invertible".into());
    }
    // tridiagonal: D_n = −5/2·D_{n−1} − D_{n−2}; sections are negative definite,
    // so the positive quantity is det(−T(N)) = (−1)^{N+1} det T(N)
    let r = toeplitz_sections(&lp(&[(-1, 1, 1), (0, -5, 2), (1, 1, 1)]), 32, exec);
    let (mut d0, mut d1) = (BigRational::one(), rat(-5, 2));
    for e in &r.results {
        let got = e.det.as_deref().and_then(|d| d.parse::<BigRational>().ok());
        if got.as_ref() != Some(&d1) {
            return Err(format!("z⁻¹ − 5/2 + z: det T({}) = {:?}, recurrence gives {d1}", e.n, e.det));
        }
        let signed = if e.n % 2 == 0 { -d1.clone() } else { d1.clone() };
        if !signed.is_positive() {
            return Err(format!("z⁻¹ − 5/2 + z: det(−T({})) not positive", e.n));
        }
        (d0, d1) = (d1.clone(), &d1 * rat(-5, 2) - d0);
    }
    if !(r.exact && r.all_invertible && r.results.len() == 33) {
        return Err("z⁻¹ − 5/2 + z: a section is singular".into());
    }
    Ok("1 − z and z⁻¹ − 5/2 + z invertible for N ≤ 32 (exact, det(−T(N)) > 0 matching the recurrence); z⁻¹ − z singular at N = 0"
        .into())
}

pub fn check_toeplitz(exec: Execution) -> CheckResult {
    single(11, "Toeplitz finite sections", toeplitz(exec))
}

pub const DEFAULT_COUNTS: [usize; 6] = [200, 200, 500, 200, 100, 50];
pub const MOMENT_INSTANCES: usize = 50;

/// Checks 1–11 at their full sizes.
pub fn run_battery(seed: u64, prec: u32, exec: Execution) -> BatteryReport {
    let [c1, c2, c3, c4, c5, c7] = DEFAULT_COUNTS;
    let checks = vec![
        check_commutation(seed, c1, prec, exec),
        check_slopes(seed, c2, prec, exec),
        check_winding(seed, c3, prec, exec),
        check_spectral(seed, c4, prec, exec),
        check_classify(seed, c5, prec, exec),
        check_heat_pipeline(),
        check_two_characteristic(seed, c7, exec),
        check_heat_summability(prec),
        check_moment_contour(seed, MOMENT_INSTANCES, prec, exec),
        check_special_functions(prec),
        check_toeplitz(exec),
    ];
    let all_passed = checks.iter().all(|c| c.passed);
    BatteryReport { schema_version: SCHEMA_VERSION, seed, precision_bits: prec, checks, all_passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batteries_pass_and_repeat() {
        let a = check_winding(7, 20, 128, Execution::Parallel);
        let b = check_winding(7, 20, 128, Execution::Sequential);
        assert!(a.passed, "{}", a.line());
        assert_eq!(a, b);
        assert!(check_commutation(7, 9, 128, Execution::default()).passed);
        assert!(check_slopes(7, 10, 128, Execution::default()).passed);
    }

    #[test]
    fn oracle_matches_frozen_constant() {
        let v = e_half_one_oracle();
        assert!((v.to_f64() - 5.008980080762283).abs() < 1e-14);
    }
}
