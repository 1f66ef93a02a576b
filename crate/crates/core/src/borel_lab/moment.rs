//! Contour-integral evaluation of ∂ⁿ_{Γ_{1/p},z} φ for polynomial φ:
//!
//! (1/2πi)∮_{|w|=ε} φ(w) ∫_0^{e^{−i arg w}∞} ζⁿ E_{1/p}(zζ) p(wζ)^{p−1} e^{−(wζ)^p} dζ dw.
//!
//! On the ray s = wζ is real, so the inner integral runs over s ∈ [0, S].

use super::BorelError;
use crate::numeric::gamma::lgamma_fast;
use crate::numeric::quadrature::composite_nodes;
use crate::numeric::MpComplex;
use crate::series_core::{moment_diff, UniSeries};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuadratureResult {
    pub re: f64,
    pub im: f64,
    pub error_estimate: f64,
}

impl QuadratureResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// E_{1/p} in double precision with the term ratios Γ(1+(m−1)/p)/Γ(1+m/p) cached.
struct MlF64 {
    p: f64,
    ratio: Vec<f64>,
}

impl MlF64 {
    fn new(p: u32) -> Self {
        Self { p: p as f64, ratio: vec![1.0] }
    }

    fn ratio(&mut self, m: usize) -> f64 {
        while self.ratio.len() <= m {
            let k = self.ratio.len() as f64;
            self.ratio.push((lgamma_fast(1.0 + (k - 1.0) / self.p) - lgamma_fast(1.0 + k / self.p)).exp());
        }
        self.ratio[m]
    }

    fn eval(&mut self, x: Complex64) -> Complex64 {
        let mut sum = Complex64::new(1.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        let xn = x.norm().powf(self.p);
        let mut m = 1usize;
        let mut small = 0;
        loop {
            term = term * x * self.ratio(m);
            sum += term;
            if term.norm() <= 1e-18 * sum.norm().max(1e-300) && m as f64 > xn {
                small += 1;
                if small > 3 {
                    return sum;
                }
            } else {
                small = 0;
            }
            m += 1;
        }
    }
}

fn eval_poly(c: &[Complex64], w: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |a, v| a * w + v)
}

fn contour(c: &[Complex64], p: u32, n: u32, z: Complex64, eps: f64, circle: usize, panels: usize) -> Complex64 {
    let rho = z.norm() / eps;
    let pf = p as f64;
    // (1 − ρ^p) S^p − (n + p) ln S ≥ 45
    let decay = 1.0 - rho.powf(pf);
    let mut s_max = 1.0f64;
    while decay * s_max.powf(pf) - (n as f64 + pf) * s_max.ln() < 45.0 {
        s_max *= 1.1;
    }
    let nodes = composite_nodes(0.0, s_max, panels, 16);
    let mut ml = MlF64::new(p);
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..circle {
        let w = Complex64::from_polar(eps, 2.0 * PI * (k as f64 + 0.5) / circle as f64);
        let mut inner = Complex64::new(0.0, 0.0);
        for &(s, ws) in &nodes {
            let zeta = s / w;
            let weight = pf * s.powf(pf - 1.0) * (-s.powf(pf)).exp();
            inner += zeta.powi(n as i32) * ml.eval(z * zeta) * weight * ws;
        }
        inner /= w;
        // dw = i w dθ, so (1/2πi)∮ g dw = mean of g(w)·w
        total += eval_poly(c, w) * inner * w;
    }
    total / circle as f64
}

/// Quadrature value with an error estimate from a doubled-resolution rerun.
pub fn moment_pseudodiff_numeric(
    phi: &UniSeries,
    p: u32,
    n: u32,
    z: Complex64,
    eps: f64,
) -> Result<QuadratureResult, BorelError> {
    if p == 0 {
        return Err(BorelError::BadIndex("p = 0".into()));
    }
    if eps.is_nan() || z.norm().is_nan() || eps <= z.norm() {
        return Err(BorelError::BadContour { eps, z: z.norm() });
    }
    let c: Vec<Complex64> = (0..=phi.trunc()).map(|k| phi.get(k).to_complex64()).collect();
    let mut circle = 32usize;
    let mut panels = 24usize;
    let mut coarse = contour(&c, p, n, z, eps, circle, panels);
    for _ in 0..4 {
        circle *= 2;
        panels *= 2;
        let fine = contour(&c, p, n, z, eps, circle, panels);
        let err = (fine - coarse).norm();
        if err <= 1e-9 * fine.norm().max(1.0) {
            return Ok(QuadratureResult { re: fine.re, im: fine.im, error_estimate: err });
        }
        coarse = fine;
    }
    Err(BorelError::QuadratureNotConverged)
}

/// Series definition: Σ_{k≥n} φ_k Γ(1+k/p)/Γ(1+(k−n)/p) z^{k−n}.
pub fn moment_pseudodiff_series(phi: &UniSeries, p: u32, n: u32, z: Complex64, prec: u32) -> Result<Complex64, BorelError> {
    let q = BigRational::new(1.into(), (p as i64).into());
    let mut d = phi.clone();
    for _ in 0..n {
        if d.trunc() == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        d = moment_diff(&d, &q, prec)?;
    }
    let zm = MpComplex::from_c64(z, prec);
    let mut acc = MpComplex::zero(prec);
    for k in (0..=d.trunc()).rev() {
        acc = &(&acc * &zm) + &MpComplex::from_rc(&d.get(k), prec);
    }
    Ok(acc.to_c64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::RationalComplex;

    fn poly(c: &[i64]) -> UniSeries {
        UniSeries::from_vec(c.iter().map(|&x| RationalComplex::from_int(x)).collect())
    }

    #[test]
    fn p1_is_derivative() {
        let z = Complex64::new(0.3, -0.2);
        let r = moment_pseudodiff_numeric(&poly(&[0, 0, 1]), 1, 1, z, 1.5).unwrap();
        assert!((r.value() - 2.0 * z).norm() < 1e-6, "{r:?}");
    }

    #[test]
    fn n0_is_identity() {
        let z = Complex64::new(0.1, 0.25);
        let phi = poly(&[1, -2, 0, 3]);
        for p in 1..=3 {
            let r = moment_pseudodiff_numeric(&phi, p, 0, z, 1.2).unwrap();
            let want = Complex64::new(1.0, 0.0) - 2.0 * z + 3.0 * z.powi(3);
            assert!((r.value() - want).norm() < 1e-6, "p={p}: {r:?}");
        }
    }

    #[test]
    fn p2_matches_series() {
        let phi = poly(&[0, 0, 1]);
        let r = moment_pseudodiff_numeric(&phi, 2, 1, Complex64::new(0.0, 0.0), 1.0).unwrap();
        let s = moment_pseudodiff_series(&phi, 2, 1, Complex64::new(0.0, 0.0), 256).unwrap();
        assert!((r.value() - s).norm() < 1e-6);
        let z = Complex64::new(0.2, 0.1);
        let phi = poly(&[1, 2, -1, 4]);
        let r = moment_pseudodiff_numeric(&phi, 2, 2, z, 1.0).unwrap();
        let s = moment_pseudodiff_series(&phi, 2, 2, z, 256).unwrap();
        assert!((r.value() - s).norm() < 1e-6, "{r:?} vs {s}");
    }
}
