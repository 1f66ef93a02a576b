//! Diagonal Padé approximants in multiprecision.
//!
//! The smallest order that reproduces every available coefficient is used;
//! otherwise the largest nonsingular order.

#![allow(clippy::needless_range_loop)]

use crate::numeric::poly::roots_mp;
use crate::numeric::MpComplex;
use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct Pade {
    /// Ascending coefficients in the scaled variable τ = t / scale.
    pub num: Vec<MpComplex>,
    pub den: Vec<MpComplex>,
    pub scale: f64,
    /// True when the approximant reproduces all given coefficients.
    pub exact: bool,
}

/// Solve A x = b by Gaussian elimination with partial pivoting.
/// `None` when a pivot falls below 2^{−prec/2} of the largest entry.
fn solve(mut a: Vec<Vec<MpComplex>>, mut b: Vec<MpComplex>, prec: u32) -> Option<Vec<MpComplex>> {
    let n = a.len();
    let big = a.iter().flatten().map(|x| x.abs().to_f64()).fold(0.0, f64::max);
    if big == 0.0 {
        return None;
    }
    let floor = big * 2f64.powi(-((prec / 2) as i32));
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].norm_sqr().partial_cmp(&a[j][k].norm_sqr()).unwrap())?;
        if a[p][k].abs().to_f64() <= floor {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        let inv = a[k][k].recip();
        for i in k + 1..n {
            let f = &a[i][k] * &inv;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] = &a[i][j] - &t;
            }
            let t = &f * &b[k];
            b[i] = &b[i] - &t;
        }
    }
    let mut x = vec![MpComplex::zero(prec); n];
    for k in (0..n).rev() {
        let mut s = b[k].clone();
        for j in k + 1..n {
            s = &s - &(&a[k][j] * &x[j]);
        }
        x[k] = &s / &a[k][k];
    }
    Some(x)
}

fn at(b: &[MpComplex], i: i64, prec: u32) -> MpComplex {
    if i < 0 {
        MpComplex::zero(prec)
    } else {
        b[i as usize].clone()
    }
}

/// [L/L] approximant of Σ b_n tⁿ, computed in τ = t/scale.
pub fn pade(coeffs: &[MpComplex], scale: f64, prec: u32) -> Pade {
    let n = coeffs.len().saturating_sub(1);
    let sc = MpComplex::from_f64(scale, 0.0, prec);
    let mut pw = MpComplex::one(prec);
    let b: Vec<MpComplex> = coeffs
        .iter()
        .map(|c| {
            let v = &c.with_prec(prec) * &pw;
            pw = &pw * &sc;
            v
        })
        .collect();
    let tol = 2f64.powi(-((prec / 3) as i32));
    let mut fallback = None;
    for l in 1..=n / 2 {
        let a: Vec<Vec<MpComplex>> =
            (l + 1..=2 * l).map(|k| (1..=l).map(|j| at(&b, k as i64 - j as i64, prec)).collect()).collect();
        let rhs: Vec<MpComplex> = (l + 1..=2 * l).map(|k| -b[k].clone()).collect();
        let Some(q) = solve(a, rhs, prec) else { continue };
        let mut den = vec![MpComplex::one(prec)];
        den.extend(q);
        let num: Vec<MpComplex> =
            (0..=l).map(|k| (0..=k).fold(MpComplex::zero(prec), |acc, j| &acc + &(&den[j] * &b[k - j]))).collect();
        let mut exact = true;
        for k in 2 * l + 1..=n {
            let mut d = MpComplex::zero(prec);
            let mut mag = 0.0;
            for (j, qj) in den.iter().enumerate() {
                let t = qj * &b[k - j];
                mag += t.abs().to_f64();
                d = &d + &t;
            }
            if d.abs().to_f64() > tol * mag.max(f64::MIN_POSITIVE) {
                exact = false;
                break;
            }
        }
        if exact {
            return Pade { num, den, scale, exact: true };
        }
        fallback = Some(Pade { num, den, scale, exact: false });
    }
    fallback.unwrap_or_else(|| Pade { num: b, den: vec![MpComplex::one(prec)], scale, exact: true })
}

fn horner(c: &[MpComplex], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, v| acc * x + v.to_c64())
}

impl Pade {
    pub fn eval(&self, t: Complex64) -> Complex64 {
        let x = t / self.scale;
        horner(&self.num, x) / horner(&self.den, x)
    }

    /// Zeros of the denominator in the original variable.
    pub fn poles(&self, prec: u32) -> Vec<Complex64> {
        let mut den = self.den.clone();
        while den.len() > 1 && den.last().unwrap().is_zero() {
            den.pop();
        }
        if den.len() < 2 {
            return vec![];
        }
        match roots_mp(&den, prec) {
            Ok(r) => r.into_iter().map(|z| z.to_c64() * self.scale).collect(),
            Err(_) => vec![],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_is_exact_order_one() {
        let c: Vec<MpComplex> = (0..16).map(|_| MpComplex::one(128)).collect();
        let p = pade(&c, 1.0, 128);
        assert!(p.exact);
        assert_eq!(p.den.len(), 2);
        let poles = p.poles(128);
        assert!((poles[0] - Complex64::new(1.0, 0.0)).norm() < 1e-20);
        assert!((p.eval(Complex64::new(-3.0, 0.0)) - 0.25).norm() < 1e-14);
    }

    #[test]
    fn polynomial_falls_back_to_partial_sum() {
        let mut c: Vec<MpComplex> = (0..10).map(|_| MpComplex::zero(128)).collect();
        c[0] = MpComplex::one(128);
        c[2] = MpComplex::from_i64(3, 128);
        let p = pade(&c, 1.0, 128);
        assert!(p.poles(128).is_empty());
        assert!((p.eval(Complex64::new(2.0, 0.0)) - 13.0).norm() < 1e-12);
    }
}
