//! Γ and 1/Γ at arbitrary precision.
//!
//! Integers go through exact factorials. Other arguments use the Stirling
//! series after shifting the argument up to `z ≥ prec/4`, with reflection
//! for `x < 1/2`.

use super::mp::MpFloat;
use super::rational_complex::factorial;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::{Mutex, OnceLock};

/// B_0, B_1, …, B_n (with B_1 = −1/2), cached and extended on demand.
fn bernoulli_upto(n: usize) -> Vec<BigRational> {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut b = cache.lock().unwrap();
    while b.len() <= n {
        let m = b.len();
        // Σ_{k=0}^{m} C(m+1,k) B_k = 0
        let mut s = BigRational::zero();
        let mut c = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            s += bk * &c;
            c = c * (m + 1 - k) / (k + 1);
        }
        let bm = -s / BigRational::from_integer(BigInt::from(m + 1));
        b.push(bm);
    }
    b[..=n].to_vec()
}

fn rat_is_nonpositive_int(x: &BigRational) -> bool {
    x.is_integer() && !x.is_positive()
}

/// ln Γ(x) for x ≥ 1/2 (real).
fn lgamma_shifted(x: &MpFloat) -> MpFloat {
    let p = x.prec();
    let wp = p + 32;
    let x = x.with_prec(wp);
    let z0 = (wp as f64 / 4.0).max(12.0);
    let xf = x.to_f64();
    let shift = if xf < z0 { (z0 - xf).ceil() as i64 } else { 0 };
    let z = &x + &MpFloat::from_i64(shift, wp);
    // product x(x+1)…(x+shift−1)
    let mut prod = MpFloat::one(wp);
    for i in 0..shift {
        prod = &prod * &(&x + &MpFloat::from_i64(i, wp));
    }
    let half = MpFloat::one(wp).mul_pow2(-1);
    let ln_z = z.ln();
    let two_pi = MpFloat::pi(wp).mul_pow2(1);
    let mut s = &(&(&z - &half) * &ln_z) - &z;
    s = &s + &two_pi.ln().mul_pow2(-1);
    let zinv = z.recip();
    let zinv2 = zinv.square();
    let mut zpow = zinv.clone();
    let eps = -(wp as i64) - 4;
    let mut prev_mag = i64::MAX;
    let mut k = 1usize;
    loop {
        let b = bernoulli_upto(2 * k);
        let coef = &b[2 * k] / BigRational::from_integer(BigInt::from((2 * k) * (2 * k - 1)));
        let term = &MpFloat::from_ratio(&coef, wp) * &zpow;
        let mag = term.mag_exp();
        if term.is_zero() || mag < eps {
            break;
        }
        assert!(mag < prev_mag || k < 3, "Stirling series diverging");
        prev_mag = mag;
        s = &s + &term;
        zpow = &zpow * &zinv2;
        k += 1;
    }
    if shift > 0 {
        s = &s - &prod.abs().ln();
    }
    s.with_prec(p)
}

/// Γ(x) for real x that is not a non-positive integer.
pub fn gamma(x: &MpFloat) -> MpFloat {
    let p = x.prec();
    if let Some(n) = x.as_exact_int() {
        assert!(n.is_positive(), "Γ pole at non-positive integer");
        let n = n.to_u64().expect("Γ argument too large");
        return MpFloat::from_bigint(&factorial(n - 1), p);
    }
    let wp = p + 16;
    let x = x.with_prec(wp);
    let half = MpFloat::one(wp).mul_pow2(-1);
    if x < half {
        // Γ(x) = π / (sin(πx) Γ(1−x))
        let pi = MpFloat::pi(wp);
        let (s, _) = (&pi * &x).sin_cos();
        let g = gamma(&(&MpFloat::one(wp) - &x));
        return (&pi / &(&s * &g)).with_prec(p);
    }
    let lg = lgamma_shifted(&x);
    let v = lg.exp();
    // sign: Γ > 0 for x > 0
    v.with_prec(p)
}

/// 1/Γ(x); zero at the poles.
pub fn rgamma(x: &MpFloat) -> MpFloat {
    if let Some(n) = x.as_exact_int() {
        if !n.is_positive() {
            return MpFloat::zero(x.prec());
        }
    }
    gamma(x).recip()
}

/// Γ(x) at a rational argument; exact integer path when possible.
pub fn gamma_rat(x: &BigRational, prec: u32) -> MpFloat {
    assert!(!rat_is_nonpositive_int(x), "Γ pole at non-positive integer");
    if x.is_integer() {
        let n = x.to_integer().to_u64().expect("Γ argument too large");
        return MpFloat::from_bigint(&factorial(n - 1), prec);
    }
    gamma(&MpFloat::from_ratio(x, prec + 16)).with_prec(prec)
}

pub fn rgamma_rat(x: &BigRational, prec: u32) -> MpFloat {
    if rat_is_nonpositive_int(x) {
        return MpFloat::zero(prec);
    }
    gamma_rat(x, prec).recip()
}

/// Γ(x) in double precision via the multiprecision path.
pub fn gamma_f64(x: f64) -> f64 {
    gamma(&MpFloat::from_f64(x, 80)).to_f64()
}

/// ln Γ(x) for x > 0 in double precision.
pub fn lgamma_f64(x: f64) -> f64 {
    assert!(x > 0.0);
    let m = MpFloat::from_f64(x, 80);
    if x < 0.5 {
        return gamma(&m).ln().to_f64();
    }
    lgamma_shifted(&m).to_f64()
}

/// ln Γ(x) for x > 0 from a shifted Stirling series in plain f64
/// (absolute error around 1e-13); for heuristics and double-precision kernels.
pub fn lgamma_fast(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut x = x;
    let mut shift = 0.0;
    while x < 15.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    shift + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lgamma_fast_matches() {
        for x in [0.1, 0.5, 1.0, 2.5, 7.9, 12.0, 150.5, 1e4] {
            assert!((lgamma_fast(x) - lgamma_f64(x)).abs() < 1e-12 * lgamma_f64(x).abs().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_upto(8);
        assert_eq!(b[1], BigRational::new((-1).into(), 2.into()));
        assert_eq!(b[2], BigRational::new(1.into(), 6.into()));
        assert_eq!(b[4], BigRational::new((-1).into(), 30.into()));
        assert!(b[5].is_zero());
        assert_eq!(b[8], BigRational::new((-1).into(), 30.into()));
    }

    #[test]
    fn gamma_half_integer_values() {
        let p = 200;
        let sqrt_pi = MpFloat::pi(p).sqrt();
        let g = gamma_rat(&BigRational::new(1.into(), 2.into()), p);
        assert!((&g - &sqrt_pi).abs().mag_exp() < -190);
        // Γ(5/2) = 3√π/4
        let g = gamma_rat(&BigRational::new(5.into(), 2.into()), p);
        let want = sqrt_pi.mul_i64(3).mul_pow2(-2);
        assert!((&g - &want).abs().mag_exp() < -188);
        // Γ(−1/2) = −2√π
        let g = gamma_rat(&BigRational::new((-1).into(), 2.into()), p);
        let want = -sqrt_pi.mul_i64(2);
        assert!((&g - &want).abs().mag_exp() < -186);
    }

    #[test]
    fn gamma_recurrence_and_f64() {
        let p = 128;
        let x = MpFloat::from_f64(3.7, p);
        let lhs = gamma(&(&x + &MpFloat::one(p)));
        let rhs = &x * &gamma(&x);
        assert!(((&lhs - &rhs) / &rhs).abs().mag_exp() < -120);
        assert!((gamma_f64(4.5) - 11.631728396567448).abs() < 1e-12);
        assert!((lgamma_f64(100.5) - 361.4355404677776).abs() < 1e-10);
        assert_eq!(rgamma(&MpFloat::from_i64(-3, p)).to_f64(), 0.0);
    }
}
