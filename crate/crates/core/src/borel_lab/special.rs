//! Mittag-Leffler E_α(z) = Σ zⁿ/Γ(1+αn) and the kernel e_{a,l}.

use super::BorelError;
use crate::numeric::gamma::{lgamma_fast, rgamma_rat};
use crate::numeric::{MpComplex, MpFloat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Taylor evaluation is attempted while |z|^{1/α} stays below this.
const TAYLOR_LIMIT: f64 = 1500.0;
/// Exponential asymptotics are tried from here on.
const ASYMPTOTIC_FROM: f64 = 30.0;

/// 1/Γ(1 + αn) for n = 0, 1, … with α = a/b, using Γ(x + a) = Γ(x)·x(x+1)…(x+a−1)
/// along each residue class of n mod b.
struct RecipGamma {
    alpha: BigRational,
    a: i64,
    b: usize,
    prec: u32,
    vals: Vec<MpFloat>,
}

impl RecipGamma {
    fn new(alpha: &BigRational, prec: u32) -> Self {
        let a = alpha.numer().to_i64().expect("index numerator fits i64");
        let b = alpha.denom().to_usize().expect("index denominator fits usize");
        Self { alpha: alpha.clone(), a, b, prec, vals: Vec::new() }
    }

    fn get(&mut self, n: usize) -> MpFloat {
        while self.vals.len() <= n {
            let m = self.vals.len();
            let v = if m < self.b {
                let x = BigRational::one() + &self.alpha * BigRational::from_integer(BigInt::from(m));
                rgamma_rat(&x, self.prec)
            } else {
                let base = BigRational::one() + &self.alpha * BigRational::from_integer(BigInt::from(m - self.b));
                let mut d = MpFloat::one(self.prec);
                for i in 0..self.a {
                    d = &d * &MpFloat::from_ratio(&(&base + BigRational::from_integer(i.into())), self.prec);
                }
                &self.vals[m - self.b] / &d
            };
            self.vals.push(v);
        }
        self.vals[n].clone()
    }
}

fn alpha_f64(alpha: &BigRational) -> f64 {
    alpha.to_f64().unwrap()
}

/// log Γ(1+α(n+1)) − log Γ(1+αn)
fn lgamma_step(alpha: f64, n: usize) -> f64 {
    lgamma_fast(1.0 + alpha * (n + 1) as f64) - lgamma_fast(1.0 + alpha * n as f64)
}

fn check_alpha(alpha: &BigRational) -> Result<(), BorelError> {
    if alpha <= &BigRational::zero() {
        return Err(BorelError::BadIndex(alpha.to_string()));
    }
    Ok(())
}

/// Σ_{n≥n0} w_n zⁿ/Γ(1+αn), stopped by the geometric tail bound
/// |term|·r/(1−r) once the (decreasing) ratio r drops below 1.
fn taylor_sum(
    alpha: &BigRational,
    z: &MpComplex,
    prec: u32,
    n0: usize,
    weight: impl Fn(usize) -> MpFloat,
    weight_ratio: impl Fn(usize) -> f64,
) -> MpComplex {
    let af = alpha_f64(alpha);
    let zabs = z.abs().to_f64();
    let x = zabs.powf(1.0 / af);
    let extra = (x * std::f64::consts::LOG2_E).ceil() as u32 + 48;
    let wp = prec + extra;
    let zw = z.with_prec(wp);
    let mut rg = RecipGamma::new(alpha, wp);
    let mut sum = MpComplex::zero(wp);
    let mut zn = zw.powi(n0 as i64);
    let mut n = n0;
    let tiny = (-(prec as f64) - 16.0) * std::f64::consts::LN_2;
    loop {
        let term = (&zn * &MpComplex::from_real(rg.get(n))).scale(&weight(n));
        sum = &sum + &term;
        let r = zabs * (-lgamma_step(af, n)).exp() * weight_ratio(n);
        if r < 1.0 {
            let t = term.abs();
            if t.is_zero() {
                if zabs == 0.0 {
                    break;
                }
            } else {
                let bound = t.ln().to_f64() + (r / (1.0 - r)).ln();
                let s = sum.abs();
                if !s.is_zero() && bound < s.ln().to_f64() + tiny {
                    break;
                }
            }
        }
        zn = &zn * &zw;
        n += 1;
    }
    sum.with_prec(prec)
}

pub fn mittag_leffler_taylor(alpha: &BigRational, z: &MpComplex, prec: u32) -> MpComplex {
    taylor_sum(alpha, z, prec, 0, |_| MpFloat::one(prec + 64), |_| 1.0)
}

/// Exponential asymptotics with the optimally truncated algebraic tail.
/// Returns the value and an error estimate (first omitted term).
pub fn mittag_leffler_asymptotic(alpha: &BigRational, z: &MpComplex, prec: u32) -> (MpComplex, f64) {
    let wp = prec + 32;
    let af = alpha_f64(alpha);
    let z = z.with_prec(wp);
    let mut val = MpComplex::zero(wp);
    let arg = z.arg().to_f64();
    if arg.abs() <= af * std::f64::consts::PI {
        let inv = MpFloat::from_ratio(&(BigRational::one() / alpha), wp);
        let e = z.powf(&inv).exp();
        val = &val + &e.scale(&inv);
    }
    let zinv = z.recip();
    let mut zr = zinv.clone();
    let mut prev = f64::INFINITY;
    let mut err = 0.0;
    for r in 1..10_000i64 {
        let g = rgamma_rat(&(BigRational::one() - alpha * BigRational::from_integer(r.into())), wp);
        let term = &zr * &MpComplex::from_real(g);
        let mag = term.abs().to_f64();
        if mag > prev && mag > 0.0 {
            err = mag;
            break;
        }
        if mag != 0.0 {
            prev = mag;
        }
        val = &val - &term;
        zr = &zr * &zinv;
        if mag == 0.0 && af == 1.0 {
            // 1/Γ(1 − r) vanishes for all r ≥ 1
            break;
        }
        err = mag;
    }
    (val.with_prec(prec), err)
}

/// E_α(z) for α > 0; asymptotics are used only for α ≤ 1.
pub fn mittag_leffler(alpha: &BigRational, z: &MpComplex, prec: u32) -> Result<MpComplex, BorelError> {
    check_alpha(alpha)?;
    if z.is_zero() {
        return Ok(MpComplex::one(prec));
    }
    let x = z.abs().to_f64().powf(1.0 / alpha_f64(alpha));
    if x >= ASYMPTOTIC_FROM && alpha <= &BigRational::one() {
        let (v, err) = mittag_leffler_asymptotic(alpha, z, prec);
        let scale = v.abs().to_f64();
        if err <= scale * 2f64.powi(-(prec.min(1000) as i32)) {
            return Ok(v);
        }
    }
    if x <= TAYLOR_LIMIT {
        return Ok(mittag_leffler_taylor(alpha, z, prec));
    }
    Err(BorelError::RangeNotCertified(format!("|z|^(1/α) = {x:.1}")))
}

/// e_{a,l}(x) = Σ_{n≥l} C(n−1, l−1) xⁿ/Γ(1+an), a ≥ 1.
pub fn e_kernel(a: &BigRational, l: u32, x: &MpComplex, prec: u32) -> Result<MpComplex, BorelError> {
    if a < &BigRational::one() {
        return Err(BorelError::BadIndex(a.to_string()));
    }
    if l == 0 {
        return Err(BorelError::BadIndex("l = 0".into()));
    }
    if x.is_zero() {
        return Ok(MpComplex::zero(prec));
    }
    let growth = x.abs().to_f64().powf(1.0 / alpha_f64(a));
    if growth > TAYLOR_LIMIT {
        return Err(BorelError::RangeNotCertified(format!("|x|^(1/a) = {growth:.1}")));
    }
    let l = l as usize;
    let wp = prec + 64 + (l as u32) * 4;
    let weight = |n: usize| MpFloat::from_bigint(&crate::numeric::binomial((n - 1) as u64, (l - 1) as u64), wp);
    let ratio = |n: usize| n as f64 / (n + 1 - l) as f64;
    Ok(taylor_sum(a, x, prec, l, weight, ratio))
}

#[cfg(test)]
mod tests {
    use super::*;

    const E_HALF_1: &str = "5.0089800807622834663098245982148098146943346842356664861884";

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn e1_is_exp() {
        let v = mittag_leffler(&q(1, 1), &MpComplex::from_f64(1.0, 0.0, 128), 128).unwrap();
        let e = MpFloat::one(128).exp();
        assert!((&v.re - &e).abs().to_f64() < 1e-35);
        for z in [(-5.0, 0.0), (3.0, -4.0), (0.0, 5.0)] {
            let v = mittag_leffler(&q(1, 1), &MpComplex::from_f64(z.0, z.1, 64), 64).unwrap().to_c64();
            let w = num_complex::Complex64::new(z.0, z.1).exp();
            assert!((v - w).norm() < 1e-12 * w.norm().max(1.0));
        }
        assert_eq!(mittag_leffler(&q(1, 3), &MpComplex::zero(64), 64).unwrap().to_c64().re, 1.0);
    }

    #[test]
    fn e_half_at_one() {
        let v = mittag_leffler(&q(1, 2), &MpComplex::from_f64(1.0, 0.0, 200), 200).unwrap();
        let want: f64 = E_HALF_1.parse().unwrap();
        assert!((v.re.to_f64() - want).abs() < 1e-15);
        let digits: String = E_HALF_1.chars().filter(|c| c.is_ascii_digit()).take(41).collect();
        let oracle = BigRational::new(digits.parse::<BigInt>().unwrap(), BigInt::from(10).pow(40));
        assert!((v.re.to_ratio() - oracle).to_f64().unwrap().abs() < 1e-39);
    }

    #[test]
    fn methods_agree_in_overlap() {
        for alpha in [q(1, 2), q(1, 3), q(2, 3)] {
            for (r, th) in [(40.0f64, 0.3), (45.0, 2.5), (50.0, -1.0), (60.0, 3.1)] {
                let zabs = r.powf(alpha.to_f64().unwrap());
                let z = MpComplex::from_c64(num_complex::Complex64::from_polar(zabs, th), 96);
                let a = mittag_leffler_taylor(&alpha, &z, 96).to_c64();
                let (b, _) = mittag_leffler_asymptotic(&alpha, &z, 96);
                let b = b.to_c64();
                assert!((a - b).norm() <= 1e-8 * a.norm(), "α={alpha} r={r} θ={th}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let x = MpComplex::from_f64(1.0, 0.0, 128);
        let v = e_kernel(&q(1, 1), 1, &x, 128).unwrap().re.to_f64();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        assert!(e_kernel(&q(3, 2), 3, &MpComplex::zero(64), 64).unwrap().is_zero());
        let v = e_kernel(&q(1, 1), 2, &x, 128).unwrap();
        assert!((&v.re - &MpFloat::one(128)).abs().to_f64() < 1e-35);
        let z = MpComplex::from_f64(0.7, -1.2, 96);
        let a = e_kernel(&q(2, 1), 1, &z, 96).unwrap();
        let b = &mittag_leffler(&q(2, 1), &z, 96).unwrap() - &MpComplex::one(96);
        assert!((&a - &b).abs().to_f64() < 1e-25);
    }
}
