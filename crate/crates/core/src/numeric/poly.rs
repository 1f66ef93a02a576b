//! Dense univariate polynomials over ℚ(i) and multiprecision root finding.

use super::mp::MpComplex;
use super::rational_complex::RationalComplex;
use num_complex::Complex64;

/// Coefficients in ascending degree; trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<RationalComplex>);

impl QPoly {
    pub fn new(mut c: Vec<RationalComplex>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn lead(&self) -> &RationalComplex {
        self.0.last().expect("zero polynomial")
    }

    pub fn derivative(&self) -> Self {
        let c = self.0.iter().enumerate().skip(1).map(|(i, a)| a.scale_int(&(i as i64).into())).collect();
        Self::new(c)
    }

    pub fn monic(&self) -> Self {
        let l = self.lead().inv();
        Self(self.0.iter().map(|a| a * &l).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = RationalComplex::zero();
        let c = (0..n).map(|i| self.0.get(i).unwrap_or(&z) - other.0.get(i).unwrap_or(&z)).collect();
        Self::new(c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self(vec![]);
        }
        let mut c = vec![RationalComplex::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        Self::new(c)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.0.clone();
        let dl = d.lead().inv();
        let dd = d.0.len();
        if r.len() < dd {
            return (Self(vec![]), self.clone());
        }
        let mut q = vec![RationalComplex::zero(); r.len() - dd + 1];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd - 1] * &dl;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[i + j] -= &(&c * dj);
                }
            }
            q[i] = c;
        }
        r.truncate(dd - 1);
        (Self::new(q), Self::new(r))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn eval(&self, x: &RationalComplex) -> RationalComplex {
        let mut acc = RationalComplex::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Yun's squarefree decomposition: `[(a_1, 1), (a_2, 2), …]` with
    /// `self = lead · Π a_i^i`, each a_i monic squarefree (degree-0 factors omitted).
    pub fn squarefree(&self) -> Vec<(QPoly, u32)> {
        let mut out = Vec::new();
        if self.degree() < 1 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.divrem(&a0).0;
        let mut c = fp.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree() >= 1 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            if b.degree() < 1 {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn to_mp(&self, prec: u32) -> Vec<MpComplex> {
        self.0.iter().map(|c| MpComplex::from_rc(c, prec)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("root iteration did not converge")]
    NoConvergence,
}

fn horner_c64(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn horner_mp(c: &[MpComplex], z: &MpComplex) -> (MpComplex, MpComplex) {
    let p0 = z.prec();
    let mut p = MpComplex::zero(p0);
    let mut dp = MpComplex::zero(p0);
    for a in c.iter().rev() {
        dp = &(&dp * z) + &p;
        p = &(&p * z) + a;
    }
    (p, dp)
}

fn aberth_step_c64(c: &[Complex64], z: &mut [Complex64]) -> f64 {
    let n = z.len();
    let mut maxrel: f64 = 0.0;
    for k in 0..n {
        let (p, dp) = horner_c64(c, z[k]);
        if p.norm() == 0.0 {
            continue;
        }
        let w = p / dp;
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..n {
            if j != k {
                s += 1.0 / (z[k] - z[j]);
            }
        }
        let corr = w / (1.0 - w * s);
        if corr.is_finite() {
            z[k] -= corr;
            maxrel = maxrel.max(corr.norm() / z[k].norm().max(1e-300));
        }
    }
    maxrel
}

/// All roots of a polynomial with multiprecision coefficients (ascending),
/// assumed squarefree. Double-precision Aberth seeds, multiprecision polish.
pub fn roots_mp(coeffs: &[MpComplex], prec: u32) -> Result<Vec<MpComplex>, RootError> {
    let mut c: Vec<MpComplex> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![-(&c[0] / &c[1])].into_iter().map(|z| z.with_prec(prec)).collect());
    }
    let cf: Vec<Complex64> = c.iter().map(|x| x.to_c64()).collect();
    // seeds on a circle of Cauchy-bound-ish radius
    let lead = cf[n].norm();
    let r0 =
        cf[..n].iter().enumerate().map(|(i, a)| (a.norm() / lead).powf(1.0 / (n - i) as f64)).fold(0.0f64, f64::max).max(1e-3);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4)).collect();
    for _ in 0..500 {
        if aberth_step_c64(&cf, &mut z) < 1e-14 {
            break;
        }
    }
    let wp = prec + 64;
    let cm: Vec<MpComplex> = c.iter().map(|x| x.with_prec(wp)).collect();
    // asymmetric nudge: symmetric seeds around a tight cluster never split
    let mut zm: Vec<MpComplex> = z
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let nudge = Complex64::from_polar(1e-11 * (k as f64 + 1.0) * x.norm().max(1e-3), 0.7 + 1.3 * k as f64);
            MpComplex::from_c64(*x + nudge, wp)
        })
        .collect();
    let target = -(prec as i64) - 4;
    let mut best = i64::MAX;
    let mut stale = 0;
    for _ in 0..300 {
        let mut worst = i64::MIN;
        for k in 0..n {
            let (p, dp) = horner_mp(&cm, &zm[k]);
            if p.is_zero() {
                continue;
            }
            let w = &p / &dp;
            let mut s = MpComplex::zero(wp);
            for j in 0..n {
                if j != k {
                    s = &s + &(&zm[k] - &zm[j]).recip();
                }
            }
            let corr = &w / &(&MpComplex::one(wp) - &(&w * &s));
            zm[k] = &zm[k] - &corr;
            let scale = zm[k].abs().mag_exp().max(0);
            let m = corr.abs().mag_exp();
            if m != i64::MIN {
                worst = worst.max(m - scale);
            }
        }
        if worst < target {
            return Ok(zm.into_iter().map(|x| x.with_prec(prec)).collect());
        }
        // clustered roots stagnate at the conditioning limit
        if worst < best {
            best = worst;
            stale = 0;
        } else {
            stale += 1;
            if stale >= 6 && best < -(prec as i64) / 2 {
                return Ok(zm.into_iter().map(|x| x.with_prec(prec)).collect());
            }
        }
    }
    Err(RootError::NoConvergence)
}

/// Roots of an exact polynomial with multiplicities from the exact
/// squarefree decomposition. Zero roots are included.
pub fn roots_with_multiplicity(p: &QPoly, prec: u32) -> Result<Vec<(MpComplex, u32)>, RootError> {
    let mut out = Vec::new();
    for (f, m) in p.squarefree() {
        for r in roots_mp(&f.to_mp(prec + 16), prec + 16)? {
            out.push((r.with_prec(prec), m));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&x| RationalComplex::from_int(x)).collect())
    }

    #[test]
    fn squarefree_decomposition() {
        // (x−1)^2 (x+2)^3 x
        let f = q(&[-1, 1]).mul(&q(&[-1, 1])).mul(&q(&[2, 1]).mul(&q(&[2, 1])).mul(&q(&[2, 1]))).mul(&q(&[0, 1]));
        let sf = f.squarefree();
        let mut degs: Vec<(i64, u32)> = sf.iter().map(|(p, m)| (p.degree(), *m)).collect();
        degs.sort();
        assert_eq!(degs, vec![(1, 1), (1, 2), (1, 3)]);
        let prod = sf.iter().fold(q(&[1]), |acc, (p, m)| (0..*m).fold(acc, |a, _| a.mul(p)));
        assert_eq!(prod, f.monic());
    }

    #[test]
    fn gaussian_roots() {
        // x^2 + 1
        let r = roots_with_multiplicity(&q(&[1, 0, 1]), 128).unwrap();
        assert_eq!(r.len(), 2);
        for (z, m) in r {
            assert_eq!(m, 1);
            assert!(z.re.abs().to_f64() < 1e-35);
            assert!((z.im.abs().to_f64() - 1.0).abs() < 1e-35);
        }
    }

    #[test]
    fn clustered_roots_separated() {
        // (x−1)(x−1−2^-40): distinct, close
        let eps = RationalComplex::real(num_rational::BigRational::new(1.into(), num_bigint::BigInt::from(1) << 40usize));
        let a = QPoly::new(vec![-RationalComplex::one(), RationalComplex::one()]);
        let b = QPoly::new(vec![-(&RationalComplex::one() + &eps), RationalComplex::one()]);
        let r = roots_with_multiplicity(&a.mul(&b), 160).unwrap();
        let mut re: Vec<f64> = r.iter().map(|(z, _)| (&z.re - &crate::numeric::MpFloat::one(160)).to_f64()).collect();
        re.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!(re[0].abs() < 1e-40);
        assert!((re[1] - 2f64.powi(-40)).abs() < 1e-40);
    }
}
