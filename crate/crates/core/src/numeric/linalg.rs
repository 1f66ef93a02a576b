//! Dense determinants: fraction-free Bareiss over ℤ[i] for exact matrices,
//! partial-pivot LU in double and multiprecision complex arithmetic.

#![allow(clippy::needless_range_loop)]

use super::mp::{MpComplex, MpFloat};
use super::rational_complex::RationalComplex;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn mul(&self, o: &Self) -> Self {
        Self { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
    fn sub(&self, o: &Self) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn neg(&self) -> Self {
        Self { re: -&self.re, im: -&self.im }
    }
    /// Exact quotient; panics if `o` does not divide `self`.
    fn div_exact(&self, o: &Self) -> Self {
        let n = &o.re * &o.re + &o.im * &o.im;
        let a = &self.re * &o.re + &self.im * &o.im;
        let b = &self.im * &o.re - &self.re * &o.im;
        let (qa, ra) = a.div_rem(&n);
        let (qb, rb) = b.div_rem(&n);
        assert!(ra.is_zero() && rb.is_zero(), "Bareiss division not exact");
        Self { re: qa, im: qb }
    }
}

/// Exact determinant of a square matrix over ℚ(i) by Bareiss elimination
/// after clearing denominators.
pub fn det_exact(m: &[Vec<RationalComplex>]) -> RationalComplex {
    let n = m.len();
    if n == 0 {
        return RationalComplex::one();
    }
    let mut l = BigInt::one();
    for row in m {
        for x in row {
            l = l.lcm(x.re.denom()).lcm(x.im.denom());
        }
    }
    let lr = BigRational::from_integer(l.clone());
    let mut a: Vec<Vec<GaussInt>> = m
        .iter()
        .map(|row| row.iter().map(|x| GaussInt { re: (&x.re * &lr).to_integer(), im: (&x.im * &lr).to_integer() }).collect())
        .collect();
    let mut sign_neg = false;
    let mut prev = GaussInt { re: BigInt::one(), im: BigInt::zero() };
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign_neg = !sign_neg;
                }
                None => return RationalComplex::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = &a[n - 1][n - 1];
    let d = if sign_neg { d.neg() } else { d.clone() };
    let scale = BigRational::from_integer(l.pow(n as u32));
    RationalComplex::new(BigRational::from_integer(d.re) / &scale, BigRational::from_integer(d.im) / &scale)
}

/// LU with partial pivoting in double precision. Returns `None` when a pivot
/// is exactly zero.
pub struct LuC64 {
    lu: Vec<Vec<Complex64>>,
    perm: Vec<usize>,
}

impl LuC64 {
    pub fn factor(m: &[Vec<Complex64>]) -> Option<Self> {
        let n = m.len();
        let mut lu = m.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| lu[i][k].norm().partial_cmp(&lu[j][k].norm()).unwrap())?;
            if lu[p][k].norm() == 0.0 {
                return None;
            }
            lu.swap(k, p);
            perm.swap(k, p);
            for i in k + 1..n {
                let f = lu[i][k] / lu[k][k];
                lu[i][k] = f;
                for j in k + 1..n {
                    let t = f * lu[k][j];
                    lu[i][j] -= t;
                }
            }
        }
        Some(Self { lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.len();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[i][j] * x[j];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[i][j] * x[j];
                x[i] -= t;
            }
            x[i] /= self.lu[i][i];
        }
        x
    }
}

fn norm1(m: &[Vec<Complex64>]) -> f64 {
    let n = m.len();
    (0..n).map(|j| (0..n).map(|i| m[i][j].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// κ₁(m) = ‖m‖₁‖m⁻¹‖₁ via explicit inverse columns; ∞ when singular in double precision.
pub fn condition_1norm(m: &[Vec<Complex64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    let Some(lu) = LuC64::factor(m) else { return f64::INFINITY };
    let mut inv_norm: f64 = 0.0;
    for j in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[j] = Complex64::new(1.0, 0.0);
        let col = lu.solve(&e);
        let s: f64 = col.iter().map(|z| z.norm()).sum();
        if !s.is_finite() {
            return f64::INFINITY;
        }
        inv_norm = inv_norm.max(s);
    }
    norm1(m) * inv_norm
}

/// Determinant by partial-pivot LU in multiprecision complex arithmetic.
pub fn det_mp(m: &[Vec<MpComplex>], prec: u32) -> MpComplex {
    let n = m.len();
    let mut a: Vec<Vec<MpComplex>> = m.iter().map(|r| r.iter().map(|x| x.with_prec(prec)).collect()).collect();
    let mut det = MpComplex::one(prec);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].norm_sqr().partial_cmp(&a[j][k].norm_sqr()).unwrap()).unwrap();
        if a[p][k].is_zero() {
            return MpComplex::zero(prec);
        }
        if p != k {
            a.swap(k, p);
            det = -det;
        }
        let piv = a[k][k].clone();
        det = &det * &piv;
        let inv = piv.recip();
        for i in k + 1..n {
            let f = &a[i][k] * &inv;
            if f.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let t = &f * &a[k][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
    }
    det
}

/// Hadamard bound Π‖row‖₂ as a multiprecision float.
pub fn hadamard_bound(m: &[Vec<MpComplex>], prec: u32) -> MpFloat {
    let mut b = MpFloat::one(prec);
    for r in m {
        let s = r.iter().fold(MpFloat::zero(prec), |acc, x| &acc + &x.norm_sqr());
        b = &b * &s.sqrt();
    }
    b
}

/// Small dense least squares via normal equations (columns are few and well scaled).
/// Returns coefficients and the inverse Gram matrix.
pub fn least_squares(x: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
    let p = x.first()?.len();
    let mut g = vec![vec![0.0; p]; p];
    let mut r = vec![0.0; p];
    for (row, yi) in x.iter().zip(y) {
        for a in 0..p {
            r[a] += row[a] * yi;
            for b in 0..p {
                g[a][b] += row[a] * row[b];
            }
        }
    }
    let gi = invert_real(&g)?;
    let beta = (0..p).map(|a| (0..p).map(|b| gi[a][b] * r[b]).sum()).collect();
    Some((beta, gi))
}

fn invert_real(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())?;
        if a[p][k].abs() < 1e-300 {
            return None;
        }
        a.swap(k, p);
        let piv = a[k][k];
        for v in a[k].iter_mut() {
            *v /= piv;
        }
        for i in 0..n {
            if i != k {
                let f = a[i][k];
                if f != 0.0 {
                    for j in 0..2 * n {
                        a[i][j] -= f * a[k][j];
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(a: i64, b: i64) -> RationalComplex {
        RationalComplex::from_frac(a, b)
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![
            vec![rc(2, 1), rc(1, 2), rc(0, 1)],
            vec![rc(-1, 3), rc(5, 1), RationalComplex::imag_unit()],
            vec![rc(1, 1), rc(0, 1), rc(3, 4)],
        ];
        // cofactor expansion along row 0
        let minor = |r: &[usize], c: &[usize]| &(&m[r[0]][c[0]] * &m[r[1]][c[1]]) - &(&m[r[0]][c[1]] * &m[r[1]][c[0]]);
        let want = &(&(&m[0][0] * &minor(&[1, 2], &[1, 2])) - &(&m[0][1] * &minor(&[1, 2], &[0, 2])))
            + &(&m[0][2] * &minor(&[1, 2], &[0, 1]));
        assert_eq!(det_exact(&m), want);
    }

    #[test]
    fn bareiss_needs_pivot_swap() {
        let m = vec![vec![rc(0, 1), rc(1, 1)], vec![rc(1, 1), rc(0, 1)]];
        assert_eq!(det_exact(&m), rc(-1, 1));
        let s = vec![vec![rc(1, 1), rc(2, 1)], vec![rc(1, 2), rc(1, 1)]];
        assert!(det_exact(&s).is_zero());
    }

    #[test]
    fn condition_of_identity_and_singular() {
        let one = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(condition_1norm(&[vec![one, z], vec![z, one]]), 1.0);
        assert!(condition_1norm(&[vec![one, one], vec![one, one]]).is_infinite());
    }

    #[test]
    fn least_squares_recovers_line() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![1.0, i as f64]).collect();
        let y: Vec<f64> = (0..10).map(|i| 3.0 - 2.0 * i as f64).collect();
        let (b, _) = least_squares(&x, &y).unwrap();
        assert!((b[0] - 3.0).abs() < 1e-12 && (b[1] + 2.0).abs() < 1e-12);
    }
}
