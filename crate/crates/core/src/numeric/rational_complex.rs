//! Exact Gaussian rationals `re + im·i` over arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Exact complex number with rational parts. `BigRational` keeps both parts
/// in lowest terms with positive denominators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl RationalComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn imag_unit() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// |z|² as an exact rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm_sqr();
        Self { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        let r = BigRational::from_integer(n.clone());
        self.scale(&r)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn to_complex64(&self) -> num_complex::Complex64 {
        let (re, im) = self.to_f64_pair();
        num_complex::Complex64::new(re, im)
    }

    pub fn abs_f64(&self) -> f64 {
        let (re, im) = self.to_f64_pair();
        re.hypot(im)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self::real)
    }
}

/// Rational to nearest double, robust to numerators/denominators beyond f64 range.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 1e300 && d < 1e300 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = 64 - (nb - db);
    let q = if shift >= 0 {
        (r.numer().abs() << shift as usize) / r.denom()
    } else {
        r.numer().abs() / (r.denom() << (-shift) as usize)
    };
    let m = q.to_f64().unwrap_or(f64::INFINITY);
    let v = crate::numeric::ldexp(m, -shift);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for RationalComplex {
    /// Series-file style: `re`, `im i`, or `re+im i` / `re-im i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        let im_abs = self.im.abs();
        let im_s = if im_abs.is_one() { String::new() } else { fmt_rat(&im_abs) };
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{im_s}i");
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", fmt_rat(&self.re), sign, im_s)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalComplex> for RationalComplex {
            type Output = RationalComplex;
            fn $m(self, rhs: RationalComplex) -> RationalComplex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalComplex> for RationalComplex {
            type Output = RationalComplex;
            fn $m(self, rhs: &RationalComplex) -> RationalComplex {
                (&self).$m(rhs)
            }
        }
        impl $tr<RationalComplex> for &RationalComplex {
            type Output = RationalComplex;
            fn $m(self, rhs: RationalComplex) -> RationalComplex {
                self.$m(&rhs)
            }
        }
    };
}

impl Add<&RationalComplex> for &RationalComplex {
    type Output = RationalComplex;
    fn add(self, rhs: &RationalComplex) -> RationalComplex {
        RationalComplex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub<&RationalComplex> for &RationalComplex {
    type Output = RationalComplex;
    fn sub(self, rhs: &RationalComplex) -> RationalComplex {
        RationalComplex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul<&RationalComplex> for &RationalComplex {
    type Output = RationalComplex;
    fn mul(self, rhs: &RationalComplex) -> RationalComplex {
        if self.im.is_zero() && rhs.im.is_zero() {
            return RationalComplex::real(&self.re * &rhs.re);
        }
        RationalComplex { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl Div<&RationalComplex> for &RationalComplex {
    type Output = RationalComplex;
    fn div(self, rhs: &RationalComplex) -> RationalComplex {
        if rhs.im.is_zero() {
            assert!(!rhs.re.is_zero(), "division by zero");
            return RationalComplex { re: &self.re / &rhs.re, im: &self.im / &rhs.re };
        }
        self * &rhs.inv()
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for RationalComplex {
    type Output = RationalComplex;
    fn neg(self) -> RationalComplex {
        RationalComplex { re: -self.re, im: -self.im }
    }
}

impl Neg for &RationalComplex {
    type Output = RationalComplex;
    fn neg(self) -> RationalComplex {
        RationalComplex { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&RationalComplex> for RationalComplex {
    fn add_assign(&mut self, rhs: &RationalComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&RationalComplex> for RationalComplex {
    fn sub_assign(&mut self, rhs: &RationalComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&RationalComplex> for RationalComplex {
    fn mul_assign(&mut self, rhs: &RationalComplex) {
        *self = &*self * rhs;
    }
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// (a+1)(a+2)…(a+m) = (a+m)!/a!.
pub fn rising_ratio(a: u64, m: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 1..=m {
        acc *= a + i;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
