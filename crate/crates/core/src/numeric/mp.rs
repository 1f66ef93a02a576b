//! Binary multiprecision floats and complex numbers on top of `num-bigint`.
//!
//! A value is `man · 2^exp` with `man` normalized to exactly `prec` bits
//! (or zero). Rounding is to nearest, ties away from zero. Elementary
//! functions evaluate at a guarded working precision and round once.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

#[derive(Clone, Debug)]
pub struct MpFloat {
    man: BigInt,
    exp: i64,
    prec: u32,
}

fn round_shift(man: &BigInt, k: u64) -> BigInt {
    if k == 0 {
        return man.clone();
    }
    let neg = man.sign() == Sign::Minus;
    let mag = man.magnitude();
    let mut q = mag >> k;
    if mag.bit(k - 1) {
        q += 1u32;
    }
    let q = BigInt::from_biguint(Sign::Plus, q);
    if neg {
        -q
    } else {
        q
    }
}

impl MpFloat {
    fn normalized(man: BigInt, exp: i64, prec: u32) -> Self {
        if man.is_zero() {
            return Self::zero(prec);
        }
        let b = man.bits();
        let p = prec as u64;
        if b > p {
            let k = b - p;
            let mut m = round_shift(&man, k);
            let mut e = exp + k as i64;
            if m.bits() > p {
                m >>= 1;
                e += 1;
            }
            Self { man: m, exp: e, prec }
        } else if b < p {
            let k = p - b;
            Self { man: man << k, exp: exp - k as i64, prec }
        } else {
            Self { man, exp, prec }
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self { man: BigInt::zero(), exp: 0, prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::normalized(BigInt::from(n), 0, prec)
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Self::normalized(n.clone(), 0, prec)
    }

    pub fn from_ratio(r: &BigRational, prec: u32) -> Self {
        Self::int_quotient(r.numer(), r.denom(), prec)
    }

    /// Correctly rounded n/d.
    pub fn int_quotient(n: &BigInt, d: &BigInt, prec: u32) -> Self {
        assert!(!d.is_zero(), "division by zero");
        if n.is_zero() {
            return Self::zero(prec);
        }
        let shift = (prec as i64 + 2 + d.bits() as i64 - n.bits() as i64).max(0) as u64;
        let num = n << shift;
        let (q, r) = (&num / d, &num % d);
        // sticky bit keeps round-to-nearest honest
        let q = if r.is_zero() {
            q << 1usize
        } else {
            let s = if (num.sign() == Sign::Minus) ^ (d.sign() == Sign::Minus) { -1 } else { 1 };
            (q << 1usize) + s
        };
        Self::normalized(q, -(shift as i64) - 1, prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        Self::normalized(BigInt::from(m) * sign, e, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::normalized(self.man.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.sign() == Sign::Minus
    }

    pub fn abs(&self) -> Self {
        Self { man: self.man.abs(), exp: self.exp, prec: self.prec }
    }

    /// Multiply by 2^k exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self { man: self.man.clone(), exp: self.exp + k, prec: self.prec }
    }

    /// Exponent e with 2^(e-1) ≤ |x| < 2^e; `i64::MIN` for zero.
    pub fn mag_exp(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.man.bits() as i64
        }
    }

    pub fn to_ratio(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as u64)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.man.bits();
        let (m, e) =
            if b > 60 { (round_shift(&self.man, b - 60), self.exp + (b - 60) as i64) } else { (self.man.clone(), self.exp) };
        ldexp(m.to_f64().unwrap_or(0.0), e)
    }

    /// Nearest integer (ties away from zero).
    pub fn round_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            round_shift(&self.man, (-self.exp) as u64)
        }
    }

    /// `Some(n)` iff the value is exactly the integer n.
    pub fn as_exact_int(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.exp >= 0 {
            return Some(&self.man << self.exp as u64);
        }
        let k = (-self.exp) as u64;
        let tz = self.man.trailing_zeros().unwrap_or(0);
        (tz >= k).then(|| &self.man >> k)
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        Self::normalized(&self.man * n, self.exp, self.prec)
    }

    pub fn div_i64(&self, n: i64) -> Self {
        let q = Self::int_quotient(&self.man, &BigInt::from(n), self.prec + 2);
        Self::normalized(q.man, q.exp + self.exp, self.prec)
    }

    pub fn recip(&self) -> Self {
        Self::one(self.prec) / self
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative");
        if self.is_zero() {
            return self.clone();
        }
        let p = self.prec as i64;
        let mut shift = 2 * p + 4 - self.man.bits() as i64;
        if shift < 0 {
            shift = 0;
        }
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.man << shift as u64;
        let r = m.sqrt();
        Self::normalized(r, (self.exp - shift) / 2, self.prec)
    }

    pub fn pi(prec: u32) -> Self {
        cached(Const::Pi, prec, || {
            let bits = prec as u64 + 32;
            let v = (atan_inv_fixed(5, bits) * 4u32 - atan_inv_fixed(239, bits)) * 4u32;
            Self::normalized(v, -(bits as i64), prec)
        })
    }

    pub fn ln2(prec: u32) -> Self {
        cached(Const::Ln2, prec, || {
            let bits = prec as u64 + 32;
            let v = atanh_inv_fixed(3, bits) * 2u32;
            Self::normalized(v, -(bits as i64), prec)
        })
    }

    pub fn exp(&self) -> Self {
        let p = self.prec;
        if self.is_zero() {
            return Self::one(p);
        }
        assert!(self.mag_exp() < 60, "exp argument out of range");
        let kb = self.mag_exp().max(0) as u32;
        let s = ((p as f64).sqrt() / 2.0).ceil() as u32 + 2;
        let wp = p + 24 + s;
        let x = self.with_prec(wp + kb);
        let ln2 = Self::ln2(wp + kb + 8);
        let k = (&x / &ln2).round_int();
        let r = (&x - &ln2.mul_bigint(&k)).with_prec(wp).mul_pow2(-(s as i64));
        let mut sum = Self::one(wp);
        let mut term = Self::one(wp);
        let eps = -(wp as i64) - 2;
        for n in 1..10_000i64 {
            term = (&term * &r).div_i64(n);
            if term.is_zero() || term.mag_exp() < eps {
                break;
            }
            sum = &sum + &term;
        }
        for _ in 0..s {
            sum = sum.square();
        }
        let k = k.to_i64().expect("exp exponent");
        sum.mul_pow2(k).with_prec(p)
    }

    pub fn ln(&self) -> Self {
        assert!(!self.is_negative() && !self.is_zero(), "ln of non-positive");
        let p = self.prec;
        let wp = p + 24;
        // x = m·2^e with m ∈ [1/√2, √2)
        let mut e = self.mag_exp();
        let mut m = Self { man: self.man.clone(), exp: -(self.man.bits() as i64), prec: self.prec }.with_prec(wp);
        if m < Self::from_f64(std::f64::consts::FRAC_1_SQRT_2, wp) {
            m = m.mul_pow2(1);
            e -= 1;
        }
        let one = Self::one(wp);
        let y = &(&m - &one) / &(&m + &one);
        let y2 = y.square();
        let mut term = y.clone();
        let mut sum = y.clone();
        let eps = -(wp as i64) - 2;
        let mut k = 1i64;
        loop {
            term = &term * &y2;
            let t = term.div_i64(2 * k + 1);
            if t.is_zero() || t.mag_exp() < eps {
                break;
            }
            sum = &sum + &t;
            k += 1;
        }
        let res = &sum.mul_pow2(1) + &Self::ln2(wp).mul_i64(e);
        res.with_prec(p)
    }

    fn mul_bigint(&self, n: &BigInt) -> Self {
        Self::normalized(&self.man * n, self.exp, self.prec)
    }

    /// (sin x, cos x).
    pub fn sin_cos(&self) -> (Self, Self) {
        let p = self.prec;
        if self.is_zero() {
            return (Self::zero(p), Self::one(p));
        }
        assert!(self.mag_exp() < 60, "trig argument out of range");
        let kb = self.mag_exp().max(0) as u32;
        let wp = p + 24;
        let half_pi = Self::pi(wp + kb + 8).mul_pow2(-1);
        let x = self.with_prec(wp + kb + 8);
        let k = (&x / &half_pi).round_int();
        let r = (&x - &half_pi.mul_bigint(&k)).with_prec(wp);
        let r2 = r.square();
        let eps = -(wp as i64) - 2;
        let mut s = r.clone();
        let mut term = r.clone();
        let mut n = 1i64;
        loop {
            term = -(&term * &r2).div_i64((n + 1) * (n + 2));
            n += 2;
            if term.is_zero() || term.mag_exp() < eps {
                break;
            }
            s = &s + &term;
        }
        let mut c = Self::one(wp);
        let mut term = Self::one(wp);
        let mut n = 0i64;
        loop {
            term = -(&term * &r2).div_i64((n + 1) * (n + 2));
            n += 2;
            if term.is_zero() || term.mag_exp() < eps {
                break;
            }
            c = &c + &term;
        }
        let q = k.mod_floor_i64(4);
        let (s, c) = match q {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        };
        (s.with_prec(p), c.with_prec(p))
    }

    pub fn atan(&self) -> Self {
        let p = self.prec;
        if self.is_zero() {
            return self.clone();
        }
        let wp = p + 24;
        let x = self.with_prec(wp);
        let one = Self::one(wp);
        if x.abs() > one {
            let base = Self::pi(wp).mul_pow2(-1);
            let inv = x.recip().atan();
            let r = if x.is_negative() { -base - inv } else { base - inv };
            return r.with_prec(p);
        }
        let mut y = x;
        let halvings = 4;
        for _ in 0..halvings {
            let d = &one + &(&one + &y.square()).sqrt();
            y = &y / &d;
        }
        let y2 = y.square();
        let mut term = y.clone();
        let mut sum = y.clone();
        let eps = -(wp as i64) - 2;
        let mut k = 1i64;
        loop {
            term = -(&term * &y2);
            let t = term.div_i64(2 * k + 1);
            if t.is_zero() || t.mag_exp() < eps {
                break;
            }
            sum = &sum + &t;
            k += 1;
        }
        sum.mul_pow2(halvings).with_prec(p)
    }

    /// Argument of (x, y) in (−π, π].
    pub fn atan2(y: &Self, x: &Self) -> Self {
        let p = y.prec.max(x.prec);
        if x.is_zero() {
            if y.is_zero() {
                return Self::zero(p);
            }
            let h = Self::pi(p).mul_pow2(-1);
            return if y.is_negative() { -h } else { h };
        }
        let wp = p + 8;
        let a = (&y.with_prec(wp) / &x.with_prec(wp)).atan();
        let r = if !x.is_negative() {
            a
        } else if y.is_negative() {
            &a - &Self::pi(wp)
        } else {
            &a + &Self::pi(wp)
        };
        r.with_prec(p)
    }

    pub fn powi(&self, n: i64) -> Self {
        let p = self.prec;
        let wp = p + 2 * (64 - n.unsigned_abs().leading_zeros()) + 8;
        let mut base = self.with_prec(wp);
        let mut acc = Self::one(wp);
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        if n < 0 {
            acc = acc.recip();
        }
        acc.with_prec(p)
    }

    /// x^y for x > 0 (or x = 0, y > 0).
    pub fn powf(&self, y: &Self) -> Self {
        let p = self.prec.max(y.prec);
        if self.is_zero() {
            return Self::zero(p);
        }
        let wp = p + 16 + self.mag_exp().unsigned_abs().max(1).ilog2();
        (&y.with_prec(wp) * &self.with_prec(wp).ln()).exp().with_prec(p)
    }

    pub fn max_prec(a: &Self, b: &Self) -> u32 {
        a.prec.max(b.prec)
    }
}

trait ModFloor {
    fn mod_floor_i64(&self, m: i64) -> i64;
}

impl ModFloor for BigInt {
    fn mod_floor_i64(&self, m: i64) -> i64 {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(m)).to_i64().unwrap()
    }
}

/// x · 2^e for doubles without intermediate overflow.
pub fn ldexp(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

fn atan_inv_fixed(x: u64, bits: u64) -> BigInt {
    let one = BigInt::one() << bits;
    let x2 = BigInt::from(x * x);
    let mut term = one / x;
    let mut sum = term.clone();
    let mut k = 1u64;
    loop {
        term /= &x2;
        if term.is_zero() {
            break;
        }
        let t = &term / (2 * k + 1);
        if k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        k += 1;
    }
    sum
}

fn atanh_inv_fixed(x: u64, bits: u64) -> BigInt {
    let one = BigInt::one() << bits;
    let x2 = BigInt::from(x * x);
    let mut term = one / x;
    let mut sum = term.clone();
    let mut k = 1u64;
    loop {
        term /= &x2;
        if term.is_zero() {
            break;
        }
        sum += &term / (2 * k + 1);
        k += 1;
    }
    sum
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Const {
    Pi,
    Ln2,
}

fn cached(c: Const, prec: u32, f: impl FnOnce() -> MpFloat) -> MpFloat {
    static CACHE: OnceLock<Mutex<HashMap<(Const, u32), MpFloat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(c, prec)) {
        return v.clone();
    }
    let v = f();
    cache.lock().unwrap().insert((c, prec), v.clone());
    v
}

impl PartialEq for MpFloat {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for MpFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (sa, sb) = (self.man.sign(), other.man.sign());
        if sa != sb {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return Some(rank(sa).cmp(&rank(sb)));
        }
        if sa == Sign::NoSign {
            return Some(Ordering::Equal);
        }
        let (ea, eb) = (self.mag_exp(), other.mag_exp());
        if ea != eb {
            let o = ea.cmp(&eb);
            return Some(if sa == Sign::Minus { o.reverse() } else { o });
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &other.man << (other.exp - e) as u64;
        Some(a.cmp(&b))
    }
}

impl Add<&MpFloat> for &MpFloat {
    type Output = MpFloat;
    fn add(self, rhs: &MpFloat) -> MpFloat {
        let p = self.prec.max(rhs.prec);
        if rhs.is_zero() {
            return self.with_prec(p);
        }
        if self.is_zero() {
            return rhs.with_prec(p);
        }
        let (hi, lo) = if self.mag_exp() >= rhs.mag_exp() { (self, rhs) } else { (rhs, self) };
        if hi.mag_exp() - lo.mag_exp() > p as i64 + 4 {
            // lo is below half an ulp of hi; nudge with a sticky bit
            let m = (&hi.man << 2usize) + if lo.is_negative() { -1 } else { 1 };
            return MpFloat::normalized(m, hi.exp - 2, p);
        }
        let e = hi.exp.min(lo.exp);
        let m = (&hi.man << (hi.exp - e) as u64) + (&lo.man << (lo.exp - e) as u64);
        MpFloat::normalized(m, e, p)
    }
}

impl Sub<&MpFloat> for &MpFloat {
    type Output = MpFloat;
    fn sub(self, rhs: &MpFloat) -> MpFloat {
        self + &(-rhs)
    }
}

impl Mul<&MpFloat> for &MpFloat {
    type Output = MpFloat;
    fn mul(self, rhs: &MpFloat) -> MpFloat {
        let p = self.prec.max(rhs.prec);
        MpFloat::normalized(&self.man * &rhs.man, self.exp + rhs.exp, p)
    }
}

impl Div<&MpFloat> for &MpFloat {
    type Output = MpFloat;
    fn div(self, rhs: &MpFloat) -> MpFloat {
        let p = self.prec.max(rhs.prec);
        let q = MpFloat::int_quotient(&self.man, &rhs.man, p);
        MpFloat::normalized(q.man, q.exp + self.exp - rhs.exp, p)
    }
}

impl Neg for &MpFloat {
    type Output = MpFloat;
    fn neg(self) -> MpFloat {
        MpFloat { man: -self.man.clone(), exp: self.exp, prec: self.prec }
    }
}

impl Neg for MpFloat {
    type Output = MpFloat;
    fn neg(self) -> MpFloat {
        MpFloat { man: -self.man, exp: self.exp, prec: self.prec }
    }
}

macro_rules! owned_ops {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t { (&self).$m(rhs) }
        }
        impl $tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { self.$m(&rhs) }
        }
    )*};
}

owned_ops!(MpFloat, Add add, Sub sub, Mul mul, Div div);

/// Complex number with `MpFloat` parts.
#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex {
    pub re: MpFloat,
    pub im: MpFloat,
}

impl MpComplex {
    pub fn new(re: MpFloat, im: MpFloat) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self { re: MpFloat::zero(prec), im: MpFloat::zero(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self { re: MpFloat::one(prec), im: MpFloat::zero(prec) }
    }

    pub fn from_real(re: MpFloat) -> Self {
        let p = re.prec();
        Self { re, im: MpFloat::zero(p) }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_real(MpFloat::from_i64(n, prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self { re: MpFloat::from_f64(re, prec), im: MpFloat::from_f64(im, prec) }
    }

    pub fn from_c64(z: num_complex::Complex64, prec: u32) -> Self {
        Self::from_f64(z.re, z.im, prec)
    }

    pub fn from_rc(z: &crate::numeric::RationalComplex, prec: u32) -> Self {
        Self { re: MpFloat::from_ratio(&z.re, prec), im: MpFloat::from_ratio(&z.im, prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> MpFloat {
        &self.re.square() + &self.im.square()
    }

    pub fn abs(&self) -> MpFloat {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> MpFloat {
        MpFloat::atan2(&self.im, &self.re)
    }

    pub fn scale(&self, r: &MpFloat) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self { re: self.re.mul_pow2(k), im: self.im.mul_pow2(k) }
    }

    pub fn div_i64(&self, n: i64) -> Self {
        Self { re: self.re.div_i64(n), im: self.im.div_i64(n) }
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        Self { re: self.re.mul_i64(n), im: self.im.mul_i64(n) }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Self { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn from_polar(r: &MpFloat, theta: &MpFloat) -> Self {
        let (s, c) = theta.sin_cos();
        Self { re: r * &c, im: r * &s }
    }

    pub fn exp(&self) -> Self {
        Self::from_polar(&self.re.exp(), &self.im)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Self { re: self.abs().ln(), im: self.arg() }
    }

    /// Principal power z^y for real y (arg z in (−π, π]).
    pub fn powf(&self, y: &MpFloat) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let r = self.abs().powf(y);
        let th = &self.arg() * y;
        Self::from_polar(&r, &th)
    }

    pub fn powi(&self, n: i64) -> Self {
        let p = self.prec();
        let mut base = self.clone();
        let mut acc = Self::one(p);
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// Principal κ-th root: argument in (−π/κ, π/κ].
    pub fn root(&self, k: u32) -> Self {
        let p = self.prec();
        let inv = MpFloat::one(p).div_i64(k as i64);
        self.powf(&inv)
    }
}

impl Add<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn add(self, rhs: &MpComplex) -> MpComplex {
        MpComplex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn sub(self, rhs: &MpComplex) -> MpComplex {
        MpComplex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn mul(self, rhs: &MpComplex) -> MpComplex {
        MpComplex { re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im), im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re) }
    }
}

impl Div<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn div(self, rhs: &MpComplex) -> MpComplex {
        let n = rhs.norm_sqr();
        let num = self * &rhs.conj();
        MpComplex { re: &num.re / &n, im: &num.im / &n }
    }
}

impl Neg for &MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex { re: -&self.re, im: -&self.im }
    }
}

impl Neg for MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex { re: -self.re, im: -self.im }
    }
}

owned_ops!(MpComplex, Add add, Sub sub, Mul mul, Div div);
