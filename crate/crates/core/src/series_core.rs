//! Truncated formal power series in `t` and `z` with exact coefficients,
//! the Gevrey machinery around them (B_s, Γ_q-moment derivatives, norms,
//! order estimation) and Goursat-data assembly.
//!
//! Series store monomial coefficients `c` of `Σ c_{kβ} t^k z^β`; the
//! derivative-normalized value `u_{kβ} = c_{kβ}·k!·β!` is computed on demand.
//! Truncation degrees are inclusive.

use crate::expr_parser::Operator;
use crate::numeric::gamma::{gamma_rat, lgamma_f64};
use crate::numeric::linalg::least_squares;
use crate::numeric::{factorial, rising_ratio, MpFloat, RationalComplex};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("truncation too small: need ({need_t},{need_z}), have ({have_t},{have_z})")]
    TruncationTooSmall { need_t: u32, need_z: u32, have_t: u32, have_z: u32 },
    #[error("index ({k},{b}) beyond truncation")]
    IndexBeyondTruncation { k: u32, b: u32 },
    #[error("negative Borel order s = {0}")]
    NegativeOrder(String),
    #[error("moment index q = {0} must be positive")]
    NonpositiveIndex(String),
    #[error("degenerate Gevrey fit: {0}")]
    DegenerateFit(String),
    #[error("incompatible Goursat data at ({k},{beta}): phi gives {phi}, psi gives {psi}")]
    IncompatibleData { k: u32, beta: u32, phi: String, psi: String },
}

/// Truncated series `Σ_{n ≤ trunc} c_n x^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniSeries {
    coeffs: BTreeMap<u32, RationalComplex>,
    trunc: u32,
    exact: bool,
}

impl UniSeries {
    pub fn zero(trunc: u32) -> Self {
        Self { coeffs: BTreeMap::new(), trunc, exact: true }
    }

    /// Dense constructor; the truncation is `c.len() − 1`.
    pub fn from_vec(c: Vec<RationalComplex>) -> Self {
        assert!(!c.is_empty(), "series needs at least one coefficient slot");
        let trunc = c.len() as u32 - 1;
        let mut s = Self::zero(trunc);
        for (n, v) in c.into_iter().enumerate() {
            s.set(n as u32, v);
        }
        s
    }

    /// Polynomial coefficients padded to truncation `trunc`.
    pub fn from_poly(c: &[RationalComplex], trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        for (n, v) in c.iter().enumerate() {
            if n as u32 <= trunc {
                s.set(n as u32, v.clone());
            }
        }
        s
    }

    /// 1/(1−x) truncated.
    pub fn geometric(trunc: u32) -> Self {
        Self::from_vec(vec![RationalComplex::one(); trunc as usize + 1])
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn get(&self, n: u32) -> RationalComplex {
        self.coeffs.get(&n).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, n: u32, v: RationalComplex) {
        assert!(n <= self.trunc, "index {n} beyond truncation {}", self.trunc);
        if v.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u32, &RationalComplex)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Dense coefficient vector of length trunc+1.
    pub fn to_vec(&self) -> Vec<RationalComplex> {
        (0..=self.trunc).map(|n| self.get(n)).collect()
    }

    /// Ordinary derivative; truncation drops by one.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.trunc.saturating_sub(1));
        out.exact = self.exact;
        for (&n, c) in &self.coeffs {
            if n >= 1 {
                out.set(n - 1, c.scale_int(&BigInt::from(n)));
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.trunc.min(o.trunc));
        out.exact = self.exact && o.exact;
        for n in 0..=out.trunc {
            out.set(n, &self.get(n) + &o.get(n));
        }
        out
    }

    pub fn scale(&self, a: &RationalComplex) -> Self {
        let mut out = Self::zero(self.trunc);
        out.exact = self.exact;
        for (&n, c) in &self.coeffs {
            out.set(n, c * a);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.trunc.min(o.trunc));
        out.exact = self.exact && o.exact;
        for (&a, x) in &self.coeffs {
            for (&b, y) in &o.coeffs {
                if a + b <= out.trunc {
                    let v = &out.get(a + b) + &(x * y);
                    out.set(a + b, v);
                }
            }
        }
        out
    }

    pub fn eval(&self, x: &RationalComplex) -> RationalComplex {
        let mut acc = RationalComplex::zero();
        for n in (0..=self.trunc).rev() {
            acc = &(&acc * x) + &self.get(n);
        }
        acc
    }

    /// Truncate to a smaller degree.
    pub fn truncate(&self, trunc: u32) -> Self {
        let mut out = Self::zero(trunc.min(self.trunc));
        out.exact = self.exact;
        for (&n, c) in self.coeffs.range(..=out.trunc) {
            out.set(n, c.clone());
        }
        out
    }
}

/// Truncated bivariate series `Σ_{k ≤ truncT, β ≤ truncZ} c_{kβ} t^k z^β`.
///
/// Invariants: stored indices lie within the truncation box and no stored
/// coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    coeffs: BTreeMap<(u32, u32), RationalComplex>,
    trunc_t: u32,
    trunc_z: u32,
    exact: bool,
}

impl BiSeries {
    pub fn zero(trunc_t: u32, trunc_z: u32) -> Self {
        Self { coeffs: BTreeMap::new(), trunc_t, trunc_z, exact: true }
    }

    pub fn from_map(map: BTreeMap<(u32, u32), RationalComplex>, trunc_t: u32, trunc_z: u32) -> Result<Self, SeriesError> {
        let mut s = Self::zero(trunc_t, trunc_z);
        for ((k, b), v) in map {
            if k > trunc_t || b > trunc_z {
                return Err(SeriesError::IndexBeyondTruncation { k, b });
            }
            s.set(k, b, v);
        }
        Ok(s)
    }

    pub fn trunc_t(&self) -> u32 {
        self.trunc_t
    }

    pub fn trunc_z(&self) -> u32 {
        self.trunc_z
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn get(&self, k: u32, b: u32) -> RationalComplex {
        self.coeffs.get(&(k, b)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, k: u32, b: u32, v: RationalComplex) {
        assert!(k <= self.trunc_t && b <= self.trunc_z, "index ({k},{b}) beyond truncation");
        if v.is_zero() {
            self.coeffs.remove(&(k, b));
        } else {
            self.coeffs.insert((k, b), v);
        }
    }

    /// Derivative-normalized coefficient u_{kβ} = c_{kβ}·k!·β!.
    pub fn u(&self, k: u32, b: u32) -> RationalComplex {
        self.get(k, b).scale_int(&(factorial(k as u64) * factorial(b as u64)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &RationalComplex)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a - b)
    }

    fn combine(&self, o: &Self, f: impl Fn(&RationalComplex, &RationalComplex) -> RationalComplex) -> Self {
        let mut out = Self::zero(self.trunc_t.min(o.trunc_t), self.trunc_z.min(o.trunc_z));
        out.exact = self.exact && o.exact;
        let keys: std::collections::BTreeSet<(u32, u32)> = self.coeffs.keys().chain(o.coeffs.keys()).copied().collect();
        for (k, b) in keys {
            if k <= out.trunc_t && b <= out.trunc_z {
                out.set(k, b, f(&self.get(k, b), &o.get(k, b)));
            }
        }
        out
    }

    pub fn scale(&self, a: &RationalComplex) -> Self {
        let mut out = Self::zero(self.trunc_t, self.trunc_z);
        out.exact = self.exact;
        for (&(k, b), c) in &self.coeffs {
            out.set(k, b, c * a);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.trunc_t.min(o.trunc_t), self.trunc_z.min(o.trunc_z));
        out.exact = self.exact && o.exact;
        for (&(k1, b1), x) in &self.coeffs {
            for (&(k2, b2), y) in &o.coeffs {
                let (k, b) = (k1 + k2, b1 + b2);
                if k <= out.trunc_t && b <= out.trunc_z {
                    let v = &out.get(k, b) + &(x * y);
                    out.set(k, b, v);
                }
            }
        }
        out
    }

    /// Exact value of the truncated polynomial at (t, z).
    pub fn eval(&self, t: &RationalComplex, z: &RationalComplex) -> RationalComplex {
        let tp: Vec<RationalComplex> = (0..=self.trunc_t).map(|k| t.pow(k)).collect();
        let zp: Vec<RationalComplex> = (0..=self.trunc_z).map(|b| z.pow(b)).collect();
        let mut acc = RationalComplex::zero();
        for (&(k, b), c) in &self.coeffs {
            acc += &(&(c * &tp[k as usize]) * &zp[b as usize]);
        }
        acc
    }

    /// Coefficients with k ≤ wt, β ≤ wz.
    pub fn window(&self, wt: u32, wz: u32) -> Self {
        let mut out = Self::zero(wt.min(self.trunc_t), wz.min(self.trunc_z));
        out.exact = self.exact;
        for (&(k, b), c) in &self.coeffs {
            if k <= out.trunc_t && b <= out.trunc_z {
                out.set(k, b, c.clone());
            }
        }
        out
    }

    /// u(t, 0) as a series in t.
    pub fn t_trace(&self) -> UniSeries {
        self.t_section(0)
    }

    /// Monomial coefficients of z^β as a series in t.
    pub fn t_section(&self, b: u32) -> UniSeries {
        let mut s = UniSeries::zero(self.trunc_t);
        s.exact = self.exact;
        for k in 0..=self.trunc_t {
            s.set(k, self.get(k, b));
        }
        s
    }

    /// Monomial coefficients of t^k as a series in z.
    pub fn z_section(&self, k: u32) -> UniSeries {
        let mut s = UniSeries::zero(self.trunc_z);
        s.exact = self.exact;
        for b in 0..=self.trunc_z {
            s.set(b, self.get(k, b));
        }
        s
    }

    /// ∂t^k u(0, z) as a series in z.
    pub fn t_derivative_trace(&self, k: u32) -> UniSeries {
        self.z_section(k).scale(&RationalComplex::real(BigRational::from_integer(factorial(k as u64))))
    }

    /// ∂z^β u(t, 0) as a series in t.
    pub fn z_derivative_trace(&self, b: u32) -> UniSeries {
        self.t_section(b).scale(&RationalComplex::real(BigRational::from_integer(factorial(b as u64))))
    }

    /// Embed a series in z as Σ c_β z^β (no t dependence).
    pub fn from_z_series(s: &UniSeries, trunc_t: u32) -> Self {
        let mut out = Self::zero(trunc_t, s.trunc());
        for (&b, c) in s.iter() {
            out.set(0, b, c.clone());
        }
        out
    }

    /// Embed a series in t.
    pub fn from_t_series(s: &UniSeries, trunc_z: u32) -> Self {
        let mut out = Self::zero(s.trunc(), trunc_z);
        for (&k, c) in s.iter() {
            out.set(k, 0, c.clone());
        }
        out
    }
}

/// Coefficient (m,n) of P·u: Σ a_{iγ} c_{m+i,n+γ} (m+i)!/m! (n+γ)!/n!.
pub fn apply_operator(op: &Operator, u: &BiSeries) -> Result<BiSeries, SeriesError> {
    let (mt, mz) = (op.t_order(), op.z_order());
    if u.trunc_t < mt || u.trunc_z < mz {
        return Err(SeriesError::TruncationTooSmall { need_t: mt, need_z: mz, have_t: u.trunc_t, have_z: u.trunc_z });
    }
    let mut out = BiSeries::zero(u.trunc_t - mt, u.trunc_z - mz);
    out.exact = u.exact;
    for (&(k, b), c) in &u.coeffs {
        for (&(i, g), a) in op.terms() {
            if k < i || b < g {
                continue;
            }
            let (m, n) = (k - i, b - g);
            if m > out.trunc_t || n > out.trunc_z {
                continue;
            }
            let w = rising_ratio(m as u64, i as u64) * rising_ratio(n as u64, g as u64);
            let v = &out.get(m, n) + &(a * c).scale_int(&w);
            out.set(m, n, v);
        }
    }
    Ok(out)
}

fn dyadic(x: &MpFloat) -> BigRational {
    x.to_ratio()
}

/// B_s: c'_n = c_n · n!/Γ(1+(s+1)n). Exact when the Γ arguments are integers.
pub fn borel_transform(u: &UniSeries, s: &BigRational, prec: u32) -> Result<UniSeries, SeriesError> {
    if s.is_negative() {
        return Err(SeriesError::NegativeOrder(s.to_string()));
    }
    let q = s + BigRational::one();
    let mut out = UniSeries::zero(u.trunc);
    out.exact = u.exact;
    for (&n, c) in &u.coeffs {
        let arg = &q * BigRational::from_integer(n.into());
        let nf = BigRational::from_integer(factorial(n as u64));
        if arg.is_integer() {
            let g = factorial(arg.to_integer().to_u64().expect("Γ argument too large"));
            out.set(n, c.scale(&(nf / BigRational::from_integer(g))));
        } else {
            let g = gamma_rat(&(arg + BigRational::one()), prec);
            let ratio = &MpFloat::from_ratio(&nf, prec) / &g;
            out.set(n, c.scale(&dyadic(&ratio)));
            out.exact = false;
        }
    }
    Ok(out)
}

/// ∂_{Γ_q}: c'_n = c_{n+1} · Γ(1+q(n+1))/Γ(1+qn).
pub fn moment_diff(u: &UniSeries, q: &BigRational, prec: u32) -> Result<UniSeries, SeriesError> {
    if !q.is_positive() {
        return Err(SeriesError::NonpositiveIndex(q.to_string()));
    }
    if u.trunc == 0 {
        return Err(SeriesError::TruncationTooSmall { need_t: 1, need_z: 0, have_t: 0, have_z: 0 });
    }
    let mut out = UniSeries::zero(u.trunc - 1);
    out.exact = u.exact;
    for (&n1, c) in &u.coeffs {
        if n1 == 0 {
            continue;
        }
        let n = n1 - 1;
        let lo = q * BigRational::from_integer(n.into());
        let hi = q * BigRational::from_integer(n1.into());
        if lo.is_integer() && hi.is_integer() {
            let a = lo.to_integer().to_u64().expect("Γ argument too large");
            let b = hi.to_integer().to_u64().expect("Γ argument too large");
            out.set(n, c.scale_int(&rising_ratio(a, b - a)));
        } else {
            let one = BigRational::one();
            let r = &gamma_rat(&(hi + &one), prec) / &gamma_rat(&(lo + &one), prec);
            out.set(n, c.scale(&dyadic(&r)));
            out.exact = false;
        }
    }
    Ok(out)
}

/// Partial sum Σ |u_{kβ}| w^k R^{sk+β}/Γ(1+sk+β) over the truncation box.
pub fn gevrey_norm(u: &BiSeries, s: &BigRational, w: f64, r: f64, prec: u32) -> f64 {
    assert!(w > 0.0 && r > 0.0, "w and R must be positive");
    let wm = MpFloat::from_f64(w, prec);
    let rm = MpFloat::from_f64(r, prec);
    let mut sum = MpFloat::zero(prec);
    for &(k, b) in u.coeffs.keys() {
        let uk = u.u(k, b);
        let abs = MpFloat::from_ratio(&uk.norm_sqr(), prec).sqrt();
        let x = s * BigRational::from_integer(k.into()) + BigRational::from_integer(b.into());
        let rx = rm.powf(&MpFloat::from_ratio(&x, prec));
        let g = gamma_rat(&(x + BigRational::one()), prec);
        let term = &(&(&abs * &wm.powi(k as i64)) * &rx) / &g;
        sum = &sum + &term;
    }
    sum.to_f64()
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct GevreyEstimate {
    pub s_hat: f64,
    pub stderr: f64,
    pub k_range: (u32, u32),
    /// Fitted coefficients of {1, k, log k!}.
    pub model: [f64; 3],
}

/// Least-squares fit of log a_k against {1, k, log k!}, a_k = Σ_β |c_{kβ}| ρ^β.
pub fn gevrey_estimate(u: &BiSeries, rho: f64, k_lo: u32, k_hi: u32) -> Result<GevreyEstimate, SeriesError> {
    if k_hi > u.trunc_t || k_lo > k_hi || k_hi - k_lo + 1 < 4 {
        return Err(SeriesError::DegenerateFit(format!("window [{k_lo},{k_hi}] invalid for truncT {}", u.trunc_t)));
    }
    let prec = 128;
    let rho_m = MpFloat::from_f64(rho, prec);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in k_lo..=k_hi {
        let mut a = MpFloat::zero(prec);
        for b in 0..=u.trunc_z {
            let c = u.get(k, b);
            if c.is_zero() {
                continue;
            }
            let abs = MpFloat::from_ratio(&c.norm_sqr(), prec).sqrt();
            a = &a + &(&abs * &rho_m.powi(b as i64));
        }
        if a.is_zero() {
            continue;
        }
        let lnk = if k < 2 { 0.0 } else { lgamma_f64(k as f64 + 1.0) };
        xs.push(vec![1.0, k as f64, lnk]);
        ys.push(a.ln().to_f64());
    }
    if xs.len() < 4 {
        return Err(SeriesError::DegenerateFit("fewer than 4 nonzero a_k".into()));
    }
    let (beta, gi) = least_squares(&xs, &ys).ok_or_else(|| SeriesError::DegenerateFit("singular normal equations".into()))?;
    let n = xs.len();
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let f: f64 = x.iter().zip(&beta).map(|(a, b)| a * b).sum();
            (y - f).powi(2)
        })
        .sum();
    let sigma2 = rss / (n - 3) as f64;
    let stderr = (sigma2 * gi[2][2]).max(0.0).sqrt();
    Ok(GevreyEstimate { s_hat: beta[2], stderr, k_range: (k_lo, k_hi), model: [beta[0], beta[1], beta[2]] })
}

/// Goursat data: φ_k(z) = ∂t^k u(0,z) for k < j and ψ_β(t) = ∂z^β u(t,0) for β < α,
/// with the corner values c_{kβ} = φ_k^{(β)}(0) = ψ_β^{(k)}(0).
#[derive(Clone, Debug, PartialEq)]
pub struct GoursatData {
    phis: Vec<UniSeries>,
    psis: Vec<UniSeries>,
    corner: Vec<Vec<RationalComplex>>,
}

impl GoursatData {
    /// Validates the corner compatibility conditions exactly.
    pub fn new(phis: Vec<UniSeries>, psis: Vec<UniSeries>) -> Result<Self, SeriesError> {
        let mut corner = Vec::with_capacity(phis.len());
        for (k, phi) in phis.iter().enumerate() {
            let mut row = Vec::with_capacity(psis.len());
            for (b, psi) in psis.iter().enumerate() {
                let from_phi = phi.get(b as u32).scale_int(&factorial(b as u64));
                let from_psi = psi.get(k as u32).scale_int(&factorial(k as u64));
                if from_phi != from_psi {
                    return Err(SeriesError::IncompatibleData {
                        k: k as u32,
                        beta: b as u32,
                        phi: from_phi.to_string(),
                        psi: from_psi.to_string(),
                    });
                }
                row.push(from_phi);
            }
            corner.push(row);
        }
        Ok(Self { phis, psis, corner })
    }

    pub fn j(&self) -> u32 {
        self.phis.len() as u32
    }

    pub fn alpha(&self) -> u32 {
        self.psis.len() as u32
    }

    pub fn phis(&self) -> &[UniSeries] {
        &self.phis
    }

    pub fn psis(&self) -> &[UniSeries] {
        &self.psis
    }

    pub fn corner(&self) -> &[Vec<RationalComplex>] {
        &self.corner
    }
}

/// v = Σ_{k<j} φ_k t^k/k! + Σ_{β<α} ψ_β z^β/β! − Σ c_{kβ} t^k z^β/(k!β!).
pub fn build_goursat_data(data: &GoursatData, trunc_t: u32, trunc_z: u32) -> Result<BiSeries, SeriesError> {
    for phi in &data.phis {
        if phi.trunc() < trunc_z {
            return Err(SeriesError::TruncationTooSmall {
                need_t: trunc_t,
                need_z: trunc_z,
                have_t: trunc_t,
                have_z: phi.trunc(),
            });
        }
    }
    for psi in &data.psis {
        if psi.trunc() < trunc_t {
            return Err(SeriesError::TruncationTooSmall {
                need_t: trunc_t,
                need_z: trunc_z,
                have_t: psi.trunc(),
                have_z: trunc_z,
            });
        }
    }
    let mut v = BiSeries::zero(trunc_t, trunc_z);
    v.exact = data.phis.iter().chain(&data.psis).all(|s| s.is_exact());
    for (k, phi) in data.phis.iter().enumerate() {
        let k = k as u32;
        if k > trunc_t {
            break;
        }
        let inv = BigRational::new(BigInt::one(), factorial(k as u64));
        for (&b, c) in phi.iter() {
            if b <= trunc_z {
                let val = &v.get(k, b) + &c.scale(&inv);
                v.set(k, b, val);
            }
        }
    }
    for (b, psi) in data.psis.iter().enumerate() {
        let b = b as u32;
        if b > trunc_z {
            break;
        }
        let inv = BigRational::new(BigInt::one(), factorial(b as u64));
        for (&k, c) in psi.iter() {
            if k <= trunc_t {
                let val = &v.get(k, b) + &c.scale(&inv);
                v.set(k, b, val);
            }
        }
    }
    for (k, row) in data.corner.iter().enumerate() {
        for (b, c) in row.iter().enumerate() {
            let (k, b) = (k as u32, b as u32);
            if k <= trunc_t && b <= trunc_z {
                let inv = BigRational::new(BigInt::one(), factorial(k as u64) * factorial(b as u64));
                let val = &v.get(k, b) - &c.scale(&inv);
                v.set(k, b, val);
            }
        }
    }
    Ok(v)
}
