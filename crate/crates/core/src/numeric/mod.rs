//! Number types and kernels shared by all modules.

pub mod gamma;
pub mod linalg;
pub mod mp;
pub mod poly;
pub mod quadrature;
pub mod rational_complex;

pub use mp::{ldexp, MpComplex, MpFloat};
pub use rational_complex::{binomial, factorial, rat_to_f64, rising_ratio, RationalComplex};
