//! Borel-side diagnostics: special functions, Borel-sum profiles, growth and
//! singular-direction estimates, summability evidence and the moment
//! contour formula.

mod moment;
mod pade;
mod profile;
mod special;
mod summability;

pub use moment::{moment_pseudodiff_numeric, moment_pseudodiff_series, QuadratureResult};
pub use pade::{pade, Pade};
pub use profile::{
    angle_distance, borel_sum_eval, growth_order_fit, normalize_angle, radius_estimate, singular_direction_scan, BorelProfile,
    DirectionScan, GrowthFit, Sample, SampleMethod, SingularDirection, POLE_GUARD,
};
pub use special::{e_kernel, mittag_leffler, mittag_leffler_asymptotic, mittag_leffler_taylor};
pub use summability::{summability_verdict, SummabilityReport, Verdict, ZCheck};

use crate::series_core::SeriesError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BorelError {
    #[error("evaluation range not certified: {0}")]
    RangeNotCertified(String),
    #[error("invalid index {0}")]
    BadIndex(String),
    #[error("series too short: need truncation {need}, have {have}")]
    TooShort { need: u32, have: u32 },
    #[error("radii must be positive and strictly increasing")]
    BadRadii,
    #[error("Padé pole ({}, {}) within guard distance of the ray at r = {r}", pole.0, pole.1)]
    PadeBreakdown { r: f64, pole: (f64, f64) },
    #[error("insufficient span for growth fit: {0}")]
    InsufficientSpan(String),
    #[error("contour radius {eps} must exceed |z| = {z}")]
    BadContour { eps: f64, z: f64 },
    #[error("quadrature did not converge")]
    QuadratureNotConverged,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}
