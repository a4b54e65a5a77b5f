//! Numeric tolerances shared by every module.
//!
//! All thresholds live in one record so that a caller who needs a looser or
//! tighter regime can build a [`NumericPolicy`] and pass it to the `*_with`
//! entry points. Everything else uses [`NumericPolicy::DEFAULT`].

/// Tolerance record for finite-precision decisions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericPolicy {
    /// Absolute tolerance on angles (radians) for boundary membership.
    pub angle_tol: f64,
    /// Absolute tolerance (radians) for sector tiling checks on the float path.
    pub partition_tol: f64,
    /// Relative tolerance for matrix agreement on shared boundary rays.
    pub continuity_tol: f64,
    /// A 2x2 matrix is singular when `|det| <= singular_rel * max(1, |M|_F^2)`.
    pub singular_rel: f64,
    /// Maximum distance of the raw winding sum from an integer.
    pub degree_tol: f64,
    /// Relative radius used to merge duplicate preimage candidates.
    pub dedup_rel: f64,
    /// Relative tolerance on witness image agreement.
    pub witness_tol: f64,
}

impl NumericPolicy {
    pub const DEFAULT: NumericPolicy = NumericPolicy {
        angle_tol: 1e-12,
        partition_tol: 1e-9,
        continuity_tol: 1e-9,
        singular_rel: 1e-12,
        degree_tol: 1e-6,
        dedup_rel: 1e-9,
        witness_tol: 1e-8,
    };
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self::DEFAULT
    }
}
