//! Real-number comparisons.
//!
//! The algorithms compare reals exactly in theory; here every such comparison
//! goes through a relative tolerance so float rounding cannot flip a decision.

/// Relative comparison tolerance.
pub const TOL: f64 = 1e-9;

fn slack(a: f64, b: f64) -> f64 {
    TOL * a.abs().max(b.abs())
}

/// `a ≥ b` up to relative tolerance.
pub fn ge(a: f64, b: f64) -> bool {
    a >= b - slack(a, b)
}

/// `a ≤ b` up to relative tolerance.
pub fn le(a: f64, b: f64) -> bool {
    ge(b, a)
}

/// `a > b` by more than the relative tolerance.
pub fn gt(a: f64, b: f64) -> bool {
    !le(a, b)
}
