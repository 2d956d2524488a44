//! Numerical projective-hull membership for closed curves in `C^n`.
//!
//! * [`polyring`]: sparse complex polynomials, homogenization, charts.
//! * [`curvelib`]: sampled curves, tubes, and the pole-series curve families.
//! * [`diskmaps`]: Blaschke products and rational analytic disks.
//! * [`hullscan`]: Christoffel-kernel growth, the sup-norm LP oracle, the
//!   disk-functional lower bound and the explicit-family verifier.

pub mod curvelib;
pub mod diskmaps;
pub mod error;
pub mod hullscan;
pub mod numfmt;
pub mod polyring;

pub use error::{HullError, Result};
pub use num_complex::Complex64;
