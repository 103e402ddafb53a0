//! Exact complex-rational scalar and matrix arithmetic, evaluation,
//! differentiation, the # involution, and numeric root finding.
//!
//! Coefficients live in one of two fields: exact Gaussian rationals (the
//! default for identity checks) or complex doubles (required once numeric
//! roots enter the pipeline). Everything is immutable and pure; values are
//! safe to share across threads.

pub mod coeff;
pub mod matrix;
pub mod partial;
pub mod poly;
pub mod rational;
pub mod roots;

pub use coeff::{Coeff, GaussianRational, C64, Q};
pub use matrix::{PoleList, RatMat};
pub use poly::Poly;
pub use rational::RatScalar;
pub use roots::{poly_from_roots, poly_roots, poly_roots_with_tol};
