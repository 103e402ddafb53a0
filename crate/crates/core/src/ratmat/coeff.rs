//! Coefficient fields for polynomials and rational functions.
//!
//! Two modes are supported: exact Gaussian rationals (complex numbers with
//! arbitrary-precision rational real and imaginary parts) and complex
//! doubles. Exact mode is the default for identity checks; float mode is
//! required once numeric root finding enters. Conversion exact -> float is
//! explicit and one-way.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact coefficient: a complex number with rational real/imaginary parts.
pub type GaussianRational = Complex<BigRational>;

/// A coefficient field the polynomial and rational layers can be generic over.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// True for the exact Gaussian-rational field.
    const EXACT: bool;

    fn conjugate(&self) -> Self;

    /// The imaginary unit.
    fn i() -> Self;

    fn from_i64(n: i64) -> Self;

    /// Gaussian integer a + bi.
    fn from_i64_pair(re: i64, im: i64) -> Self {
        Self::from_i64(re) + Self::i() * Self::from_i64(im)
    }

    /// Rational constant p/q (q != 0).
    fn from_ratio(p: i64, q: i64) -> Self;

    fn to_c64(&self) -> Complex64;

    /// Lift a complex double into the field. Exact mode uses the exact
    /// binary expansion of the doubles.
    fn from_c64(v: Complex64) -> Self;

    /// Magnitude proxy |re| + |im| used for scaling and tolerance tests.
    fn mag(&self) -> f64;

    /// Whether this coefficient should be treated as zero at the given scale.
    /// Exact mode ignores the tolerance.
    fn negligible(&self, scale: f64, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.mag() <= tol * scale.max(f64::MIN_POSITIVE)
        }
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Coeff for GaussianRational {
    const EXACT: bool = true;

    fn conjugate(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn i() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from(BigInt::from(n)), BigRational::zero())
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "from_ratio with zero denominator");
        Complex::new(
            BigRational::new(BigInt::from(p), BigInt::from(q)),
            BigRational::zero(),
        )
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn from_c64(v: Complex64) -> Self {
        let part = |x: f64| BigRational::from_float(x).expect("finite float");
        Complex::new(part(v.re), part(v.im))
    }

    fn mag(&self) -> f64 {
        let c = self.to_c64();
        c.re.abs() + c.im.abs()
    }
}

impl Coeff for Complex64 {
    const EXACT: bool = false;

    fn conjugate(&self) -> Self {
        self.conj()
    }

    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "from_ratio with zero denominator");
        Complex64::new(p as f64 / q as f64, 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn from_c64(v: Complex64) -> Self {
        v
    }

    fn mag(&self) -> f64 {
        self.re.abs() + self.im.abs()
    }
}

/// Shorthand used throughout: exact coefficients.
pub type Q = GaussianRational;
/// Shorthand used throughout: float coefficients.
pub type C64 = Complex64;
