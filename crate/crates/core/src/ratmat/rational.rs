//! Reduced rational scalar functions num/den with monic denominator.
//!
//! Exact mode reduces through the Euclidean gcd and is canonical. Float mode
//! cancels matched root clusters of numerator and denominator; the result is
//! not canonical, and equality must go through cross multiplication.

use super::coeff::Coeff;
use super::poly::Poly;
use super::roots::{poly_from_roots, poly_roots};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;

/// Relative radius floor for matching numerator roots against denominator
/// roots during float-mode reduction. The effective radius widens with the
/// combined multiplicity, since an m-fold root is only located to about
/// eps^(1/m); it is capped at 1e-3 so genuinely distinct nearby roots stay
/// apart (generated corpora keep pole separations well above that).
pub const REDUCE_MATCH_TOL: f64 = 2e-6;

fn match_radius(m_num: usize, m_den: usize, at: Complex64) -> f64 {
    let m = (m_num + m_den).max(1);
    (3.0 * 1e-14f64.powf(1.0 / m as f64))
        .max(REDUCE_MATCH_TOL)
        .min(1e-3)
        * at.norm().max(1.0)
}

#[derive(Clone, PartialEq)]
pub struct RatScalar<C: Coeff> {
    num: Poly<C>,
    den: Poly<C>,
}

impl<C: Coeff> RatScalar<C> {
    pub fn new(num: Poly<C>, den: Poly<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut rs = RatScalar { num, den };
        rs.reduce();
        Ok(rs)
    }

    pub fn from_poly(p: Poly<C>) -> Self {
        RatScalar { num: p, den: Poly::one() }
    }

    pub fn constant(c: C) -> Self {
        RatScalar::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        RatScalar::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatScalar::from_poly(Poly::one())
    }

    /// The coordinate function z.
    pub fn var() -> Self {
        RatScalar::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly<C> {
        &self.num
    }

    pub fn den(&self) -> &Poly<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Polynomial content; errors when a nontrivial denominator survives.
    pub fn as_polynomial(&self) -> Result<Poly<C>> {
        if self.is_polynomial() {
            Ok(self.num.clone())
        } else {
            Err(Error::NonPolynomialResult {
                row: 0,
                col: 0,
                den: format!("{}", self.den),
            })
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        if C::EXACT {
            let g = self.num.gcd(&self.den);
            if g.degree().map_or(false, |d| d > 0) {
                self.num = self.num.exact_div(&g).expect("gcd divides");
                self.den = self.den.exact_div(&g).expect("gcd divides");
            }
        } else if self.den.degree().map_or(false, |d| d > 0) {
            // float mode: cancel matched root clusters
            let num_roots = poly_roots(&self.num).expect("nonzero");
            let den_roots = poly_roots(&self.den).expect("nonzero");
            let mut num_keep = num_roots.clone();
            let mut den_keep: Vec<(Complex64, usize)> = Vec::new();
            let mut cancelled = false;
            for (dr, dm) in den_roots {
                let mut dm_left = dm;
                for nk in num_keep.iter_mut() {
                    if nk.1 > 0 && (nk.0 - dr).norm() <= match_radius(nk.1, dm, dr) {
                        let take = nk.1.min(dm_left);
                        nk.1 -= take;
                        dm_left -= take;
                        if take > 0 {
                            cancelled = true;
                        }
                        if dm_left == 0 {
                            break;
                        }
                    }
                }
                if dm_left > 0 {
                    den_keep.push((dr, dm_left));
                }
            }
            if cancelled {
                let num_lead = self.num.leading().unwrap().to_c64();
                let den_lead = self.den.leading().unwrap().to_c64();
                num_keep.retain(|(_, m)| *m > 0);
                let new_num = poly_from_roots(num_lead / den_lead, &num_keep);
                let new_den = poly_from_roots(Complex64::new(1.0, 0.0), &den_keep);
                self.num = lift(&new_num);
                self.den = lift(&new_den);
                return;
            }
        }
        // normalize the denominator to be monic
        let lead = self.den.leading().expect("nonzero denominator").clone();
        if !(lead.clone() - C::one()).is_zero() {
            let inv = lead.inv();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatScalar::new(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatScalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatScalar::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominator")
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RatScalar::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RatScalar::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        RatScalar::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    /// The involution f#(z) = conj(f(conj(z))): conjugate all coefficients.
    pub fn sharp(&self) -> Self {
        RatScalar::new(self.num.sharp(), self.den.sharp()).expect("nonzero denominator")
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let den = self.den.mul(&self.den);
        RatScalar::new(num, den).expect("nonzero denominator")
    }

    /// Numeric evaluation; errors when the point sits on (or numerically at) a pole.
    pub fn eval_c64(&self, z: Complex64) -> Result<Complex64> {
        let dv = self.den.eval_c64(z);
        let scale = self.den.max_mag() * z.norm().max(1.0).powi(self.den.degree().unwrap_or(0) as i32);
        if dv.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            let pole = poly_roots(&self.den)
                .ok()
                .and_then(|rs| {
                    rs.into_iter()
                        .min_by(|a, b| (a.0 - z).norm().partial_cmp(&(b.0 - z).norm()).unwrap())
                })
                .map(|(p, _)| p)
                .unwrap_or(z);
            return Err(Error::EvalAtPole { point: z, pole });
        }
        Ok(self.num.eval_c64(z) / dv)
    }

    /// Exact evaluation in the coefficient field; errors at exact poles.
    pub fn eval_exact(&self, z: &C) -> Result<C> {
        let dv = self.den.eval(z);
        if dv.is_zero() {
            return Err(Error::EvalAtPole { point: z.to_c64(), pole: z.to_c64() });
        }
        Ok(self.num.eval(z) / dv)
    }

    /// Equality as rational functions. Exact mode decides through the
    /// cross-multiplied polynomial identity. Float mode samples the two
    /// functions on circles around the origin (skipping points near either
    /// pole set), which stays well conditioned when the reduced
    /// representations carry very different coefficient scales.
    pub fn equals(&self, other: &Self, tol: f64) -> bool {
        if C::EXACT {
            let lhs = self.num.mul(&other.den);
            let rhs = other.num.mul(&self.den);
            return lhs == rhs;
        }
        let mut valid = 0usize;
        for radius in [0.83, 1.47, 2.19, 3.41] {
            for k in 0..12 {
                let theta = std::f64::consts::TAU * (k as f64 + 0.3) / 12.0;
                let z = Complex64::from_polar(radius, theta);
                let (a, b) = match (self.eval_c64(z), other.eval_c64(z)) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => continue,
                };
                valid += 1;
                if (a - b).norm() > tol * (1.0 + a.norm() + b.norm()) {
                    return false;
                }
            }
        }
        if valid >= 12 {
            return true;
        }
        // nearly everything sat on poles; fall back to cross multiplication
        let lhs = self.num.mul(&other.den);
        let rhs = other.num.mul(&self.den);
        lhs.approx_eq(&rhs, tol)
    }

    pub fn to_float(&self) -> RatScalar<Complex64> {
        RatScalar::new(self.num.to_float(), self.den.to_float()).expect("nonzero denominator")
    }
}

fn lift<C: Coeff>(p: &Poly<Complex64>) -> Poly<C> {
    Poly::new(p.coeffs().iter().map(|c| C::from_c64(*c)).collect())
}

impl<C: Coeff> fmt::Debug for RatScalar<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl<C: Coeff> fmt::Display for RatScalar<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}
