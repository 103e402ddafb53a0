//! Dense univariate polynomials over a `Coeff` field, ascending degree.

use super::coeff::Coeff;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;

/// Relative threshold below which float coefficients are trimmed away.
/// Exact coefficients are only trimmed when exactly zero.
pub const TRIM_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct Poly<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    /// Build from ascending coefficients, stripping trailing (near-)zeros.
    pub fn new(coeffs: Vec<C>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial z.
    pub fn var() -> Self {
        Poly::new(vec![C::zero(), C::one()])
    }

    /// c0 + c1 z.
    pub fn linear(c0: C, c1: C) -> Self {
        Poly::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn max_mag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.mag()).fold(0.0, f64::max)
    }

    fn trim(&mut self) {
        let scale = self.max_mag();
        while let Some(last) = self.coeffs.last() {
            if last.negligible(scale, TRIM_TOL) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Long division: self = q * div + r with deg r < deg div.
    pub fn div_rem(&self, div: &Self) -> Result<(Self, Self)> {
        if div.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let dd = div.degree().unwrap();
        let lead = div.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![C::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let q = rem[k].clone() / lead.clone();
            if !q.is_zero() {
                for j in 0..dd {
                    rem[k - dd + j] = rem[k - dd + j].clone() - q.clone() * div.coeffs[j].clone();
                }
            }
            rem[k] = C::zero();
            quot[k - dd] = q;
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Division that must be exact; the remainder is checked against the
    /// operand scale and dropped.
    pub fn exact_div(&self, div: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(div)?;
        let scale = self.max_mag().max(q.max_mag() * div.max_mag()).max(1.0);
        if !r.coeffs.iter().all(|c| c.negligible(scale, 1e-8)) {
            return Err(Error::Internal(format!(
                "inexact polynomial division; remainder magnitude {:.3e}",
                r.max_mag()
            )));
        }
        Ok(q)
    }

    /// Monic gcd by the Euclidean algorithm. Exact mode only; float
    /// cancellation goes through root matching in the rational layer.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone().monic_or_zero();
        let mut b = other.clone().monic_or_zero();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic_or_zero();
        }
        a
    }

    /// Extended Euclid: returns (g, s, t) with s*self + t*other = g, g monic.
    pub fn extended_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Poly::one();
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one();
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if let Some(lead) = r0.leading().cloned() {
            let inv = lead.inv();
            (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
        } else {
            (r0, s0, t0)
        }
    }

    /// Inverse of self modulo m (requires gcd(self, m) = 1).
    pub fn inverse_mod(&self, m: &Self) -> Result<Self> {
        let (g, s, _) = self.extended_gcd(m);
        if g.degree() != Some(0) {
            return Err(Error::Precondition(format!(
                "no modular inverse: gcd has degree {:?}",
                g.degree()
            )));
        }
        let (_, r) = s.div_rem(m)?;
        Ok(r)
    }

    fn monic_or_zero(self) -> Self {
        match self.leading() {
            None => self,
            Some(l) => {
                let inv = l.clone().inv();
                self.scale(&inv)
            }
        }
    }

    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.clone().monic_or_zero())
    }

    pub fn eval(&self, z: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.clone() * C::from_i64(k as i64));
        }
        Poly::new(out)
    }

    /// Coefficientwise conjugation: p#(z) = conj(p(conj(z)))^T restricted to scalars.
    pub fn sharp(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.conjugate()).collect())
    }

    /// Taylor shift: returns q with q(w) = p(w + center).
    pub fn shift(&self, center: &C) -> Self {
        // synthetic division by (z - center), repeatedly
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            // divide work by (z - center): remainder is the next coefficient
            let mut rem = C::zero();
            for k in (0..work.len()).rev() {
                let new = work[k].clone() + rem.clone() * center.clone();
                rem = new.clone();
                work[k] = new;
            }
            out.push(work.remove(0));
        }
        Poly::new(out)
    }

    pub fn to_float(&self) -> Poly<Complex64> {
        Poly::new(self.coeffs.iter().map(|c| c.to_c64()).collect())
    }

    /// Order of vanishing at `center` and the deflated shifted polynomial:
    /// p(center + w) = w^m q(w) with q(0) significant at tolerance `tol`.
    /// Exact coefficients vanish exactly; float ones relative to scale.
    pub fn shifted_valuation(&self, center: &C, tol: f64) -> (usize, Poly<C>) {
        let sh = self.shift(center);
        let scale = sh.max_mag();
        let mut m = 0;
        let cs = sh.coeffs();
        while m < cs.len() && cs[m].negligible(scale, tol) {
            m += 1;
        }
        (m, Poly::new(cs[m..].to_vec()))
    }

    /// Power-series inverse to the requested number of terms;
    /// requires a nonzero constant term.
    pub fn series_inverse(&self, len: usize) -> Result<Vec<C>> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let inv0 = c0.inv();
        let mut out = Vec::with_capacity(len);
        out.push(inv0.clone());
        for k in 1..len {
            let mut acc = C::zero();
            for j in 1..=k {
                acc = acc + self.coeff(j) * out[k - j].clone();
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(out)
    }

    /// Approximate equality at the coefficient level, relative to max scale.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.max_mag().max(other.max_mag()).max(1.0);
        self.sub(other).coeffs.iter().all(|c| c.negligible(scale, tol))
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let v = c.to_c64();
            match k {
                0 => write!(f, "({}{:+}i)", v.re, v.im)?,
                1 => write!(f, "({}{:+}i)z", v.re, v.im)?,
                _ => write!(f, "({}{:+}i)z^{}", v.re, v.im, k)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::coeff::Q;

    fn q(p: i64, q_: i64) -> Q {
        Q::from_ratio(p, q_)
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        let p: Poly<Q> = Poly::new(vec![Q::from_i64(0)]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn div_rem_roundtrip() {
        // (z^3 - 1) / (z - 1) = z^2 + z + 1
        let p = Poly::new(vec![q(-1, 1), q(0, 1), q(0, 1), q(1, 1)]);
        let d = Poly::linear(q(-1, 1), q(1, 1));
        let (quot, rem) = p.div_rem(&d).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot.coeffs(), &[q(1, 1), q(1, 1), q(1, 1)]);
    }

    #[test]
    fn gcd_of_shared_factor() {
        // gcd((z-1)(z-2), (z-1)(z-3)) = z - 1
        let a = Poly::linear(q(-1, 1), q(1, 1)).mul(&Poly::linear(q(-2, 1), q(1, 1)));
        let b = Poly::linear(q(-1, 1), q(1, 1)).mul(&Poly::linear(q(-3, 1), q(1, 1)));
        let g = a.gcd(&b);
        assert_eq!(g.coeffs(), &[q(-1, 1), q(1, 1)]);
    }

    #[test]
    fn extended_gcd_bezout() {
        let a = Poly::linear(q(-1, 1), q(1, 1)).pow(2);
        let b = Poly::linear(q(1, 1), q(1, 1));
        let (g, s, t) = a.extended_gcd(&b);
        assert_eq!(g.degree(), Some(0));
        let lhs = s.mul(&a).add(&t.mul(&b));
        assert_eq!(lhs, g);
    }

    #[test]
    fn shift_evaluates_correctly() {
        // p(z) = z^2, shifted by 1: q(w) = (w+1)^2 = 1 + 2w + w^2
        let p = Poly::new(vec![q(0, 1), q(0, 1), q(1, 1)]);
        let sh = p.shift(&q(1, 1));
        assert_eq!(sh.coeffs(), &[q(1, 1), q(2, 1), q(1, 1)]);
    }

    #[test]
    fn series_inverse_matches() {
        // 1/(1 - z) = 1 + z + z^2 + ...
        let p = Poly::linear(q(1, 1), q(-1, 1));
        let inv = p.series_inverse(4).unwrap();
        assert_eq!(inv, vec![q(1, 1), q(1, 1), q(1, 1), q(1, 1)]);
    }
}
