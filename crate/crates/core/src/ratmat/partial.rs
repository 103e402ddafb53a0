//! Partial-fraction machinery: factor-supported denominator splits, principal
//! parts, residue sums over a half plane, and exact contour integrals over the
//! real line. Exact mode works through polynomial gcd/Bezout identities and
//! needs a polynomial whose roots carry the relevant poles; float mode
//! classifies denominator roots numerically.

use super::coeff::Coeff;
use super::matrix::RatMat;
use super::poly::Poly;
use super::rational::RatScalar;
use super::roots::poly_roots;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Split `den` into (supported, rest) where `supported` collects every factor
/// of `den` sharing a root with `hint` (to full multiplicity) and
/// gcd(supported, rest) = 1. Exact mode only.
pub fn supported_part<C: Coeff>(den: &Poly<C>, hint: &Poly<C>) -> (Poly<C>, Poly<C>) {
    assert!(C::EXACT, "supported_part requires exact coefficients");
    let mut acc = Poly::<C>::one();
    let mut rest = den.clone();
    if hint.degree().unwrap_or(0) == 0 {
        return (acc, rest);
    }
    loop {
        let g = rest.gcd(hint);
        if g.degree().unwrap_or(0) == 0 {
            break;
        }
        acc = acc.mul(&g);
        rest = rest.exact_div(&g).expect("gcd divides");
    }
    (acc, rest)
}

/// Partial-fraction split of num/(g*h) with gcd(g, h) = 1 and deg num < deg(g*h):
/// returns (u, v) with num/(g h) = u/g + v/h, deg u < deg g, deg v < deg h.
pub fn bezout_split<C: Coeff>(num: &Poly<C>, g: &Poly<C>, h: &Poly<C>) -> Result<(Poly<C>, Poly<C>)> {
    if g.degree().unwrap_or(0) == 0 {
        // everything sits over h
        let ginv = g.coeff(0).inv();
        return Ok((Poly::zero(), num.scale(&ginv)));
    }
    if h.degree().unwrap_or(0) == 0 {
        let hinv = h.coeff(0).inv();
        return Ok((num.scale(&hinv), Poly::zero()));
    }
    // u = num * h^{-1} mod g
    let hinv = h.inverse_mod(g)?;
    let (_, u) = num.mul(&hinv).div_rem(g)?;
    // v = (num - u h)/g
    let v = num.sub(&u.mul(h)).exact_div(g)?;
    Ok((u, v))
}

/// Decomposition of a rational scalar into polynomial part plus principal
/// parts over a coprime denominator factorization induced by `hint`:
/// r = poly + sup_part/g + rest_part/h with g carrying exactly the
/// hint-supported poles. Exact mode.
pub struct FactorSplit<C: Coeff> {
    pub poly: Poly<C>,
    /// strictly proper part with denominator supported on the hint roots
    pub supported: RatScalar<C>,
    /// strictly proper part with denominator coprime to the hint
    pub rest: RatScalar<C>,
}

pub fn split_by_factor<C: Coeff>(r: &RatScalar<C>, hint: &Poly<C>) -> Result<FactorSplit<C>> {
    assert!(C::EXACT, "split_by_factor requires exact coefficients");
    let (quot, rem) = r.num().div_rem(r.den())?;
    let (g, h) = supported_part(r.den(), hint);
    let (u, v) = bezout_split(&rem, &g, &h)?;
    Ok(FactorSplit {
        poly: quot,
        supported: RatScalar::new(u, g)?,
        rest: RatScalar::new(v, h)?,
    })
}

/// Entrywise split of a matrix into (polynomial part, hint-supported
/// principal part, remaining proper part). Exact mode.
pub fn split_matrix_by_factor<C: Coeff>(
    m: &RatMat<C>,
    hint: &Poly<C>,
) -> Result<(RatMat<C>, RatMat<C>, RatMat<C>)> {
    let mut polys = Vec::with_capacity(m.rows() * m.cols());
    let mut sups = Vec::with_capacity(m.rows() * m.cols());
    let mut rests = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let s = split_by_factor(m.at(r, c), hint)?;
            polys.push(RatScalar::from_poly(s.poly));
            sups.push(s.supported);
            rests.push(s.rest);
        }
    }
    Ok((
        RatMat::from_entries(m.rows(), m.cols(), polys)?,
        RatMat::from_entries(m.rows(), m.cols(), sups)?,
        RatMat::from_entries(m.rows(), m.cols(), rests)?,
    ))
}

/// Principal part of a float rational scalar at one pole, as a strictly
/// proper rational function with denominator (z - p)^order.
pub fn principal_part_at(
    r: &RatScalar<Complex64>,
    pole: Complex64,
    order: usize,
) -> Result<RatScalar<Complex64>> {
    let coeffs = laurent_negative_coeffs(r, pole, order)?;
    // sum_{j=1..order} c_j / (z-p)^j over common den (z-p)^order:
    // numerator = sum c_j (z-p)^{order-j}
    let shift_from = Poly::linear(-pole, Complex64::new(1.0, 0.0));
    let mut num = Poly::<Complex64>::zero();
    for (j, c) in coeffs.iter().enumerate() {
        // c is the coefficient of (z-p)^{-(j+1)}
        let term = shift_from.pow(order - (j + 1)).scale(c);
        num = num.add(&term);
    }
    RatScalar::new(num, shift_from.pow(order))
}

/// Laurent coefficients [c_{-1}, c_{-2}, ..., c_{-order}] of r at the pole.
pub fn laurent_negative_coeffs(
    r: &RatScalar<Complex64>,
    pole: Complex64,
    order: usize,
) -> Result<Vec<Complex64>> {
    // write den = (w)^m * dtil(w) with w = z - pole, via root extraction
    let den_roots = poly_roots(r.den())?;
    let m = den_roots
        .iter()
        .find(|(p, _)| (p - pole).norm() <= 1e-6 * pole.norm().max(1.0))
        .map(|(_, k)| *k)
        .unwrap_or(0);
    if m == 0 {
        return Ok(vec![Complex64::new(0.0, 0.0); order]);
    }
    let others: Vec<(Complex64, usize)> = den_roots
        .iter()
        .filter(|(p, _)| (p - pole).norm() > 1e-6 * pole.norm().max(1.0))
        .cloned()
        .collect();
    let lead = r.den().leading().unwrap().to_c64();
    let dtil = super::roots::poly_from_roots(lead, &others).shift(&pole);
    let num_shifted = r.num().shift(&pole);
    // series of num_shifted / dtil up to w^{m-1}
    let inv = dtil.series_inverse(m)?;
    let mut series = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..m {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=k {
            acc += num_shifted.coeff(j) * inv[k - j];
        }
        series[k] = acc;
    }
    // r = w^{-m} * series(w): coefficient of w^{-(j+1)} is series[m - (j+1)]
    let mut out = vec![Complex64::new(0.0, 0.0); order];
    for j in 1..=order.min(m) {
        out[j - 1] = series[m - j];
    }
    Ok(out)
}

/// Sum of residues of a strictly proper rational scalar over its poles in the
/// open upper half plane. Exact mode requires a hint polynomial carrying the
/// upper poles; float mode classifies roots by sign of the imaginary part.
pub fn residue_sum_upper<C: Coeff>(r: &RatScalar<C>, upper_hint: Option<&Poly<C>>) -> Result<C> {
    if r.is_zero() {
        return Ok(C::zero());
    }
    let dn = r.den().degree().unwrap_or(0);
    let nn = r.num().degree().map_or(-1i64, |d| d as i64);
    if nn >= dn as i64 {
        return Err(Error::pre(
            "residue sum needs a strictly proper rational function",
        ));
    }
    if C::EXACT {
        let hint = upper_hint.ok_or_else(|| {
            Error::RequiresFloatMode(
                "exact residue sums need an upper-half-plane denominator factor".to_string(),
            )
        })?;
        let (g, _h) = supported_part(r.den(), hint);
        if g.degree().unwrap_or(0) == 0 {
            return Ok(C::zero());
        }
        let (u, _v) = {
            let h = r.den().exact_div(&g)?;
            bezout_split(r.num(), &g, &h)?
        };
        // sum of residues of u/g with g monic = coefficient of z^{deg g - 1} in u
        Ok(u.coeff(g.degree().unwrap() - 1))
    } else {
        let rf = RatScalar::new(r.num().to_float(), r.den().to_float())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, m) in poly_roots(&rf.den())? {
            if p.im > 1e-12 {
                let coeffs = laurent_negative_coeffs(&rf, p, 1)?;
                let _ = m;
                acc += coeffs[0];
            }
        }
        Ok(C::from_c64(acc))
    }
}

/// Integral over the real line of a rational scalar decaying at least like
/// 1/x^2, computed as 2*pi*i times the sum of upper-half-plane residues.
/// Returned as a complex double (the 2*pi factor is transcendental).
pub fn real_line_integral<C: Coeff>(
    r: &RatScalar<C>,
    upper_hint: Option<&Poly<C>>,
) -> Result<Complex64> {
    let dn = r.den().degree().unwrap_or(0) as i64;
    let nn = r.num().degree().map_or(-1i64, |d| d as i64);
    if !r.is_zero() && nn > dn - 2 {
        return Err(Error::pre(
            "integrand does not decay: need deg num <= deg den - 2",
        ));
    }
    let s = residue_sum_upper(r, upper_hint)?;
    Ok(Complex64::new(0.0, 2.0 * std::f64::consts::PI) * s.to_c64())
}
