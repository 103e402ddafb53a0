//! Local Smith-McMillan analysis of a rational matrix function at a point:
//! partial pole/zero multiplicities, pole vectors, eigenvectors, and maximal
//! chains.
//!
//! Everything here runs on float coefficients. The local factorization
//! F(z) = M(z) diag((z-z0)^{r_1}, ..., (z-z0)^{r_n}) N(z) with M, N analytic
//! and invertible at z0 assigns an ascending integer tuple r_1 <= ... <= r_n
//! to every point; negative exponents are partial pole multiplicities,
//! positive ones partial zero multiplicities. The exponents are read off
//! rank jumps of nested block-Toeplitz matrices built from the Laurent
//! coefficients, which avoids symbolic local-ring reduction.

use crate::error::{Error, Result};
use crate::ratmat::{RatMat, RatScalar};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Relative singular-value threshold for numeric ranks and span
/// extraction. Rational arithmetic in float mode reconstructs polynomials
/// from matched root clusters and carries around 1e-7 of relative noise
/// through long chains (inverses of degree ~8 matrices), so the threshold
/// sits above that; genuine structure in desk-scale inputs stays orders of
/// magnitude larger.
pub const RANK_TOL: f64 = 1e-7;

/// Least-squares residual threshold for chain feasibility.
pub const CHAIN_RESIDUAL_TOL: f64 = 1e-8;

/// Partial multiplicities and local bases of a matrix function at one point.
#[derive(Clone, Debug)]
pub struct LocalData {
    pub point: Complex64,
    /// Ascending exponents r_1 <= ... <= r_n of the local factorization.
    pub partial_mults: Vec<i64>,
    /// Orthonormal basis of the span of pole vectors (empty if no pole).
    pub pole_basis: Vec<DVector<Complex64>>,
    /// Orthonormal basis of the span of eigenvectors (empty if no zero).
    pub zero_basis: Vec<DVector<Complex64>>,
}

impl LocalData {
    pub fn pole_mults(&self) -> Vec<u64> {
        self.partial_mults
            .iter()
            .filter(|r| **r < 0)
            .map(|r| r.unsigned_abs())
            .collect()
    }

    pub fn zero_mults(&self) -> Vec<u64> {
        self.partial_mults
            .iter()
            .filter(|r| **r > 0)
            .map(|r| *r as u64)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainKind {
    Pole,
    Zero,
}

/// A pole or zero chain. An empty vector list is the length-0 sentinel
/// returned when the requested start vector does not open a chain.
#[derive(Clone, Debug)]
pub struct Chain {
    pub vectors: Vec<DVector<Complex64>>,
    pub kind: ChainKind,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Laurent expansion of a rational matrix around a point: coefficient
/// matrices for (z - z0)^k with k = offset, offset+1, ...
pub struct MatrixSeries {
    pub offset: i64,
    pub coeffs: Vec<DMatrix<Complex64>>,
}

impl MatrixSeries {
    /// Coefficient of (z - z0)^k.
    pub fn at(&self, k: i64) -> DMatrix<Complex64> {
        let n = self.coeffs[0].nrows();
        let m = self.coeffs[0].ncols();
        let idx = k - self.offset;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            DMatrix::zeros(n, m)
        } else {
            self.coeffs[idx as usize].clone()
        }
    }
}

/// Tolerance for deciding the order of vanishing of shifted coefficients.
const VALUATION_TOL: f64 = 1e-9;

/// Laurent coefficients of one rational scalar at z0 for exponents lo..=hi.
/// Works through Taylor shifts, never through root extraction.
fn scalar_series(
    e: &RatScalar<Complex64>,
    z0: Complex64,
    lo: i64,
    hi: i64,
) -> Result<Vec<Complex64>> {
    let want = (hi - lo + 1) as usize;
    if e.is_zero() {
        return Ok(vec![Complex64::new(0.0, 0.0); want]);
    }
    // den(z0 + w) = w^m dtil(w) with dtil(0) != 0
    let (m, dtil) = e.den().shifted_valuation(&z0, VALUATION_TOL);
    let m = m as i64;
    let num_shifted = e.num().shift(&z0);
    // series of num_shifted / dtil; exponent k corresponds to index k + m
    let terms = (hi + m + 1).max(1) as usize;
    let inv = dtil.series_inverse(terms)?;
    let mut series = vec![Complex64::new(0.0, 0.0); terms];
    for k in 0..terms {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=k {
            acc += num_shifted.coeff(j) * inv[k - j];
        }
        series[k] = acc;
    }
    let mut out = Vec::with_capacity(want);
    for k in lo..=hi {
        let idx = k + m;
        if idx < 0 || idx as usize >= series.len() {
            out.push(Complex64::new(0.0, 0.0));
        } else {
            out.push(series[idx as usize]);
        }
    }
    Ok(out)
}

/// Laurent expansion of the whole matrix for exponents lo..=hi.
pub fn matrix_series(
    f: &RatMat<Complex64>,
    z0: Complex64,
    lo: i64,
    hi: i64,
) -> Result<MatrixSeries> {
    let rows = f.rows();
    let cols = f.cols();
    let len = (hi - lo + 1) as usize;
    let mut coeffs = vec![DMatrix::<Complex64>::zeros(rows, cols); len];
    for r in 0..rows {
        for c in 0..cols {
            let s = scalar_series(f.at(r, c), z0, lo, hi)?;
            for (k, v) in s.into_iter().enumerate() {
                coeffs[k][(r, c)] = v;
            }
        }
    }
    Ok(MatrixSeries { offset: lo, coeffs })
}

/// Largest denominator order at z0 over the entries (0 when analytic there).
pub fn pole_order_bound(f: &RatMat<Complex64>, z0: Complex64) -> usize {
    let mut m = 0;
    for r in 0..f.rows() {
        for c in 0..f.cols() {
            let e = f.at(r, c);
            if !e.is_polynomial() {
                m = m.max(e.den().shifted_valuation(&z0, VALUATION_TOL).0);
            }
        }
    }
    m
}

/// Rank with the threshold anchored at an external scale: systems assembled
/// from Laurent coefficients can be pure evaluation noise, and a threshold
/// relative only to the matrix's own largest singular value would count
/// noise as full rank.
fn numeric_rank(m: &DMatrix<Complex64>, anchor: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = RANK_TOL * smax.max(anchor);
    if cut == 0.0 {
        return 0;
    }
    svd.singular_values.iter().filter(|s| **s > cut).count()
}

/// Orthonormal basis of the column space, threshold anchored as in
/// `numeric_rank`.
fn column_space_basis(m: &DMatrix<Complex64>, anchor: f64) -> Vec<DVector<Complex64>> {
    if m.ncols() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.as_ref().expect("u requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = RANK_TOL * smax.max(anchor);
    let mut out = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if cut > 0.0 && *s > cut {
            out.push(u.column(k).into_owned());
        }
    }
    out
}

/// Orthonormal basis of the null space, threshold anchored as in
/// `numeric_rank`. The matrix is padded with zero rows when wide, so the
/// thin SVD still exposes every right singular vector.
fn null_space_basis(m: &DMatrix<Complex64>, anchor: f64) -> Vec<DVector<Complex64>> {
    let ncols = m.ncols();
    if ncols == 0 {
        return Vec::new();
    }
    let work = if m.nrows() < ncols {
        let mut padded = DMatrix::<Complex64>::zeros(ncols, ncols);
        if m.nrows() > 0 {
            padded.view_mut((0, 0), (m.nrows(), ncols)).copy_from(m);
        }
        padded
    } else {
        m.clone()
    };
    let svd = work.svd(false, true);
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = RANK_TOL * smax.max(anchor);
    let rank = if cut == 0.0 {
        0
    } else {
        svd.singular_values.iter().filter(|s| **s > cut).count()
    };
    (rank..ncols)
        .map(|k| vt.row(k).transpose().map(|x| x.conj()))
        .collect()
}

/// Scale anchor for systems assembled from a coefficient range of a series.
fn series_scale(series: &MatrixSeries) -> f64 {
    series.coeffs.iter().map(|m| m.norm()).fold(0.0, f64::max)
}

/// Coefficient scale of the function itself (denominators are monic, so the
/// numerator magnitudes set the scale); guards against series slices that
/// are pure evaluation noise.
fn matrix_coeff_scale(f: &RatMat<Complex64>) -> f64 {
    let mut s: f64 = 0.0;
    for r in 0..f.rows() {
        for c in 0..f.cols() {
            s = s.max(f.at(r, c).num().max_mag());
        }
    }
    s
}

/// Row equilibration for systems assembled from Laurent coefficients: rows
/// whose entries sit at evaluation-noise level relative to `global` are
/// vacuous constraints and are dropped; every kept row is scaled to unit
/// max magnitude, which makes a plain relative singular-value threshold
/// meaningful on matrices that mix coefficient scales.
fn equilibrate(
    sys: &DMatrix<Complex64>,
    rhs: Option<&DVector<Complex64>>,
    global: f64,
) -> (DMatrix<Complex64>, Option<DVector<Complex64>>) {
    let floor = 1e-10 * global.max(f64::MIN_POSITIVE);
    let mut kept: Vec<(usize, f64)> = Vec::new();
    for r in 0..sys.nrows() {
        let mut rn = sys.row(r).iter().map(|x| x.norm()).fold(0.0, f64::max);
        if let Some(b) = rhs {
            rn = rn.max(b[r].norm());
        }
        if rn > floor {
            kept.push((r, rn));
        }
    }
    let mut out = DMatrix::<Complex64>::zeros(kept.len(), sys.ncols());
    let mut out_rhs = rhs.map(|_| DVector::<Complex64>::zeros(kept.len()));
    for (new_r, (r, rn)) in kept.iter().enumerate() {
        let inv = Complex64::new(1.0 / rn, 0.0);
        for c in 0..sys.ncols() {
            out[(new_r, c)] = sys[(*r, c)] * inv;
        }
        if let (Some(orhs), Some(b)) = (&mut out_rhs, rhs) {
            orhs[new_r] = b[*r] * inv;
        }
    }
    (out, out_rhs)
}

/// Valuation of det F at z0 (zero order minus pole order), read off the
/// shifted numerator and denominator of the reduced determinant.
pub fn det_valuation(f: &RatMat<Complex64>, z0: Complex64) -> Result<i64> {
    let det = f.det()?;
    if det.is_zero() {
        return Err(Error::IdenticallySingular);
    }
    let zero_ord = det.num().shifted_valuation(&z0, VALUATION_TOL).0 as i64;
    let pole_ord = det.den().shifted_valuation(&z0, VALUATION_TOL).0 as i64;
    Ok(zero_ord - pole_ord)
}

/// Partial pole/zero multiplicities of F at z0 together with the local bases.
pub fn local_smith(f: &RatMat<Complex64>, z0: Complex64) -> Result<LocalData> {
    if !f.is_square() {
        return Err(Error::dim("local structure needs a square matrix"));
    }
    let n = f.rows();
    let total = det_valuation(f, z0)?;

    // valuation of the matrix itself
    let q = pole_order_bound(f, z0) as i64;
    // series from -q upward until a nonzero coefficient appears
    let probe = matrix_series(f, z0, -q, (total + n as i64 * q).max(0) + 1)?;
    let scale = probe
        .coeffs
        .iter()
        .map(|m| m.iter().map(|x| x.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    let mut v = None;
    for (k, cm) in probe.coeffs.iter().enumerate() {
        let mx = cm.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if mx > 1e-10 * scale.max(f64::MIN_POSITIVE) {
            v = Some(probe.offset + k as i64);
            break;
        }
    }
    let v = v.ok_or_else(|| Error::Internal("zero matrix has no local structure".into()))?;

    // shifted analytic function A(w) = (z-z0)^{-v} F: exponents s_i >= 0 with
    // sum s_i = total - n*v
    let delta = total - n as i64 * v;
    if delta < 0 {
        return Err(Error::Internal(format!(
            "negative shifted determinant order {delta}; series length insufficient"
        )));
    }

    let mut s = vec![0u64; n];
    if delta > 0 {
        // ranks of nested block-Toeplitz matrices T_k; the count of exponents
        // >= k is n - (rank T_k - rank T_{k-1})
        let series = matrix_series(f, z0, v, v + delta)?;
        let series_anchor = series_scale(&series);
        let d = |j: i64| series.at(v + j);
        let mut prev_rank = 0usize;
        let mut assigned = 0i64;
        let mut k = 1i64;
        while assigned < delta {
            let kk = k as usize;
            let mut t = DMatrix::<Complex64>::zeros(kk * n, kk * n);
            for bi in 0..kk {
                for bj in 0..=bi {
                    let blk = d((bi - bj) as i64);
                    t.view_mut((bi * n, bj * n), (n, n)).copy_from(&blk);
                }
            }
            let rank = numeric_rank(&t, series_anchor);
            let at_least_k = n - (rank - prev_rank);
            // raise the top `at_least_k` exponents to k
            let mut sorted_idx: Vec<usize> = (0..n).collect();
            sorted_idx.sort_by_key(|i| std::cmp::Reverse(s[*i]));
            for i in sorted_idx.into_iter().take(at_least_k) {
                s[i] = k as u64;
            }
            assigned = s.iter().map(|x| *x as i64).sum();
            prev_rank = rank;
            k += 1;
            if k > delta + 1 {
                return Err(Error::Internal(
                    "block-Toeplitz rank profile failed to exhaust det valuation".into(),
                ));
            }
        }
    }

    let mut partial: Vec<i64> = s.iter().map(|x| v + *x as i64).collect();
    partial.sort_unstable();

    let pole_basis = pole_vectors(f, z0)?;
    let zero_basis = eigenvectors(f, z0)?;
    Ok(LocalData { point: z0, partial_mults: partial, pole_basis, zero_basis })
}

/// Span of the pole vectors of F at z0: the values (F psi)(z0) over analytic
/// psi vanishing at z0 with F psi analytic. Returns an orthonormal basis;
/// an empty list when z0 is not a pole. Degenerate (det F = 0) inputs are
/// accepted, which the simultaneous factorization of singular blocks needs.
pub fn pole_vectors(f: &RatMat<Complex64>, z0: Complex64) -> Result<Vec<DVector<Complex64>>> {
    if !f.is_square() {
        return Err(Error::dim("pole vectors need a square matrix"));
    }
    let n = f.rows();
    let q = pole_order_bound(f, z0) as i64;
    if q == 0 {
        return Ok(Vec::new());
    }
    let series = matrix_series(f, z0, -q, 0)?;
    let anchor = series_scale(&series).max(matrix_coeff_scale(f));
    let c = |k: i64| series.at(k);
    // unknowns u_1..u_q (coefficients of psi); conditions: coefficients of
    // (z-z0)^k of F psi vanish for k = -q..-1
    let qq = q as usize;
    let mut sys = DMatrix::<Complex64>::zeros(qq * n, qq * n);
    for (row_block, k) in (-q..0).enumerate() {
        for j in 1..=q {
            // C_{k-j} multiplies u_j
            let blk = c(k - j);
            sys.view_mut((row_block * n, (j - 1) as usize * n), (n, n))
                .copy_from(&blk);
        }
    }
    let (sys_eq, _) = equilibrate(&sys, None, anchor);
    let null = null_space_basis(&sys_eq, 1.0);
    if null.is_empty() {
        return Ok(Vec::new());
    }
    // value map: v = sum_j C_{-j} u_j
    let mut value_map = DMatrix::<Complex64>::zeros(n, qq * n);
    for j in 1..=q {
        let blk = c(-j);
        value_map
            .view_mut((0, (j - 1) as usize * n), (n, n))
            .copy_from(&blk);
    }
    let mut values = DMatrix::<Complex64>::zeros(n, null.len());
    for (k, u) in null.iter().enumerate() {
        let v = &value_map * u;
        values.set_column(k, &v);
    }
    // the value map inherits the coefficient scale; spans below noise level
    // relative to it are dropped
    let vscale = value_map.norm().max(f64::MIN_POSITIVE);
    Ok(column_space_basis(&(values / Complex64::new(vscale, 0.0)), 1e-3))
}

/// Span of the eigenvectors of F at the zero z0, computed directly from the
/// defining condition: u1 = phi(z0) over analytic phi with F phi analytic
/// and vanishing at z0. Dual to `pole_vectors` through z0 being a zero of F
/// exactly when it is a pole of F^{-1}; the duality is cross-checked in
/// property tests rather than baked into the implementation.
pub fn eigenvectors(f: &RatMat<Complex64>, z0: Complex64) -> Result<Vec<DVector<Complex64>>> {
    leading_vectors(f, z0)
}

/// Span of phi(z0) over analytic phi with G phi analytic and vanishing at
/// z0. For G with a zero and no pole at z0 this is the eigenvector span;
/// applying it to G = F^{-1} gives the pole vectors of F.
pub fn leading_vectors(g: &RatMat<Complex64>, z0: Complex64) -> Result<Vec<DVector<Complex64>>> {
    if !g.is_square() {
        return Err(Error::dim("leading vectors need a square matrix"));
    }
    let n = g.rows();
    let q = pole_order_bound(g, z0) as i64;
    let series = matrix_series(g, z0, -q, 0)?;
    // valuation of G: G vanishing at z0 through order 0 accepts everything;
    // the threshold is anchored at the coefficient scale of G itself so
    // evaluation noise does not count as structure
    let scale = series_scale(&series).max(matrix_coeff_scale(g));
    let nonzero_seen = series
        .coeffs
        .iter()
        .any(|m| m.norm() > 1e-9 * scale.max(f64::MIN_POSITIVE));
    if !nonzero_seen {
        // every coefficient through order 0 vanishes: any u1 works
        return Ok((0..n)
            .map(|k| {
                let mut v = DVector::zeros(n);
                v[k] = Complex64::new(1.0, 0.0);
                v
            })
            .collect());
    }
    let c = |k: i64| series.at(k);
    // unknowns u_0 .. u_q; conditions: coefficients of (z-z0)^k of G phi
    // vanish for k = -q..0
    let unknowns = (q + 1) as usize;
    let rows = (q + 1) as usize * n;
    let mut sys = DMatrix::<Complex64>::zeros(rows, unknowns * n);
    for (row_block, k) in (-q..=0).enumerate() {
        for j in 0..=q {
            let blk = c(k - j);
            sys.view_mut((row_block * n, j as usize * n), (n, n)).copy_from(&blk);
        }
    }
    let (sys_eq, _) = equilibrate(&sys, None, scale);
    let null = null_space_basis(&sys_eq, 1.0);
    if null.is_empty() {
        return Ok(Vec::new());
    }
    let mut values = DMatrix::<Complex64>::zeros(n, null.len());
    for (k, u) in null.iter().enumerate() {
        values.set_column(k, &u.rows(0, n).into_owned());
    }
    Ok(column_space_basis(&values, 1e-3))
}

/// Maximal chain with prescribed first vector. Pole chains of length l ask
/// for analytic psi with psi(z0) = v1 and F^{-1} psi vanishing to order >= l;
/// zero chains use F in place of F^{-1}.
pub fn max_chain(
    f: &RatMat<Complex64>,
    z0: Complex64,
    v1: &DVector<Complex64>,
    kind: ChainKind,
) -> Result<Chain> {
    if v1.iter().all(|x| x.norm() == 0.0) {
        return Err(Error::ZeroVector);
    }
    let g = match kind {
        ChainKind::Pole => f.inverse()?,
        ChainKind::Zero => f.clone(),
    };
    // G psi must vanish to order l; psi = v1 + u_1 w + ...; the valuation of
    // G bounds how deep the conditions reach.
    let qg = pole_order_bound(&g, z0) as i64;
    let bound: i64 = {
        // chain lengths are bounded by the total multiplicity at the point
        let dv = det_valuation(f, z0).unwrap_or(0).abs();
        (dv + qg + 1).max(2)
    };
    let mut best: Option<Vec<DVector<Complex64>>> = None;
    for l in 1..=bound {
        match chain_feasible(&g, z0, v1, l, qg)? {
            Some(chain_vecs) => best = Some(chain_vecs),
            None => break,
        }
    }
    match best {
        Some(vectors) => Ok(Chain { vectors, kind }),
        None => Ok(Chain { vectors: Vec::new(), kind }),
    }
}

/// Feasibility of "G psi analytic and vanishing to order >= l with
/// psi(z0) = v1"; returns the first l coefficients of psi on success.
fn chain_feasible(
    g: &RatMat<Complex64>,
    z0: Complex64,
    v1: &DVector<Complex64>,
    l: i64,
    qg: i64,
) -> Result<Option<Vec<DVector<Complex64>>>> {
    let n = g.rows();
    let lo = -qg;
    let hi = l - 1;
    let series = matrix_series(g, z0, lo, hi)?;
    let c = |k: i64| series.at(k);
    // unknowns u_1..u_m with m = hi - lo (psi truncated; u_0 = v1 fixed)
    let m = (hi - lo).max(0) as usize;
    let rows = (hi - lo + 1) as usize * n;
    let mut sys = DMatrix::<Complex64>::zeros(rows, m.max(1) * n);
    let mut rhs = DVector::<Complex64>::zeros(rows);
    for (rb, k) in (lo..=hi).enumerate() {
        // sum_{j>=0} C_{k-j} u_j = 0: move the j = 0 term to the rhs
        let r0 = &c(k) * v1;
        for i in 0..n {
            rhs[rb * n + i] = -r0[i];
        }
        for j in 1..=m as i64 {
            let blk = c(k - j);
            sys.view_mut((rb * n, (j - 1) as usize * n), (n, n)).copy_from(&blk);
        }
    }
    // least squares via SVD on the equilibrated system
    let anchor = series_scale(&series).max(matrix_coeff_scale(g));
    let (sys_eq, rhs_eq) = equilibrate(&sys, Some(&rhs), anchor);
    let rhs_eq = rhs_eq.expect("rhs passed through");
    if sys_eq.nrows() == 0 {
        // every constraint sits at noise level: trivially feasible
        let mut chain = vec![v1.clone()];
        for _ in 0..(l - 1).max(0) as usize {
            chain.push(DVector::zeros(n));
        }
        return Ok(Some(chain));
    }
    let svd = sys_eq.clone().svd(true, true);
    let sol = svd
        .solve(&rhs_eq, RANK_TOL)
        .map_err(|e| Error::Internal(format!("least squares failed: {e}")))?;
    let resid = (&sys_eq * &sol) - &rhs_eq;
    let scale = rhs_eq.norm().max(1.0);
    if resid.norm() > CHAIN_RESIDUAL_TOL * scale {
        return Ok(None);
    }
    let mut chain = vec![v1.clone()];
    for j in 0..(l - 1).max(0) as usize {
        if j < m {
            chain.push(sol.rows(j * n, n).into_owned());
        } else {
            chain.push(DVector::zeros(n));
        }
    }
    Ok(Some(chain))
}

/// A chain start vector inside span(basis) admitting a chain of length l, if
/// one exists. The start vector is an unknown of the feasibility system, so
/// maximal-length starts are found even though generic vectors in the span
/// only realize the shortest multiplicity.
fn chain_start_in_subspace(
    g: &RatMat<Complex64>,
    z0: Complex64,
    basis: &[DVector<Complex64>],
    l: i64,
    qg: i64,
) -> Result<Option<DVector<Complex64>>> {
    if basis.is_empty() {
        return Ok(None);
    }
    let n = g.rows();
    let dim = basis.len();
    let lo = -qg;
    let hi = l - 1;
    let series = matrix_series(g, z0, lo, hi)?;
    let c = |k: i64| series.at(k);
    let m = (hi - lo).max(0) as usize;
    let rows = (hi - lo + 1) as usize * n;
    let cols = dim + m * n;
    // unknowns: coordinates of u_0 in the basis, then u_1..u_m
    let mut b_mat = DMatrix::<Complex64>::zeros(n, dim);
    for (j, b) in basis.iter().enumerate() {
        b_mat.set_column(j, b);
    }
    let mut sys = DMatrix::<Complex64>::zeros(rows, cols);
    for (rb, k) in (lo..=hi).enumerate() {
        let blk0 = &c(k) * &b_mat;
        sys.view_mut((rb * n, 0), (n, dim)).copy_from(&blk0);
        for j in 1..=m as i64 {
            let blk = c(k - j);
            sys.view_mut((rb * n, dim + (j - 1) as usize * n), (n, n))
                .copy_from(&blk);
        }
    }
    // null vector with nonzero start-coordinate part
    let anchor = series_scale(&series).max(matrix_coeff_scale(g));
    let (sys_eq, _) = equilibrate(&sys, None, anchor);
    let null = null_space_basis(&sys_eq, 1.0);
    let mut best: Option<(f64, DVector<Complex64>)> = None;
    for u in &null {
        let cpart = u.rows(0, dim).into_owned();
        let w = cpart.norm();
        if best.as_ref().map_or(true, |(bw, _)| w > *bw) {
            best = Some((w, cpart));
        }
    }
    match best {
        Some((w, cpart)) if w > 1e-6 => Ok(Some((&b_mat * cpart).normalize())),
        _ => Ok(None),
    }
}

/// Realized maximal chain lengths over a greedy basis of the pole/zero span.
/// The multiset equals the corresponding partial multiplicities.
pub fn chain_length_multiset(
    f: &RatMat<Complex64>,
    z0: Complex64,
    kind: ChainKind,
) -> Result<Vec<usize>> {
    let span = match kind {
        ChainKind::Pole => pole_vectors(f, z0)?,
        ChainKind::Zero => eigenvectors(f, z0)?,
    };
    if span.is_empty() {
        return Ok(Vec::new());
    }
    let g = match kind {
        ChainKind::Pole => f.inverse()?,
        ChainKind::Zero => f.clone(),
    };
    let qg = pole_order_bound(&g, z0) as i64;
    let mut cap: i64 = {
        let dv = det_valuation(f, z0).unwrap_or(0).abs();
        (dv + qg + 1).max(1)
    };
    let mut remaining = span;
    let mut lengths = Vec::new();
    while !remaining.is_empty() {
        // greedy: longest feasible chain with a start inside the remaining span
        let mut found = None;
        let mut l = cap;
        while l >= 1 {
            if let Some(start) = chain_start_in_subspace(&g, z0, &remaining, l, qg)? {
                found = Some((l as usize, start));
                break;
            }
            l -= 1;
        }
        match found {
            Some((l, start)) => {
                lengths.push(l);
                cap = l as i64;
                // deflate: orthogonal complement of the start inside the span
                let mut next = Vec::new();
                for b in &remaining {
                    let coef = start.dotc(b);
                    let v = b - &start * coef;
                    if v.norm() > 1e-8 {
                        let mut w = v;
                        for p in &next {
                            let c2: Complex64 = <DVector<Complex64>>::dotc(p, &w);
                            w -= p * c2;
                        }
                        if w.norm() > 1e-8 {
                            next.push(w.normalize());
                        }
                    }
                }
                remaining = next;
            }
            None => break,
        }
    }
    lengths.sort_unstable();
    Ok(lengths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::coeff::{Coeff, Q};
    use crate::ratmat::Poly;

    fn zm(a: i64) -> Poly<Q> {
        Poly::linear(Q::from_i64(-a), Q::from_i64(1))
    }

    fn inv_pole(a: i64) -> RatScalar<Q> {
        RatScalar::new(Poly::constant(Q::from_i64(1)), zm(a)).unwrap()
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn diagonal_pole_structure() {
        // diag(1/(z-1), 1) at 1 -> r = (-1, 0)
        let f = RatMat::diag(vec![inv_pole(1), RatScalar::one()]).to_float();
        let d = local_smith(&f, one()).unwrap();
        assert_eq!(d.partial_mults, vec![-1, 0]);
        assert_eq!(d.pole_basis.len(), 1);
        assert!((d.pole_basis[0][0].norm() - 1.0).abs() < 1e-9);
        assert!(d.pole_basis[0][1].norm() < 1e-9);
    }

    #[test]
    fn diagonal_zero_structure() {
        // diag(z-1, (z-1)^2) at 1 -> r = (1, 2)
        let f = RatMat::diag(vec![
            RatScalar::from_poly(zm(1)),
            RatScalar::from_poly(zm(1).pow(2)),
        ])
        .to_float();
        let d = local_smith(&f, one()).unwrap();
        assert_eq!(d.partial_mults, vec![1, 2]);
        assert_eq!(d.zero_basis.len(), 2);
        assert!(d.pole_basis.is_empty());
    }

    #[test]
    fn mixed_structure_frozen_oracle() {
        // [[1/(z-1), 1], [0, z-1]] at 1: local Smith diag((z-1)^{-1}, (z-1)),
        // r = (-1, 1), derived by brute-force rank profile of the
        // Laurent-coefficient block-Toeplitz matrices
        let mut f = RatMat::<Q>::zeros(2, 2);
        f.set(0, 0, inv_pole(1));
        f.set(0, 1, RatScalar::one());
        f.set(1, 1, RatScalar::from_poly(zm(1)));
        let ff = f.to_float();
        let d = local_smith(&ff, one()).unwrap();
        assert_eq!(d.partial_mults, vec![-1, 1]);
        // pole span is e1 (the only direction blowing up)
        assert_eq!(d.pole_basis.len(), 1);
        assert!(d.pole_basis[0][1].norm() < 1e-8);
    }

    #[test]
    fn identically_singular_is_rejected() {
        let f = RatMat::from_fn(2, 2, |_, c| {
            if c == 0 {
                RatScalar::<Q>::var()
            } else {
                RatScalar::one()
            }
        })
        .to_float();
        assert!(matches!(local_smith(&f, one()), Err(Error::IdenticallySingular)));
    }

    #[test]
    fn pole_vectors_examples() {
        // diag(1/(z-1), 1/(z-1)): span{e1, e2}
        let f = RatMat::diag(vec![inv_pole(1), inv_pole(1)]).to_float();
        let pv = pole_vectors(&f, one()).unwrap();
        assert_eq!(pv.len(), 2);
        // not a pole -> empty
        let g = RatMat::<Q>::identity(2).to_float();
        assert!(pole_vectors(&g, one()).unwrap().is_empty());
    }

    #[test]
    fn eigenvector_examples() {
        // diag(z-1, 1) at 1 -> span{e1}
        let f = RatMat::diag(vec![RatScalar::from_poly(zm(1)), RatScalar::one()]).to_float();
        let ev = eigenvectors(&f, one()).unwrap();
        assert_eq!(ev.len(), 1);
        assert!(ev[0][1].norm() < 1e-9);
        // diag(z-1, z-1) -> span{e1,e2}
        let g = RatMat::diag(vec![
            RatScalar::from_poly(zm(1)),
            RatScalar::from_poly(zm(1)),
        ])
        .to_float();
        assert_eq!(eigenvectors(&g, one()).unwrap().len(), 2);
    }

    #[test]
    fn max_chain_double_pole() {
        // diag(1/(z-1)^2, 1), v = e1 -> pole chain of length 2
        let f = RatMat::diag(vec![
            RatScalar::new(Poly::constant(Q::from_i64(1)), zm(1).pow(2)).unwrap(),
            RatScalar::one(),
        ])
        .to_float();
        let e1 = DVector::from_vec(vec![one(), Complex64::new(0.0, 0.0)]);
        let chain = max_chain(&f, one(), &e1, ChainKind::Pole).unwrap();
        assert_eq!(chain.len(), 2);
    }

    #[test]
    fn max_chain_zero_kind() {
        // diag(z-1, 1), v = e1, kind=zero -> length 1
        let f = RatMat::diag(vec![RatScalar::from_poly(zm(1)), RatScalar::one()]).to_float();
        let e1 = DVector::from_vec(vec![one(), Complex64::new(0.0, 0.0)]);
        let chain = max_chain(&f, one(), &e1, ChainKind::Zero).unwrap();
        assert_eq!(chain.len(), 1);
    }

    #[test]
    fn max_chain_sentinel_for_bad_start() {
        // diag(1/(z-1), 1), v = e2 is not a pole vector -> length 0 sentinel
        let f = RatMat::diag(vec![inv_pole(1), RatScalar::one()]).to_float();
        let e2 = DVector::from_vec(vec![Complex64::new(0.0, 0.0), one()]);
        let chain = max_chain(&f, one(), &e2, ChainKind::Pole).unwrap();
        assert!(chain.is_empty());
        // zero vector is an error
        let zero = DVector::from_vec(vec![Complex64::new(0.0, 0.0); 2]);
        assert!(matches!(
            max_chain(&f, one(), &zero, ChainKind::Pole),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn chain_multiset_matches_multiplicities() {
        // diag(1/(z-1)^2, 1/(z-1)): pole mults {2, 1}
        let f = RatMat::diag(vec![
            RatScalar::new(Poly::constant(Q::from_i64(1)), zm(1).pow(2)).unwrap(),
            inv_pole(1),
        ])
        .to_float();
        let lengths = chain_length_multiset(&f, one(), ChainKind::Pole).unwrap();
        assert_eq!(lengths, vec![1, 2]);
    }
}
