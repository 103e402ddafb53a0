//! Rectangular matrices of reduced rational scalar functions: the universal
//! carrier for the meromorphic matrix functions handled by this crate.

use super::coeff::Coeff;
use super::poly::Poly;
use super::rational::RatScalar;
use super::roots::{multiplicity_at, poly_from_roots, poly_roots, ROOT_CLUSTER_TOL};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::fmt;

/// Poles of a matrix function: distinct points with their maximal entry order,
/// sorted by ascending modulus, ties by ascending argument in [0, 2pi).
#[derive(Clone, Debug, PartialEq)]
pub struct PoleList {
    pub poles: Vec<(Complex64, usize)>,
}

impl PoleList {
    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    /// The pole nearest to the origin (ties broken by argument).
    pub fn nearest_origin(&self) -> Option<(Complex64, usize)> {
        self.poles.first().copied()
    }

    pub fn order_at(&self, point: Complex64) -> usize {
        multiplicity_at(&self.poles, point, ROOT_CLUSTER_TOL)
    }

    fn sort(&mut self) {
        self.poles.sort_by(|a, b| {
            let ma = a.0.norm();
            let mb = b.0.norm();
            ma.partial_cmp(&mb)
                .unwrap()
                .then_with(|| arg_02pi(a.0).partial_cmp(&arg_02pi(b.0)).unwrap())
        });
    }
}

fn arg_02pi(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * std::f64::consts::PI
    } else {
        a
    }
}

#[derive(Clone, PartialEq)]
pub struct RatMat<C: Coeff> {
    rows: usize,
    cols: usize,
    entries: Vec<RatScalar<C>>,
}

impl<C: Coeff> RatMat<C> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RatScalar<C>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        RatMat { rows, cols, entries }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<RatScalar<C>>) -> Result<Self> {
        if entries.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::dim(format!(
                "expected {rows}x{cols} = {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(RatMat { rows, cols, entries })
    }

    pub fn identity(n: usize) -> Self {
        RatMat::from_fn(n, n, |r, c| {
            if r == c {
                RatScalar::one()
            } else {
                RatScalar::zero()
            }
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat::from_fn(rows, cols, |_, _| RatScalar::zero())
    }

    /// Constant matrix from a complex grid, lifted into the field.
    pub fn constant_from_c64(m: &DMatrix<Complex64>) -> Self {
        RatMat::from_fn(m.nrows(), m.ncols(), |r, c| {
            RatScalar::constant(C::from_c64(m[(r, c)]))
        })
    }

    pub fn diag(entries: Vec<RatScalar<C>>) -> Self {
        let n = entries.len();
        RatMat::from_fn(n, n, |r, c| {
            if r == c {
                entries[r].clone()
            } else {
                RatScalar::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &RatScalar<C> {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RatScalar<C>) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn map(&self, f: impl Fn(&RatScalar<C>) -> RatScalar<C>) -> Self {
        RatMat::from_fn(self.rows, self.cols, |r, c| f(self.at(r, c)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim(format!(
                "add {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(RatMat::from_fn(self.rows, self.cols, |r, c| {
            self.at(r, c).add(other.at(r, c))
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|e| e.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "mul {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(RatMat::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = RatScalar::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.at(r, k).mul(other.at(k, c)));
            }
            acc
        }))
    }

    pub fn scale(&self, s: &RatScalar<C>) -> Self {
        self.map(|e| e.mul(s))
    }

    pub fn scale_coeff(&self, c: &C) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn transpose(&self) -> Self {
        RatMat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    /// The involution A#(z) = A(conj z)^*: conjugate coefficients, transpose.
    pub fn sharp(&self) -> Self {
        RatMat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).sharp())
    }

    pub fn trace(&self) -> Result<RatScalar<C>> {
        if !self.is_square() {
            return Err(Error::dim("trace of non-square matrix"));
        }
        let mut acc = RatScalar::zero();
        for k in 0..self.rows {
            acc = acc.add(self.at(k, k));
        }
        Ok(acc)
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols);
        RatMat::from_fn(h, w, |r, c| self.at(r0 + r, c0 + c).clone())
    }

    pub fn from_blocks(blocks: [[&RatMat<C>; 2]; 2]) -> Result<Self> {
        let h0 = blocks[0][0].rows;
        let h1 = blocks[1][0].rows;
        let w0 = blocks[0][0].cols;
        let w1 = blocks[0][1].cols;
        for (r, row) in blocks.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                let (eh, ew) = (if r == 0 { h0 } else { h1 }, if c == 0 { w0 } else { w1 });
                if b.rows != eh || b.cols != ew {
                    return Err(Error::dim("inconsistent block sizes"));
                }
            }
        }
        Ok(RatMat::from_fn(h0 + h1, w0 + w1, |r, c| {
            let (br, rr) = if r < h0 { (0, r) } else { (1, r - h0) };
            let (bc, cc) = if c < w0 { (0, c) } else { (1, c - w0) };
            blocks[br][bc].at(rr, cc).clone()
        }))
    }

    pub fn is_polynomial(&self) -> bool {
        self.entries.iter().all(|e| e.is_polynomial())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Entrywise derivative, reduced.
    pub fn derivative(&self) -> Self {
        self.map(|e| e.derivative())
    }

    /// Numeric evaluation; names the offending pole on failure.
    pub fn eval(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        let mut out = DMatrix::<Complex64>::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self.at(r, c).eval_c64(z)?;
            }
        }
        Ok(out)
    }

    /// Exact evaluation at a point of the coefficient field, as a constant matrix.
    pub fn eval_exact(&self, z: &C) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for e in &self.entries {
            entries.push(RatScalar::constant(e.eval_exact(z)?));
        }
        RatMat::from_entries(self.rows, self.cols, entries)
    }

    /// Union over entries of denominator roots after reduction;
    /// the order of a pole is the maximal order over entries.
    pub fn poles(&self) -> PoleList {
        let mut poles: Vec<(Complex64, usize)> = Vec::new();
        for e in &self.entries {
            if e.is_polynomial() || e.is_zero() {
                continue;
            }
            let den = if C::EXACT {
                e.den().to_float()
            } else {
                e.den().to_float()
            };
            if let Ok(roots) = poly_roots(&den) {
                for (p, m) in roots {
                    if let Some(existing) = poles
                        .iter_mut()
                        .find(|(q, _)| (*q - p).norm() <= ROOT_CLUSTER_TOL * p.norm().max(1.0))
                    {
                        existing.1 = existing.1.max(m);
                    } else {
                        poles.push((p, m));
                    }
                }
            }
        }
        let mut pl = PoleList { poles };
        pl.sort();
        pl
    }

    /// Determinant by fraction-free (Bareiss) elimination on the
    /// common-denominator polynomial matrix.
    pub fn det(&self) -> Result<RatScalar<C>> {
        if !self.is_square() {
            return Err(Error::dim("determinant of non-square matrix"));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(self.at(0, 0).clone());
        }
        let (mut m, den) = self.common_denominator();
        // Bareiss on the polynomial matrix m; det(self) = det(m) / den^n
        let mut prev = Poly::<C>::one();
        let mut sign_flip = false;
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                // pivot search
                let swap = (k + 1..n).find(|&r| !m[r * n + k].is_zero());
                match swap {
                    Some(r) => {
                        for c in 0..n {
                            m.swap(k * n + c, r * n + c);
                        }
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(RatScalar::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = m[i * n + j]
                        .mul(&m[k * n + k])
                        .sub(&m[i * n + k].mul(&m[k * n + j]));
                    m[i * n + j] = t.exact_div(&prev)?;
                }
            }
            for i in k + 1..n {
                m[i * n + k] = Poly::zero();
            }
            prev = m[k * n + k].clone();
        }
        let mut det_poly = m[(n - 1) * n + (n - 1)].clone();
        if sign_flip {
            det_poly = det_poly.neg();
        }
        RatScalar::new(det_poly, den.pow(n))
    }

    /// Clear denominators: returns (polynomial entries, common monic denominator)
    /// with self = entries / den. Exact mode uses the gcd-based lcm; float
    /// mode works on root multisets, since long float deconvolutions are
    /// ill-conditioned.
    pub fn common_denominator(&self) -> (Vec<Poly<C>>, Poly<C>) {
        if C::EXACT {
            let mut den = Poly::<C>::one();
            for e in &self.entries {
                let g = den.gcd(e.den());
                den = den.mul(&e.den().exact_div(&g).expect("gcd divides"));
            }
            let den = den.monic().expect("nonzero");
            let entries = self
                .entries
                .iter()
                .map(|e| {
                    let extra = den.exact_div(e.den()).expect("den divides common den");
                    e.num().mul(&extra)
                })
                .collect();
            return (entries, den);
        }
        // float: union of denominator root multisets, extras by multiset difference
        let entry_roots: Vec<Vec<(Complex64, usize)>> = self
            .entries
            .iter()
            .map(|e| {
                if e.den().degree().unwrap_or(0) == 0 {
                    Vec::new()
                } else {
                    poly_roots(e.den()).expect("nonzero denominator")
                }
            })
            .collect();
        let mut union: Vec<(Complex64, usize)> = Vec::new();
        for roots in &entry_roots {
            for (p, m) in roots {
                match union
                    .iter_mut()
                    .find(|(q, _)| (*q - p).norm() <= ROOT_CLUSTER_TOL * p.norm().max(1.0))
                {
                    Some(entry) => entry.1 = entry.1.max(*m),
                    None => union.push((*p, *m)),
                }
            }
        }
        let lift = |p: &Poly<Complex64>| -> Poly<C> {
            Poly::new(p.coeffs().iter().map(|x| C::from_c64(*x)).collect())
        };
        let den = lift(&poly_from_roots(Complex64::new(1.0, 0.0), &union));
        let entries = self
            .entries
            .iter()
            .zip(entry_roots.iter())
            .map(|(e, roots)| {
                let mut diff = union.clone();
                for (p, m) in roots {
                    if let Some(entry) = diff
                        .iter_mut()
                        .find(|(q, _)| (*q - p).norm() <= ROOT_CLUSTER_TOL * p.norm().max(1.0))
                    {
                        entry.1 = entry.1.saturating_sub(*m);
                    }
                }
                diff.retain(|(_, m)| *m > 0);
                let extra = lift(&poly_from_roots(Complex64::new(1.0, 0.0), &diff));
                e.num().mul(&extra)
            })
            .collect();
        (entries, den)
    }

    /// Exact inverse. Adjugate route for small sizes, Gauss-Jordan over the
    /// rational function field beyond. Identically singular matrices yield a
    /// certifying polynomial null vector.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::dim("inverse of non-square matrix"));
        }
        let n = self.rows;
        if n <= 3 {
            return self.inverse_adjugate();
        }
        self.inverse_gauss()
    }

    fn inverse_adjugate(&self) -> Result<Self> {
        let n = self.rows;
        let det = self.det()?;
        if det.is_zero() {
            return Err(self.singular_error());
        }
        let det_inv = det.recip()?;
        if n == 1 {
            return Ok(RatMat::from_fn(1, 1, |_, _| det_inv.clone()));
        }
        let minor = |r: usize, c: usize| -> RatMat<C> {
            RatMat::from_fn(n - 1, n - 1, |i, j| {
                let ri = if i < r { i } else { i + 1 };
                let cj = if j < c { j } else { j + 1 };
                self.at(ri, cj).clone()
            })
        };
        Ok(RatMat::from_fn(n, n, |r, c| {
            // adj(A)[r][c] = (-1)^{r+c} det(minor(c, r))
            let m = minor(c, r).det().expect("square");
            let signed = if (r + c) % 2 == 0 { m } else { m.neg() };
            signed.mul(&det_inv)
        }))
    }

    fn inverse_gauss(&self) -> Result<Self> {
        let n = self.rows;
        let mut a: Vec<RatScalar<C>> = self.entries.clone();
        let mut inv: Vec<RatScalar<C>> = RatMat::<C>::identity(n).entries;
        for col in 0..n {
            // pivot: prefer the lowest combined degree among nonzero candidates
            let pivot = (col..n)
                .filter(|&r| !a[r * n + col].is_zero())
                .min_by_key(|&r| {
                    let e = &a[r * n + col];
                    e.num().degree().unwrap_or(0) + e.den().degree().unwrap_or(0)
                });
            let pivot = match pivot {
                Some(p) => p,
                None => return Err(self.singular_error()),
            };
            if pivot != col {
                for c in 0..n {
                    a.swap(col * n + c, pivot * n + c);
                    inv.swap(col * n + c, pivot * n + c);
                }
            }
            let pinv = a[col * n + col].recip()?;
            for c in 0..n {
                a[col * n + c] = a[col * n + c].mul(&pinv);
                inv[col * n + c] = inv[col * n + c].mul(&pinv);
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].clone();
                for c in 0..n {
                    a[r * n + c] = a[r * n + c].sub(&factor.mul(&a[col * n + c]));
                    inv[r * n + c] = inv[r * n + c].sub(&factor.mul(&inv[col * n + c]));
                }
            }
        }
        RatMat::from_entries(n, n, inv)
    }

    fn singular_error(&self) -> Error {
        match self.null_vector() {
            Ok(v) => {
                let desc: Vec<String> = v.iter().map(|p| format!("{p}")).collect();
                Error::SingularMatrix { null_vector: format!("[{}]", desc.join(", ")) }
            }
            Err(_) => Error::SingularMatrix { null_vector: "<unavailable>".into() },
        }
    }

    /// A polynomial null vector of an identically singular square matrix.
    pub fn null_vector(&self) -> Result<Vec<Poly<C>>> {
        let n = self.rows;
        let mut a: Vec<RatScalar<C>> = self.entries.clone();
        // forward elimination with column bookkeeping
        let mut pivot_col_of_row: Vec<Option<usize>> = vec![None; n];
        let mut used_cols = vec![false; n];
        let mut rank = 0usize;
        for _ in 0..n {
            let mut found = None;
            'search: for col in 0..n {
                if used_cols[col] {
                    continue;
                }
                for row in rank..n {
                    if !a[row * n + col].is_zero() {
                        found = Some((row, col));
                        break 'search;
                    }
                }
            }
            let (prow, pcol) = match found {
                Some(x) => x,
                None => break,
            };
            if prow != rank {
                for c in 0..n {
                    a.swap(rank * n + c, prow * n + c);
                }
            }
            let pinv = a[rank * n + pcol].recip()?;
            for c in 0..n {
                a[rank * n + c] = a[rank * n + c].mul(&pinv);
            }
            for r in 0..n {
                if r == rank || a[r * n + pcol].is_zero() {
                    continue;
                }
                let f = a[r * n + pcol].clone();
                for c in 0..n {
                    a[r * n + c] = a[r * n + c].sub(&f.mul(&a[rank * n + c]));
                }
            }
            pivot_col_of_row[rank] = Some(pcol);
            used_cols[pcol] = true;
            rank += 1;
        }
        if rank == n {
            return Err(Error::pre("matrix is not singular"));
        }
        let free_col = (0..n).find(|c| !used_cols[*c]).expect("free column exists");
        // null vector: x[free] = 1, x[pivot_col] = -a[row][free]
        let mut x = vec![RatScalar::zero(); n];
        x[free_col] = RatScalar::one();
        for row in 0..rank {
            let pc = pivot_col_of_row[row].unwrap();
            x[pc] = a[row * n + free_col].neg();
        }
        // clear denominators to a polynomial vector
        let mut common = Poly::<C>::one();
        for e in &x {
            if C::EXACT {
                let g = common.gcd(e.den());
                common = common.mul(&e.den().exact_div(&g).expect("gcd divides"));
            } else {
                common = common.mul(e.den());
            }
        }
        Ok(x.iter()
            .map(|e| {
                let extra = common.exact_div(e.den()).expect("divides");
                e.num().mul(&extra)
            })
            .collect())
    }

    /// Equality as rational matrices (cross-multiplied, exact in exact mode).
    pub fn equals(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .entries
                .iter()
                .zip(other.entries.iter())
                .all(|(a, b)| a.equals(b, tol))
    }

    pub fn to_float(&self) -> RatMat<Complex64> {
        RatMat::from_fn(self.rows, self.cols, |r, c| self.at(r, c).to_float())
    }

    /// Maximal numerator/denominator degree over entries.
    pub fn max_degree(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.num().degree().unwrap_or(0).max(e.den().degree().unwrap_or(0)))
            .max()
            .unwrap_or(0)
    }
}

impl<C: Coeff> fmt::Debug for RatMat<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}; ", self.at(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::coeff::Q;

    fn zvar() -> RatScalar<Q> {
        RatScalar::var()
    }

    fn c(n: i64) -> RatScalar<Q> {
        RatScalar::constant(Q::from_i64(n))
    }

    fn inv_z_minus(a: i64) -> RatScalar<Q> {
        RatScalar::new(
            Poly::constant(Q::from_i64(1)),
            Poly::linear(Q::from_i64(-a), Q::from_i64(1)),
        )
        .unwrap()
    }

    #[test]
    fn add_identity_and_zero() {
        let i2 = RatMat::<Q>::identity(2);
        let z = RatMat::<Q>::zeros(2, 2);
        assert!(i2.add(&z).unwrap().equals(&i2, 0.0));
    }

    #[test]
    fn mul_diagonals() {
        let a = RatMat::diag(vec![zvar(), c(1)]);
        let b = RatMat::diag(vec![c(1), zvar()]);
        let prod = a.mul(&b).unwrap();
        let expect = RatMat::diag(vec![zvar(), zvar()]);
        assert!(prod.equals(&expect, 0.0));
    }

    #[test]
    fn dimension_mismatch_errors() {
        let a = RatMat::<Q>::identity(2);
        let b = RatMat::<Q>::zeros(3, 3);
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch(_))));
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn inverse_of_unimodular_polynomial_matrix() {
        // [[1, z], [0, 1]]^{-1} = [[1, -z], [0, 1]]
        let mut a = RatMat::<Q>::identity(2);
        a.set(0, 1, zvar());
        let inv = a.inverse().unwrap();
        assert!(inv.at(0, 1).equals(&zvar().neg(), 0.0));
        let prod = a.mul(&inv).unwrap();
        assert!(prod.equals(&RatMat::identity(2), 0.0));
    }

    #[test]
    fn inverse_of_diag_z_one() {
        let a = RatMat::diag(vec![zvar(), c(1)]);
        let inv = a.inverse().unwrap();
        let expect = RatMat::diag(vec![zvar().recip().unwrap(), c(1)]);
        assert!(inv.equals(&expect, 0.0));
    }

    #[test]
    fn singular_matrix_yields_null_vector() {
        // rows are equal -> singular; null vector certifies A v = 0
        let a = RatMat::from_fn(2, 2, |_, c| if c == 0 { zvar() } else { c64one() });
        let err = a.inverse().unwrap_err();
        assert!(matches!(err, Error::SingularMatrix { .. }));
        let v = a.null_vector().unwrap();
        // check A v = 0 exactly
        for r in 0..2 {
            let mut acc = RatScalar::<Q>::zero();
            for k in 0..2 {
                acc = acc.add(&a.at(r, k).mul(&RatScalar::from_poly(v[k].clone())));
            }
            assert!(acc.is_zero());
        }
    }

    fn c64one() -> RatScalar<Q> {
        RatScalar::one()
    }

    #[test]
    fn sharp_is_involution() {
        let a = RatMat::from_fn(2, 2, |r, cidx| {
            if r == 0 && cidx == 0 {
                RatScalar::from_poly(Poly::linear(Q::i(), Q::from_i64(1)))
            } else {
                inv_z_minus(1)
            }
        });
        assert!(a.sharp().sharp().equals(&a, 0.0));
    }

    #[test]
    fn eval_matrix() {
        // [[z,1],[-1,0]] at 0 -> [[0,1],[-1,0]]
        let mut a = RatMat::<Q>::zeros(2, 2);
        a.set(0, 0, zvar());
        a.set(0, 1, c(1));
        a.set(1, 0, c(-1));
        let v = a.eval(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v[(0, 0)]).norm() < 1e-14);
        assert!((v[(0, 1)] - 1.0).norm() < 1e-14);
        assert!((v[(1, 0)] + 1.0).norm() < 1e-14);
    }

    #[test]
    fn poles_after_reduction() {
        // [[1/(z-1), 1], [0, z-1]] has a single simple pole at 1
        let mut a = RatMat::<Q>::identity(2);
        a.set(0, 0, inv_z_minus(1));
        a.set(1, 1, RatScalar::from_poly(Poly::linear(Q::from_i64(-1), Q::from_i64(1))));
        let poles = a.poles();
        assert_eq!(poles.len(), 1);
        assert!((poles.poles[0].0 - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert_eq!(poles.poles[0].1, 1);
        // a polynomial matrix has no poles
        assert!(RatMat::<Q>::identity(3).poles().is_empty());
    }

    #[test]
    fn det_bareiss() {
        // det [[z, 1], [-1, 0]] = 1
        let mut a = RatMat::<Q>::zeros(2, 2);
        a.set(0, 0, zvar());
        a.set(0, 1, c(1));
        a.set(1, 0, c(-1));
        let d = a.det().unwrap();
        assert!(d.equals(&c(1), 0.0));
        // det diag(1/(z-1), z-1) = 1
        let b = RatMat::diag(vec![
            inv_z_minus(1),
            RatScalar::from_poly(Poly::linear(Q::from_i64(-1), Q::from_i64(1))),
        ]);
        assert!(b.det().unwrap().equals(&c(1), 0.0));
    }

    #[test]
    fn gauss_inverse_larger_matrix() {
        // 4x4 with rational entries: check A * A^{-1} = I exactly
        let a = RatMat::from_fn(4, 4, |r, cidx| {
            if r == cidx {
                zvar().add(&c(r as i64 + 1))
            } else if (r + cidx) % 2 == 0 {
                c(1)
            } else {
                inv_z_minus(-((r + cidx) as i64) - 1)
            }
        });
        let inv = a.inverse().unwrap();
        let prod = a.mul(&inv).unwrap();
        assert!(prod.equals(&RatMat::identity(4), 0.0));
    }
}
