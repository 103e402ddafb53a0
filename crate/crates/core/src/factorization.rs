//! Entire-factor extraction for meromorphic matrix functions.
//!
//! One factorization step picks the pole nearest the origin, projects onto
//! the span of its pole vectors and multiplies by I - (z/z_k) P_k, which
//! lowers every partial pole multiplicity there by one. Iterating over a
//! finite pole set yields an entire product P(z) with G = P * F entire and
//! det P vanishing only at the processed poles. The same step applied with
//! the union of the pole-vector spans factors several functions at once
//! with a single common left factor.
//!
//! Two modes: `Plain` keeps every stored object rational; `WithExp` attaches
//! the exponential convergence factors exp(sum_{j<=k} (z/z_k)^j / j * P_k)
//! that an infinite product would need. For finite pole sets the two differ
//! by an invertible entire factor and the plain mode is the default.
//!
//! The pipeline runs in float mode; numeric roots are unavoidable here.

use crate::error::{Error, Result};
use crate::localstruct::{local_smith, pole_order_bound, pole_vectors};
use crate::ratmat::{Poly, RatMat, RatScalar};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Hermitian-idempotent acceptance for stored projections.
pub const PROJECTION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorMode {
    Plain,
    WithExp,
}

/// One factor of the entire product: at step k (1-based) the factor is
/// [I + (e^{s_k(z)} - 1) P_k] [I - (z/z_k) P_k] in exponential mode with
/// s_k(z) = sum_{j=1..k} (z/z_k)^j / j, and just [I - (z/z_k) P_k] in plain
/// mode. Evaluation uses exp(sP) = I + (e^s - 1)P for idempotent P.
#[derive(Clone, Debug)]
pub struct ProjFactor {
    pub point: Complex64,
    pub projection: DMatrix<Complex64>,
    pub order: usize,
    pub exp_mode: bool,
}

impl ProjFactor {
    pub fn new(
        point: Complex64,
        projection: DMatrix<Complex64>,
        order: usize,
        exp_mode: bool,
    ) -> Result<Self> {
        if point.norm() == 0.0 {
            return Err(Error::PoleAtOrigin);
        }
        let p2 = &projection * &projection;
        let herm = projection.adjoint();
        let scale = projection.norm().max(1.0);
        if (&p2 - &projection).norm() > PROJECTION_TOL * scale
            || (&herm - &projection).norm() > PROJECTION_TOL * scale
        {
            return Err(Error::pre("projection must be Hermitian idempotent"));
        }
        Ok(ProjFactor { point, projection, order, exp_mode })
    }

    pub fn dim(&self) -> usize {
        self.projection.nrows()
    }

    pub fn eval(&self, z: Complex64) -> DMatrix<Complex64> {
        let n = self.dim();
        let id = DMatrix::<Complex64>::identity(n, n);
        let linear = &id - &self.projection * (z / self.point);
        if !self.exp_mode {
            return linear;
        }
        let ratio = z / self.point;
        let mut s = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for j in 1..=self.order {
            pw *= ratio;
            s += pw / (j as f64);
        }
        let expm = &id + &self.projection * (s.exp() - Complex64::new(1.0, 0.0));
        expm * linear
    }

    /// The rational (polynomial) part I - (z/z_k) P_k.
    pub fn rational_part(&self) -> RatMat<Complex64> {
        let n = self.dim();
        let zfac = RatScalar::from_poly(Poly::linear(
            Complex64::new(0.0, 0.0),
            -Complex64::new(1.0, 0.0) / self.point,
        ));
        let mut out = RatMat::<Complex64>::identity(n);
        for r in 0..n {
            for c in 0..n {
                let p = self.projection[(r, c)];
                if p.norm() > 0.0 {
                    let term = zfac.scale(&p);
                    out.set(r, c, out.at(r, c).add(&term));
                }
            }
        }
        out
    }
}

/// Ordered list of projection factors; the factor from step k multiplies on
/// the left of everything produced before it, so evaluation folds from the
/// first factor outward. Every factor is the identity at the origin.
#[derive(Clone, Debug, Default)]
pub struct EntireProduct {
    pub factors: Vec<ProjFactor>,
}

impl EntireProduct {
    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn eval(&self, z: Complex64, n: usize) -> DMatrix<Complex64> {
        let mut acc = DMatrix::<Complex64>::identity(n, n);
        for f in &self.factors {
            acc = f.eval(z) * acc;
        }
        acc
    }

    /// Product of the rational parts (the full value in plain mode).
    pub fn rational_part(&self, n: usize) -> RatMat<Complex64> {
        let mut acc = RatMat::<Complex64>::identity(n);
        for f in &self.factors {
            acc = f.rational_part().mul(&acc).expect("square");
        }
        acc
    }
}

/// Result of factorize: product * base is entire.
#[derive(Clone, Debug)]
pub struct FactoredForm {
    pub product: EntireProduct,
    pub base: RatMat<Complex64>,
    /// Per-step multiplicity bookkeeping (point, pole mults before, after).
    pub steps: Vec<StepRecord>,
}

#[derive(Clone, Debug)]
pub struct StepRecord {
    pub point: Complex64,
    pub mults_before: Vec<u64>,
    pub mults_after: Vec<u64>,
}

impl FactoredForm {
    /// The rational part of product * base; entire (empty pole list) when the
    /// factorization succeeded.
    pub fn entire_part(&self) -> Result<RatMat<Complex64>> {
        self.product.rational_part(self.base.rows()).mul(&self.base)
    }

    pub fn eval(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        Ok(self.product.eval(z, self.base.rows()) * self.base.eval(z)?)
    }
}

/// Orthogonal projection onto the span of the given orthonormal vectors.
/// Entries at machine-noise level are zeroed: an orthoprojector has norm one,
/// and noise entries would otherwise survive reduction as fake poles.
fn projection_onto(basis: &[DVector<Complex64>], n: usize) -> DMatrix<Complex64> {
    let mut p = DMatrix::<Complex64>::zeros(n, n);
    for b in basis {
        p += b * b.adjoint();
    }
    p.map(|x| if x.norm() <= 1e-12 { Complex64::new(0.0, 0.0) } else { x })
}

/// One reduction step at a prescribed pole: returns the plain projection
/// factor and the reduced function (I - (z/z0) P0) F. The partial pole
/// multiplicities drop from |k_j| to the nonzero |k_j + 1|.
pub fn step_reduce(
    f: &RatMat<Complex64>,
    z0: Complex64,
) -> Result<(ProjFactor, RatMat<Complex64>)> {
    if z0.norm() == 0.0 {
        return Err(Error::PoleAtOrigin);
    }
    if pole_order_bound(f, z0) == 0 {
        return Err(Error::NotAPole { point: z0 });
    }
    let span = pole_vectors(f, z0)?;
    if span.is_empty() {
        return Err(Error::NotAPole { point: z0 });
    }
    let p = projection_onto(&span, f.rows());
    let factor = ProjFactor::new(z0, p, 1, false)?;
    let reduced = factor.rational_part().mul(f)?;
    Ok((factor, reduced))
}

fn pick_pole(fs: &[&RatMat<Complex64>]) -> Option<Complex64> {
    let mut best: Option<(Complex64, usize)> = None;
    for f in fs {
        if let Some((p, m)) = f.poles().nearest_origin() {
            match best {
                None => best = Some((p, m)),
                Some((q, _)) => {
                    let (mp, mq) = (p.norm(), q.norm());
                    let closer = mp < mq - 1e-12 * mq.max(1.0)
                        || ((mp - mq).abs() <= 1e-12 * mq.max(1.0)
                            && arg_02pi(p) < arg_02pi(q));
                    if closer {
                        best = Some((p, m));
                    }
                }
            }
        }
    }
    best.map(|(p, _)| p)
}

fn arg_02pi(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * std::f64::consts::PI
    } else {
        a
    }
}

/// Entire-factor extraction for a single function with finitely many poles
/// and det F(0) != 0. Poles are processed by ascending modulus (ties by
/// ascending argument); a pole that survives a step with lower multiplicity
/// is re-selected immediately.
pub fn factorize(f: &RatMat<Complex64>, mode: FactorMode) -> Result<FactoredForm> {
    let (product, reduced) = cofactorize_impl(&[f], mode, true)?;
    Ok(FactoredForm { product, base: f.clone(), steps: reduced.steps })
}

/// Simultaneous factorization: one entire product P with every P * F_i
/// entire. Each step projects onto the span of the union of the individual
/// pole-vector spans. Functions may be identically singular (blocks of a
/// larger matrix routinely are); they only need to be pole-free at the
/// origin, since a singular block contributes its pole span all the same.
pub fn cofactorize(
    fs: &[RatMat<Complex64>],
    mode: FactorMode,
) -> Result<(EntireProduct, Vec<RatMat<Complex64>>)> {
    let refs: Vec<&RatMat<Complex64>> = fs.iter().collect();
    let (product, out) = cofactorize_impl(&refs, mode, false)?;
    Ok((product, out.currents))
}

struct CofactorOut {
    currents: Vec<RatMat<Complex64>>,
    steps: Vec<StepRecord>,
}

fn cofactorize_impl(
    fs: &[&RatMat<Complex64>],
    mode: FactorMode,
    track_mults: bool,
) -> Result<(EntireProduct, CofactorOut)> {
    if fs.is_empty() {
        return Err(Error::pre("no functions to factorize"));
    }
    let n = fs[0].rows();
    for f in fs {
        if !f.is_square() || f.rows() != n {
            return Err(Error::dim("cofactorize needs square matrices of a common size"));
        }
        if pole_order_bound(f, Complex64::new(0.0, 0.0)) > 0 {
            return Err(Error::PoleAtOrigin);
        }
    }
    // det F(0) != 0 is the theorem hypothesis for the multiplicity law; the
    // origin check itself only needs F analytic there
    if track_mults {
        let det0 = fs[0].det()?;
        if det0.is_zero() {
            return Err(Error::IdenticallySingular);
        }
        let v0 = det0.eval_c64(Complex64::new(0.0, 0.0))?;
        if v0.norm() <= 1e-12 {
            return Err(Error::SingularAtOrigin);
        }
    }

    let mut currents: Vec<RatMat<Complex64>> = fs.iter().map(|f| (*f).clone()).collect();
    let mut factors: Vec<ProjFactor> = Vec::new();
    let mut steps: Vec<StepRecord> = Vec::new();
    let exp_mode = mode == FactorMode::WithExp;

    let total_order: usize = currents
        .iter()
        .map(|f| f.poles().poles.iter().map(|(_, m)| m * n).sum::<usize>())
        .sum();
    let max_steps = total_order + 1;

    for step in 1..=max_steps {
        let refs: Vec<&RatMat<Complex64>> = currents.iter().collect();
        let z0 = match pick_pole(&refs) {
            Some(p) => p,
            None => break,
        };
        if z0.norm() <= 1e-12 {
            return Err(Error::PoleAtOrigin);
        }
        // union of the pole-vector spans
        let mut stacked: Vec<DVector<Complex64>> = Vec::new();
        for f in &currents {
            if pole_order_bound(f, z0) > 0 {
                stacked.extend(pole_vectors(f, z0)?);
            }
        }
        if stacked.is_empty() {
            return Err(Error::Internal(format!(
                "pole at {z0} reported but no pole vectors found"
            )));
        }
        let span = orthonormalize(&stacked, n);
        let p = projection_onto(&span, n);
        let factor = ProjFactor::new(z0, p, step, exp_mode)?;

        let mults_before = if track_mults {
            local_smith(&currents[0], z0)?.pole_mults()
        } else {
            Vec::new()
        };

        let rational = factor.rational_part();
        for cur in currents.iter_mut() {
            *cur = rational.mul(cur)?;
        }

        if track_mults {
            let after = if pole_order_bound(&currents[0], z0) > 0 {
                local_smith(&currents[0], z0)?.pole_mults()
            } else {
                Vec::new()
            };
            steps.push(StepRecord { point: z0, mults_before, mults_after: after });
        }

        factors.push(factor);
    }

    // every pole must be gone
    for cur in &currents {
        let left = cur.poles();
        if !left.is_empty() {
            return Err(Error::Internal(format!(
                "factorization left poles behind: {:?}",
                left.poles
            )));
        }
    }

    Ok((EntireProduct { factors }, CofactorOut { currents, steps }))
}

/// Orthonormalize a spanning set via the SVD column space.
fn orthonormalize(vectors: &[DVector<Complex64>], n: usize) -> Vec<DVector<Complex64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut m = DMatrix::<Complex64>::zeros(n, vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        m.set_column(k, v);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.as_ref().expect("u requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut out = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if smax > 0.0 && *s > 1e-9 * smax {
            out.push(u.column(k).into_owned());
        }
    }
    out
}

/// Norm of the contour-integrated residue of F around `point`, radius 1e-3,
/// 64-point trapezoid. Near zero for a function analytic at the point.
pub fn residue_norm(f: &RatMat<Complex64>, point: Complex64) -> Result<f64> {
    let radius = 1e-3;
    let samples = 64;
    let n = f.rows();
    let m = f.cols();
    let mut acc = DMatrix::<Complex64>::zeros(n, m);
    for k in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (samples as f64);
        let dir = Complex64::new(theta.cos(), theta.sin());
        let z = point + dir * radius;
        let val = f.eval(z)?;
        // dz = i r e^{i theta} dtheta; trapezoid over uniform theta
        acc += val * (Complex64::new(0.0, 1.0) * dir * radius);
    }
    acc /= Complex64::new(samples as f64, 0.0);
    Ok(acc.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::coeff::{Coeff, Q};

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn inv_pole(a: Complex64) -> RatScalar<Complex64> {
        RatScalar::new(
            Poly::constant(one()),
            Poly::linear(-a, one()),
        )
        .unwrap()
    }

    #[test]
    fn factor_is_identity_at_origin() {
        let p = DMatrix::<Complex64>::from_diagonal_element(2, 2, one());
        let f = ProjFactor::new(Complex64::new(1.0, 2.0), p, 3, true).unwrap();
        let v = f.eval(Complex64::new(0.0, 0.0));
        assert!((v - DMatrix::<Complex64>::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn zero_projection_gives_identity_everywhere() {
        let p = DMatrix::<Complex64>::zeros(2, 2);
        let f = ProjFactor::new(one(), p, 1, true).unwrap();
        for z in [Complex64::new(3.0, -2.0), Complex64::new(-1.0, 5.0)] {
            assert!((f.eval(z) - DMatrix::<Complex64>::identity(2, 2)).norm() < 1e-12);
        }
    }

    #[test]
    fn scalar_exp_factor_matches_closed_form() {
        // n=1, P=1, z1=1, k=1, exp mode: e^z (1 - z); at z=1 the value is 0
        let p = DMatrix::<Complex64>::from_element(1, 1, one());
        let f = ProjFactor::new(one(), p, 1, true).unwrap();
        let at1 = f.eval(one());
        assert!(at1.norm() < 1e-12);
        let z = Complex64::new(0.3, 0.7);
        let expect = z.exp() * (Complex64::new(1.0, 0.0) - z);
        assert!((f.eval(z)[(0, 0)] - expect).norm() < 1e-12);
    }

    #[test]
    fn step_reduce_simple_pole() {
        // diag(1/(z-1), 1) -> (I - z P) F = diag((1-z)/(z-1), 1) = diag(-1, 1)
        let f = RatMat::diag(vec![inv_pole(one()), RatScalar::one()]);
        let (factor, reduced) = step_reduce(&f, one()).unwrap();
        assert_eq!(factor.order, 1);
        assert!(reduced.poles().is_empty());
        let v = reduced.eval(Complex64::new(5.0, 1.0)).unwrap();
        assert!((v[(0, 0)] + one()).norm() < 1e-10);
        assert!((v[(1, 1)] - one()).norm() < 1e-10);
    }

    #[test]
    fn step_reduce_double_pole_drops_one_order() {
        let f = RatMat::diag(vec![
            RatScalar::new(Poly::constant(one()), Poly::linear(-one(), one()).pow(2)).unwrap(),
            RatScalar::one(),
        ]);
        let (_, reduced) = step_reduce(&f, one()).unwrap();
        let d = local_smith(&reduced, one()).unwrap();
        assert_eq!(d.pole_mults(), vec![1]);
    }

    #[test]
    fn step_reduce_rejects_non_pole() {
        let f = RatMat::<Complex64>::identity(2);
        assert!(matches!(
            step_reduce(&f, one()),
            Err(Error::NotAPole { .. })
        ));
    }

    #[test]
    fn factorize_entire_input_is_trivial() {
        let f = RatMat::<Q>::identity(2).to_float();
        let form = factorize(&f, FactorMode::Plain).unwrap();
        assert!(form.product.is_empty());
        assert!(form.entire_part().unwrap().equals(&f, 1e-12));
    }

    #[test]
    fn factorize_scalar_with_exp() {
        // F = 1/(z-1): P(z) = e^z (1-z), G = P F = -e^z
        let f = RatMat::from_entries(1, 1, vec![inv_pole(one())]).unwrap();
        let form = factorize(&f, FactorMode::WithExp).unwrap();
        assert_eq!(form.product.factors.len(), 1);
        for z in [Complex64::new(0.5, 0.2), Complex64::new(-2.0, 1.0)] {
            let g = form.eval(z).unwrap()[(0, 0)];
            let expect = -z.exp();
            assert!((g - expect).norm() < 1e-10);
        }
        // rational part of G is pole-free
        assert!(form.entire_part().unwrap().poles().is_empty());
    }

    #[test]
    fn factorize_two_pole_diagonal() {
        // diag(1/(z-1), 1/(z+2)): two factors; entire part pole-free with
        // tiny integrated residues at the original poles
        let f = RatMat::diag(vec![inv_pole(one()), inv_pole(Complex64::new(-2.0, 0.0))]);
        let form = factorize(&f, FactorMode::Plain).unwrap();
        assert_eq!(form.product.factors.len(), 2);
        let g = form.entire_part().unwrap();
        assert!(g.poles().is_empty());
        for p in [one(), Complex64::new(-2.0, 0.0)] {
            assert!(residue_norm(&g, p).unwrap() < 1e-9);
        }
        // multiplicity law |k| -> nonzero |k+1| on each step
        for st in &form.steps {
            let expect: Vec<u64> = st
                .mults_before
                .iter()
                .map(|m| m - 1)
                .filter(|m| *m > 0)
                .collect();
            assert_eq!(st.mults_after, expect);
        }
    }

    #[test]
    fn factorize_requires_det_nonzero_at_origin() {
        // F = diag(z, 1) has det F(0) = 0
        let f = RatMat::diag(vec![RatScalar::<Complex64>::var(), RatScalar::one()]);
        assert!(matches!(
            factorize(&f, FactorMode::Plain),
            Err(Error::SingularAtOrigin)
        ));
        // pole at the origin is refused
        let g = RatMat::from_entries(1, 1, vec![inv_pole(Complex64::new(0.0, 0.0))]).unwrap();
        assert!(matches!(
            factorize(&g, FactorMode::Plain),
            Err(Error::PoleAtOrigin)
        ));
    }

    #[test]
    fn cofactorize_identical_inputs_match_single() {
        let f = RatMat::diag(vec![inv_pole(one()), RatScalar::one()]);
        let single = factorize(&f, FactorMode::Plain).unwrap();
        let (product, outs) = cofactorize(&[f.clone(), f.clone()], FactorMode::Plain).unwrap();
        assert_eq!(product.factors.len(), single.product.factors.len());
        for out in &outs {
            assert!(out.poles().is_empty());
        }
        let z = Complex64::new(0.4, 0.3);
        let a = product.rational_part(2).eval(z).unwrap();
        let b = single.product.rational_part(2).eval(z).unwrap();
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn cofactorize_entire_plus_pole() {
        // product determined by the function with the pole; the entire one stays entire
        let entire = RatMat::<Complex64>::identity(2);
        let b = RatMat::diag(vec![inv_pole(Complex64::new(2.0, 0.0)), RatScalar::one()]);
        let (product, outs) = cofactorize(&[entire.clone(), b], FactorMode::Plain).unwrap();
        assert_eq!(product.factors.len(), 1);
        assert!((product.factors[0].point - Complex64::new(2.0, 0.0)).norm() < 1e-9);
        assert!(outs[0].poles().is_empty());
        assert!(outs[1].poles().is_empty());
    }

    #[test]
    fn plain_and_exp_modes_differ_by_invertible_factor() {
        let f = RatMat::diag(vec![inv_pole(one()), inv_pole(Complex64::new(0.0, 2.0))]);
        let plain = factorize(&f, FactorMode::Plain).unwrap();
        let withexp = factorize(&f, FactorMode::WithExp).unwrap();
        for k in 0..12 {
            let z = Complex64::new(-2.0 + 0.4 * k as f64, 0.3 * ((k % 5) as f64 - 2.0));
            let a = plain.product.eval(z, 2);
            let b = withexp.product.eval(z, 2);
            // ratio b * a^{-1} must stay invertible: det never vanishes
            let det_a = a.determinant();
            let det_b = b.determinant();
            if det_a.norm() > 1e-9 {
                assert!((det_b / det_a).norm() > 1e-9);
            }
        }
    }

    #[test]
    fn repeated_pole_reselected_until_cleared() {
        // double pole at 1 on a rank-1 direction: needs two steps at the same point
        let f = RatMat::diag(vec![
            RatScalar::new(Poly::constant(one()), Poly::linear(-one(), one()).pow(2)).unwrap(),
            RatScalar::one(),
        ]);
        let form = factorize(&f, FactorMode::Plain).unwrap();
        assert_eq!(form.product.factors.len(), 2);
        assert!((form.product.factors[0].point - one()).norm() < 1e-9);
        assert!((form.product.factors[1].point - one()).norm() < 1e-9);
        assert!(form.entire_part().unwrap().poles().is_empty());
    }

    #[test]
    fn det_of_rational_part_vanishes_only_at_processed_poles() {
        let f = RatMat::diag(vec![inv_pole(one()), inv_pole(Complex64::new(0.0, 2.0))]);
        let form = factorize(&f, FactorMode::Plain).unwrap();
        let rp = form.product.rational_part(2);
        let det = rp.det().unwrap();
        let roots = crate::ratmat::poly_roots(det.num()).unwrap();
        for (r, _) in roots {
            let near_pole = (r - one()).norm() < 1e-6 || (r - Complex64::new(0.0, 2.0)).norm() < 1e-6;
            assert!(near_pole, "unexpected zero of det P at {r}");
        }
        let _ = Q::from_i64(0); // keep exact-mode import exercised
    }
}
