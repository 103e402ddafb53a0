//! Numeric root finding for polynomials: companion-matrix eigenvalues,
//! multiplicity by clustering, cluster centers polished with a
//! multiplicity-aware Newton step.

use super::coeff::Coeff;
use super::poly::Poly;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Relative clustering radius used to merge eigenvalues into multiple roots.
/// Companion eigenvalues of an m-fold root split by roughly eps^(1/m), so a
/// radius wide enough to capture double and triple roots is required.
pub const ROOT_CLUSTER_TOL: f64 = 1e-6;

/// Residual acceptance for a computed root r: |p(r)| <= tol * max|coeff| * max(1,|r|)^deg.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-7;

/// Roots with multiplicities, deterministically ordered by (re, im).
pub fn poly_roots<C: Coeff>(p: &Poly<C>) -> Result<Vec<(Complex64, usize)>> {
    poly_roots_with_tol(p, ROOT_CLUSTER_TOL)
}

pub fn poly_roots_with_tol<C: Coeff>(
    p: &Poly<C>,
    cluster_tol: f64,
) -> Result<Vec<(Complex64, usize)>> {
    if p.is_zero() {
        return Err(Error::IndeterminateRoots);
    }
    let pf = p.to_float();
    let deg = pf.degree().unwrap_or(0);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let coeffs: Vec<Complex64> = pf.coeffs().to_vec();
    let lead = *coeffs.last().unwrap();

    let mut raw: Vec<Complex64> = if deg == 1 {
        vec![-coeffs[0] / coeffs[1]]
    } else {
        let mut m = DMatrix::<Complex64>::zeros(deg, deg);
        for i in 1..deg {
            m[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..deg {
            m[(i, deg - 1)] = -coeffs[i] / lead;
        }
        match m.eigenvalues() {
            Some(ev) => ev.iter().copied().collect(),
            None => return Err(Error::Internal("eigenvalue iteration failed".into())),
        }
    };

    // guarded Newton polish: near multiple roots |p| sits below the Horner
    // noise floor, where a raw Newton step is pure noise amplified by a tiny
    // derivative; only step while the value is significant and improving
    let dpf = pf.derivative();
    let noise_floor = |r: Complex64| -> f64 {
        let mut acc = 0.0;
        let mut pw = 1.0;
        for c in pf.coeffs() {
            acc += c.norm() * pw;
            pw *= r.norm();
        }
        4.0 * (deg as f64) * f64::EPSILON * acc
    };
    for r in raw.iter_mut() {
        for _ in 0..3 {
            let pv = pf.eval_c64(*r);
            if pv.norm() <= noise_floor(*r) {
                break;
            }
            let d = dpf.eval_c64(*r);
            if d.norm() <= 1e-300 {
                break;
            }
            let step = pv / d;
            if step.norm() >= 0.5 * (1.0 + r.norm()) {
                break;
            }
            let cand = *r - step;
            if pf.eval_c64(cand).norm() < pv.norm() {
                *r = cand;
            } else {
                break;
            }
        }
    }

    // greedy clustering
    raw.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    'outer: for r in raw {
        for cl in clusters.iter_mut() {
            let center = mean(cl);
            if (r - center).norm() <= cluster_tol * center.norm().max(1.0) {
                cl.push(r);
                continue 'outer;
            }
        }
        clusters.push(vec![r]);
    }

    // second pass: an m-fold root splits its eigenvalues by about eps^(1/m),
    // which exceeds any fixed radius once m >= 3; merge clusters whose
    // combined multiplicity explains their distance
    loop {
        let mut merged = false;
        'pairs: for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let ci = mean(&clusters[i]);
                let cj = mean(&clusters[j]);
                let m = clusters[i].len() + clusters[j].len();
                let split = 3.0 * 1e-14f64.powf(1.0 / m as f64);
                let radius = split.max(cluster_tol).min(1e-3) * ci.norm().max(1.0);
                if (ci - cj).norm() <= radius {
                    let moved = clusters.swap_remove(j);
                    clusters[i].extend(moved);
                    merged = true;
                    break 'pairs;
                }
            }
        }
        if !merged {
            break;
        }
    }

    let mut out = Vec::with_capacity(clusters.len());
    for cl in clusters {
        let mult = cl.len();
        let mut center = mean(&cl);
        // multiplicity-aware Newton x <- x - m p(x)/p'(x), with the same
        // noise-floor and monotonicity guards as the polish pass
        for _ in 0..3 {
            let pv = pf.eval_c64(center);
            if pv.norm() <= noise_floor(center) {
                break;
            }
            let d = dpf.eval_c64(center);
            if d.norm() <= 1e-300 {
                break;
            }
            let step = Complex64::new(mult as f64, 0.0) * pv / d;
            if step.norm() > 0.5 * (1.0 + center.norm()) {
                break;
            }
            let cand = center - step;
            if pf.eval_c64(cand).norm() < pv.norm() {
                center = cand;
            } else {
                break;
            }
        }
        out.push((center, mult));
    }
    out.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap()
            .then(a.0.im.partial_cmp(&b.0.im).unwrap())
    });
    Ok(out)
}

/// Rebuild lead * prod (z - r_i)^{m_i} from a root list.
pub fn poly_from_roots(lead: Complex64, roots: &[(Complex64, usize)]) -> Poly<Complex64> {
    let mut p = Poly::constant(lead);
    for (r, m) in roots {
        let factor = Poly::linear(-*r, Complex64::new(1.0, 0.0));
        p = p.mul(&factor.pow(*m));
    }
    p
}

fn mean(v: &[Complex64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for x in v {
        s += x;
    }
    s / Complex64::new(v.len() as f64, 0.0)
}

/// Multiplicity of `point` in the root list (0 when absent), matched with
/// the clustering radius.
pub fn multiplicity_at(roots: &[(Complex64, usize)], point: Complex64, tol: f64) -> usize {
    roots
        .iter()
        .find(|(r, _)| (r - point).norm() <= tol * r.norm().max(1.0))
        .map(|(_, m)| *m)
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::coeff::Q;

    fn as_set(v: Vec<(Complex64, usize)>) -> Vec<(Complex64, usize)> {
        v
    }

    #[test]
    fn roots_of_z2_plus_1() {
        // z^2 + 1 -> {(i,1), (-i,1)}
        let p = Poly::new(vec![Q::from_i64(1), Q::from_i64(0), Q::from_i64(1)]);
        let r = as_set(poly_roots(&p).unwrap());
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|(z, m)| (*z - Complex64::i()).norm() < 1e-9 && *m == 1));
        assert!(r.iter().any(|(z, m)| (*z + Complex64::i()).norm() < 1e-9 && *m == 1));
    }

    #[test]
    fn double_root_is_merged() {
        // (z-1)^2 -> {(1,2)}
        let p = Poly::new(vec![Q::from_i64(1), Q::from_i64(-2), Q::from_i64(1)]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].1, 2);
        assert!((r[0].0 - Complex64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn simple_cubic() {
        // z^3 - z -> {0, 1, -1}
        let p = Poly::new(vec![
            Q::from_i64(0),
            Q::from_i64(-1),
            Q::from_i64(0),
            Q::from_i64(1),
        ]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 3);
        let mut res: Vec<f64> = r.iter().map(|(z, _)| z.re).collect();
        res.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((res[0] + 1.0).abs() < 1e-9);
        assert!(res[1].abs() < 1e-9);
        assert!((res[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_polynomial_errors() {
        let p: Poly<Q> = Poly::zero();
        assert!(matches!(poly_roots(&p), Err(Error::IndeterminateRoots)));
    }

    #[test]
    fn residual_bound_holds() {
        // messy cubic with complex coefficients
        let p = Poly::new(vec![
            Complex64::new(0.3, -1.2),
            Complex64::new(2.0, 0.7),
            Complex64::new(-0.5, 0.1),
            Complex64::new(1.0, 0.0),
        ]);
        let roots = poly_roots(&p).unwrap();
        let scale = p.max_mag();
        for (r, _) in &roots {
            let bound = ROOT_RESIDUAL_TOL * scale * r.norm().max(1.0).powi(3);
            assert!(p.eval_c64(*r).norm() <= bound);
        }
    }

    #[test]
    fn reconstruction_matches_input() {
        let p = Poly::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let roots = poly_roots(&p).unwrap();
        let q = poly_from_roots(Complex64::new(1.0, 0.0), &roots);
        assert!(q.approx_eq(&p, 1e-8));
    }
}
