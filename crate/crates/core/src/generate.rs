//! Seeded random generators: finite non-dissipative matrices for the
//! characteristic-function pipeline and meromorphic matrices for the
//! factorization corpus. Deterministic per seed.

use crate::classes::make_signature;
use crate::debranges::{k0_validate, K0Operator};
use crate::error::{Error, Result};
use crate::ratmat::coeff::{Coeff, Q};
use crate::ratmat::{Poly, RatMat, RatScalar};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Sample a matrix T = R + i U J U* / 2 with R Hermitian and U integral, so
/// that (T - T*)/i = U J U* holds exactly, then reject until T has no
/// (numerically) real eigenvalues and the imaginary part has full rank 2n
/// with balanced signature. Entries stay tiny Gaussian rationals with
/// denominator two, which keeps the downstream exact certification cheap.
pub fn gen_k0(seed: u64, dim: usize, n: usize) -> Result<K0Operator<Q>> {
    let m = 2 * n;
    if dim < m {
        return Err(Error::pre(format!("dimension {dim} must be at least 2n = {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = make_signature::<Q>(n);
    const TRIES: usize = 1000;
    for _ in 0..TRIES {
        // Hermitian R with entries in a small box
        let mut r = RatMat::<Q>::zeros(dim, dim);
        for i in 0..dim {
            r.set(i, i, RatScalar::constant(Q::from_i64(rng.gen_range(-2..=2))));
            for j in (i + 1)..dim {
                let v = Q::from_i64_pair(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
                r.set(i, j, RatScalar::constant(v.clone()));
                r.set(j, i, RatScalar::constant(v.conjugate()));
            }
        }
        let u = RatMat::from_fn(dim, m, |_, _| {
            RatScalar::constant(Q::from_i64_pair(
                rng.gen_range(-2..=2),
                rng.gen_range(-2..=2),
            ))
        });
        let h = match u.mul(&spec.j_script).and_then(|t| t.mul(&u.sharp())) {
            Ok(h) => h,
            Err(_) => continue,
        };
        let t = match r.add(&h.scale_coeff(&(Q::i() * Q::from_ratio(1, 2)))) {
            Ok(t) => t,
            Err(_) => continue,
        };
        if k0_validate(&t, &u, n).is_err() {
            continue;
        }
        // extra margin against near-real eigenvalues
        let tv = t.eval(Complex64::new(0.0, 0.0))?;
        if let Some(ev) = tv.eigenvalues() {
            if ev.iter().all(|l| l.im.abs() > 1e-4 * l.norm().max(1.0)) {
                return Ok(K0Operator { t, u, n });
            }
        }
    }
    Err(Error::SamplingFailed {
        tries: TRIES,
        params: format!("gen_k0 seed {seed}, dim {dim}, n {n}"),
    })
}

/// Seeded meromorphic matrix for the factorization corpus: poles away from
/// the origin and from each other, det F not identically zero, and
/// det F(0) != 0. Float coefficients; the factorization pipeline is
/// numeric anyway.
pub fn gen_meromorphic(seed: u64, size: usize, max_poles: usize) -> Result<RatMat<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const TRIES: usize = 200;
    for _ in 0..TRIES {
        let npoles = rng.gen_range(1..=max_poles.max(1));
        let mut poles: Vec<Complex64> = Vec::new();
        while poles.len() < npoles {
            let radius = rng.gen_range(0.6..2.5);
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            let p = Complex64::from_polar(radius, angle);
            if poles.iter().all(|q| (q - p).norm() > 0.15) {
                poles.push(p);
            }
        }
        let f = RatMat::from_fn(size, size, |_, _| {
            // random numerator over a random subset of the pole factors
            let mut den = Poly::constant(Complex64::new(1.0, 0.0));
            let mut deg = 0usize;
            for p in &poles {
                if rng.gen_bool(0.6) {
                    den = den.mul(&Poly::linear(-p, Complex64::new(1.0, 0.0)));
                    deg += 1;
                }
            }
            let num = Poly::new(
                (0..=deg)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            );
            RatScalar::new(num, den).expect("nonzero denominator")
        });
        // need finitely many poles away from 0, det F not identically zero,
        // det F(0) != 0
        let det = match f.det() {
            Ok(d) => d,
            Err(_) => continue,
        };
        if det.is_zero() {
            continue;
        }
        match det.eval_c64(Complex64::new(0.0, 0.0)) {
            Ok(v) if v.norm() > 1e-6 => {}
            _ => continue,
        }
        if f.poles().order_at(Complex64::new(0.0, 0.0)) > 0 {
            continue;
        }
        if f.poles().is_empty() {
            continue;
        }
        return Ok(f);
    }
    Err(Error::SamplingFailed {
        tries: TRIES,
        params: format!("gen_meromorphic seed {seed}, size {size}, max_poles {max_poles}"),
    })
}
