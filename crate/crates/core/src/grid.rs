//! Fixed sample grids for positivity and contractivity checks.
//!
//! All grids are deterministic. The standard upper-half-plane grid is
//! {x + iy : x in 21 equispaced points of [-5, 5], y in {0.1, 0.5, 1, 2, 5}};
//! the real-axis standard is 41 Chebyshev-spaced points of [-10, 10]. The
//! CLI can override them through the parse syntax "X0:X1:NX/Y1,Y2,...".

use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl GridSpec {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        GridSpec { xs, ys }
    }

    /// 21 x-points on [-5,5] times y in {0.1, 0.5, 1, 2, 5}.
    pub fn upper_standard() -> Self {
        GridSpec { xs: equispaced(-5.0, 5.0, 21), ys: vec![0.1, 0.5, 1.0, 2.0, 5.0] }
    }

    /// 20x20 grid covering [-5,5] x (0,5].
    pub fn upper_dense() -> Self {
        let ys = (1..=20).map(|k| 5.0 * k as f64 / 20.0).collect();
        GridSpec { xs: equispaced(-5.0, 5.0, 20), ys }
    }

    pub fn points(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.xs.len() * self.ys.len());
        for &y in &self.ys {
            for &x in &self.xs {
                out.push(Complex64::new(x, y));
            }
        }
        out
    }

    /// Format "X0:X1:NX/Y1,Y2,...".
    pub fn parse(s: &str) -> Result<Self> {
        let (xpart, ypart) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("grid spec '{s}': expected X0:X1:NX/Y1,...")))?;
        let xf: Vec<&str> = xpart.split(':').collect();
        if xf.len() != 3 {
            return Err(Error::Parse(format!("grid spec '{s}': x part needs X0:X1:NX")));
        }
        let x0: f64 = xf[0].parse().map_err(|e| Error::Parse(format!("x0: {e}")))?;
        let x1: f64 = xf[1].parse().map_err(|e| Error::Parse(format!("x1: {e}")))?;
        let nx: usize = xf[2].parse().map_err(|e| Error::Parse(format!("nx: {e}")))?;
        if nx == 0 {
            return Err(Error::Parse("grid needs at least one x point".to_string()));
        }
        let mut ys = Vec::new();
        for t in ypart.split(',') {
            ys.push(t.trim().parse().map_err(|e| Error::Parse(format!("y: {e}")))?);
        }
        Ok(GridSpec { xs: equispaced(x0, x1, nx), ys })
    }
}

pub fn equispaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![(a + b) / 2.0];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

/// 41 Chebyshev-spaced points of [-10, 10] (standard real-axis samples).
pub fn real_axis_standard() -> Vec<f64> {
    chebyshev(-10.0, 10.0, 41)
}

pub fn chebyshev(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let t = (std::f64::consts::PI * k as f64 / (n - 1) as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * t
        })
        .collect()
}

/// Wide real grid through a tangent transform, n points; used for
/// positivity sampling of densities on the whole line.
pub fn real_axis_wide(n: usize) -> Vec<f64> {
    let margin = 0.02;
    (0..n)
        .map(|k| {
            let t = -std::f64::consts::FRAC_PI_2
                + margin
                + (std::f64::consts::PI - 2.0 * margin) * k as f64 / (n - 1) as f64;
            t.tan()
        })
        .collect()
}
