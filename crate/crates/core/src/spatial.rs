//! Spatial operators on full nodal vectors: the second difference, the compact
//! averaging operator `H_h`, cubic load-point interpolation and Simpson
//! quadrature for integral loads.

use crate::error::{check_len, invalid, Error, Result};
use crate::grid::Grid1D;

fn check_full(v: &[f64]) -> Result<()> {
    if v.len() < 3 {
        return Err(Error::LengthMismatch {
            expected: 3,
            actual: v.len(),
        });
    }
    Ok(())
}

/// `(v_{i+1} - 2 v_i + v_{i-1}) / h²` at the interior nodes.
pub fn second_difference(v: &[f64], h: f64) -> Result<Vec<f64>> {
    check_full(v)?;
    let inv = 1.0 / (h * h);
    Ok(v.windows(3)
        .map(|w| (w[2] - 2.0 * w[1] + w[0]) * inv)
        .collect())
}

/// Compact average `(v_{i+1} + 10 v_i + v_{i-1}) / 12` at the interior nodes.
pub fn apply_hh(v: &[f64]) -> Result<Vec<f64>> {
    check_full(v)?;
    Ok(v.windows(3)
        .map(|w| (w[2] + 10.0 * w[1] + w[0]) / 12.0)
        .collect())
}

/// Cubic Lagrange interpolation of nodal values at a load point.
///
/// Weights act on nodes `anchor-1 ..= anchor+2`, where
/// `x_anchor <= x < x_{anchor+1}`. Boundary nodes may appear in the stencil;
/// they carry the homogeneous Dirichlet value.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadStencil {
    pub x: f64,
    pub anchor: usize,
    pub weights: [f64; 4],
}

impl LoadStencil {
    /// Index of the first stencil node.
    pub fn first_node(&self) -> usize {
        self.anchor - 1
    }

    /// `(node index, weight)` pairs.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(p, &w)| (self.anchor - 1 + p, w))
    }
}

/// Builds the interpolation stencil for a load point.
///
/// Requires `h < x < l - h`, which keeps all four nodes inside `0..=N`.
pub fn build_load_stencil(x: f64, grid: &Grid1D) -> Result<LoadStencil> {
    let (h, l) = (grid.h, grid.length);
    if !(x > h && x < l - h) {
        return Err(Error::LoadTooCloseToBoundary { x, h, l });
    }
    let ratio = x / h;
    let nearest = ratio.round();
    if (x - nearest * h).abs() <= 1e-12 * l {
        return Ok(LoadStencil {
            x,
            anchor: nearest as usize,
            weights: [0.0, 1.0, 0.0, 0.0],
        });
    }
    let anchor = ratio.floor() as usize;
    let node = |k: isize| (anchor as isize + k) as f64 * h;
    let (xm, x0, x1, x2) = (node(-1), node(0), node(1), node(2));
    let h3 = h * h * h;
    let weights = [
        (x - x0) * (x - x1) * (x - x2) / (-6.0 * h3),
        (x - xm) * (x - x1) * (x - x2) / (2.0 * h3),
        (x - xm) * (x - x0) * (x - x2) / (-2.0 * h3),
        (x - xm) * (x - x0) * (x - x1) / (6.0 * h3),
    ];
    Ok(LoadStencil { x, anchor, weights })
}

/// Interpolated value `Σ_p w_p v_{anchor-1+p}`.
pub fn evaluate_load(v: &[f64], stencil: &LoadStencil) -> Result<f64> {
    let last = stencil.anchor + 2;
    if stencil.anchor == 0 || last >= v.len() {
        return Err(Error::LengthMismatch {
            expected: last + 1,
            actual: v.len(),
        });
    }
    Ok(stencil.entries().map(|(i, w)| w * v[i]).sum())
}

/// Composite Simpson weights for `N + 1` nodes with spacing `h`; `N` must be even.
pub fn simpson_weights(n: usize, h: f64) -> Result<Vec<f64>> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(invalid(
            "N",
            format!("Simpson's rule needs an even number of intervals, got {n}"),
        ));
    }
    let mut w: Vec<f64> = (0..=n)
        .map(|i| if i % 2 == 1 { 4.0 } else { 2.0 })
        .collect();
    w[0] = 1.0;
    w[n] = 1.0;
    w.iter_mut().for_each(|x| *x *= h / 3.0);
    Ok(w)
}

/// Composite Simpson approximation of `∫ v dx` from a full nodal vector.
pub fn simpson_integral(v: &[f64], h: f64) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::EmptyInput);
    }
    let w = simpson_weights(v.len() - 1, h)?;
    check_len(w.len(), v.len())?;
    Ok(w.iter().zip(v).map(|(a, b)| a * b).sum())
}
