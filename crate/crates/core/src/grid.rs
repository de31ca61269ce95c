//! Uniform space-time grids and the discrete norms used for error measurement.
//!
//! Vectors come in two flavours throughout the crate: *full* vectors hold all
//! `N + 1` nodal values including the two Dirichlet boundary nodes, *interior*
//! vectors hold the `N - 1` values at nodes `1..N`.

use crate::error::{check_len, invalid, Error, Result};

/// Uniform mesh on `[0, l] x [0, T]` with `N` spatial intervals and `M` time steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub length: f64,
    pub final_time: f64,
    pub n: usize,
    pub m: usize,
    pub h: f64,
    pub tau: f64,
}

impl Grid1D {
    /// Builds the grid. Requires `l > 0`, `T > 0`, `N >= 4` and `M >= 1`.
    pub fn new(length: f64, final_time: f64, n: usize, m: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(invalid("l", format!("must be positive, got {length}")));
        }
        if !(final_time > 0.0 && final_time.is_finite()) {
            return Err(invalid("T", format!("must be positive, got {final_time}")));
        }
        if n < 4 {
            return Err(invalid("N", format!("need at least 4 intervals, got {n}")));
        }
        if m < 1 {
            return Err(invalid("M", "need at least one time step"));
        }
        Ok(Self {
            length,
            final_time,
            n,
            m,
            h: length / n as f64,
            tau: final_time / m as f64,
        })
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    #[inline]
    pub fn t(&self, j: usize) -> f64 {
        j as f64 * self.tau
    }

    /// Time of the half layer `t_{j+1/2}`.
    #[inline]
    pub fn t_half(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.tau
    }

    /// All `N + 1` node abscissae.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.x(i)).collect()
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..=self.n).map(|i| f(self.x(i))).collect()
    }

    pub fn interior_len(&self) -> usize {
        self.n - 1
    }

    /// `‖v‖_0` of a full vector (boundary entries are ignored).
    pub fn l2(&self, full: &[f64]) -> Result<f64> {
        check_len(self.n + 1, full.len())?;
        Ok(norm_l2(&full[1..self.n], self.h))
    }

    /// `‖v_x̄]|_0` of a full vector.
    pub fn grad_l2(&self, full: &[f64]) -> Result<f64> {
        check_len(self.n + 1, full.len())?;
        norm_grad_l2(full, self.h)
    }
}

/// Discrete L2 norm `sqrt(h Σ v_i²)` over an interior vector.
pub fn norm_l2(interior: &[f64], h: f64) -> f64 {
    (h * interior.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// Maximum absolute entry.
pub fn norm_max(v: &[f64]) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs())))
}

/// Maximum absolute entry over a sequence of time levels, so a whole
/// space-time history never has to be materialised at once.
pub fn norm_max_levels<'a, I>(levels: I) -> Result<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut seen = false;
    let mut acc = 0.0_f64;
    for level in levels {
        if !level.is_empty() {
            seen = true;
            acc = acc.max(norm_max(level)?);
        }
    }
    if !seen {
        return Err(Error::EmptyInput);
    }
    Ok(acc)
}

/// Backward-difference energy norm `sqrt(h Σ_{i=1}^{N} ((v_i - v_{i-1})/h)²)`
/// of a full vector.
pub fn norm_grad_l2(full: &[f64], h: f64) -> Result<f64> {
    if full.len() < 2 {
        return Err(Error::LengthMismatch {
            expected: 2,
            actual: full.len(),
        });
    }
    let sum: f64 = full
        .windows(2)
        .map(|w| {
            let d = (w[1] - w[0]) / h;
            d * d
        })
        .sum();
    Ok((h * sum).sqrt())
}

/// Forward-difference energy norm over interior nodes,
/// `sqrt(h Σ_{i=1}^{N-1} ((v_{i+1} - v_i)/h)²)`.
///
/// This omits the first interval that [`norm_grad_l2`] includes; it is the
/// gradient norm reported in the bundled reference tables.
pub fn norm_forward_grad_l2(full: &[f64], h: f64) -> Result<f64> {
    if full.len() < 3 {
        return Err(Error::LengthMismatch {
            expected: 3,
            actual: full.len(),
        });
    }
    norm_grad_l2(&full[1..], h)
}

/// Observed order `log(e1/e2) / log(r)` between two refinements with ratio `r = h1/h2`.
pub fn convergence_order(e1: f64, e2: f64, ratio: f64) -> Result<f64> {
    if !(e1 > 0.0) || !(e2 > 0.0) {
        return Err(invalid(
            "error",
            format!("errors must be positive, got {e1}, {e2}"),
        ));
    }
    if !(ratio > 1.0) {
        return Err(invalid(
            "ratio",
            format!("refinement ratio must exceed 1, got {ratio}"),
        ));
    }
    Ok((e1 / e2).ln() / ratio.ln())
}
