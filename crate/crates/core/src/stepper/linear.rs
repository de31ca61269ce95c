//! Linear algebra for the per-step systems: Thomas elimination, a low-rank
//! Woodbury correction for the load columns, and a dense LU fallback.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};

/// Tridiagonal matrix stored by diagonals. `lower[i]` couples row `i + 1` to
/// column `i`, `upper[i]` couples row `i` to column `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        check_len(n - 1, lower.len())?;
        check_len(n - 1, upper.len())?;
        Ok(Self { lower, diag, upper })
    }

    /// Constant-coefficient (Toeplitz) matrix of size `n`.
    pub fn toeplitz(n: usize, sub: f64, diag: f64, sup: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        Self::new(vec![sub; n - 1], vec![diag; n], vec![sup; n - 1])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::toeplitz(n, 0.0, 1.0, 0.0)
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        check_len(n, x.len())?;
        Ok((0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect())
    }

    /// True when every row satisfies `|d_i| > |l_i| + |u_i|`.
    pub fn is_strictly_diagonally_dominant(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            let off = if i > 0 { self.lower[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.upper[i].abs() } else { 0.0 };
            self.diag[i].abs() > off
        })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = self.diag[i];
            if i > 0 {
                a[(i, i - 1)] = self.lower[i - 1];
            }
            if i + 1 < n {
                a[(i, i + 1)] = self.upper[i];
            }
        }
        a
    }

    /// Forward elimination, reusable for many right-hand sides.
    pub fn factorize(&self) -> Result<TridiagonalFactor> {
        let n = self.len();
        let mut pivots = Vec::with_capacity(n);
        let mut multipliers = Vec::with_capacity(n.saturating_sub(1));
        let mut pivot = self.diag[0];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::ZeroPivot { row: 0 });
        }
        pivots.push(pivot);
        for i in 1..n {
            let m = self.lower[i - 1] / pivot;
            pivot = self.diag[i] - m * self.upper[i - 1];
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::ZeroPivot { row: i });
            }
            multipliers.push(m);
            pivots.push(pivot);
        }
        Ok(TridiagonalFactor {
            multipliers,
            pivots,
            upper: self.upper.clone(),
        })
    }
}

/// LU factors of a [`Tridiagonal`] matrix produced by [`Tridiagonal::factorize`].
#[derive(Debug, Clone)]
pub struct TridiagonalFactor {
    multipliers: Vec<f64>,
    pivots: Vec<f64>,
    upper: Vec<f64>,
}

impl TridiagonalFactor {
    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        let n = self.len();
        check_len(n, x.len())?;
        for i in 1..n {
            x[i] -= self.multipliers[i - 1] * x[i - 1];
        }
        x[n - 1] /= self.pivots[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = (x[i] - self.upper[i] * x[i + 1]) / self.pivots[i];
        }
        Ok(())
    }
}

/// Solves `T x = b` by the Thomas algorithm.
pub fn thomas_solve(t: &Tridiagonal, b: &[f64]) -> Result<Vec<f64>> {
    t.factorize()?.solve(b)
}

/// Sparse row `w` with `(index, value)` entries.
pub type SparseRow = Vec<(usize, f64)>;

/// The rank-`m` update `Σ_k u_k w_kᵀ` added to the tridiagonal part.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LowRankUpdate {
    pub columns: Vec<Vec<f64>>,
    pub rows: Vec<SparseRow>,
    /// Labels used in diagnostics, one per column (e.g. the load abscissa).
    pub labels: Vec<String>,
}

impl LowRankUpdate {
    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn push(&mut self, column: Vec<f64>, row: SparseRow, label: impl Into<String>) {
        self.columns.push(column);
        self.rows.push(row);
        self.labels.push(label.into());
    }

    fn check(&self, n: usize) -> Result<()> {
        check_len(self.columns.len(), self.rows.len())?;
        for (col, row) in self.columns.iter().zip(&self.rows) {
            check_len(n, col.len())?;
            if let Some(&(i, _)) = row.iter().find(|(i, _)| *i >= n) {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: i + 1,
                });
            }
        }
        Ok(())
    }

    /// `w_k · x` for every `k`.
    pub fn row_dots(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(i, w)| w * x[i]).sum())
            .collect()
    }

    /// `Σ_k u_k (w_k · x)`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let mut out = vec![0.0; n];
        for (col, dot) in self.columns.iter().zip(self.row_dots(x)) {
            for (o, c) in out.iter_mut().zip(col) {
                *o += c * dot;
            }
        }
        out
    }

    fn describe(&self) -> String {
        if self.labels.is_empty() {
            format!("rank {}", self.rank())
        } else {
            format!("[{}]", self.labels.join(", "))
        }
    }
}

/// Explicit `T + Σ u_k w_kᵀ`.
pub fn assemble_dense(t: &Tridiagonal, update: &LowRankUpdate) -> Result<DMatrix<f64>> {
    update.check(t.len())?;
    let mut a = t.to_dense();
    for (col, row) in update.columns.iter().zip(&update.rows) {
        for &(p, w) in row {
            for (i, c) in col.iter().enumerate() {
                a[(i, p)] += c * w;
            }
        }
    }
    Ok(a)
}

/// Solves `(T + Σ u_k w_kᵀ) x = b` with `m + 1` tridiagonal solves and an
/// `m x m` capacitance system.
pub fn woodbury_solve(t: &Tridiagonal, update: &LowRankUpdate, b: &[f64]) -> Result<Vec<f64>> {
    woodbury_solve_factored(&t.factorize()?, update, b)
}

/// [`woodbury_solve`] with a precomputed factorisation of `T`.
pub fn woodbury_solve_factored(
    factor: &TridiagonalFactor,
    update: &LowRankUpdate,
    b: &[f64],
) -> Result<Vec<f64>> {
    let n = factor.len();
    check_len(n, b.len())?;
    update.check(n)?;
    let mut x = factor.solve(b)?;
    let m = update.rank();
    if m == 0 {
        return Ok(x);
    }
    let z: Vec<Vec<f64>> = update
        .columns
        .iter()
        .map(|c| factor.solve(c))
        .collect::<Result<_>>()?;
    let mut cap = DMatrix::<f64>::identity(m, m);
    for (k, row) in update.rows.iter().enumerate() {
        for (l, zl) in z.iter().enumerate() {
            cap[(k, l)] += row.iter().map(|&(i, w)| w * zl[i]).sum::<f64>();
        }
    }
    let rhs = DVector::from_vec(update.row_dots(&x));
    let coef = cap
        .lu()
        .solve(&rhs)
        .filter(|c| c.iter().all(|v| v.is_finite()))
        .ok_or_else(|| Error::SingularCapacitance {
            loads: update.describe(),
        })?;
    for (zl, c) in z.iter().zip(coef.iter()) {
        for (xi, zi) in x.iter_mut().zip(zl) {
            *xi -= c * zi;
        }
    }
    Ok(x)
}

/// Dense LU solve of the full system; used to cross-validate the Woodbury path.
pub fn dense_solve(t: &Tridiagonal, update: &LowRankUpdate, b: &[f64]) -> Result<Vec<f64>> {
    check_len(t.len(), b.len())?;
    let a = assemble_dense(t, update)?;
    let x = a
        .lu()
        .solve(&DVector::from_column_slice(b))
        .ok_or(Error::SingularDense)?;
    Ok(x.iter().copied().collect())
}
