//! Time marching for the compact half-layer scheme.
//!
//! Each step solves, for the interior unknowns `y^{j+1}`,
//!
//! ```text
//! β c_0 H y^{j+1} - (1/2 + μ/τ) δ² y^{j+1} - 1/2 Σ_k H q_k · ȳ^{j+1}_k
//!   = β c_0 H y^j - β Σ_{s<j} c_{j-s} H (y^{s+1} - y^s)
//!     + (1/2 - μ/τ) δ² y^j + 1/2 Σ_k H q_k · ȳ^j_k + H f
//! ```
//!
//! with `β = τ^{-α}/Γ(2-α)`, data sampled at `t_{j+1/2}` and `ȳ_k` the cubic
//! interpolant at load point `x_k`. The left side is a constant tridiagonal
//! matrix plus one rank-one term per load, solved with a Woodbury correction.

mod linear;

pub use linear::{
    assemble_dense, dense_solve, thomas_solve, woodbury_solve, woodbury_solve_factored,
    LowRankUpdate, SparseRow, Tridiagonal, TridiagonalFactor,
};

use crate::error::{check_len, invalid, Error, Result};
use crate::grid::{norm_l2, norm_max, Grid1D};
use crate::kernel::{check_solver_alpha, gamma_const, CaputoKernel};
use crate::problems::ProblemSpec;
use crate::spatial::{
    apply_hh, build_load_stencil, second_difference, simpson_weights, LoadStencil,
};

/// Linear solver used for the per-step system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Woodbury,
    Dense,
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "woodbury" => Ok(Backend::Woodbury),
            "dense" => Ok(Backend::Dense),
            other => Err(invalid("backend", format!("unknown backend `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolverOptions {
    pub backend: Backend,
    /// Overrides the kernel weight `c_0` (negative controls only).
    pub leading_coefficient: Option<f64>,
}

impl SolverOptions {
    pub fn with_backend(backend: Backend) -> Self {
        Self {
            backend,
            ..Self::default()
        }
    }
}

/// Implicit tridiagonal part `β c_0 H - (1/2 + μ/τ) δ²` over the interior nodes.
pub fn assemble_tridiagonal(grid: &Grid1D, alpha: f64, mu: f64) -> Result<Tridiagonal> {
    let kernel = CaputoKernel::new(alpha, grid.tau, 0)?;
    assemble_tridiagonal_with(grid, &kernel, mu)
}

fn assemble_tridiagonal_with(grid: &Grid1D, kernel: &CaputoKernel, mu: f64) -> Result<Tridiagonal> {
    if !(mu > 0.0) {
        return Err(invalid("mu", format!("must be positive, got {mu}")));
    }
    let mass = kernel.beta() * kernel.c(0);
    let stiff = (0.5 + mu / grid.tau) / (grid.h * grid.h);
    let off = mass / 12.0 - stiff;
    let diag = mass * 10.0 / 12.0 + 2.0 * stiff;
    Tridiagonal::toeplitz(grid.interior_len(), off, diag, off)
}

/// Step bound `(2μ / (γ l²))^{1/(1-α)}`; above it stability is not guaranteed
/// by the energy estimate.
pub fn tau_threshold(alpha: f64, mu: f64, length: f64) -> Result<f64> {
    let g = gamma_const(alpha)?;
    Ok((2.0 * mu / (g * length * length)).powf(1.0 / (1.0 - alpha)))
}

fn load_stencils(problem: &ProblemSpec, grid: &Grid1D) -> Result<Vec<LoadStencil>> {
    problem
        .loads
        .iter()
        .map(|l| build_load_stencil(l.x, grid))
        .collect()
}

fn interior_row(stencil: &LoadStencil, n: usize) -> SparseRow {
    stencil
        .entries()
        .filter(|&(i, w)| i >= 1 && i < n && w != 0.0)
        .map(|(i, w)| (i - 1, w))
        .collect()
}

fn load_update(
    problem: &ProblemSpec,
    grid: &Grid1D,
    stencils: &[LoadStencil],
    simpson: Option<&[f64]>,
    t_half: f64,
) -> Result<LowRankUpdate> {
    let n = grid.n;
    let mut update = LowRankUpdate::default();
    for (load, stencil) in problem.loads.iter().zip(stencils) {
        let q = grid.sample(|x| (load.q)(x, t_half));
        let col = apply_hh(&q)?.into_iter().map(|v| -0.5 * v).collect();
        update.push(col, interior_row(stencil, n), format!("x={}", load.x));
    }
    if let (Some(q), Some(weights)) = (&problem.integral_load, simpson) {
        let row = (1..n)
            .map(|i| (i - 1, weights[i] * q(grid.x(i), t_half)))
            .collect();
        update.push(vec![-0.5; n - 1], row, "integral");
    }
    Ok(update)
}

/// Load columns `u_k = -1/2 H q_k(·, t_half)` and interpolation rows `w_k`.
pub fn assemble_load_columns(
    problem: &ProblemSpec,
    grid: &Grid1D,
    t_half: f64,
) -> Result<LowRankUpdate> {
    let stencils = load_stencils(problem, grid)?;
    let simpson = match problem.integral_load {
        Some(_) => Some(simpson_weights(grid.n, grid.h)?),
        None => None,
    };
    load_update(problem, grid, &stencils, simpson.as_deref(), t_half)
}

/// Marching state: grid, kernel, the constant tridiagonal factor and the
/// full solution history `y^0..y^j` (required by the fractional sum).
#[derive(Debug, Clone)]
pub struct SolverState {
    grid: Grid1D,
    kernel: CaputoKernel,
    mu: f64,
    tridiagonal: Tridiagonal,
    factor: TridiagonalFactor,
    stencils: Vec<LoadStencil>,
    simpson: Option<Vec<f64>>,
    levels: Vec<Vec<f64>>,
    backend: Backend,
}

impl SolverState {
    /// Sets `y^0 = u0` at the nodes with zero boundary values.
    pub fn new(problem: &ProblemSpec, grid: Grid1D, options: &SolverOptions) -> Result<Self> {
        problem.validate()?;
        check_solver_alpha(problem.alpha)?;
        if (grid.length - problem.length).abs() > 1e-12 * problem.length {
            return Err(invalid(
                "grid",
                format!(
                    "grid length {} differs from problem length {}",
                    grid.length, problem.length
                ),
            ));
        }
        let mut kernel = CaputoKernel::new(problem.alpha, grid.tau, grid.m)?;
        if let Some(c0) = options.leading_coefficient {
            kernel = kernel.with_leading_coefficient(c0);
        }
        let tridiagonal = assemble_tridiagonal_with(&grid, &kernel, problem.mu)?;
        let factor = tridiagonal.factorize()?;
        let stencils = load_stencils(problem, &grid)?;
        let simpson = match problem.integral_load {
            Some(_) => Some(simpson_weights(grid.n, grid.h)?),
            None => None,
        };
        let mut y0 = grid.sample(|x| (problem.initial)(x));
        y0[0] = 0.0;
        y0[grid.n] = 0.0;
        let mut levels = Vec::with_capacity(grid.m + 1);
        levels.push(y0);
        Ok(Self {
            grid,
            kernel,
            mu: problem.mu,
            tridiagonal,
            factor,
            stencils,
            simpson,
            levels,
            backend: options.backend,
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn kernel(&self) -> &CaputoKernel {
        &self.kernel
    }

    pub fn tridiagonal(&self) -> &Tridiagonal {
        &self.tridiagonal
    }

    pub fn stencils(&self) -> &[LoadStencil] {
        &self.stencils
    }

    /// Index `j` of the newest level.
    pub fn level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn current(&self) -> &[f64] {
        &self.levels[self.level()]
    }

    /// Load columns at `t_{j+1/2}` for the current level.
    pub fn load_update(&self, problem: &ProblemSpec) -> Result<LowRankUpdate> {
        let t_half = self.grid.t_half(self.level());
        load_update(
            problem,
            &self.grid,
            &self.stencils,
            self.simpson.as_deref(),
            t_half,
        )
    }

    /// Right-hand side of the step from level `j` to `j + 1`.
    pub fn assemble_rhs(&self, problem: &ProblemSpec, update: &LowRankUpdate) -> Result<Vec<f64>> {
        let grid = &self.grid;
        let n = grid.n;
        let j = self.level();
        let t_half = grid.t_half(j);
        let beta = self.kernel.beta();
        let yj = &self.levels[j];
        for level in &self.levels {
            check_len(n + 1, level.len())?;
        }

        // β c_0 y^j - β Σ_{s<j} c_{j-s} (y^{s+1} - y^s) + f, then one H application
        let mut explicit = vec![0.0; n + 1];
        for s in 0..j {
            let c = self.kernel.c(j - s);
            let (lo, hi) = (&self.levels[s], &self.levels[s + 1]);
            for i in 1..n {
                explicit[i] -= c * (hi[i] - lo[i]);
            }
        }
        let c0 = self.kernel.c(0);
        for (i, e) in explicit.iter_mut().enumerate() {
            *e = beta * (*e + c0 * yj[i]) + (problem.forcing)(grid.x(i), t_half);
        }
        let mut rhs = apply_hh(&explicit)?;

        let diffusion = 0.5 - self.mu / grid.tau;
        let d2 = second_difference(yj, grid.h)?;
        let loads = update.apply(&yj[1..n]);
        for ((r, d), l) in rhs.iter_mut().zip(d2).zip(loads) {
            *r += diffusion * d - l;
        }
        Ok(rhs)
    }

    fn solve_system(&self, update: &LowRankUpdate, rhs: &[f64]) -> Result<Vec<f64>> {
        match self.backend {
            Backend::Woodbury => woodbury_solve_factored(&self.factor, update, rhs),
            Backend::Dense => dense_solve(&self.tridiagonal, update, rhs),
        }
    }

    /// Advances one level. Fails once `M` steps have been taken.
    pub fn step(&mut self, problem: &ProblemSpec) -> Result<()> {
        if self.level() >= self.grid.m {
            return Err(invalid(
                "step",
                format!("all {} time steps already taken", self.grid.m),
            ));
        }
        let update = self.load_update(problem)?;
        let rhs = self.assemble_rhs(problem, &update)?;
        let interior = self.solve_system(&update, &rhs)?;
        let mut next = Vec::with_capacity(self.grid.n + 1);
        next.push(0.0);
        next.extend(interior);
        next.push(0.0);
        self.levels.push(next);
        Ok(())
    }
}

/// Summary of one computed level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRecord {
    pub level: usize,
    pub time: f64,
    pub max_abs: f64,
    pub l2: f64,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub state: SolverState,
    pub records: Vec<LevelRecord>,
}

/// Observer callback: `(level, time, full vector)`. Returning `Err` aborts the solve.
pub trait LevelObserver {
    fn observe(&mut self, level: usize, time: f64, y: &[f64]) -> std::result::Result<(), String>;
}

impl<F> LevelObserver for F
where
    F: FnMut(usize, f64, &[f64]) -> std::result::Result<(), String>,
{
    fn observe(&mut self, level: usize, time: f64, y: &[f64]) -> std::result::Result<(), String> {
        self(level, time, y)
    }
}

/// Observer that ignores every level.
pub fn no_observer(_: usize, _: f64, _: &[f64]) -> std::result::Result<(), String> {
    Ok(())
}

/// Runs all `M` steps, reporting every level (including `y^0`) to `observer`.
pub fn solve(
    problem: &ProblemSpec,
    grid: Grid1D,
    options: &SolverOptions,
    mut observer: impl LevelObserver,
) -> Result<SolveOutcome> {
    let limit = tau_threshold(problem.alpha, problem.mu, problem.length)?;
    if grid.tau > limit {
        log::warn!(
            "time step {} exceeds the stability threshold {limit:.4e}; results may not be reliable",
            grid.tau
        );
    }
    let mut state = SolverState::new(problem, grid, options)?;
    let mut records = Vec::with_capacity(grid.m + 1);
    let mut report = |state: &SolverState, observer: &mut dyn LevelObserver| -> Result<()> {
        let j = state.level();
        let y = state.current();
        let t = state.grid.t(j);
        observer
            .observe(j, t, y)
            .map_err(|message| Error::Observer { level: j, message })?;
        records.push(LevelRecord {
            level: j,
            time: t,
            max_abs: norm_max(y)?,
            l2: norm_l2(&y[1..grid.n], grid.h),
        });
        Ok(())
    };
    report(&state, &mut observer)?;
    for _ in 0..grid.m {
        state.step(problem)?;
        report(&state, &mut observer)?;
    }
    Ok(SolveOutcome { state, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{hallaire_test_problem, space_time, ManufacturedConfig, PointLoad};
    use statrs::function::gamma::gamma;
    use std::sync::Arc;

    fn zero_problem(alpha: f64) -> ProblemSpec {
        let mut p = hallaire_test_problem(alpha).unwrap();
        p.forcing = space_time(|_, _| 0.0);
        p.initial = Arc::new(|_| 0.0);
        p.exact = None;
        p
    }

    #[test]
    fn tridiagonal_entries() {
        let g = Grid1D::new(1.0, 1.0, 4, 10).unwrap();
        let t = assemble_tridiagonal(&g, 0.5, 1.0).unwrap();
        let beta = 0.1_f64.powf(-0.5) / gamma(1.5);
        let c0 = 0.5_f64.sqrt();
        assert!((t.diag[0] - (beta * c0 * 10.0 / 12.0 + 10.5 * 32.0)).abs() < 1e-10);
        assert!((t.upper[0] - (beta * c0 / 12.0 - 10.5 * 16.0)).abs() < 1e-10);
        assert_eq!(t.lower, t.upper);
        assert!(t.is_strictly_diagonally_dominant());
        assert!(assemble_tridiagonal(&g, 0.5, 0.0).is_err());
    }

    #[test]
    fn tridiagonal_large_mu_limit() {
        let g = Grid1D::new(1.0, 1.0, 16, 10).unwrap();
        let t = assemble_tridiagonal(&g, 0.3, 1e12).unwrap();
        assert!((t.upper[0] / t.diag[0] + 0.5).abs() < 1e-8);
    }

    #[test]
    fn load_columns_for_constant_coefficients() {
        let g = Grid1D::new(1.0, 1.0, 10, 4).unwrap();
        let mut p = zero_problem(0.5);
        p.loads = vec![
            PointLoad::new(0.35, |_, _| 1.0),
            PointLoad::new(0.6, |_, _| 0.0),
        ];
        let up = assemble_load_columns(&p, &g, 0.125).unwrap();
        assert_eq!(up.rank(), 2);
        assert!(up.columns[0].iter().all(|v| (v + 0.5).abs() < 1e-15));
        assert!(up.columns[1].iter().all(|v| *v == 0.0));
        assert_eq!(up.rows[1], vec![(5, 1.0)]);
        assert_eq!(up.rows[0].len(), 4);
    }

    #[test]
    fn zero_dynamics_stay_zero() {
        let p = zero_problem(0.5);
        let g = Grid1D::new(1.0, 1.0, 12, 3).unwrap();
        let mut s = SolverState::new(&p, g, &SolverOptions::default()).unwrap();
        let rhs = s.assemble_rhs(&p, &s.load_update(&p).unwrap()).unwrap();
        assert!(rhs.iter().all(|v| *v == 0.0));
        s.step(&p).unwrap();
        assert!(s.current().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn unit_forcing_rhs() {
        let mut p = zero_problem(0.5);
        p.forcing = space_time(|_, _| 1.0);
        let g = Grid1D::new(1.0, 1.0, 12, 3).unwrap();
        let s = SolverState::new(&p, g, &SolverOptions::default()).unwrap();
        let rhs = s.assemble_rhs(&p, &s.load_update(&p).unwrap()).unwrap();
        assert!(rhs.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn step_count_is_bounded() {
        let p = zero_problem(0.5);
        let g = Grid1D::new(1.0, 1.0, 12, 1).unwrap();
        let mut s = SolverState::new(&p, g, &SolverOptions::default()).unwrap();
        s.step(&p).unwrap();
        assert!(s.step(&p).is_err());
        assert_eq!(s.levels().len(), 2);
    }

    #[test]
    fn single_step_solve_equals_step() {
        let p = hallaire_test_problem(0.3).unwrap();
        let g = Grid1D::new(1.0, 1.0, 12, 1).unwrap();
        let out = solve(&p, g, &SolverOptions::default(), no_observer).unwrap();
        let mut s = SolverState::new(&p, g, &SolverOptions::default()).unwrap();
        s.step(&p).unwrap();
        assert_eq!(out.state.current(), s.current());
        assert_eq!(out.records.len(), 2);
    }

    #[test]
    fn observer_error_carries_level() {
        let p = hallaire_test_problem(0.5).unwrap();
        let g = Grid1D::new(1.0, 1.0, 12, 5).unwrap();
        let err = solve(
            &p,
            g,
            &SolverOptions::default(),
            |j: usize, _: f64, _: &[f64]| {
                if j == 3 {
                    Err("stop".to_string())
                } else {
                    Ok(())
                }
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Observer { level: 3, .. }));
    }

    #[test]
    fn boundary_values_are_exact_zero() {
        let p = hallaire_test_problem(0.7).unwrap();
        let g = Grid1D::new(1.0, 1.0, 12, 8).unwrap();
        let out = solve(&p, g, &SolverOptions::default(), no_observer).unwrap();
        for y in out.state.levels() {
            assert_eq!(y[0].to_bits(), 0.0_f64.to_bits());
            assert_eq!(y[12].to_bits(), 0.0_f64.to_bits());
        }
    }

    #[test]
    fn integral_load_uses_simpson_row() {
        let cfg =
            ManufacturedConfig::new(1, vec![], 0.5, 1.0).with_integral_load(space_time(|_, _| 2.0));
        let p = crate::problems::manufactured_problem(cfg).unwrap();
        let g = Grid1D::new(1.0, 1.0, 8, 2).unwrap();
        let up = assemble_load_columns(&p, &g, 0.25).unwrap();
        assert_eq!(up.rank(), 1);
        assert_eq!(up.rows[0].len(), 7);
        let ones = vec![1.0; 7];
        // Simpson of the constant 2 over interior nodes of a zero-boundary vector
        let w: f64 = up.row_dots(&ones)[0];
        assert!((w - 2.0 * (1.0 - 2.0 * g.h / 3.0)).abs() < 1e-14);
        let odd = Grid1D::new(1.0, 1.0, 9, 2).unwrap();
        assert!(SolverState::new(&p, odd, &SolverOptions::default()).is_err());
    }

    #[test]
    fn backend_parsing() {
        assert_eq!("dense".parse::<Backend>().unwrap(), Backend::Dense);
        assert_eq!("woodbury".parse::<Backend>().unwrap(), Backend::Woodbury);
        assert!("lu".parse::<Backend>().is_err());
    }

    #[test]
    fn threshold_is_large_for_reference_problem() {
        assert!(tau_threshold(0.5, 1.0, 1.0).unwrap() > 1.0);
    }
}
