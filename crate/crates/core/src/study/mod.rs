//! Refinement studies against manufactured solutions.
//!
//! A study runs the solver over a ladder of grids for each fractional order,
//! measures the error `z = y - u` in three norms and derives observed
//! convergence orders between consecutive rungs.

mod config;
mod reference;
mod report;

pub use config::{parse_config, GridSize, StudySettings};
pub use reference::{
    compare, residual_gate, self_check, CellCheck, Column, Reading, ReferenceTable,
    SelfCheckSummary, Tolerances, RESIDUAL_LIMIT,
};
pub use report::{emit_report, parse_csv, write_report, ReportFormat, CSV_HEADER};

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::grid::{convergence_order, norm_forward_grad_l2, norm_grad_l2, norm_max, Grid1D};
use crate::problems::BundledProblem;
use crate::stepper::{solve, SolverOptions};

/// Which grid dimension the ladder refines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refinement {
    Spatial,
    Temporal,
}

impl std::str::FromStr for Refinement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "spatial" | "space" => Ok(Refinement::Spatial),
            "temporal" | "time" => Ok(Refinement::Temporal),
            other => Err(invalid(
                "mode",
                format!("unknown refinement mode `{other}`"),
            )),
        }
    }
}

/// One grid of a ladder: `N` spatial intervals and `M` time steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rung {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub mode: Refinement,
    pub alphas: Vec<f64>,
    pub ladder: Vec<Rung>,
    pub problem: BundledProblem,
    pub options: SolverOptions,
    pub tolerances: Tolerances,
}

impl StudyConfig {
    /// `table1` layout: `N = 6, 12, 24` at `M = 10000`.
    pub fn table1() -> Self {
        Self {
            mode: Refinement::Spatial,
            alphas: vec![0.1, 0.5, 0.9],
            ladder: [6, 12, 24].iter().map(|&n| Rung { n, m: 10_000 }).collect(),
            problem: BundledProblem::Hallaire,
            options: SolverOptions::default(),
            tolerances: Tolerances::default(),
        }
    }

    /// `table2` layout at `N = 1000`: `M = 10 .. 160`, or up to 5120 when `deep`.
    pub fn table2(deep: bool) -> Self {
        let top = if deep { 5120 } else { 160 };
        let ladder = std::iter::successors(Some(10usize), |m| Some(m * 2))
            .take_while(|&m| m <= top)
            .map(|m| Rung { n: 1000, m })
            .collect();
        Self {
            mode: Refinement::Temporal,
            alphas: vec![0.1, 0.5, 0.9],
            ladder,
            problem: BundledProblem::Hallaire,
            options: SolverOptions::default(),
            tolerances: Tolerances::default(),
        }
    }

    /// Checks that the ladder refines strictly in one dimension and keeps the other fixed.
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(invalid("alpha", "at least one order is required"));
        }
        if self.ladder.is_empty() {
            return Err(invalid("ladder", "at least one rung is required"));
        }
        for pair in self.ladder.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let ok = match self.mode {
                Refinement::Spatial => b.n > a.n && b.m == a.m,
                Refinement::Temporal => b.m > a.m && b.n == a.n,
            };
            if !ok {
                return Err(invalid(
                    "ladder",
                    format!(
                        "rungs ({}, {}) -> ({}, {}) do not refine only the {:?} dimension",
                        a.n, a.m, b.n, b.m, self.mode
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// The three error measures of one solve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorNorms {
    /// Maximum absolute error.
    pub c: f64,
    /// Discrete `‖z‖_0`.
    pub l2: f64,
    /// Interior forward-difference gradient norm.
    pub grad: f64,
}

impl ErrorNorms {
    fn max(self, o: ErrorNorms) -> Self {
        Self {
            c: self.c.max(o.c),
            l2: self.l2.max(o.l2),
            grad: self.grad.max(o.grad),
        }
    }

    fn orders(prev: ErrorNorms, cur: ErrorNorms, ratio: f64) -> Result<Self> {
        Ok(Self {
            c: convergence_order(prev.c, cur.c, ratio)?,
            l2: convergence_order(prev.l2, cur.l2, ratio)?,
            grad: convergence_order(prev.grad, cur.grad, ratio)?,
        })
    }
}

/// Solver-side details of a computed row (absent for rows read back from CSV).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RungDetails {
    pub rung: Rung,
    pub step: f64,
    /// Errors at the final level only.
    pub final_level: ErrorNorms,
    pub final_orders: Option<ErrorNorms>,
    /// `max_j ‖z^j_x̄]|_0` summed over all `N` intervals.
    pub grad_full: f64,
}

/// One table row. `max_levels` holds `‖z‖_C` over the whole space-time grid and
/// the maxima over levels of the two mesh norms.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub alpha: f64,
    pub step_label: String,
    pub max_levels: ErrorNorms,
    pub orders: Option<ErrorNorms>,
    pub details: Option<RungDetails>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub mode: Refinement,
    pub rows: Vec<ReportRow>,
}

fn step_label(extent: f64, count: usize) -> String {
    if extent == 1.0 {
        format!("1/{count}")
    } else {
        format!("{}", extent / count as f64)
    }
}

struct RungResult {
    max_levels: ErrorNorms,
    final_level: ErrorNorms,
    grad_full: f64,
}

fn run_rung(config: &StudyConfig, alpha: f64, rung: Rung) -> Result<RungResult> {
    let problem = config.problem.build(alpha)?;
    let exact = problem
        .exact
        .clone()
        .ok_or_else(|| Error::MissingExactSolution(problem.name.clone()))?;
    let grid = Grid1D::new(problem.length, problem.final_time, rung.n, rung.m)?;
    let mut acc = ErrorNorms::default();
    let mut last = ErrorNorms::default();
    let mut grad_full = 0.0_f64;
    let mut z = vec![0.0; rung.n + 1];
    solve(
        &problem,
        grid,
        &config.options,
        |_: usize, t: f64, y: &[f64]| {
            for (i, zi) in z.iter_mut().enumerate() {
                *zi = y[i] - exact.value(grid.x(i), t);
            }
            // exact boundary data is zero up to rounding in sin(nπ)
            z[0] = 0.0;
            z[rung.n] = 0.0;
            let norms = ErrorNorms {
                c: norm_max(&z).map_err(|e| e.to_string())?,
                l2: grid.l2(&z).map_err(|e| e.to_string())?,
                grad: norm_forward_grad_l2(&z, grid.h).map_err(|e| e.to_string())?,
            };
            grad_full = grad_full.max(norm_grad_l2(&z, grid.h).map_err(|e| e.to_string())?);
            acc = acc.max(norms);
            last = norms;
            Ok(())
        },
    )?;
    Ok(RungResult {
        max_levels: acc,
        final_level: last,
        grad_full,
    })
}

/// Runs every `(α, rung)` pair (in parallel) and assembles the report in
/// `(α, rung)` order.
pub fn run_study(config: &StudyConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let probe = config.problem.build(config.alphas[0])?;
    if probe.exact.is_none() {
        return Err(Error::MissingExactSolution(probe.name));
    }
    let (length, final_time) = (probe.length, probe.final_time);
    let jobs: Vec<(usize, usize)> = (0..config.alphas.len())
        .flat_map(|a| (0..config.ladder.len()).map(move |r| (a, r)))
        .collect();
    let results: Vec<RungResult> = jobs
        .par_iter()
        .map(|&(a, r)| run_rung(config, config.alphas[a], config.ladder[r]))
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(jobs.len());
    for (&(a, r), res) in jobs.iter().zip(&results) {
        let rung = config.ladder[r];
        let (step, label) = match config.mode {
            Refinement::Spatial => (length / rung.n as f64, step_label(length, rung.n)),
            Refinement::Temporal => (final_time / rung.m as f64, step_label(final_time, rung.m)),
        };
        let (orders, final_orders) = if r == 0 {
            (None, None)
        } else {
            let prev: &ReportRow = rows.last().expect("previous rung");
            let prev_details = prev.details.expect("computed row");
            let ratio = prev_details.step / step;
            (
                Some(ErrorNorms::orders(prev.max_levels, res.max_levels, ratio)?),
                Some(ErrorNorms::orders(
                    prev_details.final_level,
                    res.final_level,
                    ratio,
                )?),
            )
        };
        rows.push(ReportRow {
            alpha: config.alphas[a],
            step_label: label,
            max_levels: res.max_levels,
            orders,
            details: Some(RungDetails {
                rung,
                step,
                final_level: res.final_level,
                final_orders,
                grad_full: res.grad_full,
            }),
        });
    }
    Ok(ConvergenceReport {
        mode: config.mode,
        rows,
    })
}
