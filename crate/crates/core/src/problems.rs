//! Continuous problem definitions and manufactured solutions.
//!
//! A [`ProblemSpec`] describes
//!
//! ```text
//! ∂_t^α u = u_xx + μ ∂_t u_xx + I u + f,   0 < x < l, 0 < t <= T,
//! u(0, t) = u(l, t) = 0,                   u(x, 0) = u0(x),
//! ```
//!
//! where the load `I u = Σ_k q_k(x, t) u(x_k, t)` couples every point to the
//! solution at fixed interior abscissae, optionally augmented by an integral
//! load `∫_0^l q(ξ, t) u(ξ, t) dξ`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use statrs::function::gamma::gamma;

use crate::error::{invalid, Result};
use crate::kernel::{caputo_exact_power, check_solver_alpha};

pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Wraps a closure as a [`SpaceTimeFn`].
pub fn space_time(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> SpaceTimeFn {
    Arc::new(f)
}

/// A load point `x_k` with its coefficient `q_k(x, t)`.
#[derive(Clone)]
pub struct PointLoad {
    pub x: f64,
    pub q: SpaceTimeFn,
}

impl PointLoad {
    pub fn new(x: f64, q: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { x, q: Arc::new(q) }
    }
}

impl fmt::Debug for PointLoad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointLoad").field("x", &self.x).finish()
    }
}

/// Analytic solution with the derivatives needed to evaluate the PDE residual.
pub trait ExactSolution: Send + Sync {
    fn value(&self, x: f64, t: f64) -> f64;
    /// Caputo derivative in time of order `α`.
    fn caputo(&self, x: f64, t: f64) -> f64;
    fn d2x(&self, x: f64, t: f64) -> f64;
    fn d2x_dt(&self, x: f64, t: f64) -> f64;
}

/// A time term `a · t^p` of a separable manufactured solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeTerm {
    pub coefficient: f64,
    pub power: f64,
}

impl TimeTerm {
    pub fn new(coefficient: f64, power: f64) -> Self {
        Self { coefficient, power }
    }
}

/// `u(x, t) = (1 + Σ a_r t^{p_r}) · sin(nπx/l)`.
#[derive(Debug, Clone)]
pub struct SeparableSolution {
    pub mode: u32,
    pub length: f64,
    pub alpha: f64,
    pub terms: Vec<TimeTerm>,
}

impl SeparableSolution {
    pub fn wavenumber(&self) -> f64 {
        self.mode as f64 * PI / self.length
    }

    pub fn spatial(&self, x: f64) -> f64 {
        (self.wavenumber() * x).sin()
    }

    pub fn temporal(&self, t: f64) -> f64 {
        1.0 + self
            .terms
            .iter()
            .map(|r| r.coefficient * t.powf(r.power))
            .sum::<f64>()
    }

    pub fn temporal_dt(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|r| r.coefficient * r.power * t.powf(r.power - 1.0))
            .sum()
    }

    pub fn temporal_caputo(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|r| r.coefficient * caputo_exact_power(r.power, self.alpha, t))
            .sum()
    }

    /// `max |T''(t)|` on `[0, t_max]`, bounded termwise (every term is monotone for `p >= 2`).
    pub fn temporal_second_derivative_bound(&self, t_max: f64) -> f64 {
        self.terms
            .iter()
            .map(|r| {
                let p = r.power;
                (r.coefficient * p * (p - 1.0)).abs()
                    * if p >= 2.0 {
                        t_max.powf(p - 2.0)
                    } else {
                        f64::INFINITY
                    }
            })
            .sum()
    }
}

impl ExactSolution for SeparableSolution {
    fn value(&self, x: f64, t: f64) -> f64 {
        self.temporal(t) * self.spatial(x)
    }

    fn caputo(&self, x: f64, t: f64) -> f64 {
        self.temporal_caputo(t) * self.spatial(x)
    }

    fn d2x(&self, x: f64, t: f64) -> f64 {
        let k = self.wavenumber();
        -k * k * self.value(x, t)
    }

    fn d2x_dt(&self, x: f64, t: f64) -> f64 {
        let k = self.wavenumber();
        -k * k * self.temporal_dt(t) * self.spatial(x)
    }
}

/// The continuous loaded problem.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub length: f64,
    pub final_time: f64,
    pub alpha: f64,
    pub mu: f64,
    pub loads: Vec<PointLoad>,
    pub integral_load: Option<SpaceTimeFn>,
    pub forcing: SpaceTimeFn,
    pub initial: SpaceFn,
    pub exact: Option<Arc<dyn ExactSolution>>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("length", &self.length)
            .field("final_time", &self.final_time)
            .field("alpha", &self.alpha)
            .field("mu", &self.mu)
            .field("loads", &self.loads)
            .field("integral_load", &self.integral_load.is_some())
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl ProblemSpec {
    /// Checks domain extents, `α`, `μ > 0` and the ordering `0 < x_1 < ... < x_m < l`.
    ///
    /// Boundedness of the load coefficients is part of the caller's contract
    /// and is not scanned at runtime.
    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0) {
            return Err(invalid(
                "l",
                format!("must be positive, got {}", self.length),
            ));
        }
        if !(self.final_time > 0.0) {
            return Err(invalid(
                "T",
                format!("must be positive, got {}", self.final_time),
            ));
        }
        check_solver_alpha(self.alpha)?;
        if !(self.mu > 0.0) {
            return Err(invalid("mu", format!("must be positive, got {}", self.mu)));
        }
        let mut prev = 0.0;
        for load in &self.loads {
            if !(load.x > prev && load.x < self.length) {
                return Err(invalid(
                    "loads",
                    format!(
                        "load points must satisfy 0 < x_1 < ... < x_m < l, got {}",
                        load.x
                    ),
                ));
            }
            prev = load.x;
        }
        Ok(())
    }

    /// Value of the load operator `I u` at `(x, t)` for a given function `u(·, t)`.
    pub fn load_term(&self, x: f64, t: f64, u: impl Fn(f64) -> f64) -> f64 {
        let mut acc: f64 = self.loads.iter().map(|l| (l.q)(x, t) * u(l.x)).sum();
        if let Some(q) = &self.integral_load {
            acc += gauss_legendre(|xi| q(xi, t) * u(xi), 0.0, self.length, 64);
        }
        acc
    }

    /// `∂^α u - u_xx - μ u_xxt - I u - f` for the attached exact solution.
    pub fn pde_residual(&self, x: f64, t: f64) -> Option<f64> {
        let u = self.exact.as_ref()?;
        let load = self.load_term(x, t, |xi| u.value(xi, t));
        Some(u.caputo(x, t) - u.d2x(x, t) - self.mu * u.d2x_dt(x, t) - load - (self.forcing)(x, t))
    }
}

/// Composite 5-point Gauss–Legendre quadrature over `panels` equal panels.
pub(crate) fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const NODES: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_47,
        0.478_628_670_499_366_47,
        0.236_926_885_056_189_08,
        0.236_926_885_056_189_08,
    ];
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * width;
            NODES
                .iter()
                .zip(WEIGHTS)
                .map(|(n, w)| w * f(mid + half * n))
                .sum::<f64>()
                * half
        })
        .sum()
}

/// Load points and coefficients of the reference test case:
/// `x = 0.2, 0.5, 0.8` with `q = e^{x+t}, sin(x+t), cos(x+t)`.
pub fn reference_loads() -> Vec<PointLoad> {
    vec![
        PointLoad::new(0.2, |x, t| (x + t).exp()),
        PointLoad::new(0.5, |x, t| (x + t).sin()),
        PointLoad::new(0.8, |x, t| (x + t).cos()),
    ]
}

/// Reference test case on `[0, 1] x [0, 1]` with `μ = 1`, three point loads and
/// exact solution `u = (t³ + t^{2+α} + 1) sin(3πx)`.
pub fn hallaire_test_problem(alpha: f64) -> Result<ProblemSpec> {
    check_solver_alpha(alpha)?;
    let mu = 1.0;
    let k2 = 9.0 * PI * PI;
    let loads = reference_loads();
    let load_shape: Vec<(f64, SpaceTimeFn)> = loads
        .iter()
        .map(|l| ((3.0 * PI * l.x).sin(), l.q.clone()))
        .collect();
    let g4 = gamma(4.0 - alpha);
    let g3 = gamma(3.0 + alpha);
    let forcing = move |x: f64, t: f64| {
        let time = t.powi(3) + t.powf(2.0 + alpha) + 1.0;
        let time_dt = 3.0 * t * t + (2.0 + alpha) * t.powf(1.0 + alpha);
        let caputo = 6.0 * t.powf(3.0 - alpha) / g4 + 0.5 * g3 * t * t;
        let s = (3.0 * PI * x).sin();
        let load: f64 = load_shape.iter().map(|(sk, q)| q(x, t) * sk).sum();
        caputo * s + k2 * time * s + k2 * mu * time_dt * s - load * time
    };
    let exact = SeparableSolution {
        mode: 3,
        length: 1.0,
        alpha,
        terms: vec![TimeTerm::new(1.0, 3.0), TimeTerm::new(1.0, 2.0 + alpha)],
    };
    let spec = ProblemSpec {
        name: "hallaire".into(),
        length: 1.0,
        final_time: 1.0,
        alpha,
        mu,
        loads,
        integral_load: None,
        forcing: Arc::new(forcing),
        initial: Arc::new(|x| (3.0 * PI * x).sin()),
        exact: Some(Arc::new(exact)),
    };
    spec.validate()?;
    Ok(spec)
}

/// Inputs of [`manufactured_problem`].
#[derive(Clone)]
pub struct ManufacturedConfig {
    pub mode: u32,
    pub terms: Vec<TimeTerm>,
    pub alpha: f64,
    pub mu: f64,
    pub length: f64,
    pub final_time: f64,
    pub loads: Vec<PointLoad>,
    pub integral_load: Option<SpaceTimeFn>,
}

impl ManufacturedConfig {
    /// Unit domain, no loads.
    pub fn new(mode: u32, terms: Vec<TimeTerm>, alpha: f64, mu: f64) -> Self {
        Self {
            mode,
            terms,
            alpha,
            mu,
            length: 1.0,
            final_time: 1.0,
            loads: Vec::new(),
            integral_load: None,
        }
    }

    pub fn with_loads(mut self, loads: Vec<PointLoad>) -> Self {
        self.loads = loads;
        self
    }

    pub fn with_integral_load(mut self, q: SpaceTimeFn) -> Self {
        self.integral_load = Some(q);
        self
    }
}

/// Problem whose exact solution is `(1 + Σ a_r t^{p_r}) sin(nπx/l)`, with the
/// forcing assembled in closed form.
///
/// Powers must exceed 1 so the solution is twice differentiable in time.
pub fn manufactured_problem(cfg: ManufacturedConfig) -> Result<ProblemSpec> {
    check_solver_alpha(cfg.alpha)?;
    if cfg.mode == 0 {
        return Err(invalid("mode", "spatial mode count must be positive"));
    }
    if let Some(bad) = cfg
        .terms
        .iter()
        .find(|r| !(r.power > 1.0) || !r.coefficient.is_finite())
    {
        return Err(invalid(
            "terms",
            format!("time powers must exceed 1, got {}", bad.power),
        ));
    }
    let exact = Arc::new(SeparableSolution {
        mode: cfg.mode,
        length: cfg.length,
        alpha: cfg.alpha,
        terms: cfg.terms.clone(),
    });
    let mu = cfg.mu;
    let k2 = exact.wavenumber().powi(2);
    let load_shape: Vec<(f64, SpaceTimeFn)> = cfg
        .loads
        .iter()
        .map(|l| (exact.spatial(l.x), l.q.clone()))
        .collect();
    let integral = cfg.integral_load.clone();
    let length = cfg.length;
    let sol = exact.clone();
    let forcing = move |x: f64, t: f64| {
        let time = sol.temporal(t);
        let s = sol.spatial(x);
        let mut load: f64 = load_shape.iter().map(|(sk, q)| q(x, t) * sk).sum();
        if let Some(q) = &integral {
            load += gauss_legendre(|xi| q(xi, t) * sol.spatial(xi), 0.0, length, 64);
        }
        (sol.temporal_caputo(t) + k2 * time + k2 * mu * sol.temporal_dt(t)) * s - load * time
    };
    let init = exact.clone();
    let spec = ProblemSpec {
        name: format!("manufactured(n={})", cfg.mode),
        length: cfg.length,
        final_time: cfg.final_time,
        alpha: cfg.alpha,
        mu,
        loads: cfg.loads,
        integral_load: cfg.integral_load,
        forcing: Arc::new(forcing),
        initial: Arc::new(move |x| init.value(x, 0.0)),
        exact: Some(exact),
    };
    spec.validate()?;
    Ok(spec)
}

/// The reference exact solution with an integral load `q(x, t) = e^{x+t}`
/// in place of the point loads.
pub fn integral_load_problem(alpha: f64) -> Result<ProblemSpec> {
    let cfg = ManufacturedConfig::new(
        3,
        vec![TimeTerm::new(1.0, 3.0), TimeTerm::new(1.0, 2.0 + alpha)],
        alpha,
        1.0,
    )
    .with_integral_load(space_time(|x, t| (x + t).exp()));
    let mut spec = manufactured_problem(cfg)?;
    spec.name = "hallaire-integral".into();
    Ok(spec)
}

/// Problems selectable by name from the study harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BundledProblem {
    Hallaire,
    HallaireIntegral,
}

impl BundledProblem {
    pub const ALL: [BundledProblem; 2] =
        [BundledProblem::Hallaire, BundledProblem::HallaireIntegral];

    pub fn build(self, alpha: f64) -> Result<ProblemSpec> {
        match self {
            BundledProblem::Hallaire => hallaire_test_problem(alpha),
            BundledProblem::HallaireIntegral => integral_load_problem(alpha),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BundledProblem::Hallaire => "hallaire",
            BundledProblem::HallaireIntegral => "hallaire-integral",
        }
    }
}

impl std::str::FromStr for BundledProblem {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "hallaire" => Ok(BundledProblem::Hallaire),
            "hallaire-integral" => Ok(BundledProblem::HallaireIntegral),
            other => Err(invalid("problem", format!("unknown problem `{other}`"))),
        }
    }
}
