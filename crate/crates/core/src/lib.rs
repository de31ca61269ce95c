//! Compact finite-difference solver for the loaded time-fractional Hallaire
//! (pseudoparabolic) equation
//!
//! ```text
//! ∂_t^α u = u_xx + μ ∂_t u_xx + Σ_k q_k(x, t) u(x_k, t) + f(x, t)
//! ```
//!
//! on `(0, l) x (0, T]` with homogeneous Dirichlet data. Time is discretised
//! with an L1-type Caputo approximation evaluated on half layers, space with
//! the fourth-order compact operator `H_h`, giving `O(h⁴ + τ^{2-α})`.
//!
//! Module map:
//!
//! - [`grid`]: uniform meshes and discrete norms
//! - [`kernel`]: Caputo weights, the half-layer operator and its truncation bound
//! - [`spatial`]: `δ²`, `H_h`, load-point interpolation, Simpson weights
//! - [`stepper`]: assembly, Thomas/Woodbury solves, the marching loop
//! - [`problems`]: problem data and manufactured solutions
//! - [`study`]: refinement studies, report output and reference-table checks

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod kernel;
pub mod problems;
pub mod spatial;
pub mod stepper;
pub mod study;

pub use error::{Error, Result};
pub use grid::Grid1D;
pub use kernel::CaputoKernel;
pub use problems::{hallaire_test_problem, ProblemSpec};
pub use stepper::{solve, Backend, SolverOptions, SolverState};
