//! Builds a custom manufactured problem with two loads, checks its PDE
//! residual and runs a short solve on it.

use std::sync::Arc;

use hallaire::grid::norm_max;
use hallaire::problems::{manufactured_problem, ManufacturedConfig, PointLoad, TimeTerm};
use hallaire::{solve, Grid1D, SolverOptions};

fn main() -> hallaire::Result<()> {
    let alpha = 0.3;
    let cfg = ManufacturedConfig::new(
        2,
        vec![TimeTerm::new(0.5, 2.0), TimeTerm::new(-1.0, 2.5)],
        alpha,
        0.1,
    )
    .with_loads(vec![
        PointLoad::new(0.3, |x, t| 1.0 + x * t),
        PointLoad::new(0.65, |_, t| (-t).exp()),
    ]);
    let problem = manufactured_problem(cfg)?;
    let worst = (1..10)
        .flat_map(|i| (1..10).map(move |j| (i as f64 / 10.0, j as f64 / 10.0)))
        .filter_map(|(x, t)| problem.pde_residual(x, t))
        .fold(0.0_f64, |a, r| a.max(r.abs()));
    println!("{}: max residual on a 9x9 sample {worst:.2e}", problem.name);

    let exact: Arc<_> = problem.exact.clone().expect("manufactured");
    let grid = Grid1D::new(1.0, 1.0, 40, 200)?;
    let outcome = solve(
        &problem,
        grid,
        &SolverOptions::default(),
        hallaire::stepper::no_observer,
    )?;
    let z: Vec<f64> = (0..=grid.n)
        .map(|i| outcome.state.current()[i] - exact.value(grid.x(i), 1.0))
        .collect();
    println!("N = 40, M = 200: error at T = {:.4e}", norm_max(&z)?);
    Ok(())
}
