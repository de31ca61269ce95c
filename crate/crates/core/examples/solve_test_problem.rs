//! Solves the loaded reference problem once and tracks the error per level.
//!
//! Usage: `cargo run --release --example solve_test_problem -- [alpha] [N] [M]`

use hallaire::grid::norm_max;
use hallaire::{hallaire_test_problem, solve, Grid1D, SolverOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().map_or(Ok(0.5), |s| s.parse())?;
    let n: usize = args.next().map_or(Ok(24), |s| s.parse())?;
    let m: usize = args.next().map_or(Ok(400), |s| s.parse())?;

    let problem = hallaire_test_problem(alpha)?;
    let exact = problem
        .exact
        .clone()
        .expect("reference problem has an exact solution");
    let grid = Grid1D::new(problem.length, problem.final_time, n, m)?;

    let mut worst = (0.0_f64, 0.0);
    let report_every = (m / 8).max(1);
    let outcome = solve(
        &problem,
        grid,
        &SolverOptions::default(),
        |j: usize, t: f64, y: &[f64]| {
            let z: Vec<f64> = (0..=n).map(|i| y[i] - exact.value(grid.x(i), t)).collect();
            let e = norm_max(&z).map_err(|e| e.to_string())?;
            if e > worst.0 {
                worst = (e, t);
            }
            if j.is_multiple_of(report_every) || j == m {
                println!("t = {t:.4}  max|y - u| = {e:.4e}");
            }
            Ok(())
        },
    )?;

    let y = outcome.state.current();
    println!(
        "\ny(0.5, T) = {:.8}, u(0.5, T) = {:.8}",
        y[n / 2],
        exact.value(0.5, problem.final_time)
    );
    println!("largest error {:.4e} at t = {:.4}", worst.0, worst.1);
    Ok(())
}
