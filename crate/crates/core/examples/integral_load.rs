//! Nonlocal variant: the point loads replaced by `∫ q(ξ, t) u(ξ, t) dξ`,
//! discretised with Simpson's rule. Prints a temporal refinement.

use hallaire::grid::{convergence_order, norm_max};
use hallaire::problems::integral_load_problem;
use hallaire::{solve, Grid1D, SolverOptions};

fn main() -> hallaire::Result<()> {
    let alpha = 0.5;
    let problem = integral_load_problem(alpha)?;
    let exact = problem.exact.clone().expect("manufactured");
    let mut prev: Option<f64> = None;
    for m in [10usize, 20, 40, 80] {
        let grid = Grid1D::new(problem.length, problem.final_time, 200, m)?;
        let mut worst = 0.0_f64;
        solve(
            &problem,
            grid,
            &SolverOptions::default(),
            |_: usize, t: f64, y: &[f64]| {
                let z: Vec<f64> = (0..=grid.n)
                    .map(|i| y[i] - exact.value(grid.x(i), t))
                    .collect();
                worst = worst.max(norm_max(&z).map_err(|e| e.to_string())?);
                Ok(())
            },
        )?;
        let order = prev.map(|p| convergence_order(p, worst, 2.0)).transpose()?;
        match order {
            Some(o) => println!("tau = 1/{m:<3} max error {worst:.4e}  order {o:.3}"),
            None => println!("tau = 1/{m:<3} max error {worst:.4e}"),
        }
        prev = Some(worst);
    }
    Ok(())
}
