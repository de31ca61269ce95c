//! Fourth-order compact approximation of `v''`.
//!
//! `δ² v` matches `H_h v''` to `O(h^4)`; the observed order is printed for
//! `v = sin(3πx)`.

use std::f64::consts::PI;

use hallaire::grid::convergence_order;
use hallaire::spatial::{apply_hh, second_difference};
use hallaire::Grid1D;

fn defect(n: usize) -> hallaire::Result<f64> {
    let grid = Grid1D::new(1.0, 1.0, n, 1)?;
    let k = 3.0 * PI;
    let v = grid.sample(|x| (k * x).sin());
    let vxx = grid.sample(|x| -k * k * (k * x).sin());
    let lhs = second_difference(&v, grid.h)?;
    let rhs = apply_hh(&vxx)?;
    Ok(lhs
        .iter()
        .zip(&rhs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

fn main() -> hallaire::Result<()> {
    let mut prev: Option<f64> = None;
    for n in [12usize, 24, 48, 96] {
        let e = defect(n)?;
        match prev {
            Some(p) => println!(
                "h = 1/{n:<3} defect {e:.4e}  order {:.3}",
                convergence_order(p, e, 2.0)?
            ),
            None => println!("h = 1/{n:<3} defect {e:.4e}"),
        }
        prev = Some(e);
    }
    Ok(())
}
