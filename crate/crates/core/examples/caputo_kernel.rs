//! Discrete Caputo derivative at half-integer levels.
//!
//! Prints the kernel weights, checks where `c_0 > c_1` switches on, and
//! measures the half-layer error for `u = t^3` against the exact derivative.

use hallaire::kernel::{
    alpha_threshold, caputo_exact_power, coeff_c, gamma_const, truncation_bound,
};
use hallaire::CaputoKernel;

fn main() -> hallaire::Result<()> {
    let alpha = 0.5;
    println!("alpha = {alpha}, gamma = {:.6}", gamma_const(alpha)?);
    for j in 0..5 {
        println!("  c_{j} = {:.8}", coeff_c(j, alpha)?);
    }
    let a0 = alpha_threshold();
    println!("c_0 > c_1 for alpha > {a0:.6}");
    for a in [a0 - 0.01, a0 + 0.01] {
        println!(
            "  alpha = {a:.4}: c_0 - c_1 = {:+.3e}",
            coeff_c(0, a)? - coeff_c(1, a)?
        );
    }

    println!("\nhalf-layer error for u = t^3 on [0, 1]");
    for m in [100usize, 200, 400] {
        let tau = 1.0 / m as f64;
        let kernel = CaputoKernel::new(alpha, tau, m)?;
        let history: Vec<f64> = (0..=m).map(|j| (j as f64 * tau).powi(3)).collect();
        let mut worst = 0.0_f64;
        for j in 0..m {
            let t = (j as f64 + 0.5) * tau;
            let approx = kernel.apply_half_layer_scalar(&history[..j + 2], j)?;
            worst = worst.max((approx - caputo_exact_power(3.0, alpha, t)).abs());
        }
        println!(
            "  tau = 1/{m:<4} max error {worst:.4e}  bound {:.4e}",
            truncation_bound(alpha, tau, 6.0)
        );
    }
    Ok(())
}
