//! Tridiagonal system with a rank-2 correction, solved with one Thomas
//! factorisation plus a small capacitance system, and compared with dense LU.

use hallaire::stepper::{dense_solve, woodbury_solve, LowRankUpdate, Tridiagonal};

fn main() -> hallaire::Result<()> {
    let n = 9;
    let t = Tridiagonal::toeplitz(n, -1.0, 4.0, -1.0)?;
    let mut update = LowRankUpdate::default();
    update.push(
        (0..n).map(|i| 0.1 * (i as f64 + 1.0)).collect(),
        vec![(2, 0.3), (3, 0.7)],
        "x=0.35",
    );
    update.push(
        vec![-0.5; n],
        (0..n).map(|i| (i, 1.0 / n as f64)).collect(),
        "integral",
    );
    let b: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();

    let fast = woodbury_solve(&t, &update, &b)?;
    let dense = dense_solve(&t, &update, &b)?;
    for (i, (a, d)) in fast.iter().zip(&dense).enumerate() {
        println!("x[{i}] = {a:+.12}  dense {d:+.12}");
    }
    let diff = fast
        .iter()
        .zip(&dense)
        .map(|(a, d)| (a - d).abs())
        .fold(0.0, f64::max);
    println!("max difference {diff:.2e}");
    Ok(())
}
