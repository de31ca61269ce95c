//! Oracles shared by the integration tests. Everything here is written
//! directly from the defining formulas and does not call into the library's
//! numerics.

#![allow(dead_code)]

use statrs::function::gamma::gamma;

/// Composite Gauss-Legendre (8 points per panel) on `[a, b]`.
pub fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_3,
    ];
    const W: [f64; 4] = [
        0.362_683_783_378_362,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
    ];
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * width;
            let half = 0.5 * width;
            X.iter()
                .zip(W)
                .map(|(x, w)| w * (f(mid + half * x) + f(mid - half * x)))
                .sum::<f64>()
                * half
        })
        .sum()
}

/// Caputo derivative of order `alpha` at `t` from the first derivative `du`,
/// after substituting `s = (t - η)^{1-α}` to remove the endpoint singularity.
pub fn caputo_quadrature(du: impl Fn(f64) -> f64, alpha: f64, t: f64) -> f64 {
    let e = 1.0 - alpha;
    let upper = t.powf(e);
    let f = |s: f64| du((t - s.powf(1.0 / e)).max(0.0));
    // geometric panels toward both ends: s^{1/(1-α)} is not smooth at s = 0
    // for small α, and `du` itself may have a weak singularity at η = 0
    let mid = 0.5 * upper;
    let mut total = 0.0;
    let mut width = mid;
    for _ in 0..60 {
        let next = 0.5 * width;
        total += quad(f, next, width, 4);
        total += quad(f, upper - width, upper - next, 4);
        width = next;
    }
    total += quad(f, 0.0, width, 1) + quad(f, upper - width, upper, 1);
    total / gamma(2.0 - alpha)
}

/// Half-layer L1 weights written out from their definition.
pub fn weight(j: usize, alpha: f64) -> f64 {
    if j == 0 {
        2.0_f64.powf(alpha - 1.0)
    } else {
        let j = j as f64;
        (j + 0.5).powf(1.0 - alpha) - (j - 0.5).powf(1.0 - alpha)
    }
}

/// Gaussian elimination with partial pivoting on a dense row-major copy.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            let pivot_row = a[k].clone();
            for (x, p) in a[i][k..].iter_mut().zip(&pivot_row[k..]) {
                *x -= f * p;
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|c| a[k][c] * x[c]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x
}

/// Cubic Lagrange weights at `x` through nodes `(a-1..=a+2) h`, `a = floor(x/h)`.
pub fn cubic_weights(x: f64, h: f64) -> (usize, [f64; 4]) {
    let a = (x / h).floor() as usize;
    let nodes: Vec<f64> = (0..4).map(|k| (a + k) as f64 * h - h).collect();
    let mut w = [0.0; 4];
    for k in 0..4 {
        w[k] = (0..4)
            .filter(|&m| m != k)
            .map(|m| (x - nodes[m]) / (nodes[k] - nodes[m]))
            .product();
    }
    (a - 1, w)
}

pub fn compact_mean(v: &[f64], i: usize) -> f64 {
    (v[i - 1] + 10.0 * v[i] + v[i + 1]) / 12.0
}

pub fn second_diff(v: &[f64], i: usize, h: f64) -> f64 {
    (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h)
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}
