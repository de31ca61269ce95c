//! Half-layer L1 approximation of the Caputo derivative.
//!
//! The derivative at `t_{j+1/2}` is approximated by
//!
//! ```text
//! Δ u = τ^{-α}/Γ(2-α) · Σ_{s=0}^{j} c_{j-s} (u^{s+1} - u^s)
//! ```
//!
//! with `c_0 = 2^{α-1}` and `c_j = (j+1/2)^{1-α} - (j-1/2)^{1-α}` for `j >= 1`.
//! Only the last interval `[t_j, t_{j+1/2}]` differs from the classical L1
//! weights, which is what keeps the second-order time discretisation of the
//! pseudoparabolic term consistent with the fractional one.

use statrs::function::gamma::gamma;

use crate::error::{invalid, Error, Result};

/// Lower/upper limits accepted for the fractional order at the solver API.
pub const ALPHA_MIN: f64 = 0.01;
pub const ALPHA_MAX: f64 = 0.99;

/// Order below which `c_0 <= c_1`, i.e. `log_3(3/2)`.
pub fn alpha_threshold() -> f64 {
    1.5_f64.ln() / 3.0_f64.ln()
}

fn check_open_unit(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

pub(crate) fn check_solver_alpha(alpha: f64) -> Result<()> {
    if !(alpha > ALPHA_MIN && alpha < ALPHA_MAX) {
        return Err(invalid(
            "alpha",
            format!("must lie in ({ALPHA_MIN}, {ALPHA_MAX}), got {alpha}"),
        ));
    }
    Ok(())
}

#[inline]
fn coeff_unchecked(j: usize, alpha: f64) -> f64 {
    let e = 1.0 - alpha;
    if j == 0 {
        0.5_f64.powf(e)
    } else {
        let jf = j as f64;
        (jf + 0.5).powf(e) - (jf - 0.5).powf(e)
    }
}

/// Kernel weight `c_j^(α)`.
pub fn coeff_c(j: usize, alpha: f64) -> Result<f64> {
    check_open_unit(alpha)?;
    Ok(coeff_unchecked(j, alpha))
}

/// Modified weight `c̄_j^(α)`: 1 at `j = 0`, otherwise `c_j^(α)`.
pub fn coeff_c_bar(j: usize, alpha: f64) -> Result<f64> {
    check_open_unit(alpha)?;
    Ok(if j == 0 {
        1.0
    } else {
        coeff_unchecked(j, alpha)
    })
}

/// `γ = (2^{1-α} - 1) / (2^{1-α} Γ(2-α))`.
pub fn gamma_const(alpha: f64) -> Result<f64> {
    check_open_unit(alpha)?;
    let p = 2.0_f64.powf(1.0 - alpha);
    Ok((p - 1.0) / (p * gamma(2.0 - alpha)))
}

/// Exact Caputo derivative of `t^p`: `Γ(p+1)/Γ(p+1-α) · t^{p-α}`.
pub fn caputo_exact_power(p: f64, alpha: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    gamma(p + 1.0) / gamma(p + 1.0 - alpha) * t.powf(p - alpha)
}

/// Truncation bound for the half-layer operator given `max |u''|` on `[0, t_{j+1}]`.
pub fn truncation_bound(alpha: f64, tau: f64, max_second_derivative: f64) -> f64 {
    2.0_f64.powf(alpha) * max_second_derivative / (4.0 * gamma(2.0 - alpha))
        * ((1.0 - alpha) / 2.0 + 1.0)
        * tau.powf(2.0 - alpha)
}

/// Coefficient cache and scale factors for one `(α, τ)` pair.
#[derive(Debug, Clone)]
pub struct CaputoKernel {
    alpha: f64,
    tau: f64,
    beta: f64,
    gamma: f64,
    coeffs: Vec<f64>,
}

impl CaputoKernel {
    /// Kernel with coefficients cached for indices `0..=max_index`.
    pub fn new(alpha: f64, tau: f64, max_index: usize) -> Result<Self> {
        check_solver_alpha(alpha)?;
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid("tau", format!("must be positive, got {tau}")));
        }
        let mut kernel = Self {
            alpha,
            tau,
            beta: tau.powf(-alpha) / gamma(2.0 - alpha),
            gamma: gamma_const(alpha)?,
            coeffs: Vec::new(),
        };
        kernel.extend_to(max_index);
        Ok(kernel)
    }

    /// Ensures coefficients up to `max_index` are cached.
    pub fn extend_to(&mut self, max_index: usize) {
        let start = self.coeffs.len();
        if max_index + 1 > start {
            self.coeffs
                .extend((start..=max_index).map(|j| coeff_unchecked(j, self.alpha)));
        }
    }

    /// Replaces `c_0`. Only useful for experiments and negative controls:
    /// any value other than `2^{α-1}` breaks the consistency of the scheme.
    pub fn with_leading_coefficient(mut self, c0: f64) -> Self {
        if self.coeffs.is_empty() {
            self.coeffs.push(c0);
        } else {
            self.coeffs[0] = c0;
        }
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `β = τ^{-α} / Γ(2-α)`, the factor multiplying the weighted difference sum.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn cached_len(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn c(&self, j: usize) -> f64 {
        match self.coeffs.get(j) {
            Some(&c) => c,
            None => coeff_unchecked(j, self.alpha),
        }
    }

    #[inline]
    pub fn c_bar(&self, j: usize) -> f64 {
        if j == 0 {
            1.0
        } else {
            self.c(j)
        }
    }

    fn check_history(available: usize, j: usize) -> Result<()> {
        if available < j + 2 {
            return Err(Error::InsufficientHistory {
                needed: j + 2,
                available,
            });
        }
        Ok(())
    }

    fn weighted_sum(&self, history: &[f64], j: usize, weight: impl Fn(usize) -> f64) -> f64 {
        (0..=j)
            .map(|s| weight(j - s) * (history[s + 1] - history[s]))
            .sum::<f64>()
            * self.beta
    }

    /// Discrete derivative at `t_{j+1/2}` of a scalar history `u^0..u^{j+1}`.
    pub fn apply_half_layer_scalar(&self, history: &[f64], j: usize) -> Result<f64> {
        Self::check_history(history.len(), j)?;
        Ok(self.weighted_sum(history, j, |k| self.c(k)))
    }

    /// Componentwise discrete derivative of vector levels `u^0..u^{j+1}`.
    pub fn apply_half_layer<L: AsRef<[f64]>>(&self, history: &[L], j: usize) -> Result<Vec<f64>> {
        Self::check_history(history.len(), j)?;
        let width = history[0].as_ref().len();
        let mut out = vec![0.0; width];
        for s in 0..=j {
            let c = self.c(j - s);
            let (lo, hi) = (history[s].as_ref(), history[s + 1].as_ref());
            if lo.len() != width || hi.len() != width {
                return Err(Error::LengthMismatch {
                    expected: width,
                    actual: if lo.len() != width {
                        lo.len()
                    } else {
                        hi.len()
                    },
                });
            }
            for ((o, a), b) in out.iter_mut().zip(lo).zip(hi) {
                *o += c * (b - a);
            }
        }
        out.iter_mut().for_each(|o| *o *= self.beta);
        Ok(out)
    }

    /// The two terms of `Δ u = Δ̄ u - γ τ^{1-α} u_t^{j+1}`: returns
    /// `(Δ̄ u, γ τ^{1-α} (u^{j+1} - u^j)/τ)`.
    pub fn split_transformed(&self, history: &[f64], j: usize) -> Result<(f64, f64)> {
        Self::check_history(history.len(), j)?;
        let bar = self.weighted_sum(history, j, |k| self.c_bar(k));
        let correction =
            self.gamma * self.tau.powf(1.0 - self.alpha) * (history[j + 1] - history[j]) / self.tau;
        Ok((bar, correction))
    }
}
