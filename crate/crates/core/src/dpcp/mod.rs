//! Three solvers for `min ‖X̃ᵀB‖` over orthonormal `B`: a recursion of linear
//! programs, iteratively reweighted least squares, and a denoised alternating
//! scheme.

mod denoised;
mod irls;
mod lp;

pub use denoised::{dpcp_d, dpcp_d_subspace, soft_threshold, DenoisedRun};
pub use irls::dpcp_irls;
pub use lp::{dpcp_lp, lp_recursion, LpRecursion};

use crate::error::{invalid, Result};
use crate::numerics::{normalize_columns, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Stop once the relative objective decrease is at most this.
    pub epsilon: f64,
    pub t_max: usize,
    /// Weight floor for IRLS and ridge term for the denoised b-step.
    pub delta: f64,
    /// Soft threshold; `None` means `1/√L` for `L` data points.
    pub tau: Option<f64>,
}

impl SolverConfig {
    pub fn lp() -> Self {
        Self { epsilon: 1e-3, t_max: 10, delta: 1e-6, tau: None }
    }

    pub fn irls() -> Self {
        Self { t_max: 100, ..Self::lp() }
    }

    pub fn denoised() -> Self {
        Self { t_max: 1000, ..Self::lp() }
    }

    /// Denoised defaults with `τ = max(σ, 1/√L)` for known noise level `σ`.
    pub fn denoised_with_noise(sigma: f64, n_points: usize) -> Self {
        let base = 1.0 / (n_points.max(1) as f64).sqrt();
        Self { tau: Some(sigma.max(base)), ..Self::denoised() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(invalid(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.t_max == 0 {
            return Err(invalid("t_max must be at least 1"));
        }
        if !(self.delta > 0.0) {
            return Err(invalid(format!("delta must be positive, got {}", self.delta)));
        }
        if let Some(t) = self.tau {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(invalid(format!("tau must be finite and nonnegative, got {t}")));
            }
        }
        Ok(())
    }

    pub fn tau_for(&self, n_points: usize) -> f64 {
        self.tau.unwrap_or_else(|| 1.0 / (n_points.max(1) as f64).sqrt())
    }
}

#[derive(Debug, Clone)]
pub struct SubspaceEstimate {
    /// `D x c`, orthonormal columns spanning the estimated complement.
    pub complement_basis: Matrix,
    /// Objective values, all components concatenated; component `i`
    /// contributes `iterations_per_component[i] + 1` entries (its initial
    /// value first). For IRLS there is a single joint component.
    pub objective_trace: Vec<f64>,
    pub iterations_per_component: Vec<usize>,
    /// Whether each component stopped on the tolerance rather than `t_max`.
    pub converged: Vec<bool>,
}

impl SubspaceEstimate {
    /// Trace slice belonging to component `i`.
    pub fn trace_of(&self, i: usize) -> &[f64] {
        let start: usize = self.iterations_per_component[..i].iter().map(|k| k + 1).sum();
        &self.objective_trace[start..start + self.iterations_per_component[i] + 1]
    }

    pub fn total_iterations(&self) -> usize {
        self.iterations_per_component.iter().sum()
    }
}

/// Relative decrease `(prev − next) / prev`, zero when `prev` is zero.
pub(crate) fn relative_decrease(prev: f64, next: f64) -> f64 {
    if prev > 0.0 {
        (prev - next) / prev
    } else {
        0.0
    }
}

pub(crate) fn prepare(data: &Matrix, c: usize) -> Result<Matrix> {
    let (dim, l) = data.shape();
    if dim == 0 || l == 0 {
        return Err(invalid("data must be nonempty"));
    }
    if c == 0 || c >= dim {
        return Err(invalid(format!("codimension must satisfy 1 <= c < D, got c={c}, D={dim}")));
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(invalid("data contains non-finite entries"));
    }
    Ok(normalize_columns(data))
}
