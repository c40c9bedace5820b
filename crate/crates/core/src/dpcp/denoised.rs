use super::{prepare, relative_decrease, SolverConfig, SubspaceEstimate};
use crate::error::{invalid, Result};
use crate::numerics::{
    canonical_sign, canonical_signs, complement_basis, normalize_columns, smallest_right_singular_vectors, Matrix,
    SpdFactor, UnitVector, Vector,
};

/// `sign(v_i) · max(|v_i| − τ, 0)` elementwise.
pub fn soft_threshold(v: &Vector, tau: f64) -> Vector {
    v.map(|x| x.signum() * (x.abs() - tau).max(0.0))
}

#[derive(Debug, Clone)]
pub struct DenoisedRun {
    pub y: Vector,
    pub b: UnitVector,
    /// `J(y, b) = τ‖y‖₁ + ½‖y − X̃ᵀb‖₂²`, starting from `(0, b_0)`.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// The b-step produced `‖ξ‖ ≤ 1e-12`; the previous `b` was kept.
    pub degenerate: bool,
    pub tau: f64,
}

fn objective(x: &Matrix, y: &Vector, b: &Vector, tau: f64) -> f64 {
    tau * y.lp_norm(1) + 0.5 * (y - x.tr_mul(b)).norm_squared()
}

fn run(x: &Matrix, cfg: &SolverConfig, tau: f64) -> Result<DenoisedRun> {
    let dim = x.nrows();
    let mut b = smallest_right_singular_vectors(&x.transpose(), 1)?.column(0).into_owned();
    let mut gram = x * x.transpose();
    for i in 0..dim {
        gram[(i, i)] += cfg.delta;
    }
    let gram = (&gram + gram.transpose()) * 0.5;
    let factor = SpdFactor::new(&gram)?;
    let mut y = Vector::zeros(x.ncols());
    let mut trace = vec![objective(x, &y, &b, tau)];
    let mut converged = false;
    let mut degenerate = false;
    let mut iterations = 0;
    for _ in 0..cfg.t_max {
        y = soft_threshold(&x.tr_mul(&b), tau);
        let xi = factor.solve(&(x * &y))?;
        let norm = xi.norm();
        iterations += 1;
        let prev = *trace.last().unwrap();
        if norm <= 1e-12 {
            degenerate = true;
            converged = true;
            trace.push(objective(x, &y, &b, tau));
            break;
        }
        b = xi / norm;
        let j = objective(x, &y, &b, tau);
        trace.push(j);
        if relative_decrease(prev, j) <= cfg.epsilon {
            converged = true;
            break;
        }
    }
    canonical_sign(&mut b);
    Ok(DenoisedRun { y, b: UnitVector::normalize(b)?, trace, iterations, converged, degenerate, tau })
}

/// Alternates `y ← S_τ(X̃ᵀb)` with `b ← ξ/‖ξ‖` where
/// `(X̃X̃ᵀ + δI)ξ = X̃y`, starting from `y = 0` and the least significant right
/// singular direction. The Cholesky factor is computed once.
pub fn dpcp_d(data: &Matrix, cfg: &SolverConfig) -> Result<DenoisedRun> {
    cfg.validate()?;
    if data.nrows() == 0 || data.ncols() == 0 {
        return Err(invalid("data must be nonempty"));
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(invalid("data contains non-finite entries"));
    }
    let x = normalize_columns(data);
    run(&x, cfg, cfg.tau_for(x.ncols()))
}

/// `c` normals found one after another, each by [`dpcp_d`] applied to the
/// data expressed in coordinates of the complement of the earlier normals.
pub fn dpcp_d_subspace(data: &Matrix, c: usize, cfg: &SolverConfig) -> Result<SubspaceEstimate> {
    cfg.validate()?;
    let x = prepare(data, c)?;
    let dim = x.nrows();
    let tau = cfg.tau_for(x.ncols());
    let mut found: Vec<Vector> = Vec::with_capacity(c);
    let mut trace = Vec::new();
    let mut iterations = Vec::with_capacity(c);
    let mut converged = Vec::with_capacity(c);
    for _ in 0..c {
        let comp = if found.is_empty() {
            Matrix::identity(dim, dim)
        } else {
            complement_basis(&Matrix::from_columns(&found), dim)
        };
        let reduced = comp.tr_mul(&x);
        let r = run(&reduced, cfg, tau)?;
        found.push(UnitVector::normalize(&comp * r.b.as_vector())?.into_inner());
        iterations.push(r.iterations);
        converged.push(r.converged);
        trace.extend(r.trace);
    }
    let mut basis = Matrix::from_columns(&found);
    canonical_signs(&mut basis);
    Ok(SubspaceEstimate {
        complement_basis: basis,
        objective_trace: trace,
        iterations_per_component: iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::super::test_support::line_angle_deg;
    use super::*;
    use crate::datagen::synthesize;
    use crate::dpcp::dpcp_lp;
    use crate::numerics::max_principal_angle;
    use proptest::prelude::*;

    #[test]
    fn soft_threshold_examples() {
        let v = Vector::from_row_slice(&[1.2, -0.3, 0.0]);
        let s = soft_threshold(&v, 0.5);
        assert!((s - Vector::from_row_slice(&[0.7, 0.0, 0.0])).amax() < 1e-15);
        assert_eq!(soft_threshold(&v, 0.0), v);
    }

    proptest! {
        #[test]
        fn soft_threshold_minimizes_prox_objective(v in -3.0f64..3.0, tau in 0.0f64..2.0) {
            let s = soft_threshold(&Vector::from_row_slice(&[v]), tau)[0];
            let f = |y: f64| tau * y.abs() + 0.5 * (y - v).powi(2);
            // grid oracle on [-4, 4] at spacing 1e-3
            let best = (0..=8000).map(|i| f(-4.0 + i as f64 * 1e-3)).fold(f64::INFINITY, f64::min);
            prop_assert!(f(s) <= best + 1e-12);
        }
    }

    #[test]
    fn large_threshold_returns_initialization() {
        let ds = synthesize(5, 4, 30, 10, 0.0, 3).unwrap();
        let x = normalize_columns(&ds.data);
        let mut b0 = smallest_right_singular_vectors(&x.transpose(), 1).unwrap().column(0).into_owned();
        canonical_sign(&mut b0);
        let tau = x.tr_mul(&b0).amax() + 1e-9;
        let r = dpcp_d(&ds.data, &SolverConfig { tau: Some(tau), ..SolverConfig::denoised() }).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.iterations, 1);
        assert!(r.y.iter().all(|v| *v == 0.0));
        assert!((r.b.as_vector() - &b0).amax() < 1e-12);
    }

    #[test]
    fn agrees_with_lp_on_clean_hyperplane() {
        let ds = synthesize(6, 5, 100, 60, 0.0, 4).unwrap();
        let r = dpcp_d(&ds.data, &SolverConfig::denoised()).unwrap();
        let lp = dpcp_lp(&ds.data, 1, &SolverConfig::lp()).unwrap();
        assert!(line_angle_deg(r.b.as_vector(), &lp.complement_basis.column(0).into_owned()) <= 1.0);
    }

    #[test]
    fn extra_y_step_is_within_tolerance() {
        let ds = synthesize(6, 4, 100, 60, 0.0, 9).unwrap();
        let cfg = SolverConfig::denoised();
        let r = dpcp_d(&ds.data, &cfg).unwrap();
        assert!(r.converged);
        let x = normalize_columns(&ds.data);
        let j = objective(&x, &r.y, r.b.as_vector(), r.tau);
        let y2 = soft_threshold(&x.tr_mul(r.b.as_vector()), r.tau);
        let j2 = objective(&x, &y2, r.b.as_vector(), r.tau);
        assert!(j2 <= j + 1e-12);
        assert!(j - j2 <= cfg.epsilon * j);
    }

    #[test]
    fn sequential_subspace_estimate() {
        let ds = synthesize(8, 5, 150, 60, 0.0, 10).unwrap();
        let est = dpcp_d_subspace(&ds.data, 3, &SolverConfig::denoised()).unwrap();
        let b = &est.complement_basis;
        assert!((b.tr_mul(b) - Matrix::identity(3, 3)).amax() < 1e-10);
        assert!(max_principal_angle(b, &ds.true_complement()).to_degrees() < 5.0);
    }
}
