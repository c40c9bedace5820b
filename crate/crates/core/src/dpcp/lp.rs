use super::{prepare, relative_decrease, SolverConfig, SubspaceEstimate};
use crate::error::{Error, Result};
use crate::lp::dpcp_lp_step;
use crate::numerics::{canonical_signs, complement_basis, smallest_right_singular_vectors, Matrix, UnitVector, Vector};

/// Iterates of one run of the LP recursion.
#[derive(Debug, Clone)]
pub struct LpRecursion {
    /// `n̂_0, n̂_1, …`, each unit length.
    pub iterates: Vec<UnitVector>,
    /// `‖X̃ᵀn̂_k‖₁` for each iterate.
    pub objectives: Vec<f64>,
    pub converged: bool,
}

impl LpRecursion {
    pub fn last(&self) -> &UnitVector {
        self.iterates.last().expect("recursion always holds its initial iterate")
    }

    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }
}

/// Runs `n̂_k = normalize(argmin { ‖dataᵀb‖₁ : bᵀn̂_{k−1} = 1, orthoᵀb = 0 })`
/// from `init` until the relative decrease of the objective is at most
/// `cfg.epsilon` or `cfg.t_max` steps have been taken. `data` is used as given.
pub fn lp_recursion(data: &Matrix, init: UnitVector, ortho: &Matrix, cfg: &SolverConfig) -> Result<LpRecursion> {
    cfg.validate()?;
    let mut objectives = vec![data.tr_mul(init.as_vector()).lp_norm(1)];
    let mut iterates = vec![init];
    let mut converged = false;
    for _ in 0..cfg.t_max {
        let step = dpcp_lp_step(data, iterates.last().unwrap(), ortho)?;
        let next = UnitVector::normalize(step.n)?;
        let j = data.tr_mul(next.as_vector()).lp_norm(1);
        let prev = *objectives.last().unwrap();
        iterates.push(next);
        objectives.push(j);
        if relative_decrease(prev, j) <= cfg.epsilon {
            converged = true;
            break;
        }
    }
    Ok(LpRecursion { iterates, objectives, converged })
}

/// Estimates `c` orthonormal normals of the inlier subspace, one at a time.
/// Each component starts from the least significant right singular direction
/// of the data restricted to the complement of the normals found so far and
/// is refined by [`lp_recursion`] under orthogonality to them.
pub fn dpcp_lp(data: &Matrix, c: usize, cfg: &SolverConfig) -> Result<SubspaceEstimate> {
    cfg.validate()?;
    let x = prepare(data, c)?;
    let dim = x.nrows();
    let mut found: Vec<Vector> = Vec::with_capacity(c);
    let mut trace = Vec::new();
    let mut iterations = Vec::with_capacity(c);
    let mut converged = Vec::with_capacity(c);
    for i in 0..c {
        let ortho = if found.is_empty() { Matrix::zeros(dim, 0) } else { Matrix::from_columns(&found) };
        let comp = complement_basis(&ortho, dim);
        let reduced = comp.tr_mul(&x);
        let v = smallest_right_singular_vectors(&reduced.transpose(), 1)?;
        let init = UnitVector::normalize(&comp * v.column(0))?;
        let run = lp_recursion(&x, init, &ortho, cfg).map_err(|e| match e {
            Error::LpFailure { status, .. } => Error::LpFailure { component: i, status },
            other => other,
        })?;
        // remove drift out of the constraint set before accepting the normal
        let mut b = run.last().as_vector().clone();
        for q in &found {
            let p = q.dot(&b);
            b.axpy(-p, q, 1.0);
        }
        found.push(UnitVector::normalize(b)?.into_inner());
        iterations.push(run.steps());
        converged.push(run.converged);
        trace.extend(run.objectives);
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
