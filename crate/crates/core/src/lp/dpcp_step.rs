use super::simplex::{solve_with, LpProblem, LpStatus, SimplexOptions};
use crate::error::{invalid, Error, Result};
use crate::numerics::{Matrix, UnitVector, Vector};

#[derive(Debug, Clone)]
pub struct LpStep {
    /// Minimizer `b`; satisfies `bᵀn̂ = 1`, so it is not unit length.
    pub n: Vector,
    /// `‖dataᵀ n‖₁`.
    pub objective: f64,
    pub pivots: usize,
}

/// Solves `min ‖dataᵀb‖₁  s.t.  bᵀanchor = 1, orthoᵀb = 0`.
///
/// Variables are laid out as `[u⁺ (L), u⁻ (L), b (D)]` with `u± ≥ 0` and `b`
/// free; rows are `u⁺ − u⁻ − dataᵀb = 0`, then `anchorᵀb = 1`, then one row per
/// column of `ortho`. The solve is warm-started from the vertex that makes the
/// points least correlated with the anchor active. A failed LP is reported as
/// component 0.
pub fn dpcp_lp_step(data: &Matrix, anchor: &UnitVector, ortho: &Matrix) -> Result<LpStep> {
    let (dim, l) = data.shape();
    if anchor.dim() != dim {
        return Err(invalid(format!("anchor has dimension {}, data has {dim}", anchor.dim())));
    }
    if ortho.nrows() != dim && ortho.ncols() > 0 {
        return Err(invalid(format!("ortho has {} rows, expected {dim}", ortho.nrows())));
    }
    let a = anchor.as_vector();
    let k = ortho.ncols();
    for i in 0..k {
        if ortho.column(i).dot(a).abs() > 1e-8 {
            return Err(invalid("anchor is not orthogonal to the constraint basis"));
        }
    }

    let m = l + 1 + k;
    let n = 2 * l + dim;
    let mut mat = Matrix::zeros(m, n);
    for j in 0..l {
        mat[(j, j)] = 1.0;
        mat[(j, l + j)] = -1.0;
        for r in 0..dim {
            mat[(j, 2 * l + r)] = -data[(r, j)];
        }
    }
    for r in 0..dim {
        mat[(l, 2 * l + r)] = a[r];
        for i in 0..k {
            mat[(l + 1 + i, 2 * l + r)] = ortho[(r, i)];
        }
    }
    let mut cost = Vector::zeros(n);
    cost.rows_mut(0, 2 * l).fill(1.0);
    let mut rhs = Vector::zeros(m);
    rhs[l] = 1.0;
    let mut nonneg_mask = vec![true; n];
    nonneg_mask[2 * l..].iter_mut().for_each(|f| *f = false);
    let problem = LpProblem { cost, constraint_matrix: mat, rhs, nonneg_mask };

    let warm = warm_basis(data, a, ortho);
    let sol = solve_with(&problem, &SimplexOptions::default(), warm.as_deref())?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::LpFailure { component: 0, status: sol.status });
    }
    let b = sol.x.rows(2 * l, dim).into_owned();
    let objective = data.tr_mul(&b).lp_norm(1);
    Ok(LpStep { n: b, objective, pivots: sol.iterations })
}

/// Basis of the vertex where `anchorᵀb = 1`, `orthoᵀb = 0` and `x_jᵀb = 0`
/// for `D − 1 − k` points chosen greedily by smallest `|x_jᵀanchor|`.
fn warm_basis(data: &Matrix, anchor: &Vector, ortho: &Matrix) -> Option<Vec<usize>> {
    let (dim, l) = data.shape();
    let k = ortho.ncols();
    let need = dim.checked_sub(1 + k)?;
    let mut rows: Vec<Vector> = vec![anchor.clone()];
    rows.extend(ortho.column_iter().map(|c| c.into_owned()));
    // orthonormal basis of the rows chosen so far, for independence checks
    let mut q = crate::numerics::orthonormalize(&Matrix::from_columns(&rows));
    if q.ncols() != 1 + k {
        return None;
    }
    let proj = data.tr_mul(anchor);
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&i, &j| proj[i].abs().total_cmp(&proj[j].abs()).then(i.cmp(&j)));
    let mut active = Vec::with_capacity(need);
    for &j in &order {
        if active.len() == need {
            break;
        }
        let x = data.column(j);
        let resid = x - &q * q.tr_mul(&x);
        if resid.norm() > 1e-6 * x.norm() {
            active.push(j);
            rows.push(x.into_owned());
            q = crate::numerics::orthonormalize(&Matrix::from_columns(&rows));
        }
    }
    if active.len() != need {
        return None;
    }
    let system = Matrix::from_rows(&rows.iter().map(|r| r.transpose()).collect::<Vec<_>>());
    let mut rhs = Vector::zeros(dim);
    rhs[0] = 1.0;
    let b = system.lu().solve(&rhs)?;
    let vals = data.tr_mul(&b);
    let mut is_active = vec![false; l];
    for &j in &active {
        is_active[j] = true;
    }
    let mut basis: Vec<usize> =
        (0..l).filter(|&j| !is_active[j]).map(|j| if vals[j] >= 0.0 { j } else { l + j }).collect();
    basis.extend(2 * l..2 * l + dim);
    Some(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(v: &[f64]) -> UnitVector {
        UnitVector::normalize(Vector::from_row_slice(v)).unwrap()
    }

    #[test]
    fn pinned_coordinate() {
        let data = Matrix::from_column_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let s = dpcp_lp_step(&data, &unit(&[0.0, 1.0]), &Matrix::zeros(2, 0)).unwrap();
        assert!(s.n[0].abs() < 1e-12 && (s.n[1] - 1.0).abs() < 1e-12);
        assert!((s.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn piecewise_linear_oracle() {
        // b = (t, √2 − t): 2|t| + |√2 − t| is minimized at t = 0
        let data = Matrix::from_column_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let s = dpcp_lp_step(&data, &unit(&[1.0, 1.0]), &Matrix::zeros(2, 0)).unwrap();
        assert!(s.n[0].abs() < 1e-12);
        assert!((s.n[1] - 2f64.sqrt()).abs() < 1e-12);
        assert!((s.objective - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ortho_constraint_is_respected() {
        let data = Matrix::from_column_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let ortho = Matrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]);
        let s = dpcp_lp_step(&data, &unit(&[1.0, 1.0, 0.0]), &ortho).unwrap();
        assert!(s.n[2].abs() < 1e-12);
        assert!((s.n[0] + s.n[1] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn anchor_not_orthogonal_is_rejected() {
        let data = Matrix::identity(2, 2);
        let ortho = Matrix::from_column_slice(2, 1, &[1.0, 0.0]);
        assert!(dpcp_lp_step(&data, &unit(&[1.0, 1.0]), &ortho).is_err());
    }

    fn random_unit_columns(dim: usize, l: usize, seed: u64) -> Matrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = Matrix::from_fn(dim, l, |_, _| rng.random_range(-1.0..1.0));
        crate::numerics::normalize_columns(&m)
    }

    #[test]
    fn solution_is_orthogonal_to_d_minus_one_points() {
        for seed in 0..20 {
            let data = random_unit_columns(3, 8, seed);
            let anchor = unit(&[0.3, -0.5, 0.8]);
            let s = dpcp_lp_step(&data, &anchor, &Matrix::zeros(3, 0)).unwrap();
            assert!((s.n.dot(anchor.as_vector()) - 1.0).abs() < 1e-9);
            assert!(s.n.norm() >= 1.0 - 1e-9);
            let hit: Vec<_> = (0..8).filter(|&j| data.column(j).dot(&s.n).abs() < 1e-8).collect();
            assert_eq!(hit.len(), 2, "seed {seed}");
            let cols: Vec<_> = hit.iter().map(|&j| data.column(j).into_owned()).collect();
            assert_eq!(Matrix::from_columns(&cols).rank(1e-8), 2);
            assert!(s.objective <= data.tr_mul(anchor.as_vector()).lp_norm(1) + 1e-12);
        }
    }

    #[test]
    fn constrained_solution_count() {
        // one orthogonality row leaves D − 1 − k = 2 active points in R⁴
        let data = random_unit_columns(4, 12, 7);
        let ortho = Matrix::from_column_slice(4, 1, &[0.0, 0.0, 0.0, 1.0]);
        let anchor = unit(&[1.0, 2.0, -1.0, 0.0]);
        let s = dpcp_lp_step(&data, &anchor, &ortho).unwrap();
        assert!(s.n[3].abs() < 1e-9);
        let hits = (0..12).filter(|&j| data.column(j).dot(&s.n).abs() < 1e-8).count();
        assert_eq!(hits, 2);
    }

    #[test]
    #[ignore]
    fn timing_probe() {
        let data = random_unit_columns(10, 667, 1);
        let anchor = unit(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let t = std::time::Instant::now();
        let s = dpcp_lp_step(&data, &anchor, &Matrix::zeros(10, 0)).unwrap();
        eprintln!("pivots {} in {:?}", s.pivots, t.elapsed());
        let s2 = dpcp_lp_step(&data, &UnitVector::normalize(s.n.clone()).unwrap(), &Matrix::zeros(10, 0)).unwrap();
        eprintln!("warm-ish pivots {} in {:?} obj {} -> {}", s2.pivots, t.elapsed(), s.objective, s2.objective);
    }
}
