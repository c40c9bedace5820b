//! Dense two-phase revised simplex for `min cᵀx  s.t.  Ax = b`, with each
//! variable either nonnegative or free.
//!
//! The basis inverse is kept explicitly (row-major) and updated by elementary
//! row operations after each pivot; it is rebuilt from an LU factorization of
//! the basis matrix every `refactor_every` iterations. Free variables are
//! handled natively: a nonbasic free variable sits at zero and may enter in
//! either direction, and a basic free variable never blocks the ratio test.

use crate::error::{invalid, Result};
use crate::numerics::{Matrix, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// The iteration cap was hit before optimality was proven.
    IterationLimit,
}

/// `min costᵀx  s.t.  constraint_matrix · x = rhs`, `x_j ≥ 0` where `nonneg_mask[j]`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub cost: Vector,
    pub constraint_matrix: Matrix,
    pub rhs: Vector,
    pub nonneg_mask: Vec<bool>,
}

impl LpProblem {
    /// All variables nonnegative.
    pub fn nonneg(cost: Vector, constraint_matrix: Matrix, rhs: Vector) -> Self {
        let n = cost.len();
        Self { cost, constraint_matrix, rhs, nonneg_mask: vec![true; n] }
    }

    fn validate(&self) -> Result<()> {
        let (m, n) = self.constraint_matrix.shape();
        if self.cost.len() != n || self.nonneg_mask.len() != n || self.rhs.len() != m {
            return Err(invalid(format!(
                "inconsistent LP shapes: A is {m}x{n}, cost {}, rhs {}, mask {}",
                self.cost.len(),
                self.rhs.len(),
                self.nonneg_mask.len()
            )));
        }
        let finite =
            self.cost.iter().chain(self.rhs.iter()).chain(self.constraint_matrix.iter()).all(|v| v.is_finite());
        if !finite {
            return Err(invalid("LP data contains non-finite entries"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vector,
    pub objective: f64,
    /// Original variable indices that are basic at the returned vertex.
    pub basis: Vec<usize>,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub pivot_tol: f64,
    pub feas_tol: f64,
    pub opt_tol: f64,
    pub refactor_every: usize,
    /// Cap on total pivots; `None` means `50 (m + n) + 1000`.
    pub max_iterations: Option<usize>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { pivot_tol: 1e-10, feas_tol: 1e-9, opt_tol: 1e-9, refactor_every: 100, max_iterations: None }
    }
}

/// Solves `p` with default tolerances from a cold start.
pub fn solve_standard_form(p: &LpProblem) -> Result<LpSolution> {
    solve_with(p, &SimplexOptions::default(), None)
}

/// Solves `p`. `warm`, when given, lists columns to start the basis from.
/// They are pivoted in from the slack/artificial basis; if that fails or the
/// resulting point is not primal feasible the solve restarts cold.
pub fn solve_with(p: &LpProblem, opts: &SimplexOptions, warm: Option<&[usize]>) -> Result<LpSolution> {
    p.validate()?;
    let n = p.cost.len();
    if let Some(w) = warm {
        let mut seen = vec![false; n];
        for &j in w {
            if j >= n || seen[j] {
                return Err(invalid("warm basis must list distinct column indices"));
            }
            seen[j] = true;
        }
        if w.len() > p.rhs.len() {
            return Err(invalid("warm basis has more columns than rows"));
        }
    }
    let mut s = Simplex::new(p, opts, warm.unwrap_or(&[]));
    if let Some(w) = warm {
        if !s.install(w) {
            s = Simplex::new(p, opts, &[]);
        }
    }
    Ok(s.run())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

struct Simplex<'a> {
    opts: &'a SimplexOptions,
    m: usize,
    /// Structural variable count; artificials follow at `n + row`.
    n: usize,
    cols: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    free: Vec<bool>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    position: Vec<Option<usize>>,
    /// Row-major `m x m` basis inverse.
    binv: Vec<f64>,
    xb: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
    since_refactor: usize,
    scratch: Vec<f64>,
}

impl<'a> Simplex<'a> {
    fn new(p: &LpProblem, opts: &'a SimplexOptions, preferred: &[usize]) -> Self {
        let (m, n) = p.constraint_matrix.shape();
        let mut sign = vec![1.0; m];
        for i in 0..m {
            if p.rhs[i] < 0.0 {
                sign[i] = -1.0;
            }
        }
        // Rows with zero right-hand side may be flipped freely; use that to
        // make a preferred negative unit column usable.
        for &j in preferred {
            if let Some(i) = unit_row(&p.constraint_matrix, j) {
                if p.rhs[i] == 0.0 && p.constraint_matrix[(i, j)] < 0.0 && p.nonneg_mask[j] {
                    sign[i] = -1.0;
                }
            }
        }
        let mut cols = Vec::with_capacity(n + m);
        for j in 0..n {
            let col: Vec<(usize, f64)> = p
                .constraint_matrix
                .column(j)
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, v)| (i, v * sign[i]))
                .collect();
            cols.push(col);
        }
        for i in 0..m {
            cols.push(vec![(i, 1.0)]);
        }
        let rhs: Vec<f64> = (0..m).map(|i| p.rhs[i] * sign[i]).collect();
        let mut free: Vec<bool> = p.nonneg_mask.iter().map(|nn| !nn).collect();
        free.extend(std::iter::repeat_n(false, m));

        // Crash basis: slack-like unit columns where available, artificials
        // elsewhere. The initial basis matrix is diagonal.
        let mut basis = vec![usize::MAX; m];
        let mut diag = vec![1.0; m];
        let mut used = vec![false; n];
        for &j in preferred {
            if !free[j] && cols[j].len() == 1 {
                let (i, v) = cols[j][0];
                if v > 0.0 && basis[i] == usize::MAX {
                    basis[i] = j;
                    diag[i] = v;
                    used[j] = true;
                }
            }
        }
        for j in 0..n {
            if free[j] || used[j] || cols[j].len() != 1 {
                continue;
            }
            let (i, v) = cols[j][0];
            if v > 0.0 && basis[i] == usize::MAX {
                basis[i] = j;
                diag[i] = v;
                used[j] = true;
            }
        }
        for (i, b) in basis.iter_mut().enumerate() {
            if *b == usize::MAX {
                *b = n + i;
            }
        }
        let mut position = vec![None; n + m];
        for (i, &b) in basis.iter().enumerate() {
            position[b] = Some(i);
        }
        let mut binv = vec![0.0; m * m];
        let mut xb = vec![0.0; m];
        for i in 0..m {
            binv[i * m + i] = 1.0 / diag[i];
            xb[i] = rhs[i] / diag[i];
        }
        let mut cost: Vec<f64> = p.cost.iter().copied().collect();
        cost.extend(std::iter::repeat_n(0.0, m));
        let max_iterations = opts.max_iterations.unwrap_or(50 * (m + n) + 1000);
        Self {
            opts,
            m,
            n,
            cols,
            cost,
            free,
            rhs,
            basis,
            position,
            binv,
            xb,
            iterations: 0,
            max_iterations,
            since_refactor: 0,
            scratch: vec![0.0; m],
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.n
    }

    fn run(&mut self) -> LpSolution {
        let has_artificial = self.basis.iter().any(|&b| self.is_artificial(b));
        if has_artificial && self.artificial_infeasibility() > 0.0 {
            let phase1: Vec<f64> =
                (0..self.n + self.m).map(|j| if self.is_artificial(j) { 1.0 } else { 0.0 }).collect();
            match self.optimize(&phase1, Phase::One) {
                LpStatus::Optimal => {}
                LpStatus::IterationLimit => return self.finish(LpStatus::IterationLimit),
                // the phase-one objective is bounded below by zero
                _ => return self.finish(LpStatus::Infeasible),
            }
            if self.artificial_infeasibility() > self.opts.feas_tol * self.rhs_scale() {
                return self.finish(LpStatus::Infeasible);
            }
        }
        if has_artificial {
            self.drive_out_artificials();
        }
        let phase2 = self.cost.clone();
        let status = self.optimize(&phase2, Phase::Two);
        self.finish(status)
    }

    fn artificial_infeasibility(&self) -> f64 {
        self.basis.iter().zip(&self.xb).filter(|(b, _)| self.is_artificial(**b)).map(|(_, v)| v.abs()).sum()
    }

    fn rhs_scale(&self) -> f64 {
        1.0 + self.rhs.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// Pivots the `warm` columns into the basis, each replacing a basic
    /// variable outside `warm`. Returns whether the result is a primal
    /// feasible basis.
    fn install(&mut self, warm: &[usize]) -> bool {
        let mut wanted = vec![false; self.n + self.m];
        for &j in warm {
            wanted[j] = true;
        }
        for &q in warm {
            if self.position[q].is_some() {
                continue;
            }
            let alpha = self.column_ftran(q);
            let pick = (0..self.m)
                .filter(|&r| !wanted[self.basis[r]])
                .max_by(|&i, &k| alpha[i].abs().total_cmp(&alpha[k].abs()).then(k.cmp(&i)));
            let Some(r) = pick else { return false };
            if alpha[r].abs() < 1e-9 {
                return false;
            }
            let value = self.xb[r] / alpha[r];
            self.pivot(r, q, &alpha, value);
        }
        let tol = self.opts.feas_tol * self.rhs_scale();
        self.basis.iter().zip(&self.xb).all(|(&b, &v)| {
            if self.is_artificial(b) {
                v.abs() <= tol
            } else {
                self.free[b] || v >= -tol
            }
        })
    }

    /// Pivots zero-level artificials out of the basis. An artificial that
    /// cannot be replaced marks a redundant row and stays basic at zero.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.n {
                if self.position[j].is_some() {
                    continue;
                }
                let row = &self.binv[r * self.m..(r + 1) * self.m];
                let a: f64 = self.cols[j].iter().map(|&(i, v)| row[i] * v).sum();
                if a.abs() > 1e-9 && best.is_none_or(|(_, b)| a.abs() > b.abs()) {
                    best = Some((j, a));
                }
            }
            if let Some((q, _)) = best {
                let alpha = self.column_ftran(q);
                self.xb[r] = 0.0;
                self.pivot(r, q, &alpha, 0.0);
            }
        }
    }

    fn optimize(&mut self, cost: &[f64], phase: Phase) -> LpStatus {
        let m = self.m;
        let mut bland = false;
        let mut stall = 0usize;
        let stall_limit = 2 * (m + self.n);
        let mut last_obj = f64::INFINITY;
        let mut y = vec![0.0; m];
        loop {
            if self.iterations >= self.max_iterations {
                return LpStatus::IterationLimit;
            }
            if self.since_refactor >= self.opts.refactor_every {
                self.refactor();
            }
            // duals: y = B⁻ᵀ c_B
            y.iter_mut().for_each(|v| *v = 0.0);
            for i in 0..m {
                let cb = cost[self.basis[i]];
                if cb != 0.0 {
                    let row = &self.binv[i * m..(i + 1) * m];
                    for (yk, rk) in y.iter_mut().zip(row) {
                        *yk += cb * rk;
                    }
                }
            }
            let Some((q, dir)) = self.price(cost, &y, phase, bland) else {
                return LpStatus::Optimal;
            };
            let alpha = self.column_ftran(q);
            let Some(r) = self.ratio_test(&alpha, dir, bland) else {
                return LpStatus::Unbounded;
            };
            let theta = self.xb[r].max(0.0) / (dir * alpha[r]);
            self.pivot(r, q, &alpha, dir * theta);

            let obj: f64 = self.basis.iter().zip(&self.xb).map(|(&b, &v)| cost[b] * v).sum();
            if obj < last_obj - 1e-12 * (1.0 + obj.abs()) {
                stall = 0;
                last_obj = obj;
            } else {
                stall += 1;
                if stall > stall_limit {
                    bland = true;
                }
            }
        }
    }

    /// Entering column and its direction (+1 increase, -1 decrease).
    fn price(&self, cost: &[f64], y: &[f64], phase: Phase, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        let total = if phase == Phase::One { self.n + self.m } else { self.n };
        for j in 0..total {
            if self.position[j].is_some() {
                continue;
            }
            if self.is_artificial(j) {
                // artificials only ever leave
                continue;
            }
            let d = cost[j] - self.cols[j].iter().map(|&(i, v)| y[i] * v).sum::<f64>();
            let (score, dir) = if self.free[j] { (d.abs(), if d > 0.0 { -1.0 } else { 1.0 }) } else { (-d, 1.0) };
            if score <= self.opts.opt_tol {
                continue;
            }
            if bland {
                return Some((j, dir));
            }
            if best.is_none_or(|(_, s, _)| score > s) {
                best = Some((j, score, dir));
            }
        }
        best.map(|(j, _, dir)| (j, dir))
    }

    /// `B⁻¹ a_q`.
    fn column_ftran(&mut self, q: usize) -> Vec<f64> {
        let m = self.m;
        let col = &self.cols[q];
        let mut alpha = vec![0.0; m];
        if col.len() * 4 > m {
            self.scratch.iter_mut().for_each(|v| *v = 0.0);
            for &(i, v) in col {
                self.scratch[i] = v;
            }
            for (i, a) in alpha.iter_mut().enumerate() {
                let row = &self.binv[i * m..(i + 1) * m];
                *a = row.iter().zip(&self.scratch).map(|(r, s)| r * s).sum();
            }
        } else {
            for (i, a) in alpha.iter_mut().enumerate() {
                let row = &self.binv[i * m..(i + 1) * m];
                *a = col.iter().map(|&(k, v)| row[k] * v).sum();
            }
        }
        alpha
    }

    fn ratio_test(&self, alpha: &[f64], dir: f64, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        let mut ties: Vec<usize> = Vec::new();
        for i in 0..self.m {
            let b = self.basis[i];
            if self.free[b] {
                continue;
            }
            let a = dir * alpha[i];
            if a <= self.opts.pivot_tol {
                continue;
            }
            let theta = self.xb[i].max(0.0) / a;
            match best {
                None => {
                    best = Some((i, theta));
                    ties.clear();
                    ties.push(i);
                }
                Some((_, t)) if theta < t - 1e-12 => {
                    best = Some((i, theta));
                    ties.clear();
                    ties.push(i);
                }
                Some((_, t)) if theta <= t + 1e-12 => ties.push(i),
                _ => {}
            }
        }
        best?;
        let pick = if bland {
            // smallest variable index leaves
            *ties.iter().min_by_key(|&&i| self.basis[i]).unwrap()
        } else {
            // prefer artificials, then the largest pivot for stability
            *ties
                .iter()
                .max_by(|&&i, &&k| {
                    let ai = self.is_artificial(self.basis[i]);
                    let ak = self.is_artificial(self.basis[k]);
                    ai.cmp(&ak).then((dir * alpha[i]).total_cmp(&(dir * alpha[k]))).then(k.cmp(&i))
                })
                .unwrap()
        };
        Some(pick)
    }

    /// Replaces the basic variable in row `r` by `q`, which takes value
    /// `value`; `alpha = B⁻¹ a_q`.
    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64], value: f64) {
        let m = self.m;
        // x_B ← x_B − value·α, then the entering variable takes `value`
        if value != 0.0 {
            for (x, a) in self.xb.iter_mut().zip(alpha) {
                *x -= value * a;
            }
        }
        self.xb[r] = value;

        let piv = alpha[r];
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (row_r, after) = rest.split_at_mut(m);
        row_r.iter_mut().for_each(|v| *v /= piv);
        for (i, row) in before.chunks_exact_mut(m).enumerate() {
            let f = alpha[i];
            if f != 0.0 {
                for (x, pr) in row.iter_mut().zip(row_r.iter()) {
                    *x -= f * pr;
                }
            }
        }
        for (off, row) in after.chunks_exact_mut(m).enumerate() {
            let f = alpha[r + 1 + off];
            if f != 0.0 {
                for (x, pr) in row.iter_mut().zip(row_r.iter()) {
                    *x -= f * pr;
                }
            }
        }

        let leaving = self.basis[r];
        self.position[leaving] = None;
        self.basis[r] = q;
        self.position[q] = Some(r);
        self.iterations += 1;
        self.since_refactor += 1;
    }

    fn basis_matrix(&self) -> Matrix {
        let m = self.m;
        let mut bm = Matrix::zeros(m, m);
        for (k, &j) in self.basis.iter().enumerate() {
            for &(i, v) in &self.cols[j] {
                bm[(i, k)] = v;
            }
        }
        bm
    }

    /// Rebuilds `B⁻¹` and `x_B` from scratch.
    fn refactor(&mut self) {
        let m = self.m;
        self.since_refactor = 0;
        let Some(inv) = self.basis_matrix().lu().try_inverse() else {
            // keep the updated inverse; the next refactorization may succeed
            return;
        };
        for i in 0..m {
            for k in 0..m {
                self.binv[i * m + k] = inv[(i, k)];
            }
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.xb[i] = row.iter().zip(&self.rhs).map(|(a, b)| a * b).sum();
        }
    }

    /// One step of iterative refinement on `x_B` against the true residual.
    fn refine(&mut self) {
        let m = self.m;
        let mut resid = self.rhs.clone();
        for (k, &j) in self.basis.iter().enumerate() {
            for &(i, v) in &self.cols[j] {
                resid[i] -= v * self.xb[k];
            }
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.xb[i] += row.iter().zip(&resid).map(|(a, b)| a * b).sum::<f64>();
        }
    }

    fn finish(&mut self, status: LpStatus) -> LpSolution {
        let mut x = Vector::zeros(self.n);
        let mut basis = Vec::new();
        if status == LpStatus::Optimal {
            self.refine();
            self.refine();
        }
        for (k, &j) in self.basis.iter().enumerate() {
            if j < self.n {
                let mut v = self.xb[k];
                if !self.free[j] && v < 0.0 && v > -self.opts.feas_tol {
                    v = 0.0;
                }
                x[j] = v;
                basis.push(j);
            }
        }
        basis.sort_unstable();
        let objective = match status {
            LpStatus::Optimal => (0..self.n).map(|j| self.cost[j] * x[j]).sum(),
            LpStatus::Unbounded => f64::NEG_INFINITY,
            LpStatus::Infeasible => f64::INFINITY,
            LpStatus::IterationLimit => f64::NAN,
        };
        LpSolution { status, x, objective, basis, iterations: self.iterations }
    }
}

/// Row of the single nonzero in column `j`, if the column is a unit column.
fn unit_row(a: &Matrix, j: usize) -> Option<usize> {
    let mut found = None;
    for (i, v) in a.column(j).iter().enumerate() {
        if *v != 0.0 {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(cost: &[f64], rows: usize, a: &[f64], rhs: &[f64]) -> LpProblem {
        LpProblem::nonneg(
            Vector::from_row_slice(cost),
            Matrix::from_row_slice(rows, cost.len(), a),
            Vector::from_row_slice(rhs),
        )
    }

    #[test]
    fn two_variable_simplex() {
        let p = lp(&[1.0, 2.0], 1, &[1.0, 1.0], &[1.0]);
        let s = solve_standard_form(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.x[0] - 1.0).abs() < 1e-12 && s.x[1].abs() < 1e-12);
        assert!((s.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_sign() {
        let p = lp(&[-1.0], 1, &[1.0], &[-1.0]);
        assert_eq!(solve_standard_form(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        // min -x1 s.t. x1 - x2 = 0
        let p = lp(&[-1.0, 0.0], 1, &[1.0, -1.0], &[0.0]);
        assert_eq!(solve_standard_form(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn degenerate_zero_problem_terminates() {
        let p = lp(&[0.0, 0.0], 1, &[1.0, 1.0], &[0.0]);
        let s = solve_standard_form(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective, 0.0);
    }

    #[test]
    fn free_variable_is_handled() {
        // min |t - 3| written as u+ + u- with u+ - u- - t = -3, t free
        let p = LpProblem {
            cost: Vector::from_row_slice(&[1.0, 1.0, 0.0]),
            constraint_matrix: Matrix::from_row_slice(1, 3, &[1.0, -1.0, -1.0]),
            rhs: Vector::from_row_slice(&[-3.0]),
            nonneg_mask: vec![true, true, false],
        };
        let s = solve_standard_form(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(s.objective.abs() < 1e-12);
        assert!((s.x[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        // second row duplicates the first
        let p = lp(&[1.0, 1.0, 0.0], 2, &[1.0, 2.0, 1.0, 1.0, 2.0, 1.0], &[2.0, 2.0]);
        let s = solve_standard_form(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(s.objective.abs() < 1e-12);
        assert!((s.x[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let p = LpProblem {
            cost: Vector::from_row_slice(&[1.0]),
            constraint_matrix: Matrix::zeros(1, 2),
            rhs: Vector::from_row_slice(&[1.0]),
            nonneg_mask: vec![true, true],
        };
        assert!(solve_standard_form(&p).is_err());
    }

    /// Minimum of `cᵀx` over basic feasible solutions of `Ax = b, x ≥ 0`,
    /// found by trying every `m`-column subset.
    fn enumerate_vertices(p: &LpProblem) -> Option<f64> {
        let (m, n) = p.constraint_matrix.shape();
        let mut best: Option<f64> = None;
        let mut subset: Vec<usize> = (0..m).collect();
        loop {
            let cols: Vec<_> = subset.iter().map(|&j| p.constraint_matrix.column(j).into_owned()).collect();
            let bm = Matrix::from_columns(&cols);
            if let Some(xs) = bm.clone().lu().solve(&p.rhs) {
                let resid = (&bm * &xs - &p.rhs).amax();
                if resid < 1e-9 && bm.determinant().abs() > 1e-9 && xs.iter().all(|v| *v >= -1e-10) {
                    let obj: f64 = subset.iter().zip(xs.iter()).map(|(&j, v)| p.cost[j] * v).sum();
                    best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                }
            }
            // next combination
            let mut i = m;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if subset[i] < n - m + i {
                    subset[i] += 1;
                    for k in i + 1..m {
                        subset[k] = subset[k - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn check_solution(p: &LpProblem, s: &LpSolution) {
        let resid = (&p.constraint_matrix * &s.x - &p.rhs).amax();
        assert!(resid <= 1e-9 * (1.0 + p.rhs.norm()), "residual {resid}");
        let mut positive = 0;
        for (j, v) in s.x.iter().enumerate() {
            if p.nonneg_mask[j] {
                assert!(*v >= -1e-9);
                if *v > 1e-9 {
                    positive += 1;
                }
            }
        }
        assert!(positive <= p.rhs.len());
    }

    #[test]
    fn three_by_six_matches_enumeration() {
        let p = lp(
            &[3.0, -1.0, 2.0, 0.5, -2.0, 1.0],
            3,
            &[
                1.0, 1.0, 1.0, 1.0, 1.0, 1.0, //
                2.0, -1.0, 0.5, 0.0, 1.0, -3.0, //
                0.0, 1.0, -1.0, 2.0, 0.5, 1.0,
            ],
            &[4.0, 1.0, 1.5],
        );
        let s = solve_standard_form(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        check_solution(&p, &s);
        let oracle = enumerate_vertices(&p).unwrap();
        assert!((s.objective - oracle).abs() < 1e-9, "{} vs {oracle}", s.objective);
    }

    #[test]
    fn warm_start_reaches_same_optimum() {
        let p = LpProblem {
            cost: Vector::from_row_slice(&[1.0, 1.0, 1.0, 1.0, 0.0]),
            constraint_matrix: Matrix::from_row_slice(
                3,
                5,
                &[1.0, 0.0, -1.0, 0.0, -2.0, 0.0, 1.0, 0.0, -1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            ),
            rhs: Vector::from_row_slice(&[0.0, 0.0, 1.0]),
            nonneg_mask: vec![true, true, true, true, false],
        };
        let plain = solve_standard_form(&p).unwrap();
        assert_eq!(plain.status, LpStatus::Optimal);
        assert!((plain.objective - 3.0).abs() < 1e-12);
        // infeasible start (x3 = −2) falls back to a cold solve
        let bad = solve_with(&p, &SimplexOptions::default(), Some(&[2, 1, 4])).unwrap();
        assert!((bad.objective - 3.0).abs() < 1e-12);
        let good = solve_with(&p, &SimplexOptions::default(), Some(&[0, 3, 4])).unwrap();
        assert!((good.objective - 3.0).abs() < 1e-12);
        assert!(solve_with(&p, &SimplexOptions::default(), Some(&[0, 0])).is_err());
    }

    use proptest::prelude::*;

    fn bounded_lp() -> impl Strategy<Value = LpProblem> {
        (1usize..=4, 0usize..=4).prop_flat_map(|(m, extra)| {
            let n = (m + extra).clamp(m, 8);
            (
                prop::collection::vec(-5.0f64..5.0, n),
                prop::collection::vec(-3.0f64..3.0, (m - 1) * n),
                prop::collection::vec(0.1f64..3.0, n),
                prop::collection::vec(-2.0f64..2.0, m - 1),
                0.5f64..5.0,
            )
                .prop_map(move |(c, a, first, rest, total)| {
                    // a strictly positive first row keeps the feasible set bounded
                    let mut mat = Matrix::zeros(m, n);
                    for j in 0..n {
                        mat[(0, j)] = first[j];
                        for i in 1..m {
                            mat[(i, j)] = a[(i - 1) * n + j];
                        }
                    }
                    let mut rhs = Vector::zeros(m);
                    rhs[0] = total;
                    for i in 1..m {
                        rhs[i] = rest[i - 1];
                    }
                    LpProblem::nonneg(Vector::from_vec(c), mat, rhs)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn agrees_with_vertex_enumeration(p in bounded_lp()) {
            let s = solve_standard_form(&p).unwrap();
            match enumerate_vertices(&p) {
                Some(oracle) => {
                    prop_assert_eq!(s.status, LpStatus::Optimal);
                    check_solution(&p, &s);
                    prop_assert!((s.objective - oracle).abs() <= 1e-8 * (1.0 + oracle.abs()), "{} vs {}", s.objective, oracle);
                }
                None => prop_assert_eq!(s.status, LpStatus::Infeasible),
            }
        }

        #[test]
        fn free_variables_match_split_form(
            p in bounded_lp(),
            free in prop::collection::vec(any::<bool>(), 8),
        ) {
            let n = p.cost.len();
            let mut native = p.clone();
            native.nonneg_mask = (0..n).map(|j| !free[j]).collect();
            // x = x⁺ − x⁻ for every free column
            let extra: Vec<usize> = (0..n).filter(|&j| free[j]).collect();
            let m = p.rhs.len();
            let mut mat = Matrix::zeros(m, n + extra.len());
            mat.columns_mut(0, n).copy_from(&p.constraint_matrix);
            let mut cost = Vector::zeros(n + extra.len());
            cost.rows_mut(0, n).copy_from(&p.cost);
            for (k, &j) in extra.iter().enumerate() {
                mat.column_mut(n + k).copy_from(&(-p.constraint_matrix.column(j)));
                cost[n + k] = -p.cost[j];
            }
            let split = LpProblem::nonneg(cost, mat, p.rhs.clone());
            let a = solve_standard_form(&native).unwrap();
            let b = solve_standard_form(&split).unwrap();
            prop_assert_eq!(a.status, b.status);
            if a.status == LpStatus::Optimal {
                check_solution(&native, &a);
                prop_assert!((a.objective - b.objective).abs() <= 1e-8 * (1.0 + b.objective.abs()));
            }
        }
    }
}
