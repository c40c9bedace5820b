use rand::seq::index::sample;
use rand::Rng;

use super::continuous::c_coefficient;
use crate::error::{invalid, Result};
use crate::numerics::{Matrix, Vector};
use crate::rng::{seeded, Gaussian};

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `max_b ‖c·b − (1/n) Σ_j sign(bᵀy_j) y_j‖₂` over the given probe columns.
pub fn average_error_over(points: &Matrix, c: f64, probes: &Matrix) -> f64 {
    let n = points.ncols();
    if n == 0 || probes.ncols() == 0 {
        return 0.0;
    }
    let signs = points.tr_mul(probes).map(sign);
    let averages = points * signs / n as f64;
    (probes * c - averages).column_iter().map(|col| col.norm()).fold(0.0, f64::max)
}

/// Probe directions uniform on the unit sphere of `span(restrict)`, or of the
/// ambient space when `restrict` is `None`. A larger `count` with the same
/// seed extends a smaller one.
pub fn probe_directions(dim: usize, restrict: Option<&Matrix>, count: usize, seed: u64) -> Matrix {
    let inner = restrict.map_or(dim, |u| u.ncols());
    let mut g = Gaussian::new(seeded(seed));
    let mut z = Matrix::zeros(inner, count);
    for mut col in z.column_iter_mut() {
        loop {
            col.iter_mut().for_each(|v| *v = g.sample());
            let norm = col.norm();
            if norm > 1e-300 {
                col /= norm;
                break;
            }
        }
    }
    match restrict {
        Some(u) => u * z,
        None => z,
    }
}

/// Monte-Carlo lower estimate of the uniformity error of `points`: the
/// average-error maximum over `probes` random directions, with `c = c_D`, or
/// with `c = c_d` and directions drawn inside `span(restrict)` for points
/// lying in that `d`-dimensional subspace.
pub fn estimate_average_error(points: &Matrix, restrict: Option<&Matrix>, probes: usize, seed: u64) -> Result<f64> {
    let dim = points.nrows();
    if dim == 0 {
        return Err(invalid("points must have at least one row"));
    }
    let c = match restrict {
        Some(u) => {
            if u.nrows() != dim || u.ncols() == 0 {
                return Err(invalid("restricting basis must be D x d with d >= 1"));
            }
            c_coefficient(u.ncols())?
        }
        None => c_coefficient(dim)?,
    };
    // process probes in blocks to bound memory
    const BLOCK: usize = 1024;
    let all = probe_directions(dim, restrict, probes, seed);
    let mut best = 0.0f64;
    let mut start = 0;
    while start < probes {
        let len = BLOCK.min(probes - start);
        best = best.max(average_error_over(points, c, &all.columns(start, len).into_owned()));
        start += len;
    }
    Ok(best)
}

/// `‖Σ_i s_i y_{j_i}‖` for the given subset and signs.
fn zonotope_vertex_norm(points: &Matrix, subset: &[usize], signs: &[f64]) -> f64 {
    let mut v = Vector::zeros(points.nrows());
    for (&j, &s) in subset.iter().zip(signs) {
        v.axpy(s, &points.column(j), 1.0);
    }
    v.norm()
}

/// Flips single signs while that increases `‖Σ s_i y_i‖`; returns the norm.
fn greedy_signs(points: &Matrix, subset: &[usize], signs: &mut [f64]) -> f64 {
    let mut v = Vector::zeros(points.nrows());
    for (&j, &s) in subset.iter().zip(signs.iter()) {
        v.axpy(s, &points.column(j), 1.0);
    }
    loop {
        let mut improved = false;
        for (i, &j) in subset.iter().enumerate() {
            let y = points.column(j);
            // flipping s_i changes v by −2 s_i y
            let rest = &v - y * signs[i];
            if rest.dot(&y) * signs[i] < -1e-15 {
                signs[i] = -signs[i];
                v = rest + y * signs[i];
                improved = true;
            }
        }
        if !improved {
            return v.norm();
        }
    }
}

fn binomial_times_signs(n: usize, k: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    acc.checked_mul(1u128.checked_shl(k as u32)?)
}

/// Largest `‖Σ_i s_i y_{j_i}‖₂` over `K`-subsets of columns and signs.
///
/// Exhaustive when `C(n, K)·2^K ≤ budget`. Otherwise spends about `budget`
/// vertex evaluations on two kinds of candidates, alternating: a random subset
/// refined by single sign flips, and a direction-guided search that takes the
/// `K` columns most correlated with a direction `u`, sets `u` to their signed
/// sum and repeats until the subset is stable. The result is a lower estimate
/// of the true maximum in the randomized regime.
pub fn estimate_circumradius(points: &Matrix, k: usize, budget: usize, seed: u64) -> Result<f64> {
    let n = points.ncols();
    if k > n {
        return Err(invalid(format!("K={k} exceeds the number of points {n}")));
    }
    if k == 0 {
        return Ok(0.0);
    }
    if binomial_times_signs(n, k).is_some_and(|total| total <= budget as u128) {
        return Ok(exhaustive_circumradius(points, k));
    }
    let mut rng = seeded(seed);
    let mut g = Gaussian::new(seeded(seed.wrapping_add(1)));
    let dim = points.nrows();
    let mut best = 0.0f64;
    let mut spent = 0usize;
    let mut round = 0usize;
    while spent < budget.max(1) {
        if round.is_multiple_of(2) {
            let subset: Vec<usize> = sample(&mut rng, n, k).into_vec();
            let mut signs: Vec<f64> = (0..k).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
            best = best.max(greedy_signs(points, &subset, &mut signs));
            spent += k;
        } else {
            let mut u = Vector::from_fn(dim, |_, _| g.sample());
            let mut previous: Vec<usize> = Vec::new();
            for _ in 0..50 {
                let corr = points.tr_mul(&u);
                let mut order: Vec<usize> = (0..n).collect();
                order.select_nth_unstable_by(k - 1, |&a, &b| corr[b].abs().total_cmp(&corr[a].abs()));
                let mut subset: Vec<usize> = order[..k].to_vec();
                subset.sort_unstable();
                let signs: Vec<f64> = subset.iter().map(|&j| if corr[j] >= 0.0 { 1.0 } else { -1.0 }).collect();
                spent += k;
                let mut v = Vector::zeros(dim);
                for (&j, &s) in subset.iter().zip(&signs) {
                    v.axpy(s, &points.column(j), 1.0);
                }
                best = best.max(v.norm());
                if subset == previous || v.norm() == 0.0 {
                    break;
                }
                previous = subset;
                u = v;
            }
        }
        round += 1;
    }
    Ok(best)
}

fn exhaustive_circumradius(points: &Matrix, k: usize) -> f64 {
    let n = points.ncols();
    let mut best = 0.0f64;
    let mut subset: Vec<usize> = (0..k).collect();
    let mut signs = vec![1.0; k];
    loop {
        // the first sign is fixed: (s, −s) give the same norm
        for mask in 0..(1u64 << (k - 1)) {
            for (i, s) in signs.iter_mut().enumerate().skip(1) {
                *s = if mask >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 };
            }
            best = best.max(zonotope_vertex_norm(points, &subset, &signs));
        }
        let mut i = k;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if subset[i] < n - k + i {
                subset[i] += 1;
                for t in i + 1..k {
                    subset[t] = subset[t - 1] + 1;
                }
                break;
            }
        }
    }
}
