//! RANSAC for a single linear subspace.

use std::time::{Duration, Instant};

use rand::seq::index::sample;

use crate::dpcp::SubspaceEstimate;
use crate::error::{invalid, Error, Result};
use crate::numerics::{canonical_signs, complement_basis, normalize_columns, orthonormalize, Matrix, Vector};
use crate::rng::{mix, seeded};

#[derive(Debug, Clone, PartialEq)]
pub struct RansacConfig {
    /// Subspace dimension `d`; each model is spanned by `d` sampled points.
    pub dim: usize,
    /// Points at distance `≤ threshold` from a model count as its inliers.
    pub threshold: f64,
    pub success_prob: f64,
    /// Lower bound on the number of trials; stands in for a minimum run time.
    pub min_trials: usize,
    pub outlier_ratio_hint: f64,
    pub seed: u64,
    /// Keep sampling until at least this much wall time has passed as well.
    pub min_time: Option<Duration>,
}

impl RansacConfig {
    pub fn new(dim: usize, outlier_ratio_hint: f64, seed: u64) -> Self {
        Self { dim, threshold: 1e-3, success_prob: 0.99, min_trials: 0, outlier_ratio_hint, seed, min_time: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(invalid("RANSAC subspace dimension must be at least 1"));
        }
        if !(self.threshold > 0.0) {
            return Err(invalid(format!("threshold must be positive, got {}", self.threshold)));
        }
        if !(self.success_prob > 0.0 && self.success_prob < 1.0) {
            return Err(invalid(format!("success probability must lie in (0, 1), got {}", self.success_prob)));
        }
        if !(0.0..1.0).contains(&self.outlier_ratio_hint) {
            return Err(invalid(format!("outlier ratio must lie in [0, 1), got {}", self.outlier_ratio_hint)));
        }
        Ok(())
    }

    /// `max(required trials, min_trials)`.
    pub fn trial_count(&self) -> Result<usize> {
        Ok(ransac_trials(self.success_prob, self.outlier_ratio_hint, self.dim)?.max(self.min_trials))
    }
}

/// Trials needed to draw an all-inlier `d`-sample with probability `p` when a
/// fraction `r` of the points are outliers.
pub fn ransac_trials(p: f64, r: f64, d: usize) -> Result<usize> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("success probability must lie in (0, 1), got {p}")));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(invalid(format!("outlier ratio must lie in [0, 1), got {r}")));
    }
    let all_inlier = (1.0 - r).powi(d as i32);
    if all_inlier >= 1.0 {
        return Ok(1);
    }
    // ln_1p keeps precision when the all-inlier probability is tiny
    let n = ((1.0 - p).ln() / (-all_inlier).ln_1p()).ceil();
    Ok((n as usize).max(1))
}

/// Euclidean distance from `x` to the span of the orthonormal columns of `q`.
pub fn distance_to_span(q: &Matrix, x: &Vector) -> f64 {
    let inside = q.tr_mul(x).norm_squared();
    (x.norm_squared() - inside).max(0.0).sqrt()
}

#[derive(Debug, Clone)]
pub struct RansacResult {
    pub estimate: SubspaceEstimate,
    /// Orthonormal basis of the best model.
    pub model: Matrix,
    pub consensus: usize,
    pub best_trial: usize,
    pub trials: usize,
}

/// Runs `cfg.trial_count()` trials, and more while `min_time` has not
/// elapsed. Samples `d` points per trial, takes their span as the model and keeps the
/// model with the most points within `threshold`; ties go to the earliest
/// trial. Columns are normalized first. Trial `t` draws from its own stream
/// seeded by `mix(seed, t)`.
pub fn ransac(data: &Matrix, cfg: &RansacConfig) -> Result<RansacResult> {
    cfg.validate()?;
    let (dim, l) = data.shape();
    if cfg.dim >= dim {
        return Err(invalid(format!("need d < D, got d={}, D={dim}", cfg.dim)));
    }
    if l < cfg.dim {
        return Err(invalid(format!("need at least d={} points, got {l}", cfg.dim)));
    }
    let x = normalize_columns(data);
    let trials = cfg.trial_count()?;
    let columns: Vec<Vector> = x.column_iter().map(|c| c.into_owned()).collect();
    let norms: Vec<f64> = columns.iter().map(|c| c.norm_squared()).collect();
    let mut best: Option<(usize, usize, Matrix)> = None;
    let start = Instant::now();
    let mut t = 0usize;
    while t < trials || cfg.min_time.is_some_and(|m| start.elapsed() < m) {
        let trial = t;
        t += 1;
        let mut rng = seeded(mix(cfg.seed, trial as u64));
        let idx = sample(&mut rng, l, cfg.dim);
        let picked: Vec<Vector> = idx.iter().map(|j| columns[j].clone()).collect();
        let q = orthonormalize(&Matrix::from_columns(&picked));
        if q.ncols() < cfg.dim {
            continue;
        }
        let inside = q.tr_mul(&x);
        let count = inside
            .column_iter()
            .zip(&norms)
            .filter(|(c, n)| (*n - c.norm_squared()).max(0.0).sqrt() <= cfg.threshold)
            .count();
        if best.as_ref().is_none_or(|(_, c, _)| count > *c) {
            best = Some((trial, count, q));
        }
    }
    let Some((best_trial, consensus, model)) = best else {
        return Err(Error::DegenerateData("every RANSAC sample was rank deficient".into()));
    };
    let mut comp = complement_basis(&model, dim);
    canonical_signs(&mut comp);
    Ok(RansacResult {
        estimate: SubspaceEstimate {
            complement_basis: comp,
            objective_trace: vec![consensus as f64],
            iterations_per_component: vec![t],
            converged: vec![true],
        },
        model,
        consensus,
        best_trial,
        trials: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::synthesize;

    #[test]
    fn trial_counts() {
        assert_eq!(ransac_trials(0.99, 0.5, 2).unwrap(), 17);
        assert_eq!(ransac_trials(0.99, 0.0, 3).unwrap(), 1);
        assert_eq!(ransac_trials(0.99, 0.7, 5).unwrap(), 1893);
        assert!(ransac_trials(1.0, 0.5, 2).is_err());
        assert!(ransac_trials(0.5, 1.0, 2).is_err());
    }

    #[test]
    fn trial_count_reaches_success_probability() {
        // failure probability after k trials is (1 − w)^k; k is the least with ≤ 1 − p
        for (p, r, d) in [(0.99, 0.5, 2), (0.9, 0.3, 4), (0.999, 0.7, 5)] {
            let k = ransac_trials(p, r, d).unwrap();
            let w = (1.0f64 - r).powi(d as i32);
            let fail = |k: usize| (0..k).fold(1.0, |acc, _| acc * (1.0 - w));
            assert!(fail(k) <= 1.0 - p + 1e-12);
            assert!(fail(k - 1) > 1.0 - p);
        }
    }

    #[test]
    fn separates_clean_plane() {
        let ds = synthesize(3, 2, 50, 13, 0.0, 4).unwrap();
        let cfg = RansacConfig::new(2, 0.2, 1);
        let res = ransac(&ds.data, &cfg).unwrap();
        let comp = &res.estimate.complement_basis;
        let dist: Vec<f64> = ds.data.column_iter().map(|c| comp.tr_mul(&c).norm()).collect();
        let max_in = ds.labels.iter().zip(&dist).filter(|(l, _)| l.is_inlier()).map(|(_, d)| *d).fold(0.0, f64::max);
        let min_out =
            ds.labels.iter().zip(&dist).filter(|(l, _)| !l.is_inlier()).map(|(_, d)| *d).fold(f64::INFINITY, f64::min);
        assert!(max_in < min_out);
        assert_eq!(res.consensus, 50);
    }

    #[test]
    fn boundary_point_counts_as_inlier() {
        let t = 0.3f64;
        let data = Matrix::from_column_slice(2, 2, &[1.0, 0.0, t.cos(), t.sin()]);
        let q = Matrix::from_column_slice(2, 1, &[1.0, 0.0]);
        let exact = distance_to_span(&q, &data.column(1).into_owned());
        let cfg = RansacConfig { threshold: exact, min_trials: 50, ..RansacConfig::new(1, 0.0, 0) };
        let res = ransac(&data, &cfg).unwrap();
        assert_eq!(res.consensus, 2);
    }

    #[test]
    fn reproducible_and_consensus_is_maximal() {
        let ds = synthesize(5, 3, 40, 40, 0.0, 8).unwrap();
        let cfg = RansacConfig { min_trials: 60, ..RansacConfig::new(3, 0.5, 17) };
        let a = ransac(&ds.data, &cfg).unwrap();
        let b = ransac(&ds.data, &cfg).unwrap();
        assert_eq!(a.estimate.complement_basis, b.estimate.complement_basis);
        assert_eq!(a.trials, 60);
        // recount every candidate independently
        let x = normalize_columns(&ds.data);
        for t in 0..a.trials {
            let mut rng = seeded(mix(cfg.seed, t as u64));
            let idx = sample(&mut rng, x.ncols(), 3);
            let cols: Vec<Vector> = idx.iter().map(|j| x.column(j).into_owned()).collect();
            let q = orthonormalize(&Matrix::from_columns(&cols));
            let count = x.column_iter().filter(|c| distance_to_span(&q, &c.into_owned()) <= cfg.threshold).count();
            assert!(count <= a.consensus);
        }
    }

    #[test]
    fn rank_deficient_samples_are_reported() {
        let data = Matrix::from_column_slice(3, 3, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let cfg = RansacConfig { min_trials: 5, ..RansacConfig::new(2, 0.0, 0) };
        assert!(matches!(ransac(&data, &cfg), Err(Error::DegenerateData(_))));
    }
}
