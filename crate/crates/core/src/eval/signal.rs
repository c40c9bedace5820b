use crate::datagen::Label;
use crate::error::{invalid, Result};
use crate::numerics::{normalize_columns, Matrix};

/// Per-point outlier score: larger means more outlying.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub values: Vec<f64>,
    pub labels: Vec<Label>,
}

impl Signal {
    pub fn new(values: Vec<f64>, labels: Vec<Label>) -> Result<Self> {
        if values.len() != labels.len() {
            return Err(invalid(format!("{} signal values for {} labels", values.len(), labels.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("signal values must be finite"));
        }
        Ok(Self { values, labels })
    }

    fn split(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut inl = Vec::new();
        let mut out = Vec::new();
        for (v, l) in self.values.iter().zip(&self.labels) {
            if l.is_inlier() {
                inl.push(*v);
            } else {
                out.push(*v);
            }
        }
        if inl.is_empty() || out.is_empty() {
            return Err(invalid("signal needs at least one inlier and one outlier"));
        }
        Ok((inl, out))
    }
}

/// `α_j = ‖Bᵀx̃_j‖₂`, the distance of each normalized column of `data` to the
/// subspace whose orthogonal complement has orthonormal basis `complement`.
pub fn distance_signal(data: &Matrix, complement: &Matrix, labels: &[Label]) -> Result<Signal> {
    if complement.nrows() != data.nrows() {
        return Err(invalid("complement basis and data have different row counts"));
    }
    let values = complement.tr_mul(&normalize_columns(data)).column_iter().map(|c| c.norm()).collect();
    Signal::new(values, labels.to_vec())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocResult {
    /// `(false positive rate, true positive rate)` from `(0, 0)` to `(1, 1)`.
    pub points: Vec<(f64, f64)>,
    pub area_above: f64,
}

/// ROC of the rule "inlier iff `α ≤ t`" over every distinct value `t`.
/// `area_above = 1 − AUC`, where AUC is the probability that a random inlier
/// scores below a random outlier, ties counting one half.
pub fn roc(sig: &Signal) -> Result<RocResult> {
    let (inl, out) = sig.split()?;
    let mut pairs: Vec<(f64, bool)> = sig.values.iter().zip(&sig.labels).map(|(v, l)| (*v, l.is_inlier())).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (n_in, n_out) = (inl.len() as f64, out.len() as f64);
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut auc = 0.0;
    let mut i = 0;
    while i < pairs.len() {
        let t = pairs[i].0;
        let (mut dtp, mut dfp) = (0usize, 0usize);
        while i < pairs.len() && pairs[i].0 == t {
            if pairs[i].1 {
                dtp += 1;
            } else {
                dfp += 1;
            }
            i += 1;
        }
        // outliers at this threshold rank above every inlier already counted,
        // and tie with the inliers counted now
        auc += dfp as f64 * (tp as f64 + 0.5 * dtp as f64);
        tp += dtp;
        fp += dfp;
        points.push((fp as f64 / n_out, tp as f64 / n_in));
    }
    let auc = auc / (n_in * n_out);
    Ok(RocResult { points, area_above: (1.0 - auc).clamp(0.0, 1.0) })
}

/// Whether some threshold separates the classes: `max inlier α < min outlier α`.
pub fn perfect_separation(sig: &Signal) -> Result<bool> {
    let (inl, out) = sig.split()?;
    let max_in = inl.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_out = out.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(max_in < min_out)
}
