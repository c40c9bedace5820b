//! Synthetic inlier/outlier data on the unit sphere.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{invalid, Result};
use crate::numerics::{complement_basis, orthonormalize, Matrix, Vector};
use crate::rng::{seeded, Gaussian};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Inlier,
    Outlier,
}

impl Label {
    pub fn is_inlier(self) -> bool {
        self == Label::Inlier
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    /// `D x (N + M)`, columns in shuffled order.
    pub data: Matrix,
    pub labels: Vec<Label>,
    /// `D x d`, orthonormal.
    pub true_basis: Matrix,
    pub sigma: f64,
    pub seed: u64,
}

impl Dataset {
    pub fn ambient_dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn subspace_dim(&self) -> usize {
        self.true_basis.ncols()
    }

    pub fn n_inliers(&self) -> usize {
        self.labels.iter().filter(|l| l.is_inlier()).count()
    }

    pub fn n_outliers(&self) -> usize {
        self.labels.len() - self.n_inliers()
    }

    /// Orthonormal basis of the true orthogonal complement, `D x (D − d)`.
    pub fn true_complement(&self) -> Matrix {
        complement_basis(&self.true_basis, self.ambient_dim())
    }

    /// Whether there are at least `D − d` outliers, the count assumed by the
    /// recovery guarantees. Reported, never enforced.
    pub fn has_enough_outliers(&self) -> bool {
        self.n_outliers() >= self.ambient_dim() - self.subspace_dim()
    }

    pub fn columns_with(&self, label: Label) -> Matrix {
        let cols: Vec<Vector> = self
            .labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == label)
            .map(|(j, _)| self.data.column(j).into_owned())
            .collect();
        if cols.is_empty() {
            Matrix::zeros(self.ambient_dim(), 0)
        } else {
            Matrix::from_columns(&cols)
        }
    }
}

fn sphere_columns<R: Rng>(g: &mut Gaussian<R>, dim: usize, n: usize) -> Matrix {
    let mut m = Matrix::zeros(dim, n);
    for j in 0..n {
        loop {
            for i in 0..dim {
                m[(i, j)] = g.sample();
            }
            let norm = m.column(j).norm();
            if norm > 1e-300 {
                m.column_mut(j).unscale_mut(norm);
                break;
            }
        }
    }
    m
}

fn subspace<R: Rng>(g: &mut Gaussian<R>, dim: usize, d: usize) -> Matrix {
    loop {
        let raw = Matrix::from_fn(dim, d, |_, _| g.sample());
        let q = orthonormalize(&raw);
        if q.ncols() == d {
            return q;
        }
    }
}

/// `n` columns i.i.d. uniform on the unit sphere of `R^dim`.
pub fn unit_sphere_sample(dim: usize, n: usize, seed: u64) -> Result<Matrix> {
    if dim == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    Ok(sphere_columns(&mut Gaussian::new(seeded(seed)), dim, n))
}

/// Orthonormal basis of a uniformly random `d`-dimensional subspace of `R^dim`.
pub fn random_subspace(dim: usize, d: usize, seed: u64) -> Result<Matrix> {
    if d == 0 || d > dim {
        return Err(invalid(format!("need 1 <= d <= D, got d={d}, D={dim}")));
    }
    Ok(subspace(&mut Gaussian::new(seeded(seed)), dim, d))
}

/// Draws, in this order from one stream: the subspace basis, `n` inlier
/// coefficient vectors on the sphere of `R^d`, the complement noise (only when
/// `sigma > 0`), `m` outliers on the sphere of `R^dim`, and the column
/// permutation.
pub fn synthesize(dim: usize, d: usize, n: usize, m: usize, sigma: f64, seed: u64) -> Result<Dataset> {
    if d == 0 || d >= dim {
        return Err(invalid(format!("need 1 <= d < D, got d={d}, D={dim}")));
    }
    if n < d + 1 {
        return Err(invalid(format!("need N >= d + 1 inliers, got N={n}, d={d}")));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("sigma must be finite and nonnegative, got {sigma}")));
    }
    let mut g = Gaussian::new(seeded(seed));
    let basis = subspace(&mut g, dim, d);
    let coeffs = sphere_columns(&mut g, d, n);
    let mut inliers = &basis * coeffs;
    if sigma > 0.0 {
        let noise = Matrix::from_fn(dim, n, |_, _| g.sample());
        let proj = &basis * basis.tr_mul(&noise);
        inliers += (noise - proj) * sigma;
    }
    let outliers = sphere_columns(&mut g, dim, m);

    let mut order: Vec<usize> = (0..n + m).collect();
    order.shuffle(g.rng_mut());
    let mut data = Matrix::zeros(dim, n + m);
    let mut labels = Vec::with_capacity(n + m);
    for (dst, &src) in order.iter().enumerate() {
        if src < n {
            data.set_column(dst, &inliers.column(src));
            labels.push(Label::Inlier);
        } else {
            data.set_column(dst, &outliers.column(src - n));
            labels.push(Label::Outlier);
        }
    }
    Ok(Dataset { data, labels, true_basis: basis, sigma, seed })
}
