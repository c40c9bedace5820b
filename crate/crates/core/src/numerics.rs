//! Dense linear-algebra kernel shared by every solver.
//!
//! Matrices follow the data convention used throughout the crate: a dataset
//! is `D x L`, one point per column.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{invalid, Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Coordinates smaller than this are treated as zero by the sign convention.
const SIGN_EPS: f64 = 1e-12;

/// A vector on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(Vector);

impl UnitVector {
    /// Wraps `v`, which must already have unit norm (within 1e-12).
    pub fn new(v: Vector) -> Result<Self> {
        let norm = v.norm();
        if !v.iter().all(|x| x.is_finite()) || (norm - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("expected a unit vector, norm is {norm}")));
        }
        Ok(Self(v))
    }

    pub fn normalize(v: Vector) -> Result<Self> {
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self(v / norm))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_vector(&self) -> &Vector {
        &self.0
    }

    pub fn into_inner(self) -> Vector {
        self.0
    }
}

impl AsRef<Vector> for UnitVector {
    fn as_ref(&self) -> &Vector {
        &self.0
    }
}

/// Flips `v` so that its first non-negligible coordinate is positive.
pub fn canonical_sign(v: &mut Vector) {
    if let Some(&first) = v.iter().find(|x| x.abs() > SIGN_EPS) {
        if first < 0.0 {
            v.neg_mut();
        }
    }
}

/// Applies [`canonical_sign`] to each column.
pub fn canonical_signs(m: &mut Matrix) {
    for mut col in m.column_iter_mut() {
        if let Some(&first) = col.iter().find(|x| x.abs() > SIGN_EPS) {
            if first < 0.0 {
                col.neg_mut();
            }
        }
    }
}

/// Scales every nonzero column to unit Euclidean norm. Zero columns are kept.
pub fn normalize_columns(m: &Matrix) -> Matrix {
    let mut out = m.clone();
    for mut col in out.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
    out
}

/// Eigenpairs of a symmetric matrix sorted by ascending eigenvalue.
///
/// Backed by Householder tridiagonalization followed by implicit QR.
pub fn symmetric_eigen_ascending(g: &Matrix) -> (Vector, Matrix) {
    let n = g.nrows();
    let eig = SymmetricEigen::new(g.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let values = Vector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    canonical_signs(&mut vectors);
    (values, vectors)
}

/// The `c` eigenvectors of the symmetric matrix `g` with smallest eigenvalues.
pub fn smallest_eigenvectors(g: &Matrix, c: usize) -> Result<Matrix> {
    if g.nrows() != g.ncols() {
        return Err(invalid(format!("expected a square matrix, got {}x{}", g.nrows(), g.ncols())));
    }
    if c > g.nrows() {
        return Err(invalid(format!("requested {c} directions from a {0}x{0} matrix", g.nrows())));
    }
    let (_, vectors) = symmetric_eigen_ascending(g);
    Ok(vectors.columns(0, c).into_owned())
}

/// Right singular directions of `a` (an `L x D` matrix), ascending by
/// singular value, computed from the eigendecomposition of the Gram matrix.
///
/// Returns the singular values and all `D` directions as columns.
pub fn right_singular_basis(a: &Matrix) -> Result<(Vector, Matrix)> {
    if a.nrows() == 0 {
        return Err(invalid("matrix has no rows"));
    }
    let gram = a.tr_mul(a);
    let (values, vectors) = symmetric_eigen_ascending(&gram);
    Ok((values.map(|v| v.max(0.0).sqrt()), vectors))
}

/// The `c` right singular vectors of `a` (`L x D`) with smallest singular
/// values, as the columns of a `D x c` matrix.
pub fn smallest_right_singular_vectors(a: &Matrix, c: usize) -> Result<Matrix> {
    if c > a.ncols() {
        return Err(invalid(format!("requested {c} directions but the matrix has {} columns", a.ncols())));
    }
    let (_, vectors) = right_singular_basis(a)?;
    Ok(vectors.columns(0, c).into_owned())
}

/// Orthonormal basis for the column span of `v`, via modified Gram-Schmidt
/// with one reorthogonalization pass. Columns that are numerically dependent
/// on earlier ones are dropped, so the result has `rank(v)` columns.
pub fn orthonormalize(v: &Matrix) -> Matrix {
    let scale = v.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    let tol = 1e-10 * scale.max(f64::MIN_POSITIVE);
    let mut basis: Vec<Vector> = Vec::with_capacity(v.ncols());
    for col in v.column_iter() {
        let mut w: Vector = col.into_owned();
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dot(&w);
                w.axpy(-proj, q, 1.0);
            }
        }
        let norm = w.norm();
        if norm > tol {
            basis.push(w / norm);
        }
    }
    if basis.is_empty() {
        return Matrix::zeros(v.nrows(), 0);
    }
    Matrix::from_columns(&basis)
}

/// Orthonormal basis of the orthogonal complement of `span(b)` in `R^dim`.
pub fn complement_basis(b: &Matrix, dim: usize) -> Matrix {
    if b.ncols() == 0 {
        return Matrix::identity(dim, dim);
    }
    let q = orthonormalize(b);
    let proj = Matrix::identity(dim, dim) - &q * q.transpose();
    let (_, vectors) = symmetric_eigen_ascending(&proj);
    // eigenvalues of a projector are 0 (span) then 1 (complement)
    vectors.columns(q.ncols(), dim - q.ncols()).into_owned()
}

/// Cholesky factor of a symmetric positive-definite matrix, reusable across
/// solves.
#[derive(Debug, Clone)]
pub struct SpdFactor {
    chol: Cholesky<f64, Dyn>,
}

impl SpdFactor {
    pub fn new(g: &Matrix) -> Result<Self> {
        let n = g.nrows();
        if n != g.ncols() {
            return Err(invalid(format!("expected a square matrix, got {}x{}", n, g.ncols())));
        }
        let scale = g.amax().max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if (g[(i, j)] - g[(j, i)]).abs() > 1e-10 * scale {
                    return Err(invalid(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        // nalgebra reads the lower triangle only
        match Cholesky::new(g.clone()) {
            Some(chol) => Ok(Self { chol }),
            None => {
                let pivot = first_bad_pivot(g);
                Err(Error::NotPositiveDefinite { pivot: pivot.0, value: pivot.1 })
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.chol.l_dirty().nrows()
    }

    pub fn solve(&self, r: &Vector) -> Result<Vector> {
        if r.len() != self.dim() {
            return Err(invalid(format!("right-hand side has length {}, expected {}", r.len(), self.dim())));
        }
        Ok(self.chol.solve(r))
    }
}

/// Locates the pivot where an LLᵀ factorization breaks down, for error
/// reporting only.
fn first_bad_pivot(g: &Matrix) -> (usize, f64) {
    let n = g.nrows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = g[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return (j, d);
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in (j + 1)..n {
            let mut s = g[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    (n, f64::NAN)
}

/// Solves `g x = r` for symmetric positive-definite `g`.
pub fn solve_spd(g: &Matrix, r: &Vector) -> Result<Vector> {
    SpdFactor::new(g)?.solve(r)
}

/// Cosines of the principal angles between the spans of two matrices with
/// orthonormal columns, in descending order.
pub fn principal_cosines(a: &Matrix, b: &Matrix) -> Vec<f64> {
    if a.ncols() == 0 || b.ncols() == 0 {
        return Vec::new();
    }
    let cross = a.tr_mul(b);
    let mut s: Vec<f64> = cross.singular_values().iter().map(|v| v.clamp(0.0, 1.0)).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Smallest principal angle (radians) between two orthonormal bases.
pub fn min_principal_angle(a: &Matrix, b: &Matrix) -> f64 {
    principal_cosines(a, b).first().map_or(std::f64::consts::FRAC_PI_2, |c| c.acos())
}

/// Largest principal angle (radians) between two orthonormal bases of
/// possibly different dimension; only `min(dim a, dim b)` angles exist.
pub fn max_principal_angle(a: &Matrix, b: &Matrix) -> f64 {
    principal_cosines(a, b).last().map_or(std::f64::consts::FRAC_PI_2, |c| c.acos())
}

/// Angle (radians) between `v` and the subspace spanned by the orthonormal
/// columns of `basis`.
pub fn angle_to_subspace(v: &Vector, basis: &Matrix) -> f64 {
    let norm = v.norm();
    if norm == 0.0 {
        return 0.0;
    }
    let inside = (basis.tr_mul(v).norm() / norm).clamp(0.0, 1.0);
    inside.acos()
}
