//! Dense linear algebra over `Complex64` with explicit tolerance contracts.
//!
//! Real data is carried as complex numbers with zero imaginary parts; the
//! [`Field`] tag records which one a frame lives in. Every rank decision is
//! relative to the largest singular value, and every Hermitian input is
//! symmetrized as `(M + M*)/2` before it is decomposed.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Absolute slack used when checking that a vector lies on the unit sphere.
pub const UNIT_NORM_TOL: f64 = 1e-10;

/// Scalar field of an analysis session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    #[default]
    Complex,
}

impl Field {
    /// The smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Real && other == Field::Real {
            Field::Real
        } else {
            Field::Complex
        }
    }

    /// Checks that `m` carries data of this field.
    pub fn admits(self, m: &CMatrix) -> bool {
        match self {
            Field::Complex => true,
            Field::Real => m.iter().all(|z| z.im == 0.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

/// Numerical cutoffs shared by all analyses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Relative singular-value cutoff for rank decisions.
    pub rank_rel: f64,
    /// Relative cutoff for deciding two eigenvalues (or bounds) are equal.
    pub eig_rel: f64,
    /// Absolute cutoff on reconstruction residuals.
    pub recon_abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_rel: 1e-10,
            eig_rel: 1e-9,
            recon_abs: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(rank_rel: f64, eig_rel: f64, recon_abs: f64) -> Result<Self> {
        let tol = Tolerance {
            rank_rel,
            eig_rel,
            recon_abs,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("rank_rel", self.rank_rel),
            ("eig_rel", self.eig_rel),
            ("recon_abs", self.recon_abs),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(FrameError::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }

    pub fn with_eig_rel(self, eig_rel: f64) -> Result<Self> {
        Tolerance::new(self.rank_rel, eig_rel, self.recon_abs)
    }
}

pub fn check_finite(m: &CMatrix) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(FrameError::EmptyMatrix);
    }
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(FrameError::NonFiniteEntries)
    }
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(FrameError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

/// Converts a real matrix into the complex carrier type.
pub fn from_real(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Builds a column vector from real coordinates.
pub fn real_vector(coords: &[f64]) -> CVector {
    CVector::from_iterator(coords.len(), coords.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// `n x n` identity.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `k`-th standard basis vector of dimension `n`.
pub fn basis_vector(n: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[k] = Complex64::new(1.0, 0.0);
    v
}

/// Drops imaginary parts. Used to keep real-field data exactly real.
pub fn realify(m: &mut CMatrix) {
    for z in m.iter_mut() {
        z.im = 0.0;
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    check_finite(m)?;
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Number of singular values above `rank_rel * sigma_max`.
pub fn numerical_rank(m: &CMatrix, tol: &Tolerance) -> Result<usize> {
    let s = singular_values(m)?;
    let sigma_max = s.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > tol.rank_rel * sigma_max).count())
}

/// Dimension of the null space: `cols - rank`. An all-zero matrix has kernel dimension `cols`.
pub fn kernel_dimension(m: &CMatrix, tol: &Tolerance) -> Result<usize> {
    Ok(m.ncols() - numerical_rank(m, tol)?)
}

/// Orthonormal basis of the column span, by column-pivoted Gram-Schmidt with
/// reorthogonalization. The number of columns kept is the SVD numerical rank.
pub fn orthonormalize(vectors: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    let rank = numerical_rank(vectors, tol)?;
    if rank == 0 {
        return Err(FrameError::AllColumnsNumericallyZero);
    }
    let n = vectors.nrows();
    let mut work = vectors.clone();
    let mut used = vec![false; work.ncols()];
    let mut q: Vec<CVector> = Vec::with_capacity(rank);

    while q.len() < rank {
        let mut pivot = None;
        let mut best = 0.0;
        for (j, taken) in used.iter().enumerate() {
            if *taken {
                continue;
            }
            let norm = work.column(j).norm();
            if norm > best {
                best = norm;
                pivot = Some(j);
            }
        }
        let Some(j) = pivot else { break };
        used[j] = true;
        let mut v: CVector = work.column(j).into_owned();
        // second pass against the accepted directions
        for prev in &q {
            let c = prev.dotc(&v);
            v.axpy(-c, prev, Complex64::new(1.0, 0.0));
        }
        let norm = v.norm();
        if norm == 0.0 {
            break;
        }
        v.unscale_mut(norm);
        for (k, taken) in used.iter().enumerate() {
            if *taken {
                continue;
            }
            let c = v.dotc(&work.column(k));
            let mut col = work.column_mut(k);
            col.axpy(-c, &v, Complex64::new(1.0, 0.0));
        }
        q.push(v);
    }
    if q.is_empty() {
        return Err(FrameError::AllColumnsNumericallyZero);
    }
    debug_assert_eq!(q[0].len(), n);
    Ok(CMatrix::from_columns(&q))
}

/// `(M + M*)/2`.
pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).unscale(2.0)
}

/// All eigenvalues of the symmetrized matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    check_square(m)?;
    check_finite(m)?;
    let h = symmetrize(m);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors as columns.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_square(m)?;
    check_finite(m)?;
    let eig = SymmetricEigen::new(symmetrize(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let cols: Vec<CVector> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    Ok((values, CMatrix::from_columns(&cols)))
}

/// Smallest and largest eigenvalue of the symmetrized matrix.
pub fn hermitian_eigenrange(m: &CMatrix) -> Result<(f64, f64)> {
    let ev = hermitian_eigenvalues(m)?;
    Ok((ev[0], ev[ev.len() - 1]))
}

/// Solves `M X = rhs` for Hermitian positive definite `M` by Cholesky.
pub fn solve_hermitian_positive(m: &CMatrix, rhs: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    check_square(m)?;
    check_finite(m)?;
    check_finite(rhs)?;
    if rhs.nrows() != m.nrows() {
        return Err(FrameError::DimensionMismatch {
            expected: m.nrows(),
            found: rhs.nrows(),
        });
    }
    let h = symmetrize(m);
    let (lambda_min, lambda_max) = hermitian_eigenrange(&h)?;
    if !(lambda_max > 0.0 && lambda_min > tol.rank_rel * lambda_max) {
        return Err(FrameError::NotPositiveDefinite {
            lambda_min,
            lambda_max,
        });
    }
    let chol = Cholesky::new(h).ok_or(FrameError::NotPositiveDefinite {
        lambda_min,
        lambda_max,
    })?;
    Ok(chol.solve(rhs))
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?[0])
}

/// `‖U‖·‖U⁻¹‖` for a square invertible matrix.
pub fn condition_number(u: &CMatrix, tol: &Tolerance) -> Result<f64> {
    check_square(u)?;
    let s = singular_values(u)?;
    let (max, min) = (s[0], s[s.len() - 1]);
    if !(max > 0.0 && min > tol.rank_rel * max) {
        return Err(FrameError::SingularOperator { sigma_min: min });
    }
    Ok(max / min)
}

/// Largest absolute entrywise difference.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest column norm of `I - m`: the worst reconstruction error over basis vectors.
pub fn identity_residual(m: &CMatrix) -> f64 {
    let diff = identity(m.nrows()) - m;
    diff.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Principal angles (ascending, radians) between the spans of two matrices with
/// orthonormal columns. Computed from both cosines and sines so that small
/// angles keep full relative accuracy.
pub fn principal_angles(a: &CMatrix, b: &CMatrix) -> Result<Vec<f64>> {
    if a.nrows() != b.nrows() {
        return Err(FrameError::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    let (big, small) = if a.ncols() >= b.ncols() { (a, b) } else { (b, a) };
    let cosines = singular_values(&(big.adjoint() * small))?;
    let residual = small - big * (big.adjoint() * small);
    let mut sines = singular_values(&residual)?;
    sines.sort_by(f64::total_cmp);
    Ok(cosines
        .iter()
        .zip(sines.iter())
        .map(|(&c, &s)| s.atan2(c))
        .collect())
}

/// Norm check for the unit sphere.
pub fn check_unit(x: &CVector) -> Result<()> {
    let norm = x.norm();
    if (norm - 1.0).abs() > UNIT_NORM_TOL || !norm.is_finite() {
        return Err(FrameError::NotUnitVector { norm });
    }
    Ok(())
}

/// Real part of `x* M x`.
pub fn quadratic_form(m: &CMatrix, x: &CVector) -> f64 {
    x.dotc(&(m * x)).re
}
