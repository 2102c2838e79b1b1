//! Dense complex linear algebra for small square matrices.
//!
//! Everything here is sized for Hilbert spaces of a handful of levels. The
//! 2x2 case, which covers the two-level model, always goes through exact
//! trace/discriminant formulas; larger matrices fall back to a complex Schur
//! form.

mod eigen;
mod expm;
mod jordan;

pub use eigen::{eigendecompose, EigenDecomposition};
pub(crate) use eigen::trace_discriminant as trace_discriminant_2x2;
pub use expm::matrix_exponential;
pub use jordan::{is_single_block_2x2, jordan_2x2, JordanDecomposition};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Builds a square matrix from row-major entries.
pub fn from_rows(dim: usize, entries: &[C64]) -> ComplexMatrix {
    assert_eq!(entries.len(), dim * dim, "entries count must be dim^2");
    DMatrix::from_row_slice(dim, dim, entries)
}

pub fn sigma_x() -> ComplexMatrix {
    from_rows(2, &[re(0.0), re(1.0), re(1.0), re(0.0)])
}

pub fn sigma_y() -> ComplexMatrix {
    from_rows(2, &[re(0.0), -I, I, re(0.0)])
}

pub fn sigma_z() -> ComplexMatrix {
    from_rows(2, &[re(1.0), re(0.0), re(0.0), re(-1.0)])
}

pub fn pauli() -> [ComplexMatrix; 3] {
    [sigma_x(), sigma_y(), sigma_z()]
}

pub fn ensure_square(a: &ComplexMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix"));
    }
    Ok(a.nrows())
}

pub fn ensure_finite_vector(v: &ComplexVector) -> Result<()> {
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("vector"));
    }
    Ok(())
}

pub fn ensure_same_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Frobenius norm.
#[inline]
pub fn norm(a: &ComplexMatrix) -> f64 {
    a.norm()
}

/// Largest entry modulus.
pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// `‖A - A†‖`.
pub fn hermitian_residual(a: &ComplexMatrix) -> f64 {
    (a - a.adjoint()).norm()
}

pub fn hermitize(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()).scale(0.5)
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b + b * a
}

pub fn outer(x: &ComplexVector, y: &ComplexVector) -> ComplexMatrix {
    x * y.adjoint()
}

/// `⟨x|y⟩`, conjugate-linear in `x`.
#[inline]
pub fn inner(x: &ComplexVector, y: &ComplexVector) -> C64 {
    x.dotc(y)
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.clone().try_inverse().ok_or(Error::Singular)
}

pub fn trace(a: &ComplexMatrix) -> C64 {
    a.diagonal().iter().sum()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Vec<f64> {
    let mut w: Vec<f64> = nalgebra::SymmetricEigen::new(hermitize(a))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    w.sort_by(f64::total_cmp);
    w
}

/// Returns `Υ = S^{1/2}`, the Hermitian positive-definite square root, so
/// that `Υ†Υ = S`.
///
/// `tol` is relative to `‖S‖`: Hermiticity must hold to `tol·‖S‖` and every
/// eigenvalue must exceed `tol·‖S‖`.
pub fn hermitian_sqrt_factor(s: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    ensure_square(s)?;
    let scale = norm(s);
    let herm = hermitian_residual(s);
    if herm > tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian(herm));
    }
    let eig = nalgebra::SymmetricEigen::new(hermitize(s));
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > tol * scale) {
        return Err(Error::NotPositiveDefinite(min));
    }
    let roots = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&w| re(w.sqrt())),
    );
    let v = &eig.eigenvectors;
    let sqrt = v * DMatrix::from_diagonal(&roots) * v.adjoint();
    Ok(hermitize(&sqrt))
}
