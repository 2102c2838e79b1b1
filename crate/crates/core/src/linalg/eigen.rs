use std::cmp::Ordering;

use nalgebra::Schur;

use super::{ensure_square, inner, max_abs, norm, C64, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

/// Right eigenpairs of a square matrix.
///
/// Eigenvalues are sorted by real part, then imaginary part. Each column of
/// `right_vectors` is scaled so its largest-modulus entry is real positive
/// and then normalized to unit Euclidean length.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<C64>,
    pub right_vectors: ComplexMatrix,
    pub is_defective: bool,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> ComplexVector {
        self.right_vectors.column(k).into_owned()
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

const SCHUR_MAX_ITER: usize = 10_000;

/// Eigendecomposition of `a`.
///
/// `tol` is relative: two eigenvalues coincide when they differ by at most
/// `tol·‖a‖`, and their unit eigenvectors are dependent when
/// `|⟨v₁|v₂⟩| > 1 - tol`. The matrix is flagged defective only when both
/// hold for some pair.
pub fn eigendecompose(a: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    let n = ensure_square(a)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let (values, vectors) = match n {
        1 => (vec![a[(0, 0)]], ComplexMatrix::identity(1, 1)),
        2 => eigen_2x2(a),
        _ if is_diagonal(a) => ((0..n).map(|k| a[(k, k)]).collect(), ComplexMatrix::identity(n, n)),
        _ => eigen_schur(a)?,
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| cmp_eigenvalue(values[i], values[j]));
    let eigenvalues: Vec<C64> = order.iter().map(|&k| values[k]).collect();
    let mut right_vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let v = fix_gauge(vectors.column(src).into_owned());
        right_vectors.set_column(dst, &v);
    }

    let scale = norm(a);
    let mut is_defective = false;
    for i in 0..n {
        for j in i + 1..n {
            let close = (eigenvalues[i] - eigenvalues[j]).norm() <= tol * scale;
            let aligned = inner(
                &right_vectors.column(i).into_owned(),
                &right_vectors.column(j).into_owned(),
            )
            .norm()
                > 1.0 - tol;
            is_defective |= close && aligned;
        }
    }

    if !is_defective {
        for k in 0..n {
            let v = right_vectors.column(k);
            let r = (a * v - v * eigenvalues[k]).norm();
            if r > 1e-10 * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::NonConvergence(n));
            }
        }
    }

    Ok(EigenDecomposition {
        eigenvalues,
        right_vectors,
        is_defective,
    })
}

pub(crate) fn cmp_eigenvalue(x: C64, y: C64) -> Ordering {
    x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
}

/// Largest-modulus entry real positive, unit norm. The first index wins
/// ties.
pub(crate) fn fix_gauge(mut v: ComplexVector) -> ComplexVector {
    let mut best = 0;
    for k in 1..v.len() {
        if v[k].norm() > v[best].norm() {
            best = k;
        }
    }
    let pivot = v[best];
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        v *= phase;
    }
    let n = v.norm();
    if n > 0.0 {
        v /= C64::new(n, 0.0);
    }
    v
}

/// Half-trace and discriminant `q = ((a-d)/2)² + bc` of a 2x2 matrix; the
/// eigenvalues are `m ± √q`.
pub(crate) fn trace_discriminant(a: &ComplexMatrix) -> (C64, C64) {
    let (a00, a01, a10, a11) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let m = (a00 + a11) * 0.5;
    let h = (a00 - a11) * 0.5;
    (m, h * h + a01 * a10)
}

/// Null vector of `A - λI` for a 2x2 `A`, taken from whichever row gives the
/// larger candidate. `None` when `A - λI` vanishes.
pub(crate) fn null_vector_2x2(a: &ComplexMatrix, lambda: C64) -> Option<ComplexVector> {
    let from_row0 = ComplexVector::from_vec(vec![a[(0, 1)], lambda - a[(0, 0)]]);
    let from_row1 = ComplexVector::from_vec(vec![lambda - a[(1, 1)], a[(1, 0)]]);
    let v = if from_row0.norm() >= from_row1.norm() {
        from_row0
    } else {
        from_row1
    };
    (v.norm() > 0.0).then_some(v)
}

fn eigen_2x2(a: &ComplexMatrix) -> (Vec<C64>, ComplexMatrix) {
    let (m, q) = trace_discriminant(a);
    let root = q.sqrt();
    let values = vec![m - root, m + root];
    let mut vectors = ComplexMatrix::identity(2, 2);
    let scalar = max_abs(&(a - ComplexMatrix::identity(2, 2) * m)) == 0.0;
    if !scalar {
        for (k, &lambda) in values.iter().enumerate() {
            if let Some(v) = null_vector_2x2(a, lambda) {
                vectors.set_column(k, &v);
            }
        }
    }
    (values, vectors)
}

fn is_diagonal(a: &ComplexMatrix) -> bool {
    let n = a.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)] == C64::new(0.0, 0.0)))
}

fn eigen_schur(a: &ComplexMatrix) -> Result<(Vec<C64>, ComplexMatrix)> {
    let n = a.nrows();
    let schur = Schur::try_new(a.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::NonConvergence(n))?;
    let (q, t) = schur.unpack();
    let values: Vec<C64> = (0..n).map(|k| t[(k, k)]).collect();
    let small = f64::EPSILON * norm(&t).max(f64::MIN_POSITIVE);

    // Back substitution on the upper-triangular factor.
    let mut y = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        y[(k, k)] = C64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut acc = C64::new(0.0, 0.0);
            for l in j + 1..=k {
                acc += t[(j, l)] * y[(l, k)];
            }
            let mut denom = t[(j, j)] - values[k];
            if denom.norm() < small {
                denom = C64::new(small, 0.0);
            }
            y[(j, k)] = -acc / denom;
        }
    }
    Ok((values, q * y))
}
