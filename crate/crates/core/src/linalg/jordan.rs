use super::eigen::{cmp_eigenvalue, fix_gauge, null_vector_2x2, trace_discriminant};
use super::{ensure_same_dim, ensure_square, max_abs, C64, ComplexMatrix, ComplexVector};
use crate::error::Result;

/// `A = P·J·P⁻¹` with `J` upper bidiagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanDecomposition {
    /// Generalized eigenvector columns.
    pub p: ComplexMatrix,
    pub j: ComplexMatrix,
    pub block_sizes: Vec<usize>,
}

impl JordanDecomposition {
    pub fn is_defective(&self) -> bool {
        self.block_sizes.iter().any(|&b| b > 1)
    }

    pub fn column(&self, k: usize) -> ComplexVector {
        self.p.column(k).into_owned()
    }

    /// `‖P·J·P⁻¹ - A‖ / ‖A‖`.
    pub fn reconstruction_residual(&self, a: &ComplexMatrix) -> Result<f64> {
        let back = &self.p * &self.j * super::inverse(&self.p)?;
        Ok((back - a).norm() / a.norm().max(f64::MIN_POSITIVE))
    }
}

/// Whether a 2x2 matrix is treated as a single Jordan block: `A` is not a
/// multiple of the identity and its discriminant satisfies
/// `|q| ≤ tol·max|aᵢⱼ|·max|nᵢⱼ|`, `N = A - (tr A/2)·I`.
///
/// Replacing such an `A` by its nilpotent approximation changes it by about
/// `|q|/max|nᵢⱼ|`, so the bound keeps the Jordan reconstruction within
/// `tol·max|aᵢⱼ|`.
pub fn is_single_block_2x2(a: &ComplexMatrix, tol: f64) -> bool {
    let (m, q) = trace_discriminant(a);
    let scale = max_abs(a);
    let nil = max_abs(&(a - ComplexMatrix::identity(2, 2) * m));
    nil > 4.0 * f64::EPSILON * scale && q.norm() <= tol * scale * nil
}

/// Exact Jordan form of a 2x2 matrix from its trace and discriminant.
///
/// A single block is used when [`is_single_block_2x2`] holds. The chain is then `[N·e, e]` with `N = A - (tr A/2)·I` and `e`
/// the unit vector selecting the largest column of `N`, rescaled so that the
/// eigenvector `N·e` has unit largest entry.
pub fn jordan_2x2(a: &ComplexMatrix, tol: f64) -> Result<JordanDecomposition> {
    let n = ensure_square(a)?;
    ensure_same_dim(2, n)?;
    let (m, q) = trace_discriminant(a);
    let scale = max_abs(a);
    let nil = a - ComplexMatrix::identity(2, 2) * m;

    if max_abs(&nil) <= 4.0 * f64::EPSILON * scale {
        return Ok(JordanDecomposition {
            p: ComplexMatrix::identity(2, 2),
            j: ComplexMatrix::identity(2, 2) * m,
            block_sizes: vec![1, 1],
        });
    }

    if is_single_block_2x2(a, tol) {
        let col = |k: usize| nil.column(k).norm();
        let pick = if col(1) > col(0) { 1 } else { 0 };
        let head = nil.column(pick).into_owned();
        let unit = head.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
        let mut e = ComplexVector::zeros(2);
        e[pick] = C64::new(1.0 / unit, 0.0);
        let chain = &nil * &e;
        let mut p = ComplexMatrix::zeros(2, 2);
        p.set_column(0, &chain);
        p.set_column(1, &e);
        let mut j = ComplexMatrix::identity(2, 2) * m;
        j[(0, 1)] = C64::new(1.0, 0.0);
        return Ok(JordanDecomposition {
            p,
            j,
            block_sizes: vec![2],
        });
    }

    let root = q.sqrt();
    let mut values = [m - root, m + root];
    values.sort_by(|x, y| cmp_eigenvalue(*x, *y));
    let mut p = ComplexMatrix::zeros(2, 2);
    for (k, &lambda) in values.iter().enumerate() {
        let v = null_vector_2x2(a, lambda).expect("non-scalar matrix has a null vector");
        p.set_column(k, &fix_gauge(v));
    }
    let mut j = ComplexMatrix::zeros(2, 2);
    j[(0, 0)] = values[0];
    j[(1, 1)] = values[1];
    Ok(JordanDecomposition {
        p,
        j,
        block_sizes: vec![1, 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigendecompose, from_rows, re, I};
    use proptest::prelude::*;

    #[test]
    fn identity_has_two_blocks() {
        let jd = jordan_2x2(&ComplexMatrix::identity(2, 2), 1e-10).unwrap();
        assert_eq!(jd.block_sizes, vec![1, 1]);
        assert_eq!(jd.j, ComplexMatrix::identity(2, 2));
    }

    #[test]
    fn adjoint_at_exceptional_point_is_single_block() {
        // H = [[i, 1], [1, -i]] at r = s = 1, theta = pi/2.
        let h = from_rows(2, &[I, re(1.0), re(1.0), -I]);
        let jd = jordan_2x2(&h.adjoint(), 1e-10).unwrap();
        assert_eq!(jd.block_sizes, vec![2]);
        assert!(jd.j[(0, 0)].norm() < 1e-15 && jd.j[(1, 1)].norm() < 1e-15);
        assert_eq!(jd.j[(0, 1)], re(1.0));
        assert!(jd.reconstruction_residual(&h.adjoint()).unwrap() < 1e-15);
    }

    #[test]
    fn diagonalizable_matches_eigendecompose() {
        let t = std::f64::consts::FRAC_PI_6;
        let h = from_rows(
            2,
            &[C64::new(t.cos(), t.sin()), re(1.0), re(1.0), C64::new(t.cos(), -t.sin())],
        );
        let jd = jordan_2x2(&h, 1e-10).unwrap();
        let e = eigendecompose(&h, 1e-8).unwrap();
        assert_eq!(jd.block_sizes, vec![1, 1]);
        for k in 0..2 {
            assert!((jd.j[(k, k)] - e.eigenvalues[k]).norm() < 1e-14);
        }
        assert!(jd.j[(0, 1)].norm() == 0.0);
    }

    fn matrix_from(seed: &[f64]) -> ComplexMatrix {
        from_rows(
            2,
            &[
                C64::new(seed[0], seed[1]),
                C64::new(seed[2], seed[3]),
                C64::new(seed[4], seed[5]),
                C64::new(seed[6], seed[7]),
            ],
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn reconstruction_residual_is_small(
            seed in proptest::collection::vec(-2.0f64..2.0, 8),
            gap_exp in -6.0f64..0.0,
            near in any::<bool>(),
        ) {
            let mut a = matrix_from(&seed);
            if near {
                // Pull the eigenvalues together: A = P·diag(μ, μ+δ)·P⁻¹ with
                // an upper-triangular coupling, gap δ down to 1e-6.
                let mu = a[(0, 0)];
                let delta = 10f64.powf(gap_exp);
                a[(1, 1)] = mu + delta;
                a[(1, 0)] = re(0.0);
            }
            let jd = jordan_2x2(&a, 1e-10).unwrap();
            let r = jd.reconstruction_residual(&a).unwrap();
            prop_assert!(r <= 1e-9, "residual {r} for {a}");
            prop_assert!(jd.j[(1, 0)] == re(0.0));
            let sup = jd.j[(0, 1)];
            prop_assert!(sup == re(0.0) || sup == re(1.0));
        }
    }
}
