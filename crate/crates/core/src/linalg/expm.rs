use nalgebra::DVector;

use super::eigen::trace_discriminant;
use super::{eigendecompose, ensure_square, inverse, C64, ComplexMatrix, I};
use crate::error::{Error, Result};

/// `exp(-i·A·t)` (ħ = 1).
///
/// For 2x2 matrices the propagator is written through the spectral
/// projectors of `A` in trace/discriminant form,
///
/// `exp(-iAt) = e^{-imt} [cos(√q t)·I - i·sin(√q t)/√q·(A - mI)]`,
///
/// which is the eigenbasis formula when `q ≠ 0` and reduces to the Jordan
/// formula `e^{-imt}(I - i t N)` at `q = 0`. Larger matrices go through the
/// eigenbasis; defective ones are not supported there.
pub fn matrix_exponential(a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let n = ensure_square(a)?;
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be finite, got {t}")));
    }
    match n {
        1 => Ok(ComplexMatrix::from_element(1, 1, (-I * a[(0, 0)] * t).exp())),
        2 => Ok(propagator_2x2(a, t)),
        _ => {
            let eig = eigendecompose(a, 1e-8)?;
            if eig.is_defective {
                return Err(Error::Unsupported(
                    "propagator of a defective matrix larger than 2x2",
                ));
            }
            let v = &eig.right_vectors;
            let phases = DVector::from_iterator(
                n,
                eig.eigenvalues.iter().map(|&e| (-I * e * t).exp()),
            );
            Ok(v * ComplexMatrix::from_diagonal(&phases) * inverse(v)?)
        }
    }
}

fn propagator_2x2(a: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let (m, q) = trace_discriminant(a);
    let nil = a - ComplexMatrix::identity(2, 2) * m;
    let root = q.sqrt();
    let x = root * t;
    let cos = x.cos();
    // sin(x)/x·t, with the series near x = 0
    let sinc_t = if x.norm() < 1e-4 {
        let x2 = x * x;
        (C64::new(1.0, 0.0) - x2 / 6.0 + x2 * x2 / 120.0) * t
    } else {
        x.sin() / root
    };
    let envelope = (-I * m * t).exp();
    (ComplexMatrix::identity(2, 2) * cos - nil * (I * sinc_t)) * envelope
}
