//! Spectral-regime classification and metric operators for pseudo-Hermitian
//! Hamiltonians.
//!
//! Three constructions, one per regime:
//!
//! * unbroken symmetry: `S = Σ_α |ψ_α⟩⟨ψ_α|` over eigenvectors of `H†`;
//! * broken symmetry: a Hermitian similarity operator coupling eigenvectors
//!   of `H†` with conjugate eigenvalues, made positive by a Krein split;
//! * exceptional point: a similarity operator from the Jordan chain of `H†`,
//!   Krein-split when indefinite.
//!
//! All metrics are returned as a [`MetricOperator`] carrying `S` and its
//! Hermitian square root `Υ` (`S = Υ†Υ`).

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    eigendecompose, ensure_same_dim, is_single_block_2x2, ensure_square, hermitian_residual, hermitian_sqrt_factor,
    hermitize, inner, inverse, jordan_2x2, max_abs, norm, outer, re, trace_discriminant_2x2, C64,
    ComplexMatrix, ComplexVector, I,
};

/// Relative band on the 2x2 discriminant inside which a Hamiltonian is
/// treated as sitting on an exceptional point, see [`is_single_block_2x2`].
pub const EP_BAND: f64 = 1e-10;

/// Relative tolerance for eigenvalue coincidence and reality tests.
pub const SPECTRAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralRegime {
    UnbrokenSymmetric,
    BrokenSymmetric,
    ExceptionalPoint,
}

impl SpectralRegime {
    pub fn tag(self) -> &'static str {
        match self {
            SpectralRegime::UnbrokenSymmetric => "unbroken",
            SpectralRegime::BrokenSymmetric => "broken",
            SpectralRegime::ExceptionalPoint => "exceptional_point",
        }
    }
}

impl fmt::Display for SpectralRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricBuildOptions {
    /// Coupling of conjugate eigenvector pairs in the broken phase.
    pub zeta: C64,
    /// Real coupling of Jordan-chain partners at an exceptional point.
    pub b: f64,
    pub tol: f64,
}

impl Default for MetricBuildOptions {
    fn default() -> Self {
        MetricBuildOptions {
            zeta: I,
            b: 1.0,
            tol: EP_BAND,
        }
    }
}

impl MetricBuildOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.zeta.im != 0.0 && self.zeta.re.is_finite() && self.zeta.im.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "zeta must have a non-zero imaginary part, got {}",
                self.zeta
            )));
        }
        if !(self.b != 0.0 && self.b.is_finite()) {
            return Err(Error::InvalidArgument(format!("b must be non-zero, got {}", self.b)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// A positive-definite metric `S = Υ†Υ` and the regime it was built for.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricOperator {
    s: ComplexMatrix,
    upsilon: ComplexMatrix,
    regime: SpectralRegime,
}

impl MetricOperator {
    /// Validates `s` (Hermitian, positive definite) and factors it.
    pub fn new(s: ComplexMatrix, regime: SpectralRegime, tol: f64) -> Result<Self> {
        ensure_square(&s)?;
        let upsilon = hermitian_sqrt_factor(&s, tol)?;
        let s = hermitize(&s);
        debug_assert!((upsilon.adjoint() * &upsilon - &s).norm() <= 1e-9 * norm(&s));
        Ok(MetricOperator { s, upsilon, regime })
    }

    /// Builds a metric from an explicit factor, `S = Υ†Υ`.
    pub fn from_factor(upsilon: ComplexMatrix, regime: SpectralRegime) -> Result<Self> {
        ensure_square(&upsilon)?;
        let s = hermitize(&(upsilon.adjoint() * &upsilon));
        let w = crate::linalg::hermitian_eigenvalues(&s);
        if !(w[0] > 0.0) {
            return Err(Error::NotPositiveDefinite(w[0]));
        }
        Ok(MetricOperator { s, upsilon, regime })
    }

    pub fn identity(dim: usize) -> Self {
        MetricOperator {
            s: ComplexMatrix::identity(dim, dim),
            upsilon: ComplexMatrix::identity(dim, dim),
            regime: SpectralRegime::UnbrokenSymmetric,
        }
    }

    pub fn s(&self) -> &ComplexMatrix {
        &self.s
    }

    pub fn upsilon(&self) -> &ComplexMatrix {
        &self.upsilon
    }

    pub fn regime(&self) -> SpectralRegime {
        self.regime
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub(crate) fn with_regime(mut self, regime: SpectralRegime) -> Self {
        self.regime = regime;
        self
    }

    /// `c·S` with factor `√c·Υ`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {c}")));
        }
        Ok(MetricOperator {
            s: &self.s * re(c),
            upsilon: &self.upsilon * re(c.sqrt()),
            regime: self.regime,
        })
    }

    /// `⟨x|y⟩_S = ⟨x|S y⟩`.
    pub fn inner(&self, x: &ComplexVector, y: &ComplexVector) -> C64 {
        inner(x, &(&self.s * y))
    }

    pub fn norm_sq(&self, x: &ComplexVector) -> f64 {
        self.inner(x, x).re
    }

    /// `S / tr(S)`.
    pub fn trace_normalized(&self) -> ComplexMatrix {
        let tr: C64 = self.s.diagonal().iter().sum();
        &self.s / tr
    }
}

/// Regime of `h`.
///
/// For 2x2 input an exceptional point is declared by
/// [`is_single_block_2x2`], otherwise the regime follows the reality of the
/// eigenvalues. Larger matrices go through
/// [`eigendecompose`].
pub fn classify_regime(h: &ComplexMatrix, tol: f64) -> Result<SpectralRegime> {
    let n = ensure_square(h)?;
    if n == 2 {
        if is_single_block_2x2(h, tol) {
            return Ok(SpectralRegime::ExceptionalPoint);
        }
        let (m, q) = trace_discriminant_2x2(h);
        let scale = max_abs(h);
        let root = q.sqrt();
        let real = [m - root, m + root]
            .iter()
            .all(|e| e.im.abs() <= SPECTRAL_TOL * scale);
        return Ok(if real {
            SpectralRegime::UnbrokenSymmetric
        } else {
            SpectralRegime::BrokenSymmetric
        });
    }
    let eig = eigendecompose(h, SPECTRAL_TOL)?;
    if eig.is_defective {
        return Ok(SpectralRegime::ExceptionalPoint);
    }
    let scale = norm(h);
    let real = eig.eigenvalues.iter().all(|e| e.im.abs() <= SPECTRAL_TOL * scale);
    Ok(if real {
        SpectralRegime::UnbrokenSymmetric
    } else {
        SpectralRegime::BrokenSymmetric
    })
}

fn expect_regime(h: &ComplexMatrix, tol: f64, expected: SpectralRegime) -> Result<()> {
    let got = classify_regime(h, tol)?;
    if got != expected {
        return Err(Error::WrongRegime { expected, got });
    }
    Ok(())
}

/// `S = Σ_α |ψ_α⟩⟨ψ_α|` over the gauge-fixed eigenvectors of `H†`.
pub fn build_metric_unbroken(h: &ComplexMatrix, tol: f64) -> Result<MetricOperator> {
    expect_regime(h, tol, SpectralRegime::UnbrokenSymmetric)?;
    let eig = eigendecompose(&h.adjoint(), SPECTRAL_TOL)?;
    let p = &eig.right_vectors;
    MetricOperator::new(p * p.adjoint(), SpectralRegime::UnbrokenSymmetric, tol)
}

/// Hermitian similarity operator for the broken phase.
///
/// Eigenvectors `ψ_α`, `ψ_β` of `H†` whose eigenvalues satisfy
/// `Ē_β = Ē_α*` (within `1e-8·max(1, ‖H‖)`) are coupled as
/// `ζ|ψ_β⟩⟨ψ_α| + ζ*|ψ_α⟩⟨ψ_β|`. A real eigenvalue is its own partner and
/// contributes `|ψ_α⟩⟨ψ_α|`. The result is generally indefinite.
pub fn build_similarity_broken(
    h: &ComplexMatrix,
    opts: &MetricBuildOptions,
) -> Result<ComplexMatrix> {
    opts.validate()?;
    expect_regime(h, opts.tol, SpectralRegime::BrokenSymmetric)?;
    let n = h.nrows();
    let eig = eigendecompose(&h.adjoint(), SPECTRAL_TOL)?;
    let window = SPECTRAL_TOL * norm(h).max(1.0);
    let mut paired = vec![false; n];
    let mut s = ComplexMatrix::zeros(n, n);
    for alpha in 0..n {
        for beta in alpha..n {
            if (eig.eigenvalues[beta] - eig.eigenvalues[alpha].conj()).norm() > window {
                continue;
            }
            if paired[alpha] || paired[beta] {
                continue;
            }
            paired[alpha] = true;
            paired[beta] = true;
            let (a, b) = (eig.vector(alpha), eig.vector(beta));
            if alpha == beta {
                s += outer(&a, &a);
            } else {
                s += outer(&b, &a) * opts.zeta + outer(&a, &b) * opts.zeta.conj();
            }
        }
    }
    if let Some(k) = paired.iter().position(|&p| !p) {
        return Err(Error::UnpairedEigenvalue(eig.eigenvalues[k]));
    }
    Ok(hermitize(&s))
}

/// Similarity operator at a 2x2 exceptional point.
///
/// With the Jordan chain `H† = P̄ J P̄⁻¹`, `P̄ = [ψ̄₁, ψ̄₂]` (eigenvector,
/// generalized eigenvector), the chain partners are coupled with the real
/// weight `b`: `S = b(|ψ̄₂⟩⟨ψ̄₁| + |ψ̄₁⟩⟨ψ̄₂|)`. For the two-level model this
/// is `[[0, b/s], [b/s, 0]]`.
pub fn build_similarity_ep(h: &ComplexMatrix, opts: &MetricBuildOptions) -> Result<ComplexMatrix> {
    opts.validate()?;
    let n = ensure_square(h)?;
    if n != 2 {
        return Err(Error::Unsupported("exceptional-point metric beyond 2x2"));
    }
    if classify_regime(h, opts.tol)? != SpectralRegime::ExceptionalPoint {
        return Err(Error::NotDefective);
    }
    let jd = jordan_2x2(&h.adjoint(), opts.tol)?;
    if !jd.is_defective() {
        return Err(Error::NotDefective);
    }
    let (head, tail) = (jd.column(0), jd.column(1));
    let s = (outer(&tail, &head) + outer(&head, &tail)) * re(opts.b);
    Ok(hermitize(&s))
}

/// `S = S₊ + S₋` split along the signs of the spectrum of `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinSplit {
    pub positive: ComplexMatrix,
    pub negative: ComplexMatrix,
}

impl KreinSplit {
    /// `S_K = S₊ - S₋`.
    pub fn metric(&self) -> ComplexMatrix {
        &self.positive - &self.negative
    }

    pub fn original(&self) -> ComplexMatrix {
        &self.positive + &self.negative
    }
}

/// Spectral split `S = P D P⁻¹`, `D = D₊ + D₋`.
pub fn krein_split(s: &ComplexMatrix, tol: f64) -> Result<KreinSplit> {
    ensure_square(s)?;
    let scale = norm(s);
    let herm = hermitian_residual(s);
    if herm > tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian(herm));
    }
    let eig = SymmetricEigen::new(hermitize(s));
    let n = s.nrows();
    if let Some(&w) = eig.eigenvalues.iter().find(|w| w.abs() <= tol * scale) {
        return Err(Error::SingularMetric(w));
    }
    let part = |keep: fn(f64) -> bool| {
        let d = DVector::from_iterator(
            n,
            eig.eigenvalues.iter().map(|&w| re(if keep(w) { w } else { 0.0 })),
        );
        hermitize(&(&eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.adjoint()))
    };
    Ok(KreinSplit {
        positive: part(|w| w > 0.0),
        negative: part(|w| w < 0.0),
    })
}

/// Positive-definite Krein metric `S_K = S₊ - S₋`.
pub fn krein_positivize(s: &ComplexMatrix, tol: f64) -> Result<MetricOperator> {
    let split = krein_split(s, tol)?;
    MetricOperator::new(split.metric(), SpectralRegime::BrokenSymmetric, tol)
}

/// Builds the regime-appropriate positive-definite metric for `h`.
pub fn build_metric(h: &ComplexMatrix, opts: &MetricBuildOptions) -> Result<MetricOperator> {
    opts.validate()?;
    match classify_regime(h, opts.tol)? {
        SpectralRegime::UnbrokenSymmetric => build_metric_unbroken(h, opts.tol),
        SpectralRegime::BrokenSymmetric => {
            krein_positivize(&build_similarity_broken(h, opts)?, opts.tol)
        }
        SpectralRegime::ExceptionalPoint => {
            let s = build_similarity_ep(h, opts)?;
            let m = match MetricOperator::new(s.clone(), SpectralRegime::ExceptionalPoint, opts.tol) {
                Ok(m) => m,
                Err(Error::NotPositiveDefinite(_)) => krein_positivize(&s, opts.tol)?,
                Err(e) => return Err(e),
            };
            Ok(m.with_regime(SpectralRegime::ExceptionalPoint))
        }
    }
}

/// `‖H†S - SH‖ / (‖H‖·‖S‖)`.
pub fn verify_pseudo_hermiticity(h: &ComplexMatrix, s: &ComplexMatrix) -> f64 {
    let denom = (norm(h) * norm(s)).max(f64::MIN_POSITIVE);
    (h.adjoint() * s - s * h).norm() / denom
}

/// `h = Υ H Υ⁻¹`, Hermitian when `Υ` comes from the unbroken metric of `H`.
pub fn hermitian_equivalent(h: &ComplexMatrix, m: &MetricOperator) -> Result<ComplexMatrix> {
    ensure_same_dim(m.dim(), ensure_square(h)?)?;
    if m.regime() != SpectralRegime::UnbrokenSymmetric {
        return Err(Error::WrongRegime {
            expected: SpectralRegime::UnbrokenSymmetric,
            got: m.regime(),
        });
    }
    Ok(m.upsilon() * h * inverse(m.upsilon())?)
}

/// `|⟨v₁|v₂⟩_S| / √(⟨v₁|v₁⟩_S ⟨v₂|v₂⟩_S)` for the two eigenvectors of a 2x2
/// `h`. Coalescent eigenvectors give 1.
pub fn eigenstate_overlap(h: &ComplexMatrix, m: &MetricOperator) -> Result<f64> {
    ensure_same_dim(2, ensure_square(h)?)?;
    ensure_same_dim(2, m.dim())?;
    let eig = eigendecompose(h, SPECTRAL_TOL)?;
    if eig.is_defective {
        return Ok(1.0);
    }
    let (a, b) = (eig.vector(0), eig.vector(1));
    let num = m.inner(&a, &b).norm();
    Ok(num / (m.norm_sq(&a) * m.norm_sq(&b)).sqrt())
}
