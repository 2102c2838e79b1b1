//! The PT-symmetric two-level Hamiltonian
//!
//! `H = [[r e^{iθ}, s], [s, r e^{-iθ}]] = ρ·I + s·K`, `K = [[iη, 1], [1, -iη]]`
//!
//! with `ρ = r cos θ`, `η = (r/s) sin θ`. The spectrum is `ρ ± s√(1-η²)`:
//! real for `|η| < 1`, a conjugate pair for `|η| > 1`, and a single
//! defective eigenvalue at `|η| = 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, from_rows, re, C64, ComplexMatrix, ComplexVector, JordanDecomposition, I};
use crate::metric::{MetricOperator, SpectralRegime, EP_BAND};

/// Trigonometric values below this are treated as exact zeros.
pub const SNAP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub r: f64,
    pub s: f64,
    pub theta: f64,
}

impl ModelParams {
    pub fn new(r: f64, s: f64, theta: f64) -> Result<Self> {
        if !(r.is_finite() && s.is_finite() && theta.is_finite()) {
            return Err(Error::NonFinite("model parameters"));
        }
        if r < 0.0 {
            return Err(Error::InvalidArgument(format!("r must be >= 0, got {r}")));
        }
        if s == 0.0 {
            return Err(Error::InvalidArgument("s must be non-zero".into()));
        }
        Ok(ModelParams { r, s, theta })
    }

    /// Parameters with the given `η`, `s` and `ρ`.
    pub fn from_eta(eta: f64, s: f64, rho: f64) -> Result<Self> {
        if !(eta.is_finite() && rho.is_finite()) {
            return Err(Error::NonFinite("model parameters"));
        }
        let y = eta * s;
        ModelParams::new(rho.hypot(y), s, y.atan2(rho))
    }

    pub fn cos_theta(&self) -> f64 {
        snap(self.theta.cos())
    }

    pub fn sin_theta(&self) -> f64 {
        snap(self.theta.sin())
    }

    pub fn rho(&self) -> f64 {
        self.r * self.cos_theta()
    }

    pub fn eta(&self) -> f64 {
        self.r / self.s * self.sin_theta()
    }

    /// `(s/r)² - sin²θ`, snapped to zero below [`SNAP`]; `+∞` for `r = 0`.
    pub fn d(&self) -> f64 {
        if self.r == 0.0 {
            return f64::INFINITY;
        }
        discriminant(self.theta, self.s / self.r)
    }

    /// Regime from the sign of `d`, exceptional within `|d| ≤ 1e-10`.
    pub fn regime(&self) -> SpectralRegime {
        regime_from_d(self.d())
    }
}

/// `(s/r)² - sin²θ`, snapped to zero below [`SNAP`].
pub fn discriminant(theta: f64, s_over_r: f64) -> f64 {
    snap(s_over_r.powi(2) - snap(theta.sin()).powi(2))
}

pub fn regime_from_d(d: f64) -> SpectralRegime {
    if d.abs() <= EP_BAND {
        SpectralRegime::ExceptionalPoint
    } else if d > 0.0 {
        SpectralRegime::UnbrokenSymmetric
    } else {
        SpectralRegime::BrokenSymmetric
    }
}

fn snap(x: f64) -> f64 {
    if x.abs() < SNAP {
        0.0
    } else {
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    pub rho: f64,
    /// `|s|√|1-η²|`, never negative; zero at the exceptional point.
    pub lambda: f64,
    pub eta: f64,
    pub d: f64,
    /// `(η₊, η₋)` of the closed-form factor, `None` at the exceptional point.
    pub eta_pm: Option<(f64, f64)>,
    pub regime: SpectralRegime,
}

impl DerivedParams {
    /// `√|1-η²|`, i.e. `λ/|s|`.
    pub fn kappa(&self) -> f64 {
        (1.0 - self.eta * self.eta).abs().sqrt()
    }
}

pub fn derive(mp: &ModelParams) -> DerivedParams {
    let eta = mp.eta();
    let regime = mp.regime();
    let (lambda, eta_pm) = match regime {
        SpectralRegime::ExceptionalPoint => (0.0, None),
        _ => {
            let a = (1.0 - eta).abs().sqrt();
            let b = (1.0 + eta).abs().sqrt();
            (
                mp.s.abs() * (1.0 - eta * eta).abs().sqrt(),
                Some((0.5 * (a + b), 0.5 * (a - b))),
            )
        }
    };
    DerivedParams {
        rho: mp.rho(),
        lambda,
        eta,
        d: mp.d(),
        eta_pm,
        regime,
    }
}

/// The 2x2 matrix in the `{|0⟩, |1⟩}` basis.
pub fn hamiltonian(mp: &ModelParams) -> ComplexMatrix {
    let (cs, sn) = (mp.cos_theta(), mp.sin_theta());
    from_rows(
        2,
        &[c(mp.r * cs, mp.r * sn), re(mp.s), re(mp.s), c(mp.r * cs, -mp.r * sn)],
    )
}

/// `H = P̃ J P̃⁻¹` from the explicit eigenvectors.
///
/// Away from the exceptional point `J = diag(ρ-λ, ρ+λ)` and the columns of
/// `P̃` are `(∓λ/s + iη, 1)` with `λ = √(s² - r² sin²θ)` (imaginary in the
/// broken phase). At the exceptional point `J = [[ρ, 1], [0, ρ]]` and
/// `P̃ = [[iη, 1/s], [1, 0]]`.
pub fn spectral_decomposition(mp: &ModelParams) -> JordanDecomposition {
    let dp = derive(mp);
    let eta = dp.eta;
    match dp.regime {
        SpectralRegime::ExceptionalPoint => {
            let p = from_rows(2, &[I * eta, re(1.0 / mp.s), re(1.0), re(0.0)]);
            let j = from_rows(2, &[re(dp.rho), re(1.0), re(0.0), re(dp.rho)]);
            JordanDecomposition {
                p,
                j,
                block_sizes: vec![2],
            }
        }
        _ => {
            let q = mp.s * mp.s - (mp.r * mp.sin_theta()).powi(2);
            let lam = C64::new(q, 0.0).sqrt();
            let ratio = lam / mp.s;
            let p = from_rows(
                2,
                &[-ratio + I * eta, ratio + I * eta, re(1.0), re(1.0)],
            );
            let j = from_rows(2, &[re(dp.rho) - lam, re(0.0), re(0.0), re(dp.rho) + lam]);
            JordanDecomposition {
                p,
                j,
                block_sizes: vec![1, 1],
            }
        }
    }
}

/// Closed-form metric for the regime of `mp`, with `b = sign(s)` at the
/// exceptional point.
pub fn closed_metric(mp: &ModelParams) -> MetricOperator {
    closed_metric_with_b(mp, mp.s.signum()).expect("b = sign(s) satisfies b/s > 0")
}

/// Closed-form metric: `Υ = [[η₊, iη₋], [-iη₋, η₊]]` off the exceptional
/// point and `Υ = √(b/s)·I` on it, with `S = Υ†Υ`.
pub fn closed_metric_with_b(mp: &ModelParams, b: f64) -> Result<MetricOperator> {
    let dp = derive(mp);
    let upsilon = match dp.eta_pm {
        Some((ep, em)) => from_rows(2, &[re(ep), I * em, -I * em, re(ep)]),
        None => {
            let ratio = b / mp.s;
            if !(ratio > 0.0 && ratio.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "b/s must be positive, got {ratio}"
                )));
            }
            ComplexMatrix::identity(2, 2) * re(ratio.sqrt())
        }
    };
    MetricOperator::from_factor(upsilon, dp.regime)
}

/// The Hermitian intertwining operator before any Krein split:
/// `[[1, -iη], [iη, 1]]` off the exceptional point and
/// `[[0, b/s], [b/s, 0]]` on it. Indefinite for `|η| ≥ 1`.
pub fn closed_similarity(mp: &ModelParams, b: f64) -> ComplexMatrix {
    let dp = derive(mp);
    match dp.regime {
        SpectralRegime::ExceptionalPoint => {
            let x = re(b / mp.s);
            from_rows(2, &[re(0.0), x, x, re(0.0)])
        }
        _ => from_rows(2, &[re(1.0), -I * dp.eta, I * dp.eta, re(1.0)]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PreparedState {
    pub p: f64,
    pub phi: f64,
}

impl PreparedState {
    pub fn new(p: f64, phi: f64) -> Result<Self> {
        if !(p.is_finite() && phi.is_finite()) {
            return Err(Error::NonFinite("initial state"));
        }
        Ok(PreparedState { p, phi })
    }
}

/// `(|0⟩ + p e^{iφ}|1⟩)/√(1+p²)`.
pub fn initial_state(ps: &PreparedState) -> ComplexVector {
    let n = (1.0 + ps.p * ps.p).sqrt();
    ComplexVector::from_vec(vec![re(1.0 / n), C64::from_polar(ps.p / n, ps.phi)])
}

/// Normalized overlap of the two eigenstates as a function of `η`:
/// `0` for `|η| < 1`, `1` at `|η| = 1`, `|η|/√(1-η²+η⁴)` beyond.
pub fn eigen_overlap(eta: f64) -> f64 {
    let a = eta.abs();
    if a < 1.0 {
        0.0
    } else if a == 1.0 {
        1.0
    } else {
        a / (1.0 - a * a + a.powi(4)).sqrt()
    }
}
