//! Time evolution and metric expectation values.
//!
//! A state is evolved with `exp(-iHt)` and renormalized under the metric at
//! every time. Expectations are taken in the Hermitian frame,
//! `⟨ô⟩ = ⟨Υψ|ô|Υψ⟩`, which equals `⟨ψ|Ô|ψ⟩_S` for `Ô = Υ⁻¹ôΥ`.

mod closed_form;

pub use closed_form::{asymptotic_sp, closed_form_snapshot, closed_form_trace, RATIO_FORM_THRESHOLD};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    commutator, ensure_finite_vector, ensure_same_dim, ensure_square, inner, matrix_exponential,
    pauli, re, C64, ComplexMatrix, ComplexVector,
};
use crate::metric::{build_metric, MetricBuildOptions, MetricOperator, SpectralRegime};
use crate::model::{hamiltonian, initial_state, ModelParams, PreparedState};

/// Imaginary parts of expectation values above this are an error.
pub const IMAG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedState {
    pub amplitudes: ComplexVector,
    pub t: f64,
    pub norm_factor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub ur_gap: f64,
    pub sp: f64,
    pub theta_s: f64,
    pub varphi_s: f64,
}

impl Snapshot {
    pub fn bloch(&self) -> [f64; 3] {
        [self.sx, self.sy, self.sz]
    }

    pub fn bloch_norm(&self) -> f64 {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub snapshots: Vec<Snapshot>,
    pub params: ModelParams,
    pub state0: PreparedState,
    pub regime: SpectralRegime,
}

/// `𝒩(t)·exp(-iHt)·ψ₀`, with `𝒩(t)` making the metric norm 1.
pub fn evolve(
    h: &ComplexMatrix,
    m: &MetricOperator,
    psi0: &ComplexVector,
    t: f64,
) -> Result<EvolvedState> {
    let n = ensure_square(h)?;
    ensure_same_dim(n, m.dim())?;
    ensure_same_dim(n, psi0.len())?;
    ensure_finite_vector(psi0)?;
    let raw = if t == 0.0 {
        psi0.clone()
    } else {
        matrix_exponential(h, t)? * psi0
    };
    let nsq = m.norm_sq(&raw);
    let scale = raw.norm_squared() * crate::linalg::norm(m.s());
    if !(nsq > 1e-300 && nsq > 1e-14 * scale) || !nsq.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let norm_factor = 1.0 / nsq.sqrt();
    Ok(EvolvedState {
        amplitudes: raw * re(norm_factor),
        t,
        norm_factor,
    })
}

fn hermitian_frame(state: &EvolvedState, m: &MetricOperator) -> Result<ComplexVector> {
    ensure_same_dim(m.dim(), state.amplitudes.len())?;
    Ok(m.upsilon() * &state.amplitudes)
}

fn raw_expectation(g: &ComplexVector, obs: &ComplexMatrix) -> C64 {
    inner(g, &(obs * g))
}

fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL {
        return Err(Error::NonRealExpectation(z.im));
    }
    Ok(z.re)
}

/// `⟨Υψ|ô|Υψ⟩` for a physical observable `ô`.
pub fn expectation(state: &EvolvedState, m: &MetricOperator, obs: &ComplexMatrix) -> Result<f64> {
    ensure_same_dim(m.dim(), ensure_square(obs)?)?;
    let g = hermitian_frame(state, m)?;
    real_part(raw_expectation(&g, obs))
}

/// `⟨O²⟩ - ⟨O⟩²`.
pub fn variance(state: &EvolvedState, m: &MetricOperator, obs: &ComplexMatrix) -> Result<f64> {
    let mean = expectation(state, m, obs)?;
    let sq = expectation(state, m, &(obs * obs))?;
    Ok(sq - mean * mean)
}

/// `Δ²A·Δ²B - ¼|⟨[A, B]⟩|²`. The commutator is formed from `a` and `b`.
pub fn uncertainty_gap(
    state: &EvolvedState,
    m: &MetricOperator,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<f64> {
    let va = variance(state, m, a)?;
    let vb = variance(state, m, b)?;
    let g = hermitian_frame(state, m)?;
    let cm = raw_expectation(&g, &commutator(a, b)).norm();
    Ok(va * vb - 0.25 * cm * cm)
}

/// `|⟨ψ(0)|ψ(t)⟩_S|²`.
pub fn survival_probability(psi0: &EvolvedState, psit: &EvolvedState, m: &MetricOperator) -> f64 {
    m.inner(&psi0.amplitudes, &psit.amplitudes).norm_sqr()
}

/// `(θ_s, φ_s)` of the spin direction. `φ_s` is quadrant-correct and set to
/// 0 on the poles.
pub fn bloch_angles(sx: f64, sy: f64, sz: f64) -> (f64, f64) {
    let theta = sz.clamp(-1.0, 1.0).acos();
    let phi = if sx == 0.0 && sy == 0.0 { 0.0 } else { sy.atan2(sx) };
    (theta, phi)
}

fn unit_spin_frame(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    // Gram-Schmidt against the coordinate axis least aligned with n.
    let k = (0..3)
        .min_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs()))
        .unwrap_or(0);
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let dot = n[k];
    let mut x = [e[0] - dot * n[0], e[1] - dot * n[1], e[2] - dot * n[2]];
    let len = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    for v in &mut x {
        *v /= len;
    }
    let y = [
        n[1] * x[2] - n[2] * x[1],
        n[2] * x[0] - n[0] * x[2],
        n[0] * x[1] - n[1] * x[0],
    ];
    (x, y)
}

fn spin_component(dir: [f64; 3]) -> ComplexMatrix {
    let [px, py, pz] = pauli();
    px * re(dir[0]) + py * re(dir[1]) + pz * re(dir[2])
}

/// Variances of the spin components perpendicular to `⟨σ⃗⟩`:
/// `(Δ²σ_x', Δ²σ_y', product)`.
pub fn rotated_frame_check(state: &EvolvedState, m: &MetricOperator) -> Result<(f64, f64, f64)> {
    ensure_same_dim(2, m.dim())?;
    let [px, py, pz] = pauli();
    let s = [
        expectation(state, m, &px)?,
        expectation(state, m, &py)?,
        expectation(state, m, &pz)?,
    ];
    let len = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    if (len - 1.0).abs() > 1e-6 {
        return Err(Error::DegenerateDirection(len));
    }
    let n = [s[0] / len, s[1] / len, s[2] / len];
    let (x, y) = unit_spin_frame(n);
    let vx = variance(state, m, &spin_component(x))?;
    let vy = variance(state, m, &spin_component(y))?;
    Ok((vx, vy, vx * vy))
}

/// Snapshot of a two-level state: spin expectations, variances, the
/// `(σ_x, σ_y)` uncertainty gap, survival probability against `psi0` and
/// Bloch angles.
pub fn snapshot(state: &EvolvedState, psi0: &EvolvedState, m: &MetricOperator) -> Result<Snapshot> {
    ensure_same_dim(2, m.dim())?;
    let [px, py, pz] = pauli();
    let sx = expectation(state, m, &px)?;
    let sy = expectation(state, m, &py)?;
    let sz = expectation(state, m, &pz)?;
    let var_x = variance(state, m, &px)?;
    let var_y = variance(state, m, &py)?;
    let ur_gap = uncertainty_gap(state, m, &px, &py)?;
    let sp = survival_probability(psi0, state, m);
    let (theta_s, varphi_s) = bloch_angles(sx, sy, sz);
    Ok(Snapshot {
        t: state.t,
        sx,
        sy,
        sz,
        var_x,
        var_y,
        ur_gap,
        sp,
        theta_s,
        varphi_s,
    })
}

/// Everything needed to evolve the model numerically.
#[derive(Debug, Clone)]
pub struct NumericSetup {
    pub params: ModelParams,
    pub state0: PreparedState,
    pub h: ComplexMatrix,
    pub metric: MetricOperator,
    pub psi0: EvolvedState,
}

impl NumericSetup {
    pub fn new(mp: &ModelParams, ps: &PreparedState, opts: &MetricBuildOptions) -> Result<Self> {
        let h = hamiltonian(mp);
        let metric = build_metric(&h, opts)?;
        let psi0 = evolve(&h, &metric, &initial_state(ps), 0.0)?;
        Ok(NumericSetup {
            params: *mp,
            state0: *ps,
            h,
            metric,
            psi0,
        })
    }

    /// Setup with the default options for the model (`b = sign(s)`).
    pub fn for_model(mp: &ModelParams, ps: &PreparedState) -> Result<Self> {
        NumericSetup::new(mp, ps, &MetricBuildOptions::for_model(mp))
    }

    pub fn state_at(&self, t: f64) -> Result<EvolvedState> {
        evolve(&self.h, &self.metric, &self.psi0.amplitudes, t)
    }

    pub fn snapshot(&self, t: f64) -> Result<Snapshot> {
        snapshot(&self.state_at(t)?, &self.psi0, &self.metric)
    }

    /// Snapshots on `times`, computed in parallel and returned in order.
    pub fn trace(&self, times: &[f64]) -> Result<Trace> {
        check_grid(times)?;
        let snapshots = times
            .par_iter()
            .map(|&t| self.snapshot(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trace {
            snapshots,
            params: self.params,
            state0: self.state0,
            regime: self.metric.regime(),
        })
    }
}

impl MetricBuildOptions {
    /// Defaults with `b = sign(s)`.
    pub fn for_model(mp: &ModelParams) -> Self {
        MetricBuildOptions {
            b: mp.s.signum(),
            ..MetricBuildOptions::default()
        }
    }
}

pub(crate) fn check_grid(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite("time grid"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `n` evenly spaced points on `[a, b]`, both ends included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            (0..n)
                .map(|k| if k == n - 1 { b } else { a + step * k as f64 })
                .collect()
        }
    }
}

/// 400 points on `[0, 20/max(λ, |s|, 1e-3)]`.
pub fn default_grid(mp: &ModelParams) -> Vec<f64> {
    let lam = crate::model::derive(mp).lambda;
    let end = 20.0 / lam.max(mp.s.abs()).max(1e-3);
    linspace(0.0, end, 400)
}
