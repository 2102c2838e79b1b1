//! Lindblad master equation
//!
//! `dρ/dt = -i[h, ρ] + Σ_k γ_k (L_k ρ L_k† - ½{L_k† L_k, ρ})`
//!
//! integrated with fixed-step classical RK4, and a steady-state comparison
//! against metric-based traces.

use serde::Serialize;

use crate::dynamics::{check_grid, Trace};
use crate::error::{Error, Result};
use crate::linalg::{
    anticommutator, commutator, ensure_same_dim, ensure_square, hermitian_eigenvalues,
    hermitian_residual, hermitize, outer, pauli, re, sigma_x, sigma_y, trace, ComplexMatrix,
    ComplexVector, I,
};
use crate::model::ModelParams;

/// Invariant tolerance on Hermiticity, trace and positivity.
pub const DRIFT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        ensure_square(&rho).map_err(|e| Error::InvalidInitial(e.to_string()))?;
        let herm = hermitian_residual(&rho);
        if herm > DRIFT_TOL {
            return Err(Error::InvalidInitial(format!("not Hermitian (residual {herm:.3e})")));
        }
        let tr = trace(&rho);
        if (tr - re(1.0)).norm() > DRIFT_TOL {
            return Err(Error::InvalidInitial(format!("trace is {tr}")));
        }
        let min = hermitian_eigenvalues(&rho)[0];
        if min < -DRIFT_TOL {
            return Err(Error::InvalidInitial(format!("eigenvalue {min:.3e} < 0")));
        }
        Ok(DensityMatrix { rho })
    }

    /// `|ψ⟩⟨ψ|/⟨ψ|ψ⟩` under the standard inner product.
    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        let n = psi.norm_squared();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidInitial("zero or non-finite state vector".into()));
        }
        DensityMatrix::new(outer(psi, psi) / re(n))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// `(Tr ρσ_x, Tr ρσ_y, Tr ρσ_z)` for a two-level system.
    pub fn bloch(&self) -> [f64; 3] {
        let [x, y, z] = pauli();
        [
            trace(&(&self.rho * x)).re,
            trace(&(&self.rho * y)).re,
            trace(&(&self.rho * z)).re,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladConfig {
    pub h: ComplexMatrix,
    pub collapse_ops: Vec<ComplexMatrix>,
    pub rates: Vec<f64>,
}

impl LindbladConfig {
    pub fn new(h: ComplexMatrix, collapse_ops: Vec<ComplexMatrix>, rates: Vec<f64>) -> Result<Self> {
        let n = ensure_square(&h)?;
        let herm = hermitian_residual(&h);
        if herm > 1e-10 * h.norm().max(1.0) {
            return Err(Error::NotHermitian(herm));
        }
        ensure_same_dim(collapse_ops.len(), rates.len())?;
        for l in &collapse_ops {
            ensure_same_dim(n, ensure_square(l)?)?;
        }
        if let Some(g) = rates.iter().find(|g| !(**g >= 0.0 && g.is_finite())) {
            return Err(Error::InvalidArgument(format!("rate must be >= 0, got {g}")));
        }
        Ok(LindbladConfig {
            h,
            collapse_ops,
            rates,
        })
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// `1e-3 / max(‖h‖, max γ_k)`.
    pub fn default_dt_max(&self) -> f64 {
        let g = self.rates.iter().copied().fold(0.0, f64::max);
        1e-3 / self.h.norm().max(g).max(f64::MIN_POSITIVE)
    }
}

/// `h = r cosθ·I + s·σ_x`, `L± = (σ_x ± iσ_y)/2`, both rates `√|r sinθ|`.
pub fn model_lindblad_config(mp: &ModelParams) -> LindbladConfig {
    let h = ComplexMatrix::identity(2, 2) * re(mp.rho()) + sigma_x() * re(mp.s);
    let lp = (sigma_x() + sigma_y() * I) * re(0.5);
    let lm = (sigma_x() - sigma_y() * I) * re(0.5);
    let g = (mp.r * mp.sin_theta()).abs().sqrt();
    LindbladConfig::new(h, vec![lp, lm], vec![g, g]).expect("model configuration is valid")
}

fn rhs_matrix(cfg: &LindbladConfig, rho: &ComplexMatrix) -> ComplexMatrix {
    let mut out = commutator(&cfg.h, rho) * (-I);
    for (l, &g) in cfg.collapse_ops.iter().zip(&cfg.rates) {
        if g == 0.0 {
            continue;
        }
        let ld = l.adjoint();
        out += (l * rho * &ld - anticommutator(&(&ld * l), rho) * re(0.5)) * re(g);
    }
    out
}

/// Right-hand side of the master equation at `rho`.
pub fn lindblad_rhs(cfg: &LindbladConfig, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    ensure_same_dim(cfg.dim(), rho.dim())?;
    Ok(rhs_matrix(cfg, rho.matrix()))
}

fn rk4_step(cfg: &LindbladConfig, rho: &ComplexMatrix, dt: f64) -> ComplexMatrix {
    let k1 = rhs_matrix(cfg, rho);
    let k2 = rhs_matrix(cfg, &(rho + &k1 * re(0.5 * dt)));
    let k3 = rhs_matrix(cfg, &(rho + &k2 * re(0.5 * dt)));
    let k4 = rhs_matrix(cfg, &(rho + &k3 * re(dt)));
    rho + (k1 + (k2 + k3) * re(2.0) + k4) * re(dt / 6.0)
}

/// Re-Hermitizes and renormalizes the trace, failing if either correction
/// exceeds [`DRIFT_TOL`].
fn correct_drift(rho: ComplexMatrix) -> Result<ComplexMatrix> {
    let herm = hermitian_residual(&rho);
    let tr = trace(&rho);
    let drift = herm.max((tr - re(1.0)).norm());
    if !(drift <= DRIFT_TOL) {
        return Err(Error::StepTooLarge(drift));
    }
    Ok(hermitize(&rho) / re(tr.re))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochSample {
    pub t: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

/// Integrates from `t_grid[0]` with steps no larger than `dt_max`, landing
/// exactly on every grid point, and records the Bloch vector there.
pub fn integrate(
    cfg: &LindbladConfig,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    dt_max: f64,
) -> Result<Vec<BlochSample>> {
    ensure_same_dim(2, cfg.dim())?;
    ensure_same_dim(2, rho0.dim())?;
    check_grid(t_grid)?;
    if !(dt_max > 0.0 && dt_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt_max must be positive, got {dt_max}")));
    }
    let mut out = Vec::with_capacity(t_grid.len());
    let mut rho = rho0.matrix().clone();
    let mut t_prev = match t_grid.first() {
        Some(&t) => t,
        None => return Ok(out),
    };
    for &t in t_grid {
        let span = t - t_prev;
        if span > 0.0 {
            let steps = (span / dt_max).ceil().max(1.0) as usize;
            let dt = span / steps as f64;
            for _ in 0..steps {
                rho = correct_drift(rk4_step(cfg, &rho, dt))?;
            }
        }
        let min = hermitian_eigenvalues(&rho)[0];
        if min < -DRIFT_TOL {
            return Err(Error::StepTooLarge(-min));
        }
        let dm = DensityMatrix { rho: rho.clone() };
        let [sx, sy, sz] = dm.bloch();
        out.push(BlochSample { t, sx, sy, sz });
        t_prev = t;
    }
    Ok(out)
}

fn interpolate(samples: &[BlochSample], t: f64) -> [f64; 3] {
    let k = samples.partition_point(|s| s.t < t);
    if k == 0 {
        let s = samples[0];
        return [s.sx, s.sy, s.sz];
    }
    if k == samples.len() {
        let s = samples[k - 1];
        return [s.sx, s.sy, s.sz];
    }
    let (a, b) = (samples[k - 1], samples[k]);
    if b.t == t {
        return [b.sx, b.sy, b.sz];
    }
    let w = (t - a.t) / (b.t - a.t);
    [
        a.sx + w * (b.sx - a.sx),
        a.sy + w * (b.sy - a.sy),
        a.sz + w * (b.sz - a.sz),
    ]
}

/// Largest componentwise `|Δ⟨σ_j⟩|` over the metric snapshots with
/// `t ≥ t_min`, the Lindblad trace linearly interpolated onto those times.
/// Returns `(deviation ≤ tol, deviation)`.
pub fn compare_steady_state(
    metric_trace: &Trace,
    lb_trace: &[BlochSample],
    t_min: f64,
    tol: f64,
) -> Result<(bool, f64)> {
    let m_end = metric_trace.snapshots.last().map_or(f64::NEG_INFINITY, |s| s.t);
    let l_end = lb_trace.last().map_or(f64::NEG_INFINITY, |s| s.t);
    let end = m_end.min(l_end);
    if end < t_min {
        return Err(Error::InsufficientHorizon { end, t_min });
    }
    let mut dev = 0.0_f64;
    for snap in metric_trace.snapshots.iter().filter(|s| s.t >= t_min && s.t <= l_end) {
        let lb = interpolate(lb_trace, snap.t);
        for (a, b) in snap.bloch().iter().zip(lb) {
            dev = dev.max((a - b).abs());
        }
    }
    Ok((dev <= tol, dev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{linspace, NumericSetup};
    use crate::linalg::sigma_z;
    use crate::model::{initial_state, PreparedState};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    fn fig12() -> ModelParams {
        ModelParams::new(SQRT_2, 1.0, FRAC_PI_2).unwrap()
    }

    fn plus() -> DensityMatrix {
        let v = 0.5_f64.sqrt();
        DensityMatrix::pure(&ComplexVector::from_vec(vec![re(v), re(v)])).unwrap()
    }

    #[test]
    fn model_config_examples() {
        let cfg = model_lindblad_config(&fig12());
        assert!((&cfg.h - sigma_x()).norm() < 1e-15);
        for g in &cfg.rates {
            assert!((g - 2f64.powf(0.25)).abs() < 1e-15);
        }
        assert_eq!(cfg.collapse_ops[0], crate::linalg::from_rows(2, &[re(0.0), re(1.0), re(0.0), re(0.0)]));
        let cfg = model_lindblad_config(&ModelParams::new(1.0, 1.0, 0.0).unwrap());
        assert_eq!(cfg.rates, vec![0.0, 0.0]);
    }

    #[test]
    fn maximally_mixed_closed_is_stationary() {
        let cfg = LindbladConfig::new(sigma_z(), vec![], vec![]).unwrap();
        let rho = DensityMatrix::new(ComplexMatrix::identity(2, 2) * re(0.5)).unwrap();
        assert_eq!(lindblad_rhs(&cfg, &rho).unwrap(), ComplexMatrix::zeros(2, 2));
    }

    #[test]
    fn rhs_is_traceless_and_hermitian() {
        let cfg = model_lindblad_config(&fig12());
        let rho = DensityMatrix::pure(&initial_state(&PreparedState::new(0.7, 0.4).unwrap())).unwrap();
        let d = lindblad_rhs(&cfg, &rho).unwrap();
        assert!(trace(&d).norm() < 1e-12);
        assert!(hermitian_residual(&d) < 1e-12);
    }

    #[test]
    fn finite_difference_matches_rhs() {
        let cfg = model_lindblad_config(&fig12());
        let rho = DensityMatrix::pure(&ComplexVector::from_vec(vec![re(1.0), re(0.0)])).unwrap();
        let d = lindblad_rhs(&cfg, &rho).unwrap();
        let dt = 1e-5;
        let after = rk4_step(&cfg, rho.matrix(), dt);
        let fd = (after - rho.matrix()) / re(dt);
        assert!((fd - d).norm() < 1e-3 * dt.sqrt().max(1e-4) * 10.0);
    }

    #[test]
    fn closed_precession() {
        let cfg = LindbladConfig::new(sigma_z(), vec![], vec![]).unwrap();
        let grid = linspace(0.0, 5.0, 26);
        let out = integrate(&cfg, &plus(), &grid, 1e-3).unwrap();
        for s in out {
            assert!((s.sx - (2.0 * s.t).cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_invalid_initial() {
        let bad = ComplexMatrix::identity(2, 2);
        assert!(matches!(DensityMatrix::new(bad), Err(Error::InvalidInitial(_))));
        let mut bad = ComplexMatrix::zeros(2, 2);
        bad[(0, 0)] = re(1.5);
        bad[(1, 1)] = re(-0.5);
        assert!(matches!(DensityMatrix::new(bad), Err(Error::InvalidInitial(_))));
    }

    #[test]
    fn trace_and_positivity_hold_on_the_grid() {
        let cfg = model_lindblad_config(&fig12());
        let rho = DensityMatrix::pure(&initial_state(&PreparedState::new(1.0, FRAC_PI_4).unwrap())).unwrap();
        let out = integrate(&cfg, &rho, &linspace(0.0, 10.0, 21), cfg.default_dt_max()).unwrap();
        // the Bloch vector of a valid state stays in the unit ball
        for s in out {
            assert!(s.sx * s.sx + s.sy * s.sy + s.sz * s.sz <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn identical_traces_agree() {
        let su = NumericSetup::for_model(&fig12(), &PreparedState::new(1.0, FRAC_PI_4).unwrap()).unwrap();
        let tr = su.trace(&linspace(0.0, 20.0, 41)).unwrap();
        let lb: Vec<BlochSample> = tr
            .snapshots
            .iter()
            .map(|s| BlochSample { t: s.t, sx: s.sx, sy: s.sy, sz: s.sz })
            .collect();
        assert_eq!(compare_steady_state(&tr, &lb, 15.0, 5e-2).unwrap(), (true, 0.0));
        assert!(matches!(
            compare_steady_state(&tr, &lb, 25.0, 5e-2),
            Err(Error::InsufficientHorizon { .. })
        ));
    }
}
