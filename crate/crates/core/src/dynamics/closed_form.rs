//! Closed-form spin expectations and survival probabilities for the
//! two-level model, used as oracles for the numeric path.
//!
//! Notation: `A = (1+p²)η + 2p sinφ`, `D = 1+p²+2pη sinφ`,
//! `κ = √|1-η²|`, `B = κ(1-p²)`. Time enters through `λt` with the signed
//! `λ = s·κ`, so both signs of `s` are covered.

use rayon::prelude::*;

use super::{bloch_angles, check_grid, Snapshot, Trace};
use crate::error::{Error, Result};
use crate::metric::SpectralRegime;
use crate::model::{derive, ModelParams, PreparedState};

/// Above this value of `|2λt|` the broken-phase forms are evaluated as
/// ratios of hyperbolic tangents.
pub const RATIO_FORM_THRESHOLD: f64 = 30.0;

struct Coeffs {
    eta: f64,
    kappa: f64,
    p: f64,
    sin: f64,
    cos: f64,
}

impl Coeffs {
    fn new(mp: &ModelParams, ps: &PreparedState) -> Self {
        let dp = derive(mp);
        Coeffs {
            eta: dp.eta,
            kappa: dp.kappa(),
            p: ps.p,
            sin: ps.phi.sin(),
            cos: ps.phi.cos(),
        }
    }

    fn p2(&self) -> f64 {
        self.p * self.p
    }

    fn a(&self) -> f64 {
        (1.0 + self.p2()) * self.eta + 2.0 * self.p * self.sin
    }

    fn b(&self) -> f64 {
        self.kappa * (1.0 - self.p2())
    }

    fn d(&self) -> f64 {
        1.0 + self.p2() + 2.0 * self.p * self.eta * self.sin
    }
}

fn finish(t: f64, sx: f64, sy: f64, sz: f64, sp: f64) -> Snapshot {
    let var_x = 1.0 - sx * sx;
    let var_y = 1.0 - sy * sy;
    let (theta_s, varphi_s) = bloch_angles(sx, sy, sz);
    Snapshot {
        t,
        sx,
        sy,
        sz,
        var_x,
        var_y,
        ur_gap: var_x * var_y - sz * sz,
        sp,
        theta_s,
        varphi_s,
    }
}

fn positive(x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonPositiveNormalization(x))
    }
}

fn unbroken(k: &Coeffs, s: f64, t: f64) -> Result<Snapshot> {
    let lam = s * k.kappa;
    let d = positive(k.d())?;
    let (a, b) = (k.a(), k.b());
    let (s2, c2) = (2.0 * lam * t).sin_cos();
    let sx = k.kappa * 2.0 * k.p * k.cos / d;
    let sy = a / d * c2 - b / d * s2;
    let sz = b / d * c2 + a / d * s2;
    let (s1, c1) = (lam * t).sin_cos();
    let sp = c1 * c1 + k.kappa.powi(2) * 4.0 * k.p2() * k.cos.powi(2) / (d * d) * s1 * s1;
    Ok(finish(t, sx, sy, sz, sp))
}

fn broken(k: &Coeffs, s: f64, t: f64) -> Result<Snapshot> {
    let lam = s * k.kappa;
    let (a, b, d) = (k.a(), k.b(), k.d());
    let n0 = 1.0 / positive(a)?;
    let x = 2.0 * lam * t;
    let (sx, sy, sz, sp) = if x.abs() > RATIO_FORM_THRESHOLD {
        // Numerator and denominator divided by cosh(2λt) (or cosh²(λt)).
        let th = x.tanh();
        let sech = 1.0 / x.cosh();
        let den = positive(a + b * th)?;
        let tau = (lam * t).tanh();
        let sp_den = positive(a * (1.0 + tau * tau) + 2.0 * b * tau)?;
        (
            k.kappa * 2.0 * k.p * k.cos * sech / den,
            d * sech / den,
            (b + a * th) / den,
            n0 * (a + b * tau).powi(2) / sp_den,
        )
    } else {
        let nt = 1.0 / positive(a * x.cosh() + b * x.sinh())?;
        let half = a * (lam * t).cosh() + b * (lam * t).sinh();
        (
            nt * k.kappa * 2.0 * k.p * k.cos,
            nt * d,
            nt * (b * x.cosh() + a * x.sinh()),
            n0 * nt * half * half,
        )
    };
    Ok(finish(t, sx, sy, sz, sp))
}

fn exceptional(k: &Coeffs, s: f64, t: f64) -> Result<Snapshot> {
    let st = s * t;
    let p2 = k.p2();
    let e = k.eta;
    let bb = e * (1.0 + p2) + 2.0 * k.p * k.sin;
    let norm_den = |st: f64| {
        1.0 + p2 + 2.0 * e * (1.0 - p2) * st + 2.0 * st * st * (1.0 + p2 + 2.0 * e * k.p * k.sin)
    };
    let n0 = 1.0 / positive(norm_den(0.0))?;
    let nt = 1.0 / positive(norm_den(st))?;
    let sx = nt * 2.0 * k.p * k.cos;
    let sy = nt * (2.0 * k.p * k.sin - 2.0 * (1.0 - p2) * st - 2.0 * st * st * bb);
    let sz = nt * (1.0 - p2 + 2.0 * st * bb);
    // |1 + p² e^{2iφ}|² = 1 + p⁴ + 2p² cos 2φ
    let cos2 = k.cos * k.cos - k.sin * k.sin;
    let amp = (1.0 + p2).powi(2)
        + 2.0 * e * (1.0 - p2 * p2) * st
        + st * st * (1.0 + p2 * p2 + 2.0 * p2 * cos2);
    Ok(finish(t, sx, sy, sz, n0 * nt * amp))
}

/// Closed-form snapshot at time `t`, selected by the regime of `mp`.
///
/// In the broken phase the normalization is positive only for `η > 1`;
/// `η < -1` yields [`Error::NonPositiveNormalization`].
pub fn closed_form_snapshot(mp: &ModelParams, ps: &PreparedState, t: f64) -> Result<Snapshot> {
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    let k = Coeffs::new(mp, ps);
    match mp.regime() {
        SpectralRegime::UnbrokenSymmetric => unbroken(&k, mp.s, t),
        SpectralRegime::BrokenSymmetric => broken(&k, mp.s, t),
        SpectralRegime::ExceptionalPoint => exceptional(&k, mp.s, t),
    }
}

pub fn closed_form_trace(mp: &ModelParams, ps: &PreparedState, times: &[f64]) -> Result<Trace> {
    check_grid(times)?;
    let snapshots = times
        .par_iter()
        .map(|&t| closed_form_snapshot(mp, ps, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trace {
        snapshots,
        params: *mp,
        state0: *ps,
        regime: mp.regime(),
    })
}

/// Long-time limit of the survival probability.
///
/// Broken phase: `½(1 + sgn(s)·κ(1-p²)/A)`. Exceptional point:
/// `(1+p²-2ηp sinφ) / (2(1+p²))`.
pub fn asymptotic_sp(mp: &ModelParams, ps: &PreparedState) -> Result<f64> {
    let k = Coeffs::new(mp, ps);
    match mp.regime() {
        SpectralRegime::UnbrokenSymmetric => Err(Error::NoLimit),
        SpectralRegime::BrokenSymmetric => {
            let a = k.a();
            if a == 0.0 {
                return Err(Error::NonPositiveNormalization(a));
            }
            Ok(0.5 * (1.0 + mp.s.signum() * k.b() / a))
        }
        SpectralRegime::ExceptionalPoint => {
            let p2 = k.p2();
            Ok((1.0 + p2 - 2.0 * k.eta * k.p * k.sin) / (2.0 * (1.0 + p2)))
        }
    }
}
