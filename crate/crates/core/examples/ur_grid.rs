//! Uncertainty gap at t = 0 over the (φ, p) plane for several η, reporting
//! the extremes of each map.

use std::f64::consts::PI;

use ptmetric::dynamics::{evolve, linspace, NumericSetup};
use ptmetric::model::{initial_state, ModelParams, PreparedState};

fn main() -> ptmetric::Result<()> {
    let phis = linspace(-PI, PI, 61);
    let ps = linspace(-2.0, 2.0, 61);
    for eta in [0.0, 0.5, 0.9, 1.0, -1.0, 1.1, 2.0_f64.sqrt(), 2.0] {
        let mp = ModelParams::from_eta(eta, 1.0, 0.0)?;
        let base = NumericSetup::for_model(&mp, &PreparedState::new(1.0, 0.0)?)?;
        let mut lo = (f64::INFINITY, 0.0, 0.0);
        let mut hi = (f64::NEG_INFINITY, 0.0, 0.0);
        for &phi in &phis {
            for &p in &ps {
                let st = PreparedState::new(p, phi)?;
                let psi0 = evolve(&base.h, &base.metric, &initial_state(&st), 0.0)?;
                let setup = NumericSetup { state0: st, psi0, ..base.clone() };
                let ur = setup.snapshot(0.0)?.ur_gap;
                if ur < lo.0 {
                    lo = (ur, phi, p);
                }
                if ur > hi.0 {
                    hi = (ur, phi, p);
                }
            }
        }
        println!(
            "eta = {eta:+.4} ({}): min UR {:.3e} at (phi, p) = ({:+.3}, {:+.3}), max {:.4} at ({:+.3}, {:+.3})",
            base.metric.regime(),
            lo.0, lo.1, lo.2, hi.0, hi.1, hi.2
        );
    }
    Ok(())
}
