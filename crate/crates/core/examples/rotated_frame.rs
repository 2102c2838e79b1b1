//! Spin variances in the plane perpendicular to ⟨σ⟩ stay at 1, in every
//! regime, while the fixed-axis uncertainty gap changes.

use std::f64::consts::PI;

use ptmetric::dynamics::{linspace, rotated_frame_check, NumericSetup};
use ptmetric::model::{ModelParams, PreparedState};

fn main() -> ptmetric::Result<()> {
    let ps = PreparedState::new(1.0, PI)?;
    for eta in [0.5, 1.0, 2.0_f64.sqrt()] {
        let setup = NumericSetup::for_model(&ModelParams::from_eta(eta, 1.0, 0.0)?, &ps)?;
        println!("eta = {eta:.4} ({})", setup.metric.regime());
        for t in linspace(0.0, 8.0, 5) {
            let state = setup.state_at(t)?;
            let (vx, vy, prod) = rotated_frame_check(&state, &setup.metric)?;
            let ur = setup.snapshot(t)?.ur_gap;
            println!("  t = {t:3.1}: var x' {vx:.12}, var y' {vy:.12}, product {prod:.12}, UR(x, y) {ur:.5}");
        }
    }
    Ok(())
}
