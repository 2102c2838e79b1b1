//! Uncertainty gap and Bloch angles over time for (p, φ) = (1, π), s = 1,
//! in the three regimes. The numeric pipeline is printed next to the closed
//! forms.

use std::f64::consts::PI;

use ptmetric::dynamics::{closed_form_trace, linspace, NumericSetup};
use ptmetric::model::{ModelParams, PreparedState};

fn main() -> ptmetric::Result<()> {
    let ps = PreparedState::new(1.0, PI)?;
    let times = linspace(0.0, 10.0, 11);
    for eta in [0.5, 2.0_f64.sqrt(), 1.0] {
        let mp = ModelParams::from_eta(eta, 1.0, 0.0)?;
        let numeric = NumericSetup::for_model(&mp, &ps)?.trace(&times)?;
        let closed = closed_form_trace(&mp, &ps, &times)?;
        println!("eta = {eta:.4} ({})", numeric.regime);
        println!("      t        UR   UR(closed)   theta_s   varphi_s");
        for (a, b) in numeric.snapshots.iter().zip(&closed.snapshots) {
            println!(
                "  {:5.1}  {:8.5}  {:11.5}  {:8.5}  {:9.5}",
                a.t, a.ur_gap, b.ur_gap, a.theta_s, a.varphi_s
            );
        }
        println!();
    }
    Ok(())
}
