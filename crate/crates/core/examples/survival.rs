//! Long-time survival probability over initial states in the broken phase
//! and at an exceptional point, and its approach in time.

use std::f64::consts::{FRAC_PI_2, PI};

use ptmetric::dynamics::{asymptotic_sp, closed_form_snapshot, linspace};
use ptmetric::model::{ModelParams, PreparedState};

fn best(mp: &ModelParams) -> ptmetric::Result<(f64, f64, f64)> {
    let mut top = (f64::NEG_INFINITY, 0.0, 0.0);
    for phi in linspace(-PI, PI, 241) {
        for p in linspace(-2.0, 2.0, 201) {
            let sp = asymptotic_sp(mp, &PreparedState::new(p, phi)?)?;
            if sp > top.0 {
                top = (sp, phi, p);
            }
        }
    }
    Ok(top)
}

fn main() -> ptmetric::Result<()> {
    for (eta, s) in [(2.0_f64.sqrt(), 1.0), (1.0, -1.0)] {
        let mp = ModelParams::from_eta(eta, s, 0.0)?;
        let (sp, phi, p) = best(&mp)?;
        println!("eta = {eta:.4}, s = {s}: largest SP_inf on the grid {sp:.6} at (phi, p) = ({phi:+.4}, {p:+.4})");
    }

    let q = 2.0_f64.sqrt() - 1.0;
    let broken = ModelParams::from_eta(2.0_f64.sqrt(), 1.0, 0.0)?;
    for (phi, p) in [(FRAC_PI_2, q), (-FRAC_PI_2, q)] {
        let st = PreparedState::new(p, phi)?;
        println!("  eta = sqrt 2, (phi, p) = ({phi:+.4}, {p:.4}): SP_inf = {:.6}", asymptotic_sp(&broken, &st)?);
    }

    println!("\napproach to the limit, (phi, p) = (0, 0.5):");
    let st = PreparedState::new(0.5, 0.0)?;
    for (label, eta) in [("broken", 2.0_f64.sqrt()), ("EP", 1.0)] {
        let mp = ModelParams::from_eta(eta, 1.0, 0.0)?;
        let lim = asymptotic_sp(&mp, &st)?;
        for t in [1.0, 5.0, 20.0, 50.0, 500.0] {
            let sp = closed_form_snapshot(&mp, &st, t)?.sp;
            println!("  {label:6} t = {t:5}: SP = {sp:.8}, SP - SP_inf = {:+.2e}", sp - lim);
        }
    }
    Ok(())
}
