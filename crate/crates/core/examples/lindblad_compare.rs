//! Metric dynamics next to the Lindblad master equation for
//! (r, s, θ) = (√2, 1, π/2), plus a step-halving check of the integrator.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use ptmetric::dynamics::{linspace, NumericSetup};
use ptmetric::lindblad::{compare_steady_state, integrate, model_lindblad_config, DensityMatrix};
use ptmetric::model::{initial_state, ModelParams, PreparedState};

fn main() -> ptmetric::Result<()> {
    let mp = ModelParams::new(2.0_f64.sqrt(), 1.0, FRAC_PI_2)?;
    let cfg = model_lindblad_config(&mp);
    let grid = linspace(0.0, 30.0, 7);
    for phi in [FRAC_PI_4, -FRAC_PI_4] {
        let ps = PreparedState::new(1.0, phi)?;
        let metric = NumericSetup::for_model(&mp, &ps)?.trace(&grid)?;
        let rho0 = DensityMatrix::pure(&initial_state(&ps))?;
        let lb = integrate(&cfg, &rho0, &grid, cfg.default_dt_max())?;
        println!("phi = {phi:+.4}");
        println!("     t   metric (sx, sy, sz)         lindblad (sx, sy, sz)");
        for (m, l) in metric.snapshots.iter().zip(&lb) {
            println!(
                "  {:4.0}   ({:+.3}, {:+.3}, {:+.3})   ({:+.3}, {:+.3}, {:+.3})",
                m.t, m.sx, m.sy, m.sz, l.sx, l.sy, l.sz
            );
        }
        let (ok, dev) = compare_steady_state(&metric, &lb, 15.0, 5e-2)?;
        println!("  t >= 15: max deviation {dev:.3}, within 5e-2: {ok}\n");
    }

    let rho0 = DensityMatrix::pure(&initial_state(&PreparedState::new(1.0, FRAC_PI_4)?))?;
    let short = linspace(0.0, 5.0, 11);
    let reference = integrate(&cfg, &rho0, &short, 0.0125)?;
    let mut prev: Option<f64> = None;
    for dt in [0.2, 0.1, 0.05, 0.025] {
        let run = integrate(&cfg, &rho0, &short, dt)?;
        let err = run
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a.sx - b.sx).abs().max((a.sy - b.sy).abs()).max((a.sz - b.sz).abs()))
            .fold(0.0, f64::max);
        match prev {
            Some(p) => println!("dt = {dt:6}: error {err:.3e}, ratio {:.2}", p / err),
            None => println!("dt = {dt:6}: error {err:.3e}"),
        }
        prev = Some(err);
    }
    Ok(())
}
