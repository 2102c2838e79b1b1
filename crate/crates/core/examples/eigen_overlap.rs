//! Overlap of the two eigenstates as a function of η, from the closed-form
//! curve and from the metric the library builds.

use ptmetric::dynamics::linspace;
use ptmetric::metric::{build_metric, eigenstate_overlap, MetricBuildOptions};
use ptmetric::model::{eigen_overlap, hamiltonian, ModelParams};

fn main() -> ptmetric::Result<()> {
    println!("   eta   formula    metric   regime");
    for eta in linspace(0.0, 3.0, 13) {
        let mp = ModelParams::from_eta(eta, 1.0, 0.0)?;
        let h = hamiltonian(&mp);
        let m = build_metric(&h, &MetricBuildOptions::for_model(&mp))?;
        println!(
            "  {eta:4.2}  {:8.5}  {:8.5}   {}",
            eigen_overlap(eta),
            eigenstate_overlap(&h, &m)?,
            m.regime()
        );
    }
    Ok(())
}
