//! Builds the metric for one Hamiltonian in each spectral regime and checks
//! the intertwining relation H†S = SH.

use ptmetric::linalg::ComplexMatrix;
use ptmetric::metric::{
    build_metric, build_similarity_broken, build_similarity_ep, classify_regime, krein_split,
    verify_pseudo_hermiticity, MetricBuildOptions, EP_BAND,
};
use ptmetric::model::{hamiltonian, ModelParams};

fn show(label: &str, m: &ComplexMatrix) {
    println!("  {label}:");
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:+.4}{:+.4}i", m[(i, j)].re, m[(i, j)].im))
            .collect();
        println!("    [{}]", row.join(", "));
    }
}

fn main() -> ptmetric::Result<()> {
    for eta in [0.5, 2.0_f64.sqrt(), 1.0] {
        let mp = ModelParams::from_eta(eta, 1.0, 0.0)?;
        let h = hamiltonian(&mp);
        let opts = MetricBuildOptions::for_model(&mp);
        let regime = classify_regime(&h, EP_BAND)?;
        println!("eta = {eta:.4}: {regime}");
        let m = build_metric(&h, &opts)?;
        show("S", m.s());
        show("Upsilon", m.upsilon());

        let intertwiner = match regime {
            ptmetric::metric::SpectralRegime::BrokenSymmetric => {
                let s = build_similarity_broken(&h, &opts)?;
                let split = krein_split(&s, opts.tol)?;
                show("S+ (before positivization)", &split.positive);
                show("S- (before positivization)", &split.negative);
                s
            }
            ptmetric::metric::SpectralRegime::ExceptionalPoint => build_similarity_ep(&h, &opts)?,
            _ => m.s().clone(),
        };
        println!(
            "  |H†S - SH| / (|H||S|) = {:.2e}\n",
            verify_pseudo_hermiticity(&h, &intertwiner)
        );
    }
    Ok(())
}
