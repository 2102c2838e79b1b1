//! Linear algebra at an exceptional point: the Jordan form, the failing
//! eigendecomposition and the exact exponential with its linear-in-t term.

use ptmetric::linalg::{eigendecompose, jordan_2x2, matrix_exponential};
use ptmetric::model::{hamiltonian, spectral_decomposition, ModelParams};

fn main() -> ptmetric::Result<()> {
    let mp = ModelParams::from_eta(1.0, 1.0, 0.3)?;
    let h = hamiltonian(&mp);
    println!("H = {h}");

    let eig = eigendecompose(&h, 1e-8)?;
    println!("eigenvalues {:?}, defective: {}", eig.eigenvalues, eig.is_defective);

    let jd = jordan_2x2(&h, 1e-10)?;
    println!("J = {}", jd.j);
    println!("block sizes {:?}, reconstruction residual {:.2e}", jd.block_sizes, jd.reconstruction_residual(&h)?);

    let model = spectral_decomposition(&mp);
    println!("model Jordan basis P = {}", model.p);

    for t in [0.5, 1.0, 2.0] {
        let u = matrix_exponential(&h, t)?;
        println!("t = {t}: |exp(-iHt)|_F = {:.6}", u.norm());
    }
    Ok(())
}
