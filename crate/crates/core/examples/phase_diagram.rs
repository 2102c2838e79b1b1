//! Text rendering of the regime map over (θ, s/r): `+` unbroken, `.`
//! broken, `*` within the exceptional band.

use std::f64::consts::PI;

use ptmetric::dynamics::linspace;
use ptmetric::metric::SpectralRegime;
use ptmetric::model::{discriminant, regime_from_d};

fn main() {
    let thetas = linspace(-PI, PI, 73);
    for sr in linspace(2.0, 0.0, 21) {
        let line: String = thetas
            .iter()
            .map(|&th| match regime_from_d(discriminant(th, sr)) {
                SpectralRegime::UnbrokenSymmetric => '+',
                SpectralRegime::BrokenSymmetric => '.',
                SpectralRegime::ExceptionalPoint => '*',
            })
            .collect();
        println!("{sr:4.1} {line}");
    }
    println!("     theta from -pi to pi");
}
