//! Spectral consequences on a finite-difference grid.
//!
//! Run with: `cargo run --release --example spectrum`

use nfoldsusy::expr::parse;
use nfoldsusy::spectral::{
    mother_spectral_check, pairing_check, GridProblem, SpectralOptions,
};
use nfoldsusy::susy::FamilySpec;

fn main() {
    // The one-fold oscillator: H- has levels 0,1,2,3..., H+ starts at 1,
    // and the factor chain maps each excited H- state onto an H+ state.
    let spec = FamilySpec::new(1, parse("q").unwrap(), parse("0").unwrap());
    let problem = GridProblem::new(-10.0, 10.0, 2000);
    let opts = SpectralOptions::default();

    let report = pairing_check(&spec, &problem, &opts).unwrap();
    println!("H- eigenvalues: {:?}", report.minus_eigenvalues);
    println!("H+ eigenvalues: {:?}", report.plus_eigenvalues);
    println!("kernel flags: {}", report.kernel_flags);
    for row in &report.pairing {
        match row.residual {
            Some(r) => println!(
                "  level {} (E = {:+.6}): pairing residual {:.3e}",
                row.level, row.energy, r
            ),
            None => println!(
                "  level {} (E = {:+.6}): kernel state (|A psi|/|psi| = {:.3e})",
                row.level, row.energy, row.ratio
            ),
        }
    }

    // Two-fold oscillator: the Rayleigh value of A^T A / 2 on each
    // eigenstate reproduces P_2(E) = 2E^2 - 1/2.
    let spec = FamilySpec::new(2, parse("q").unwrap(), parse("0").unwrap());
    let rows = mother_spectral_check(&spec, &problem, &opts).unwrap();
    println!("\ntwo-fold oscillator, A^T A / 2 vs P_2(E) = 2E^2 - 1/2:");
    for row in rows {
        println!(
            "  E = {:+.6}: rayleigh {:+.6}, P(E) {:+.6}, diff {:+.2e}",
            row.energy, row.rayleigh, row.poly_value, row.difference
        );
    }
}
