//! Build a model from prepotentials and verify the intertwining relation
//! `A H- = H+ A` by direct operator composition.
//!
//! Run with: `cargo run --example intertwining`

use nfoldsusy::expr::parse;
use nfoldsusy::susy::{build_hamiltonians, build_supercharge, verify_intertwining, FamilySpec};

fn main() {
    // A three-fold model in the quadratic family: W = -0.1 q^2 + q, E = 0.
    let spec = FamilySpec::new(3, parse("-0.1*q^2 + q").unwrap(), parse("0").unwrap());

    let a = build_supercharge(&spec);
    println!("supercharge (order {}):", a.order().unwrap());
    println!("  A = {a}\n");

    let (h_plus, h_minus) = build_hamiltonians(&spec);
    println!("partner Hamiltonians:");
    println!("  H+ = {h_plus}");
    println!("  H- = {h_minus}\n");

    let report = verify_intertwining(&spec, 1).unwrap();
    println!(
        "A H- - H+ A = 0: {} (max residual {:.3e})",
        if report.overall { "holds" } else { "FAILS" },
        report.max_residual()
    );
    for (k, v) in report.coefficients.iter().enumerate() {
        println!("  coefficient of d^{k}: {v:?}");
    }

    // Negative control: a cubic W with E = 0 violates the closure
    // condition for every N >= 2, and the residual exposes it with a
    // concrete witness point.
    let bad = FamilySpec::new(2, parse("q^3").unwrap(), parse("0").unwrap());
    let report = verify_intertwining(&bad, 1).unwrap();
    println!(
        "\nnegative control W = q^3, N = 2: {} ({:?})",
        if report.overall { "holds" } else { "fails as expected" },
        report.worst().unwrap()
    );
}
