//! The solvable sector: the N-dimensional kernel of the supercharge.
//!
//! Kernel states come out in closed form whenever `E` has one of the
//! recognized shapes (zero, constant, or c/q) and `W` integrates
//! elementarily; otherwise they are integrated numerically. Their
//! normalizability decides whether the N-fold supersymmetry is unbroken.
//!
//! Run with: `cargo run --example kernel_states`

use nfoldsusy::presets::{make, PresetId};
use nfoldsusy::spectral::{normalizability_probe, GridProblem};
use nfoldsusy::susy::{kernel_basis, KernelForm};

fn show(label: &str, preset: &PresetId, n: u32, problem: &GridProblem) {
    let spec = make(preset, n).unwrap();
    let entries = kernel_basis(&spec, &problem.points()).unwrap();
    let flags = normalizability_probe(&spec, problem).unwrap();
    println!("{label}, N = {n}:");
    for (entry, normalizable) in entries.iter().zip(&flags) {
        let form = match &entry.form {
            KernelForm::Symbolic(e) => e.to_string(),
            KernelForm::Numeric => "<numeric>".to_string(),
        };
        println!(
            "  {}  {}",
            if *normalizable { "normalizable    " } else { "NOT normalizable" },
            form
        );
    }
    println!();
}

fn main() {
    let window = GridProblem::new(-10.0, 10.0, 400);

    // Harmonic-like quadratic family: Gaussian-damped polynomials.
    show(
        "quadratic",
        &PresetId::Quadratic { c1: 0.0, c2: 1.0, c3: 0.0 },
        3,
        &window,
    );

    // Broken supersymmetry: the cubic term in the exponent eventually
    // wins, but only beyond |q| = 15 — the doubled probe window catches it.
    show(
        "quartic_breaking",
        &PresetId::QuarticBreaking { g: 0.1 },
        2,
        &window,
    );

    // Cubic family: power-law prefactors times the gauge damping.
    show(
        "cubic (nu = +2)",
        &PresetId::Cubic { nu: 2, c1: 1.0, c2: 0.0, c3: 0.0 },
        3,
        &GridProblem::new(0.2, 12.0, 400),
    );

    // Periodic family over a single period.
    show(
        "periodic",
        &PresetId::Periodic { g: 1.0 },
        1,
        &GridProblem::new(0.0, 2.0 * std::f64::consts::PI, 400),
    );
}
