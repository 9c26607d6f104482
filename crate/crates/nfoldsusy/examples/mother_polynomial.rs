//! Extract the polynomial `P_N` with `A^T A / 2 = P_N(H-)`.
//!
//! The product of the supercharge with its formal transpose is an
//! order-2N operator; when the model closes it collapses to a degree-N
//! polynomial in the Hamiltonian. The same coefficients must also
//! reproduce `A A^T / 2` against `H+` — both residuals are checked.
//!
//! Run with: `cargo run --example mother_polynomial`

use nfoldsusy::presets::{make, PresetId};
use nfoldsusy::susy::extract_mother_polynomial;

fn main() {
    let preset = PresetId::Quadratic {
        c1: -0.1,
        c2: 1.0,
        c3: 0.0,
    };
    println!("quadratic family, P_N coefficients (a_0 ... a_N):");
    for n in 1..=5 {
        let spec = make(&preset, n).unwrap();
        let m = extract_mother_polynomial(&spec, 5).unwrap();
        assert!(m.passes());
        let coeffs: Vec<String> = m.coefficients.iter().map(|c| c.to_string()).collect();
        println!(
            "  N={n}: [{}]  (exact: {}, leading 2^(N-1) = {})",
            coeffs.join(", "),
            m.exact,
            m.coefficients[n as usize]
        );
    }

    // The N=2 harmonic case has a classic closed form: P_2(x) = 2x^2 - 1/2.
    let spec = make(
        &PresetId::Quadratic {
            c1: 0.0,
            c2: 1.0,
            c3: 0.0,
        },
        2,
    )
    .unwrap();
    let m = extract_mother_polynomial(&spec, 5).unwrap();
    println!(
        "\nharmonic N=2: P_2(x) = {}x^2 + {}x + {}",
        m.coefficients[2], m.coefficients[1], m.coefficients[0]
    );
}
