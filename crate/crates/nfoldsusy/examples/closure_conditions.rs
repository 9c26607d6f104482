//! The two closure conditions that characterize when the N-fold
//! intertwining relation holds:
//!
//! * on `E` alone (for N >= 3):  E''' + E E'' + 2 E'^2 - 2 E^2 E' = 0
//! * linking `W` and `E` (N >= 2), written on `Wt = W - (N-1)E/2`:
//!   (Wt' + E Wt)'' - E (Wt' + E Wt)' = 0
//!
//! Run with: `cargo run --example closure_conditions`

use nfoldsusy::expr::parse;
use nfoldsusy::presets::{make, PresetId};
use nfoldsusy::susy::{check_conditions, verify_intertwining, FamilySpec};

fn main() {
    println!("every preset satisfies both conditions at every fold number:");
    for name in PresetId::all_names() {
        let preset = PresetId::default_named(name).unwrap();
        for n in 1..=6 {
            let spec = make(&preset, n).unwrap();
            let report = check_conditions(&spec, 7).unwrap();
            assert!(report.passes(), "{name} N={n}");
        }
        println!("  {name:<18} N = 1..6  ok");
    }

    // The checkers agree with the oracle: perturbing W breaks both the
    // w-condition and the intertwining relation.
    let spec = FamilySpec::new(
        2,
        parse("-0.1*q^2 + q + 0.01*q^4").unwrap(),
        parse("0").unwrap(),
    );
    let conditions = check_conditions(&spec, 7).unwrap();
    let oracle = verify_intertwining(&spec, 7).unwrap();
    println!(
        "\nperturbed quadratic (W += 0.01 q^4), N = 2: conditions pass = {}, intertwining pass = {}",
        conditions.passes(),
        oracle.overall
    );
    assert_eq!(conditions.passes(), oracle.overall);
}
