//! Named model families.
//!
//! Each preset is a factory for a [`FamilySpec`] that satisfies the
//! closure conditions at every fold number, with parameters entering as
//! exact dyadic rationals so the symbolic tier stays available:
//!
//! * `quadratic`: `W = C1 q^2 + C2 q + C3`, `E = 0`.
//! * `quartic_breaking`: the quadratic member `C1 = -g, C2 = 1, C3 = 0`,
//!   whose kernel states grow at one infinity (broken supersymmetry).
//! * `exponential`: `W = C1 e^{E0 q} + C2 e^{-E0 q} + C3`, `E = E0`.
//! * `periodic`: the real reduction `W = sin(g q)/g` of the exponential
//!   family at `E0 = ig`, `C1 = 1/(2ig)`, `C2 = -1/(2ig)`; `E = ig` stays
//!   complex and the operator algebra carries it natively.
//! * `cubic`: `W = C1 q^3 + C2 q + C3/q`, `E = (nu - 1)/q` with
//!   `nu` in {+2, -2}; declares the pole at `q = 0`.

use crate::diffop::DifferentialOperator;
use crate::expr::{add, div, function, pow, scale, Const, Expression, Func};
use crate::susy::FamilySpec;

/// A family name with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum PresetId {
    Quadratic { c1: f64, c2: f64, c3: f64 },
    QuarticBreaking { g: f64 },
    Exponential { e0: f64, c1: f64, c2: f64, c3: f64 },
    Periodic { g: f64 },
    Cubic { nu: i32, c1: f64, c2: f64, c3: f64 },
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PresetError {
    #[error("cubic preset requires nu in {{+2, -2}}, got {0}")]
    InvalidNu(i32),
    #[error("parameter g must be nonzero")]
    ZeroG,
    #[error("exponential preset requires E0 != 0")]
    ZeroE0,
    #[error("preset parameter is not finite")]
    NonFinite,
    #[error("supercharge variants exist only for the cubic preset")]
    NotCubic,
}

impl PresetId {
    pub fn name(&self) -> &'static str {
        match self {
            PresetId::Quadratic { .. } => "quadratic",
            PresetId::QuarticBreaking { .. } => "quartic_breaking",
            PresetId::Exponential { .. } => "exponential",
            PresetId::Periodic { .. } => "periodic",
            PresetId::Cubic { .. } => "cubic",
        }
    }

    /// Default parameters for each family, sized so the low end of the
    /// spectrum is well separated on a desk-scale grid.
    pub fn default_named(name: &str) -> Option<PresetId> {
        match name {
            "quadratic" => Some(PresetId::Quadratic {
                c1: -0.1,
                c2: 1.0,
                c3: 0.0,
            }),
            "quartic_breaking" => Some(PresetId::QuarticBreaking { g: 0.1 }),
            "exponential" => Some(PresetId::Exponential {
                e0: 1.0,
                c1: 0.0,
                c2: 1.0,
                c3: 0.0,
            }),
            "periodic" => Some(PresetId::Periodic { g: 1.0 }),
            "cubic" => Some(PresetId::Cubic {
                nu: 2,
                c1: 1.0,
                c2: 0.0,
                c3: 0.0,
            }),
            _ => None,
        }
    }

    pub fn all_names() -> &'static [&'static str] {
        &[
            "quadratic",
            "quartic_breaking",
            "exponential",
            "periodic",
            "cubic",
        ]
    }
}

/// Exact rational from the shortest decimal form of `x`, so -0.1 becomes
/// -1/10 rather than its dyadic expansion.
fn dy(x: f64) -> Result<Const, PresetError> {
    if !x.is_finite() {
        return Err(PresetError::NonFinite);
    }
    crate::expr::parse(&format!("{x}"))
        .ok()
        .and_then(|e| e.as_const().cloned())
        .ok_or(PresetError::NonFinite)
}

fn q() -> Expression {
    Expression::var()
}

/// Build the `FamilySpec` for a preset at fold number `n`.
pub fn make(preset: &PresetId, n: u32) -> Result<FamilySpec, PresetError> {
    match preset {
        PresetId::Quadratic { c1, c2, c3 } => {
            let w = add(
                &add(&scale(dy(*c1)?, &pow(&q(), 2)), &scale(dy(*c2)?, &q())),
                &Expression::constant(dy(*c3)?),
            );
            Ok(FamilySpec::new(n, w, Expression::zero()).with_label("quadratic"))
        }
        PresetId::QuarticBreaking { g } => {
            if *g == 0.0 {
                return Err(PresetError::ZeroG);
            }
            let inner = make(
                &PresetId::Quadratic {
                    c1: -*g,
                    c2: 1.0,
                    c3: 0.0,
                },
                n,
            )?;
            Ok(inner.with_label("quartic_breaking"))
        }
        PresetId::Exponential { e0, c1, c2, c3 } => {
            if *e0 == 0.0 {
                return Err(PresetError::ZeroE0);
            }
            let e0c = dy(*e0)?;
            let up = function(Func::Exp, &scale(e0c.clone(), &q()));
            let down = function(Func::Exp, &scale(e0c.neg(), &q()));
            let w = add(
                &add(&scale(dy(*c1)?, &up), &scale(dy(*c2)?, &down)),
                &Expression::constant(dy(*c3)?),
            );
            Ok(FamilySpec::new(n, w, Expression::constant(e0c)).with_label("exponential"))
        }
        PresetId::Periodic { g } => {
            if *g == 0.0 {
                return Err(PresetError::ZeroG);
            }
            let gc = dy(*g)?;
            let w = div(
                &function(Func::Sin, &scale(gc.clone(), &q())),
                &Expression::constant(gc.clone()),
            );
            let e = Expression::constant(gc.mul(&Const::i()));
            Ok(FamilySpec::new(n, w, e).with_label("periodic"))
        }
        PresetId::Cubic { nu, c1, c2, c3 } => {
            if *nu != 2 && *nu != -2 {
                return Err(PresetError::InvalidNu(*nu));
            }
            let w = add(
                &add(&scale(dy(*c1)?, &pow(&q(), 3)), &scale(dy(*c2)?, &q())),
                &scale(dy(*c3)?, &pow(&q(), -1)),
            );
            let e = scale(Const::from_int(*nu as i64 - 1), &pow(&q(), -1));
            Ok(FamilySpec::new(n, w, e)
                .with_poles(&[0.0])
                .with_label(if *nu > 0 { "cubic(+2)" } else { "cubic(-2)" }))
        }
    }
}

/// Both factorizations of the cubic family's Hamiltonian pair.
///
/// The two values of `nu` give the same `H±` because the potentials only
/// depend on `Wt = W - (N-1)E/2` and on `E^2 - 2E'`, and
/// `c(c+2)/q^2 = 3/q^2` for both `c = 1` and `c = -3`. Each variant's base
/// prepotential is recentered around the shared `Wt` so that the two
/// supercharges intertwine the same pair rather than two shifted family
/// members.
pub fn supercharge_variants(
    preset: &PresetId,
    n: u32,
) -> Result<Vec<DifferentialOperator>, PresetError> {
    let PresetId::Cubic { .. } = preset else {
        return Err(PresetError::NotCubic);
    };
    let base = make(preset, n)?;
    let wt = base.w_tilde();
    let mut out = Vec::new();
    for nu in [2i64, -2] {
        let e = scale(Const::from_int(nu - 1), &pow(&q(), -1));
        let w = add(&wt, &scale(Const::from_ratio(n as i64 - 1, 2), &e));
        let variant = FamilySpec::new(n, w, e).with_poles(&[0.0]);
        out.push(crate::susy::build_supercharge(&variant));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{is_zero, parse, sub, Bindings, SamplePolicy, ZeroVerdict};
    use crate::susy::{build_hamiltonians, check_conditions, verify_intertwining};
    use num_complex::Complex64;

    fn every_preset() -> Vec<PresetId> {
        PresetId::all_names()
            .iter()
            .map(|n| PresetId::default_named(n).unwrap())
            .collect()
    }

    #[test]
    fn all_presets_satisfy_conditions_and_intertwine() {
        for preset in every_preset() {
            for n in 1..=6u32 {
                let spec = make(&preset, n).unwrap();
                let conditions = check_conditions(&spec, 42).unwrap();
                assert!(conditions.passes(), "{} N={n} conditions", preset.name());
                let report = verify_intertwining(&spec, 42).unwrap();
                assert!(
                    report.overall,
                    "{} N={n} intertwining, max residual {}",
                    preset.name(),
                    report.max_residual()
                );
            }
        }
    }

    #[test]
    fn quartic_breaking_is_the_special_quadratic_member() {
        let a = make(&PresetId::QuarticBreaking { g: 0.1 }, 2).unwrap();
        let b = make(
            &PresetId::Quadratic {
                c1: -0.1,
                c2: 1.0,
                c3: 0.0,
            },
            2,
        )
        .unwrap();
        assert!(sub(&a.w, &b.w).canonicalize(&Bindings::new()).is_proven_zero());
    }

    #[test]
    fn periodic_is_the_complex_exponential_reduction() {
        // C1 e^{igq} + C2 e^{-igq} with C1 = 1/(2ig), C2 = -1/(2ig)
        // equals sin(gq)/g.
        let g = 0.5f64;
        let gc = Const::from_f64(g).unwrap();
        let ig = gc.mul(&Const::i());
        let c1 = Const::one().div(&ig.mul(&Const::from_int(2))).unwrap();
        let up = function(Func::Exp, &scale(ig.clone(), &q()));
        let down = function(Func::Exp, &scale(ig.neg(), &q()));
        let complex_w = add(&scale(c1.clone(), &up), &scale(c1.neg(), &down));
        let real_w = make(&PresetId::Periodic { g }, 1).unwrap().w;
        let v = is_zero(&sub(&complex_w, &real_w), &SamplePolicy::default()).unwrap();
        assert!(v.passes(), "{v:?}");
    }

    #[test]
    fn periodic_hamiltonian_coefficients_have_period_two_pi_over_g() {
        let g = 1.0f64;
        let spec = make(&PresetId::Periodic { g }, 3).unwrap();
        let (h_plus, _) = build_hamiltonians(&spec);
        let period = 2.0 * std::f64::consts::PI / g;
        let b = Bindings::new();
        for coeff in h_plus.coeffs() {
            for i in 0..16 {
                let x = -3.0 + 0.4 * i as f64;
                let at = |p: f64| {
                    crate::expr::evaluate(coeff, Complex64::new(p, 0.0), &b).unwrap()
                };
                assert!((at(x) - at(x + period)).norm() < 1e-10, "at q = {x}");
            }
        }
    }

    #[test]
    fn cubic_variants_intertwine_the_same_pair() {
        for n in 1..=4u32 {
            let preset = PresetId::Cubic {
                nu: 2,
                c1: 1.0,
                c2: 0.0,
                c3: 0.0,
            };
            let base = make(&preset, n).unwrap();
            let (h_plus, h_minus) = build_hamiltonians(&base);
            let variants = supercharge_variants(&preset, n).unwrap();
            assert_eq!(variants.len(), 2);
            let policy = base.policy(9);
            for (i, a) in variants.iter().enumerate() {
                let residual = a.compose(&h_minus).sub(&h_plus.compose(a));
                for (k, c) in residual.coeffs().iter().enumerate() {
                    let v = is_zero(c, &policy).unwrap();
                    assert!(v.passes(), "variant {i}, N={n}, d^{k}: {v:?}");
                }
            }
            if n == 1 {
                // single factor d + W for both
                let diff = variants[0].sub(&variants[1]);
                for c in diff.coeffs() {
                    assert!(is_zero(c, &policy).unwrap().passes());
                }
            }
        }
    }

    #[test]
    fn cubic_two_fold_variants_expand_identically() {
        // W = q^3: the nu=+2 factorization (d + q^3 - 1/q)(d + q^3) and the
        // nu=-2 one (d + q^3 + 1/q)(d + q^3 - 2/q) expand to the same
        // operator d^2 + (2q^3 - 1/q) d + (q^6 + 2q^2); only the factor
        // chains differ.
        let preset = PresetId::Cubic {
            nu: 2,
            c1: 1.0,
            c2: 0.0,
            c3: 0.0,
        };
        let variants = supercharge_variants(&preset, 2).unwrap();
        let expect = [parse("q^6 + 2*q^2").unwrap(), parse("2*q^3 - 1/q").unwrap()];
        let policy = SamplePolicy::default().with_poles(&[0.0]);
        for a in &variants {
            for (k, e) in expect.iter().enumerate() {
                let v = is_zero(&sub(&a.coeff(k), e), &policy).unwrap();
                assert!(matches!(v, ZeroVerdict::ProvenZero { .. }), "d^{k}: {v:?}");
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            make(&PresetId::Cubic { nu: 3, c1: 0.0, c2: 0.0, c3: 0.0 }, 2),
            Err(PresetError::InvalidNu(3))
        ));
        assert!(matches!(
            make(&PresetId::Periodic { g: 0.0 }, 2),
            Err(PresetError::ZeroG)
        ));
        assert!(matches!(
            supercharge_variants(&PresetId::Periodic { g: 1.0 }, 2),
            Err(PresetError::NotCubic)
        ));
    }
}
