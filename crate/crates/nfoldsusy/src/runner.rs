//! Batch execution: run the requested verifications for every fold number
//! in the configuration and assemble a [`Report`].

use crate::config::{ConfigError, RunConfig};
use crate::report::{CheckRecord, Report, Verdict, Witness};
use crate::spectral::{
    mother_spectral_check, normalizability_probe, pairing_check, GridProblem,
};
use crate::susy::{
    build_chain, build_supercharge, check_conditions, check_generalized_chain_condition,
    extract_mother_polynomial, kernel_basis, verify_intertwining, ConditionStatus, FamilySpec,
    KernelForm, ResidualReport,
};
use crate::expr::{is_zero, ZeroVerdict};

/// The verification commands addressable from the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Intertwine,
    Mother,
    Chain,
    Spectrum,
    Kernels,
}

impl Command {
    pub fn parse(name: &str) -> Option<Command> {
        match name {
            "check" => Some(Command::Check),
            "intertwine" => Some(Command::Intertwine),
            "mother" => Some(Command::Mother),
            "chain" => Some(Command::Chain),
            "spectrum" => Some(Command::Spectrum),
            "kernels" => Some(Command::Kernels),
            _ => None,
        }
    }

    pub fn all() -> &'static [Command] {
        &[
            Command::Check,
            Command::Intertwine,
            Command::Mother,
            Command::Chain,
            Command::Spectrum,
            Command::Kernels,
        ]
    }
}

fn zero_verdict_fields(v: &ZeroVerdict) -> (Verdict, f64, Option<Witness>) {
    match v {
        ZeroVerdict::ProvenZero { .. } => (Verdict::Pass, 0.0, None),
        ZeroVerdict::NumericallyZero { max_abs, .. } => (Verdict::Pass, *max_abs, None),
        ZeroVerdict::NonZero { witness, value, .. } => (
            Verdict::Fail,
            value.norm(),
            Some(Witness::new(*witness, *value)),
        ),
    }
}

fn residual_fields(r: &ResidualReport) -> (Verdict, f64, Option<Witness>) {
    let verdict = if r.overall { Verdict::Pass } else { Verdict::Fail };
    let witness = r.worst().and_then(|v| match v {
        ZeroVerdict::NonZero { witness, value, .. } => Some(Witness::new(*witness, *value)),
        _ => None,
    });
    (verdict, r.max_residual(), witness)
}

fn error_record(name: String, statement: &str, err: impl std::fmt::Display) -> CheckRecord {
    CheckRecord::new(name, statement)
        .with_verdict(Verdict::Error)
        .with_param("error", err.to_string())
}

/// Execute `commands` for every fold number in `config`.
///
/// Configuration problems surface as `Err` (exit code 2 at the CLI);
/// verification failures and runtime errors become failing records in the
/// report (exit code 1).
pub fn run(config: &RunConfig, commands: &[Command]) -> Result<Report, ConfigError> {
    let mut report = Report::new(config.seed);
    for &n in &config.folds {
        let spec = config.spec_for(n)?;
        for &command in commands {
            match command {
                Command::Check => run_check(&mut report, &spec, config),
                Command::Intertwine => run_intertwine(&mut report, &spec, config),
                Command::Mother => run_mother(&mut report, &spec, config),
                Command::Chain => run_chain(&mut report, &spec, config),
                Command::Spectrum => run_spectrum(&mut report, &spec, config),
                Command::Kernels => run_kernels(&mut report, &spec, config),
            }
        }
    }
    Ok(report)
}

fn base_params(record: CheckRecord, spec: &FamilySpec) -> CheckRecord {
    record
        .with_param("N", spec.n)
        .with_param("W", spec.w.to_string())
        .with_param("E", spec.e.to_string())
        .with_param("label", spec.label.clone())
}

fn run_check(report: &mut Report, spec: &FamilySpec, config: &RunConfig) {
    let n = spec.n;
    match check_conditions(spec, config.seed) {
        Ok(cond) => {
            for (key, status, statement) in [
                (
                    "e_condition",
                    &cond.e_condition,
                    "E''' + E E'' + 2 E'^2 - 2 E^2 E' = 0 (applies for N >= 3)",
                ),
                (
                    "w_condition",
                    &cond.w_condition,
                    "(Wt' + E Wt)'' - E (Wt' + E Wt)' = 0 with Wt = W - (N-1)E/2 (applies for N >= 2)",
                ),
            ] {
                let record = CheckRecord::new(format!("{key}/N={n}"), statement);
                let record = match status {
                    ConditionStatus::NotApplicable => {
                        record.with_verdict(Verdict::NotApplicable)
                    }
                    ConditionStatus::Checked(v) => {
                        let (verdict, residual, witness) = zero_verdict_fields(v);
                        let mut r = record.with_verdict(verdict).with_residual(residual);
                        if let Some(w) = witness {
                            r = r.with_witness(w);
                        }
                        r
                    }
                };
                report.push(base_params(record, spec));
            }
        }
        Err(e) => report.push(base_params(
            error_record(format!("conditions/N={n}"), "closure conditions", e),
            spec,
        )),
    }
}

fn run_intertwine(report: &mut Report, spec: &FamilySpec, config: &RunConfig) {
    let n = spec.n;
    let record = CheckRecord::new(
        format!("intertwining/N={n}"),
        "A H- - H+ A = 0, checked coefficient by coefficient",
    );
    let record = match verify_intertwining(spec, config.seed) {
        Ok(r) => {
            let (verdict, residual, witness) = residual_fields(&r);
            let mut rec = record.with_verdict(verdict).with_residual(residual);
            if let Some(w) = witness {
                rec = rec.with_witness(w);
            }
            rec
        }
        Err(e) => record
            .with_verdict(Verdict::Error)
            .with_param("error", e.to_string()),
    };
    report.push(base_params(record, spec));
}

fn run_mother(report: &mut Report, spec: &FamilySpec, config: &RunConfig) {
    let n = spec.n;
    let record = CheckRecord::new(
        format!("mother_polynomial/N={n}"),
        "A^T A / 2 = P(H-) and A A^T / 2 = P(H+) for one degree-N polynomial P",
    );
    let record = match extract_mother_polynomial(spec, config.seed) {
        Ok(m) => {
            let verdict = if m.passes() { Verdict::Pass } else { Verdict::Fail };
            let coeffs: Vec<String> = m.coefficients.iter().map(|c| c.to_string()).collect();
            record
                .with_verdict(verdict)
                .with_residual(
                    m.minus_residual
                        .max_residual()
                        .max(m.plus_residual.max_residual()),
                )
                .with_param("coefficients", coeffs)
                .with_param("exact", m.exact)
        }
        Err(e) => record
            .with_verdict(Verdict::Error)
            .with_param("error", e.to_string()),
    };
    report.push(base_params(record, spec));
}

fn run_chain(report: &mut Report, spec: &FamilySpec, config: &RunConfig) {
    let n = spec.n;
    let record = CheckRecord::new(
        format!("chain/N={n}"),
        "ladder of first-order intertwiners with constant junction offsets",
    );
    let record = match build_chain(spec, config.seed) {
        Ok(c) => {
            // Non-constant junctions mean the family admits no
            // constant-offset ladder at all — a structural feature, not a
            // broken verification. Only exact algebra violations (per-step
            // relations, endpoints, refactorized product) count as failures.
            let algebra_ok =
                c.steps.iter().all(|s| s.susy_residual.overall) && c.product.overall;
            let verdict = if c.passes() {
                Verdict::Pass
            } else if algebra_ok {
                Verdict::NotApplicable
            } else {
                Verdict::Fail
            };
            let max = c
                .steps
                .iter()
                .map(|s| s.susy_residual.max_residual())
                .chain(c.junctions.iter().map(|j| j.max_residual()))
                .chain([
                    c.lower_end.max_residual(),
                    c.upper_end.max_residual(),
                    c.product.max_residual(),
                ])
                .fold(0.0, f64::max);
            let offsets: Vec<String> = c.steps.iter().map(|s| s.offset.to_string()).collect();
            record
                .with_verdict(verdict)
                .with_residual(max)
                .with_param("offsets", offsets)
                .with_param(
                    "junctions_constant",
                    c.junctions.iter().all(ZeroVerdict::passes),
                )
        }
        Err(e) => record
            .with_verdict(Verdict::Error)
            .with_param("error", e.to_string()),
    };
    report.push(base_params(record, spec));

    let record = CheckRecord::new(
        format!("chain_condition/N={n}"),
        "g'' - E g' = 0 for g = E W + W' - (E^2 + E')/2",
    );
    let record = match check_generalized_chain_condition(spec, config.seed) {
        Ok(v) => {
            let (verdict, residual, witness) = zero_verdict_fields(&v);
            let mut rec = record.with_verdict(verdict).with_residual(residual);
            if let Some(w) = witness {
                rec = rec.with_witness(w);
            }
            rec
        }
        Err(e) => record
            .with_verdict(Verdict::Error)
            .with_param("error", e.to_string()),
    };
    report.push(base_params(record, spec));
}

fn run_spectrum(report: &mut Report, spec: &FamilySpec, config: &RunConfig) {
    let n = spec.n;
    let problem: GridProblem = config.grid().with_bindings(spec.bindings.clone());
    let opts = config.spectral_options();

    let record = CheckRecord::new(
        format!("spectral_pairing/N={n}"),
        "low H- eigenstates map through the factor chain onto H+ eigenstates",
    );
    let record = match pairing_check(spec, &problem, &opts) {
        Ok(r) => {
            let worst = r
                .pairing
                .iter()
                .filter_map(|row| row.residual)
                .fold(0.0f64, f64::max);
            let verdict = if r.pairing.iter().any(|row| row.exceeded) {
                Verdict::Fail
            } else {
                Verdict::Pass
            };
            record
                .with_verdict(verdict)
                .with_residual(worst)
                .with_param("minus_eigenvalues", r.minus_eigenvalues.clone())
                .with_param("plus_eigenvalues", r.plus_eigenvalues.clone())
                .with_param("kernel_flags", r.kernel_flags as u64)
        }
        Err(e) => record
            .with_verdict(Verdict::Error)
            .with_param("error", e.to_string()),
    };
    report.push(base_params(record, spec));

    let record = CheckRecord::new(
        format!("spectral_mother/N={n}"),
        "Rayleigh value of A^T A / 2 equals P(E) on low eigenstates",
    );
    let record = match mother_spectral_check(spec, &problem, &opts) {
        Ok(rows) => {
            let worst = rows
                .iter()
                .map(|row| row.difference.abs())
                .fold(0.0f64, f64::max);
            let threshold = opts.pair_tol * (1u64 << spec.n.min(40)) as f64;
            let verdict = if worst <= threshold { Verdict::Pass } else { Verdict::Fail };
            let table: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| vec![r.energy, r.rayleigh, r.poly_value, r.difference])
                .collect();
            record
                .with_verdict(verdict)
                .with_residual(worst)
                .with_param("rows", table)
        }
        Err(e) => record
            .with_verdict(Verdict::Error)
            .with_param("error", e.to_string()),
    };
    report.push(base_params(record, spec));
}

fn run_kernels(report: &mut Report, spec: &FamilySpec, config: &RunConfig) {
    let n = spec.n;
    let problem = config.grid().with_bindings(spec.bindings.clone());
    let grid = problem.points();
    let record = CheckRecord::new(
        format!("kernels/N={n}"),
        "basis of A psi = 0 is annihilated and classified by normalizability",
    );
    let record = match kernel_basis(spec, &grid) {
        Ok(entries) => {
            // annihilation residuals for symbolic entries
            let a = build_supercharge(spec);
            let policy = spec.policy(config.seed);
            let mut verdict = Verdict::Pass;
            let mut max_residual = 0.0f64;
            let mut forms = Vec::new();
            for entry in &entries {
                match &entry.form {
                    KernelForm::Symbolic(expr) => {
                        forms.push(expr.to_string());
                        match is_zero(&a.apply(expr), &policy) {
                            Ok(v) => {
                                if !v.passes() {
                                    verdict = Verdict::Fail;
                                }
                                max_residual = max_residual.max(v.max_residual());
                            }
                            Err(_) => verdict = Verdict::Error,
                        }
                    }
                    KernelForm::Numeric => forms.push("numeric".to_string()),
                }
            }
            let flags = normalizability_probe(spec, &problem);
            let mut rec = record
                .with_verdict(verdict)
                .with_residual(max_residual)
                .with_param("forms", forms);
            match flags {
                Ok(f) => rec = rec.with_param("normalizable", f),
                Err(e) => {
                    rec = rec
                        .with_verdict(Verdict::Error)
                        .with_param("error", e.to_string());
                }
            }
            rec
        }
        Err(e) => record
            .with_verdict(Verdict::Error)
            .with_param("error", e.to_string()),
    };
    report.push(base_params(record, spec));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(toml: &str) -> RunConfig {
        RunConfig::from_toml(toml).unwrap()
    }

    #[test]
    fn quadratic_pipeline_passes() {
        let cfg = config(
            r#"
            [family]
            preset = "quadratic"
            [fold]
            N_min = 1
            N_max = 4
            "#,
        );
        let report = run(
            &cfg,
            &[Command::Check, Command::Intertwine, Command::Mother],
        )
        .unwrap();
        assert!(report.passes(), "{}", report.summary());
        // 4 folds x (2 condition records + intertwine + mother)
        assert_eq!(report.checks.len(), 16);
    }

    #[test]
    fn negative_control_fails_with_witness() {
        let cfg = config(
            r#"
            [family]
            W = "q^3"
            [fold]
            N = 2
            "#,
        );
        let report = run(&cfg, &[Command::Intertwine]).unwrap();
        assert!(!report.passes());
        let failing = &report.checks[0];
        assert_eq!(failing.verdict, Verdict::Fail);
        assert!(failing.witness.is_some());
    }

    #[test]
    fn reports_are_deterministic_up_to_timestamp() {
        let cfg = config(
            r#"
            [family]
            preset = "cubic"
            [fold]
            N = 2
            [verify]
            seed = 99
            "#,
        );
        let strip = |r: &Report| {
            r.to_json()
                .lines()
                .filter(|l| !l.contains("timestamp"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        let a = run(&cfg, &[Command::Check, Command::Mother, Command::Chain]).unwrap();
        let b = run(&cfg, &[Command::Check, Command::Mother, Command::Chain]).unwrap();
        assert_eq!(strip(&a), strip(&b));
    }
}
