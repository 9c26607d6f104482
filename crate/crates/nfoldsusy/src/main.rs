//! Thin command-line front-end over [`nfoldsusy::runner`].
//!
//! `nfoldsusy <command...> --config path [--out path] [--seed u64]`
//!
//! Commands: `check`, `intertwine`, `mother`, `chain`, `spectrum`,
//! `kernels`, or `all`; `list-presets` needs no config. Exit codes:
//! 0 all checks pass, 1 verification failure, 2 configuration error.

use clap::Parser;
use nfoldsusy::config::RunConfig;
use nfoldsusy::presets::PresetId;
use nfoldsusy::runner::{run, Command};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "nfoldsusy",
    about = "Construct and verify N-fold supersymmetric models from prepotentials"
)]
struct Cli {
    /// Verification commands to run, or `list-presets`
    #[arg(required = true)]
    commands: Vec<String>,

    /// TOML run configuration
    #[arg(long)]
    config: Option<PathBuf>,

    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override the seed from the config
    #[arg(long)]
    seed: Option<u64>,
}

fn list_presets() {
    println!("Available presets (see the config docs for parameter keys):");
    for name in PresetId::all_names() {
        let note = match *name {
            "quadratic" => "W = C1 q^2 + C2 q + C3, E = 0",
            "quartic_breaking" => "quadratic with C1 = -g, C2 = 1, C3 = 0; broken-SUSY kernel",
            "exponential" => "W = C1 e^{E0 q} + C2 e^{-E0 q} + C3, E = E0",
            "periodic" => "real form W = sin(g q)/g with the constant complex shift E = i g",
            "cubic" => "W = C1 q^3 + C2 q + C3/q, E = (nu - 1)/q, nu in {+2, -2}; pole at 0",
            _ => "",
        };
        println!("  {name:<18} {note}");
    }
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if cli.commands.iter().any(|c| c == "list-presets") {
        if cli.commands.len() > 1 {
            return fail("list-presets cannot be combined with other commands");
        }
        list_presets();
        return ExitCode::SUCCESS;
    }

    let mut commands = Vec::new();
    for name in &cli.commands {
        if name == "all" {
            commands.extend_from_slice(Command::all());
            continue;
        }
        match Command::parse(name) {
            Some(c) => commands.push(c),
            None => return fail(format!("unknown command {name:?}")),
        }
    }

    let Some(config_path) = &cli.config else {
        return fail("--config is required for verification commands");
    };
    let mut config = match RunConfig::load(config_path) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }

    let report = match run(&config, &commands) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };

    eprint!("{}", report.summary());
    let json = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json) {
                return fail(format!("cannot write report: {e}"));
            }
        }
        None => println!("{json}"),
    }

    if report.passes() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
