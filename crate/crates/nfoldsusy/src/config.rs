//! TOML run configuration.
//!
//! ```toml
//! [family]
//! preset = "quadratic"        # or custom W / E expression strings
//! params = { C1 = -0.1, C2 = 1.0, C3 = 0.0 }
//!
//! [fold]
//! N_min = 1
//! N_max = 4                   # or a single N
//!
//! [verify]
//! samples = 64
//! tol = 1e-9
//! seed = 24301
//! poles = [0.0]
//!
//! [spectral]
//! a = -10.0
//! b = 10.0
//! n = 2000
//! levels = 4
//! kernel_tol = 1e-3
//! pair_tol = 1e-2
//! ```
//!
//! Preset parameters may sit in `family.params` or directly on the family
//! table (`family.nu = 2`); keys are accepted case-insensitively.

use crate::expr::{parse, Expression, SamplePolicy};
use crate::presets::PresetId;
use crate::spectral::{GridProblem, SpectralOptions};
use crate::susy::FamilySpec;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("config is not valid TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("family section needs either a preset name or custom W and E")]
    MissingFamily,
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("preset parameter {0:?} is not a number")]
    BadParam(String),
    #[error("invalid preset parameters: {0}")]
    Preset(#[from] crate::presets::PresetError),
    #[error("cannot parse {which} expression: {message} at offset {offset}")]
    BadExpression {
        which: &'static str,
        offset: usize,
        message: String,
    },
    #[error("fold range is empty or missing (set N, or N_min and N_max)")]
    BadFoldRange,
    #[error("{0} must be positive")]
    NonPositive(&'static str),
}

#[derive(Debug, Default, Deserialize)]
struct RawFamily {
    preset: Option<String>,
    #[serde(rename = "W")]
    w: Option<String>,
    #[serde(rename = "E")]
    e: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, toml::Value>,
    #[serde(flatten)]
    extra: BTreeMap<String, toml::Value>,
}

#[derive(Debug, Default, Deserialize)]
struct RawFold {
    #[serde(rename = "N")]
    n: Option<u32>,
    #[serde(rename = "N_min")]
    n_min: Option<u32>,
    #[serde(rename = "N_max")]
    n_max: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(default)]
struct RawVerify {
    samples: usize,
    tol: f64,
    seed: u64,
    poles: Vec<f64>,
}

impl Default for RawVerify {
    fn default() -> Self {
        let p = SamplePolicy::default();
        RawVerify {
            samples: p.samples,
            tol: p.rel_tol,
            seed: p.seed,
            poles: Vec::new(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default)]
struct RawSpectral {
    a: f64,
    b: f64,
    n: usize,
    levels: usize,
    kernel_tol: f64,
    pair_tol: f64,
}

impl Default for RawSpectral {
    fn default() -> Self {
        let o = SpectralOptions::default();
        RawSpectral {
            a: -10.0,
            b: 10.0,
            n: 2000,
            levels: o.levels,
            kernel_tol: o.kernel_tol,
            pair_tol: o.pair_tol,
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawConfig {
    #[serde(default)]
    family: RawFamily,
    #[serde(default)]
    fold: RawFold,
    #[serde(default)]
    verify: RawVerify,
    #[serde(default)]
    spectral: RawSpectral,
}

/// The model to run: a named preset or custom prepotential expressions.
#[derive(Clone, Debug)]
pub enum FamilyConfig {
    Preset(PresetId),
    Custom { w: Expression, e: Expression },
}

/// Fully validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub family: FamilyConfig,
    pub folds: Vec<u32>,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub poles: Vec<f64>,
    pub grid_a: f64,
    pub grid_b: f64,
    pub grid_n: usize,
    pub levels: usize,
    pub kernel_tol: f64,
    pub pair_tol: f64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn from_toml(text: &str) -> Result<RunConfig, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        let family = resolve_family(&raw.family)?;
        let folds = resolve_folds(&raw.fold)?;
        if raw.verify.tol <= 0.0 {
            return Err(ConfigError::NonPositive("verify.tol"));
        }
        if raw.verify.samples == 0 {
            return Err(ConfigError::NonPositive("verify.samples"));
        }
        if raw.spectral.kernel_tol <= 0.0 {
            return Err(ConfigError::NonPositive("spectral.kernel_tol"));
        }
        if raw.spectral.pair_tol <= 0.0 {
            return Err(ConfigError::NonPositive("spectral.pair_tol"));
        }
        Ok(RunConfig {
            family,
            folds,
            samples: raw.verify.samples,
            tol: raw.verify.tol,
            seed: raw.verify.seed,
            poles: raw.verify.poles,
            grid_a: raw.spectral.a,
            grid_b: raw.spectral.b,
            grid_n: raw.spectral.n,
            levels: raw.spectral.levels,
            kernel_tol: raw.spectral.kernel_tol,
            pair_tol: raw.spectral.pair_tol,
        })
    }

    /// Build the `FamilySpec` for one fold number, with the verify options
    /// folded into its sampling policy.
    pub fn spec_for(&self, n: u32) -> Result<FamilySpec, ConfigError> {
        let mut spec = match &self.family {
            FamilyConfig::Preset(p) => crate::presets::make(p, n)?,
            FamilyConfig::Custom { w, e } => FamilySpec::new(n, w.clone(), e.clone()),
        };
        let mut poles = spec.poles.clone();
        for p in &self.poles {
            if !poles.contains(p) {
                poles.push(*p);
            }
        }
        spec.poles = poles;
        let mut base = SamplePolicy::default();
        base.samples = self.samples;
        base.rel_tol = self.tol;
        spec.policy_base = Some(base);
        Ok(spec)
    }

    /// The spectral grid for this run.
    pub fn grid(&self) -> GridProblem {
        GridProblem::new(self.grid_a, self.grid_b, self.grid_n)
    }

    pub fn spectral_options(&self) -> SpectralOptions {
        SpectralOptions {
            levels: self.levels,
            kernel_tol: self.kernel_tol,
            pair_tol: self.pair_tol,
            seed: self.seed,
        }
    }
}

fn numeric(value: &toml::Value, key: &str) -> Result<f64, ConfigError> {
    match value {
        toml::Value::Float(f) => Ok(*f),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => Err(ConfigError::BadParam(key.to_string())),
    }
}

fn resolve_family(raw: &RawFamily) -> Result<FamilyConfig, ConfigError> {
    if let Some(name) = &raw.preset {
        // merge family.params with loose keys on the family table
        let mut params: BTreeMap<String, f64> = BTreeMap::new();
        for (k, v) in raw.params.iter().chain(raw.extra.iter()) {
            params.insert(k.to_lowercase(), numeric(v, k)?);
        }
        let get = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
        let base = PresetId::default_named(name)
            .ok_or_else(|| ConfigError::UnknownPreset(name.clone()))?;
        let preset = match base {
            PresetId::Quadratic { c1, c2, c3 } => PresetId::Quadratic {
                c1: get("c1", c1),
                c2: get("c2", c2),
                c3: get("c3", c3),
            },
            PresetId::QuarticBreaking { g } => PresetId::QuarticBreaking { g: get("g", g) },
            PresetId::Exponential { e0, c1, c2, c3 } => PresetId::Exponential {
                e0: get("e0", e0),
                c1: get("c1", c1),
                c2: get("c2", c2),
                c3: get("c3", c3),
            },
            PresetId::Periodic { g } => PresetId::Periodic { g: get("g", g) },
            PresetId::Cubic { nu, c1, c2, c3 } => PresetId::Cubic {
                nu: get("nu", nu as f64) as i32,
                c1: get("c1", c1),
                c2: get("c2", c2),
                c3: get("c3", c3),
            },
        };
        return Ok(FamilyConfig::Preset(preset));
    }
    match (&raw.w, &raw.e) {
        (Some(w_text), e_text) => {
            let w = parse(w_text).map_err(|err| ConfigError::BadExpression {
                which: "W",
                offset: err.offset,
                message: err.message,
            })?;
            let e = match e_text {
                Some(t) => parse(t).map_err(|err| ConfigError::BadExpression {
                    which: "E",
                    offset: err.offset,
                    message: err.message,
                })?,
                None => Expression::zero(),
            };
            Ok(FamilyConfig::Custom { w, e })
        }
        _ => Err(ConfigError::MissingFamily),
    }
}

fn resolve_folds(raw: &RawFold) -> Result<Vec<u32>, ConfigError> {
    match (raw.n, raw.n_min, raw.n_max) {
        (Some(n), None, None) if n >= 1 => Ok(vec![n]),
        (None, Some(lo), Some(hi)) if lo >= 1 && lo <= hi => Ok((lo..=hi).collect()),
        _ => Err(ConfigError::BadFoldRange),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_with_params_table() {
        let cfg = RunConfig::from_toml(
            r#"
            [family]
            preset = "quadratic"
            params = { C1 = -0.1, C2 = 1.0 }
            [fold]
            N_min = 1
            N_max = 4
            "#,
        )
        .unwrap();
        assert_eq!(cfg.folds, vec![1, 2, 3, 4]);
        match cfg.family {
            FamilyConfig::Preset(PresetId::Quadratic { c1, c2, c3 }) => {
                assert_eq!((c1, c2, c3), (-0.1, 1.0, 0.0));
            }
            other => panic!("unexpected family: {other:?}"),
        }
    }

    #[test]
    fn preset_params_on_family_table() {
        let cfg = RunConfig::from_toml(
            r#"
            [family]
            preset = "cubic"
            nu = -2
            C1 = 1.0
            [fold]
            N = 3
            "#,
        )
        .unwrap();
        match cfg.family {
            FamilyConfig::Preset(PresetId::Cubic { nu, .. }) => assert_eq!(nu, -2),
            other => panic!("unexpected family: {other:?}"),
        }
        // cubic preset contributes its pole to the spec
        let spec = cfg.spec_for(3).unwrap();
        assert_eq!(spec.poles, vec![0.0]);
    }

    #[test]
    fn custom_family_and_verify_options() {
        let cfg = RunConfig::from_toml(
            r#"
            [family]
            W = "q^3"
            E = "1/q"
            [fold]
            N = 2
            [verify]
            samples = 32
            seed = 7
            poles = [0.0]
            "#,
        )
        .unwrap();
        let spec = cfg.spec_for(2).unwrap();
        assert_eq!(spec.poles, vec![0.0]);
        assert_eq!(spec.policy(cfg.seed).samples, 32);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn rejects_malformed_expression_and_ranges() {
        let bad_expr = RunConfig::from_toml(
            r#"
            [family]
            W = "q+*2"
            [fold]
            N = 2
            "#,
        );
        assert!(matches!(
            bad_expr,
            Err(ConfigError::BadExpression { which: "W", offset: 2, .. })
        ));

        let no_fold = RunConfig::from_toml(
            r#"
            [family]
            W = "q"
            "#,
        );
        assert!(matches!(no_fold, Err(ConfigError::BadFoldRange)));

        let empty = RunConfig::from_toml("");
        assert!(matches!(empty, Err(ConfigError::MissingFamily)));
    }
}
