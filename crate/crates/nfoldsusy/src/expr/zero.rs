//! Two-tier zero testing.
//!
//! Rational expressions are decided exactly through canonicalization.
//! Everything else is sampled at seeded pseudo-random points: symbolic
//! zero-equivalence over exp/sin/cos is undecidable in general, so the
//! fallback is a reproducible numerical verdict with a recorded policy.

use super::{evaluate_scaled, Bindings, Expression};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Sampling policy for the numerical tier.
#[derive(Clone, Debug)]
pub struct SamplePolicy {
    /// Real intervals to draw sample points from.
    pub intervals: Vec<(f64, f64)>,
    /// Number of sample points.
    pub samples: usize,
    pub seed: u64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Real points to stay away from (declared poles).
    pub poles: Vec<f64>,
    /// Parameter environment used both for exact substitution and for
    /// numerical evaluation.
    pub bindings: Bindings,
}

impl Default for SamplePolicy {
    fn default() -> Self {
        // [0.3, 2.1] spans an order of magnitude while staying clear of the
        // q = 0 pole of the cubic family.
        SamplePolicy {
            intervals: vec![(0.3, 2.1)],
            samples: 64,
            seed: 0x5eed,
            abs_tol: 1e-12,
            rel_tol: 1e-9,
            poles: Vec::new(),
            bindings: Bindings::new(),
        }
    }
}

impl SamplePolicy {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_poles(mut self, poles: &[f64]) -> Self {
        self.poles = poles.to_vec();
        self
    }

    pub fn with_bindings(mut self, bindings: Bindings) -> Self {
        self.bindings = bindings;
        self
    }
}

/// Echo of the policy that produced a verdict, kept for reproducibility.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PolicyEcho {
    pub samples: usize,
    pub seed: u64,
    pub intervals: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroVerdict {
    /// Exact: the expression canonicalizes to the zero rational function.
    ProvenZero { policy: PolicyEcho },
    /// All samples below tolerance.
    NumericallyZero { max_abs: f64, policy: PolicyEcho },
    /// A concrete witness point with value above tolerance.
    NonZero {
        witness: f64,
        value: Complex64,
        policy: PolicyEcho,
    },
}

impl ZeroVerdict {
    pub fn passes(&self) -> bool {
        !matches!(self, ZeroVerdict::NonZero { .. })
    }

    pub fn max_residual(&self) -> f64 {
        match self {
            ZeroVerdict::ProvenZero { .. } => 0.0,
            ZeroVerdict::NumericallyZero { max_abs, .. } => *max_abs,
            ZeroVerdict::NonZero { value, .. } => value.norm(),
        }
    }

    /// The worse of two verdicts (NonZero > NumericallyZero > ProvenZero).
    pub fn worst(self, other: ZeroVerdict) -> ZeroVerdict {
        fn rank(v: &ZeroVerdict) -> u8 {
            match v {
                ZeroVerdict::ProvenZero { .. } => 0,
                ZeroVerdict::NumericallyZero { .. } => 1,
                ZeroVerdict::NonZero { .. } => 2,
            }
        }
        let (a, b) = (rank(&self), rank(&other));
        if a > b || (a == b && self.max_residual() >= other.max_residual()) {
            self
        } else {
            other
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZeroError {
    #[error("all sample points hit poles; sampling domain misconfigured")]
    AllSamplesPoles,
    #[error("empty sampling domain")]
    EmptyDomain,
}

/// Decide whether `e` is identically zero under `policy`.
pub fn is_zero(e: &Expression, policy: &SamplePolicy) -> Result<ZeroVerdict, ZeroError> {
    let echo = PolicyEcho {
        samples: policy.samples,
        seed: policy.seed,
        intervals: policy.intervals.clone(),
    };
    if e.canonicalize(&policy.bindings).is_proven_zero() {
        return Ok(ZeroVerdict::ProvenZero { policy: echo });
    }
    if policy.intervals.is_empty() {
        return Err(ZeroError::EmptyDomain);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let span: f64 = policy
        .intervals
        .iter()
        .map(|(a, b)| (b - a).abs())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let pole_radius = 1e-3 * span;

    let mut max_abs = 0.0f64;
    let mut max_scale = 0.0f64;
    let mut worst: Option<(f64, Complex64)> = None;
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    let budget = policy.samples * 20;
    while accepted < policy.samples && attempts < budget {
        attempts += 1;
        let idx = rng.gen_range(0..policy.intervals.len());
        let (a, b) = policy.intervals[idx];
        let x: f64 = rng.gen_range(a.min(b)..=a.max(b));
        if policy.poles.iter().any(|p| (x - p).abs() < pole_radius) {
            continue;
        }
        let Ok((value, scale)) = evaluate_scaled(e, Complex64::new(x, 0.0), &policy.bindings)
        else {
            continue; // undeclared pole; resample
        };
        if !value.is_finite() || !scale.is_finite() {
            continue;
        }
        accepted += 1;
        max_scale = max_scale.max(scale);
        let mag = value.norm();
        if mag > max_abs {
            max_abs = mag;
            worst = Some((x, value));
        }
    }
    if accepted == 0 {
        return Err(ZeroError::AllSamplesPoles);
    }
    let threshold = policy.abs_tol + policy.rel_tol * (1.0 + max_scale);
    if max_abs <= threshold {
        Ok(ZeroVerdict::NumericallyZero {
            max_abs,
            policy: echo,
        })
    } else {
        let (witness, value) = worst.expect("max_abs > 0 implies a worst sample");
        Ok(ZeroVerdict::NonZero {
            witness,
            value,
            policy: echo,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn verdict(text: &str) -> ZeroVerdict {
        is_zero(&parse(text).unwrap(), &SamplePolicy::default()).unwrap()
    }

    #[test]
    fn expanded_square_is_proven_zero() {
        assert!(matches!(
            verdict("(q+1)^2 - q^2 - 2*q - 1"),
            ZeroVerdict::ProvenZero { .. }
        ));
    }

    #[test]
    fn pythagorean_identity_is_numerically_zero() {
        assert!(matches!(
            verdict("sin(q)^2 + cos(q)^2 - 1"),
            ZeroVerdict::NumericallyZero { .. }
        ));
    }

    #[test]
    fn cube_is_nonzero_with_witness() {
        match verdict("q^3") {
            ZeroVerdict::NonZero { witness, value, .. } => {
                assert!((value.re - witness.powi(3)).abs() < 1e-12);
            }
            other => panic!("expected NonZero, got {other:?}"),
        }
    }

    #[test]
    fn pole_only_domain_errors() {
        let policy = SamplePolicy {
            intervals: vec![(0.0, 0.0)],
            poles: vec![0.0],
            ..SamplePolicy::default()
        };
        let err = is_zero(&parse("exp(q)/q").unwrap(), &policy).unwrap_err();
        assert_eq!(err, ZeroError::AllSamplesPoles);
    }

    #[test]
    fn verdicts_are_reproducible() {
        let a = verdict("q^3");
        let b = verdict("q^3");
        assert_eq!(a, b);
    }
}
