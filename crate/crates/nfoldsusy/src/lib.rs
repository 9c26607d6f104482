//! Type-A N-fold supersymmetric quantum mechanics, built and verified.
//!
//! This crate constructs one-dimensional quantum-mechanical models whose
//! supercharge is an N-th order differential operator factorized as
//! `(d + W - (N-1)E) ... (d + W - E)(d + W)` from two prepotentials
//! `W(q)` and `E(q)`. It then verifies, symbolically where the inputs are
//! rational and by seeded sampling otherwise:
//!
//! * the intertwining relation `A H- = H+ A` between the partner
//!   Hamiltonians,
//! * the closure conditions on `E` and on `Wt = W - (N-1)E/2` that
//!   characterize when the relation holds,
//! * the polynomial `P_N` with `A^T A / 2 = P_N(H-)` (and the same
//!   coefficients against `H+`),
//! * factorized chains of first-order intertwiners with intermediate
//!   Hamiltonians,
//!
//! and confirms the spectral consequences numerically on finite-difference
//! grids: partner isospectrality up to kernel states, the polynomial
//! spectral identity, and kernel-state normalizability.
//!
//! Entry points:
//!
//! * [`expr`] — the small symbolic expression kernel (parser, derivative,
//!   exact rational canonicalization, seeded zero testing).
//! * [`diffop`] — differential operators with expression coefficients.
//! * [`susy`] — model construction and the verification operations.
//! * [`presets`] — the named families (quadratic, exponential, periodic,
//!   cubic, quartic symmetry-breaking).
//! * [`spectral`] — grid discretization, tridiagonal eigensolver and the
//!   spectral checks.
//! * [`runner`] — the batch front-end behind the `nfoldsusy` binary.
//!
//! See the crate examples for one runnable program per capability.

pub mod config;
pub mod diffop;
pub mod expr;
pub mod presets;
pub mod report;
pub mod runner;
pub mod spectral;
pub mod susy;

pub use diffop::DifferentialOperator;
pub use expr::{Expression, SamplePolicy, ZeroVerdict};

