//! Construction and verification of type-A N-fold supersymmetric models.
//!
//! A model is a fold number `N` together with two prepotentials `W(q)` and
//! `E(q)`. The supercharge is the product of first-order factors
//! `A = (d + W - (N-1)E) ... (d + W - E)(d + W)` and the partner
//! Hamiltonians are `H± = (-d^2 + W^2 + V±)/2` with
//!
//! ```text
//! V± = -(N-1) E W + (N-1)(2N-1)/6 E^2 - (N^2-1)/6 E'
//!      ± N (W' - (N-1)/2 E')
//! ```
//!
//! `verify_intertwining` checks `A H- - H+ A = 0` by direct operator
//! composition; it never assumes the closure conditions hold, which makes
//! it the oracle the condition checkers are validated against.

mod chain;
mod kernel;
mod mother;

pub use chain::{build_chain, check_generalized_chain_condition, ChainReport, ChainStep};
pub use kernel::{kernel_basis, KernelEntry, KernelError, KernelForm};
pub use mother::{extract_mother_polynomial, MotherPolynomial};

use crate::diffop::DifferentialOperator;
use crate::expr::{
    add, diff_n, differentiate, div, is_zero, mul, neg, pow, scale, sub, Bindings, Const,
    Expression, SamplePolicy, ZeroError, ZeroVerdict,
};

/// A type-A family member: fold number, prepotentials, parameter bindings
/// and the sampling metadata needed to verify it.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    /// Fold number, `N >= 1`.
    pub n: u32,
    pub w: Expression,
    pub e: Expression,
    pub bindings: Bindings,
    /// Real points the sampling must avoid.
    pub poles: Vec<f64>,
    pub label: String,
    /// Optional sampling policy template (sample count, tolerances,
    /// intervals); poles, bindings and seed are layered on top of it.
    pub policy_base: Option<SamplePolicy>,
}

impl FamilySpec {
    pub fn new(n: u32, w: Expression, e: Expression) -> Self {
        assert!(n >= 1, "fold number must be at least 1");
        FamilySpec {
            n,
            w,
            e,
            bindings: Bindings::new(),
            poles: Vec::new(),
            label: String::new(),
            policy_base: None,
        }
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
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

    pub fn with_policy_base(mut self, base: SamplePolicy) -> Self {
        self.policy_base = Some(base);
        self
    }

    /// Sampling policy preloaded with this spec's poles and bindings.
    pub fn policy(&self, seed: u64) -> SamplePolicy {
        self.policy_base
            .clone()
            .unwrap_or_default()
            .with_seed(seed)
            .with_poles(&self.poles)
            .with_bindings(self.bindings.clone())
    }

    /// `Wt = W - (N-1)/2 E`, the recentered prepotential.
    pub fn w_tilde(&self) -> Expression {
        sub(
            &self.w,
            &scale(
                Const::from_ratio(self.n as i64 - 1, 2),
                &self.e,
            ),
        )
    }
}

/// `A_N = (d + W - (N-1)E) ... (d + W - E)(d + W)`, expanded to coefficient
/// form with leading coefficient one. The momentum-form supercharge is this
/// operator times the constant phase `(-i)^N`, which cancels in every
/// relation checked here.
pub fn build_supercharge(spec: &FamilySpec) -> DifferentialOperator {
    supercharge_factors(spec)
        .into_iter()
        .fold(DifferentialOperator::identity(), |acc, f| f.compose(&acc))
}

/// The first-order factors of the supercharge, innermost (`k = 0`) first.
pub fn supercharge_factors(spec: &FamilySpec) -> Vec<DifferentialOperator> {
    (0..spec.n)
        .map(|k| {
            let shift = scale(Const::from_int(k as i64), &spec.e);
            DifferentialOperator::d_plus(&sub(&spec.w, &shift))
        })
        .collect()
}

/// The pair `(V+, V-)` of partner potentials.
pub fn build_potentials(spec: &FamilySpec) -> (Expression, Expression) {
    let n = spec.n as i64;
    let e = &spec.e;
    let w = &spec.w;
    let e1 = differentiate(e);
    let w1 = differentiate(w);
    // shared part: -(N-1) E W + (N-1)(2N-1)/6 E^2 - (N^2-1)/6 E'
    let base = add(
        &add(
            &scale(Const::from_int(-(n - 1)), &mul(e, w)),
            &scale(Const::from_ratio((n - 1) * (2 * n - 1), 6), &pow(e, 2)),
        ),
        &scale(Const::from_ratio(-(n * n - 1), 6), &e1),
    );
    // signed part: N (W' - (N-1)/2 E')
    let signed = scale(
        Const::from_int(n),
        &sub(&w1, &scale(Const::from_ratio(n - 1, 2), &e1)),
    );
    (add(&base, &signed), sub(&base, &signed))
}

fn hamiltonian_from_potential(spec: &FamilySpec, v: &Expression) -> DifferentialOperator {
    // H = (-d^2 + W^2 + V)/2
    let scalar = scale(
        Const::from_ratio(1, 2),
        &add(&pow(&spec.w, 2), v),
    );
    DifferentialOperator::from_coeffs(vec![
        scalar,
        Expression::zero(),
        Expression::constant(Const::from_ratio(-1, 2)),
    ])
}

/// The partner Hamiltonians `(H+, H-)` as order-2 operators.
pub fn build_hamiltonians(spec: &FamilySpec) -> (DifferentialOperator, DifferentialOperator) {
    let (v_plus, v_minus) = build_potentials(spec);
    (
        hamiltonian_from_potential(spec, &v_plus),
        hamiltonian_from_potential(spec, &v_minus),
    )
}

#[derive(Debug, thiserror::Error)]
pub enum SusyError {
    #[error("Wt is identically zero; the A-constant Hamiltonian form is undefined")]
    WTildeZero,
    #[error(transparent)]
    Zero(#[from] ZeroError),
    #[error("evaluation failed: {0}")]
    Eval(#[from] crate::expr::EvalError),
}

/// Hamiltonians in the recentered `Wt = W - (N-1)E/2` parametrization:
///
/// ```text
/// 2 H± = -d^2 + Wt^2 + (N^2-1)/12 (E^2 - 2E') ± N Wt'
/// ```
///
/// With `a_const` supplied, the scalar correction is taken in the
/// alternative form `(N^2-1)/12 (2 Wt''/Wt - Wt'^2/Wt^2 + A/Wt^2)` instead.
pub fn build_hamiltonians_tilde(
    spec: &FamilySpec,
    a_const: Option<Const>,
) -> Result<(DifferentialOperator, DifferentialOperator), SusyError> {
    let n = spec.n as i64;
    let wt = spec.w_tilde();
    let wt1 = differentiate(&wt);
    let coeff = Const::from_ratio(n * n - 1, 12);
    let correction = match a_const {
        None => {
            let e1 = differentiate(&spec.e);
            scale(
                coeff,
                &sub(&pow(&spec.e, 2), &scale(Const::from_int(2), &e1)),
            )
        }
        Some(a) => {
            if wt.canonicalize(&spec.bindings).is_proven_zero() {
                return Err(SusyError::WTildeZero);
            }
            let wt2 = differentiate(&wt1);
            let term = add(
                &sub(
                    &scale(Const::from_int(2), &div(&wt2, &wt)),
                    &div(&pow(&wt1, 2), &pow(&wt, 2)),
                ),
                &div(&Expression::constant(a), &pow(&wt, 2)),
            );
            scale(coeff, &term)
        }
    };
    let make = |sign: i64| {
        // 2H = -d^2 + Wt^2 + correction ± N Wt'
        let scalar = scale(
            Const::from_ratio(1, 2),
            &add(
                &add(&pow(&wt, 2), &correction),
                &scale(Const::from_int(sign * n), &wt1),
            ),
        );
        DifferentialOperator::from_coeffs(vec![
            scalar,
            Expression::zero(),
            Expression::constant(Const::from_ratio(-1, 2)),
        ])
    };
    Ok((make(1), make(-1)))
}

/// Whether a condition applies at this fold number, and its verdict if so.
#[derive(Clone, Debug, PartialEq)]
pub enum ConditionStatus {
    NotApplicable,
    Checked(ZeroVerdict),
}

impl ConditionStatus {
    pub fn passes(&self) -> bool {
        match self {
            ConditionStatus::NotApplicable => true,
            ConditionStatus::Checked(v) => v.passes(),
        }
    }
}

/// Verdicts for the two closure conditions.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    /// `E''' + E E'' + 2 E'^2 - 2 E^2 E' = 0`; applies for `N >= 3`.
    pub e_condition: ConditionStatus,
    /// `(Wt' + E Wt)'' - E (Wt' + E Wt)' = 0`; applies for `N >= 2`.
    pub w_condition: ConditionStatus,
}

impl ConditionReport {
    pub fn passes(&self) -> bool {
        self.e_condition.passes() && self.w_condition.passes()
    }
}

/// The third-order closure condition on `E` alone.
pub fn e_condition_expression(e: &Expression) -> Expression {
    let e1 = differentiate(e);
    let e2 = differentiate(&e1);
    let e3 = differentiate(&e2);
    add(
        &add(&e3, &mul(e, &e2)),
        &sub(
            &scale(Const::from_int(2), &pow(&e1, 2)),
            &scale(Const::from_int(2), &mul(&pow(e, 2), &e1)),
        ),
    )
}

/// The second-order closure condition linking `W` and `E` at fold `N`,
/// written on `Wt = W - (N-1)E/2`.
pub fn w_condition_expression(spec: &FamilySpec) -> Expression {
    let wt = spec.w_tilde();
    let f = add(&differentiate(&wt), &mul(&spec.e, &wt));
    sub(&diff_n(&f, 2), &mul(&spec.e, &differentiate(&f)))
}

/// Evaluate both closure conditions through the zero tester.
pub fn check_conditions(spec: &FamilySpec, seed: u64) -> Result<ConditionReport, ZeroError> {
    let policy = spec.policy(seed);
    let e_condition = if spec.n >= 3 {
        ConditionStatus::Checked(is_zero(&e_condition_expression(&spec.e), &policy)?)
    } else {
        ConditionStatus::NotApplicable
    };
    let w_condition = if spec.n >= 2 {
        ConditionStatus::Checked(is_zero(&w_condition_expression(spec), &policy)?)
    } else {
        ConditionStatus::NotApplicable
    };
    Ok(ConditionReport {
        e_condition,
        w_condition,
    })
}

/// A reference point clear of the declared poles, used wherever a single
/// evaluation stands in for an exact reduction.
pub(crate) fn reference_point(spec: &FamilySpec) -> f64 {
    let mut q_ref = 1.0f64;
    while spec.poles.iter().any(|p| (q_ref - p).abs() < 1e-3) {
        q_ref += 0.37;
    }
    q_ref
}

/// Reduce an expression to a constant: exactly through canonicalization if
/// possible, otherwise by evaluating at the reference point. The flag is
/// true when the reduction was exact.
pub(crate) fn reduce_to_constant(spec: &FamilySpec, e: &Expression) -> Option<(Const, bool)> {
    if let Some(c) = e.const_value(&spec.bindings) {
        return Some((c, true));
    }
    let q_ref = reference_point(spec);
    let z = crate::expr::evaluate(
        e,
        num_complex::Complex64::new(q_ref, 0.0),
        &spec.bindings,
    )
    .ok()?;
    Const::from_c64(z).map(|c| (c, false))
}

/// Per-coefficient verdicts for an operator identity `R = 0`.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    /// Verdict for the coefficient of each `d^k` of the residual.
    pub coefficients: Vec<ZeroVerdict>,
    pub overall: bool,
}

impl ResidualReport {
    pub fn from_operator(
        residual: &DifferentialOperator,
        policy: &SamplePolicy,
    ) -> Result<Self, ZeroError> {
        let mut coefficients = Vec::new();
        for c in residual.coeffs() {
            coefficients.push(is_zero(c, policy)?);
        }
        let overall = coefficients.iter().all(ZeroVerdict::passes);
        Ok(ResidualReport {
            coefficients,
            overall,
        })
    }

    pub fn max_residual(&self) -> f64 {
        self.coefficients
            .iter()
            .map(ZeroVerdict::max_residual)
            .fold(0.0, f64::max)
    }

    /// Worst single verdict, for reporting.
    pub fn worst(&self) -> Option<&ZeroVerdict> {
        self.coefficients
            .iter()
            .max_by(|a, b| {
                fn rank(v: &ZeroVerdict) -> u8 {
                    match v {
                        ZeroVerdict::ProvenZero { .. } => 0,
                        ZeroVerdict::NumericallyZero { .. } => 1,
                        ZeroVerdict::NonZero { .. } => 2,
                    }
                }
                rank(a)
                    .cmp(&rank(b))
                    .then(a.max_residual().total_cmp(&b.max_residual()))
            })
    }
}

/// Check `A H- - H+ A = 0` by direct composition. This is the module's
/// ground truth; it never assumes the closure conditions hold.
pub fn verify_intertwining(spec: &FamilySpec, seed: u64) -> Result<ResidualReport, ZeroError> {
    let a = build_supercharge(spec);
    let (h_plus, h_minus) = build_hamiltonians(spec);
    let residual = a.compose(&h_minus).sub(&h_plus.compose(&a));
    ResidualReport::from_operator(&residual, &spec.policy(seed))
}

/// The fold-step increments `(h+, h-)` with
/// `±h± = [-EW + (4N-1)/6 E^2 - (2N+1)/6 E' ± (W' - N E')]/2`;
/// the potentials obey `V±(N+1) = V±(N) ± 2 h±(N)`.
pub fn fold_step_increments(spec: &FamilySpec) -> (Expression, Expression) {
    let n = spec.n as i64;
    let e = &spec.e;
    let w = &spec.w;
    let e1 = differentiate(e);
    let w1 = differentiate(w);
    let sym = add(
        &sub(
            &scale(Const::from_ratio(4 * n - 1, 6), &pow(e, 2)),
            &mul(e, w),
        ),
        &scale(Const::from_ratio(-(2 * n + 1), 6), &e1),
    );
    let anti = sub(&w1, &scale(Const::from_int(n), &e1));
    let h_plus = scale(Const::from_ratio(1, 2), &add(&sym, &anti));
    let h_minus = neg(&scale(Const::from_ratio(1, 2), &sub(&sym, &anti)));
    (h_plus, h_minus)
}

/// `[Wt^2 (E^2 - 2E')]' - 2 Wt Wt'''`, which vanishes whenever the
/// `W`-condition holds.
pub fn w_tilde_identity_expression(spec: &FamilySpec) -> Expression {
    let wt = spec.w_tilde();
    let e1 = differentiate(&spec.e);
    let inner = mul(
        &pow(&wt, 2),
        &sub(&pow(&spec.e, 2), &scale(Const::from_int(2), &e1)),
    );
    sub(
        &differentiate(&inner),
        &scale(Const::from_int(2), &mul(&wt, &diff_n(&wt, 3))),
    )
}
