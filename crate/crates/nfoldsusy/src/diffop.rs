//! Ordinary differential operators in one variable with expression
//! coefficients: `A = sum_k c_k(q) d^k`.
//!
//! The zero operator is the canonical empty coefficient list and every
//! operation treats it explicitly. The internal convention throughout the
//! crate is the real `d` form (not the momentum form): supercharges are
//! stored as products of `d + W - k*E`, with the momentum-form operator
//! differing only by a constant phase that drops out of every relation we
//! check.

use crate::expr::{
    add as eadd, differentiate, mul as emul, neg as eneg, sub as esub, Bindings, Expression,
};
use std::fmt;

/// `sum_k coeffs[k] * d^k`; empty = the zero operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialOperator {
    coeffs: Vec<Expression>,
}

impl DifferentialOperator {
    pub fn zero() -> Self {
        DifferentialOperator { coeffs: Vec::new() }
    }

    pub fn identity() -> Self {
        DifferentialOperator {
            coeffs: vec![Expression::one()],
        }
    }

    /// The bare derivative `d`.
    pub fn d() -> Self {
        DifferentialOperator {
            coeffs: vec![Expression::zero(), Expression::one()],
        }
    }

    /// Multiplication by `f`.
    pub fn mul_by(f: &Expression) -> Self {
        DifferentialOperator {
            coeffs: vec![f.clone()],
        }
    }

    /// `d + f` — the first-order factor the supercharges are built from.
    pub fn d_plus(f: &Expression) -> Self {
        DifferentialOperator {
            coeffs: vec![f.clone(), Expression::one()],
        }
    }

    /// Build from a low-to-high coefficient list, trimming canonically-zero
    /// leading coefficients.
    pub fn from_coeffs(coeffs: Vec<Expression>) -> Self {
        let mut op = DifferentialOperator { coeffs };
        op.trim();
        op
    }

    fn trim(&mut self) {
        let empty = Bindings::new();
        while let Some(last) = self.coeffs.last() {
            let zero = last.is_literal_zero() || last.canonicalize(&empty).is_proven_zero();
            if zero {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order of the operator; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Expression] {
        &self.coeffs
    }

    /// Coefficient of `d^k` (zero expression when above the order).
    pub fn coeff(&self, k: usize) -> Expression {
        self.coeffs.get(k).cloned().unwrap_or_else(Expression::zero)
    }

    /// `A f = sum_k c_k f^(k)`.
    pub fn apply(&self, f: &Expression) -> Expression {
        let mut out = Expression::zero();
        let mut derivative = f.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                derivative = differentiate(&derivative);
            }
            out = eadd(&out, &emul(c, &derivative));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| eadd(&self.coeff(k), &other.coeff(k))).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| esub(&self.coeff(k), &other.coeff(k))).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        DifferentialOperator {
            coeffs: self.coeffs.iter().map(eneg).collect(),
        }
    }

    /// Left-multiply every coefficient by `s` (an expression or constant).
    pub fn scale(&self, s: &Expression) -> Self {
        if s.is_literal_zero() {
            return Self::zero();
        }
        let coeffs = self.coeffs.iter().map(|c| emul(s, c)).collect();
        Self::from_coeffs(coeffs)
    }

    /// Composition `A o B`: `(A o B) f = A (B f)`.
    ///
    /// Uses `d o B = B' + B d` repeatedly (Leibniz), where `B'` is the
    /// coefficient-wise derivative, then sums `c_k (d^k o B)`.
    pub fn compose(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut result = Self::zero();
        // dk_b = d^k o B, built incrementally.
        let mut dk_b = other.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                dk_b = dk_b.d_compose();
            }
            if !c.is_literal_zero() {
                result = result.add(&dk_b.scale(c));
            }
        }
        result
    }

    /// `d o self = self' + self * d`.
    fn d_compose(&self) -> Self {
        let mut coeffs = vec![Expression::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k] = eadd(&coeffs[k], &differentiate(c));
            coeffs[k + 1] = eadd(&coeffs[k + 1], c);
        }
        Self::from_coeffs(coeffs)
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    /// Formal adjoint `(sum c_k d^k)^† = sum (-1)^k d^k o conj(c_k)`,
    /// expanded to coefficient form. Coefficients are conjugated, so for
    /// real coefficients this is the formal transpose.
    pub fn formal_adjoint(&self) -> Self {
        self.flip(true)
    }

    /// Formal transpose: like the adjoint but without conjugating the
    /// coefficients. Transposing an intertwining relation against
    /// symmetric Hamiltonians is valid even when coefficients are complex,
    /// which is why the mother-polynomial extraction uses this form.
    pub fn formal_transpose(&self) -> Self {
        self.flip(false)
    }

    fn flip(&self, conjugate: bool) -> Self {
        let mut result = Self::zero();
        let mut dk = Self::identity();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                dk = Self::d().compose(&dk);
            }
            let c = if conjugate { c.conj() } else { c.clone() };
            let term = dk.compose(&Self::mul_by(&c));
            if k % 2 == 0 {
                result = result.add(&term);
            } else {
                result = result.sub(&term);
            }
        }
        result
    }

    /// Conjugation by `U = e^{int w}`: returns `U A U^{-1}`, i.e. every
    /// `d` replaced by `d - w`, expanded to coefficient form. No integral
    /// of `w` is ever materialized.
    pub fn gauge_conjugate(&self, w: &Expression) -> Self {
        let d_minus_w = Self::from_coeffs(vec![eneg(w), Expression::one()]);
        let mut result = Self::zero();
        let mut power = Self::identity();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = d_minus_w.compose(&power);
            }
            if !c.is_literal_zero() {
                result = result.add(&power.scale(c));
            }
        }
        result
    }

    /// `A^n` by repeated composition.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = acc.compose(self);
        }
        acc
    }
}

impl fmt::Display for DifferentialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_literal_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c}) d")?,
                _ => write!(f, "({c}) d^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{evaluate, is_zero, parse, Bindings, Const, Expression, SamplePolicy};
    use num_complex::Complex64;

    fn q() -> Expression {
        Expression::var()
    }

    fn expr(text: &str) -> Expression {
        parse(text).unwrap()
    }

    /// Assert that an operator's coefficients are all provably/numerically zero.
    fn assert_op_zero(op: &DifferentialOperator, label: &str) {
        let policy = SamplePolicy::default();
        for (k, c) in op.coeffs().iter().enumerate() {
            let verdict = is_zero(c, &policy).unwrap();
            assert!(verdict.passes(), "{label}: coeff of d^{k} nonzero: {c}");
        }
    }

    /// Apply-equivalence at a few sample points over test functions.
    fn assert_apply_equal(a: &DifferentialOperator, b: &DifferentialOperator, label: &str) {
        let bindings = Bindings::new();
        for f in [expr("1"), expr("q"), expr("q^3"), expr("exp(q)"), expr("sin(q)")] {
            let fa = a.apply(&f);
            let fb = b.apply(&f);
            for x in [0.41, 0.93, 1.57, 1.98] {
                let va = evaluate(&fa, Complex64::new(x, 0.0), &bindings).unwrap();
                let vb = evaluate(&fb, Complex64::new(x, 0.0), &bindings).unwrap();
                let scale = 1.0 + va.norm().max(vb.norm());
                assert!(
                    (va - vb).norm() <= 1e-9 * scale,
                    "{label}: mismatch at q={x} on f={f}: {va} vs {vb}"
                );
            }
        }
    }

    #[test]
    fn apply_examples() {
        // d applied to q^2
        let d = DifferentialOperator::d();
        let out = d.apply(&expr("q^2"));
        let v = evaluate(&out, Complex64::new(3.0, 0.0), &Bindings::new()).unwrap();
        assert!((v.re - 6.0).abs() < 1e-14);

        // (d + q) annihilates the Gaussian ground state
        let a = DifferentialOperator::d_plus(&q());
        let out = a.apply(&expr("exp(-q^2/2)"));
        let verdict = is_zero(&out, &SamplePolicy::default()).unwrap();
        assert!(verdict.passes(), "ground state not annihilated: {out}");

        // d^2 sin = -sin
        let d2 = DifferentialOperator::d().pow(2);
        let out = eadd(&d2.apply(&expr("sin(q)")), &expr("sin(q)"));
        assert!(is_zero(&out, &SamplePolicy::default()).unwrap().passes());
    }

    #[test]
    fn add_and_scale() {
        let d = DifferentialOperator::d();
        assert!(d.add(&d.neg()).is_zero());
        let qd = d.scale(&q());
        assert_eq!(qd.order(), Some(1));
        let shifted = DifferentialOperator::d().pow(2).add(&DifferentialOperator::identity());
        assert_eq!(shifted.order(), Some(2));
    }

    #[test]
    fn compose_leibniz() {
        // d o (mult by f) = f d + f'
        let f = expr("q^3");
        let composed = DifferentialOperator::d().compose(&DifferentialOperator::mul_by(&f));
        let expected = DifferentialOperator::from_coeffs(vec![expr("3*q^2"), f.clone()]);
        assert_op_zero(&composed.sub(&expected), "d o f");

        // (d+q)(d-q) = d^2 - (q^2+1)
        let a = DifferentialOperator::d_plus(&q());
        let b = DifferentialOperator::d_plus(&eneg(&q()));
        let composed = a.compose(&b);
        let expected = DifferentialOperator::from_coeffs(vec![
            expr("-(q^2+1)"),
            Expression::zero(),
            Expression::one(),
        ]);
        assert_op_zero(&composed.sub(&expected), "(d+q)(d-q)");

        // (d+W)^2 with W = q^2: d^2 + 2q^2 d + (q^4 + 2q), checked by
        // apply-equivalence as an independent route.
        let w = expr("q^2");
        let dw = DifferentialOperator::d_plus(&w);
        let squared = dw.compose(&dw);
        let expected = DifferentialOperator::from_coeffs(vec![
            expr("q^4 + 2*q"),
            expr("2*q^2"),
            Expression::one(),
        ]);
        assert_op_zero(&squared.sub(&expected), "(d+q^2)^2");
        assert_apply_equal(&squared, &expected, "(d+q^2)^2 apply route");
    }

    #[test]
    fn commutators() {
        let d = DifferentialOperator::d();
        let mq = DifferentialOperator::mul_by(&q());
        // [d, q] = 1
        assert_op_zero(
            &d.commutator(&mq).sub(&DifferentialOperator::identity()),
            "[d,q]",
        );
        // [d^2, q] = 2d
        let d2 = d.pow(2);
        let expected = DifferentialOperator::from_coeffs(vec![Expression::zero(), expr("2")]);
        assert_op_zero(&d2.commutator(&mq).sub(&expected), "[d^2,q]");
        // antisymmetry on a random-ish pair
        let a = DifferentialOperator::from_coeffs(vec![expr("q"), expr("q^2+1")]);
        let b = DifferentialOperator::from_coeffs(vec![expr("exp(q)"), expr("2*q")]);
        assert_apply_equal(
            &a.commutator(&b),
            &b.commutator(&a).neg(),
            "[A,B] = -[B,A]",
        );
    }

    #[test]
    fn formal_adjoint_examples() {
        let d = DifferentialOperator::d();
        assert_op_zero(&d.formal_adjoint().add(&d), "(d)† = -d");

        // (q d)† = -q d - 1
        let qd = d.scale(&q());
        let expected = DifferentialOperator::from_coeffs(vec![expr("-1"), eneg(&q())]);
        assert_op_zero(&qd.formal_adjoint().sub(&expected), "(qd)†");

        // involution for real coefficients
        let a = DifferentialOperator::from_coeffs(vec![expr("q^2"), expr("sin(q)"), expr("3")]);
        assert_op_zero(&a.formal_adjoint().formal_adjoint().sub(&a), "(A†)† = A");

        // (AB)† = B† A†
        let b = DifferentialOperator::from_coeffs(vec![expr("q"), expr("q^3")]);
        assert_op_zero(
            &a.compose(&b)
                .formal_adjoint()
                .sub(&b.formal_adjoint().compose(&a.formal_adjoint())),
            "(AB)† = B†A†",
        );

        // adjoint conjugates constants; transpose does not
        let i_d = d.scale(&Expression::constant(Const::i()));
        assert_op_zero(&i_d.formal_adjoint().sub(&i_d), "(i d)† = i d");
        assert_op_zero(&i_d.formal_transpose().add(&i_d), "(i d)^T = -i d");
    }

    #[test]
    fn gauge_conjugation() {
        // gauge by w = q sends d to d - q
        let conj = DifferentialOperator::d().gauge_conjugate(&q());
        let expected = DifferentialOperator::from_coeffs(vec![eneg(&q()), Expression::one()]);
        assert_op_zero(&conj.sub(&expected), "gauge(d, q)");

        // homomorphism: gauge(AB) = gauge(A) gauge(B)
        let w = expr("q^2");
        let a = DifferentialOperator::from_coeffs(vec![expr("q"), Expression::one()]);
        let b = DifferentialOperator::from_coeffs(vec![expr("q^3"), expr("2")]);
        let lhs = a.compose(&b).gauge_conjugate(&w);
        let rhs = a.gauge_conjugate(&w).compose(&b.gauge_conjugate(&w));
        assert_op_zero(&lhs.sub(&rhs), "gauge homomorphism");

        // gauge preserves commutators
        let lhs = a.commutator(&b).gauge_conjugate(&w);
        let rhs = a.gauge_conjugate(&w).commutator(&b.gauge_conjugate(&w));
        assert_op_zero(&lhs.sub(&rhs), "gauge commutator");
    }

    #[test]
    fn compose_associativity_by_apply() {
        let a = DifferentialOperator::from_coeffs(vec![expr("q"), expr("1"), expr("q^2")]);
        let b = DifferentialOperator::from_coeffs(vec![expr("sin(q)"), expr("q")]);
        let c = DifferentialOperator::from_coeffs(vec![expr("exp(q)"), expr("2"), expr("q")]);
        assert_apply_equal(
            &a.compose(&b).compose(&c),
            &a.compose(&b.compose(&c)),
            "associativity",
        );
    }

    #[test]
    fn jacobi_identity() {
        let a = DifferentialOperator::from_coeffs(vec![expr("q"), expr("1")]);
        let b = DifferentialOperator::from_coeffs(vec![expr("q^2"), expr("q")]);
        let c = DifferentialOperator::from_coeffs(vec![expr("1"), expr("q^3")]);
        let jacobi = a
            .commutator(&b.commutator(&c))
            .add(&b.commutator(&c.commutator(&a)))
            .add(&c.commutator(&a.commutator(&b)));
        assert_op_zero(&jacobi, "jacobi");
    }

    #[test]
    fn zero_operator_is_canonical() {
        let z = DifferentialOperator::from_coeffs(vec![expr("q - q"), expr("0")]);
        assert!(z.is_zero());
        assert_eq!(z.order(), None);
        assert!(z.compose(&DifferentialOperator::d()).is_zero());
        assert!(DifferentialOperator::d().compose(&z).is_zero());
    }
}
