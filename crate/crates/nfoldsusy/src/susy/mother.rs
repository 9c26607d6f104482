//! Extraction of the polynomial `P_N` with `A^T A / 2 = P_N(H-)`.
//!
//! The product `A^T A / 2` is an order-2N operator that commutes with `H-`
//! whenever the intertwining relation holds, and is then a degree-N
//! polynomial in it. The coefficients are peeled top-down: the leading
//! coefficient of `H-^j` as an operator is exactly `(-1/2)^j` at `d^{2j}`,
//! so the coefficient of `d^{2j}` of the remainder determines `a_j` once
//! all higher terms are subtracted.
//!
//! The transpose here is the formal one (coefficient-wise, no complex
//! conjugation): `A^T H+ = H- A^T` follows from the forward relation for
//! any symmetric `H±`, including the complex-potential families where the
//! conjugating adjoint would fail.

use super::{build_hamiltonians, build_supercharge, reduce_to_constant, FamilySpec, ResidualReport};
use crate::diffop::DifferentialOperator;
use crate::expr::{Const, Expression, ZeroError};
use num_complex::Complex64;

/// The polynomial `P_N` and the evidence that it reproduces `A^T A / 2`.
#[derive(Clone, Debug)]
pub struct MotherPolynomial {
    /// `coefficients[j]` multiplies `H^j`; exact when extraction
    /// canonicalized, otherwise a point evaluation.
    pub coefficients: Vec<Const>,
    /// Whether every coefficient was obtained exactly.
    pub exact: bool,
    /// `A^T A / 2 - P_N(H-) = 0`, coefficient by coefficient.
    pub minus_residual: ResidualReport,
    /// `A A^T / 2 - P_N(H+) = 0` with the same coefficients.
    pub plus_residual: ResidualReport,
}

impl MotherPolynomial {
    pub fn passes(&self) -> bool {
        self.minus_residual.overall && self.plus_residual.overall
    }

    /// Evaluate `P_N` at a complex point.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_c64())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MotherError {
    #[error("coefficient of d^{order} could not be reduced to a constant: {coeff}")]
    NonConstantCoefficient { order: usize, coeff: String },
    #[error(transparent)]
    Zero(#[from] ZeroError),
}

/// Reduce an expression to a constant: exactly if it canonicalizes, else by
/// evaluating at a reference point clear of the declared poles.
fn constant_of(
    spec: &FamilySpec,
    e: &Expression,
    order: usize,
) -> Result<(Const, bool), MotherError> {
    reduce_to_constant(spec, e).ok_or_else(|| MotherError::NonConstantCoefficient {
        order,
        coeff: e.to_string(),
    })
}

/// Extract `P_N` from `A^T A / 2` by top-down peeling against powers of
/// `H-`, then confirm the same coefficients against powers of `H+`.
pub fn extract_mother_polynomial(
    spec: &FamilySpec,
    seed: u64,
) -> Result<MotherPolynomial, MotherError> {
    let a = build_supercharge(spec);
    let at = a.formal_transpose();
    let half = Expression::ratio(1, 2);
    let m_minus = at.compose(&a).scale(&half);
    let m_plus = a.compose(&at).scale(&half);
    let (h_plus, h_minus) = build_hamiltonians(spec);

    let n = spec.n as usize;
    // powers[j] = H-^j, reused across the peel and the final residuals
    let mut minus_powers = Vec::with_capacity(n + 1);
    minus_powers.push(DifferentialOperator::identity());
    for _ in 0..n {
        let next = h_minus.compose(minus_powers.last().unwrap());
        minus_powers.push(next);
    }

    let mut coefficients = vec![Const::zero(); n + 1];
    let mut exact = true;
    let mut remainder = m_minus;
    for j in (0..=n).rev() {
        let lead = Const::from_ratio(-1, 2)
            .powi(j as i32)
            .expect("(-1/2)^j is finite");
        let raw = remainder.coeff(2 * j);
        let (c, was_exact) = constant_of(spec, &raw, 2 * j)?;
        let a_j = c.div(&lead).expect("leading coefficient is nonzero");
        exact &= was_exact;
        remainder = remainder.sub(&minus_powers[j].scale(&Expression::constant(a_j.clone())));
        coefficients[j] = a_j;
    }

    let policy = spec.policy(seed);
    let minus_residual = ResidualReport::from_operator(&remainder, &policy)?;

    let mut plus_model = DifferentialOperator::zero();
    let mut plus_power = DifferentialOperator::identity();
    for c in &coefficients {
        plus_model = plus_model.add(&plus_power.scale(&Expression::constant(c.clone())));
        plus_power = h_plus.compose(&plus_power);
    }
    let plus_residual = ResidualReport::from_operator(&m_plus.sub(&plus_model), &policy)?;

    Ok(MotherPolynomial {
        coefficients,
        exact,
        minus_residual,
        plus_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn spec(n: u32, w: &str, e: &str) -> FamilySpec {
        FamilySpec::new(n, parse(w).unwrap(), parse(e).unwrap())
    }

    fn ints(m: &MotherPolynomial) -> Vec<Const> {
        m.coefficients.clone()
    }

    #[test]
    fn single_fold_is_identity_polynomial() {
        // A^T A / 2 = H- exactly for N=1, any W: P_1(x) = x.
        let m = extract_mother_polynomial(&spec(1, "q^3 - 2*q", "0"), 3).unwrap();
        assert!(m.exact);
        assert!(m.passes());
        assert_eq!(ints(&m), vec![Const::zero(), Const::one()]);
    }

    #[test]
    fn two_fold_harmonic_oracle() {
        // N=2, W=q, E=0: hand expansion of (d+q)^T... gives
        // A^T A / 2 = 2 H-^2 - 1/2, i.e. (a0, a1, a2) = (-1/2, 0, 2).
        let m = extract_mother_polynomial(&spec(2, "q", "0"), 3).unwrap();
        assert!(m.exact, "rational inputs must extract exactly");
        assert!(m.passes());
        assert_eq!(
            ints(&m),
            vec![Const::from_ratio(-1, 2), Const::zero(), Const::from_int(2)]
        );
    }

    #[test]
    fn leading_coefficient_is_two_to_the_n_minus_one() {
        // The d^{2N} terms force a_N = (-1)^N / (-1/2)^N = 2^N... divided by
        // the 1/2 in front: a_N = 2^{N-1}.
        for n in 1..=4u32 {
            let m = extract_mother_polynomial(&spec(n, "q^2 - 1", "0"), 3).unwrap();
            assert!(m.passes(), "N = {n}");
            assert_eq!(
                m.coefficients[n as usize],
                Const::from_int(1 << (n - 1)),
                "N = {n}"
            );
        }
    }

    #[test]
    fn extraction_succeeds_for_rational_e() {
        let s = spec(2, "q^3 + q", "1/q").with_poles(&[0.0]);
        let m = extract_mother_polynomial(&s, 3).unwrap();
        assert!(m.exact);
        assert!(m.passes());
    }

    #[test]
    fn mismatched_family_fails_side_consistency() {
        // N=2 with cubic W breaks intertwining, so A^T A / 2 cannot be a
        // polynomial in H- (or the H+ check fails).
        let m = extract_mother_polynomial(&spec(2, "q^3", "0"), 3).unwrap();
        assert!(!m.passes());
    }
}
