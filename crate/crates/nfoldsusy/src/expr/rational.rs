//! Exact canonicalization for the rational subclass of expressions.
//!
//! An expression built only from constants, parameters, `q`, the four
//! arithmetic operations and integer powers is flattened into a ratio of
//! multivariate polynomials (variables: `q` and the unbound parameters)
//! with exact complex-rational coefficients. The zero normal form is the
//! ground truth behind `ZeroVerdict::ProvenZero`.
//!
//! No polynomial gcd is attempted: the canonical form is "cross-multiplied,
//! zero terms dropped, denominator normalized to leading coefficient one",
//! which is exactly strong enough to decide zero-ness and cheap enough to
//! run inside operator-identity checks.

use super::{Bindings, Const, Expr, Expression};
use std::collections::BTreeMap;
use std::fmt;

/// A power product of variables, e.g. `q^3 * g^2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Mono(pub BTreeMap<String, u32>);

impl Mono {
    fn one() -> Self {
        Mono::default()
    }

    fn var(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), 1);
        Mono(m)
    }

    fn mul(&self, other: &Mono) -> Mono {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Mono(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Multivariate polynomial with exact complex-rational coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct MultiPoly {
    pub terms: BTreeMap<Mono, Const>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: Const) -> Self {
        let mut p = MultiPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Mono::one(), c);
        }
        p
    }

    pub fn one() -> Self {
        MultiPoly::constant(Const::one())
    }

    pub fn variable(name: &str) -> Self {
        let mut p = MultiPoly::zero();
        p.terms.insert(Mono::var(name), Const::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant polynomial value, if it is one.
    pub fn as_const(&self) -> Option<Const> {
        if self.terms.is_empty() {
            return Some(Const::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Mono::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.terms.clone();
        for (m, c) in &other.terms {
            match out.get_mut(m) {
                Some(existing) => {
                    let sum = existing.add(c);
                    if sum.is_zero() {
                        out.remove(m);
                    } else {
                        *existing = sum;
                    }
                }
                None => {
                    out.insert(m.clone(), c.clone());
                }
            }
        }
        MultiPoly { terms: out }
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out: BTreeMap<Mono, Const> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match out.get_mut(&m) {
                    Some(existing) => {
                        let sum = existing.add(&c);
                        if sum.is_zero() {
                            out.remove(&m);
                        } else {
                            *existing = sum;
                        }
                    }
                    None => {
                        if !c.is_zero() {
                            out.insert(m, c);
                        }
                    }
                }
            }
        }
        MultiPoly { terms: out }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: &Const) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(c)))
                .collect(),
        }
    }

    /// Leading coefficient under the monomial ordering.
    fn leading(&self) -> Option<&Const> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Ratio of multivariate polynomials in normal form: the denominator has
/// leading coefficient one and the zero function is `0/1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalFn {
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_const(&self) -> Option<Const> {
        if self.num.is_zero() {
            return Some(Const::zero());
        }
        // Constant iff num = c * den; detected without any gcd.
        let ln = self.num.leading()?;
        let ld = self.den.leading()?;
        let c = ln.div(ld)?;
        if self.num == self.den.scale(&c) {
            Some(c)
        } else {
            None
        }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_const().map(|c| c.is_one()).unwrap_or(false) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Outcome of [`canonicalize_rational`].
#[derive(Clone, Debug, PartialEq)]
pub enum Canonical {
    Rational(RationalFn),
    /// The expression uses exp/sin/cos/log (or divides by an expression
    /// that is identically zero) and has no rational normal form.
    NotRational,
}

impl Canonical {
    pub fn is_proven_zero(&self) -> bool {
        matches!(self, Canonical::Rational(r) if r.is_zero())
    }
}

struct Ratio {
    num: MultiPoly,
    den: MultiPoly,
}

fn flatten(e: &Expression, bindings: &Bindings) -> Option<Ratio> {
    match e.node() {
        Expr::Const(c) => Some(Ratio {
            num: MultiPoly::constant(c.clone()),
            den: MultiPoly::one(),
        }),
        Expr::Param(name) => match bindings.get(name.as_ref()) {
            Some(c) => Some(Ratio {
                num: MultiPoly::constant(c.clone()),
                den: MultiPoly::one(),
            }),
            None => Some(Ratio {
                num: MultiPoly::variable(name),
                den: MultiPoly::one(),
            }),
        },
        Expr::Var => Some(Ratio {
            num: MultiPoly::variable("q"),
            den: MultiPoly::one(),
        }),
        Expr::Neg(a) => {
            let r = flatten(a, bindings)?;
            Some(Ratio {
                num: r.num.neg(),
                den: r.den,
            })
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let ra = flatten(a, bindings)?;
            let rb = flatten(b, bindings)?;
            let rb_num = if matches!(e.node(), Expr::Sub(..)) {
                rb.num.neg()
            } else {
                rb.num
            };
            Some(Ratio {
                num: ra.num.mul(&rb.den).add(&rb_num.mul(&ra.den)),
                den: ra.den.mul(&rb.den),
            })
        }
        Expr::Mul(a, b) => {
            let ra = flatten(a, bindings)?;
            let rb = flatten(b, bindings)?;
            Some(Ratio {
                num: ra.num.mul(&rb.num),
                den: ra.den.mul(&rb.den),
            })
        }
        Expr::Div(a, b) => {
            let ra = flatten(a, bindings)?;
            let rb = flatten(b, bindings)?;
            if rb.num.is_zero() {
                return None; // division by an identically zero expression
            }
            Some(Ratio {
                num: ra.num.mul(&rb.den),
                den: ra.den.mul(&rb.num),
            })
        }
        Expr::Pow(a, n) => {
            let r = flatten(a, bindings)?;
            if *n >= 0 {
                Some(Ratio {
                    num: r.num.pow(*n as u32),
                    den: r.den.pow(*n as u32),
                })
            } else {
                if r.num.is_zero() {
                    return None;
                }
                let k = n.unsigned_abs();
                Some(Ratio {
                    num: r.den.pow(k),
                    den: r.num.pow(k),
                })
            }
        }
        Expr::Func(..) => None,
    }
}

/// Flatten `e` to the canonical ratio of polynomials, substituting any
/// parameters bound in `bindings` and keeping the rest symbolic.
pub fn canonicalize_rational(e: &Expression, bindings: &Bindings) -> Canonical {
    match flatten(e, bindings) {
        None => Canonical::NotRational,
        Some(r) => {
            if r.num.is_zero() {
                return Canonical::Rational(RationalFn {
                    num: MultiPoly::zero(),
                    den: MultiPoly::one(),
                });
            }
            let lead = r.den.leading().cloned().expect("nonzero denominator");
            let inv = Const::one().div(&lead).expect("nonzero leading coeff");
            Canonical::Rational(RationalFn {
                num: r.num.scale(&inv),
                den: r.den.scale(&inv),
            })
        }
    }
}

impl Expression {
    /// See [`canonicalize_rational`].
    pub fn canonicalize(&self, bindings: &Bindings) -> Canonical {
        canonicalize_rational(self, bindings)
    }

    /// Exact constant value, when the expression canonicalizes to one.
    pub fn const_value(&self, bindings: &Bindings) -> Option<Const> {
        match self.canonicalize(bindings) {
            Canonical::Rational(r) => r.as_const(),
            Canonical::NotRational => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{differentiate, parse};

    fn canon(text: &str) -> Canonical {
        parse(text).unwrap().canonicalize(&Bindings::new())
    }

    #[test]
    fn telescoping_identity_is_proven_zero() {
        assert!(canon("(q^2-1)/(q-1) - (q+1)").is_proven_zero());
    }

    #[test]
    fn transcendental_is_not_rational() {
        assert_eq!(canon("exp(q)"), Canonical::NotRational);
    }

    #[test]
    fn nonzero_polynomial_stays_nonzero() {
        assert!(!canon("(q+1)^2 - q^2 - 2*q").is_proven_zero());
        assert!(canon("(q+1)^2 - q^2 - 2*q - 1").is_proven_zero());
    }

    #[test]
    fn parameters_are_symbolic_unless_bound() {
        // a^2 - a*a is zero with a symbolic
        assert!(canon("a^2 - a*a").is_proven_zero());
        let e = parse("a - 2").unwrap();
        assert!(!e.canonicalize(&Bindings::new()).is_proven_zero());
        let mut b = Bindings::new();
        b.insert("a".into(), Const::from_int(2));
        assert!(e.canonicalize(&b).is_proven_zero());
    }

    #[test]
    fn third_order_condition_for_inverse_q() {
        // E'''+E*E''+2*E'^2-2*E^2*E' vanishes exactly for E = 1/q and E = -3/q.
        for e_text in ["1/q", "-3/q"] {
            let e = parse(e_text).unwrap();
            let e1 = differentiate(&e);
            let e2 = differentiate(&e1);
            let e3 = differentiate(&e2);
            let expr = crate::expr::add(
                &crate::expr::add(&e3, &crate::expr::mul(&e, &e2)),
                &crate::expr::sub(
                    &crate::expr::scale(Const::from_int(2), &crate::expr::pow(&e1, 2)),
                    &crate::expr::scale(
                        Const::from_int(2),
                        &crate::expr::mul(&crate::expr::pow(&e, 2), &e1),
                    ),
                ),
            );
            assert!(
                expr.canonicalize(&Bindings::new()).is_proven_zero(),
                "E = {e_text}"
            );
        }
    }

    #[test]
    fn const_value_extracts_exact_constants() {
        let e = parse("(2*q)/(4*q)").unwrap();
        assert_eq!(e.const_value(&Bindings::new()), Some(Const::from_ratio(1, 2)));
    }
}
