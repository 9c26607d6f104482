//! Numerical evaluation of expressions at complex points.

use super::{Const, Expr, Expression};
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

/// Parameter environment: name -> exact constant.
pub type Bindings = BTreeMap<String, Const>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("unbound parameter '{0}'")]
    UnboundParameter(String),
    #[error("pole or singular value in subexpression `{0}`")]
    Pole(String),
}

/// Evaluate `e` at `q0` with all parameters taken from `bindings`.
pub fn evaluate(e: &Expression, q0: Complex64, bindings: &Bindings) -> Result<Complex64, EvalError> {
    Ok(eval_inner(e, q0, bindings)?.0)
}

/// Evaluate and also report a cancellation scale: an upper envelope for the
/// magnitudes that were combined to produce the value. `value` being tiny
/// while `scale` is large signals heavy cancellation, which is what the
/// sampled zero test normalizes against.
pub fn evaluate_scaled(
    e: &Expression,
    q0: Complex64,
    bindings: &Bindings,
) -> Result<(Complex64, f64), EvalError> {
    eval_inner(e, q0, bindings)
}

fn eval_inner(
    e: &Expression,
    q0: Complex64,
    bindings: &Bindings,
) -> Result<(Complex64, f64), EvalError> {
    match e.node() {
        Expr::Const(c) => {
            let v = c.to_c64();
            Ok((v, v.norm()))
        }
        Expr::Param(name) => {
            let c = bindings
                .get(name.as_ref())
                .ok_or_else(|| EvalError::UnboundParameter(name.to_string()))?;
            let v = c.to_c64();
            Ok((v, v.norm()))
        }
        Expr::Var => Ok((q0, q0.norm())),
        Expr::Neg(a) => {
            let (v, s) = eval_inner(a, q0, bindings)?;
            Ok((-v, s))
        }
        Expr::Add(a, b) => {
            let (va, sa) = eval_inner(a, q0, bindings)?;
            let (vb, sb) = eval_inner(b, q0, bindings)?;
            Ok((va + vb, sa + sb))
        }
        Expr::Sub(a, b) => {
            let (va, sa) = eval_inner(a, q0, bindings)?;
            let (vb, sb) = eval_inner(b, q0, bindings)?;
            Ok((va - vb, sa + sb))
        }
        Expr::Mul(a, b) => {
            let (va, sa) = eval_inner(a, q0, bindings)?;
            let (vb, sb) = eval_inner(b, q0, bindings)?;
            Ok((va * vb, sa * sb))
        }
        Expr::Div(a, b) => {
            let (va, sa) = eval_inner(a, q0, bindings)?;
            let (vb, _) = eval_inner(b, q0, bindings)?;
            if vb.norm() < f64::MIN_POSITIVE {
                return Err(EvalError::Pole(b.to_string()));
            }
            Ok((va / vb, sa / vb.norm()))
        }
        Expr::Pow(a, n) => {
            let (va, sa) = eval_inner(a, q0, bindings)?;
            if *n < 0 && va.norm() < f64::MIN_POSITIVE {
                return Err(EvalError::Pole(e.to_string()));
            }
            let v = va.powi(*n);
            let s = if *n >= 0 {
                sa.powi(*n)
            } else {
                v.norm().max(1.0)
            };
            Ok((v, s))
        }
        Expr::Func(func, a) => {
            let (va, _) = eval_inner(a, q0, bindings)?;
            let v = match func {
                super::Func::Exp => va.exp(),
                super::Func::Sin => va.sin(),
                super::Func::Cos => va.cos(),
                super::Func::Log => {
                    if va.norm() < f64::MIN_POSITIVE {
                        return Err(EvalError::Pole(e.to_string()));
                    }
                    va.ln()
                }
            };
            Ok((v, v.norm().max(1.0)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn basic_values() {
        let e = parse("q^2+1").unwrap();
        let v = evaluate(&e, Complex64::new(2.0, 0.0), &Bindings::new()).unwrap();
        assert!((v.re - 5.0).abs() < 1e-15 && v.im.abs() < 1e-15);
    }

    #[test]
    fn pole_is_reported() {
        let e = parse("1/q").unwrap();
        let err = evaluate(&e, Complex64::new(0.0, 0.0), &Bindings::new()).unwrap_err();
        assert!(matches!(err, EvalError::Pole(_)));
    }

    #[test]
    fn unbound_parameter_is_an_error() {
        let e = parse("C1*q").unwrap();
        let err = evaluate(&e, Complex64::new(1.0, 0.0), &Bindings::new()).unwrap_err();
        assert_eq!(err, EvalError::UnboundParameter("C1".into()));
    }

    #[test]
    fn euler_identity_at_floating_pi() {
        // exp(c*q) with c = 1i at q = pi gives -1 to double precision.
        let e = parse("exp(c*q)").unwrap();
        let mut b = Bindings::new();
        b.insert("c".into(), Const::i());
        let v = evaluate(&e, Complex64::new(std::f64::consts::PI, 0.0), &b).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }
}
