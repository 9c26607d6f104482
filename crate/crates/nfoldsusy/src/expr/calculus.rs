//! Differentiation and a small pattern-based antiderivative helper.

use super::{add, div, function, mul, neg, pow, scale, sub, Const, Expr, Expression, Func};

/// d/dq by the standard rules; parameters are treated as constants.
pub fn differentiate(e: &Expression) -> Expression {
    match e.node() {
        Expr::Const(_) | Expr::Param(_) => Expression::zero(),
        Expr::Var => Expression::one(),
        Expr::Neg(a) => neg(&differentiate(a)),
        Expr::Add(a, b) => add(&differentiate(a), &differentiate(b)),
        Expr::Sub(a, b) => sub(&differentiate(a), &differentiate(b)),
        Expr::Mul(a, b) => add(
            &mul(&differentiate(a), b),
            &mul(a, &differentiate(b)),
        ),
        Expr::Div(a, b) => {
            // (a/b)' = a'/b - a b'/b^2
            let da = differentiate(a);
            let db = differentiate(b);
            sub(&div(&da, b), &div(&mul(a, &db), &pow(b, 2)))
        }
        Expr::Pow(a, n) => {
            // (a^n)' = n a^(n-1) a'
            let da = differentiate(a);
            mul(
                &scale(Const::from_int(*n as i64), &pow(a, n - 1)),
                &da,
            )
        }
        Expr::Func(func, a) => {
            let da = differentiate(a);
            let outer = match func {
                Func::Exp => function(Func::Exp, a),
                Func::Sin => function(Func::Cos, a),
                Func::Cos => neg(&function(Func::Sin, a)),
                Func::Log => div(&Expression::one(), a),
            };
            mul(&outer, &da)
        }
    }
}

/// n-th derivative.
pub fn diff_n(e: &Expression, n: u32) -> Expression {
    let mut out = e.clone();
    for _ in 0..n {
        out = differentiate(&out);
    }
    out
}

/// Best-effort elementary antiderivative for the prepotential shapes the
/// presets produce: linear combinations of `c*q^n` (any integer n),
/// `c*exp(a*q)`, `c*sin(a*q)` and `c*cos(a*q)` with constant `a`, `c`.
/// Returns `None` when a term falls outside these patterns.
pub fn integrate_elementary(e: &Expression) -> Option<Expression> {
    match e.node() {
        Expr::Add(a, b) => Some(add(&integrate_elementary(a)?, &integrate_elementary(b)?)),
        Expr::Sub(a, b) => Some(sub(&integrate_elementary(a)?, &integrate_elementary(b)?)),
        Expr::Neg(a) => Some(neg(&integrate_elementary(a)?)),
        _ => {
            let (c, core) = split_const_factor(e);
            let anti = integrate_atom(&core)?;
            Some(scale(c, &anti))
        }
    }
}

/// Split `e` into (constant factor, remaining q-dependent core).
fn split_const_factor(e: &Expression) -> (Const, Expression) {
    match e.node() {
        Expr::Const(c) => (c.clone(), Expression::one()),
        Expr::Neg(a) => {
            let (c, core) = split_const_factor(a);
            (c.neg(), core)
        }
        Expr::Mul(a, b) => {
            let (ca, core_a) = split_const_factor(a);
            let (cb, core_b) = split_const_factor(b);
            (ca.mul(&cb), mul(&core_a, &core_b))
        }
        Expr::Div(a, b) => {
            if let Some(cb) = b.as_const() {
                if let Some(inv) = Const::one().div(cb) {
                    let (ca, core_a) = split_const_factor(a);
                    return (ca.mul(&inv), core_a);
                }
            }
            (Const::one(), e.clone())
        }
        _ => (Const::one(), e.clone()),
    }
}

/// `a*q` recognition: returns the constant slope when `e = c*q` or `q`.
fn linear_in_q(e: &Expression) -> Option<Const> {
    match e.node() {
        Expr::Var => Some(Const::one()),
        Expr::Mul(a, b) => match (a.as_const(), b.node()) {
            (Some(c), Expr::Var) => Some(c.clone()),
            _ => match (a.node(), b.as_const()) {
                (Expr::Var, Some(c)) => Some(c.clone()),
                _ => None,
            },
        },
        Expr::Neg(a) => Some(linear_in_q(a)?.neg()),
        _ => None,
    }
}

fn integrate_atom(e: &Expression) -> Option<Expression> {
    let q = Expression::var();
    match e.node() {
        Expr::Const(c) => Some(scale(c.clone(), &q)),
        Expr::Var => Some(scale(Const::from_ratio(1, 2), &pow(&q, 2))),
        Expr::Pow(base, n) => {
            if !matches!(base.node(), Expr::Var) {
                return None;
            }
            if *n == -1 {
                return Some(function(Func::Log, &q));
            }
            let m = n + 1;
            Some(scale(
                Const::from_ratio(1, m as i64),
                &pow(&q, m),
            ))
        }
        Expr::Func(Func::Exp, arg) => {
            let a = linear_in_q(arg)?;
            let inv = Const::one().div(&a)?;
            Some(scale(inv, &function(Func::Exp, arg)))
        }
        Expr::Func(Func::Sin, arg) => {
            let a = linear_in_q(arg)?;
            let inv = Const::one().div(&a)?;
            Some(scale(inv.neg(), &function(Func::Cos, arg)))
        }
        Expr::Func(Func::Cos, arg) => {
            let a = linear_in_q(arg)?;
            let inv = Const::one().div(&a)?;
            Some(scale(inv, &function(Func::Sin, arg)))
        }
        Expr::Div(a, b) => {
            // c / q^n handled via the power form.
            if let Expr::Var = b.node() {
                if a.as_const().is_some() {
                    let (c, _) = split_const_factor(a);
                    return Some(scale(c, &function(Func::Log, &q)));
                }
            }
            if let Expr::Pow(base, n) = b.node() {
                if matches!(base.node(), Expr::Var) && a.as_const().is_some() {
                    let (c, _) = split_const_factor(a);
                    return integrate_atom(&pow(&q, -n)).map(|anti| scale(c, &anti));
                }
            }
            None
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{evaluate, parse, Bindings};
    use num_complex::Complex64;

    fn d(text: &str) -> Expression {
        differentiate(&parse(text).unwrap())
    }

    fn close(e: &Expression, q: f64, want: f64) {
        let v = evaluate(e, Complex64::new(q, 0.0), &Bindings::new()).unwrap();
        assert!(
            (v - Complex64::new(want, 0.0)).norm() < 1e-12,
            "{e} at {q}: got {v}, want {want}"
        );
    }

    #[test]
    fn derivative_of_square() {
        close(&d("q^2"), 3.0, 6.0);
    }

    #[test]
    fn derivative_of_exponential_with_parameter() {
        let e = parse("exp(E0*q)").unwrap();
        let de = differentiate(&e);
        let mut b = Bindings::new();
        b.insert("E0".into(), Const::from_int(2));
        let v = evaluate(&de, Complex64::new(0.5, 0.0), &b).unwrap();
        assert!((v.re - 2.0 * (1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn derivative_of_reciprocal() {
        close(&d("1/q"), 2.0, -0.25);
    }

    #[test]
    fn antiderivatives_match_derivatives() {
        for text in ["q^2", "3/q", "exp(2*q)", "sin(3*q)", "cos(q)", "q^3 - 2*q + 5"] {
            let e = parse(text).unwrap();
            let anti = integrate_elementary(&e).unwrap_or_else(|| panic!("no closed form: {text}"));
            let back = differentiate(&anti);
            for q in [0.7, 1.3, 2.9] {
                let a = evaluate(&e, Complex64::new(q, 0.0), &Bindings::new()).unwrap();
                let b = evaluate(&back, Complex64::new(q, 0.0), &Bindings::new()).unwrap();
                assert!((a - b).norm() < 1e-10, "{text} at {q}");
            }
        }
        assert!(integrate_elementary(&parse("exp(q^2)").unwrap()).is_none());
    }
}
