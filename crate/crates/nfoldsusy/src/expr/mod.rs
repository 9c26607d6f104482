//! Symbolic expressions in one variable `q` with complex constants and
//! named real parameters.
//!
//! The node vocabulary is deliberately small: constants, parameter
//! references, the variable `q`, the four arithmetic operations, integer
//! powers and the functions `exp`, `sin`, `cos`, `log`. Differentiation is
//! closed over this vocabulary, which is all the operator algebra needs.
//!
//! Expressions are immutable values behind `Arc`, so they are cheap to
//! clone and safe to share across threads.

mod calculus;
mod eval;
mod parse;
mod rational;
mod zero;

pub use calculus::{diff_n, differentiate, integrate_elementary};
pub use eval::{evaluate, evaluate_scaled, Bindings, EvalError};
pub use parse::{parse, ParseError};
pub use rational::{canonicalize_rational, Canonical, Mono, MultiPoly, RationalFn};
pub use zero::{is_zero, PolicyEcho, SamplePolicy, ZeroError, ZeroVerdict};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;

/// An exact complex constant with rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Const {
    pub re: BigRational,
    pub im: BigRational,
}

impl Const {
    pub fn zero() -> Self {
        Const {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Const {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        Const {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Const {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Const {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn real(re: BigRational) -> Self {
        Const {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn imag(im: BigRational) -> Self {
        Const {
            re: BigRational::zero(),
            im,
        }
    }

    /// Exact conversion of a finite `f64` (every finite float is rational).
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Const::real)
    }

    pub fn from_c64(z: Complex64) -> Option<Self> {
        Some(Const {
            re: BigRational::from_float(z.re)?,
            im: BigRational::from_float(z.im)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Const {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn add(&self, other: &Const) -> Const {
        Const {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &Const) -> Const {
        Const {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn neg(&self) -> Const {
        Const {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn mul(&self, other: &Const) -> Const {
        Const {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    /// Exact complex division; `None` when `other` is zero.
    pub fn div(&self, other: &Const) -> Option<Const> {
        if other.is_zero() {
            return None;
        }
        let norm = &other.re * &other.re + &other.im * &other.im;
        Some(Const {
            re: (&self.re * &other.re + &self.im * &other.im) / &norm,
            im: (&self.im * &other.re - &self.re * &other.im) / &norm,
        })
    }

    pub fn powi(&self, n: i32) -> Option<Const> {
        if n == 0 {
            return Some(Const::one());
        }
        let mut base = if n > 0 {
            self.clone()
        } else {
            Const::one().div(self)?
        };
        let mut k = n.unsigned_abs();
        let mut acc = Const::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        Some(acc)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// True when the constant is a (real) integer; returns it if it fits.
    pub fn as_i32(&self) -> Option<i32> {
        if !self.im.is_zero() || !self.re.is_integer() {
            return None;
        }
        self.re.to_integer().to_i32()
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>, imag: bool) -> fmt::Result {
    let suffix = if imag { "i" } else { "" };
    if r.is_integer() {
        write!(f, "{}{}", r.numer(), suffix)
    } else {
        write!(f, "{}{}/{}", r.numer(), suffix, r.denom())
    }
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            fmt_rational(&self.re, f, false)
        } else if self.re.is_zero() {
            fmt_rational(&self.im, f, true)
        } else {
            write!(f, "(")?;
            fmt_rational(&self.re, f, false)?;
            if self.im.is_positive() {
                write!(f, "+")?;
                fmt_rational(&self.im, f, true)?;
            } else {
                write!(f, "-")?;
                fmt_rational(&self.im.abs(), f, true)?;
            }
            write!(f, ")")
        }
    }
}

/// The built-in transcendental functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Log,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "log" => Some(Func::Log),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Const),
    Param(Arc<str>),
    Var,
    Neg(Expression),
    Add(Expression, Expression),
    Sub(Expression, Expression),
    Mul(Expression, Expression),
    Div(Expression, Expression),
    /// Integer power with a constant exponent.
    Pow(Expression, i32),
    Func(Func, Expression),
}

/// A symbolic expression of `q`. Shared, immutable tree.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression(pub(crate) Arc<Expr>);

impl Expression {
    pub fn node(&self) -> &Expr {
        &self.0
    }

    pub fn constant(c: Const) -> Expression {
        Expression(Arc::new(Expr::Const(c)))
    }

    pub fn int(n: i64) -> Expression {
        Expression::constant(Const::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Expression {
        Expression::constant(Const::from_ratio(num, den))
    }

    pub fn zero() -> Expression {
        Expression::int(0)
    }

    pub fn one() -> Expression {
        Expression::int(1)
    }

    pub fn var() -> Expression {
        Expression(Arc::new(Expr::Var))
    }

    pub fn param(name: &str) -> Expression {
        Expression(Arc::new(Expr::Param(Arc::from(name))))
    }

    pub fn as_const(&self) -> Option<&Const> {
        match self.node() {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_literal_zero(&self) -> bool {
        matches!(self.node(), Expr::Const(c) if c.is_zero())
    }

    pub fn is_literal_one(&self) -> bool {
        matches!(self.node(), Expr::Const(c) if c.is_one())
    }

    /// Structural complex conjugate. Parameters are real by convention and
    /// `q` is conjugated as a real variable, so this is the pointwise
    /// conjugate on the real axis.
    pub fn conj(&self) -> Expression {
        match self.node() {
            Expr::Const(c) => Expression::constant(c.conj()),
            Expr::Param(_) | Expr::Var => self.clone(),
            Expr::Neg(a) => neg(&a.conj()),
            Expr::Add(a, b) => add(&a.conj(), &b.conj()),
            Expr::Sub(a, b) => sub(&a.conj(), &b.conj()),
            Expr::Mul(a, b) => mul(&a.conj(), &b.conj()),
            Expr::Div(a, b) => div(&a.conj(), &b.conj()),
            Expr::Pow(a, n) => pow(&a.conj(), *n),
            Expr::Func(func, a) => function(*func, &a.conj()),
        }
    }

    /// Replace every bound parameter by its constant value, rebuilding
    /// through the smart constructors so folding applies. Unbound
    /// parameters stay symbolic.
    pub fn substitute(&self, bindings: &Bindings) -> Expression {
        match self.node() {
            Expr::Const(_) | Expr::Var => self.clone(),
            Expr::Param(name) => match bindings.get(name.as_ref()) {
                Some(c) => Expression::constant(c.clone()),
                None => self.clone(),
            },
            Expr::Neg(a) => neg(&a.substitute(bindings)),
            Expr::Add(a, b) => add(&a.substitute(bindings), &b.substitute(bindings)),
            Expr::Sub(a, b) => sub(&a.substitute(bindings), &b.substitute(bindings)),
            Expr::Mul(a, b) => mul(&a.substitute(bindings), &b.substitute(bindings)),
            Expr::Div(a, b) => div(&a.substitute(bindings), &b.substitute(bindings)),
            Expr::Pow(a, n) => pow(&a.substitute(bindings), *n),
            Expr::Func(func, a) => function(*func, &a.substitute(bindings)),
        }
    }

    /// Names of every parameter referenced anywhere in the tree.
    pub fn parameters(&self) -> Vec<String> {
        let mut out = Vec::new();
        fn walk(e: &Expression, out: &mut Vec<String>) {
            match e.node() {
                Expr::Param(name) => {
                    if !out.iter().any(|n| n == name.as_ref()) {
                        out.push(name.to_string());
                    }
                }
                Expr::Const(_) | Expr::Var => {}
                Expr::Neg(a) | Expr::Pow(a, _) | Expr::Func(_, a) => walk(a, out),
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }
}

/// `a + b` with constant folding and zero elimination.
pub fn add(a: &Expression, b: &Expression) -> Expression {
    if a.is_literal_zero() {
        return b.clone();
    }
    if b.is_literal_zero() {
        return a.clone();
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        return Expression::constant(x.add(y));
    }
    Expression(Arc::new(Expr::Add(a.clone(), b.clone())))
}

/// `a - b` with constant folding and zero elimination.
pub fn sub(a: &Expression, b: &Expression) -> Expression {
    if b.is_literal_zero() {
        return a.clone();
    }
    if a.is_literal_zero() {
        return neg(b);
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        return Expression::constant(x.sub(y));
    }
    Expression(Arc::new(Expr::Sub(a.clone(), b.clone())))
}

pub fn neg(a: &Expression) -> Expression {
    if let Some(x) = a.as_const() {
        return Expression::constant(x.neg());
    }
    if let Expr::Neg(inner) = a.node() {
        return inner.clone();
    }
    Expression(Arc::new(Expr::Neg(a.clone())))
}

/// `a * b`; annihilates on literal zero, drops unit factors.
pub fn mul(a: &Expression, b: &Expression) -> Expression {
    if a.is_literal_zero() || b.is_literal_zero() {
        return Expression::zero();
    }
    if a.is_literal_one() {
        return b.clone();
    }
    if b.is_literal_one() {
        return a.clone();
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        return Expression::constant(x.mul(y));
    }
    Expression(Arc::new(Expr::Mul(a.clone(), b.clone())))
}

/// `a / b`. Division by a literal zero constant is kept symbolic and
/// surfaces as an evaluation error; folding it away would hide the bug.
pub fn div(a: &Expression, b: &Expression) -> Expression {
    if b.is_literal_one() {
        return a.clone();
    }
    if a.is_literal_zero() && !b.is_literal_zero() {
        return Expression::zero();
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        if let Some(z) = x.div(y) {
            return Expression::constant(z);
        }
    }
    Expression(Arc::new(Expr::Div(a.clone(), b.clone())))
}

pub fn pow(a: &Expression, n: i32) -> Expression {
    if n == 1 {
        return a.clone();
    }
    if n == 0 {
        return Expression::one();
    }
    if let Some(x) = a.as_const() {
        if let Some(z) = x.powi(n) {
            return Expression::constant(z);
        }
    }
    Expression(Arc::new(Expr::Pow(a.clone(), n)))
}

pub fn function(f: Func, a: &Expression) -> Expression {
    // exp(0) = 1, sin(0) = 0, cos(0) = 1 keep derivative trees tidy.
    if a.is_literal_zero() {
        match f {
            Func::Exp | Func::Cos => return Expression::one(),
            Func::Sin => return Expression::zero(),
            Func::Log => {}
        }
    }
    Expression(Arc::new(Expr::Func(f, a.clone())))
}

/// Convenience: constant-times-expression.
pub fn scale(c: Const, a: &Expression) -> Expression {
    mul(&Expression::constant(c), a)
}

// Precedence levels for printing: additive 0, multiplicative 1, unary 2,
// power 3, atom 4.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 0,
        Expr::Mul(..) | Expr::Div(..) => 1,
        Expr::Neg(..) => 2,
        Expr::Pow(..) => 3,
        Expr::Const(c) => {
            // Negative or compound constants print with structure.
            if c.re.is_negative() || (!c.re.is_zero() && !c.im.is_zero()) || c.im.is_negative() {
                2
            } else if !c.re.is_integer() || !c.im.is_integer() {
                1
            } else {
                4
            }
        }
        Expr::Param(_) | Expr::Var | Expr::Func(..) => 4,
    }
}

fn fmt_expr(e: &Expression, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
    let p = prec(e.node());
    let parens = p < min_prec;
    if parens {
        write!(f, "(")?;
    }
    match e.node() {
        Expr::Const(c) => write!(f, "{c}")?,
        Expr::Param(name) => write!(f, "{name}")?,
        Expr::Var => write!(f, "q")?,
        Expr::Neg(a) => {
            write!(f, "-")?;
            fmt_expr(a, f, 2)?;
        }
        Expr::Add(a, b) => {
            fmt_expr(a, f, 0)?;
            write!(f, " + ")?;
            fmt_expr(b, f, 1)?;
        }
        Expr::Sub(a, b) => {
            fmt_expr(a, f, 0)?;
            write!(f, " - ")?;
            fmt_expr(b, f, 1)?;
        }
        Expr::Mul(a, b) => {
            fmt_expr(a, f, 1)?;
            write!(f, "*")?;
            fmt_expr(b, f, 2)?;
        }
        Expr::Div(a, b) => {
            fmt_expr(a, f, 1)?;
            write!(f, "/")?;
            fmt_expr(b, f, 2)?;
        }
        Expr::Pow(a, n) => {
            fmt_expr(a, f, 4)?;
            if *n < 0 {
                write!(f, "^({n})")?;
            } else {
                write!(f, "^{n}")?;
            }
        }
        Expr::Func(func, a) => {
            write!(f, "{}(", func.name())?;
            fmt_expr(a, f, 0)?;
            write!(f, ")")?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(self, f, 0)
    }
}
