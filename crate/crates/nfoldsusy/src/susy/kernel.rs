//! Bases for the N-dimensional kernel of the supercharge.
//!
//! Conjugating away the `W` part, `e^{int W} A e^{-int W}` has factors
//! `d - kE`, so every kernel element is `e^{-int W}` times a kernel
//! element of the gauged product. Three shapes of `E` admit closed forms:
//!
//! * `E = 0`: the gauged operator is `d^N`, kernel `{q^j}`.
//! * `E = E0` constant: the factors commute, kernel `{e^{j E0 q}}`.
//! * `E = c/q`: the gauged operator is equidimensional; `q^m` maps to a
//!   multiple of `q^{m-N}` with factor `prod_j (m - j(1+c))`, so the
//!   kernel is `{q^{j(1+c)}}` (requires integer exponents to stay inside
//!   the expression language).
//!
//! Anything else falls back to Runge-Kutta integration of `A psi = 0`
//! across the supplied grid, seeded with canonical derivative data at the
//! first grid point.

use super::{build_supercharge, FamilySpec};
use crate::expr::{
    function, integrate_elementary, mul, neg, pow, scale, Bindings, Const, EvalError, Expression,
    Func,
};
use num_complex::Complex64;

/// How a kernel element is represented.
#[derive(Clone, Debug)]
pub enum KernelForm {
    /// Closed-form expression in `q`.
    Symbolic(Expression),
    /// Only grid values are available.
    Numeric,
}

/// One kernel basis element, with its values on the grid that was passed
/// to [`kernel_basis`] (empty when no grid was supplied).
#[derive(Clone, Debug)]
pub struct KernelEntry {
    pub form: KernelForm,
    pub values: Vec<Complex64>,
}

impl KernelEntry {
    pub fn is_symbolic(&self) -> bool {
        matches!(self.form, KernelForm::Symbolic(_))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum KernelError {
    #[error("no closed-form kernel for this family; supply a grid for numerical integration")]
    NeedsGrid,
    #[error("grid must contain at least two points for numerical integration")]
    GridTooSmall,
    #[error("kernel evaluation hit a pole: {0}")]
    Eval(#[from] EvalError),
}

/// Gauged kernel factors for the recognized shapes of `E`, or `None`.
fn gauged_kernel(spec: &FamilySpec, e_sub: &Expression) -> Option<Vec<Expression>> {
    let n = spec.n;
    let empty = Bindings::new();
    if e_sub.canonicalize(&empty).is_proven_zero() {
        return Some((0..n).map(|j| pow(&Expression::var(), j as i32)).collect());
    }
    if let Some(e0) = e_sub.const_value(&empty) {
        return Some(
            (0..n)
                .map(|j| {
                    let slope = e0.mul(&Const::from_int(j as i64));
                    function(Func::Exp, &scale(slope, &Expression::var()))
                })
                .collect(),
        );
    }
    // E = c/q detection: E * q reduces to the constant c.
    if let Some(c) = mul(e_sub, &Expression::var()).const_value(&empty) {
        let mut out = Vec::new();
        for j in 0..n {
            let m = Const::from_int(j as i64).mul(&Const::one().add(&c));
            let exponent = m.as_i32()?;
            out.push(pow(&Expression::var(), exponent));
        }
        return Some(out);
    }
    None
}

/// Compute a basis of `ker A`. Symbolic when `E` has a recognized shape
/// and `W` has an elementary antiderivative; otherwise integrates the ODE
/// over `grid`. Symbolic entries are also evaluated on `grid` when one is
/// supplied.
pub fn kernel_basis(spec: &FamilySpec, grid: &[f64]) -> Result<Vec<KernelEntry>, KernelError> {
    let w_sub = spec.w.substitute(&spec.bindings);
    let e_sub = spec.e.substitute(&spec.bindings);

    let symbolic = gauged_kernel(spec, &e_sub).and_then(|factors| {
        let int_w = integrate_elementary(&w_sub)?;
        let damping = function(Func::Exp, &neg(&int_w));
        Some(
            factors
                .into_iter()
                .map(|f| mul(&damping, &f))
                .collect::<Vec<_>>(),
        )
    });

    match symbolic {
        Some(exprs) => {
            let empty = Bindings::new();
            let mut out = Vec::new();
            for e in exprs {
                let mut values = Vec::with_capacity(grid.len());
                for &x in grid {
                    values.push(crate::expr::evaluate(
                        &e,
                        Complex64::new(x, 0.0),
                        &empty,
                    )?);
                }
                out.push(KernelEntry {
                    form: KernelForm::Symbolic(e),
                    values,
                });
            }
            Ok(out)
        }
        None => numeric_kernel(spec, grid),
    }
}

/// Integrate `A psi = 0` as a first-order system with RK4 across the grid,
/// one basis solution per canonical initial condition at the first point.
fn numeric_kernel(spec: &FamilySpec, grid: &[f64]) -> Result<Vec<KernelEntry>, KernelError> {
    if grid.is_empty() {
        return Err(KernelError::NeedsGrid);
    }
    if grid.len() < 2 {
        return Err(KernelError::GridTooSmall);
    }
    let n = spec.n as usize;
    let a = build_supercharge(spec);
    let coeffs = a.coeffs().to_vec();
    let eval_coeff = |k: usize, x: f64| -> Result<Complex64, EvalError> {
        crate::expr::evaluate(&coeffs[k], Complex64::new(x, 0.0), &spec.bindings)
    };

    // y' = f(x, y): companion form, highest derivative solved for.
    let derivative = |x: f64, y: &[Complex64]| -> Result<Vec<Complex64>, EvalError> {
        let mut dy = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n - 1 {
            dy[i] = y[i + 1];
        }
        let lead = eval_coeff(n, x)?;
        let mut top = Complex64::new(0.0, 0.0);
        for k in 0..n {
            top -= eval_coeff(k, x)? * y[k];
        }
        dy[n - 1] = top / lead;
        Ok(dy)
    };

    let substeps = 8usize;
    let mut entries = Vec::with_capacity(n);
    for j in 0..n {
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        y[j] = Complex64::new(1.0, 0.0);
        let mut values = Vec::with_capacity(grid.len());
        values.push(y[0]);
        for w in grid.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let h = (x1 - x0) / substeps as f64;
            let mut x = x0;
            for _ in 0..substeps {
                let k1 = derivative(x, &y)?;
                let mid1: Vec<_> = y.iter().zip(&k1).map(|(a, b)| a + 0.5 * h * b).collect();
                let k2 = derivative(x + 0.5 * h, &mid1)?;
                let mid2: Vec<_> = y.iter().zip(&k2).map(|(a, b)| a + 0.5 * h * b).collect();
                let k3 = derivative(x + 0.5 * h, &mid2)?;
                let end: Vec<_> = y.iter().zip(&k3).map(|(a, b)| a + h * b).collect();
                let k4 = derivative(x + h, &end)?;
                for i in 0..n {
                    y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
                x += h;
            }
            values.push(y[0]);
        }
        entries.push(KernelEntry {
            form: KernelForm::Numeric,
            values,
        });
    }
    Ok(entries)
}
