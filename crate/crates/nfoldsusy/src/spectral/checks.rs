//! Grid-level verification of the operator identities' spectral
//! consequences.

use super::{discretize, GridProblem, SpectralError};
use crate::expr::{evaluate, scale, sub, Const, Expression};
use crate::susy::{
    build_hamiltonians, extract_mother_polynomial, kernel_basis, FamilySpec, KernelForm,
};
use num_complex::Complex64;

/// Thresholds and sizes for the spectral checks. The tolerances are
/// per-factor and scale internally with the fold number as `tol * 2^N`,
/// since each first-difference application amplifies the O(h^2)
/// discretization error.
#[derive(Clone, Debug)]
pub struct SpectralOptions {
    /// How many low-lying levels to examine.
    pub levels: usize,
    /// Relative `|A psi| / |psi|` below which a level counts as a kernel
    /// state.
    pub kernel_tol: f64,
    /// Relative pairing residual above which a row is marked as exceeding
    /// the report-fail threshold.
    pub pair_tol: f64,
    /// Seed forwarded to the symbolic extraction inside the mother check.
    pub seed: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            levels: 4,
            // Measured on n = 2000 grids: true kernel states show ratios
            // 1e-5..9e-4 (the O(h^2) floor times derivative amplification),
            // genuine non-kernel levels sit at O(1). 1e-3 * 2^N splits the
            // two populations by three orders of magnitude on each side.
            kernel_tol: 1e-3,
            pair_tol: 1e-2,
            seed: 0x5eed,
        }
    }
}

/// One row of the isospectrality table.
#[derive(Clone, Debug)]
pub struct PairingRow {
    pub level: usize,
    pub energy: f64,
    /// `|A psi| / |psi|` over the trimmed window.
    pub ratio: f64,
    pub kernel_flagged: bool,
    /// `|(H+ - E) A psi| / |A psi|`; absent for kernel-flagged rows.
    pub residual: Option<f64>,
    /// Residual exceeded the report-fail threshold (reported, not raised).
    pub exceeded: bool,
}

/// One row of the polynomial-identity table.
#[derive(Clone, Debug)]
pub struct MotherRow {
    pub level: usize,
    pub energy: f64,
    /// Rayleigh value of `A^T A / 2` on the eigenstate.
    pub rayleigh: f64,
    /// The extracted polynomial evaluated at the energy.
    pub poly_value: f64,
    pub difference: f64,
}

/// Assembled spectral diagnostics for one model and grid.
#[derive(Clone, Debug, Default)]
pub struct SpectralReport {
    pub minus_eigenvalues: Vec<f64>,
    pub plus_eigenvalues: Vec<f64>,
    pub pairing: Vec<PairingRow>,
    pub mother: Vec<MotherRow>,
    pub kernel_flags: usize,
    pub normalizable: Vec<bool>,
}

/// Evaluate an expression on the grid, requiring real values.
fn sample_real(
    e: &Expression,
    problem: &GridProblem,
) -> Result<Vec<f64>, SpectralError> {
    super::sample_potential(e, problem)
}

/// Apply the factor chain of the supercharge to a grid vector with central
/// first differences (Dirichlet ghosts at the walls). The caller trims the
/// contaminated margins before taking norms.
pub fn apply_factor_chain(
    spec: &FamilySpec,
    problem: &GridProblem,
    psi: &[f64],
) -> Result<Vec<f64>, SpectralError> {
    let h = problem.step();
    let n = psi.len();
    let mut u = psi.to_vec();
    for k in 0..spec.n {
        let wk = sub(&spec.w, &scale(Const::from_int(k as i64), &spec.e));
        let w_vals = sample_real(&wk, problem)?;
        let mut next = vec![0.0f64; n];
        for i in 0..n {
            let left = if i > 0 { u[i - 1] } else { 0.0 };
            let right = if i + 1 < n { u[i + 1] } else { 0.0 };
            next[i] = (right - left) / (2.0 * h) + w_vals[i] * u[i];
        }
        u = next;
    }
    Ok(u)
}

fn trimmed_norm(v: &[f64], margin: usize) -> f64 {
    let n = v.len();
    if 2 * margin >= n {
        return 0.0;
    }
    v[margin..n - margin].iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Isospectrality check: map each low `H-` eigenstate through the factor
/// chain and measure how well it solves the `H+` eigenproblem at the same
/// energy. States annihilated by the chain are kernel-flagged instead.
pub fn pairing_check(
    spec: &FamilySpec,
    problem: &GridProblem,
    opts: &SpectralOptions,
) -> Result<SpectralReport, SpectralError> {
    let (h_plus, h_minus) = build_hamiltonians(spec);
    let t_minus = discretize(&h_minus, problem)?;
    let t_plus = discretize(&h_plus, problem)?;
    if opts.levels > problem.n {
        return Err(SpectralError::TooManyLevels {
            k: opts.levels,
            n: problem.n,
        });
    }
    let minus_pairs = super::eigen_low(&t_minus, opts.levels);
    let plus_pairs = super::eigen_low(&t_plus, opts.levels);

    let margin = spec.n as usize + 1;
    let scale_n = (1u64 << spec.n.min(40)) as f64;
    let kernel_threshold = opts.kernel_tol * scale_n;
    let pair_threshold = opts.pair_tol * scale_n;

    let mut report = SpectralReport {
        minus_eigenvalues: minus_pairs.iter().map(|(e, _)| *e).collect(),
        plus_eigenvalues: plus_pairs.iter().map(|(e, _)| *e).collect(),
        ..SpectralReport::default()
    };

    for (level, (energy, psi)) in minus_pairs.iter().enumerate() {
        let a_psi = apply_factor_chain(spec, problem, psi)?;
        let psi_norm = trimmed_norm(psi, margin);
        let a_norm = trimmed_norm(&a_psi, margin);
        let ratio = if psi_norm > 0.0 { a_norm / psi_norm } else { 0.0 };
        if ratio < kernel_threshold {
            report.kernel_flags += 1;
            report.pairing.push(PairingRow {
                level,
                energy: *energy,
                ratio,
                kernel_flagged: true,
                residual: None,
                exceeded: false,
            });
            continue;
        }
        let mapped = t_plus.apply(&a_psi);
        let defect: Vec<f64> = mapped
            .iter()
            .zip(&a_psi)
            .map(|(m, a)| m - energy * a)
            .collect();
        let residual = trimmed_norm(&defect, margin) / a_norm.max(f64::MIN_POSITIVE);
        report.pairing.push(PairingRow {
            level,
            energy: *energy,
            ratio,
            kernel_flagged: false,
            residual: Some(residual),
            exceeded: residual > pair_threshold,
        });
    }
    Ok(report)
}

/// Polynomial-identity check: the Rayleigh value of `A^T A / 2` on each
/// low eigenstate against the extracted polynomial at its energy.
pub fn mother_spectral_check(
    spec: &FamilySpec,
    problem: &GridProblem,
    opts: &SpectralOptions,
) -> Result<Vec<MotherRow>, SpectralError> {
    let mother = extract_mother_polynomial(spec, opts.seed)
        .map_err(|e| SpectralError::Mother(e.to_string()))?;
    let (_, h_minus) = build_hamiltonians(spec);
    let t_minus = discretize(&h_minus, problem)?;
    if opts.levels > problem.n {
        return Err(SpectralError::TooManyLevels {
            k: opts.levels,
            n: problem.n,
        });
    }
    let pairs = super::eigen_low(&t_minus, opts.levels);
    let margin = spec.n as usize + 1;
    let mut rows = Vec::with_capacity(pairs.len());
    for (level, (energy, psi)) in pairs.iter().enumerate() {
        let a_psi = apply_factor_chain(spec, problem, psi)?;
        let psi_norm = trimmed_norm(psi, margin);
        let a_norm = trimmed_norm(&a_psi, margin);
        // <psi | A^T A psi> / 2 <psi|psi> = |A psi|^2 / 2 |psi|^2
        let rayleigh = 0.5 * (a_norm / psi_norm.max(f64::MIN_POSITIVE)).powi(2);
        let poly_value = mother.eval(Complex64::new(*energy, 0.0)).re;
        rows.push(MotherRow {
            level,
            energy: *energy,
            rayleigh,
            poly_value,
            difference: rayleigh - poly_value,
        });
    }
    Ok(rows)
}

/// Divergent-tail heuristic on one window: true when the boundary
/// magnitude clearly exceeds the interior maximum (magnitudes compared
/// after dropping the outer tenth of the window from the "interior")
/// AND the growth toward that boundary is sustained or accelerating.
/// The factor of two keeps functions that merely peak at the window edge
/// — the periodic family's kernel over one period — out of the flag; the
/// growth test keeps out bounded profiles that rise toward the edge but
/// level off, like the half-line states exp(-q^4/4) on [0.2, 12] whose
/// maximum sits at the pole-side boundary.
fn divergent_on_window(values: &[Complex64]) -> bool {
    let n = values.len();
    if n < 8 {
        return false;
    }
    let mags: Vec<f64> = values.iter().map(|z| z.norm()).collect();
    let skirt = (n / 10).max(2);
    let interior = mags[skirt..n - skirt]
        .iter()
        .fold(0.0f64, |a, &b| a.max(b));
    let edge_divergent = |edge: f64, near: f64, far: f64| -> bool {
        if !edge.is_finite() {
            return true;
        }
        if edge <= 2.0 * interior {
            return false;
        }
        // Compare the growth factor over the outermost skirt against the
        // one just inside it; decelerating growth points at a finite limit.
        edge / near >= near / far
    };
    edge_divergent(mags[0], mags[skirt], mags[2 * skirt.min((n - 1) / 2)])
        || edge_divergent(
            mags[n - 1],
            mags[n - 1 - skirt],
            mags[n - 1 - 2 * skirt.min((n - 1) / 2)],
        )
}

/// Normalizability flags for the kernel basis. The divergent-tail
/// heuristic runs on the given window and again on a window of twice the
/// width; a state is flagged non-normalizable when either fires. The
/// doubled window is essential for tails that only take off outside the
/// box (the broken quartic member is Gaussian-looking on [-10, 10] and
/// explodes beyond q = 15). Numeric entries cannot be re-based onto the
/// doubled window, so their single-window verdict stands.
pub fn normalizability_probe(
    spec: &FamilySpec,
    problem: &GridProblem,
) -> Result<Vec<bool>, SpectralError> {
    let grid = problem.points();
    let entries = kernel_basis(spec, &grid)?;
    let doubled_grid = problem.doubled().points();
    let mut flags = Vec::with_capacity(entries.len());
    for entry in &entries {
        let mut divergent = divergent_on_window(&entry.values);
        if let KernelForm::Symbolic(expr) = &entry.form {
            if !divergent {
                let mut wide = Vec::with_capacity(doubled_grid.len());
                for &x in &doubled_grid {
                    wide.push(
                        evaluate(expr, Complex64::new(x, 0.0), &problem.bindings)
                            .unwrap_or(Complex64::new(f64::INFINITY, 0.0)),
                    );
                }
                divergent = divergent_on_window(&wide);
            }
        }
        flags.push(!divergent);
    }
    Ok(flags)
}
