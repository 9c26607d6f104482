//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for the
//! eigenvalues, inverse iteration for the eigenvectors.

/// Symmetric tridiagonal matrix: `diag` has length n, `off` length n-1.
#[derive(Clone, Debug)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// y = T x.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] = self.diag[i] * x[i];
            if i > 0 {
                y[i] += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                y[i] += self.off[i] * x[i + 1];
            }
        }
        y
    }

    /// Number of eigenvalues strictly below `x`, by the Sturm sequence of
    /// the LDL^T pivots of `T - xI`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0usize;
        let mut d = 1.0f64;
        for i in 0..self.n() {
            let off2 = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1]
            };
            d = self.diag[i] - x - off2 / d;
            if d == 0.0 {
                // zero pivot: nudge so the recurrence continues; counted as
                // negative to keep the count monotone
                d = -f64::MIN_POSITIVE.sqrt();
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Solve `(T - sigma I) x = b` by Gaussian elimination with partial
    /// pivoting. Pivoting introduces a second superdiagonal of fill-in.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut d: Vec<f64> = self.diag.iter().map(|&v| v - sigma).collect();
        let mut u1 = vec![0.0f64; n]; // first superdiagonal, u1[i] = (i, i+1)
        let mut u2 = vec![0.0f64; n]; // second superdiagonal, u2[i] = (i, i+2)
        for i in 0..n - 1 {
            u1[i] = self.off[i];
        }
        let mut x = b.to_vec();
        for i in 0..n - 1 {
            // entry (i+1, i) is untouched by earlier steps
            let mut sub = self.off[i];
            if sub.abs() > d[i].abs() {
                std::mem::swap(&mut d[i], &mut sub);
                std::mem::swap(&mut u1[i], &mut d[i + 1]);
                std::mem::swap(&mut u2[i], &mut u1[i + 1]);
                x.swap(i, i + 1);
            }
            let pivot = if d[i] != 0.0 { d[i] } else { tiny };
            let m = sub / pivot;
            d[i + 1] -= m * u1[i];
            u1[i + 1] -= m * u2[i];
            x[i + 1] -= m * x[i];
        }
        let mut out = vec![0.0f64; n];
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                s -= u1[i] * out[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * out[i + 2];
            }
            let pivot = if d[i] != 0.0 { d[i] } else { tiny };
            out[i] = s / pivot;
        }
        out
    }
}

/// The `k` smallest eigenpairs of a symmetric tridiagonal matrix.
pub fn eigen_low(t: &Tridiagonal, k: usize) -> Vec<(f64, Vec<f64>)> {
    assert!(k <= t.n(), "requested more eigenpairs than the dimension");
    let (mut lo0, mut hi0) = t.gershgorin();
    if lo0 == hi0 {
        lo0 -= 1.0;
        hi0 += 1.0;
    }
    let scale = hi0.abs().max(lo0.abs()).max(1.0);
    let mut values = Vec::with_capacity(k);
    for j in 0..k {
        // lambda_j = inf { x : count_below(x) >= j + 1 }
        let (mut lo, mut hi) = (lo0, hi0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if t.count_below(mid) >= j + 1 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * scale {
                break;
            }
        }
        values.push(0.5 * (lo + hi));
    }

    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(k);
    for (j, &lambda) in values.iter().enumerate() {
        let sigma = lambda + 1e-11 * scale;
        // deterministic pseudo-random start vector
        let n = t.n();
        let mut v: Vec<f64> = (0..n)
            .map(|i| {
                let s = (i as f64 + 1.0) * 12.9898 + (j as f64 + 1.0) * 78.233;
                (s.sin() * 43758.5453).fract()
            })
            .collect();
        normalize(&mut v);
        for _ in 0..6 {
            let mut w = t.solve_shifted(sigma, &v);
            // re-orthogonalize against earlier vectors in the same cluster
            for (mu, u) in &pairs {
                if (mu - lambda).abs() < 1e-6 * scale {
                    let dot: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
                    for (wi, ui) in w.iter_mut().zip(u) {
                        *wi -= dot * ui;
                    }
                }
            }
            normalize(&mut w);
            v = w;
        }
        // Rayleigh quotient refines the bisected value
        let tv = t.apply(&v);
        let rq: f64 = v.iter().zip(&tv).map(|(a, b)| a * b).sum();
        pairs.push((rq, v));
    }
    pairs
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_eigenvalues() {
        let t = Tridiagonal {
            diag: vec![3.0, 1.0, 2.0],
            off: vec![0.0, 0.0],
        };
        let pairs = eigen_low(&t, 2);
        assert!((pairs[0].0 - 1.0).abs() < 1e-10);
        assert!((pairs[1].0 - 2.0).abs() < 1e-10);
    }

    #[test]
    fn known_toeplitz_spectrum() {
        // diag 2, off -1, size n: eigenvalues 2 - 2cos(pi j/(n+1))
        let n = 50;
        let t = Tridiagonal {
            diag: vec![2.0; n],
            off: vec![-1.0; n - 1],
        };
        let pairs = eigen_low(&t, 4);
        for (j, (lambda, v)) in pairs.iter().enumerate() {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (j as f64 + 1.0) / (n as f64 + 1.0)).cos();
            assert!((lambda - exact).abs() < 1e-10, "lambda_{j}");
            // residual ||Tv - lambda v||
            let tv = t.apply(v);
            let res: f64 = tv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - lambda * b).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-8, "residual {res} at level {j}");
        }
    }

    #[test]
    fn degenerate_pair_gets_orthogonal_vectors() {
        let t = Tridiagonal {
            diag: vec![1.0, 1.0, 5.0],
            off: vec![0.0, 0.0],
        };
        let pairs = eigen_low(&t, 2);
        let dot: f64 = pairs[0].1.iter().zip(&pairs[1].1).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-8, "dot = {dot}");
    }
}
