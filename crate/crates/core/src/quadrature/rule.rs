//! Gauss–Jacobi rules from the tridiagonal eigenproblem, Newton-polished.

use crate::error::{domain, Error, Result};
use crate::gammafn::ln_gamma_norm;
use crate::orthopoly::{jacobi_eval_all, jacobi_eval_with_derivative, JacobiIndex};

const MAX_QL_ITERATIONS: usize = 60;

/// Nodes and weights of the n-point Gauss rule for ω^{α,β}.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub n: usize,
    pub idx: JacobiIndex,
    /// Strictly increasing zeros of J_n^{α,β}.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn alpha(&self) -> f64 {
        self.idx.alpha()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Orthonormal Jacobi matrix: diagonal and off-diagonal entries.
fn jacobi_matrix(n: usize, idx: JacobiIndex) -> (Vec<f64>, Vec<f64>) {
    let (a, b) = (idx.alpha(), idx.beta());
    let s = a + b;
    let mut diag = Vec::with_capacity(n);
    let mut off = vec![0.0; n];
    for k in 0..n {
        let kf = k as f64;
        diag.push(if k == 0 {
            (b - a) / (s + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + s) * (2.0 * kf + s + 2.0))
        });
    }
    for k in 1..n {
        let kf = k as f64;
        let t = 2.0 * kf + s;
        let bk = if k == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + s) * (2.0 + s) * (3.0 + s))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + s) / (t * t * (t + 1.0) * (t - 1.0))
        };
        off[k - 1] = bk.sqrt();
    }
    (diag, off)
}

/// Implicit QL on a symmetric tridiagonal matrix, tracking the first row of the
/// eigenvector matrix. `e[i]` couples rows i and i+1.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::Numerical(format!(
                    "tridiagonal eigensolver did not converge for eigenvalue {l} of {n}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// n-point Gauss rule for the Jacobi weight (1-x)^α (1+x)^β.
pub fn gauss_jacobi_rule(n: usize, idx: JacobiIndex) -> Result<QuadratureRule> {
    if n < 1 {
        return domain("a Gauss rule needs n >= 1");
    }
    let (mut d, mut e) = jacobi_matrix(n, idx);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    tridiagonal_ql(&mut d, &mut e, &mut z)?;
    let mut nodes = d;
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));

    // Newton polish on J_n, then the Christoffel numbers
    // λ_i = 1 / Σ_{k<n} J_k(x_i)²/γ_k, which stay accurate next to ±1.
    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let (v, dv) = jacobi_eval_with_derivative(n, idx, *x);
            let step = v / dv;
            if !step.is_finite() {
                break;
            }
            *x -= step;
            if step.abs() <= 2.0 * f64::EPSILON * x.abs().max(1e-3) {
                break;
            }
        }
    }
    let inv_norms: Vec<f64> = (0..n as u64).map(|k| (-ln_gamma_norm(k, idx)).exp()).collect();
    let mut weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let p = jacobi_eval_all(n - 1, idx, x);
            1.0 / p.iter().zip(&inv_norms).map(|(v, g)| v * v * g).sum::<f64>()
        })
        .collect();

    if idx.is_symmetric() {
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let x = 0.5 * (nodes[j] - nodes[i]);
            nodes[i] = -x;
            nodes[j] = x;
            let w = 0.5 * (weights[i] + weights[j]);
            weights[i] = w;
            weights[j] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
    }
    if nodes.windows(2).any(|w| !(w[0] < w[1])) || weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::Numerical(format!("Gauss rule of order {n} for {idx:?} is degenerate")));
    }
    Ok(QuadratureRule { n, idx, nodes, weights })
}

/// n-point Gegenbauer–Gauss rule for (1-x²)^α.
pub fn gauss_rule(n: usize, alpha: f64) -> Result<QuadratureRule> {
    gauss_jacobi_rule(n, JacobiIndex::gegenbauer(alpha)?)
}
