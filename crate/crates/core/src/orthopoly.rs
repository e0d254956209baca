//! Jacobi, Gegenbauer and Chebyshev polynomials, the Gegenbauer-on-ellipse
//! sum and connection coefficients between Jacobi families.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::gammafn::{lgamma, lgamma_ratio};

/// Parameter pair (α, β) of the weight (1-x)^α (1+x)^β; both exceed -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiIndex {
    alpha: f64,
    beta: f64,
}

impl JacobiIndex {
    pub const LEGENDRE: JacobiIndex = JacobiIndex { alpha: 0.0, beta: 0.0 };
    pub const CHEBYSHEV_T: JacobiIndex = JacobiIndex { alpha: -0.5, beta: -0.5 };
    pub const CHEBYSHEV_U: JacobiIndex = JacobiIndex { alpha: 0.5, beta: 0.5 };

    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return domain(format!("Jacobi parameters must exceed -1, got ({alpha}, {beta})"));
        }
        Ok(JacobiIndex { alpha, beta })
    }

    pub fn gegenbauer(alpha: f64) -> Result<Self> {
        Self::new(alpha, alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_symmetric(&self) -> bool {
        self.alpha == self.beta
    }
}

/// Real or complex argument for polynomial evaluation.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self> + From<f64>
{
}
impl Scalar for f64 {}
impl Scalar for Complex64 {}

/// Three-term recurrence coefficients: J_m = (a x + b) J_{m-1} - c J_{m-2}, m ≥ 2.
#[inline]
fn recurrence(m: usize, alpha: f64, beta: f64) -> (f64, f64, f64) {
    let m = m as f64;
    let s = alpha + beta;
    let t = 2.0 * m + s;
    let den = 2.0 * m * (m + s) * (t - 2.0);
    let a = (t - 1.0) * t * (t - 2.0) / den;
    let b = (t - 1.0) * (alpha * alpha - beta * beta) / den;
    let c = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * t / den;
    (a, b, c)
}

/// J_n^{α,β}(x) in Szegő normalization (J_n^{α,β}(1) = binom(n+α, n)).
pub fn jacobi_eval<T: Scalar>(n: usize, idx: JacobiIndex, x: T) -> T {
    let (al, be) = (idx.alpha, idx.beta);
    let mut prev = T::from(1.0);
    if n == 0 {
        return prev;
    }
    let mut cur = x * (0.5 * (al + be + 2.0)) + T::from(0.5 * (al - be));
    for m in 2..=n {
        let (a, b, c) = recurrence(m, al, be);
        let next = (x * a + T::from(b)) * cur - prev * c;
        prev = cur;
        cur = next;
    }
    cur
}

/// J_0(x), ..., J_{nmax}(x).
pub fn jacobi_eval_all(nmax: usize, idx: JacobiIndex, x: f64) -> Vec<f64> {
    let (al, be) = (idx.alpha, idx.beta);
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    if nmax == 0 {
        return out;
    }
    out.push(0.5 * ((al + be + 2.0) * x + al - be));
    for m in 2..=nmax {
        let (a, b, c) = recurrence(m, al, be);
        out.push((a * x + b) * out[m - 1] - c * out[m - 2]);
    }
    out
}

/// (J_n(x), J_n'(x)) using J_n' = (n+α+β+1)/2 · J_{n-1}^{α+1,β+1}.
pub fn jacobi_eval_with_derivative(n: usize, idx: JacobiIndex, x: f64) -> (f64, f64) {
    let v = jacobi_eval(n, idx, x);
    if n == 0 {
        return (v, 0.0);
    }
    let shifted = JacobiIndex { alpha: idx.alpha + 1.0, beta: idx.beta + 1.0 };
    let dv = 0.5 * (n as f64 + idx.alpha + idx.beta + 1.0) * jacobi_eval(n - 1, shifted, x);
    (v, dv)
}

pub fn chebyshev_t(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn chebyshev_u(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Pieces of J_n^{α,α}(z) = A_n Σ_k g_k g_{n-k} w^{n-2k}, z = (w+1/w)/2.
#[derive(Debug, Clone, PartialEq)]
pub struct GegenbauerEllipseForm {
    pub n: usize,
    pub alpha: f64,
    pub g: Vec<f64>,
    /// A_n; negative when -1 < α < -1/2.
    pub a: f64,
}

/// ln|Γ(x)| and its sign for x > -1, x ≠ 0.
fn lgamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        (lgamma(x), 1.0)
    } else {
        (lgamma(x + 1.0) - (-x).ln(), -1.0)
    }
}

pub fn gegenbauer_ellipse_form(n: usize, alpha: f64) -> Result<GegenbauerEllipseForm> {
    if !(alpha > -1.0) {
        return domain(format!("Gegenbauer parameter must exceed -1, got {alpha}"));
    }
    let nf = n as f64;
    if n == 0 {
        return Ok(GegenbauerEllipseForm { n, alpha, g: vec![1.0], a: 1.0 });
    }
    if alpha == -0.5 {
        let mut g = vec![0.0; n + 1];
        g[0] = 1.0;
        g[n] = 1.0;
        let a = 0.5 * (lgamma_ratio(nf + 0.5, nf + 1.0) - 0.5 * std::f64::consts::PI.ln()).exp();
        return Ok(GegenbauerEllipseForm { n, alpha, g, a });
    }
    let mut g = Vec::with_capacity(n + 1);
    g.push(1.0);
    for k in 1..=n {
        let kf = k as f64;
        g.push(g[k - 1] * (kf + alpha - 0.5) / kf);
    }
    let (lg, sign) = lgamma_signed(alpha + 0.5);
    let ln_a = 2.0 * alpha * std::f64::consts::LN_2 + lgamma_ratio(nf + alpha + 1.0, nf + 2.0 * alpha + 1.0) + lg
        - 0.5 * std::f64::consts::PI.ln();
    Ok(GegenbauerEllipseForm { n, alpha, g, a: sign * ln_a.exp() })
}

impl GegenbauerEllipseForm {
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let n = self.n;
        let w2inv = 1.0 / (w * w);
        let mut pow = w.powi(n as i32);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=n {
            acc += pow * (self.g[k] * self.g[n - k]);
            pow *= w2inv;
        }
        acc * self.a
    }
}

/// J_n^{α,α} at z = (w+1/w)/2 via the Laurent sum in w.
pub fn gegenbauer_on_ellipse(n: usize, alpha: f64, w: Complex64) -> Result<Complex64> {
    if w == Complex64::new(0.0, 0.0) {
        return domain("gegenbauer_on_ellipse needs w != 0");
    }
    Ok(gegenbauer_ellipse_form(n, alpha)?.eval(w))
}

/// Coefficients d_i, i = n..=n+k+l, with
/// (1-x)^k (1+x)^l J_n^{α+k,β+l} = Σ_i d_i J_i^{α,β}.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoeffs {
    pub n: usize,
    pub idx_base: JacobiIndex,
    pub k: usize,
    pub l: usize,
    /// d[i - n]
    pub d: Vec<f64>,
}

impl ConnectionCoeffs {
    pub fn get(&self, i: usize) -> f64 {
        if i < self.n {
            return 0.0;
        }
        self.d.get(i - self.n).copied().unwrap_or(0.0)
    }
}

fn peel(coeffs: &[f64], n: usize, a: f64, b: f64, minus: bool) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len() + 1];
    for (off, &c) in coeffs.iter().enumerate() {
        let m = (n + off) as f64;
        let scale = 2.0 / (2.0 * m + a + b + 1.0);
        if minus {
            out[off] += c * scale * (m + a);
            out[off + 1] -= c * scale * (m + 1.0);
        } else {
            out[off] += c * scale * (m + b);
            out[off + 1] += c * scale * (m + 1.0);
        }
    }
    out
}

fn connection_ordered(n: usize, idx_base: JacobiIndex, k: usize, l: usize, minus_first: bool) -> Vec<f64> {
    let mut a = idx_base.alpha + k as f64;
    let mut b = idx_base.beta + l as f64;
    let mut d = vec![1.0];
    let mut step = |d: &mut Vec<f64>, minus: bool| {
        *d = peel(d, n, a, b, minus);
        if minus {
            a -= 1.0;
        } else {
            b -= 1.0;
        }
    };
    let order: Vec<bool> = if minus_first {
        std::iter::repeat_n(true, k).chain(std::iter::repeat_n(false, l)).collect()
    } else {
        std::iter::repeat_n(false, l).chain(std::iter::repeat_n(true, k)).collect()
    };
    for minus in order {
        step(&mut d, minus);
    }
    d
}

/// Peels the (1-x) factors first, then the (1+x) factors.
pub fn connection_coeffs(n: usize, idx_base: JacobiIndex, k: usize, l: usize) -> ConnectionCoeffs {
    ConnectionCoeffs { n, idx_base, k, l, d: connection_ordered(n, idx_base, k, l, true) }
}
