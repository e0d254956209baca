//! Jacobi expansion coefficients, partial sums, L² truncation errors and the
//! two test functions with known coefficients.

use num_complex::Complex64;

use crate::ellipse::AnalyticFunction;
use crate::error::{domain, Error, Result};
use crate::gammafn::{gamma_norm, lgamma_ratio};
use crate::orthopoly::{chebyshev_t, chebyshev_u, jacobi_eval_all, JacobiIndex};
use crate::quadrature::gauss_jacobi_rule;

const SQRT_PI: f64 = 1.772_453_850_905_516;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestFunction {
    /// 3/(5-4z) = 1 + Σ_{n≥1} 2^{1-n} T_n.
    U1,
    /// 2/√(5-4z) = Σ 2^{-n} P_n.
    U2,
}

impl TestFunction {
    pub fn as_str(&self) -> &'static str {
        match self {
            TestFunction::U1 => "u1",
            TestFunction::U2 => "u2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "u1" => Ok(TestFunction::U1),
            "u2" => Ok(TestFunction::U2),
            _ => domain(format!("unknown test function '{s}' (expected u1 or u2)")),
        }
    }

    /// Both are analytic inside ℰ_ρ for ρ < 2.
    pub const RHO_MAX: f64 = 2.0;

    /// Closed-form max |u| on ℰ_ρ, attained at z = (ρ+1/ρ)/2.
    pub fn max_modulus(&self, rho: f64) -> Result<f64> {
        if !(rho > 1.0 && rho < Self::RHO_MAX) {
            return Err(Error::Analyticity { rho, rho_max: Self::RHO_MAX });
        }
        let q = (2.0 * rho - 1.0) * (2.0 - rho);
        Ok(match self {
            TestFunction::U1 => 3.0 * rho / q,
            TestFunction::U2 => (4.0 * rho / q).sqrt(),
        })
    }

    /// The expansion basis the known coefficients refer to.
    pub fn natural_index(&self) -> JacobiIndex {
        match self {
            TestFunction::U1 => JacobiIndex::CHEBYSHEV_T,
            TestFunction::U2 => JacobiIndex::LEGENDRE,
        }
    }

    /// û_n^C for u1 (T basis), û_n^{0,0} for u2.
    pub fn exact_coefficient(&self, n: usize) -> f64 {
        match (self, n) {
            (TestFunction::U1, 0) => 1.0,
            (TestFunction::U1, _) => 2f64.powi(1 - n as i32),
            (TestFunction::U2, _) => 2f64.powi(-(n as i32)),
        }
    }
}

pub fn catalog(tf: TestFunction) -> AnalyticFunction {
    match tf {
        TestFunction::U1 => AnalyticFunction::new("u1", TestFunction::RHO_MAX, true, |z: Complex64| {
            Complex64::new(3.0, 0.0) / (Complex64::new(5.0, 0.0) - 4.0 * z)
        }),
        TestFunction::U2 => AnalyticFunction::new("u2", TestFunction::RHO_MAX, true, |z: Complex64| {
            Complex64::new(2.0, 0.0) / (Complex64::new(5.0, 0.0) - 4.0 * z).sqrt()
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesSource {
    Numerical,
    ExactU1,
    ExactU2,
}

impl SeriesSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesSource::Numerical => "numerical",
            SeriesSource::ExactU1 => "exact_u1",
            SeriesSource::ExactU2 => "exact_u2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Szegő-normalized J_n^{α,β}.
    Szego,
    /// T_n, for (α,β) = (-1/2,-1/2).
    TBasis,
    /// U_n, for (α,β) = (1/2,1/2).
    UBasis,
}

impl Basis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Basis::Szego => "szego",
            Basis::TBasis => "T",
            Basis::UBasis => "U",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionSeries {
    pub idx: JacobiIndex,
    /// û_0, …, û_{N-1}.
    pub coefficients: Vec<f64>,
    pub source: SeriesSource,
    pub basis: Basis,
}

impl ExpansionSeries {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// The known coefficients of u1 (T basis) or u2 (Legendre), n < N.
pub fn exact_series(tf: TestFunction, big_n: usize) -> ExpansionSeries {
    let (source, basis) = match tf {
        TestFunction::U1 => (SeriesSource::ExactU1, Basis::TBasis),
        TestFunction::U2 => (SeriesSource::ExactU2, Basis::Szego),
    };
    ExpansionSeries {
        idx: tf.natural_index(),
        coefficients: (0..big_n).map(|n| tf.exact_coefficient(n)).collect(),
        source,
        basis,
    }
}

/// Agreement required between quadrature orders q and 2q, relative to max |û|.
pub const COEFF_TOL: f64 = 1e-12;

fn coeffs_at_order(f: &AnalyticFunction, idx: JacobiIndex, big_n: usize, order: usize) -> Result<Vec<f64>> {
    let rule = gauss_jacobi_rule(order, idx)?;
    let mut acc = vec![0.0; big_n];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let fx = f.eval_real(x);
        if !fx.is_finite() {
            return Err(Error::Numerical(format!("{} is not finite at x = {x}", f.name)));
        }
        let j = jacobi_eval_all(big_n - 1, idx, x);
        for (a, p) in acc.iter_mut().zip(&j) {
            *a += w * fx * p;
        }
    }
    Ok(acc.into_iter().enumerate().map(|(n, a)| a / gamma_norm(n as u64, idx).value).collect())
}

/// û_n = (1/γ_n) ∫ u J_n ω for n < N, by Gauss–Jacobi quadrature of order
/// `quad_order` (default 2N+64), checked against twice that order.
pub fn expansion_coeffs(f: &AnalyticFunction, idx: JacobiIndex, big_n: usize, quad_order: Option<usize>) -> Result<ExpansionSeries> {
    if big_n == 0 {
        return domain("expansion_coeffs needs N >= 1");
    }
    let q = quad_order.unwrap_or(2 * big_n + 64);
    if q < big_n {
        return domain(format!("quadrature order {q} is below N = {big_n}"));
    }
    let lo = coeffs_at_order(f, idx, big_n, q)?;
    let hi = coeffs_at_order(f, idx, big_n, 2 * q)?;
    let scale = hi.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if let Some(n) = (0..big_n).find(|&n| (lo[n] - hi[n]).abs() > COEFF_TOL * scale) {
        return Err(Error::Numerical(format!(
            "expansion coefficient n={n} of {} changed by {:.3e} between quadrature orders {q} and {}",
            f.name,
            (lo[n] - hi[n]).abs(),
            2 * q
        )));
    }
    Ok(ExpansionSeries { idx, coefficients: hi, source: SeriesSource::Numerical, basis: Basis::Szego })
}

/// Factor c_n with J_n^{idx} = c_n·(T_n or U_n).
fn basis_factor(basis: Basis, n: usize) -> f64 {
    let nf = n as f64;
    match basis {
        Basis::Szego => 1.0,
        Basis::TBasis => lgamma_ratio(nf + 0.5, nf + 1.0).exp() / SQRT_PI,
        Basis::UBasis => 2.0 / SQRT_PI * lgamma_ratio(nf + 1.5, nf + 2.0).exp(),
    }
}

fn basis_index(basis: Basis) -> Option<JacobiIndex> {
    match basis {
        Basis::Szego => None,
        Basis::TBasis => Some(JacobiIndex::CHEBYSHEV_T),
        Basis::UBasis => Some(JacobiIndex::CHEBYSHEV_U),
    }
}

/// Moves coefficients between the Szegő normalization and the T/U bases.
pub fn basis_rescale(series: &ExpansionSeries, target: Basis) -> Result<ExpansionSeries> {
    if series.basis == target {
        return Ok(series.clone());
    }
    for b in [series.basis, target] {
        if let Some(want) = basis_index(b) {
            if series.idx != want {
                return domain(format!(
                    "basis {} needs (alpha, beta) = ({}, {}), series has ({}, {})",
                    b.as_str(),
                    want.alpha(),
                    want.beta(),
                    series.idx.alpha(),
                    series.idx.beta()
                ));
            }
        }
    }
    let coefficients = series
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, &c)| c * basis_factor(target, n) / basis_factor(series.basis, n))
        .collect();
    Ok(ExpansionSeries { coefficients, basis: target, ..series.clone() })
}

/// Σ_{n<N} û_n φ_n(x) in the series' own basis.
pub fn partial_sum(series: &ExpansionSeries, big_n: usize, x: f64) -> f64 {
    let big_n = big_n.min(series.len());
    if big_n == 0 {
        return 0.0;
    }
    let c = &series.coefficients[..big_n];
    match series.basis {
        Basis::Szego => jacobi_eval_all(big_n - 1, series.idx, x).iter().zip(c).map(|(p, c)| p * c).sum(),
        Basis::TBasis => c.iter().enumerate().map(|(n, c)| c * chebyshev_t(n, x)).sum(),
        Basis::UBasis => c.iter().enumerate().map(|(n, c)| c * chebyshev_u(n, x)).sum(),
    }
}

const TAIL_WINDOW: usize = 8;

/// ‖u - π_N u‖_ω = √(Σ_{n≥N} û_n² γ_n), with a geometric estimate of the
/// terms beyond the stored ones.
pub fn truncation_error_l2(series: &ExpansionSeries, big_n: usize) -> Result<f64> {
    let s = basis_rescale(series, Basis::Szego)?;
    let len = s.len();
    if big_n > len {
        return domain(format!("N = {big_n} exceeds the {len} stored coefficients"));
    }
    if len < TAIL_WINDOW {
        return domain(format!("need at least {TAIL_WINDOW} coefficients to estimate the tail"));
    }
    let terms: Vec<f64> = s
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, c)| c * c * gamma_norm(n as u64, s.idx).value)
        .collect();
    let total: f64 = terms.iter().sum();
    let window = &terms[len - TAIL_WINDOW..];
    let half = TAIL_WINDOW / 2;
    let first = window[..half].iter().copied().fold(0.0, f64::max);
    let last = window[half..].iter().copied().fold(0.0, f64::max);
    let tail = if last == 0.0 {
        0.0
    } else {
        let r = (last / first).powf(1.0 / half as f64);
        if !(r < 1.0) {
            return domain("expansion coefficients are not decaying; the tail cannot be estimated");
        }
        last * r / (1.0 - r)
    };
    if tail > 1e-14 * total {
        return domain(format!(
            "series too short: estimated tail {tail:.3e} exceeds 1e-14 of the squared norm {total:.3e}"
        ));
    }
    let kept: f64 = terms[big_n..].iter().rev().sum();
    Ok((kept + tail).sqrt())
}
