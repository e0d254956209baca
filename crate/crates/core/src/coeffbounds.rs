//! Expansion-coefficient and truncation error bounds, ours and the literature's.

use crate::error::{domain, Result};
use crate::gammafn::{gamma_norm, lgamma_ratio};
use crate::orthopoly::JacobiIndex;
use crate::sigma::sigma_first_two;

const SQRT_PI: f64 = 1.772_453_850_905_516;
const PI: f64 = std::f64::consts::PI;

/// How the C_n ≈ 1 constants are realised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum ConstantMode {
    /// Computed from exact Gamma ratios and Υ envelopes.
    #[default]
    Explicit,
    /// C_n = 1, as in the comparison plots.
    Unit,
}

impl ConstantMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstantMode::Explicit => "explicit_upsilon",
            ConstantMode::Unit => "unit_constant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundMethod {
    Jacobi,
    Gegenbauer,
    LegendreSimple,
    Chebyshev,
    Chebyshev2A,
    Chebyshev2B,
    Legendre,
    LegendreAsymptotic,
    ChebType3212,
    LegType10,
    Xiang,
    XiangLegendre,
    Davis,
    KamboLegendre,
    Truncation,
    TruncationLegendre,
    TruncationXiang,
    QuadComputableSeries,
    QuadComputableTheta,
    QuadGegenbauer,
    QuadLegendre,
    QuadCheb2Display,
    QuadChawla,
    QuadHunterGeneral,
    QuadHunterCheb2,
    QuadKamboLegendre,
}

/// Which power of ρ and n a bound's "stripped" factor divides out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Coefficient,
    Truncation,
    Quadrature,
}

impl BoundMethod {
    pub fn as_str(&self) -> &'static str {
        use BoundMethod::*;
        match self {
            Jacobi => "jacobi",
            Gegenbauer => "gegenbauer",
            LegendreSimple => "legendre_simple",
            Chebyshev => "chebyshev",
            Chebyshev2A => "chebyshev2_a",
            Chebyshev2B => "chebyshev2_b",
            Legendre => "legendre",
            LegendreAsymptotic => "legendre_asymptotic",
            ChebType3212 => "cheb_type_3_2_1_2",
            LegType10 => "leg_type_1_0",
            Xiang => "xiang",
            XiangLegendre => "xiang_legendre",
            Davis => "davis",
            KamboLegendre => "kambo_legendre",
            Truncation => "truncation",
            TruncationLegendre => "truncation_legendre",
            TruncationXiang => "truncation_xiang",
            QuadComputableSeries => "quad_computable_series",
            QuadComputableTheta => "quad_computable_theta",
            QuadGegenbauer => "quad_gegenbauer",
            QuadLegendre => "quad_legendre",
            QuadCheb2Display => "quad_cheb2_display",
            QuadChawla => "chawla_cheb",
            QuadHunterGeneral => "hunter_general",
            QuadHunterCheb2 => "hunter_cheb2",
            QuadKamboLegendre => "kambo_legendre_quad",
        }
    }

    fn family(&self) -> Family {
        use BoundMethod::*;
        match self {
            Truncation | TruncationLegendre | TruncationXiang => Family::Truncation,
            QuadComputableSeries | QuadComputableTheta | QuadGegenbauer | QuadLegendre | QuadCheb2Display
            | QuadChawla | QuadHunterGeneral | QuadHunterCheb2 | QuadKamboLegendre => Family::Quadrature,
            _ => Family::Coefficient,
        }
    }
}

/// One evaluated bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub method: BoundMethod,
    /// n for coefficient and quadrature bounds, N for truncation bounds.
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub m: f64,
    pub value: f64,
    /// value with M√n/ρ^n (coefficients, n ≥ 1), M/ρ^N (truncation) or
    /// M/ρ^{2n} (quadrature) divided out.
    pub stripped_value: f64,
    pub constant_mode: ConstantMode,
    /// The C_n factor used (1 in unit mode or where none applies).
    pub constant: f64,
}

impl BoundReport {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        method: BoundMethod,
        n: usize,
        alpha: f64,
        beta: f64,
        rho: f64,
        m: f64,
        value: f64,
        constant_mode: ConstantMode,
        constant: f64,
    ) -> Result<Self> {
        if !(value > 0.0) || !value.is_finite() {
            return Err(crate::error::Error::Numerical(format!(
                "{} bound is not a positive finite number ({value}) at n={n}, rho={rho}",
                method.as_str()
            )));
        }
        let nf = n as f64;
        let stripped_value = match method.family() {
            Family::Coefficient if n >= 1 => value * rho.powf(nf) / (m * nf.sqrt()),
            Family::Coefficient => value / m,
            Family::Truncation => value * rho.powf(nf) / m,
            Family::Quadrature => value * rho.powf(2.0 * nf) / m,
        };
        Ok(BoundReport { method, n, alpha, beta, rho, m, value, stripped_value, constant_mode, constant })
    }
}

/// ρ must exceed 1 + 1e-9; M must be positive and finite.
pub fn check_inputs(rho: f64, m: f64) -> Result<()> {
    if !(rho >= 1.0 + 1e-9) || !rho.is_finite() {
        return domain(format!("rho must be a finite value >= 1 + 1e-9, got {rho}"));
    }
    if !(m > 0.0) || !m.is_finite() {
        return domain(format!("M must be a positive finite value, got {m}"));
    }
    Ok(())
}

fn unit(method: BoundMethod, n: usize, alpha: f64, beta: f64, rho: f64, m: f64, value: f64) -> Result<BoundReport> {
    BoundReport::new(method, n, alpha, beta, rho, m, value, ConstantMode::Unit, 1.0)
}

fn sqrt_norm_ratio(n: usize, idx: JacobiIndex) -> f64 {
    (gamma_norm(0, idx).value / gamma_norm(n as u64, idx).value).sqrt()
}

/// (M/ρ^n)[|σ_{n,0}| + |σ_{n,1}|/ρ + 2/(ρ(ρ-1))·√(γ_0/γ_n)].
pub fn bound_jacobi(n: usize, idx: JacobiIndex, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    let (s0, s1) = sigma_first_two(n, idx);
    let v = m / rho.powi(n as i32) * (s0.abs() + s1.abs() / rho + 2.0 / (rho * (rho - 1.0)) * sqrt_norm_ratio(n, idx));
    unit(BoundMethod::Jacobi, n, idx.alpha(), idx.beta(), rho, m, v)
}

/// (M/ρ^n)[σ_{n,0}^{α,α} + 2/(ρ²-1)·√(γ_0/γ_n)].
pub fn bound_gegenbauer(n: usize, alpha: f64, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    let idx = JacobiIndex::gegenbauer(alpha)?;
    let (s0, _) = sigma_first_two(n, idx);
    let v = m / rho.powi(n as i32) * (s0.abs() + 2.0 / (rho * rho - 1.0) * sqrt_norm_ratio(n, idx));
    unit(BoundMethod::Gegenbauer, n, alpha, alpha, rho, m, v)
}

/// M/ρ^n [√π Γ(n+1)/Γ(n+1/2) + 2√(2n+1)/(ρ²-1)].
pub fn bound_legendre_simple(n: usize, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    let nf = n as f64;
    let v = m / rho.powi(n as i32)
        * (SQRT_PI * lgamma_ratio(nf + 1.0, nf + 0.5).exp() + 2.0 * (2.0 * nf + 1.0).sqrt() / (rho * rho - 1.0));
    unit(BoundMethod::LegendreSimple, n, 0.0, 0.0, rho, m, v)
}

/// 2M/ρ^n.
pub fn bound_chebyshev(n: usize, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    unit(BoundMethod::Chebyshev, n, -0.5, -0.5, rho, m, 2.0 * m / rho.powi(n as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cheb2Variant {
    /// (M/ρ^n)(1 + ρ⁻²)
    A,
    /// M·L(ℰ_ρ)/(πρ^{n+1}) with the perimeter bound π√(ρ²+ρ⁻²)
    B,
}

/// Bounds for the U-basis coefficients.
pub fn bound_chebyshev2(n: usize, rho: f64, m: f64, variant: Cheb2Variant) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    let (method, v) = match variant {
        Cheb2Variant::A => (BoundMethod::Chebyshev2A, m / rho.powi(n as i32) * (1.0 + rho.powi(-2))),
        Cheb2Variant::B => {
            let perim = PI * (rho * rho + rho.powi(-2)).sqrt();
            (BoundMethod::Chebyshev2B, m * perim / (PI * rho.powi(n as i32 + 1)))
        }
    };
    unit(method, n, 0.5, 0.5, rho, m, v)
}

/// (M√(πn)/ρ^n)(1 + (n+2)/((2n+3)(ρ²-1)))·exp((8n-1)/(12n(2n-1))).
pub fn bound_legendre(n: usize, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    if n == 0 {
        return domain("bound_legendre needs n >= 1; use bound_gegenbauer at n = 0");
    }
    let nf = n as f64;
    let v = m * (PI * nf).sqrt() / rho.powi(n as i32)
        * (1.0 + (nf + 2.0) / ((2.0 * nf + 3.0) * (rho * rho - 1.0)))
        * ((8.0 * nf - 1.0) / (12.0 * nf * (2.0 * nf - 1.0))).exp();
    unit(BoundMethod::Legendre, n, 0.0, 0.0, rho, m, v)
}

/// M√(πn)/ρ^n·(ρ²-1/2)/(ρ²-1).
pub fn bound_legendre_asymptotic(n: usize, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    if n == 0 {
        return domain("bound_legendre_asymptotic needs n >= 1");
    }
    let nf = n as f64;
    let r2 = rho * rho;
    let v = m * (PI * nf).sqrt() / rho.powi(n as i32) * (r2 - 0.5) / (r2 - 1.0);
    unit(BoundMethod::LegendreAsymptotic, n, 0.0, 0.0, rho, m, v)
}

/// (√π/4)(n+1)!/Γ(n+3/2)·(M/ρ^n)(1+ρ⁻²)((n+2)/(n+1) + 1/ρ).
pub fn bound_cheb_type_3_2_1_2(n: usize, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    if n == 0 {
        return domain("bound_cheb_type_3_2_1_2 needs n >= 1");
    }
    let nf = n as f64;
    let v = 0.25 * SQRT_PI * lgamma_ratio(nf + 2.0, nf + 1.5).exp() * m / rho.powi(n as i32)
        * (1.0 + rho.powi(-2))
        * ((nf + 2.0) / (nf + 1.0) + 1.0 / rho);
    unit(BoundMethod::ChebType3212, n, 1.5, 0.5, rho, m, v)
}

/// (M/ρ^n)·√πΓ(n+2)/Γ(n+3/2)·{1/2 + (n+2)/(2(2n+3)(ρ²-1))
///   + (1/ρ)(n+1)/(2n+3)·(1 + (n+3)/((2n+5)(ρ²-1)))}.
pub fn bound_leg_type_1_0(n: usize, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    if n == 0 {
        return domain("bound_leg_type_1_0 needs n >= 1");
    }
    let nf = n as f64;
    let q = rho * rho - 1.0;
    let brace = 0.5
        + (nf + 2.0) / (2.0 * (2.0 * nf + 3.0) * q)
        + (nf + 1.0) / ((2.0 * nf + 3.0) * rho) * (1.0 + (nf + 3.0) / ((2.0 * nf + 5.0) * q));
    let v = m / rho.powi(n as i32) * SQRT_PI * lgamma_ratio(nf + 2.0, nf + 1.5).exp() * brace;
    unit(BoundMethod::LegType10, n, 1.0, 0.0, rho, m, v)
}

/// (M/ρ^n)[|σ_0| + |σ_1|/ρ + ρ⁻² Σ_{j=0}^{J} |σ_{j+2} - σ_j| ρ^{-j}]: the
/// term-by-term form the closed displays are derived from.
pub fn bound_from_sigma_series(n: usize, sigmas: &[f64], rho: f64, m: f64) -> Result<f64> {
    check_inputs(rho, m)?;
    if sigmas.len() < 2 {
        return domain("need at least sigma_{n,0} and sigma_{n,1}");
    }
    let mut tail = 0.0;
    let mut pow = 1.0;
    for j in 0..sigmas.len() - 2 {
        tail += (sigmas[j + 2] - sigmas[j]).abs() * pow;
        pow /= rho;
    }
    Ok(m / rho.powi(n as i32) * (sigmas[0].abs() + sigmas[1].abs() / rho + tail / (rho * rho)))
}

/// 2M/(ρ^{n-1}(ρ-1))·√(γ_0/γ_n).
pub fn bound_xiang(n: usize, idx: JacobiIndex, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    let v = 2.0 * m / (rho.powi(n as i32 - 1) * (rho - 1.0)) * sqrt_norm_ratio(n, idx);
    unit(BoundMethod::Xiang, n, idx.alpha(), idx.beta(), rho, m, v)
}

/// 2√n M/ρ^n·(1 + 1/(ρ²-1)).
pub fn bound_xiang_legendre(n: usize, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    if n == 0 {
        return domain("bound_xiang_legendre needs n >= 1");
    }
    let v = 2.0 * (n as f64).sqrt() * m / rho.powi(n as i32) * (1.0 + 1.0 / (rho * rho - 1.0));
    unit(BoundMethod::XiangLegendre, n, 0.0, 0.0, rho, m, v)
}

/// (2n+1)/2·π√(ρ²+ρ⁻²)·M/(ρ^n(ρ-1)).
pub fn bound_davis(n: usize, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    let v = (2.0 * n as f64 + 1.0) / 2.0 * PI * (rho * rho + rho.powi(-2)).sqrt() * m / (rho.powi(n as i32) * (rho - 1.0));
    unit(BoundMethod::Davis, n, 0.0, 0.0, rho, m, v)
}

/// M√(πn)/ρ^n·√(ρ⁴+1)/(ρ²-1).
pub fn bound_kambo_legendre(n: usize, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    let v = m * (PI * n as f64).sqrt() / rho.powi(n as i32) * (rho.powi(4) + 1.0).sqrt() / (rho * rho - 1.0);
    unit(BoundMethod::KamboLegendre, n, 0.0, 0.0, rho, m, v)
}

/// b̃ - b_n: Xiang's stripped Legendre factor minus ours.
pub fn legendre_gap(n: usize, rho: f64) -> Result<f64> {
    Ok(bound_xiang_legendre(n, rho, 1.0)?.stripped_value - bound_legendre(n, rho, 1.0)?.stripped_value)
}

/// Ῡ_n^{a,b}: Υ with |a-b| in the first term, decreasing in n.
fn upsilon_envelope(n: f64, a: f64, b: f64) -> f64 {
    let d = a - b;
    (d.abs() / (2.0 * (n + b - 1.0)) + 1.0 / (12.0 * (n + a - 1.0)) + d * d / n).exp()
}

const EXACT_SCAN: usize = 256;

/// sup_{n ≥ N} max(1, K0(n), K1(n)), with K0 = σ_{n,0}√γ_n/√(π/2^{α+β}) and
/// K1 = |σ_{n,1}|√γ_n/(|α-β|√(π/2^{α+β})): exact values on [N, N+256), then the
/// Υ-product envelope, which is decreasing, beyond.
pub fn truncation_constant(big_n: usize, idx: JacobiIndex) -> f64 {
    let (a, b) = (idx.alpha(), idx.beta());
    let s = a + b;
    let norm = (PI / 2f64.powf(s)).sqrt();
    let k_exact = |n: usize| {
        let (s0, s1) = sigma_first_two(n, idx);
        let g = gamma_norm(n as u64, idx).value.sqrt();
        let k0 = s0.abs() * g / norm;
        if a == b {
            k0
        } else {
            k0.max(s1.abs() * g / ((a - b).abs() * norm))
        }
    };
    let start = big_n.max(1);
    let mut c: f64 = 1.0;
    for n in start..start + EXACT_SCAN {
        c = c.max(k_exact(n));
    }
    let nf = (start + EXACT_SCAN) as f64;
    let mut env = upsilon_envelope(2.0 * nf, 2.0, s + 1.0)
        * upsilon_envelope(nf, s + 1.0, 1.5)
        * (upsilon_envelope(nf, a + 1.0, 1.0) * upsilon_envelope(nf, b + 1.0, s + 1.0)).sqrt()
        * (2.0 * nf / (2.0 * nf + s + 1.0)).sqrt().max(1.0);
    if a != b {
        env *= ((2.0 * nf + 2.0) / (2.0 * nf + s + 2.0)).max(1.0);
    }
    c.max(env)
}

/// [√(π/2^{α+β})(1 + |α-β|/ρ) + 2√γ_0/(ρ(ρ-1))]·C_N M/(ρ^{N-1}√(ρ²-1)).
pub fn truncation_bound(big_n: usize, idx: JacobiIndex, rho: f64, m: f64, mode: ConstantMode) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    if big_n < 1 {
        return domain("truncation bounds need N >= 1");
    }
    let (a, b) = (idx.alpha(), idx.beta());
    let c = match mode {
        ConstantMode::Explicit => truncation_constant(big_n, idx),
        ConstantMode::Unit => 1.0,
    };
    let bracket = (PI / 2f64.powf(a + b)).sqrt() * (1.0 + (a - b).abs() / rho)
        + 2.0 * gamma_norm(0, idx).value.sqrt() / (rho * (rho - 1.0));
    let v = bracket * c * m / (rho.powi(big_n as i32 - 1) * (rho * rho - 1.0).sqrt());
    BoundReport::new(BoundMethod::Truncation, big_n, a, b, rho, m, v, mode, c)
}

/// (1 + 1/(2(ρ²-1)))·C_N√π M/(ρ^{N-1}√(ρ²-1)). The explicit C_N is
/// (1 + (N+2)/((2N+3)(ρ²-1)))/(1 + 1/(2(ρ²-1))), using √γ_nσ_{n,0} ≤ √π.
pub fn truncation_bound_legendre(big_n: usize, rho: f64, m: f64, mode: ConstantMode) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    if big_n < 1 {
        return domain("truncation bounds need N >= 1");
    }
    let nf = big_n as f64;
    let q = rho * rho - 1.0;
    let c = match mode {
        ConstantMode::Explicit => (1.0 + (nf + 2.0) / ((2.0 * nf + 3.0) * q)) / (1.0 + 1.0 / (2.0 * q)),
        ConstantMode::Unit => 1.0,
    };
    let v = (1.0 + 1.0 / (2.0 * q)) * c * SQRT_PI * m / (rho.powi(big_n as i32 - 1) * q.sqrt());
    BoundReport::new(BoundMethod::TruncationLegendre, big_n, 0.0, 0.0, rho, m, v, mode, c)
}

/// 2√2 M/(ρ^{N-2}(ρ-1)²).
pub fn truncation_bound_xiang(big_n: usize, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    let v = 2.0 * std::f64::consts::SQRT_2 * m / (rho.powi(big_n as i32 - 2) * (rho - 1.0).powi(2));
    unit(BoundMethod::TruncationXiang, big_n, 0.0, 0.0, rho, m, v)
}
