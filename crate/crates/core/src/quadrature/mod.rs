//! Gegenbauer–Gauss rules, their remainder, the Q_n function, the μ/Θ
//! empirics and the quadrature error bounds.

mod rule;

pub use rule::{gauss_jacobi_rule, gauss_rule, QuadratureRule};

use num_complex::Complex64;

use crate::coeffbounds::{bound_gegenbauer, bound_legendre, check_inputs, BoundMethod, BoundReport, ConstantMode};
use crate::ellipse::AnalyticFunction;
use crate::error::{domain, Error, Result};
use crate::gammafn::{gamma_norm, lgamma, upsilon};
use crate::orthopoly::{gegenbauer_ellipse_form, jacobi_eval, JacobiIndex};
use crate::sigma::sigma_table;

const PI: f64 = std::f64::consts::PI;
const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Reference-integral acceptance: two consecutive orders agree to this.
pub const REFERENCE_TOL: f64 = 1e-12;
const REFERENCE_DOUBLINGS: usize = 4;

/// ∫ f (1-x²)^α dx by Gauss–Gegenbauer rules of order max(4n, 200), doubled
/// until two consecutive orders agree.
pub fn reference_integral(f: &dyn Fn(f64) -> f64, alpha: f64, n: usize) -> Result<f64> {
    let mut order = (4 * n).max(200);
    let mut prev = gauss_rule(order, alpha)?.integrate(f);
    for _ in 0..REFERENCE_DOUBLINGS {
        order *= 2;
        let rule = gauss_rule(order, alpha)?;
        let next = rule.integrate(f);
        let scale = rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| (w * f(x)).abs()).sum::<f64>();
        if !next.is_finite() {
            break;
        }
        if (next - prev).abs() <= REFERENCE_TOL * next.abs().max(1e-300) || (next - prev).abs() <= 1e-16 * scale {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Numerical(format!(
        "reference integral did not converge to {REFERENCE_TOL:e} relative by order {order}"
    )))
}

/// E_n[u] = ∫ u (1-x²)^α dx - Σ u(x_j) ω_j.
pub fn quad_remainder(f: &AnalyticFunction, n: usize, alpha: f64) -> Result<f64> {
    let g = |x: f64| f.eval_real(x);
    let exact = reference_integral(&g, alpha, n)?;
    Ok(exact - gauss_rule(n, alpha)?.integrate(g))
}

const Q_CHUNK: usize = 64;

/// Q_n(z) = Σ_{j=0}^{L} σ_{n,j} w^{-(n+j+1)}, z = (w+1/w)/2, stopping early
/// once two consecutive terms fall below 1e-15 of the partial sum.
pub fn q_function(n: usize, idx: JacobiIndex, w: Complex64, big_l: usize) -> Result<Complex64> {
    if !(w.norm() > 1.0) {
        return domain(format!("the Q_n Laurent series needs |w| > 1, got |w| = {}", w.norm()));
    }
    let winv = w.inv();
    let mut pow = winv.powi(n as i32 + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut small = 0;
    let mut j = 0;
    while j <= big_l {
        let jmax = (j + Q_CHUNK).min(big_l);
        let table = sigma_table(n, idx, jmax)?;
        while j <= jmax {
            let term = pow * table.values[j];
            acc += term;
            pow *= winv;
            j += 1;
            if term.norm() < 1e-15 * acc.norm() {
                small += 1;
                if small >= 2 {
                    return Ok(acc);
                }
            } else {
                small = 0;
            }
        }
    }
    Ok(acc)
}

/// Q_n(z) = (1/(2γ_n)) ∫ J_n ω/(z-x) dx by Gauss–Jacobi quadrature.
pub fn q_function_integral(n: usize, idx: JacobiIndex, w: Complex64, order: usize) -> Result<Complex64> {
    if !(w.norm() > 1.0) {
        return domain(format!("Q_n needs a point off [-1, 1] (|w| > 1), got |w| = {}", w.norm()));
    }
    let z = (w + w.inv()) * 0.5;
    let rule = gauss_jacobi_rule(order, idx)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &wt) in rule.nodes.iter().zip(&rule.weights) {
        acc += wt * jacobi_eval(n, idx, x) / (z - x);
    }
    Ok(acc / (2.0 * gamma_norm(n as u64, idx).value))
}

/// Laurent coefficients of Q_n/J_n = Σ_l μ_{n,2l} w^{-(2n+2l+1)}, α = β.
#[derive(Debug, Clone, PartialEq)]
pub struct MuSequence {
    pub n: usize,
    pub alpha: f64,
    /// μ_{n,0}, μ_{n,2}, …, μ_{n,2L}.
    pub values: Vec<f64>,
    /// max over l of (Σ|terms|)/(|g_n|·max_{l'≤l}|μ_{n,2l'}|).
    pub condition: f64,
    pub warning: Option<String>,
}

impl MuSequence {
    pub fn big_l(&self) -> usize {
        self.values.len() - 1
    }
}

/// Condition estimate above which a μ table carries a warning.
pub const MU_CONDITION_WARN: f64 = 1e6;

/// μ_{n,2l} = (σ_{n,2l}/A_n - Σ_{k=1}^{min(n,l)} g_k g_{n-k} μ_{n,2l-2k})/g_n.
pub fn mu_coeffs(n: usize, alpha: f64, big_l: usize) -> Result<MuSequence> {
    let form = gegenbauer_ellipse_form(n, alpha)?;
    let idx = JacobiIndex::gegenbauer(alpha)?;
    let sigma = sigma_table(n, idx, 2 * big_l)?;
    let prod: Vec<f64> = (0..=n).map(|k| form.g[k] * form.g[n - k]).collect();
    let lead = prod[0];
    let mut values: Vec<f64> = Vec::with_capacity(big_l + 1);
    let mut condition: f64 = 1.0;
    let mut running_max: f64 = 0.0;
    for l in 0..=big_l {
        let rhs = sigma.values[2 * l] / form.a;
        let mut acc = rhs;
        let mut mag = rhs.abs();
        for k in 1..=n.min(l) {
            if prod[k] != 0.0 {
                let t = prod[k] * values[l - k];
                acc -= t;
                mag += t.abs();
            }
        }
        let mu = acc / lead;
        if !mu.is_finite() {
            return Err(Error::Numerical(format!("mu recursion overflowed at n={n}, alpha={alpha}, l={l}")));
        }
        running_max = running_max.max(mu.abs());
        if running_max > 0.0 {
            condition = condition.max(mag / (lead.abs() * running_max));
        }
        values.push(mu);
    }
    let warning = (condition > MU_CONDITION_WARN).then(|| {
        format!("mu recursion condition estimate {condition:.3e} exceeds {MU_CONDITION_WARN:e} (n={n}, alpha={alpha})")
    });
    Ok(MuSequence { n, alpha, values, condition, warning })
}

/// θ_{n,l} = γ_n |μ_{n,2l+2} - μ_{n,2l}| for l = 0..=L.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaProfile {
    pub n: usize,
    pub alpha: f64,
    pub theta: Vec<f64>,
    /// Θ_n^α over the stored l.
    pub theta_max: f64,
    /// Smallest l attaining theta_max (ties within 1e-12 relative).
    pub argmax_l: usize,
    /// γ_n μ_{n,0}.
    pub mu0_scaled: f64,
    pub warning: Option<String>,
}

pub const THETA_DEFAULT_L: usize = 1000;

pub fn theta_profile(n: usize, alpha: f64, big_l: usize) -> Result<ThetaProfile> {
    if big_l < 1 {
        return domain("theta_profile needs L >= 1");
    }
    let mu = mu_coeffs(n, alpha, big_l + 1)?;
    let g = gamma_norm(n as u64, JacobiIndex::gegenbauer(alpha)?).value;
    let theta: Vec<f64> = mu.values.windows(2).map(|p| g * (p[1] - p[0]).abs()).collect();
    let theta_max = theta.iter().copied().fold(0.0, f64::max);
    let argmax_l = theta.iter().position(|&t| t >= theta_max * (1.0 - 1e-12)).unwrap_or(0);
    Ok(ThetaProfile { n, alpha, theta, theta_max, argmax_l, mu0_scaled: g * mu.values[0], warning: mu.warning })
}

/// Form of the computable bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadBoundForm {
    /// γ_n[|μ_0| + ρ⁻² Σ_l |μ_{2l+2} - μ_{2l}| ρ^{-2l}]·M/ρ^{2n}.
    #[default]
    Series,
    /// (γ_n|μ_0| + Θ_n^α/(ρ²-1))·M/ρ^{2n}.
    Theta,
}

#[allow(clippy::too_many_arguments)]
fn quad_report(method: BoundMethod, n: usize, alpha: f64, rho: f64, m: f64, value: f64, mode: ConstantMode, c: f64) -> Result<BoundReport> {
    BoundReport::new(method, n, alpha, alpha, rho, m, value, mode, c)
}

/// The computable bound from the μ table with L = 1000.
pub fn bound_quad_computable(n: usize, alpha: f64, rho: f64, m: f64, form: QuadBoundForm) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    let p = theta_profile(n, alpha, THETA_DEFAULT_L)?;
    let r2 = rho * rho;
    let scale = m / rho.powf(2.0 * n as f64);
    let (method, core) = match form {
        QuadBoundForm::Theta => (BoundMethod::QuadComputableTheta, p.mu0_scaled.abs() + p.theta_max / (r2 - 1.0)),
        QuadBoundForm::Series => {
            let mut sum = 0.0;
            let mut pow = 1.0 / r2;
            for &t in &p.theta {
                sum += t * pow;
                pow /= r2;
            }
            // beyond L, each θ is taken as Θ
            let tail = p.theta_max * pow / (1.0 - 1.0 / r2);
            (BoundMethod::QuadComputableSeries, p.mu0_scaled.abs() + sum + tail)
        }
    };
    quad_report(method, n, alpha, rho, m, scale * core, ConstantMode::Unit, 1.0)
}

fn check_n(n: usize) -> Result<()> {
    if n < 1 {
        return domain("quadrature rules need n >= 1");
    }
    Ok(())
}

/// Sampled (then golden-section refined) min |J_n^{α,α}| on ℰ_ρ and the
/// closed-form lower bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinModulus {
    pub n: usize,
    pub alpha: f64,
    pub rho: f64,
    pub sampled: f64,
    pub theta_at_min: f64,
    /// |A_n| n^{α-1/2} ρ^n/|Γ(α+1/2)|·(1±ρ⁻²)^{-α-1/2}; exact at α = -1/2.
    pub unit_lower: f64,
    /// unit_lower/Υ_n^{1,α+1/2} where Υ is defined.
    pub explicit_lower: Option<f64>,
}

pub const MIN_MODULUS_SAMPLES: usize = 4096;

pub fn gegenbauer_min_modulus(n: usize, alpha: f64, rho: f64) -> Result<MinModulus> {
    if !(rho > 1.0) || !rho.is_finite() {
        return domain(format!("rho must be a finite value > 1, got {rho}"));
    }
    let form = gegenbauer_ellipse_form(n, alpha)?;
    if n == 0 {
        return Ok(MinModulus { n, alpha, rho, sampled: 1.0, theta_at_min: 0.0, unit_lower: 1.0, explicit_lower: Some(1.0) });
    }
    // |J_n| is symmetric under θ → -θ and θ → π - θ
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..MIN_MODULUS_SAMPLES {
        let th = 0.5 * PI * i as f64 / (MIN_MODULUS_SAMPLES - 1) as f64;
        let v = form.eval(Complex64::from_polar(rho, th)).norm();
        if v < best.0 {
            best = (v, th);
        }
    }
    let h = 0.5 * PI / (MIN_MODULUS_SAMPLES - 1) as f64;
    let modulus = |th: f64| form.eval(Complex64::from_polar(rho, th)).norm();
    let (mut lo, mut hi) = (best.1 - h, best.1 + h);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (hi - ratio * (hi - lo), lo + ratio * (hi - lo));
    let (mut f1, mut f2) = (modulus(x1), modulus(x2));
    while hi - lo > 1e-12 {
        if f1 > f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = modulus(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = modulus(x1);
        }
    }
    for (v, th) in [(f1, x1), (f2, x2)] {
        if v < best.0 {
            best = (v, th);
        }
    }
    let nf = n as f64;
    let (unit_lower, explicit_lower) = if alpha == -0.5 {
        let v = form.a.abs() * (rho.powf(nf) - rho.powf(-nf));
        (v, Some(v))
    } else {
        let lg = if alpha + 0.5 > 0.0 { lgamma(alpha + 0.5) } else { lgamma(alpha + 1.5) - (-(alpha + 0.5)).ln() };
        let r2 = rho.powi(-2);
        let factor = if alpha > -0.5 { 1.0 + r2 } else { 1.0 - r2 };
        let v = (form.a.abs().ln() + (alpha - 0.5) * nf.ln() + nf * rho.ln() - lg - (alpha + 0.5) * factor.ln()).exp();
        (v, upsilon(n as u64, 1.0, alpha + 0.5).ok().map(|u| v / u.value))
    };
    Ok(MinModulus { n, alpha, rho, sampled: best.0, theta_at_min: best.1, unit_lower, explicit_lower })
}

/// The Gegenbauer min-modulus display. Explicit mode evaluates
/// γ_n·bound_gegenbauer/min|J_n| with the sampled minimum.
pub fn bound_quad_gegenbauer(n: usize, alpha: f64, rho: f64, m: f64, mode: ConstantMode) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    check_n(n)?;
    if alpha == -0.5 {
        return domain("bound_quad_gegenbauer excludes alpha = -1/2; use bound_quad_computable");
    }
    let idx = JacobiIndex::gegenbauer(alpha)?;
    let r2 = rho * rho;
    let brace = if alpha > -0.5 { 1.0 + 1.0 / r2 } else { 1.0 - 1.0 / r2 };
    let head = SQRT_PI / 2f64.powf(2.0 * alpha)
        + (lgamma(alpha + 1.0) - 0.5 * lgamma(2.0 * alpha + 2.0)).exp() * 2.0 * std::f64::consts::SQRT_2 / (r2 - 1.0);
    let unit = m * SQRT_PI / rho.powf(2.0 * n as f64) * head * brace.powf(alpha + 0.5);
    let (value, c) = match mode {
        ConstantMode::Unit => (unit, 1.0),
        ConstantMode::Explicit => {
            let g = gamma_norm(n as u64, idx).value;
            let v = g * bound_gegenbauer(n, alpha, rho, m)?.value / gegenbauer_min_modulus(n, alpha, rho)?.sampled;
            (v, v / unit)
        }
    };
    quad_report(BoundMethod::QuadGegenbauer, n, alpha, rho, m, value, mode, c)
}

/// C_n Mπ√(1+ρ⁻²)/ρ^{2n}·(1 + 1/(2(ρ²-1))). Explicit mode evaluates
/// γ_n·bound_legendre/min|J_n|.
pub fn bound_quad_legendre(n: usize, rho: f64, m: f64, mode: ConstantMode) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    check_n(n)?;
    let r2 = rho * rho;
    let unit = m * PI * (1.0 + 1.0 / r2).sqrt() / rho.powf(2.0 * n as f64) * (1.0 + 1.0 / (2.0 * (r2 - 1.0)));
    let (value, c) = match mode {
        ConstantMode::Unit => (unit, 1.0),
        ConstantMode::Explicit => {
            let g = 2.0 / (2.0 * n as f64 + 1.0);
            let v = g * bound_legendre(n, rho, m)?.value / gegenbauer_min_modulus(n, 0.0, rho)?.sampled;
            (v, v / unit)
        }
    };
    quad_report(BoundMethod::QuadLegendre, n, 0.0, rho, m, value, mode, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LiteratureQuadBound {
    /// 2πM/(ρ^{2n}-1), α = -1/2.
    ChawlaCheb,
    /// 4Mγ_0^{α,α}/(ρ^{2n-2}(ρ²-1)).
    HunterGeneral,
    /// πM(ρ²+2+ρ⁻²)/(2(ρ^{2n+2}-1)), α = 1/2.
    HunterCheb2,
    /// πM/ρ^{2n}·(ρ²+1)/(ρ²-2), α = 0, ρ > √2.
    KamboLegendre,
}

impl LiteratureQuadBound {
    pub fn as_str(&self) -> &'static str {
        match self {
            LiteratureQuadBound::ChawlaCheb => "chawla_cheb",
            LiteratureQuadBound::HunterGeneral => "hunter_general",
            LiteratureQuadBound::HunterCheb2 => "hunter_cheb2",
            LiteratureQuadBound::KamboLegendre => "kambo_legendre",
        }
    }
}

pub fn bound_quad_literature(method: LiteratureQuadBound, n: usize, alpha: f64, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    check_n(n)?;
    let idx = JacobiIndex::gegenbauer(alpha)?;
    let r2 = rho * rho;
    let nf = n as f64;
    let need = |want: f64, name: &str| -> Result<()> {
        if alpha != want {
            return domain(format!("{name} applies only to alpha = {want}, got {alpha}"));
        }
        Ok(())
    };
    let (bm, v) = match method {
        LiteratureQuadBound::ChawlaCheb => {
            need(-0.5, "chawla_cheb")?;
            (BoundMethod::QuadChawla, 2.0 * PI * m / (rho.powf(2.0 * nf) - 1.0))
        }
        LiteratureQuadBound::HunterGeneral => {
            let g0 = gamma_norm(0, idx).value;
            (BoundMethod::QuadHunterGeneral, 4.0 * m * g0 / (rho.powf(2.0 * nf - 2.0) * (r2 - 1.0)))
        }
        LiteratureQuadBound::HunterCheb2 => {
            need(0.5, "hunter_cheb2")?;
            (BoundMethod::QuadHunterCheb2, PI * m * (r2 + 2.0 + 1.0 / r2) / (2.0 * (rho.powf(2.0 * nf + 2.0) - 1.0)))
        }
        LiteratureQuadBound::KamboLegendre => {
            need(0.0, "kambo_legendre")?;
            if !(r2 > 2.0) {
                return domain(format!("kambo_legendre needs rho > sqrt(2), got {rho}"));
            }
            (BoundMethod::QuadKamboLegendre, PI * m / rho.powf(2.0 * nf) * (r2 + 1.0) / (r2 - 2.0))
        }
    };
    quad_report(bm, n, alpha, rho, m, v, ConstantMode::Unit, 1.0)
}

/// The displayed second-kind Chebyshev value πM(ρ²+2+ρ^{-2n-4})/(2(ρ^{2n+2}-1)).
pub fn quad_cheb2_display(n: usize, rho: f64, m: f64) -> Result<BoundReport> {
    check_inputs(rho, m)?;
    check_n(n)?;
    let nf = n as f64;
    let v = PI * m * (rho * rho + 2.0 + rho.powf(-2.0 * nf - 4.0)) / (2.0 * (rho.powf(2.0 * nf + 2.0) - 1.0));
    quad_report(BoundMethod::QuadCheb2Display, n, 0.5, rho, m, v, ConstantMode::Unit, 1.0)
}
