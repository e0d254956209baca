//! Invariant and acceptance checks shared by the `verify` subcommand and the
//! acceptance test target.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coeffbounds::{
    bound_chebyshev, bound_jacobi, bound_legendre, bound_xiang, legendre_gap, truncation_bound_legendre,
    truncation_bound_xiang, ConstantMode,
};
use crate::ellipse::{max_modulus, EllipseRadius, DEFAULT_GRID, DEFAULT_TOL};
use crate::error::Result;
use crate::expand::{catalog, exact_series, expansion_coeffs, truncation_error_l2, TestFunction};
use crate::gammafn::{gamma_norm, log_gamma};
use crate::orthopoly::{gegenbauer_on_ellipse, jacobi_eval, JacobiIndex};
use crate::quadrature::{
    bound_quad_computable, bound_quad_gegenbauer, bound_quad_legendre, bound_quad_literature, gauss_rule,
    quad_remainder, theta_profile, LiteratureQuadBound, QuadBoundForm, THETA_DEFAULT_L,
};
use crate::sigma::{oracle_order, sigma_closed, sigma_general, sigma_oracle, SigmaClosedCase};

/// Acceptance ids whose stated claim does not hold for the exact quantities;
/// reported but not counted by `run_verify`.
pub const KNOWN_DEVIATIONS: [&str; 2] = ["2b", "4b"];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyConfig {
    /// Multiplies one σ value by 1 + 1e-6 before it is cross-checked.
    pub perturb_sigma: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: String,
    pub module: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    /// Reported only; does not affect the verdict.
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informational)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            2
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("{:<6} {:<12} {:<6} {:>8}  {}\n", "id", "module", "status", "seconds", "detail");
        for c in &self.checks {
            let status = match (c.passed, c.informational) {
                (true, _) => "PASS",
                (false, true) => "NOTE",
                (false, false) => "FAIL",
            };
            out.push_str(&format!(
                "{:<6} {:<12} {:<6} {:>8.2}  {}: {}\n",
                c.id, c.module, status, c.seconds, c.description, c.detail
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.passed && !c.informational).count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

type Outcome = Result<(bool, String)>;

fn timed(id: &str, module: &'static str, description: &'static str, f: impl FnOnce() -> Outcome) -> Check {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Check {
        id: id.to_string(),
        module,
        description,
        passed,
        detail,
        seconds: t.elapsed().as_secs_f64(),
        informational: false,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Tracks the worst case of a sweep.
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Worst { value: f64::NEG_INFINITY, at: String::new() }
    }

    fn update(&mut self, v: f64, at: impl FnOnce() -> String) {
        if v > self.value || v.is_nan() {
            self.value = v;
            self.at = at();
        }
    }
}

/// 1: exact coefficients of u1, u2 below their bounds at ρ = 1.98, n ∈ [1, 50].
pub fn criterion_1() -> Check {
    timed("1", "coeffbounds", "coefficient domination at rho=1.98", || {
        let rho = 1.98;
        let mut worst = Worst::new();
        for tf in [TestFunction::U1, TestFunction::U2] {
            let m = tf.max_modulus(rho)?;
            for n in 1..=50 {
                let b = match tf {
                    TestFunction::U1 => bound_chebyshev(n, rho, m)?.value,
                    TestFunction::U2 => bound_legendre(n, rho, m)?.value,
                };
                worst.update(tf.exact_coefficient(n) / b, || format!("{} n={n}", tf.as_str()));
            }
        }
        Ok((worst.value <= 1.0, format!("max exact/bound = {:.6} ({})", worst.value, worst.at)))
    })
}

const XIANG_GRID: [f64; 7] = [-0.9, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0];

/// 2a: bound_jacobi ≤ bound_xiang on the grid, strictly for α = β.
pub fn criterion_2a() -> Check {
    timed("2a", "coeffbounds", "jacobi bound below xiang", || {
        let pairs: Vec<(f64, f64)> = XIANG_GRID.iter().flat_map(|&a| XIANG_GRID.iter().map(move |&b| (a, b))).collect();
        let results: Vec<Result<(f64, f64)>> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let idx = JacobiIndex::new(a, b)?;
                let mut worst = f64::NEG_INFINITY;
                for n in 1..=60 {
                    for &rho in &[1.1, 1.5, 2.0, 3.0] {
                        let j = bound_jacobi(n, idx, rho, 1.0)?.value;
                        let x = bound_xiang(n, idx, rho, 1.0)?.value;
                        worst = worst.max(j / x);
                    }
                }
                Ok((a, worst))
            })
            .collect();
        let mut ok = true;
        let mut worst_any = Worst::new();
        let mut worst_sym = Worst::new();
        for (r, &(a, b)) in results.into_iter().zip(&pairs) {
            let (_, w) = r?;
            worst_any.update(w, || format!("({a},{b})"));
            if a == b {
                worst_sym.update(w, || format!("({a},{b})"));
                ok &= w < 1.0;
            }
            ok &= w <= 1.0;
        }
        Ok((
            ok,
            format!(
                "max jacobi/xiang = {:.6} at {}; symmetric max = {:.6} at {}",
                worst_any.value, worst_any.at, worst_sym.value, worst_sym.at
            ),
        ))
    })
}

/// 2b: the Legendre stripped-factor gap at ρ = 1.05 lies in [4, 8] for n ∈ [1, 60].
pub fn criterion_2b() -> Check {
    timed("2b", "coeffbounds", "legendre gap e_n(1.05) in [4, 8]", || {
        let mut lo = (f64::INFINITY, 0usize);
        let mut hi = (f64::NEG_INFINITY, 0usize);
        let mut inside = 0;
        for n in 1..=60 {
            let e = legendre_gap(n, 1.05)?;
            if e < lo.0 {
                lo = (e, n);
            }
            if e > hi.0 {
                hi = (e, n);
            }
            if (4.0..=8.0).contains(&e) {
                inside += 1;
            }
        }
        Ok((
            lo.0 >= 4.0 && hi.0 <= 8.0,
            format!("min {:.4} (n={}), max {:.4} (n={}), {inside}/60 inside", lo.0, lo.1, hi.0, hi.1),
        ))
    })
}

const CLOSED_CASES: [(SigmaClosedCase, f64); 3] =
    [(SigmaClosedCase::Cheb1, -0.5), (SigmaClosedCase::Cheb2, 0.5), (SigmaClosedCase::Legendre, 0.0)];

const ORACLE_PAIRS: [(f64, f64); 5] = [(0.0, 0.0), (0.5, 0.5), (1.0, 0.0), (-0.3, 1.2), (2.0, -0.7)];

/// 3: σ general formula against the closed forms and the quadrature oracle.
pub fn criterion_3(cfg: &VerifyConfig) -> Check {
    let perturb = cfg.perturb_sigma;
    timed("3", "sigma", "sigma cross-certification", move || {
        let tampered = |n: usize, j: usize, v: f64| if perturb && n == 3 && j == 2 { v * (1.0 + 1e-6) } else { v };
        let mut worst = Worst::new();
        for (case, a) in CLOSED_CASES {
            let idx = JacobiIndex::gegenbauer(a)?;
            for n in 0..=30 {
                let row: Vec<f64> = (0..=20).map(|j| sigma_general(n, j, idx)).collect::<Result<_>>()?;
                let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                for (j, &g) in row.iter().enumerate() {
                    let g = tampered(n, j, g);
                    let c = sigma_closed(n, j, case)?;
                    let err = if c == 0.0 { g.abs() / scale } else { rel(g, c) };
                    worst.update(err, || format!("{case:?} n={n} j={j}"));
                }
            }
        }
        // odd-j parity zeros of the symmetric case
        for &a in &[-0.7, 0.3, 1.5] {
            let idx = JacobiIndex::gegenbauer(a)?;
            for n in 0..=30 {
                let scale = sigma_general(n, 0, idx)?.abs();
                for j in (1..=19).step_by(2) {
                    let g = sigma_general(n, j, idx)?;
                    let c = sigma_closed(n, j, SigmaClosedCase::GegenbauerParity)?;
                    worst.update((g - c).abs() / scale, || format!("parity a={a} n={n} j={j}"));
                }
            }
        }
        let closed = (worst.value, worst.at.clone());
        let mut worst = Worst::new();
        for (a, b) in ORACLE_PAIRS {
            let idx = JacobiIndex::new(a, b)?;
            for n in 0..=10 {
                let row: Vec<(f64, f64)> = (0..=10)
                    .map(|j| Ok((sigma_general(n, j, idx)?, sigma_oracle(n, j, idx, oracle_order(n, j))?)))
                    .collect::<Result<_>>()?;
                let scale = row.iter().fold(0.0f64, |m, v| m.max(v.1.abs()));
                for (j, &(g, o)) in row.iter().enumerate() {
                    let g = tampered(n, j, g);
                    let err = if o.abs() < 1e-12 * scale { (g - o).abs() / scale } else { rel(g, o) };
                    worst.update(err, || format!("({a},{b}) n={n} j={j}"));
                }
            }
        }
        Ok((
            closed.0 <= 1e-9 && worst.value <= 1e-9,
            format!("closed max rel {:.2e} ({}); oracle max rel {:.2e} ({})", closed.0, closed.1, worst.value, worst.at),
        ))
    })
}

const RECOVERY_RHOS: [f64; 3] = [1.2, 1.9, 3.0];

/// 4a: at α = -1/2 the computable bound equals 2πM/(ρ^{2n}-1).
pub fn criterion_4a() -> Check {
    timed("4a", "quadrature", "first-kind Chebyshev recovery", || {
        let m = 1.0;
        let mut worst = Worst::new();
        for n in 1..=20 {
            for &rho in &RECOVERY_RHOS {
                let b = bound_quad_computable(n, -0.5, rho, m, QuadBoundForm::Series)?.value;
                let want = 2.0 * PI * m / (rho.powi(2 * n as i32) - 1.0);
                worst.update(rel(b, want), || format!("n={n} rho={rho}"));
            }
        }
        Ok((worst.value <= 1e-10, format!("max rel {:.2e} ({})", worst.value, worst.at)))
    })
}

/// 4b: at α = 1/2 the computable bound equals the displayed formula and lies strictly below Hunter's.
pub fn criterion_4b() -> Check {
    timed("4b", "quadrature", "second-kind Chebyshev recovery and margin", || {
        let m = 1.0;
        let mut worst_rel = Worst::new();
        let mut min_margin = Worst::new();
        for n in 1..=20 {
            for &rho in &RECOVERY_RHOS {
                let b = bound_quad_computable(n, 0.5, rho, m, QuadBoundForm::Series)?.value;
                let nf = n as f64;
                let denom = 2.0 * (rho.powf(2.0 * nf + 2.0) - 1.0);
                let display = PI * m * (rho * rho + 2.0 + rho.powf(-2.0 * nf - 4.0)) / denom;
                let hunter = PI * m * (rho * rho + 2.0 + rho.powi(-2)) / denom;
                worst_rel.update(rel(b, display), || format!("n={n} rho={rho}"));
                // track the smallest relative margin as its negation
                min_margin.update(-(hunter - b) / hunter, || format!("n={n} rho={rho}"));
            }
        }
        let margin = -min_margin.value;
        Ok((
            worst_rel.value <= 1e-10 && margin > 0.0,
            format!(
                "max rel vs display {:.2e} ({}); min relative margin below hunter {:.2e} ({})",
                worst_rel.value, worst_rel.at, margin, min_margin.at
            ),
        ))
    })
}

/// 5: quadrature remainders of u1, u2 below every applicable bound at ρ = 1.9.
pub fn criterion_5() -> Check {
    timed("5", "quadrature", "remainder domination at rho=1.9", || {
        let rho = 1.9;
        let jobs: Vec<(TestFunction, f64, usize)> = [TestFunction::U1, TestFunction::U2]
            .iter()
            .flat_map(|&tf| [-0.5, 0.0, 0.5, 2.0].into_iter().flat_map(move |a| (2..=12).map(move |n| (tf, a, n))))
            .collect();
        let ratios: Vec<Result<(f64, String)>> = jobs
            .par_iter()
            .map(|&(tf, a, n)| {
                let m = tf.max_modulus(rho)?;
                let e = quad_remainder(&catalog(tf), n, a)?.abs();
                let mut bounds = vec![
                    bound_quad_computable(n, a, rho, m, QuadBoundForm::Series)?,
                    bound_quad_literature(LiteratureQuadBound::HunterGeneral, n, a, rho, m)?,
                ];
                if a == -0.5 {
                    bounds.push(bound_quad_literature(LiteratureQuadBound::ChawlaCheb, n, a, rho, m)?);
                } else {
                    bounds.push(bound_quad_gegenbauer(n, a, rho, m, ConstantMode::Unit)?);
                }
                if a == 0.0 {
                    bounds.push(bound_quad_legendre(n, rho, m, ConstantMode::Unit)?);
                }
                if a == 0.5 {
                    bounds.push(bound_quad_literature(LiteratureQuadBound::HunterCheb2, n, a, rho, m)?);
                }
                let mut worst = (f64::NEG_INFINITY, String::new());
                for b in bounds {
                    let r = e / b.value;
                    if r > worst.0 {
                        worst = (r, format!("{} a={a} n={n} {}", tf.as_str(), b.method.as_str()));
                    }
                }
                Ok(worst)
            })
            .collect();
        let mut worst = Worst::new();
        for r in ratios {
            let (v, at) = r?;
            worst.update(v, || at);
        }
        Ok((worst.value <= 1.0, format!("max |E|/bound = {:.4e} ({})", worst.value, worst.at)))
    })
}

/// 6: Θ_n^0 ∈ [3.5, 4.5] for n ∈ [10, 100], and the α = 1/2, n = 36 profile is the periodic pattern.
pub fn criterion_6() -> Check {
    timed("6", "quadrature", "theta empirics", || {
        let sups: Vec<Result<(usize, f64)>> =
            (10..=100).into_par_iter().map(|n| Ok((n, theta_profile(n, 0.0, THETA_DEFAULT_L)?.theta_max))).collect();
        let mut lo = (f64::INFINITY, 0);
        let mut hi = (f64::NEG_INFINITY, 0);
        for s in sups {
            let (n, t) = s?;
            if t < lo.0 {
                lo = (t, n);
            }
            if t > hi.0 {
                hi = (t, n);
            }
        }
        let n = 36;
        let p = theta_profile(n, 0.5, THETA_DEFAULT_L)?;
        let mut pattern_ok = true;
        let mut worst = 0.0f64;
        for (l, &t) in p.theta.iter().enumerate() {
            let r = l % (n + 1);
            let want = match r {
                0 => PI,
                1 => PI / 2.0,
                _ if r == n => PI / 2.0,
                _ => 0.0,
            };
            if want == 0.0 {
                pattern_ok &= t < 1e-10;
                worst = worst.max(t);
            } else {
                pattern_ok &= t >= 1e-10;
                worst = worst.max((t - want).abs());
            }
        }
        Ok((
            lo.0 >= 3.5 && hi.0 <= 4.5 && pattern_ok && worst <= 1e-10,
            format!(
                "Theta^0 in [{:.4} (n={}), {:.4} (n={})]; alpha=1/2 pattern {} with max deviation {:.2e}",
                lo.0,
                lo.1,
                hi.0,
                hi.1,
                if pattern_ok { "matches" } else { "differs" },
                worst
            ),
        ))
    })
}

/// ∫ x^k (1-x²)^α dx.
fn gegenbauer_moment(k: usize, alpha: f64) -> Result<f64> {
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let h = (k / 2) as f64;
    Ok((log_gamma(h + 0.5)? + log_gamma(alpha + 1.0)? - log_gamma(h + alpha + 1.5)?).exp())
}

pub const EXACTNESS_ALPHAS: [f64; 5] = [-0.5, 0.0, 0.5, 1.0, 2.5];

/// 7: n-point rules integrate x^k, k ≤ 2n-1, for n ≤ 64.
pub fn criterion_7() -> Check {
    timed("7", "quadrature", "gauss rule exactness", || {
        let mut worst = Worst::new();
        for &a in &EXACTNESS_ALPHAS {
            let g0 = gegenbauer_moment(0, a)?;
            for n in 1..=64 {
                let r = gauss_rule(n, a)?;
                for k in 0..2 * n {
                    let got = r.integrate(|x| x.powi(k as i32));
                    let want = gegenbauer_moment(k, a)?;
                    // odd moments vanish; measure them against the mass
                    let err = if want == 0.0 { got.abs() / g0 } else { rel(got, want) };
                    worst.update(err, || format!("a={a} n={n} k={k}"));
                }
            }
        }
        Ok((worst.value <= 1e-12, format!("max rel {:.2e} ({})", worst.value, worst.at)))
    })
}

/// 8: u2 truncation error below the Legendre bound; Legendre bound below Xiang's.
pub fn criterion_8() -> Check {
    timed("8", "coeffbounds", "truncation bound", || {
        let rho = 1.98;
        let s = exact_series(TestFunction::U2, 200);
        let m = TestFunction::U2.max_modulus(rho)?;
        let mut worst = Worst::new();
        for big_n in 2..=40 {
            let e = truncation_error_l2(&s, big_n)?;
            for mode in [ConstantMode::Explicit, ConstantMode::Unit] {
                let b = truncation_bound_legendre(big_n, rho, m, mode)?.value;
                worst.update(e / b, || format!("N={big_n} {}", mode.as_str()));
            }
        }
        let mut cmp = Worst::new();
        for &r in &[1.1, 1.5, 2.0] {
            for big_n in 2..=40 {
                let x = truncation_bound_xiang(big_n, r, 1.0)?.value;
                for mode in [ConstantMode::Explicit, ConstantMode::Unit] {
                    let l = truncation_bound_legendre(big_n, r, 1.0, mode)?.value;
                    cmp.update(l / x, || format!("rho={r} N={big_n} {}", mode.as_str()));
                }
            }
        }
        Ok((
            worst.value <= 1.0 && cmp.value < 1.0,
            format!("max error/bound {:.4} ({}); max ours/xiang {:.4} ({})", worst.value, worst.at, cmp.value, cmp.at),
        ))
    })
}

/// 9: the Laurent form of J_n^{α,α} on the ellipse against the recurrence.
pub fn criterion_9() -> Check {
    timed("9", "orthopoly", "gegenbauer on the ellipse", || {
        let mut worst = Worst::new();
        let rhos = [1.05, 1.3, 1.7, 2.2, 3.0];
        for &a in &[-0.5, 0.0, 0.5, 1.0, 2.0] {
            let idx = JacobiIndex::gegenbauer(a)?;
            for n in 0..=50 {
                for &rho in &rhos {
                    for k in 0..16 {
                        let w = Complex64::from_polar(rho, PI * (k as f64 + 0.37) / 16.0);
                        let z = (w + w.inv()) * 0.5;
                        let rec = jacobi_eval(n, idx, z);
                        let lau = gegenbauer_on_ellipse(n, a, w)?;
                        worst.update((rec - lau).norm() / rec.norm(), || format!("a={a} n={n} rho={rho}"));
                    }
                }
            }
        }
        Ok((worst.value <= 1e-9, format!("max rel {:.2e} ({})", worst.value, worst.at)))
    })
}

/// Every acceptance criterion in order, including the known deviations.
pub fn run_acceptance(cfg: &VerifyConfig) -> Vec<Check> {
    vec![
        criterion_1(),
        criterion_2a(),
        criterion_2b(),
        criterion_3(cfg),
        criterion_4a(),
        criterion_4b(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ]
}

fn extra_checks() -> Vec<Check> {
    vec![
        timed("g1", "gammafn", "log-gamma references and legendre norms", || {
            let refs = [(0.5, 0.5 * PI.ln()), (1.0, 0.0), (10.0, 362880f64.ln()), (100.0, 359.13420536957539878)];
            let mut worst = 0.0f64;
            for (x, want) in refs {
                let got = log_gamma(x)?;
                worst = worst.max((got - want).abs() / want.abs().max(1.0));
            }
            for n in 0..200u64 {
                let g = gamma_norm(n, JacobiIndex::LEGENDRE).value;
                worst = worst.max(rel(g, 2.0 / (2 * n + 1) as f64));
            }
            Ok((worst <= 1e-13, format!("max rel {worst:.2e}")))
        }),
        timed("e1", "ellipse", "sampled max modulus against closed form", || {
            let mut worst = 0.0f64;
            for tf in [TestFunction::U1, TestFunction::U2] {
                for &rho in &[1.1, 1.5, 1.9] {
                    let m = max_modulus(&catalog(tf), EllipseRadius::new(rho)?, DEFAULT_GRID, DEFAULT_TOL)?;
                    worst = worst.max(rel(m, tf.max_modulus(rho)?));
                }
            }
            Ok((worst <= 1e-9, format!("max rel {worst:.2e}")))
        }),
        timed("x1", "expand", "numerical coefficients against known series", || {
            let mut worst = 0.0f64;
            for tf in [TestFunction::U1, TestFunction::U2] {
                let num = expansion_coeffs(&catalog(tf), tf.natural_index(), 40, None)?;
                let num = crate::expand::basis_rescale(&num, exact_series(tf, 1).basis)?;
                for n in 0..40 {
                    worst = worst.max((num.coefficients[n] - tf.exact_coefficient(n)).abs());
                }
            }
            Ok((worst <= 1e-12, format!("max abs {worst:.2e}")))
        }),
    ]
}

/// The full invariant suite.
pub fn run_verify(cfg: &VerifyConfig) -> VerifyReport {
    let mut checks = extra_checks();
    for mut c in run_acceptance(cfg) {
        c.informational = KNOWN_DEVIATIONS.contains(&c.id.as_str());
        checks.push(c);
    }
    VerifyReport { checks }
}
