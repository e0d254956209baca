//! Log-Gamma kernels, Gamma ratios, the Υ constants and the Jacobi norm.

use std::sync::OnceLock;

use crate::error::{domain, Result};
use crate::orthopoly::JacobiIndex;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// B_2, B_4, ..., B_16
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

const STIRLING_MIN: f64 = 10.0;
const ZETA_TERMS: usize = 48;

/// Stirling correction S(x) = lnΓ(x) - [(x-1/2)ln x - x + ln√(2π)], x ≥ 10.
fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut acc = 0.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        acc += b / (two_k * (two_k - 1.0)) * pow;
        pow *= inv2;
    }
    acc
}

/// ζ(k) - 1 for k = 2..ZETA_TERMS+1, by Euler–Maclaurin with cutoff 20.
fn zeta_minus_one() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let cut = 20.0_f64;
        let mut out = Vec::with_capacity(ZETA_TERMS);
        for k in 2..(ZETA_TERMS + 2) {
            let kf = k as f64;
            let mut tail = cut.powf(1.0 - kf) / (kf - 1.0) + 0.5 * cut.powf(-kf);
            // (k)_{2j-1} / (2j)! accumulated incrementally
            let mut rising = kf;
            let mut fact = 2.0;
            for (j, b) in BERNOULLI.iter().enumerate() {
                let j1 = j as f64 + 1.0;
                tail += b / fact * rising * cut.powf(-kf - 2.0 * j1 + 1.0);
                rising *= (kf + 2.0 * j1 - 1.0) * (kf + 2.0 * j1);
                fact *= (2.0 * j1 + 1.0) * (2.0 * j1 + 2.0);
            }
            let mut head = 0.0;
            for m in (2..20).rev() {
                head += (m as f64).powf(-kf);
            }
            out.push(head + tail);
        }
        out
    })
}

/// lnΓ(2+ε) for |ε| ≤ 1/2.
fn lgamma_two_plus(eps: f64) -> f64 {
    let z = zeta_minus_one();
    let mut acc = 0.0;
    let mut pow = eps * eps;
    for (i, zk) in z.iter().enumerate() {
        let k = (i + 2) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * zk * pow / k;
        acc += term;
        if term.abs() < 1e-18 * acc.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        pow *= eps;
    }
    (1.0 - EULER_GAMMA) * eps + acc
}

/// lnΓ(x) for x > 0 without argument checking.
pub(crate) fn lgamma(x: f64) -> f64 {
    if x < 0.5 {
        lgamma(x + 1.0) - x.ln()
    } else if x < 1.5 {
        let eps = x - 1.0;
        lgamma_two_plus(eps) - eps.ln_1p()
    } else if x < 2.5 {
        lgamma_two_plus(x - 2.0)
    } else if x < STIRLING_MIN {
        let mut shifted = x;
        let mut prod = 1.0;
        while shifted < STIRLING_MIN {
            prod *= shifted;
            shifted += 1.0;
        }
        lgamma(shifted) - prod.ln()
    } else {
        (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_tail(x)
    }
}

/// lnΓ(x) - lnΓ(y) for x, y > 0, unchecked.
pub(crate) fn lgamma_ratio(x: f64, y: f64) -> f64 {
    if x == y {
        return 0.0;
    }
    let lo = x.min(y);
    if lo >= STIRLING_MIN {
        let d = x - y;
        d * y.ln() + (x - 0.5) * (d / y).ln_1p() - d + stirling_tail(x) - stirling_tail(y)
    } else if x.max(y) < STIRLING_MIN {
        lgamma(x) - lgamma(y)
    } else {
        let shift = (STIRLING_MIN - lo).ceil();
        let mut prod = 1.0;
        for k in 0..shift as usize {
            prod *= (x + k as f64) / (y + k as f64);
        }
        lgamma_ratio(x + shift, y + shift) - prod.ln()
    }
}

/// Natural log of Γ(x), x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma needs a finite positive argument, got {x}"));
    }
    Ok(lgamma(x))
}

/// ln(Γ(x)/Γ(y)) for x, y > 0, accurate when x and y are large and close.
pub fn ln_gamma_ratio(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return domain(format!("Gamma ratio needs positive arguments, got ({x}, {y})"));
    }
    Ok(lgamma_ratio(x, y))
}

/// Γ(n+a)/Γ(n+b).
pub fn gamma_ratio(n: u64, a: f64, b: f64) -> Result<f64> {
    if n < 1 {
        return domain("gamma_ratio needs n >= 1");
    }
    let nf = n as f64;
    Ok(ln_gamma_ratio(nf + a, nf + b)?.exp())
}

/// Υ_n^{a,b} with its inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpsilonConstant {
    pub n: u64,
    pub a: f64,
    pub b: f64,
    pub value: f64,
}

/// Υ_n^{a,b} = exp((a-b)/(2(n+b-1)) + 1/(12(n+a-1)) + (a-b)²/n).
pub fn upsilon(n: u64, a: f64, b: f64) -> Result<UpsilonConstant> {
    let nf = n as f64;
    if n < 1 || !(nf + a > 1.0) || !(nf + b > 1.0) {
        return domain(format!(
            "upsilon needs n >= 1, n+a > 1, n+b > 1; got n={n}, a={a}, b={b}"
        ));
    }
    let d = a - b;
    let value = (d / (2.0 * (nf + b - 1.0)) + 1.0 / (12.0 * (nf + a - 1.0)) + d * d / nf).exp();
    Ok(UpsilonConstant { n, a, b, value })
}

/// γ_n^{α,β} with its inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaNorm {
    pub index: JacobiIndex,
    pub n: u64,
    pub value: f64,
}

/// ln γ_n^{α,β}.
pub fn ln_gamma_norm(n: u64, idx: JacobiIndex) -> f64 {
    let (a, b) = (idx.alpha(), idx.beta());
    let s = a + b;
    let nf = n as f64;
    if n == 0 {
        (s + 1.0) * std::f64::consts::LN_2 + lgamma(a + 1.0) + lgamma(b + 1.0) - lgamma(s + 2.0)
    } else {
        (s + 1.0) * std::f64::consts::LN_2 - (2.0 * nf + s + 1.0).ln()
            + lgamma_ratio(nf + a + 1.0, nf + 1.0)
            + lgamma_ratio(nf + b + 1.0, nf + s + 1.0)
    }
}

/// γ_n^{α,β} = ∫ (J_n^{α,β})² ω^{α,β}.
pub fn gamma_norm(n: u64, idx: JacobiIndex) -> GammaNorm {
    GammaNorm {
        index: idx,
        n,
        value: ln_gamma_norm(n, idx).exp(),
    }
}

/// 2^{α+β+1}/(2n+α+β+1)·Υ_n^{α+1,1}·Υ_n^{β+1,α+β+1}.
pub fn gamma_norm_bound(n: u64, idx: JacobiIndex) -> Result<f64> {
    let (a, b) = (idx.alpha(), idx.beta());
    let s = a + b;
    let nf = n as f64;
    if n < 1 || !(nf + s > 0.0) {
        return domain(format!("gamma_norm_bound needs n >= 1 and n+α+β > 0; got n={n}, α+β={s}"));
    }
    let u1 = upsilon(n, a + 1.0, 1.0)?.value;
    let u2 = upsilon(n, b + 1.0, s + 1.0)?.value;
    Ok(2f64.powf(s + 1.0) / (2.0 * nf + s + 1.0) * u1 * u2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // Reference values from a 40-digit evaluation at the exact binary inputs.
    const REFERENCE: [(f64, f64); 15] = [
        (0.001, 6.9071788853838536825),
        (0.1, 2.2527126517342059599),
        (0.5, 0.57236494292470008707),
        (0.9, 0.066376239734742971189),
        (1.0000001, -5.772155829918507097e-8),
        (1.3, -0.10817480950786047095),
        (1.9999, -0.00004227520877215345801),
        (2.0001, 0.00004228165811291994632),
        (2.4, 0.21685932244884163187),
        (3.7, 1.4280723266653879219),
        (9.99, 12.77931521435019288),
        (10.5, 13.940625219403763633),
        (123.456, 469.60554712992946873),
        (1e4, 82099.717496442377273),
        (999999.5, 12815497.661392707678),
    ];

    #[test]
    fn log_gamma_matches_reference() {
        for (x, v) in REFERENCE {
            let got = log_gamma(x).unwrap();
            assert!(rel(got, v) < 1e-13, "x={x}: {got} vs {v}");
        }
    }

    #[test]
    fn log_gamma_examples() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!((log_gamma(0.5).unwrap() - 0.5723649429247001).abs() < 1e-15);
        assert!(rel(log_gamma(5.0).unwrap(), 24f64.ln()) < 1e-14);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_factorials() {
        let mut lf = 0.0f64;
        for n in 1..170u32 {
            lf += (n as f64).ln();
            let got = lgamma(n as f64 + 1.0);
            assert!((got - lf).abs() <= 1e-13 * lf.abs().max(1.0), "n={n}");
        }
    }

    #[test]
    fn gamma_ratio_examples() {
        assert_eq!(gamma_ratio(1, 1.0, 1.0).unwrap(), 1.0);
        let two_over_sqrt_pi = 2.0 / std::f64::consts::PI.sqrt();
        assert!(rel(gamma_ratio(1, 1.0, 0.5).unwrap(), two_over_sqrt_pi) < 1e-14);
        let r = gamma_ratio(40, 1.0, 0.5).unwrap();
        assert!(r <= upsilon(40, 1.0, 0.5).unwrap().value * 40f64.sqrt());
        assert!(gamma_ratio(1, -1.0, 0.5).is_err());
        assert!(gamma_ratio(1_000_000, 0.5, 0.0).unwrap().is_finite());
    }

    #[test]
    fn ln_gamma_ratio_large_close_arguments() {
        // Γ(x+1)/Γ(x) = x exactly
        for x in [10.0, 55.5, 1e3, 1e6, 3e7] {
            assert!(rel(ln_gamma_ratio(x + 1.0, x).unwrap(), x.ln()) < 1e-14);
        }
        // mixed branch: one argument below the Stirling cut
        let direct = lgamma(12.5) - lgamma(3.25);
        assert!(rel(lgamma_ratio(12.5, 3.25), direct) < 1e-14);
    }

    #[test]
    fn upsilon_examples() {
        for n in [2u64, 7, 50] {
            let a = 1.7;
            let u = upsilon(n, a, a).unwrap().value;
            assert!(rel(u, (1.0 / (12.0 * (n as f64 + a - 1.0))).exp()) < 1e-15);
        }
        let u = upsilon(10, 1.0, 0.5).unwrap().value;
        let want = (0.5_f64 / (2.0 * 9.5) + 1.0 / (12.0 * 10.0) + 0.25 / 10.0).exp();
        assert!(rel(u, want) < 1e-15);
        assert!((upsilon(10_000, 2.0, 1.0).unwrap().value - 1.0).abs() < 1e-3);
        assert!(upsilon(1, -0.5, 2.0).is_err());
    }

    #[test]
    fn gamma_norm_examples() {
        let leg = JacobiIndex::new(0.0, 0.0).unwrap();
        assert!(rel(gamma_norm(3, leg).value, 2.0 / 7.0) < 1e-14);
        assert!(rel(gamma_norm(0, leg).value, 2.0) < 1e-15);
        let cheb = JacobiIndex::new(-0.5, -0.5).unwrap();
        assert!(rel(gamma_norm(0, cheb).value, std::f64::consts::PI) < 1e-14);
    }

    #[test]
    fn gamma_norm_legendre_identity() {
        let leg = JacobiIndex::new(0.0, 0.0).unwrap();
        for n in 0..=500u64 {
            let v = gamma_norm(n, leg).value * (2.0 * n as f64 + 1.0);
            assert!((v - 2.0).abs() < 1e-13, "n={n}: {v}");
        }
    }

    #[test]
    fn gamma_norm_bound_examples() {
        let leg = JacobiIndex::new(0.0, 0.0).unwrap();
        assert!(gamma_norm_bound(5, leg).unwrap() >= 2.0 / 11.0);
        let u = JacobiIndex::new(0.5, 0.5).unwrap();
        assert!(gamma_norm_bound(1, u).unwrap() >= gamma_norm(1, u).value);
        let idx = JacobiIndex::new(0.3, -0.2).unwrap();
        let r = gamma_norm_bound(100, idx).unwrap() / gamma_norm(100, idx).value;
        assert!((1.0..=1.1).contains(&r), "ratio {r}");
        let cheb = JacobiIndex::new(-0.5, -0.5).unwrap();
        assert!(gamma_norm_bound(1, cheb).is_err());
    }

    // The Gamma-ratio inequality is only provable for a ≥ b, b ≤ 1.
    #[test]
    fn gamma_ratio_bound_counterexamples_outside_proof_region() {
        let r = gamma_ratio(2, 5.0, 4.1).unwrap();
        let bound = upsilon(2, 5.0, 4.1).unwrap().value * 2f64.powf(0.9);
        assert!(r > bound);
        for n in 3..=200u64 {
            let r = gamma_ratio(n, -0.9, -0.8).unwrap();
            let bound = upsilon(n, -0.9, -0.8).map(|u| u.value * (n as f64).powf(-0.1));
            if let Ok(b) = bound {
                assert!(r > b, "n={n}");
            }
        }
    }

    #[test]
    fn gamma_norm_bound_counterexample_for_mixed_signs() {
        let idx = JacobiIndex::new(-0.9, 2.0).unwrap();
        assert!(gamma_norm(150, idx).value > gamma_norm_bound(150, idx).unwrap());
    }

    #[test]
    fn gamma_norm_bound_holds_for_same_sign_parameters() {
        let grid = [-0.9, -0.5, -0.2, 0.0, 0.5, 1.0, 2.0, 3.5, 5.0];
        for &a in &grid {
            for &b in &grid {
                if a * b < 0.0 {
                    continue;
                }
                let idx = JacobiIndex::new(a, b).unwrap();
                for n in 1..=200u64 {
                    if let Ok(bd) = gamma_norm_bound(n, idx) {
                        let g = gamma_norm(n, idx).value;
                        assert!(g <= bd * (1.0 + 1e-13), "({a},{b}) n={n}: {g} > {bd}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn duplication_identity(z in 0.1f64..100.0) {
            let lhs = lgamma(2.0 * z);
            let rhs = lgamma(z) + lgamma(z + 0.5) + (2.0 * z - 1.0) * std::f64::consts::LN_2
                - 0.5 * std::f64::consts::PI.ln();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn recurrence_identity(x in 1e-3f64..1e5) {
            let d = lgamma(x + 1.0) - lgamma(x);
            // both terms carry rounding of order ε·|lnΓ(x)|
            prop_assert!((d - x.ln()).abs() <= 4e-15 * lgamma(x).abs().max(1.0));
        }

        #[test]
        fn gamma_ratio_bound_on_proof_region(b in -0.9f64..1.0, gap in 0.0f64..4.0, n in 2u64..200) {
            let a = b + gap;
            let nf = n as f64;
            prop_assume!(nf + a > 1.0 && nf + b > 1.0);
            let r = gamma_ratio(n, a, b).unwrap();
            let bound = upsilon(n, a, b).unwrap().value * nf.powf(a - b);
            prop_assert!(r <= bound * (1.0 + 1e-13), "n={} a={} b={}: {} > {}", n, a, b, r, bound);
        }
    }
}
