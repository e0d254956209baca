//! The coefficients σ_{n,j}^{α,β} = (1/γ_n) ∫ U_{n+j} J_n^{α,β} ω^{α,β}.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::gammafn::{gamma_norm, lgamma, lgamma_ratio, ln_gamma_norm};
use crate::orthopoly::{connection_coeffs, jacobi_eval_all, JacobiIndex};
use crate::quadrature::gauss_jacobi_rule;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Largest j accepted by the exact alternating sums. Rational sizes grow
/// linearly in j, so this is a cost guard.
pub const GENERAL_MAX_J: usize = 512;

/// Tables for α ≠ β switch to quadrature beyond this many entries.
const GENERAL_TABLE_LIMIT: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SigmaMethod {
    ClosedForm,
    GeneralFormula,
    ChebType,
    LegType,
    Oracle,
}

impl SigmaMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SigmaMethod::ClosedForm => "closed_form",
            SigmaMethod::GeneralFormula => "general_formula",
            SigmaMethod::ChebType => "cheb_type",
            SigmaMethod::LegType => "leg_type",
            SigmaMethod::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaClosedCase {
    Cheb1,
    Cheb2,
    Legendre,
    /// Only the odd-j zero rule; even j has no closed value in this case.
    GegenbauerParity,
}

/// σ_{n,0..=J} for fixed n and (α, β).
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaTable {
    pub n: usize,
    pub idx: JacobiIndex,
    pub values: Vec<f64>,
    pub method: SigmaMethod,
}

impl SigmaTable {
    pub fn j_max(&self) -> usize {
        self.values.len() - 1
    }
}

/// ĉ_j^n(α, β, a, b) = (1/γ_n^{α,β}) ∫ J_{n+j}^{a,b} J_n^{α,β} ω^{α,β}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChatCoeff {
    pub n: usize,
    pub j: usize,
    pub idx: JacobiIndex,
    pub target: (f64, f64),
    pub value: f64,
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite parameter")
}

fn big_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let negative = r.is_negative();
    let num = r.numer().abs().to_biguint().expect("nonnegative");
    let den = r.denom().abs().to_biguint().expect("nonnegative");
    let shift = 64 + den.bits() as i64 - num.bits() as i64;
    let q = if shift >= 0 { (num << shift as u64) / den } else { num / (den << (-shift) as u64) };
    let mut v = q.to_f64().expect("64-bit quotient");
    // scale by 2^-shift in two steps to stay inside the exponent range
    let half = shift / 2;
    v *= 2f64.powi(-(half as i32));
    v *= 2f64.powi(-((shift - half) as i32));
    if negative {
        -v
    } else {
        v
    }
}

/// Σ_{m=0}^{j} t_m / t_0 exactly, where
/// t_{m+1}/t_m = -(j-m)(p_1+m)(p_2+m)/((m+1)(q_1+m)(q_2+m)) with rational offsets.
/// Returns the f64 value and the f64 magnitude sum Σ|t_m/t_0|.
fn exact_alternating(j: usize, p: [BigRational; 2], q: [BigRational; 2]) -> (f64, f64) {
    let pf = p.clone().map(|r| big_to_f64(&r));
    let qf = q.clone().map(|r| big_to_f64(&r));
    let mut term = BigRational::one();
    let mut total = BigRational::one();
    let mut abs_sum = 1.0f64;
    let mut abs_term = 1.0f64;
    for m in 0..j {
        let mb = BigRational::from_integer(BigInt::from(m));
        let mf = m as f64;
        let factor = BigRational::from_integer(BigInt::from(j - m)) * (&p[0] + &mb) * (&p[1] + &mb)
            / (BigRational::from_integer(BigInt::from(m + 1)) * (&q[0] + &mb) * (&q[1] + &mb));
        term = -(term * factor);
        total += &term;
        abs_term *= ((j - m) as f64 * (pf[0] + mf) * (pf[1] + mf) / ((m + 1) as f64 * (qf[0] + mf) * (qf[1] + mf))).abs();
        abs_sum += abs_term;
    }
    (big_to_f64(&total), abs_sum)
}

fn int(k: f64) -> BigRational {
    rational(k)
}

/// Offsets of the general σ term ratio, built from the exact parameters.
fn general_offsets(n: usize, j: usize, idx: JacobiIndex) -> ([BigRational; 2], [BigRational; 2]) {
    let (a, b) = (rational(idx.alpha()), rational(idx.beta()));
    let nf = n as f64;
    let s = &a + &b;
    (
        [int(2.0 * nf + j as f64 + 2.0), int(nf + 1.0) + &a],
        [int(nf) + BigRational::new(BigInt::from(3), BigInt::from(2)), int(2.0 * nf + 2.0) + s],
    )
}

fn check_j(j: usize, context: &str, log10_cancellation: impl FnOnce() -> f64) -> Result<()> {
    if j > GENERAL_MAX_J {
        return Err(Error::Precision {
            context: format!("{context}: j = {j} exceeds the supported range j <= {GENERAL_MAX_J}"),
            log10_cancellation: log10_cancellation(),
        });
    }
    Ok(())
}

/// Lower estimate of the digits lost by the alternating sum, from log-space term
/// magnitudes against the a-priori size bound |σ_{n,j}| ≤ σ_{n,j mod 2} + j√(γ_0/γ_n).
fn general_cancellation_log10(n: usize, j: usize, idx: JacobiIndex) -> f64 {
    let (a, s) = (idx.alpha(), idx.alpha() + idx.beta());
    let nf = n as f64;
    let ln_pref = ln_general_prefactor(n, j, idx);
    let mut best = f64::NEG_INFINITY;
    for m in 0..=j {
        let mf = m as f64;
        let lt = lgamma_ratio(2.0 * nf + j as f64 + mf + 2.0, 2.0 * nf + s + 2.0 + mf)
            + lgamma_ratio(nf + mf + a + 1.0, nf + mf + 1.5)
            - lgamma(mf + 1.0)
            - lgamma((j - m) as f64 + 1.0)
            - (lgamma_ratio(2.0 * nf + j as f64 + 2.0, 2.0 * nf + s + 2.0) + lgamma_ratio(nf + a + 1.0, nf + 1.5)
                - lgamma(j as f64 + 1.0));
        best = best.max(lt);
    }
    let (s0, s1) = sigma_first_two(n, idx);
    let scale = s0.abs().max(s1.abs()) + j as f64 * (gamma_norm(0, idx).value / gamma_norm(n as u64, idx).value).sqrt();
    (ln_pref + best - scale.ln()) / std::f64::consts::LN_10
}

/// ln of the factor multiplying Σ t_m/t_0 in σ_{n,j}:
/// (√π/2)·Γ(n+s+1)/Γ(2n+s+1)·Γ(2n+j+2)/(j!·Γ(n+3/2)).
fn ln_general_prefactor(n: usize, j: usize, idx: JacobiIndex) -> f64 {
    let s = idx.alpha() + idx.beta();
    let nf = n as f64;
    let jf = j as f64;
    let head = if n == 0 { 0.0 } else { lgamma_ratio(nf + s + 1.0, 2.0 * nf + s + 1.0) };
    (0.5 * SQRT_PI).ln() + head + lgamma_ratio(2.0 * nf + jf + 2.0, nf + 1.5) - lgamma(jf + 1.0)
}

/// σ_{n,j}^{α,β} by the general alternating-sum formula, summed exactly.
pub fn sigma_general(n: usize, j: usize, idx: JacobiIndex) -> Result<f64> {
    check_j(j, "sigma_general", || general_cancellation_log10(n, j, idx))?;
    let (p, q) = general_offsets(n, j, idx);
    let (sum, _) = exact_alternating(j, p, q);
    if sum == 0.0 {
        return Ok(0.0);
    }
    Ok(sum.signum() * (ln_general_prefactor(n, j, idx) + sum.abs().ln()).exp())
}

/// log10 of Σ|t_m| / |Σ t_m| for the general formula: the digits a plain
/// double-precision summation would lose.
pub fn sigma_general_condition(n: usize, j: usize, idx: JacobiIndex) -> Result<f64> {
    check_j(j, "sigma_general_condition", || general_cancellation_log10(n, j, idx))?;
    let (p, q) = general_offsets(n, j, idx);
    let (sum, abs_sum) = exact_alternating(j, p, q);
    Ok(if sum == 0.0 { f64::INFINITY } else { (abs_sum / sum.abs()).log10() })
}

pub fn c_hat(n: usize, j: usize, idx: JacobiIndex, target_a: f64, target_b: f64) -> Result<ChatCoeff> {
    let target = JacobiIndex::new(target_a, target_b)?;
    let out = |value| ChatCoeff { n, j, idx, target: (target_a, target_b), value };
    if n + j == 0 {
        return Ok(out(1.0));
    }
    check_j(j, "c_hat", || f64::NAN)?;
    let (al, s) = (idx.alpha(), idx.alpha() + idx.beta());
    let (ta, tb) = (target.alpha(), target.beta());
    let nf = n as f64;
    let jf = j as f64;
    let (ra, rb) = (rational(al), rational(idx.beta()));
    let (rta, rtb) = (rational(ta), rational(tb));
    let (sum, _) = exact_alternating(
        j,
        [int(2.0 * nf + jf + 1.0) + &rta + &rtb, int(nf + 1.0) + &ra],
        [int(nf + 1.0) + &rta, int(2.0 * nf + 2.0) + ra + rb],
    );
    if sum == 0.0 {
        return Ok(out(0.0));
    }
    let head = if n == 0 { 0.0 } else { lgamma_ratio(nf + s + 1.0, 2.0 * nf + s + 1.0) };
    let ln_pref = lgamma_ratio(nf + jf + ta + 1.0, nf + ta + 1.0)
        + lgamma_ratio(2.0 * nf + jf + ta + tb + 1.0, nf + jf + ta + tb + 1.0)
        + head
        - lgamma(jf + 1.0);
    Ok(out(sum.signum() * (ln_pref + sum.abs().ln()).exp()))
}

/// Closed forms for the first-kind, second-kind and Legendre cases.
pub fn sigma_closed(n: usize, j: usize, case: SigmaClosedCase) -> Result<f64> {
    let nf = n as f64;
    match case {
        SigmaClosedCase::Cheb1 => Ok(if j % 2 == 1 {
            0.0
        } else if n == 0 {
            1.0
        } else {
            2.0 * SQRT_PI * lgamma_ratio(nf + 1.0, nf + 0.5).exp()
        }),
        SigmaClosedCase::Cheb2 => Ok(if j >= 1 { 0.0 } else { 0.5 * SQRT_PI * lgamma_ratio(nf + 2.0, nf + 1.5).exp() }),
        SigmaClosedCase::Legendre => {
            if j % 2 == 1 {
                return Ok(0.0);
            }
            let l = (j / 2) as f64;
            Ok((nf + 0.5) * (lgamma_ratio(l + 0.5, l + 1.0) + lgamma_ratio(nf + l + 1.0, nf + l + 1.5)).exp())
        }
        SigmaClosedCase::GegenbauerParity => {
            if j % 2 == 1 {
                Ok(0.0)
            } else {
                domain("the parity rule only fixes odd j; use sigma_gegenbauer for even j")
            }
        }
    }
}

/// σ_{n,j}^{α,α} from the Gegenbauer connection formula, λ = α + 1/2:
/// σ_{n,2l} = (2λ)_n/(α+1)_n · (λ+n)/λ · (1-λ)_l/l! · (n+l)!/(λ+1)_{n+l}.
pub fn sigma_gegenbauer(n: usize, j: usize, alpha: f64) -> Result<f64> {
    JacobiIndex::gegenbauer(alpha)?;
    if j % 2 == 1 {
        return Ok(0.0);
    }
    if alpha == -0.5 {
        return sigma_closed(n, j, SigmaClosedCase::Cheb1);
    }
    let lam = alpha + 0.5;
    let l = (j / 2) as f64;
    let nf = n as f64;
    // (1-λ)_l/l!, sign-tracked: 1-λ may be a nonpositive integer or negative
    let mut poch = 1.0;
    for i in 0..(j / 2) {
        let fi = i as f64;
        poch *= (1.0 - lam + fi) / (fi + 1.0);
        if poch == 0.0 {
            return Ok(0.0);
        }
    }
    // (2λ)_n (λ+n)/λ = 2 (2λ+1)_{n-1} (λ+n) for n ≥ 1
    let head = if n == 0 {
        0.0
    } else {
        std::f64::consts::LN_2 + lgamma_ratio(2.0 * lam + nf, 2.0 * lam + 1.0) + (lam + nf).ln()
            - lgamma_ratio(alpha + 1.0 + nf, alpha + 1.0)
    };
    let tail = lgamma(nf + l + 1.0) - lgamma_ratio(lam + 1.0 + nf + l, lam + 1.0);
    Ok(poch * (head + tail).exp())
}

/// (σ_{n,0}, σ_{n,1}).
pub fn sigma_first_two(n: usize, idx: JacobiIndex) -> (f64, f64) {
    let (a, b) = (idx.alpha(), idx.beta());
    let s = a + b;
    let nf = n as f64;
    let head = if n == 0 { 0.0 } else { lgamma_ratio(nf + s + 1.0, 2.0 * nf + s + 1.0) };
    let s0 = (0.5 * SQRT_PI).ln() + lgamma_ratio(2.0 * nf + 2.0, nf + 1.5) + head;
    let s0 = s0.exp();
    let s1 = (b - a) * (2.0 * nf + 2.0) / (2.0 * nf + s + 2.0) * s0;
    (s0, s1)
}

/// σ_{n,j}^{k+1/2,l+1/2} through the connection to (1/2,1/2).
pub fn sigma_cheb_type(n: usize, j: usize, k: usize, l: usize) -> f64 {
    if j > k + l {
        return 0.0;
    }
    let base = JacobiIndex::CHEBYSHEV_U;
    let target = JacobiIndex::new(k as f64 + 0.5, l as f64 + 0.5).expect("valid index");
    let d = connection_coeffs(n, base, k, l).get(n + j);
    (0.5 * std::f64::consts::PI).sqrt() * d * (0.5 * ln_gamma_norm((n + j) as u64, base) - ln_gamma_norm(n as u64, target)).exp()
}

/// σ_{n,j}^{k,l} through the connection to Legendre.
pub fn sigma_leg_type(n: usize, j: usize, k: usize, l: usize) -> f64 {
    let base = JacobiIndex::LEGENDRE;
    let target = JacobiIndex::new(k as f64, l as f64).expect("valid index");
    let d = connection_coeffs(n, base, k, l);
    let mut acc = 0.0;
    for m in n..=(n + k + l) {
        if n + j < m {
            continue;
        }
        let s = sigma_closed(m, n + j - m, SigmaClosedCase::Legendre).expect("legendre closed form");
        acc += d.get(m) * 2.0 / (2.0 * m as f64 + 1.0) * s;
    }
    acc / gamma_norm(n as u64, target).value
}

/// Gauss order that integrates U_{n+j} J_n exactly, with margin.
pub fn oracle_order(n: usize, j: usize) -> usize {
    (2 * n + j + 2).div_ceil(2) + 2
}

/// σ_{n,j} by direct Gauss–Jacobi quadrature of the defining integral.
pub fn sigma_oracle(n: usize, j: usize, idx: JacobiIndex, quad_order: usize) -> Result<f64> {
    Ok(sigma_oracle_table(n, j, idx, quad_order)?[j])
}

/// σ_{n,0..=jmax} from one quadrature rule.
fn sigma_oracle_table(n: usize, jmax: usize, idx: JacobiIndex, quad_order: usize) -> Result<Vec<f64>> {
    if 2 * quad_order < 2 * n + jmax + 1 {
        return domain(format!("quadrature order {quad_order} is not exact for degree {}", 2 * n + jmax));
    }
    let rule = gauss_jacobi_rule(quad_order, idx)?;
    let mut acc = vec![0.0; jmax + 1];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let jn = *jacobi_eval_all(n, idx, x).last().expect("nonempty");
        let wj = w * jn;
        // U_k by recurrence, k = 0..=n+jmax
        let (mut u_prev, mut u) = (1.0, 2.0 * x);
        if n == 0 {
            acc[0] += wj;
        }
        for k in 1..=(n + jmax) {
            if k >= n {
                acc[k - n] += wj * u;
            }
            let next = 2.0 * x * u - u_prev;
            u_prev = u;
            u = next;
        }
    }
    let g = gamma_norm(n as u64, idx).value;
    Ok(acc.into_iter().map(|v| v / g).collect())
}

type CacheKey = (usize, u64, u64);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<SigmaTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<SigmaTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn build_table(n: usize, idx: JacobiIndex, jmax: usize) -> Result<SigmaTable> {
    let (a, b) = (idx.alpha(), idx.beta());
    let (values, method) = if a == b {
        let v = (0..=jmax).map(|j| sigma_gegenbauer(n, j, a)).collect::<Result<Vec<_>>>()?;
        (v, SigmaMethod::ClosedForm)
    } else if jmax <= GENERAL_TABLE_LIMIT {
        let v = (0..=jmax).map(|j| sigma_general(n, j, idx)).collect::<Result<Vec<_>>>()?;
        (v, SigmaMethod::GeneralFormula)
    } else {
        (sigma_oracle_table(n, jmax, idx, oracle_order(n, jmax))?, SigmaMethod::Oracle)
    };
    Ok(SigmaTable { n, idx, values, method })
}

/// Memoized σ_{n,0..=J}; the returned table may extend past J.
pub fn sigma_table(n: usize, idx: JacobiIndex, jmax: usize) -> Result<Arc<SigmaTable>> {
    let key = (n, idx.alpha().to_bits(), idx.beta().to_bits());
    {
        let guard = cache().read().expect("sigma cache poisoned");
        if let Some(t) = guard.get(&key) {
            if t.j_max() >= jmax {
                return Ok(Arc::clone(t));
            }
        }
    }
    let table = Arc::new(build_table(n, idx, jmax)?);
    let mut guard = cache().write().expect("sigma cache poisoned");
    let entry = guard.entry(key).or_insert_with(|| Arc::clone(&table));
    if entry.j_max() < table.j_max() {
        *entry = Arc::clone(&table);
    }
    Ok(Arc::clone(entry))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn idx(a: f64, b: f64) -> JacobiIndex {
        JacobiIndex::new(a, b).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        if b == 0.0 {
            a.abs()
        } else {
            ((a - b) / b).abs()
        }
    }

    #[test]
    fn general_examples() {
        assert_eq!(sigma_general(3, 1, idx(0.7, 0.7)).unwrap(), 0.0);
        let want = SQRT_PI * 24.0 / lgamma(4.5).exp();
        assert!(rel(sigma_general(4, 0, idx(0.0, 0.0)).unwrap(), want) < 1e-13);
        assert!((want - 3.657142857142857).abs() < 1e-14);
        let cheb = sigma_general(2, 4, JacobiIndex::CHEBYSHEV_T).unwrap();
        let closed = 2.0 * SQRT_PI * 2.0 / lgamma(2.5).exp();
        assert!(rel(cheb, closed) < 1e-13);
        assert!(rel(cheb, sigma_oracle(2, 4, JacobiIndex::CHEBYSHEV_T, oracle_order(2, 4)).unwrap()) < 1e-12);
    }

    #[test]
    fn general_guard_reports_cancellation() {
        match sigma_general(5, GENERAL_MAX_J + 1, idx(0.3, 0.2)) {
            Err(Error::Precision { log10_cancellation, .. }) => assert!(log10_cancellation > 20.0),
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn general_sum_is_badly_conditioned() {
        // a double-precision summation would lose most of its digits here
        let c = sigma_general_condition(20, 20, idx(0.0, 0.0)).unwrap();
        assert!(c > 20.0, "condition 1e{c}");
    }

    #[test]
    fn closed_examples() {
        assert!(rel(sigma_closed(1, 0, SigmaClosedCase::Cheb1).unwrap(), 4.0) < 1e-14);
        assert_eq!(sigma_closed(3, 5, SigmaClosedCase::Legendre).unwrap(), 0.0);
        assert_eq!(sigma_closed(2, 2, SigmaClosedCase::Cheb2).unwrap(), 0.0);
        assert_eq!(sigma_closed(2, 3, SigmaClosedCase::GegenbauerParity).unwrap(), 0.0);
        assert!(sigma_closed(2, 2, SigmaClosedCase::GegenbauerParity).is_err());
    }

    #[test]
    fn cheb1_at_degree_zero_is_one() {
        for j in [0usize, 2, 6] {
            let o = sigma_oracle(0, j, JacobiIndex::CHEBYSHEV_T, oracle_order(0, j)).unwrap();
            assert!(rel(o, 1.0) < 1e-13);
            assert_eq!(sigma_closed(0, j, SigmaClosedCase::Cheb1).unwrap(), 1.0);
        }
    }

    #[test]
    fn cheb1_matches_oracle() {
        for n in 0..=10 {
            for j in 0..=10 {
                let o = sigma_oracle(n, j, JacobiIndex::CHEBYSHEV_T, oracle_order(n, j)).unwrap();
                let c = sigma_closed(n, j, SigmaClosedCase::Cheb1).unwrap();
                assert!((o - c).abs() <= 1e-10 * c.abs().max(1.0), "n={n} j={j}");
            }
        }
    }

    #[test]
    fn first_two_examples() {
        let (s0, s1) = sigma_first_two(4, idx(0.3, 0.3));
        assert!(s0 > 0.0 && s1 == 0.0);
        let (s0, _) = sigma_first_two(0, idx(0.0, 0.0));
        assert!(rel(s0, 1.0) < 1e-15);
        let (s0, _) = sigma_first_two(0, JacobiIndex::CHEBYSHEV_T);
        assert!(rel(s0, 1.0) < 1e-15);
        let i = idx(1.0, 0.0);
        let (s0, s1) = sigma_first_two(5, i);
        assert!(rel(s0, sigma_general(5, 0, i).unwrap()) < 1e-12);
        assert!(rel(s1, sigma_general(5, 1, i).unwrap()) < 1e-12);
        assert!(rel(s1, sigma_oracle(5, 1, i, oracle_order(5, 1)).unwrap()) < 1e-12);
    }

    #[test]
    fn cheb_type_examples() {
        for n in 0..12usize {
            let nf = n as f64;
            let want = SQRT_PI / 4.0 * (lgamma(nf + 1.0) - lgamma(nf + 1.5)).exp() * (nf + 2.0);
            assert!(rel(sigma_cheb_type(n, 0, 1, 0), want) < 1e-13, "n={n}");
            assert_eq!(sigma_cheb_type(n, 2, 1, 0), 0.0);
            let c2 = sigma_closed(n, 0, SigmaClosedCase::Cheb2).unwrap();
            assert!(rel(sigma_cheb_type(n, 0, 0, 0), c2) < 1e-13);
        }
    }

    #[test]
    fn cheb_type_matches_oracle() {
        for &(k, l) in &[(1usize, 0usize), (0, 2), (2, 1)] {
            let i = idx(k as f64 + 0.5, l as f64 + 0.5);
            for n in 0..=8 {
                for j in 0..=5 {
                    let o = sigma_oracle(n, j, i, oracle_order(n, j)).unwrap();
                    let v = sigma_cheb_type(n, j, k, l);
                    assert!((o - v).abs() <= 1e-11 * v.abs().max(1.0), "k={k} l={l} n={n} j={j}");
                }
            }
        }
    }

    #[test]
    fn leg_type_examples() {
        for n in 0..10usize {
            let nf = n as f64;
            for lj in 0..5usize {
                let even = sigma_leg_type(n, 2 * lj, 1, 0);
                let want = (nf + 1.0) / (2.0 * nf + 1.0) * sigma_closed(n, 2 * lj, SigmaClosedCase::Legendre).unwrap();
                assert!(rel(even, want) < 1e-13);
                let odd = sigma_leg_type(n, 2 * lj + 1, 1, 0);
                let want = -(nf + 1.0) / (2.0 * nf + 3.0) * sigma_closed(n + 1, 2 * lj, SigmaClosedCase::Legendre).unwrap();
                assert!(rel(odd, want) < 1e-13);
            }
            for j in 0..6 {
                let a = sigma_leg_type(n, j, 0, 0);
                let b = sigma_closed(n, j, SigmaClosedCase::Legendre).unwrap();
                assert!((a - b).abs() < 1e-14 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn leg_type_matches_oracle() {
        for &(k, l) in &[(1usize, 0usize), (2, 1), (0, 3)] {
            let i = idx(k as f64, l as f64);
            for n in 0..=8 {
                for j in 0..=8 {
                    let o = sigma_oracle(n, j, i, oracle_order(n, j)).unwrap();
                    let v = sigma_leg_type(n, j, k, l);
                    assert!((o - v).abs() <= 1e-11 * v.abs().max(1.0), "k={k} l={l} n={n} j={j}");
                }
            }
        }
    }

    #[test]
    fn oracle_parity_and_order_check() {
        let v = sigma_oracle(3, 1, idx(1.2, 1.2), oracle_order(3, 1)).unwrap();
        assert!(v.abs() < 1e-12);
        assert!(sigma_oracle(5, 5, idx(0.0, 0.0), 3).is_err());
    }

    #[test]
    fn gegenbauer_formula_matches_general_and_oracle() {
        for &a in &[-0.8, -0.3, 0.0, 0.5, 1.0, 2.5] {
            for n in 0..=10 {
                for j in 0..=12 {
                    let g = sigma_gegenbauer(n, j, a).unwrap();
                    let e = sigma_general(n, j, idx(a, a)).unwrap();
                    let o = sigma_oracle(n, j, idx(a, a), oracle_order(n, j)).unwrap();
                    let scale = sigma_first_two(n, idx(a, a)).0;
                    assert!((g - e).abs() <= 1e-12 * scale, "a={a} n={n} j={j}: {g} vs {e}");
                    assert!((g - o).abs() <= 1e-11 * scale, "a={a} n={n} j={j}: {g} vs {o}");
                }
            }
        }
    }

    #[test]
    fn c_hat_examples() {
        let i = idx(0.3, -0.4);
        assert_eq!(c_hat(4, 0, i, 0.3, -0.4).unwrap().value, 1.0);
        assert!(c_hat(4, 3, i, 0.3, -0.4).unwrap().value.abs() < 1e-11);
        let base = JacobiIndex::CHEBYSHEV_T;
        let got = c_hat(2, 1, base, 0.5, 0.5).unwrap().value;
        let rule = gauss_jacobi_rule(8, base).unwrap();
        let target = JacobiIndex::CHEBYSHEV_U;
        let want = rule.integrate(|x| {
            crate::orthopoly::jacobi_eval(3, target, x) * crate::orthopoly::jacobi_eval(2, base, x)
        }) / gamma_norm(2, base).value;
        assert!((got - want).abs() < 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn c_hat_matches_oracle_on_grid() {
        let pairs = [(0.0, 0.0), (0.5, -0.3), (-0.7, 1.5)];
        let targets = [(0.5, 0.5), (2.0, -0.5)];
        for &(a, b) in &pairs {
            let i = idx(a, b);
            for &(ta, tb) in &targets {
                let t = idx(ta, tb);
                for n in 0..=6 {
                    for j in 0..=6 {
                        let rule = gauss_jacobi_rule(n + j + 2, i).unwrap();
                        let want = rule.integrate(|x| {
                            crate::orthopoly::jacobi_eval(n + j, t, x) * crate::orthopoly::jacobi_eval(n, i, x)
                        }) / gamma_norm(n as u64, i).value;
                        let got = c_hat(n, j, i, ta, tb).unwrap().value;
                        assert!((got - want).abs() <= 1e-11 * want.abs().max(1.0), "({a},{b})->({ta},{tb}) n={n} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn legendre_descent_identity() {
        for n in 0..=50usize {
            let nf = n as f64;
            for l in 0..=100usize {
                let lf = l as f64;
                let s = sigma_closed(n, 2 * l, SigmaClosedCase::Legendre).unwrap();
                let s2 = sigma_closed(n, 2 * l + 2, SigmaClosedCase::Legendre).unwrap();
                let want = -(nf + 2.0 * lf + 2.0) / (2.0 * (lf + 1.0) * (nf + lf + 1.5)) * s;
                assert!(((s2 - s) - want).abs() <= 1e-12 * s, "n={n} l={l}");
                assert!(s2 < s);
            }
        }
    }

    #[test]
    fn table_is_cached_and_extends() {
        let i = idx(0.25, -0.5);
        let t1 = sigma_table(3, i, 5).unwrap();
        assert_eq!(t1.method, SigmaMethod::GeneralFormula);
        let t2 = sigma_table(3, i, 4).unwrap();
        assert!(Arc::ptr_eq(&t1, &t2));
        let t3 = sigma_table(3, i, 9).unwrap();
        assert!(t3.j_max() >= 9);
        assert_eq!(&t3.values[..6], &t1.values[..]);
    }

    #[test]
    fn table_concurrent_reads_agree() {
        let i = idx(1.5, 1.5);
        let vals: Vec<Vec<f64>> = std::thread::scope(|s| {
            let hs: Vec<_> = (0..8).map(|k| s.spawn(move || sigma_table(7, i, 20 + 5 * k).unwrap().values[..=20].to_vec())).collect();
            hs.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for v in &vals[1..] {
            assert_eq!(v, &vals[0]);
        }
    }

    #[test]
    fn table_parity_for_symmetric_index() {
        let t = sigma_table(6, idx(2.0, 2.0), 30).unwrap();
        for j in (1..=30).step_by(2) {
            assert_eq!(t.values[j], 0.0);
        }
    }

    #[test]
    fn big_rational_conversion() {
        for &x in &[1.0, -3.5, 1e-300, 7.25e250, 0.1, -123456.789] {
            assert_eq!(big_to_f64(&rational(x)), x);
        }
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!((big_to_f64(&third) - 1.0 / 3.0).abs() <= f64::EPSILON / 3.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn difference_bound(a in -0.9f64..3.0, b in -0.9f64..3.0, n in 0usize..25, j in 0usize..20) {
            let i = idx(a, b);
            let t = sigma_table(n, i, j + 2).unwrap();
            let bound = 2.0 * (gamma_norm(0, i).value / gamma_norm(n as u64, i).value).sqrt();
            prop_assert!((t.values[j + 2] - t.values[j]).abs() <= bound * (1.0 + 1e-12));
        }
    }
}
