//! Data series behind each comparison figure.

use rayon::prelude::*;

use crate::coeffbounds::{
    bound_chebyshev, bound_gegenbauer, bound_leg_type_1_0, bound_legendre, bound_xiang, bound_xiang_legendre,
};
use crate::error::{domain, Result};
use crate::expand::TestFunction;
use crate::orthopoly::JacobiIndex;
use crate::quadrature::{
    bound_quad_computable, bound_quad_literature, quad_cheb2_display, theta_profile, LiteratureQuadBound,
    QuadBoundForm, THETA_DEFAULT_L,
};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FigureId {
    F1a,
    F1b,
    F1c,
    F1d,
    F2a,
    F2b,
    F3a,
    F3b,
    F4a,
    F4b,
    F5a,
    F5b,
}

impl FigureId {
    pub const ALL: [FigureId; 12] = [
        FigureId::F1a,
        FigureId::F1b,
        FigureId::F1c,
        FigureId::F1d,
        FigureId::F2a,
        FigureId::F2b,
        FigureId::F3a,
        FigureId::F3b,
        FigureId::F4a,
        FigureId::F4b,
        FigureId::F5a,
        FigureId::F5b,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::F1a => "1a",
            FigureId::F1b => "1b",
            FigureId::F1c => "1c",
            FigureId::F1d => "1d",
            FigureId::F2a => "2a",
            FigureId::F2b => "2b",
            FigureId::F3a => "3a",
            FigureId::F3b => "3b",
            FigureId::F4a => "4a",
            FigureId::F4b => "4b",
            FigureId::F5a => "5a",
            FigureId::F5b => "5b",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match FigureId::ALL.iter().find(|f| f.as_str() == s) {
            Some(&f) => Ok(f),
            None => domain(format!("unknown figure id '{s}' (expected one of 1a-1d, 2a, 2b, 3a, 3b, 4a, 4b, 5a, 5b)")),
        }
    }
}

/// Overrides for the per-figure defaults.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FigureOptions {
    pub n: Option<usize>,
    pub nmax: Option<usize>,
    pub lmax: Option<usize>,
    pub rho_grid: Option<Vec<f64>>,
}

/// ρ = 1.05, 1.10, …, 3.00.
pub fn default_rho_surface() -> Vec<f64> {
    (0..40).map(|i| (105 + 5 * i) as f64 / 100.0).collect()
}

const NEAR_ONE: [f64; 4] = [1.01, 1.02, 1.05, 1.1];
const COEFF_RHO: f64 = 1.98;
const THETA_N: usize = 36;
const THETA_LMAX: usize = 250;
const THETA_ALPHAS: [f64; 4] = [0.0, 1.5, 5.0, 10.0];

pub fn run_figure(id: FigureId, opts: &FigureOptions) -> Result<Table> {
    match id {
        FigureId::F1a => theta_figure(0.5, opts),
        FigureId::F1b => theta_figure(0.0, opts),
        FigureId::F1c => theta_figure(1.0, opts),
        FigureId::F1d => theta_sup_figure(opts),
        FigureId::F2a => coefficient_figure(TestFunction::U1, opts),
        FigureId::F2b => coefficient_figure(TestFunction::U2, opts),
        FigureId::F3a => gap_figure(opts, default_rho_surface()),
        FigureId::F3b => gap_figure(opts, NEAR_ONE.to_vec()),
        FigureId::F4a => xiang_figure(opts, JacobiIndex::new(1.0, 0.0)?, |n, rho| bound_leg_type_1_0(n, rho, 1.0)),
        FigureId::F4b => xiang_figure(opts, JacobiIndex::gegenbauer(2.0)?, |n, rho| bound_gegenbauer(n, 2.0, rho, 1.0)),
        FigureId::F5a => quad_figure(opts, 0.5),
        FigureId::F5b => quad_figure(opts, 2.0),
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return domain("rho grid is empty");
    }
    if let Some(r) = grid.iter().find(|r| !(**r > 1.0) || !r.is_finite()) {
        return domain(format!("rho grid value {r} is not > 1"));
    }
    Ok(())
}

fn pairs(nmin: usize, nmax: usize, grid: &[f64]) -> Vec<(usize, f64)> {
    (nmin..=nmax).flat_map(|n| grid.iter().map(move |&r| (n, r))).collect()
}

fn collect(mut table: Table, rows: Result<Vec<Vec<Cell>>>) -> Result<Table> {
    table.rows = rows?;
    table.sort();
    Ok(table)
}

/// θ_{n,l}, l ≤ 250 at n = 36, argmax flagged.
fn theta_figure(alpha: f64, opts: &FigureOptions) -> Result<Table> {
    let n = opts.n.unwrap_or(THETA_N);
    let p = theta_profile(n, alpha, opts.lmax.unwrap_or(THETA_LMAX))?;
    let mut t = Table::new(vec!["n", "alpha", "l", "theta", "is_argmax"], 3);
    for (l, &th) in p.theta.iter().enumerate() {
        t.push(vec![n.into(), alpha.into(), l.into(), th.into(), (l == p.argmax_l).into()]);
    }
    t.sort();
    Ok(t)
}

/// Θ_n^α for n ∈ [10, 100], L = 1000.
fn theta_sup_figure(opts: &FigureOptions) -> Result<Table> {
    let nmax = opts.nmax.unwrap_or(100);
    let big_l = opts.lmax.unwrap_or(THETA_DEFAULT_L);
    let jobs: Vec<(f64, usize)> = THETA_ALPHAS.iter().flat_map(|&a| (10..=nmax).map(move |n| (a, n))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(a, n)| {
            let p = theta_profile(n, a, big_l)?;
            Ok(vec![a.into(), n.into(), p.theta_max.into(), p.argmax_l.into(), p.mu0_scaled.into()])
        })
        .collect();
    collect(Table::new(vec!["alpha", "n", "theta_max", "argmax_l", "mu0_scaled"], 2), rows)
}

/// Known coefficients of u1 (T basis) or u2 (Legendre) against the matching bound at ρ = 1.98.
fn coefficient_figure(tf: TestFunction, opts: &FigureOptions) -> Result<Table> {
    let grid = opts.rho_grid.clone().unwrap_or_else(|| vec![COEFF_RHO]);
    check_grid(&grid)?;
    let rows = pairs(1, opts.nmax.unwrap_or(50), &grid)
        .into_par_iter()
        .map(|(n, rho)| {
            let m = tf.max_modulus(rho)?;
            let bound = match tf {
                TestFunction::U1 => bound_chebyshev(n, rho, m)?,
                TestFunction::U2 => bound_legendre(n, rho, m)?,
            };
            Ok(vec![n.into(), rho.into(), m.into(), tf.exact_coefficient(n).into(), bound.value.into()])
        })
        .collect();
    collect(Table::new(vec!["n", "rho", "M", "exact", "bound"], 2), rows)
}

/// e_n(ρ) = b̃ - b_n for the Legendre stripped factors.
fn gap_figure(opts: &FigureOptions, default_grid: Vec<f64>) -> Result<Table> {
    let grid = opts.rho_grid.clone().unwrap_or(default_grid);
    check_grid(&grid)?;
    let rows = pairs(1, opts.nmax.unwrap_or(80), &grid)
        .into_par_iter()
        .map(|(n, rho)| {
            let bt = bound_xiang_legendre(n, rho, 1.0)?.stripped_value;
            let b = bound_legendre(n, rho, 1.0)?.stripped_value;
            Ok(vec![n.into(), rho.into(), bt.into(), b.into(), (bt - b).into()])
        })
        .collect();
    collect(Table::new(vec!["n", "rho", "b_tilde", "b_n", "e_n"], 2), rows)
}

/// Xiang's stripped factor against ours for a fixed index.
fn xiang_figure(
    opts: &FigureOptions,
    idx: JacobiIndex,
    ours: impl Fn(usize, f64) -> Result<crate::coeffbounds::BoundReport> + Sync,
) -> Result<Table> {
    let grid = opts.rho_grid.clone().unwrap_or_else(default_rho_surface);
    check_grid(&grid)?;
    let rows = pairs(1, opts.nmax.unwrap_or(80), &grid)
        .into_par_iter()
        .map(|(n, rho)| {
            let x = bound_xiang(n, idx, rho, 1.0)?.stripped_value;
            let o = ours(n, rho)?.stripped_value;
            Ok(vec![n.into(), rho.into(), x.into(), o.into(), (x - o).into()])
        })
        .collect();
    collect(Table::new(vec!["n", "rho", "xiang", "ours", "difference"], 2), rows)
}

/// Hunter's bound against ours, both multiplied by ρ^{2n}/M. At α = 1/2 "ours" is the
/// displayed second-kind value; otherwise it is the Θ form of the computable bound.
fn quad_figure(opts: &FigureOptions, alpha: f64) -> Result<Table> {
    let grid = opts.rho_grid.clone().unwrap_or_else(default_rho_surface);
    check_grid(&grid)?;
    let rows = pairs(1, opts.nmax.unwrap_or(40), &grid)
        .into_par_iter()
        .map(|(n, rho)| {
            let (hunter, ours) = if alpha == 0.5 {
                (
                    bound_quad_literature(LiteratureQuadBound::HunterCheb2, n, alpha, rho, 1.0)?,
                    quad_cheb2_display(n, rho, 1.0)?,
                )
            } else {
                (
                    bound_quad_literature(LiteratureQuadBound::HunterGeneral, n, alpha, rho, 1.0)?,
                    bound_quad_computable(n, alpha, rho, 1.0, QuadBoundForm::Theta)?,
                )
            };
            let series = bound_quad_computable(n, alpha, rho, 1.0, QuadBoundForm::Series)?;
            let (h, o) = (hunter.stripped_value, ours.stripped_value);
            Ok(vec![n.into(), rho.into(), h.into(), o.into(), (h - o).into(), series.stripped_value.into()])
        })
        .collect();
    collect(Table::new(vec!["n", "rho", "hunter", "ours", "difference", "series"], 2), rows)
}
