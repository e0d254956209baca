//! Command-line front end. Every subcommand writes a sorted CSV (or, for
//! `verify`, a text table) to stdout or `--output`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::coeffbounds::{
    bound_cheb_type_3_2_1_2, bound_chebyshev, bound_chebyshev2, bound_davis, bound_gegenbauer, bound_jacobi,
    bound_kambo_legendre, bound_leg_type_1_0, bound_legendre, bound_legendre_asymptotic, bound_legendre_simple,
    bound_xiang, bound_xiang_legendre, truncation_bound, truncation_bound_legendre, truncation_bound_xiang,
    BoundReport, Cheb2Variant, ConstantMode,
};
use crate::error::{Error, Result};
use crate::expand::{basis_rescale, catalog, exact_series, expansion_coeffs, Basis, ExpansionSeries, SeriesSource, TestFunction};
use crate::figures::{run_figure, FigureId, FigureOptions};
use crate::orthopoly::JacobiIndex;
use crate::quadrature::{
    bound_quad_computable, bound_quad_gegenbauer, bound_quad_legendre, bound_quad_literature, quad_cheb2_display,
    quad_remainder, theta_profile, LiteratureQuadBound, QuadBoundForm,
};
use crate::sigma::sigma_table;
use crate::table::{Cell, Table};
use crate::verify::{run_verify, VerifyConfig};

pub const THREADS_ENV: &str = "SPECTRAL_TAIL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "spectral-tail", version, about = "Error bounds for Jacobi expansions and Gegenbauer-Gauss quadrature")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Jacobi parameter α (> -1).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Jacobi parameter β (> -1).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Bernstein ellipse parameter ρ (> 1).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Largest degree n.
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Largest l (theta) or j (sigma).
    #[arg(long, global = true)]
    pub lmax: Option<usize>,
    /// Largest truncation degree N.
    #[arg(long = "bign", global = true)]
    pub big_n: Option<usize>,
    /// Single degree n (theta profiles).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Max modulus M of u on the ellipse (> 0).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub m: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Explicit)]
    pub constant_mode: ModeArg,
    /// Test function for coeffs and quad-verify.
    #[arg(long, global = true, value_enum)]
    pub function: Option<FunctionArg>,
    /// Write to PATH instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// ρ values: a comma list or start:stop:step.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Figure id for the figure subcommand.
    #[arg(long, global = true)]
    pub figure: Option<String>,
    /// Test hook: tamper with one σ value before verification.
    #[arg(long, global = true, hide = true)]
    pub perturb: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Explicit,
    Unit,
}

impl From<ModeArg> for ConstantMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Explicit => ConstantMode::Explicit,
            ModeArg::Unit => ConstantMode::Unit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    U1,
    U2,
}

impl From<FunctionArg> for TestFunction {
    fn from(f: FunctionArg) -> Self {
        match f {
            FunctionArg::U1 => TestFunction::U1,
            FunctionArg::U2 => TestFunction::U2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// σ_{n,j} table: n ≤ nmax, j ≤ lmax.
    Sigma,
    /// Exact and numerical expansion coefficients of u1 or u2 with their bounds.
    Coeffs,
    /// Every applicable coefficient bound for n ≤ nmax over the ρ grid.
    CoeffBounds,
    /// Truncation bounds for N ≤ bign over the ρ grid.
    TruncBounds,
    /// θ_{n,l} profile for l ≤ lmax.
    Theta,
    /// Every applicable quadrature bound for n ≤ nmax over the ρ grid.
    QuadBounds,
    /// Quadrature remainders of u1 or u2 against each bound.
    QuadVerify,
    /// Data behind one comparison figure.
    Figure {
        /// 1a, 1b, 1c, 1d, 2a, 2b, 3a, 3b, 4a, 4b, 5a or 5b.
        id: Option<String>,
    },
    /// The full invariant suite; exit 2 on failure.
    Verify,
}

/// Validated run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub rho_grid: Option<Vec<f64>>,
    pub nmax: Option<usize>,
    pub lmax: Option<usize>,
    pub big_n: Option<usize>,
    pub n: Option<usize>,
    pub m: Option<f64>,
    pub constant_mode: ConstantMode,
    pub function: Option<TestFunction>,
    pub output: Option<PathBuf>,
    pub figure: Option<FigureId>,
    pub perturb: bool,
}

/// A usage problem caught before any computation.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

/// "1.1,1.5,2" or "1.05:3:0.05" (inclusive).
pub fn parse_grid(spec: &str) -> std::result::Result<Vec<f64>, UsageError> {
    let bad = |what: &str| UsageError(format!("invalid --grid '{spec}': {what}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("'{s}' is not a number")));
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts.len() {
        1 => spec.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?,
        3 => {
            let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if !(step > 0.0) || !(stop >= start) {
                return Err(bad("need step > 0 and stop >= start"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            if count > 100_000 {
                return Err(bad("more than 100000 points"));
            }
            (0..=count).map(|i| start + i as f64 * step).collect()
        }
        _ => return Err(bad("expected a comma list or start:stop:step")),
    };
    if values.is_empty() {
        return Err(bad("no values"));
    }
    Ok(values)
}

fn validate(cli: Cli) -> std::result::Result<RunConfig, UsageError> {
    let usage = |s: String| Err(UsageError(s));
    for (name, v) in [("alpha", cli.alpha), ("beta", cli.beta)] {
        if let Some(v) = v {
            if !(v > -1.0) || !v.is_finite() {
                return usage(format!("--{name} must be a finite value > -1, got {v}"));
            }
        }
    }
    let rho_grid = match (&cli.grid, cli.rho) {
        (Some(_), Some(_)) => return usage("--grid and --rho are mutually exclusive".into()),
        (Some(g), None) => Some(parse_grid(g)?),
        (None, Some(r)) => Some(vec![r]),
        (None, None) => None,
    };
    if let Some(r) = rho_grid.iter().flatten().find(|r| !(**r > 1.0) || !r.is_finite()) {
        return usage(format!("rho must be a finite value > 1, got {r}"));
    }
    if let Some(m) = cli.m {
        if !(m > 0.0) || !m.is_finite() {
            return usage(format!("--m must be a finite value > 0, got {m}"));
        }
    }
    for (name, v) in [("nmax", cli.nmax), ("lmax", cli.lmax), ("bign", cli.big_n)] {
        if v == Some(0) {
            return usage(format!("--{name} must be >= 1"));
        }
    }
    let figure_id = match &cli.command {
        Command::Figure { id } => match (id, &cli.figure) {
            (Some(a), Some(b)) if a != b => return usage(format!("conflicting figure ids '{a}' and '{b}'")),
            (Some(s), _) | (None, Some(s)) => Some(FigureId::parse(s).map_err(|e| UsageError(e.to_string()))?),
            (None, None) => return usage("figure needs an id (1a-1d, 2a, 2b, 3a, 3b, 4a, 4b, 5a, 5b)".into()),
        },
        _ if cli.figure.is_some() => return usage("--figure only applies to the figure subcommand".into()),
        _ => None,
    };
    let function = cli.function.map(TestFunction::from);
    if matches!(cli.command, Command::Coeffs | Command::QuadVerify) {
        if let Some(r) = rho_grid.iter().flatten().find(|r| **r >= TestFunction::RHO_MAX) {
            return usage(format!("rho = {r} is outside the analyticity region of the test functions (rho < 2)"));
        }
    }
    if cli.perturb && cli.command != Command::Verify {
        return usage("--perturb only applies to verify".into());
    }
    Ok(RunConfig {
        command: cli.command,
        alpha: cli.alpha,
        beta: cli.beta,
        rho_grid,
        nmax: cli.nmax,
        lmax: cli.lmax,
        big_n: cli.big_n,
        n: cli.n,
        m: cli.m,
        constant_mode: cli.constant_mode.into(),
        function,
        output: cli.output,
        figure: figure_id,
        perturb: cli.perturb,
    })
}

/// Parse and validate; `Ok(Err(text))` carries help or version output.
pub fn parse_args<I, T>(args: I) -> std::result::Result<std::result::Result<RunConfig, String>, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => validate(cli).map(Ok),
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp
            | clap::error::ErrorKind::DisplayVersion
            | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => Ok(Err(e.render().to_string())),
            _ => Err(UsageError(e.render().to_string())),
        },
    }
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub exit_code: i32,
}

fn index(cfg: &RunConfig, default: JacobiIndex) -> Result<JacobiIndex> {
    JacobiIndex::new(cfg.alpha.unwrap_or(default.alpha()), cfg.beta.unwrap_or(default.beta()))
}

fn gegenbauer_alpha(cfg: &RunConfig) -> Result<f64> {
    let a = cfg.alpha.unwrap_or(0.0);
    match cfg.beta {
        Some(b) if b != a => Err(Error::Domain(format!("this subcommand needs alpha = beta, got ({a}, {b})"))),
        _ => Ok(a),
    }
}

fn grid(cfg: &RunConfig, default: &[f64]) -> Vec<f64> {
    cfg.rho_grid.clone().unwrap_or_else(|| default.to_vec())
}

/// Keeps a bound unless the method does not apply at these inputs.
fn applicable(r: Result<BoundReport>) -> Result<Option<BoundReport>> {
    match r {
        Ok(b) => Ok(Some(b)),
        Err(Error::Domain(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn report_row(b: &BoundReport) -> Vec<Cell> {
    vec![
        b.method.as_str().into(),
        b.n.into(),
        b.alpha.into(),
        b.beta.into(),
        b.rho.into(),
        b.m.into(),
        b.value.into(),
        b.stripped_value.into(),
        b.constant_mode.as_str().into(),
    ]
}

const BOUND_HEADER: [&str; 9] = ["method", "n", "alpha", "beta", "rho", "M", "value", "stripped_value", "constant_mode"];

fn flatten(rows: Vec<Result<Vec<Vec<Cell>>>>) -> Result<Vec<Vec<Cell>>> {
    Ok(rows.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

fn sigma_cmd(cfg: &RunConfig) -> Result<Table> {
    let idx = index(cfg, JacobiIndex::LEGENDRE)?;
    let jmax = cfg.lmax.unwrap_or(20);
    let rows = (0..=cfg.nmax.unwrap_or(10))
        .into_par_iter()
        .map(|n| {
            let t = sigma_table(n, idx, jmax)?;
            Ok(t.values[..=jmax]
                .iter()
                .enumerate()
                .map(|(j, &s)| vec![n.into(), j.into(), idx.alpha().into(), idx.beta().into(), s.into(), t.method.as_str().into()])
                .collect())
        })
        .collect();
    let mut t = Table::new(vec!["n", "j", "alpha", "beta", "sigma", "method"], 2);
    t.rows = flatten(rows)?;
    Ok(t)
}

/// Main bound for the basis the coefficients are reported in.
fn main_bound(n: usize, idx: JacobiIndex, basis: Basis, rho: f64, m: f64) -> Result<Option<BoundReport>> {
    applicable(match basis {
        Basis::TBasis => bound_chebyshev(n, rho, m),
        _ if idx == JacobiIndex::LEGENDRE && n >= 1 => bound_legendre(n, rho, m),
        _ if idx.is_symmetric() => bound_gegenbauer(n, idx.alpha(), rho, m),
        _ => bound_jacobi(n, idx, rho, m),
    })
}

fn coeffs_cmd(cfg: &RunConfig) -> Result<Table> {
    let tf = cfg.function.unwrap_or(TestFunction::U2);
    let idx = index(cfg, tf.natural_index())?;
    let nmax = cfg.nmax.unwrap_or(50);
    let rhos = grid(cfg, &[1.98]);
    let natural = idx == tf.natural_index();
    let basis = if natural { exact_series(tf, 1).basis } else { Basis::Szego };
    let numerical = expansion_coeffs(&catalog(tf), idx, nmax + 1, None)?;
    let numerical = basis_rescale(&numerical, basis)?;
    let mut t = Table::new(vec!["n", "alpha", "beta", "basis", "exact", "numerical", "bound_main", "bound_xiang"], 1);
    if rhos.len() > 1 {
        t.header.insert(1, "rho");
        t.key_columns = 2;
    }
    for &rho in &rhos {
        let m = match cfg.m {
            Some(m) => m,
            None => tf.max_modulus(rho)?,
        };
        // Xiang's bound is stated for Szegő coefficients; move it to the reported basis
        let xiang: Vec<f64> = (0..=nmax)
            .map(|n| Ok(applicable(bound_xiang(n, idx, rho, m))?.map_or(f64::NAN, |b| b.value)))
            .collect::<Result<_>>()?;
        let xiang = basis_rescale(
            &ExpansionSeries { idx, coefficients: xiang, source: SeriesSource::Numerical, basis: Basis::Szego },
            basis,
        )?;
        for n in 0..=nmax {
            let exact = natural.then(|| tf.exact_coefficient(n));
            let bound = main_bound(n, idx, basis, rho, m)?.map(|b| b.value);
            let x = xiang.coefficients[n];
            let mut row = vec![
                n.into(),
                idx.alpha().into(),
                idx.beta().into(),
                basis.as_str().into(),
                exact.into(),
                numerical.coefficients[n].into(),
                bound.into(),
                x.is_finite().then_some(x).into(),
            ];
            if rhos.len() > 1 {
                row.insert(1, rho.into());
            }
            t.push(row);
        }
    }
    Ok(t)
}

fn coefficient_bounds(n: usize, idx: JacobiIndex, rho: f64, m: f64) -> Result<Vec<BoundReport>> {
    let mut all = vec![bound_jacobi(n, idx, rho, m), bound_xiang(n, idx, rho, m)];
    let (a, b) = (idx.alpha(), idx.beta());
    if a == b {
        all.push(bound_gegenbauer(n, a, rho, m));
    }
    if idx == JacobiIndex::LEGENDRE {
        all.extend([
            bound_legendre_simple(n, rho, m),
            bound_legendre(n, rho, m),
            bound_legendre_asymptotic(n, rho, m),
            bound_xiang_legendre(n, rho, m),
            bound_davis(n, rho, m),
            bound_kambo_legendre(n, rho, m),
        ]);
    }
    if idx == JacobiIndex::CHEBYSHEV_T {
        all.push(bound_chebyshev(n, rho, m));
    }
    if idx == JacobiIndex::CHEBYSHEV_U {
        all.push(bound_chebyshev2(n, rho, m, Cheb2Variant::A));
        all.push(bound_chebyshev2(n, rho, m, Cheb2Variant::B));
    }
    if (a, b) == (1.5, 0.5) {
        all.push(bound_cheb_type_3_2_1_2(n, rho, m));
    }
    if (a, b) == (1.0, 0.0) {
        all.push(bound_leg_type_1_0(n, rho, m));
    }
    Ok(all.into_iter().map(applicable).collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

fn pairs(nmin: usize, nmax: usize, rhos: &[f64]) -> Vec<(usize, f64)> {
    (nmin..=nmax).flat_map(|n| rhos.iter().map(move |&r| (n, r))).collect()
}

fn coeff_bounds_cmd(cfg: &RunConfig) -> Result<Table> {
    let idx = index(cfg, JacobiIndex::LEGENDRE)?;
    let m = cfg.m.unwrap_or(1.0);
    let rows = pairs(1, cfg.nmax.unwrap_or(50), &grid(cfg, &[1.5]))
        .into_par_iter()
        .map(|(n, rho)| Ok(coefficient_bounds(n, idx, rho, m)?.iter().map(report_row).collect()))
        .collect();
    let mut t = Table::new(BOUND_HEADER.to_vec(), 5);
    t.rows = flatten(rows)?;
    Ok(t)
}

fn trunc_bounds_cmd(cfg: &RunConfig) -> Result<Table> {
    let idx = index(cfg, JacobiIndex::LEGENDRE)?;
    let m = cfg.m.unwrap_or(1.0);
    let mode = cfg.constant_mode;
    let rows = pairs(1, cfg.big_n.unwrap_or(40), &grid(cfg, &[1.5]))
        .into_par_iter()
        .map(|(big_n, rho)| {
            let mut all = vec![truncation_bound(big_n, idx, rho, m, mode)];
            if idx == JacobiIndex::LEGENDRE {
                all.push(truncation_bound_legendre(big_n, rho, m, mode));
                all.push(truncation_bound_xiang(big_n, rho, m));
            }
            let all = all.into_iter().map(applicable).collect::<Result<Vec<_>>>()?;
            Ok(all.iter().flatten().map(report_row).collect())
        })
        .collect();
    let mut t = Table::new(BOUND_HEADER.to_vec(), 5);
    t.rows = flatten(rows)?;
    Ok(t)
}

fn theta_cmd(cfg: &RunConfig, warnings: &mut Vec<String>) -> Result<Table> {
    let alpha = gegenbauer_alpha(cfg)?;
    let n = cfg.n.unwrap_or(36);
    let p = theta_profile(n, alpha, cfg.lmax.unwrap_or(250))?;
    warnings.extend(p.warning.clone());
    let mut t = Table::new(vec!["n", "alpha", "l", "theta", "is_argmax"], 3);
    for (l, &th) in p.theta.iter().enumerate() {
        t.push(vec![n.into(), alpha.into(), l.into(), th.into(), (l == p.argmax_l).into()]);
    }
    Ok(t)
}

fn quad_bounds(n: usize, alpha: f64, rho: f64, m: f64, mode: ConstantMode) -> Result<Vec<BoundReport>> {
    let mut all = vec![
        bound_quad_computable(n, alpha, rho, m, QuadBoundForm::Series),
        bound_quad_computable(n, alpha, rho, m, QuadBoundForm::Theta),
        bound_quad_literature(LiteratureQuadBound::HunterGeneral, n, alpha, rho, m),
    ];
    if alpha != -0.5 {
        all.push(bound_quad_gegenbauer(n, alpha, rho, m, mode));
    } else {
        all.push(bound_quad_literature(LiteratureQuadBound::ChawlaCheb, n, alpha, rho, m));
    }
    if alpha == 0.0 {
        all.push(bound_quad_legendre(n, rho, m, mode));
        all.push(bound_quad_literature(LiteratureQuadBound::KamboLegendre, n, alpha, rho, m));
    }
    if alpha == 0.5 {
        all.push(bound_quad_literature(LiteratureQuadBound::HunterCheb2, n, alpha, rho, m));
        all.push(quad_cheb2_display(n, rho, m));
    }
    Ok(all.into_iter().map(applicable).collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

fn quad_bounds_cmd(cfg: &RunConfig) -> Result<Table> {
    let alpha = gegenbauer_alpha(cfg)?;
    let m = cfg.m.unwrap_or(1.0);
    let rows = pairs(1, cfg.nmax.unwrap_or(20), &grid(cfg, &[1.5]))
        .into_par_iter()
        .map(|(n, rho)| {
            Ok(quad_bounds(n, alpha, rho, m, cfg.constant_mode)?
                .iter()
                .map(|b| vec![b.method.as_str().into(), b.n.into(), b.alpha.into(), b.rho.into(), b.m.into(), b.value.into()])
                .collect())
        })
        .collect();
    let mut t = Table::new(vec!["method", "n", "alpha", "rho", "M", "value"], 4);
    t.rows = flatten(rows)?;
    Ok(t)
}

fn quad_verify_cmd(cfg: &RunConfig) -> Result<(Table, bool)> {
    let alpha = gegenbauer_alpha(cfg)?;
    let functions = match cfg.function {
        Some(f) => vec![f],
        None => vec![TestFunction::U1, TestFunction::U2],
    };
    let jobs: Vec<(TestFunction, usize, f64)> = functions
        .iter()
        .flat_map(|&f| pairs(1, cfg.nmax.unwrap_or(12), &grid(cfg, &[1.9])).into_iter().map(move |(n, r)| (f, n, r)))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(tf, n, rho)| {
            let m = match cfg.m {
                Some(m) => m,
                None => tf.max_modulus(rho)?,
            };
            let e = quad_remainder(&catalog(tf), n, alpha)?.abs();
            Ok(quad_bounds(n, alpha, rho, m, cfg.constant_mode)?
                .iter()
                // the displayed second-kind value is a comparison curve, not a proven bound
                .filter(|b| b.method.as_str() != "quad_cheb2_display")
                .map(|b| {
                    vec![
                        tf.as_str().into(),
                        n.into(),
                        alpha.into(),
                        rho.into(),
                        m.into(),
                        b.method.as_str().into(),
                        e.into(),
                        b.value.into(),
                        (e <= b.value).into(),
                    ]
                })
                .collect())
        })
        .collect();
    let mut t = Table::new(vec!["function", "n", "alpha", "rho", "M", "method", "remainder", "bound", "holds"], 6);
    t.rows = flatten(rows)?;
    let holds = t.rows.iter().all(|r| r[8] == Cell::Int(1));
    Ok((t, holds))
}

/// Executes a validated configuration.
pub fn execute(cfg: &RunConfig) -> Result<RunOutput> {
    let mut warnings = Vec::new();
    let (table, exit_code) = match &cfg.command {
        Command::Sigma => (sigma_cmd(cfg)?, 0),
        Command::Coeffs => (coeffs_cmd(cfg)?, 0),
        Command::CoeffBounds => (coeff_bounds_cmd(cfg)?, 0),
        Command::TruncBounds => (trunc_bounds_cmd(cfg)?, 0),
        Command::Theta => (theta_cmd(cfg, &mut warnings)?, 0),
        Command::QuadBounds => (quad_bounds_cmd(cfg)?, 0),
        Command::QuadVerify => {
            let (t, ok) = quad_verify_cmd(cfg)?;
            (t, if ok { 0 } else { 2 })
        }
        Command::Figure { .. } => {
            let opts = FigureOptions { n: cfg.n, nmax: cfg.nmax, lmax: cfg.lmax, rho_grid: cfg.rho_grid.clone() };
            (run_figure(cfg.figure.expect("validated"), &opts)?, 0)
        }
        Command::Verify => {
            let report = run_verify(&VerifyConfig { perturb_sigma: cfg.perturb });
            return Ok(RunOutput { text: report.render(), exit_code: report.exit_code() });
        }
    };
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(RunOutput { text: table.to_csv()?, exit_code })
}

/// Caps the global rayon pool from the environment.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|n| *n > 0) {
        // a second call finds the pool already built, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Full CLI run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_args(args) {
        Ok(Ok(cfg)) => cfg,
        Ok(Err(text)) => {
            print!("{text}");
            return 0;
        }
        Err(UsageError(msg)) => {
            eprintln!("{}", msg.trim_end());
            if !msg.contains("Usage:") {
                eprintln!("\nUsage: spectral-tail <COMMAND> [OPTIONS]\nRun 'spectral-tail --help' for details.");
            }
            return 1;
        }
    };
    configure_threads();
    let out = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, &out.text),
        None => std::io::stdout().lock().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return 1;
    }
    out.exit_code
}
