//! Scenario execution: config -> core objects -> valuation rows -> CSV.
//! Sweep points run on a worker pool; rows are written in grid order
//! regardless of completion order, and outputs carry no timestamps, so
//! identical configs produce bitwise-identical files.

use crate::config::{
    ConfigError, HolderCfg, Instrument, RunMode, ScenarioConfig, SweepVariable,
};
use breakclause::credit::DefaultModel;
use breakclause::equity::{self, EquityForwardSpec, SingleBreak};
use breakclause::mc::{simulate_equity_forward, McEstimate};
use breakclause::tree::{
    build_tree, calibrate_sigma, par_rate, slice_grid, BreakSchedule, Holder, HwParams, HwTree,
    SwapPricer, SwapSpec, SwaptionQuote,
};
use breakclause::{Side, ValuationReport, YieldCurve};
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("numerical failure in {operation}: {details}")]
    Numerical { operation: String, details: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => 2,
            CliError::Numerical { .. } => 3,
        }
    }
}

/// Tags a core error with the operation and its parameters.
pub fn numerical(operation: impl Into<String>, err: impl std::fmt::Display) -> CliError {
    CliError::Numerical { operation: operation.into(), details: err.to_string() }
}

#[derive(Debug, Clone)]
pub struct RunContext {
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
    pub seed: u64,
}

impl RunContext {
    pub fn new(out_dir: PathBuf, threads: Option<usize>, seed: u64) -> Self {
        Self { out_dir, threads, seed }
    }

    /// Runs `f` inside a dedicated rayon pool when a thread count was given.
    pub fn with_pool<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match self.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool")
                .install(f),
            None => f(),
        }
    }
}

/// Resolved swap market: curve plus (possibly calibrated) HW parameters.
#[derive(Debug, Clone)]
pub struct SwapMarket {
    pub curve: YieldCurve,
    pub params: HwParams,
}

pub fn resolve_curve(cfg: &ScenarioConfig) -> Result<YieldCurve, CliError> {
    let m = &cfg.market;
    if let Some(pillars) = &m.pillars {
        YieldCurve::from_zero_pillars(pillars).map_err(|e| numerical("curve construction", e))
    } else {
        YieldCurve::flat(m.flat_rate.unwrap_or(0.0))
            .map_err(|e| numerical("curve construction", e))
    }
}

pub fn resolve_swap_market(cfg: &ScenarioConfig) -> Result<SwapMarket, CliError> {
    let curve = resolve_curve(cfg)?;
    let m = &cfg.market;
    let params = if let Some(sigma) = m.hw_sigma {
        HwParams::constant(m.mean_reversion, sigma)
            .map_err(|e| numerical("hull-white parameters", e))?
    } else {
        let frequency = match &cfg.instrument {
            Instrument::Swap { frequency, .. } => *frequency,
            _ => 0.5,
        };
        let quote = SwaptionQuote {
            expiry: m.swaption_expiry,
            tenor: m.swaption_tenor,
            frequency,
            vol: m.swaption_vol.expect("validated"),
        };
        calibrate_sigma(&curve, m.mean_reversion, &quote).map_err(|e| {
            numerical(
                format!(
                    "sigma calibration ({}y{}y vol {})",
                    m.swaption_expiry, m.swaption_tenor, quote.vol
                ),
                e,
            )
        })?
    };
    Ok(SwapMarket { curve, params })
}

fn credit_model(cfg: &ScenarioConfig) -> Result<DefaultModel, CliError> {
    let c = &cfg.credit;
    DefaultModel::new(c.lambda_a, c.lambda_b, c.theta, c.lgd_a, c.lgd_b)
        .map_err(|e| numerical("default model", e))
}

/// One scenario's outcome.
#[derive(Debug, Clone)]
pub struct RowResult {
    pub par: Option<f64>,
    pub report: ValuationReport,
    pub mc: Option<McEstimate>,
}

/// Runs a single (non-sweep) scenario. A pre-resolved market skips the
/// per-row sigma calibration when many rows share one market block.
pub fn execute(
    cfg: &ScenarioConfig,
    seed: u64,
    market: Option<&SwapMarket>,
) -> Result<RowResult, CliError> {
    match &cfg.instrument {
        Instrument::Forward { .. } => execute_forward(cfg, seed),
        Instrument::Swap { .. } => execute_swap(cfg, market),
    }
}

fn execute_forward(cfg: &ScenarioConfig, seed: u64) -> Result<RowResult, CliError> {
    let Instrument::Forward { spot, strike, maturity, side } = cfg.instrument else {
        unreachable!()
    };
    let side: Side = side.into();
    let model = credit_model(cfg)?;
    let sigma = cfg.market.sigma.expect("validated");
    let rate = cfg.market.flat_rate.expect("validated");
    let t_hat = cfg.breaks.dates.first().copied().unwrap_or(maturity);
    let with_bc = cfg.breaks.holder == HolderCfg::B && !cfg.breaks.dates.is_empty();

    let spec_at = |k: f64| EquityForwardSpec::new(spot, k, maturity, sigma, rate, side)
        .map_err(|e| numerical("forward spec", e));
    let value_at = |k: f64| -> Result<ValuationReport, CliError> {
        let spec = spec_at(k)?;
        let rep = if with_bc {
            let bc = SingleBreak::new(t_hat).map_err(|e| numerical("break date", e))?;
            equity::value_with_bc(&spec, &model, bc)
        } else {
            equity::value_no_bc(&spec, &model, t_hat)
        };
        rep.map_err(|e| numerical(format!("forward valuation (K={k})"), e))
    };

    let (par, report) = match cfg.run.mode {
        RunMode::Price => (None, value_at(strike)?),
        RunMode::Par => {
            let mut pending: Option<CliError> = None;
            let solved = equity::par_strike(
                |k| match value_at(k) {
                    Ok(r) => Ok(r.adjusted_value),
                    Err(e) => {
                        pending = Some(e);
                        Ok(f64::NAN)
                    }
                },
                spot,
            );
            if let Some(e) = pending {
                return Err(e);
            }
            let solved = solved.map_err(|e| {
                numerical(
                    format!("par strike (side={}, t_hat={t_hat}, with_bc={with_bc})", side.as_str()),
                    e,
                )
            })?;
            (Some(solved), value_at(solved)?.with_par_level(solved))
        }
    };

    let mc = if cfg.run.mc_check_paths > 0 {
        let k = par.unwrap_or(strike);
        let spec = spec_at(k)?;
        let bc = if with_bc { Some(SingleBreak { t_hat }) } else { None };
        Some(simulate_equity_forward(&spec, &model, t_hat, bc, cfg.run.mc_check_paths, seed))
    } else {
        None
    };

    Ok(RowResult { par, report, mc })
}

fn holder_to_core(h: HolderCfg) -> Option<Holder> {
    match h {
        HolderCfg::B => Some(Holder::BOnly),
        HolderCfg::A => Some(Holder::AOnly),
        HolderCfg::Mutual => Some(Holder::Mutual),
        HolderCfg::None => None,
    }
}

pub fn swap_breaks(cfg: &ScenarioConfig) -> Result<Option<BreakSchedule>, CliError> {
    if cfg.breaks.dates.is_empty() {
        return Ok(None);
    }
    match holder_to_core(cfg.breaks.holder) {
        None => Ok(None),
        Some(h) => BreakSchedule::new(cfg.breaks.dates.clone(), h)
            .map(Some)
            .map_err(|e| numerical("break schedule", e)),
    }
}

/// Builds the lattice for a swap scenario.
pub fn swap_tree(cfg: &ScenarioConfig, market: &SwapMarket) -> Result<HwTree, CliError> {
    let Instrument::Swap { maturity, frequency, .. } = cfg.instrument else {
        unreachable!()
    };
    let n = (maturity / frequency).round() as usize;
    let mut keys: Vec<f64> = (1..=n).map(|k| k as f64 * frequency).collect();
    keys.extend_from_slice(&cfg.breaks.dates);
    let grid = slice_grid(&keys, cfg.market.max_step);
    build_tree(&market.curve, &market.params, &grid).map_err(|e| numerical("tree build", e))
}

fn execute_swap(cfg: &ScenarioConfig, market: Option<&SwapMarket>) -> Result<RowResult, CliError> {
    let Instrument::Swap { notional, fixed_rate, maturity, frequency, side } = cfg.instrument
    else {
        unreachable!()
    };
    let side: Side = side.into();
    let model = credit_model(cfg)?;
    let resolved;
    let market = match market {
        Some(m) => m,
        None => {
            resolved = resolve_swap_market(cfg)?;
            &resolved
        }
    };
    let tree = swap_tree(cfg, market)?;
    let breaks = swap_breaks(cfg)?;

    let valuation = |c: f64| -> Result<ValuationReport, CliError> {
        let swap = SwapSpec::new(notional, c, maturity, frequency, side)
            .map_err(|e| numerical("swap spec", e))?;
        let pricer = SwapPricer::new(&tree, &swap).map_err(|e| numerical("swap pricer", e))?;
        pricer
            .valuation(&model, breaks.as_ref())
            .map_err(|e| numerical(format!("swap valuation (fixed={c})"), e))
    };

    let (par, report) = match cfg.run.mode {
        RunMode::Price => (None, valuation(fixed_rate)?),
        RunMode::Par => {
            let mut pending: Option<CliError> = None;
            let solved = par_rate(|c| match valuation(c) {
                Ok(r) => Ok(r.adjusted_value),
                Err(e) => {
                    pending = Some(e);
                    Ok(f64::NAN)
                }
            });
            if let Some(e) = pending {
                return Err(e);
            }
            let solved = solved.map_err(|e| {
                numerical(format!("par rate (side={})", side.as_str()), e)
            })?;
            (Some(solved), valuation(solved)?.with_par_level(solved))
        }
    };
    Ok(RowResult { par, report, mc: None })
}

/// Replaces the swept field, revalidating the result.
pub fn apply_sweep(
    cfg: &ScenarioConfig,
    var: SweepVariable,
    x: f64,
) -> Result<ScenarioConfig, CliError> {
    let mut out = cfg.clone();
    match var {
        SweepVariable::THat => out.breaks.dates = vec![x],
        SweepVariable::LambdaA => out.credit.lambda_a = x,
        SweepVariable::LambdaB => out.credit.lambda_b = x,
        SweepVariable::Theta => out.credit.theta = x,
        SweepVariable::Strike => match &mut out.instrument {
            Instrument::Forward { strike, .. } => *strike = x,
            _ => {
                return Err(CliError::Config(ConfigError::Invalid(
                    "strike sweeps apply to forwards".into(),
                )))
            }
        },
        SweepVariable::FixedRate => match &mut out.instrument {
            Instrument::Swap { fixed_rate, .. } => *fixed_rate = x,
            _ => {
                return Err(CliError::Config(ConfigError::Invalid(
                    "fixed_rate sweeps apply to swaps".into(),
                )))
            }
        },
    }
    out.validate()?;
    Ok(out)
}

fn fmt(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.10}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

/// Writes rows under a header; plain CSV, no quoting needed for the content
/// we emit.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .map_err(|source| CliError::Output { path: path.display().to_string(), source })?;
    }
    std::fs::write(path, text)
        .map_err(|source| CliError::Output { path: path.display().to_string(), source })
}

fn report_header(cfg: &ScenarioConfig) -> Vec<&'static str> {
    let mut h = Vec::new();
    if let Some(var) = cfg.run.sweep_variable {
        h.push(match var {
            SweepVariable::THat => "t_hat[years]",
            SweepVariable::LambdaA => "lambda_a[1/years]",
            SweepVariable::LambdaB => "lambda_b[1/years]",
            SweepVariable::Theta => "theta[1]",
            SweepVariable::Strike => "strike[ccy]",
            SweepVariable::FixedRate => "fixed_rate[decimal]",
        });
    }
    if cfg.run.mode == RunMode::Par {
        h.push(match cfg.instrument {
            Instrument::Forward { .. } => "par_strike[ccy]",
            Instrument::Swap { .. } => "par_rate[decimal]",
        });
    }
    h.extend_from_slice(&[
        "v0[ccy]",
        "bcva[ccy]",
        "bdva[ccy]",
        "bc_option[ccy]",
        "adjusted_value[ccy]",
        "boundary[ccy]",
        "exercise_probability[1]",
        "tree_slices[count]",
        "mc_value[ccy]",
        "mc_std_err[ccy]",
    ]);
    h
}

fn report_row(cfg: &ScenarioConfig, sweep: Option<f64>, r: &RowResult) -> Vec<String> {
    let mut row = Vec::new();
    if cfg.run.sweep_variable.is_some() {
        row.push(opt(sweep));
    }
    if cfg.run.mode == RunMode::Par {
        row.push(opt(r.par));
    }
    let rep = &r.report;
    row.extend([
        fmt(rep.v0),
        fmt(rep.bcva),
        fmt(rep.bdva),
        fmt(rep.bc_option),
        fmt(rep.adjusted_value),
        opt(rep.diagnostics.boundary),
        opt(rep.diagnostics.exercise_probability),
        rep.diagnostics
            .tree_slices
            .map(|n| n.to_string())
            .unwrap_or_default(),
        opt(r.mc.map(|m| m.value)),
        opt(r.mc.map(|m| m.std_err)),
    ]);
    row
}

/// `price` / `par` on a single config (the subcommand overrides run.mode).
pub fn run_single(
    cfg: &ScenarioConfig,
    mode: RunMode,
    ctx: &RunContext,
) -> Result<PathBuf, CliError> {
    let mut cfg = cfg.clone();
    cfg.run.mode = mode;
    if cfg.run.sweep_variable.is_some() {
        return run_sweep(&cfg, ctx);
    }
    let result = execute(&cfg, ctx.seed, None)?;
    let path = ctx.out_dir.join(&cfg.run.output);
    write_csv(&path, &report_header(&cfg), &[report_row(&cfg, None, &result)])?;
    Ok(path)
}

/// `sweep`: one row per grid point, dispatched to the pool, emitted in
/// grid order.
pub fn run_sweep(cfg: &ScenarioConfig, ctx: &RunContext) -> Result<PathBuf, CliError> {
    let var = cfg
        .run
        .sweep_variable
        .ok_or_else(|| ConfigError::Invalid("sweep needs run.sweep_variable".into()))?;
    let grid = cfg
        .run
        .sweep_grid
        .clone()
        .ok_or_else(|| ConfigError::Invalid("sweep needs run.sweep_grid".into()))?;
    // resolve the market once for swap sweeps that do not touch it
    let shared_market = match cfg.instrument {
        Instrument::Swap { .. } => Some(resolve_swap_market(cfg)?),
        _ => None,
    };
    let seed = ctx.seed;
    let rows: Result<Vec<_>, CliError> = ctx.with_pool(|| {
        grid.par_iter()
            .map(|&x| {
                let point = apply_sweep(cfg, var, x)?;
                let res = execute(&point, seed, shared_market.as_ref())?;
                Ok(report_row(&point, Some(x), &res))
            })
            .collect()
    });
    let path = ctx.out_dir.join(&cfg.run.output);
    write_csv(&path, &report_header(cfg), &rows?)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunMode;

    fn forward_cfg(breaks: &str) -> ScenarioConfig {
        let text = format!(
            r#"
[instrument]
kind = "forward"
spot = 1.0
strike = 0.95
maturity = 4.0
side = "payer"

[credit]
lambda_a = 0.1
lambda_b = 0.05
theta = 2.0

[market]
flat_rate = 0.0
sigma = 0.3
{breaks}
[run]
mode = "price"
output = "x.csv"
"#
        );
        ScenarioConfig::parse(&text, "test").unwrap()
    }

    #[test]
    fn empty_breaks_block_prices_the_no_bc_route() {
        let cfg = forward_cfg("");
        let res = execute(&cfg, 0, None).unwrap();
        let spec =
            EquityForwardSpec::new(1.0, 0.95, 4.0, 0.3, 0.0, Side::Payer).unwrap();
        let model = DefaultModel::new(0.1, 0.05, 2.0, 1.0, 1.0).unwrap();
        // no breaks: a single default-settlement date at maturity
        let expected = equity::value_no_bc(&spec, &model, 4.0).unwrap();
        assert_eq!(res.report, expected);
    }

    #[test]
    fn lumping_only_dates_stay_on_the_no_bc_route() {
        let cfg = forward_cfg("[breaks]\ndates = [1.0]\nholder = \"none\"\n");
        let res = execute(&cfg, 0, None).unwrap();
        let spec =
            EquityForwardSpec::new(1.0, 0.95, 4.0, 0.3, 0.0, Side::Payer).unwrap();
        let model = DefaultModel::new(0.1, 0.05, 2.0, 1.0, 1.0).unwrap();
        let expected = equity::value_no_bc(&spec, &model, 1.0).unwrap();
        assert_eq!(res.report, expected);
        // and the BC holder flips the route
        let cfg = forward_cfg("[breaks]\ndates = [1.0]\nholder = \"b\"\n");
        let res = execute(&cfg, 0, None).unwrap();
        assert!(res.report.adjusted_value > expected.adjusted_value);
    }

    #[test]
    fn sweep_modifies_the_right_field() {
        let cfg = forward_cfg("");
        let swept = apply_sweep(&cfg, SweepVariable::LambdaB, 0.2).unwrap();
        assert_eq!(swept.credit.lambda_b, 0.2);
        assert!(apply_sweep(&cfg, SweepVariable::FixedRate, 0.02).is_err());
        let mut bad = cfg.clone();
        bad.run.mode = RunMode::Par;
        let swept = apply_sweep(&bad, SweepVariable::THat, 2.0).unwrap();
        assert_eq!(swept.breaks.dates, vec![2.0]);
    }
}
