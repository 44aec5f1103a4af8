//! Named scenario presets, one per reproduced table or figure. Each preset
//! expands to complete scenario configs (usable with `--emit-config`), and
//! running it assembles the rows into a single CSV.
//!
//! Parameter sets: equity forwards use S0 = 1, sigma = 0.3, r = 0, full
//! loss given default; swaps use the 4y semi-annual par swap at 1.677%
//! with the 2y2y ATM swaption quote of 37.6% and mean reversion 0.03.
//! The UCVA-sensitivity table runs on a stylised upward zero curve (slope
//! 25 bp/y) anchored so the 4y par rate is exactly the quoted 1.677%; the
//! other swap outputs use the flat 1.677% curve.

use crate::config::{
    BreaksBlock, CreditBlock, HolderCfg, Instrument, MarketBlock, RunBlock, RunMode,
    ScenarioConfig, SideCfg, SweepVariable,
};
use crate::runner::{
    execute, numerical, resolve_swap_market, swap_breaks, swap_tree, write_csv, CliError,
    RunContext, SwapMarket,
};
use breakclause::credit::DefaultModel;
use breakclause::numerics::{find_root, Bracket};
use breakclause::risk::{ucva_sensitivity, SensitivityReport};
use breakclause::tree::SwapPricer;
use breakclause::YieldCurve;
use rayon::prelude::*;
use std::path::PathBuf;

const PAR_4Y: f64 = 0.01677;
const SWAPTION_VOL: f64 = 0.376;
const STEEP_SLOPE: f64 = 0.0025;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Table1,
    Table2,
    Table3,
    Fig1,
    FigLambda,
    FigSwapThat,
    FigSwapLambda,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Table1,
        Preset::Table2,
        Preset::Table3,
        Preset::Fig1,
        Preset::FigLambda,
        Preset::FigSwapThat,
        Preset::FigSwapLambda,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Table1 => "table1",
            Preset::Table2 => "table2",
            Preset::Table3 => "table3",
            Preset::Fig1 => "fig1",
            Preset::FigLambda => "fig-lambda",
            Preset::FigSwapThat => "fig-swap-that",
            Preset::FigSwapLambda => "fig-swap-lambda",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::Table1 => "equity forward par-strike differences vs the 1y no-BC baseline",
            Preset::Table2 => "par-rate change of the 4y swap for multiple break schedules",
            Preset::Table3 => "UCVA sensitivity to lambda_A with and without a break clause",
            Preset::Fig1 => "equity par strike as a function of the break date",
            Preset::FigLambda => "equity par strike as a function of lambda_B",
            Preset::FigSwapThat => "swap par-rate change as a function of the break date",
            Preset::FigSwapLambda => "swap par-rate change as a function of lambda_B",
        }
    }

    pub fn parse(name: &str) -> Result<Self, CliError> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| {
                let valid: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
                CliError::Config(crate::config::ConfigError::Invalid(format!(
                    "unknown preset '{name}'; valid presets: {}",
                    valid.join(", ")
                )))
            })
    }
}

fn equity_market() -> MarketBlock {
    MarketBlock { flat_rate: Some(0.0), sigma: Some(0.3), ..Default::default() }
}

fn flat_swap_market() -> MarketBlock {
    MarketBlock {
        flat_rate: Some(PAR_4Y),
        swaption_vol: Some(SWAPTION_VOL),
        ..Default::default()
    }
}

/// Stylised Aug-2010-like upward zero curve: z(t) = z0 + slope * t with z0
/// solved so the 4y semi-annual par swap rate equals the quoted 1.677%.
fn steep_pillars() -> Vec<(f64, f64)> {
    let pay_times: Vec<f64> = (1..=8).map(|k| 0.5 * k as f64).collect();
    let pillars = |z0: f64| -> Vec<(f64, f64)> {
        pay_times.iter().map(|&t| (t, z0 + STEEP_SLOPE * t)).collect()
    };
    let par_gap = |z0: f64| {
        let curve = YieldCurve::from_zero_pillars(&pillars(z0)).expect("monotone curve");
        curve.par_swap_rate(0.0, &pay_times) - PAR_4Y
    };
    let bracket = Bracket::try_from_fn(par_gap, 0.0, 0.05).expect("par level brackets");
    let z0 = find_root(par_gap, bracket, 1e-14).expect("anchoring solve");
    pillars(z0)
}

fn steep_swap_market() -> MarketBlock {
    MarketBlock {
        pillars: Some(steep_pillars()),
        swaption_vol: Some(SWAPTION_VOL),
        ..Default::default()
    }
}

fn credit(la: f64, lb: f64, theta: f64) -> CreditBlock {
    CreditBlock { lambda_a: la, lambda_b: lb, theta, lgd_a: 1.0, lgd_b: 1.0 }
}

#[allow(clippy::too_many_arguments)]
fn forward_cfg(
    la: f64,
    lb: f64,
    theta: f64,
    side: SideCfg,
    maturity: f64,
    lumping: Option<f64>,
    holder: HolderCfg,
    output: &str,
) -> ScenarioConfig {
    ScenarioConfig {
        instrument: Instrument::Forward { spot: 1.0, strike: 1.0, maturity, side },
        credit: credit(la, lb, theta),
        market: equity_market(),
        breaks: BreaksBlock { dates: lumping.into_iter().collect(), holder },
        run: RunBlock {
            mode: RunMode::Par,
            sweep_variable: None,
            sweep_grid: None,
            output: output.to_string(),
            mc_check_paths: 0,
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn swap_cfg(
    market: MarketBlock,
    la: f64,
    lb: f64,
    theta: f64,
    side: SideCfg,
    dates: Vec<f64>,
    holder: HolderCfg,
    mode: RunMode,
    output: &str,
) -> ScenarioConfig {
    ScenarioConfig {
        instrument: Instrument::Swap {
            notional: 1.0,
            fixed_rate: PAR_4Y,
            maturity: 4.0,
            frequency: 0.5,
            side,
        },
        credit: credit(la, lb, theta),
        market,
        breaks: BreaksBlock { dates, holder },
        run: RunBlock {
            mode,
            sweep_variable: None,
            sweep_grid: None,
            output: output.to_string(),
            mc_check_paths: 0,
        },
    }
}

const SIDES: [SideCfg; 2] = [SideCfg::Payer, SideCfg::Receiver];
const TABLE2_PANELS: [(f64, f64); 2] = [(0.1, 0.05), (0.05, 0.1)];
const TABLE2_THETAS: [f64; 2] = [4.0, 1.0];
const TABLE3_ROWS: [(f64, f64, f64); 6] = [
    (0.05, 0.1, 4.0),
    (0.05, 0.1, 1.0),
    (0.1, 0.05, 4.0),
    (0.1, 0.05, 1.0),
    (0.1, 0.1, 4.0),
    (0.1, 0.1, 1.0),
];

fn table2_sets() -> Vec<Vec<f64>> {
    vec![
        vec![1.0, 2.0, 3.0],
        vec![1.0, 2.0],
        vec![1.0],
        vec![2.0, 3.0],
        vec![2.0],
        vec![3.0],
    ]
}

fn lambda_grid() -> Vec<f64> {
    (1..=15).map(|k| 0.02 * k as f64).collect()
}

fn fig1_grid() -> Vec<f64> {
    let mut g = vec![1.0 / 365.0];
    let mut t = 0.125;
    while t < 4.0 - 1e-9 {
        g.push(t);
        t += 0.125;
    }
    g
}

fn side_tag(s: SideCfg) -> &'static str {
    match s {
        SideCfg::Payer => "payer",
        SideCfg::Receiver => "receiver",
    }
}

fn dates_tag(dates: &[f64]) -> String {
    dates
        .iter()
        .map(|d| format!("{d:.0}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Expands a preset into complete, individually runnable scenario configs.
pub fn expand(preset: Preset) -> Vec<(String, ScenarioConfig)> {
    let mut rows = Vec::new();
    match preset {
        Preset::Table1 => {
            for side in SIDES {
                for th in 1..=5 {
                    let th_f = th as f64;
                    let tag = |case: &str| format!("theta{th}_{}_{case}", side_tag(side));
                    let out = |case: &str| format!("table1_{}.csv", tag(case));
                    rows.push((
                        tag("base1y"),
                        forward_cfg(0.1, 0.05, th_f, side, 1.0, None, HolderCfg::None, &out("base1y")),
                    ));
                    for (case, mat, holder) in [
                        ("t4_bc", 4.0, HolderCfg::B),
                        ("t4_nobc", 4.0, HolderCfg::None),
                        ("t2_bc", 2.0, HolderCfg::B),
                        ("t2_nobc", 2.0, HolderCfg::None),
                    ] {
                        rows.push((
                            tag(case),
                            forward_cfg(0.1, 0.05, th_f, side, mat, Some(1.0), holder, &out(case)),
                        ));
                    }
                }
            }
        }
        Preset::Fig1 => {
            for th in [1.0, 4.0] {
                for (case, holder) in [("bc", HolderCfg::B), ("nobc", HolderCfg::None)] {
                    let label = format!("theta{th:.0}_{case}");
                    let mut cfg = forward_cfg(
                        0.1,
                        0.05,
                        th,
                        SideCfg::Payer,
                        4.0,
                        Some(1.0),
                        holder,
                        &format!("fig1_{label}.csv"),
                    );
                    cfg.run.sweep_variable = Some(SweepVariable::THat);
                    cfg.run.sweep_grid = Some(fig1_grid());
                    rows.push((label, cfg));
                }
            }
        }
        Preset::FigLambda => {
            for th in [1.0, 2.0, 4.0] {
                for (case, holder) in [("bc", HolderCfg::B), ("nobc", HolderCfg::None)] {
                    let label = format!("theta{th:.0}_{case}");
                    let mut cfg = forward_cfg(
                        0.1,
                        0.05,
                        th,
                        SideCfg::Payer,
                        4.0,
                        Some(2.0),
                        holder,
                        &format!("fig_lambda_{label}.csv"),
                    );
                    cfg.run.sweep_variable = Some(SweepVariable::LambdaB);
                    cfg.run.sweep_grid = Some(lambda_grid());
                    rows.push((label, cfg));
                }
            }
        }
        Preset::Table2 => {
            for (la, lb) in TABLE2_PANELS {
                for th in TABLE2_THETAS {
                    for set in table2_sets() {
                        for side in SIDES {
                            let label = format!(
                                "la{:.0}_lb{:.0}_theta{th:.0}_{}_breaks_{}",
                                la * 100.0,
                                lb * 100.0,
                                side_tag(side),
                                dates_tag(&set).replace(' ', "_")
                            );
                            rows.push((
                                label.clone(),
                                swap_cfg(
                                    flat_swap_market(),
                                    la,
                                    lb,
                                    th,
                                    side,
                                    set.clone(),
                                    HolderCfg::B,
                                    RunMode::Par,
                                    &format!("table2_{label}.csv"),
                                ),
                            ));
                        }
                    }
                }
            }
        }
        Preset::Table3 => {
            for (la, lb, th) in TABLE3_ROWS {
                for side in SIDES {
                    for (case, dates, holder) in [
                        ("bc", vec![1.0], HolderCfg::B),
                        ("nobc", vec![], HolderCfg::None),
                    ] {
                        let label = format!(
                            "la{:.0}_lb{:.0}_theta{th:.0}_{}_{case}",
                            la * 100.0,
                            lb * 100.0,
                            side_tag(side)
                        );
                        rows.push((
                            label.clone(),
                            swap_cfg(
                                steep_swap_market(),
                                la,
                                lb,
                                th,
                                side,
                                dates,
                                holder,
                                RunMode::Price,
                                &format!("table3_{label}.csv"),
                            ),
                        ));
                    }
                }
            }
        }
        Preset::FigSwapThat => {
            for (la, lb) in TABLE2_PANELS {
                for th in TABLE2_THETAS {
                    for side in SIDES {
                        let label = format!(
                            "la{:.0}_lb{:.0}_theta{th:.0}_{}",
                            la * 100.0,
                            lb * 100.0,
                            side_tag(side)
                        );
                        let mut cfg = swap_cfg(
                            flat_swap_market(),
                            la,
                            lb,
                            th,
                            side,
                            vec![1.0],
                            HolderCfg::B,
                            RunMode::Par,
                            &format!("fig_swap_that_{label}.csv"),
                        );
                        cfg.run.sweep_variable = Some(SweepVariable::THat);
                        cfg.run.sweep_grid = Some((1..=7).map(|k| 0.5 * k as f64).collect());
                        rows.push((label, cfg));
                    }
                }
            }
        }
        Preset::FigSwapLambda => {
            for th in [4.0, 2.0, 1.0] {
                for side in SIDES {
                    let label = format!("theta{th:.0}_{}", side_tag(side));
                    let mut cfg = swap_cfg(
                        flat_swap_market(),
                        0.1,
                        0.05,
                        th,
                        side,
                        vec![2.0],
                        HolderCfg::B,
                        RunMode::Par,
                        &format!("fig_swap_lambda_{label}.csv"),
                    );
                    cfg.run.sweep_variable = Some(SweepVariable::LambdaB);
                    cfg.run.sweep_grid = Some(lambda_grid());
                    rows.push((label, cfg));
                }
            }
        }
    }
    rows
}

/// Writes each expanded scenario as a TOML config.
pub fn emit_configs(preset: Preset, ctx: &RunContext) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    std::fs::create_dir_all(&ctx.out_dir).map_err(|source| CliError::Output {
        path: ctx.out_dir.display().to_string(),
        source,
    })?;
    for (label, cfg) in expand(preset) {
        let path = ctx
            .out_dir
            .join(format!("{}_{}.toml", preset.name().replace('-', "_"), label));
        std::fs::write(&path, cfg.to_toml()).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}

fn fmt(x: f64) -> String {
    format!("{x:.10}")
}

fn par_of(cfg: &ScenarioConfig, market: Option<&SwapMarket>) -> Result<f64, CliError> {
    let res = execute(cfg, 0, market)?;
    res.par.ok_or_else(|| numerical("preset par solve", "par level missing"))
}

/// Runs a preset and writes its assembled CSV; returns the written paths.
pub fn run(preset: Preset, ctx: &RunContext) -> Result<Vec<PathBuf>, CliError> {
    let path = match preset {
        Preset::Table1 => run_table1(ctx)?,
        Preset::Table2 => run_table2(ctx)?,
        Preset::Table3 => run_table3(ctx)?,
        Preset::Fig1 => run_fig_equity(ctx, Preset::Fig1)?,
        Preset::FigLambda => run_fig_equity(ctx, Preset::FigLambda)?,
        Preset::FigSwapThat => run_fig_swap_that(ctx)?,
        Preset::FigSwapLambda => run_fig_swap_lambda(ctx)?,
    };
    Ok(vec![path])
}

fn run_table1(ctx: &RunContext) -> Result<PathBuf, CliError> {
    let cases = ["t4_bc", "t4_nobc", "t2_bc", "t2_nobc"];
    let expanded = expand(Preset::Table1);
    let pars: Result<Vec<(String, f64)>, CliError> = ctx.with_pool(|| {
        expanded
            .par_iter()
            .map(|(label, cfg)| Ok((label.clone(), par_of(cfg, None)?)))
            .collect()
    });
    let pars = pars?;
    let lookup = |label: &str| -> f64 {
        pars.iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| *v)
            .expect("expanded label")
    };
    let mut rows = Vec::new();
    for th in 1..=5 {
        let mut row = vec![format!("{th}")];
        for side in ["payer", "receiver"] {
            let base = lookup(&format!("theta{th}_{side}_base1y"));
            for case in cases {
                let par = lookup(&format!("theta{th}_{side}_{case}"));
                row.push(fmt((par - base) * 100.0));
            }
        }
        rows.push(row);
    }
    let header = [
        "theta[1]",
        "payer_T4_bc1y[pct_of_spot]",
        "payer_T4_nobc[pct_of_spot]",
        "payer_T2_bc1y[pct_of_spot]",
        "payer_T2_nobc[pct_of_spot]",
        "receiver_T4_bc1y[pct_of_spot]",
        "receiver_T4_nobc[pct_of_spot]",
        "receiver_T2_bc1y[pct_of_spot]",
        "receiver_T2_nobc[pct_of_spot]",
    ];
    let path = ctx.out_dir.join("table1.csv");
    write_csv(&path, &header, &rows)?;
    Ok(path)
}

/// Shared runner for the two equity figures: sweep each expanded series and
/// merge the per-point par strikes into one CSV keyed by the grid.
fn run_fig_equity(ctx: &RunContext, preset: Preset) -> Result<PathBuf, CliError> {
    let expanded = expand(preset);
    let grid = expanded[0].1.run.sweep_grid.clone().expect("sweep preset");
    let points: Vec<(usize, usize)> = (0..expanded.len())
        .flat_map(|s| (0..grid.len()).map(move |g| (s, g)))
        .collect();
    let results: Result<Vec<f64>, CliError> = ctx.with_pool(|| {
        points
            .par_iter()
            .map(|&(s, g)| {
                let (_, cfg) = &expanded[s];
                let var = cfg.run.sweep_variable.expect("sweep");
                let point = crate::runner::apply_sweep(cfg, var, grid[g])?;
                par_of(&point, None)
            })
            .collect()
    });
    let results = results?;
    let (x_name, file) = match preset {
        Preset::Fig1 => ("t_hat[years]", "fig1.csv"),
        _ => ("lambda_b[1/years]", "fig_lambda.csv"),
    };
    let mut names: Vec<String> = vec![x_name.to_string()];
    for (label, _) in &expanded {
        names.push(format!("par_strike_{label}[ccy]"));
    }
    let header: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut rows = Vec::new();
    for (g, &x) in grid.iter().enumerate() {
        let mut row = vec![fmt(x)];
        for s in 0..expanded.len() {
            row.push(fmt(results[s * grid.len() + g]));
        }
        rows.push(row);
    }
    let path = ctx.out_dir.join(file);
    write_csv(&path, &header, &rows)?;
    Ok(path)
}

fn run_table2(ctx: &RunContext) -> Result<PathBuf, CliError> {
    let probe = swap_cfg(
        flat_swap_market(),
        0.1,
        0.05,
        4.0,
        SideCfg::Payer,
        vec![],
        HolderCfg::None,
        RunMode::Par,
        "probe.csv",
    );
    let market = resolve_swap_market(&probe)?;

    // no-BC par rate per (panel, theta, side)
    let mut tasks: Vec<ScenarioConfig> = Vec::new();
    for (la, lb) in TABLE2_PANELS {
        for th in TABLE2_THETAS {
            for side in SIDES {
                tasks.push(swap_cfg(
                    flat_swap_market(),
                    la,
                    lb,
                    th,
                    side,
                    vec![],
                    HolderCfg::None,
                    RunMode::Par,
                    "nobc.csv",
                ));
            }
        }
    }
    let expanded = expand(Preset::Table2);
    let all: Vec<&ScenarioConfig> =
        tasks.iter().chain(expanded.iter().map(|(_, c)| c)).collect();
    let pars: Result<Vec<f64>, CliError> = ctx.with_pool(|| {
        all.par_iter().map(|cfg| par_of(cfg, Some(&market))).collect()
    });
    let pars = pars?;
    let (base, bc) = pars.split_at(tasks.len());

    let mut rows = Vec::new();
    let sets = table2_sets();
    let mut idx = 0usize;
    for (panel, (la, lb)) in TABLE2_PANELS.into_iter().enumerate() {
        for (t_i, th) in TABLE2_THETAS.into_iter().enumerate() {
            for set in &sets {
                let mut row = vec![
                    dates_tag(set),
                    fmt(la),
                    fmt(lb),
                    format!("{th:.0}"),
                ];
                for (s_i, _) in SIDES.iter().enumerate() {
                    let base_par = base[(panel * 2 + t_i) * 2 + s_i];
                    let with = bc[idx + s_i];
                    row.push(fmt((with - base_par) * 1e4));
                }
                idx += 2;
                rows.push(row);
            }
        }
    }
    let header = [
        "breaks[years]",
        "lambda_a[1/years]",
        "lambda_b[1/years]",
        "theta[1]",
        "payer_par_change[bp]",
        "receiver_par_change[bp]",
    ];
    let path = ctx.out_dir.join("table2.csv");
    write_csv(&path, &header, &rows)?;
    Ok(path)
}

fn run_table3(ctx: &RunContext) -> Result<PathBuf, CliError> {
    let probe = swap_cfg(
        steep_swap_market(),
        0.1,
        0.05,
        4.0,
        SideCfg::Payer,
        vec![],
        HolderCfg::None,
        RunMode::Price,
        "probe.csv",
    );
    let market = resolve_swap_market(&probe)?;
    let expanded = expand(Preset::Table3);
    let sens: Result<Vec<SensitivityReport>, CliError> = ctx.with_pool(|| {
        expanded
            .par_iter()
            .map(|(label, cfg)| table3_sensitivity(cfg, &market, label))
            .collect()
    });
    let sens = sens?;
    let mut rows = Vec::new();
    for ((label, cfg), rep) in expanded.iter().zip(&sens) {
        let Instrument::Swap { side, .. } = cfg.instrument else { unreachable!() };
        rows.push(vec![
            fmt(cfg.credit.lambda_a),
            fmt(cfg.credit.lambda_b),
            format!("{:.0}", cfg.credit.theta),
            side_tag(side).to_string(),
            if label.ends_with("_bc") { "yes" } else { "no" }.to_string(),
            fmt(rep.base_ucva),
            fmt(rep.bumped_up),
            fmt(rep.bumped_down),
            fmt(rep.sensitivity),
            fmt(rep.per_basis_point()),
            fmt(rep.bump),
        ]);
    }
    let header = [
        "lambda_a[1/years]",
        "lambda_b[1/years]",
        "theta[1]",
        "side",
        "with_bc",
        "base_ucva[ccy]",
        "bumped_up[ccy]",
        "bumped_down[ccy]",
        "sensitivity[dUCVA/dlambda]",
        "sensitivity_per_bp[ccy]",
        "bump[1/years]",
    ];
    let path = ctx.out_dir.join("table3.csv");
    write_csv(&path, &header, &rows)?;
    Ok(path)
}

/// One Table-3 cell: central-difference UCVA sensitivity with bump 1e-4.
pub fn table3_sensitivity(
    cfg: &ScenarioConfig,
    market: &SwapMarket,
    label: &str,
) -> Result<SensitivityReport, CliError> {
    let Instrument::Swap { notional, fixed_rate, maturity, frequency, side } = cfg.instrument
    else {
        unreachable!()
    };
    let tree = swap_tree(cfg, market)?;
    let swap = breakclause::tree::SwapSpec::new(notional, fixed_rate, maturity, frequency, side.into())
        .map_err(|e| numerical("swap spec", e))?;
    let pricer = SwapPricer::new(&tree, &swap).map_err(|e| numerical("swap pricer", e))?;
    let model = DefaultModel::new(
        cfg.credit.lambda_a,
        cfg.credit.lambda_b,
        cfg.credit.theta,
        cfg.credit.lgd_a,
        cfg.credit.lgd_b,
    )
    .map_err(|e| numerical("default model", e))?;
    let breaks = swap_breaks(cfg)?;
    ucva_sensitivity(&pricer, &model, breaks.as_ref(), 1e-4)
        .map_err(|e| numerical(format!("ucva sensitivity ({label})"), e))
}

fn run_fig_swap_that(ctx: &RunContext) -> Result<PathBuf, CliError> {
    let expanded = expand(Preset::FigSwapThat);
    let probe = &expanded[0].1;
    let market = resolve_swap_market(probe)?;
    let grid: Vec<f64> = probe.run.sweep_grid.clone().expect("sweep");

    // no-BC baselines per series
    let baselines: Result<Vec<f64>, CliError> = ctx.with_pool(|| {
        expanded
            .par_iter()
            .map(|(_, cfg)| {
                let mut nobc = cfg.clone();
                nobc.breaks = BreaksBlock { dates: vec![], holder: HolderCfg::None };
                nobc.run.sweep_variable = None;
                nobc.run.sweep_grid = None;
                par_of(&nobc, Some(&market))
            })
            .collect()
    });
    let baselines = baselines?;

    let points: Vec<(usize, usize)> = (0..expanded.len())
        .flat_map(|s| (0..grid.len()).map(move |g| (s, g)))
        .collect();
    let pars: Result<Vec<f64>, CliError> = ctx.with_pool(|| {
        points
            .par_iter()
            .map(|&(s, g)| {
                let point =
                    crate::runner::apply_sweep(&expanded[s].1, SweepVariable::THat, grid[g])?;
                par_of(&point, Some(&market))
            })
            .collect()
    });
    let pars = pars?;

    let mut header: Vec<String> = vec!["t_hat[years]".into()];
    for (label, _) in &expanded {
        header.push(format!("par_change_{label}[bp]"));
    }
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut rows = Vec::new();
    for (g, &x) in grid.iter().enumerate() {
        let mut row = vec![fmt(x)];
        for s in 0..expanded.len() {
            row.push(fmt((pars[s * grid.len() + g] - baselines[s]) * 1e4));
        }
        rows.push(row);
    }
    let path = ctx.out_dir.join("fig_swap_that.csv");
    write_csv(&path, &header_refs, &rows)?;
    Ok(path)
}

fn run_fig_swap_lambda(ctx: &RunContext) -> Result<PathBuf, CliError> {
    let expanded = expand(Preset::FigSwapLambda);
    let probe = &expanded[0].1;
    let market = resolve_swap_market(probe)?;
    let grid: Vec<f64> = probe.run.sweep_grid.clone().expect("sweep");

    let points: Vec<(usize, usize)> = (0..expanded.len())
        .flat_map(|s| (0..grid.len()).map(move |g| (s, g)))
        .collect();
    // the no-BC baseline moves with lambda_B, so each point solves both pars
    let changes: Result<Vec<f64>, CliError> = ctx.with_pool(|| {
        points
            .par_iter()
            .map(|&(s, g)| {
                let point =
                    crate::runner::apply_sweep(&expanded[s].1, SweepVariable::LambdaB, grid[g])?;
                let with_bc = par_of(&point, Some(&market))?;
                let mut nobc = point.clone();
                nobc.breaks = BreaksBlock { dates: vec![], holder: HolderCfg::None };
                let base = par_of(&nobc, Some(&market))?;
                Ok((with_bc - base) * 1e4)
            })
            .collect()
    });
    let changes = changes?;

    let mut header: Vec<String> = vec!["lambda_b[1/years]".into()];
    for (label, _) in &expanded {
        header.push(format!("par_change_{label}[bp]"));
    }
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut rows = Vec::new();
    for (g, &x) in grid.iter().enumerate() {
        let mut row = vec![fmt(x)];
        for s in 0..expanded.len() {
            row.push(fmt(changes[s * grid.len() + g]));
        }
        rows.push(row);
    }
    let path = ctx.out_dir.join("fig_swap_lambda.csv");
    write_csv(&path, &header_refs, &rows)?;
    Ok(path)
}
