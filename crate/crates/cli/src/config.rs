//! Scenario configuration: a single TOML file with nested sections for the
//! instrument, credit, market, break and run blocks. All rates and
//! volatilities are decimals (0.01677, 0.376), never percent.

use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error in {path}:\n{message}")]
    Parse { path: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideCfg {
    Payer,
    Receiver,
}

impl From<SideCfg> for breakclause::Side {
    fn from(s: SideCfg) -> Self {
        match s {
            SideCfg::Payer => breakclause::Side::Payer,
            SideCfg::Receiver => breakclause::Side::Receiver,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Instrument {
    /// Equity forward on a non-dividend-paying stock.
    Forward { spot: f64, strike: f64, maturity: f64, side: SideCfg },
    /// Plain-vanilla fixed-for-floating swap.
    Swap {
        notional: f64,
        fixed_rate: f64,
        maturity: f64,
        frequency: f64,
        side: SideCfg,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreditBlock {
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub theta: f64,
    #[serde(default = "one")]
    pub lgd_a: f64,
    #[serde(default = "one")]
    pub lgd_b: f64,
}

fn one() -> f64 {
    1.0
}
fn default_mean_reversion() -> f64 {
    0.03
}
fn default_max_step() -> f64 {
    1.0 / 12.0
}
fn default_swaption_expiry() -> f64 {
    2.0
}
fn default_swaption_tenor() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketBlock {
    /// Flat continuously-compounded zero rate (forward route: the rate r).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat_rate: Option<f64>,
    /// Zero-rate pillars [(time, zero_rate)] (swap route).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pillars: Option<Vec<(f64, f64)>>,
    /// Lognormal equity volatility (forward route).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// ATM swaption volatility target for calibration (swap route).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swaption_vol: Option<f64>,
    #[serde(default = "default_swaption_expiry")]
    pub swaption_expiry: f64,
    #[serde(default = "default_swaption_tenor")]
    pub swaption_tenor: f64,
    /// Short-rate volatility given directly, bypassing calibration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hw_sigma: Option<f64>,
    #[serde(default = "default_mean_reversion")]
    pub mean_reversion: f64,
    #[serde(default = "default_max_step")]
    pub max_step: f64,
}

impl Default for MarketBlock {
    fn default() -> Self {
        Self {
            flat_rate: None,
            pillars: None,
            sigma: None,
            swaption_vol: None,
            swaption_expiry: default_swaption_expiry(),
            swaption_tenor: default_swaption_tenor(),
            hw_sigma: None,
            mean_reversion: default_mean_reversion(),
            max_step: default_max_step(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HolderCfg {
    /// B (the valuing party) holds the clause.
    B,
    /// A holds the clause.
    A,
    /// Both parties hold it.
    Mutual,
    /// No termination right: for forwards the dates only set the
    /// default-settlement (lumping) grid.
    None,
}

fn default_holder() -> HolderCfg {
    HolderCfg::None
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreaksBlock {
    #[serde(default)]
    pub dates: Vec<f64>,
    #[serde(default = "default_holder")]
    pub holder: HolderCfg,
}

impl Default for BreaksBlock {
    fn default() -> Self {
        Self { dates: Vec::new(), holder: HolderCfg::None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    Price,
    Par,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    THat,
    LambdaA,
    LambdaB,
    Theta,
    Strike,
    FixedRate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBlock {
    pub mode: RunMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_variable: Option<SweepVariable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_grid: Option<Vec<f64>>,
    pub output: String,
    /// Monte-Carlo cross-check paths (forward route); 0 disables.
    #[serde(default)]
    pub mc_check_paths: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub instrument: Instrument,
    pub credit: CreditBlock,
    pub market: MarketBlock,
    #[serde(default)]
    pub breaks: BreaksBlock,
    pub run: RunBlock,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses and validates; TOML errors carry line/column anchors.
    pub fn parse(text: &str, path: &str) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_string(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        match &self.instrument {
            Instrument::Forward { spot, strike, maturity, .. } => {
                if !(*spot > 0.0 && *strike >= 0.0 && *maturity > 0.0) {
                    return err("forward needs spot > 0, strike >= 0, maturity > 0");
                }
                if self.market.sigma.is_none() {
                    return err("forward needs market.sigma");
                }
                if self.market.flat_rate.is_none() {
                    return err("forward needs market.flat_rate (the deterministic rate r)");
                }
                if self.market.pillars.is_some() {
                    return err("forward route uses a flat rate, not curve pillars");
                }
                if self.breaks.holder == HolderCfg::Mutual || self.breaks.holder == HolderCfg::A {
                    return err("forward route prices B-held break clauses only");
                }
                if self.breaks.dates.len() > 1 {
                    return err("forward route supports a single break/lumping date");
                }
                for &d in &self.breaks.dates {
                    if !(d > 0.0 && d <= *maturity) {
                        return err("forward break/lumping date must lie in (0, maturity]");
                    }
                }
            }
            Instrument::Swap { notional, maturity, frequency, .. } => {
                if !(*notional > 0.0 && *maturity > 0.0 && *frequency > 0.0) {
                    return err("swap needs notional, maturity and frequency > 0");
                }
                if self.market.flat_rate.is_none() && self.market.pillars.is_none() {
                    return err("swap needs market.flat_rate or market.pillars");
                }
                if self.market.flat_rate.is_some() && self.market.pillars.is_some() {
                    return err("give market.flat_rate or market.pillars, not both");
                }
                if self.market.hw_sigma.is_none() && self.market.swaption_vol.is_none() {
                    return err("swap needs market.hw_sigma or market.swaption_vol");
                }
                if self.breaks.holder == HolderCfg::None && !self.breaks.dates.is_empty() {
                    return err("swap break dates need a holder (b, a or mutual)");
                }
                for &d in &self.breaks.dates {
                    if !(d > 0.0 && d < *maturity) {
                        return err("swap break dates must lie in (0, maturity)");
                    }
                }
            }
        }
        if self.credit.lambda_a.is_nan()
            || self.credit.lambda_b.is_nan()
            || self.credit.lambda_a < 0.0
            || self.credit.lambda_b < 0.0
        {
            return err("intensities must be nonnegative");
        }
        if self.credit.theta.is_nan() || self.credit.theta < 1.0 {
            return err("theta must be >= 1");
        }
        for l in [self.credit.lgd_a, self.credit.lgd_b] {
            if !(0.0..=1.0).contains(&l) {
                return err("loss given default must lie in [0, 1]");
            }
        }
        let mut prev = 0.0;
        for &d in &self.breaks.dates {
            if d <= prev {
                return err("break dates must be strictly increasing");
            }
            prev = d;
        }
        if self.breaks.holder == HolderCfg::Mutual && self.breaks.dates.len() != 1 {
            return err("a mutual break clause takes exactly one date (it is exercised there with certainty)");
        }
        match (&self.run.sweep_variable, &self.run.sweep_grid) {
            (None, None) => {}
            (Some(_), Some(grid)) => {
                if grid.is_empty() {
                    return err("sweep grid must be nonempty");
                }
                if grid.windows(2).any(|w| w[1] <= w[0]) {
                    return err("sweep grid must be strictly increasing");
                }
            }
            _ => return err("sweep_variable and sweep_grid go together"),
        }
        if self.run.output.is_empty() {
            return err("run.output must name the CSV file");
        }
        Ok(())
    }
}
