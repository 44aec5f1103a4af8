//! Discount curve with log-linear interpolation on discount factors
//! (piecewise-flat instantaneous forwards), anchored at `D(0) = 1`.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum CurveError {
    #[error("curve pillars must have strictly increasing positive times, got {0}")]
    NonMonotoneTimes(f64),
    #[error("discount factor at t={t} must lie in (0, 1] and be nonincreasing, got {df}")]
    InvalidDiscount { t: f64, df: f64 },
    #[error("flat rate must be finite, got {0}")]
    InvalidRate(f64),
    #[error("curve needs at least one pillar")]
    Empty,
}

/// Deterministic discount curve `t -> D(0, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct YieldCurve {
    /// (time, discount factor), strictly increasing times, nonincreasing dfs.
    pillars: Vec<(f64, f64)>,
}

impl YieldCurve {
    /// Flat continuously-compounded zero rate.
    pub fn flat(rate: f64) -> Result<Self, CurveError> {
        if !rate.is_finite() {
            return Err(CurveError::InvalidRate(rate));
        }
        // one pillar is enough: log-linear extrapolation keeps the rate flat
        Self::from_discount_pillars(&[(1.0, (-rate).exp())])
    }

    /// Pillars as (time, continuously-compounded zero rate).
    pub fn from_zero_pillars(pillars: &[(f64, f64)]) -> Result<Self, CurveError> {
        let dfs: Vec<(f64, f64)> = pillars
            .iter()
            .map(|&(t, z)| (t, (-z * t).exp()))
            .collect();
        Self::from_discount_pillars(&dfs)
    }

    /// Pillars as (time, discount factor).
    pub fn from_discount_pillars(pillars: &[(f64, f64)]) -> Result<Self, CurveError> {
        if pillars.is_empty() {
            return Err(CurveError::Empty);
        }
        let mut prev_t = 0.0;
        let mut prev_df = 1.0;
        for &(t, df) in pillars {
            if t <= prev_t || !t.is_finite() {
                return Err(CurveError::NonMonotoneTimes(t));
            }
            if !(df > 0.0 && df <= prev_df) {
                return Err(CurveError::InvalidDiscount { t, df });
            }
            prev_t = t;
            prev_df = df;
        }
        Ok(Self { pillars: pillars.to_vec() })
    }

    /// Discount factor `D(0, t)`; log-linear between pillars, flat-forward
    /// beyond the last pillar.
    pub fn discount(&self, t: f64) -> f64 {
        assert!(t >= 0.0 && t.is_finite(), "time must be nonnegative");
        if t == 0.0 {
            return 1.0;
        }
        let first = self.pillars[0];
        let mut lo = (0.0, 0.0f64); // (time, ln df)
        let mut hi = (first.0, first.1.ln());
        if t > first.0 {
            let mut found = false;
            for w in self.pillars.windows(2) {
                if t <= w[1].0 {
                    lo = (w[0].0, w[0].1.ln());
                    hi = (w[1].0, w[1].1.ln());
                    found = true;
                    break;
                }
            }
            if !found {
                // flat-forward extrapolation from the last segment
                let n = self.pillars.len();
                let (t_last, df_last) = self.pillars[n - 1];
                let fwd = if n >= 2 {
                    let (t_prev, df_prev) = self.pillars[n - 2];
                    (df_prev.ln() - df_last.ln()) / (t_last - t_prev)
                } else {
                    -df_last.ln() / t_last
                };
                return (df_last.ln() - fwd * (t - t_last)).exp();
            }
        }
        let w = (t - lo.0) / (hi.0 - lo.0);
        (lo.1 + w * (hi.1 - lo.1)).exp()
    }

    /// Forward discount factor `D(t1, t2) = D(0, t2) / D(0, t1)`.
    pub fn forward_discount(&self, t1: f64, t2: f64) -> f64 {
        self.discount(t2) / self.discount(t1)
    }

    /// Continuously-compounded zero rate to `t`.
    pub fn zero_rate(&self, t: f64) -> f64 {
        assert!(t > 0.0);
        -self.discount(t).ln() / t
    }

    /// Curve-implied par swap rate for a unit-notional swap paying at
    /// `pay_times` (year fraction = exact date differences, first period
    /// starting at `start`).
    pub fn par_swap_rate(&self, start: f64, pay_times: &[f64]) -> f64 {
        let annuity = self.annuity(start, pay_times);
        (self.discount(start) - self.discount(*pay_times.last().expect("schedule"))) / annuity
    }

    /// Fixed-leg annuity `sum_k yf_k D(0, T_k)`.
    pub fn annuity(&self, start: f64, pay_times: &[f64]) -> f64 {
        let mut prev = start;
        let mut a = 0.0;
        for &t in pay_times {
            a += (t - prev) * self.discount(t);
            prev = t;
        }
        a
    }
}
