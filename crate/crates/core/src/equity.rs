//! Quasi-analytic valuation of an equity forward between defaultable
//! counterparties, with and without a single unilateral break clause held by
//! the valuing party B.
//!
//! Defaults are lumped at the break date and at maturity: a default before
//! t_hat settles the default-risk-free close-out at t_hat, a later one at T.
//! The break-clause value reduces to an exercise boundary U in the spot at
//! t_hat plus two single-observation barrier terms, priced with the bivariate
//! normal CDF at log-price correlation sqrt(t_hat / T).

use crate::credit::{CreditError, DefaultModel, Party};
use crate::numerics::{binorm_cdf, find_root, norm_cdf, Bracket, Correlation, NumericsError};
use crate::report::{Diagnostics, Side, ValuationReport};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum EquityError {
    #[error("spot must be positive, got {0}")]
    InvalidSpot(f64),
    #[error("volatility must be positive, got {0}")]
    InvalidSigma(f64),
    #[error("maturity must be positive, got {0}")]
    InvalidMaturity(f64),
    #[error("strike must be nonnegative and finite, got {0}")]
    InvalidStrike(f64),
    #[error("break/lumping date {t_hat} must lie in (0, {maturity}]")]
    InvalidBreakDate { t_hat: f64, maturity: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Credit(#[from] CreditError),
}

/// European option flavour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionKind {
    Call,
    Put,
}

/// Economics of an equity forward on a non-dividend-paying stock with
/// lognormal dynamics and a deterministic short rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquityForwardSpec {
    pub s0: f64,
    pub strike: f64,
    pub maturity: f64,
    pub sigma: f64,
    pub rate: f64,
    pub side: Side,
}

impl EquityForwardSpec {
    pub fn new(
        s0: f64,
        strike: f64,
        maturity: f64,
        sigma: f64,
        rate: f64,
        side: Side,
    ) -> Result<Self, EquityError> {
        if !s0.is_finite() || s0 <= 0.0 {
            return Err(EquityError::InvalidSpot(s0));
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(EquityError::InvalidSigma(sigma));
        }
        if !maturity.is_finite() || maturity <= 0.0 {
            return Err(EquityError::InvalidMaturity(maturity));
        }
        if !strike.is_finite() || strike < 0.0 {
            return Err(EquityError::InvalidStrike(strike));
        }
        Ok(Self { s0, strike, maturity, sigma, rate, side })
    }

    pub fn with_strike(&self, strike: f64) -> Self {
        Self { strike, ..*self }
    }

    /// Zero-coupon bond `P(t1, t2) = exp(-r (t2 - t1))`.
    pub fn bond(&self, t1: f64, t2: f64) -> f64 {
        (-self.rate * (t2 - t1)).exp()
    }

    /// Default-risk-free forward value at time `t` with spot `s_t`:
    /// payer `s_t - K P(t, T)`, receiver negated.
    pub fn forward_value(&self, t: f64, s_t: f64) -> f64 {
        assert!(t < self.maturity || (t - self.maturity).abs() < 1e-12);
        self.side.sign() * (s_t - self.strike * self.bond(t, self.maturity))
    }

    /// Value at `t` (spot `s_t`) of a European option expiring at `expiry`
    /// on the contingent claim `D(expiry, T)(S_T - K)`. The claim value at
    /// expiry is `S - K P(expiry, T)`, so this is Black-Scholes with an
    /// effective strike already discounted by the caller.
    pub fn bs_option_on_forward(
        &self,
        t: f64,
        s_t: f64,
        expiry: f64,
        strike_eff: f64,
        kind: OptionKind,
    ) -> f64 {
        debug_assert!(t <= expiry && expiry <= self.maturity + 1e-12);
        black_scholes(s_t, strike_eff, self.sigma, expiry - t, self.rate, kind)
    }
}

/// Plain Black-Scholes with degenerate-strike and zero-time handling.
pub fn black_scholes(spot: f64, strike: f64, vol: f64, tau: f64, rate: f64, kind: OptionKind) -> f64 {
    let df = (-rate * tau).exp();
    if strike <= 0.0 {
        // the "option" on S - K*D with K <= 0 is always exercised
        return match kind {
            OptionKind::Call => spot - strike * df,
            OptionKind::Put => 0.0,
        };
    }
    let stdev = vol * tau.sqrt();
    if stdev <= 0.0 {
        let intrinsic = spot - strike * df;
        return match kind {
            OptionKind::Call => intrinsic.max(0.0),
            OptionKind::Put => (-intrinsic).max(0.0),
        };
    }
    let d1 = ((spot / strike).ln() + (rate + 0.5 * vol * vol) * tau) / stdev;
    let d2 = d1 - stdev;
    match kind {
        OptionKind::Call => spot * norm_cdf(d1) - strike * df * norm_cdf(d2),
        OptionKind::Put => strike * df * norm_cdf(-d2) - spot * norm_cdf(-d1),
    }
}

/// A single break date, `0 < t_hat < T` checked against the forward's
/// maturity at use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleBreak {
    pub t_hat: f64,
}

impl SingleBreak {
    pub fn new(t_hat: f64) -> Result<Self, EquityError> {
        if !t_hat.is_finite() || t_hat <= 0.0 {
            return Err(EquityError::InvalidBreakDate { t_hat, maturity: f64::NAN });
        }
        Ok(Self { t_hat })
    }
}

fn check_lumping_date(spec: &EquityForwardSpec, t_hat: f64, allow_maturity: bool) -> Result<(), EquityError> {
    let ok = t_hat > 0.0
        && (t_hat < spec.maturity || (allow_maturity && t_hat <= spec.maturity));
    if ok {
        Ok(())
    } else {
        Err(EquityError::InvalidBreakDate { t_hat, maturity: spec.maturity })
    }
}

/// Valuation without a break clause, defaults lumped at `{t_hat, T}`.
/// `t_hat = T` degenerates to a single lumping date at maturity (used for
/// the short reference forward).
pub fn value_no_bc(
    spec: &EquityForwardSpec,
    model: &DefaultModel,
    t_hat: f64,
) -> Result<ValuationReport, EquityError> {
    check_lumping_date(spec, t_hat, true)?;
    let t = spec.maturity;
    let k_eff = spec.strike * spec.bond(t_hat, t);
    let pa1 = model.first_to_default_prob(Party::A, 0.0, t_hat)?;
    let pb1 = model.first_to_default_prob(Party::B, 0.0, t_hat)?;
    let pa2 = model.first_to_default_prob(Party::A, t_hat, t)?;
    let pb2 = model.first_to_default_prob(Party::B, t_hat, t)?;
    let (la, lb) = (model.lgd(Party::A), model.lgd(Party::B));

    // the party with positive exposure holds the call-like claim
    let (exposure_kind, liability_kind) = match spec.side {
        Side::Payer => (OptionKind::Call, OptionKind::Put),
        Side::Receiver => (OptionKind::Put, OptionKind::Call),
    };
    let expo1 = spec.bs_option_on_forward(0.0, spec.s0, t_hat, k_eff, exposure_kind);
    let liab1 = spec.bs_option_on_forward(0.0, spec.s0, t_hat, k_eff, liability_kind);
    let expo2 = spec.bs_option_on_forward(0.0, spec.s0, t, spec.strike, exposure_kind);
    let liab2 = spec.bs_option_on_forward(0.0, spec.s0, t, spec.strike, liability_kind);

    let bcva = la * (pa1 * expo1 + pa2 * expo2);
    let bdva = lb * (pb1 * liab1 + pb2 * liab2);
    let v0 = spec.forward_value(0.0, spec.s0);
    Ok(ValuationReport::assemble(v0, bcva, bdva, 0.0, Diagnostics::default()))
}

/// Exercise boundary U at the break date: the spot where the
/// remaining-horizon expected loss and expected gain balance.
///
/// Orientation: a payer exercises for `S >= U` (the expected loss grows with
/// the spot), a receiver for `S <= U`. Degenerate credit collapses the
/// boundary to `0` or `+INFINITY` so that the continuation region is empty
/// or everything, matching the side's orientation.
pub fn exercise_boundary(
    spec: &EquityForwardSpec,
    model: &DefaultModel,
    t_hat: f64,
) -> Result<f64, EquityError> {
    check_lumping_date(spec, t_hat, false)?;
    let t = spec.maturity;
    let wa = model.lgd(Party::A) * model.first_to_default_prob(Party::A, t_hat, t)?;
    let wb = model.lgd(Party::B) * model.first_to_default_prob(Party::B, t_hat, t)?;
    let tau = t - t_hat;
    let k = spec.strike;

    let (always_exercise, never_exercise) = match spec.side {
        Side::Payer => (0.0, f64::INFINITY),
        Side::Receiver => (f64::INFINITY, 0.0),
    };
    if wb == 0.0 {
        // continuing brings no gain: B terminates everywhere
        return Ok(always_exercise);
    }
    if wa == 0.0 {
        return Ok(never_exercise);
    }

    // continuation-minus-termination balance, monotone in the spot
    let balance = |s: f64| match spec.side {
        Side::Payer => {
            wb * black_scholes(s, k, spec.sigma, tau, spec.rate, OptionKind::Put)
                - wa * black_scholes(s, k, spec.sigma, tau, spec.rate, OptionKind::Call)
        }
        Side::Receiver => {
            wb * black_scholes(s, k, spec.sigma, tau, spec.rate, OptionKind::Call)
                - wa * black_scholes(s, k, spec.sigma, tau, spec.rate, OptionKind::Put)
        }
    };

    let mut lo = 1e-10 * k.max(spec.s0);
    let mut hi = 10.0 * k.max(spec.s0);
    for _ in 0..60 {
        if balance(lo).signum() != balance(hi).signum() {
            break;
        }
        lo *= 0.5;
        hi *= 2.0;
    }
    let bracket = Bracket::try_from_fn(balance, lo, hi)?;
    let u = find_root(balance, bracket, 1e-13 * k.max(spec.s0))?;

    // the slopes at U decide the orientation; check rather than assume
    let eps = 1e-6 * u.max(1e-12);
    let slope_sign = match spec.side {
        Side::Payer => 1.0,
        Side::Receiver => -1.0,
    };
    debug_assert!(
        slope_sign * (balance(u - eps) - balance(u + eps)) >= 0.0,
        "continuation balance not monotone around U = {u}"
    );
    Ok(u)
}

/// The four single-observation barrier expectations
/// `E{D(0,T) (±)(S_T - K) 1{S_that <> U} 1{S_T <> K}}` as
/// (call_below, put_below, call_above, put_above), where below/above refer
/// to the `S_that < U` / `S_that > U` events.
pub fn barrier_tails(spec: &EquityForwardSpec, t_hat: f64, u: f64) -> (f64, f64, f64, f64) {
    let (s0, k, sig, r, t) = (spec.s0, spec.strike, spec.sigma, spec.rate, spec.maturity);
    let rho = Correlation::new((t_hat / t).sqrt()).expect("0 < t_hat < T");
    let neg_rho = Correlation::new(-rho.value()).expect("valid");
    let sa = sig * t_hat.sqrt();
    let sb = sig * t.sqrt();
    let drift = r - 0.5 * sig * sig;
    let a = ((u / s0).ln() - drift * t_hat) / sa; // -inf / +inf pass through
    let ap = a - sa;
    let b = ((k / s0).ln() - drift * t) / sb;
    let bp = b - sb;
    let kd = k * (-r * t).exp();

    let call_below = s0 * binorm_cdf(ap, -bp, neg_rho) - kd * binorm_cdf(a, -b, neg_rho);
    let put_below = kd * binorm_cdf(a, b, rho) - s0 * binorm_cdf(ap, bp, rho);
    let call_above = s0 * binorm_cdf(-ap, -bp, rho) - kd * binorm_cdf(-a, -b, rho);
    let put_above = kd * binorm_cdf(-a, b, neg_rho) - s0 * binorm_cdf(-ap, bp, neg_rho);
    (call_below, put_below, call_above, put_above)
}

/// Valuation with a single break clause held by B: pre-break adjustments
/// plus the barrier decomposition of the termination option over the
/// continuation region.
pub fn value_with_bc(
    spec: &EquityForwardSpec,
    model: &DefaultModel,
    bc: SingleBreak,
) -> Result<ValuationReport, EquityError> {
    let t_hat = bc.t_hat;
    check_lumping_date(spec, t_hat, false)?;
    let t = spec.maturity;
    let k_eff = spec.strike * spec.bond(t_hat, t);
    let pa1 = model.first_to_default_prob(Party::A, 0.0, t_hat)?;
    let pb1 = model.first_to_default_prob(Party::B, 0.0, t_hat)?;
    let pa2 = model.first_to_default_prob(Party::A, t_hat, t)?;
    let pb2 = model.first_to_default_prob(Party::B, t_hat, t)?;
    let (la, lb) = (model.lgd(Party::A), model.lgd(Party::B));

    let u = exercise_boundary(spec, model, t_hat)?;
    let (call_below, put_below, call_above, put_above) = barrier_tails(spec, t_hat, u);

    let (exposure_kind, liability_kind) = match spec.side {
        Side::Payer => (OptionKind::Call, OptionKind::Put),
        Side::Receiver => (OptionKind::Put, OptionKind::Call),
    };
    let expo1 = spec.bs_option_on_forward(0.0, spec.s0, t_hat, k_eff, exposure_kind);
    let liab1 = spec.bs_option_on_forward(0.0, spec.s0, t_hat, k_eff, liability_kind);

    // post-break terms survive only on the continuation region
    let (expo_tail, liab_tail) = match spec.side {
        Side::Payer => (call_below, put_below),
        Side::Receiver => (put_above, call_above),
    };

    let v0 = spec.forward_value(0.0, spec.s0);
    let bcva_pre = la * pa1 * expo1;
    let bdva_pre = lb * pb1 * liab1;
    let adjusted = v0 - bcva_pre + bdva_pre + lb * pb2 * liab_tail - la * pa2 * expo_tail;
    let bc_option = adjusted - (v0 - bcva_pre + bdva_pre);

    let drift = spec.rate - 0.5 * spec.sigma * spec.sigma;
    let a = ((u / spec.s0).ln() - drift * t_hat) / (spec.sigma * t_hat.sqrt());
    let exercise_probability = match spec.side {
        Side::Payer => norm_cdf(-a),
        Side::Receiver => norm_cdf(a),
    };

    let diagnostics = Diagnostics {
        boundary: Some(u),
        exercise_probability: Some(exercise_probability),
        tree_slices: None,
    };
    Ok(ValuationReport {
        v0,
        bcva: bcva_pre,
        bdva: bdva_pre,
        bc_option,
        adjusted_value: adjusted,
        par_level: None,
        diagnostics,
    })
}

/// Strike making the supplied valuation zero; tolerance 1e-10 in value.
///
/// The valuation must be monotone in the strike (payer values strictly
/// decrease in K); no sign change over `[1e-6 s0, 10 s0]` is an error.
pub fn par_strike(
    mut value_at: impl FnMut(f64) -> Result<f64, EquityError>,
    s0: f64,
) -> Result<f64, EquityError> {
    let lo = 1e-6 * s0;
    let hi = 10.0 * s0;
    let f_lo = value_at(lo)?;
    let f_hi = value_at(hi)?;
    let bracket = Bracket::new(lo, hi, f_lo, f_hi)?;
    let mut pending: Option<EquityError> = None;
    let root = find_root(
        |k| match value_at(k) {
            Ok(v) => v,
            Err(e) => {
                pending = Some(e);
                f64::NAN
            }
        },
        bracket,
        1e-14 * s0,
    )?;
    if let Some(e) = pending {
        return Err(e);
    }
    let residual = value_at(root)?;
    debug_assert!(residual.abs() <= 1e-10, "par residual {residual}");
    Ok(root)
}
