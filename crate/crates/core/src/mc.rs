//! Monte-Carlo cross-checks: Gumbel default-time sampling and the
//! lumped-default simulation of the equity forward game (default settles the
//! risk-free close-out at the break date or maturity; the break clause is
//! exercised by the bilateral rule).
//!
//! The default-time sampler draws tauA from its exponential marginal and
//! inverts the conditional survival of tauB given tauA with a safeguarded
//! Newton iteration; it touches none of the closed-form first-to-default
//! machinery it is used to cross-check.

use crate::credit::{DefaultModel, Party};
use crate::equity::{black_scholes, EquityForwardSpec, OptionKind, SingleBreak};
use crate::report::Side;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Simulation estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub value: f64,
    pub std_err: f64,
    pub paths: u64,
}

/// Draws a pair of default times from the Gumbel bivariate exponential law.
///
/// Conditional inversion: with `c = lambda_A tauA` and `V` uniform, the
/// conditional survival of tauB given tauA solves
/// `-c (x - 1) + (1 - theta) ln x = ln V` for `x >= 1`, after which
/// `tauB = (c / lambda_B) (x^theta - 1)^(1/theta)`.
pub fn sample_default_times(model: &DefaultModel, rng: &mut impl Rng) -> (f64, f64) {
    let la = model.lambda(Party::A);
    let lb = model.lambda(Party::B);
    let theta = model.theta();

    let u: f64 = rng.gen();
    let tau_a = if la > 0.0 { -(1.0 - u).ln() / la } else { f64::INFINITY };
    let v: f64 = 1.0 - rng.gen::<f64>(); // in (0, 1]

    if lb == 0.0 {
        return (tau_a, f64::INFINITY);
    }
    if la == 0.0 || theta == 1.0 {
        return (tau_a, -v.ln() / lb);
    }

    let c = la * tau_a;
    let target = v.ln();
    // h(x) = -c(x-1) + (1-theta) ln x - target, decreasing and convex:
    // Newton from x = 1 converges monotonically from the left.
    let mut x = 1.0f64;
    for _ in 0..200 {
        let h = -c * (x - 1.0) + (1.0 - theta) * x.ln() - target;
        let dh = -c + (1.0 - theta) / x;
        let step = h / dh;
        x -= step;
        if step.abs() <= 1e-13 * (1.0 + x) {
            break;
        }
    }
    let tau_b = (c / lb) * (x.powf(theta) - 1.0).max(0.0).powf(1.0 / theta);
    (tau_a, tau_b)
}

/// Lumped-default simulation of the equity forward, with or without the
/// break clause at `t_hat`. Matches the analytic route's conventions:
/// defaults in (0, t_hat] settle the close-out at t_hat, later ones at T.
pub fn simulate_equity_forward(
    spec: &EquityForwardSpec,
    model: &DefaultModel,
    t_hat: f64,
    bc: Option<SingleBreak>,
    paths: u64,
    seed: u64,
) -> McEstimate {
    assert!(t_hat > 0.0 && t_hat < spec.maturity);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = spec.maturity;
    let tau = t - t_hat;
    let (la, lb) = (model.lgd(Party::A), model.lgd(Party::B));
    let d1 = (-spec.rate * t_hat).exp();
    let dt = (-spec.rate * t).exp();
    let drift = spec.rate - 0.5 * spec.sigma * spec.sigma;

    // remaining-horizon credit weights entering the exercise rule
    let wa = la * model.first_to_default_prob(Party::A, t_hat, t).expect("window");
    let wb = lb * model.first_to_default_prob(Party::B, t_hat, t).expect("window");
    let continue_at = |s1: f64| -> bool {
        match spec.side {
            Side::Payer => {
                wb * black_scholes(s1, spec.strike, spec.sigma, tau, spec.rate, OptionKind::Put)
                    >= wa * black_scholes(s1, spec.strike, spec.sigma, tau, spec.rate, OptionKind::Call)
            }
            Side::Receiver => {
                wb * black_scholes(s1, spec.strike, spec.sigma, tau, spec.rate, OptionKind::Call)
                    >= wa * black_scholes(s1, spec.strike, spec.sigma, tau, spec.rate, OptionKind::Put)
            }
        }
    };

    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..paths {
        let (tau_a, tau_b) = sample_default_times(model, &mut rng);
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let s1 = spec.s0 * (drift * t_hat + spec.sigma * t_hat.sqrt() * z1).exp();
        let st = s1 * (drift * tau + spec.sigma * tau.sqrt() * z2).exp();
        let v1 = spec.forward_value(t_hat, s1);
        let vt = spec.forward_value(t, st);
        let first = tau_a.min(tau_b);
        let a_first = tau_a < tau_b;

        let payoff = if first <= t_hat {
            if a_first {
                d1 * (v1 - la * v1.max(0.0))
            } else {
                d1 * (v1 + lb * (-v1).max(0.0))
            }
        } else if bc.is_some() && !continue_at(s1) {
            d1 * v1
        } else if first <= t {
            if a_first {
                dt * (vt - la * vt.max(0.0))
            } else {
                dt * (vt + lb * (-vt).max(0.0))
            }
        } else {
            dt * vt
        };
        sum += payoff;
        sum_sq += payoff * payoff;
    }
    let n = paths as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    McEstimate { value: mean, std_err: (var / n).sqrt(), paths }
}
