//! Independent oracles for the heavier machinery: quadrature of the joint
//! default density, quadrature of the bivariate lognormal barrier terms,
//! forward path simulation through the lattice branching, and the analytic
//! Hull-White swaption (Jamshidian decomposition) against the tree price.

mod common;

use breakclause::credit::Party;
use breakclause::equity::{self, EquityForwardSpec, SingleBreak};
use breakclause::numerics::{find_root, norm_cdf, quad2d, Bracket, Rect};
use breakclause::tree::{
    black_swaption_price, hw_swaption_price_with_step, SwapPricer, SwapSpec,
};
use breakclause::Side;
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn first_to_default_quadrature_matches_the_spec_example() {
    // A defaults first within the first year: 2/3 (1 - e^-0.15)
    let m = model(0.1, 0.05, 1.0);
    let q = quad2d(
        |a, s| m.joint_density(a, a + s).unwrap_or(0.0),
        Rect::new((0.0, 1.0), (0.0, f64::INFINITY)).unwrap(),
        1e-11,
    )
    .unwrap();
    assert!((q.value - 0.092862).abs() < 1e-6);
    assert!((q.value - m.first_to_default_prob(Party::A, 0.0, 1.0).unwrap()).abs() < 1e-9);
}

#[test]
fn joint_density_normalises_and_recovers_survival() {
    // independence: the density integrates to one over the quadrant
    let m1 = model(0.1, 0.05, 1.0);
    let q1 = quad2d(
        |a, b| m1.joint_density(a, b).unwrap_or(0.0),
        Rect::new((0.0, f64::INFINITY), (0.0, f64::INFINITY)).unwrap(),
        1e-9,
    )
    .unwrap();
    assert!((q1.value - 1.0).abs() < 1e-8, "theta=1 mass {}", q1.value);

    // theta > 1: the off-diagonal density still carries all the mass
    let m = model(0.1, 0.05, 4.0);
    let lower = quad2d(
        |a, s| m.joint_density(a, a + s).unwrap_or(0.0),
        Rect::new((0.0, f64::INFINITY), (0.0, f64::INFINITY)).unwrap(),
        1e-10,
    )
    .unwrap();
    let upper = quad2d(
        |b, s| m.joint_density(b + s, b).unwrap_or(0.0),
        Rect::new((0.0, f64::INFINITY), (0.0, f64::INFINITY)).unwrap(),
        1e-10,
    )
    .unwrap();
    assert!(
        (lower.value + upper.value - 1.0).abs() < 1e-8,
        "mass {}",
        lower.value + upper.value
    );

    // S(1,1) at theta = 2 by integrating the density over (1,inf)^2
    let m2 = model(0.1, 0.05, 2.0);
    let tri_a = quad2d(
        |a, s| m2.joint_density(a, a + s).unwrap_or(0.0),
        Rect::new((1.0, f64::INFINITY), (0.0, f64::INFINITY)).unwrap(),
        1e-10,
    )
    .unwrap();
    let tri_b = quad2d(
        |b, s| m2.joint_density(b + s, b).unwrap_or(0.0),
        Rect::new((1.0, f64::INFINITY), (0.0, f64::INFINITY)).unwrap(),
        1e-10,
    )
    .unwrap();
    let survival = tri_a.value + tri_b.value;
    assert!((survival - m2.survival_joint(1.0, 1.0)).abs() < 1e-8);
    assert!((survival - 0.894221).abs() < 1e-6);
}

#[test]
fn barrier_tails_match_lognormal_quadrature() {
    let spec = EquityForwardSpec::new(1.0, 0.97, 4.0, 0.3, 0.0, Side::Payer).unwrap();
    let m = model(0.1, 0.05, 1.0);
    let t_hat = 1.0;
    let u = equity::exercise_boundary(&spec, &m, t_hat).unwrap();
    let (call_below, put_below, call_above, put_above) = equity::barrier_tails(&spec, t_hat, u);

    // joint density of (z1, z2), the independent standard normals driving
    // S at t_hat and the increment to T
    let (s0, k, sig, t) = (spec.s0, spec.strike, spec.sigma, spec.maturity);
    let tau = t - t_hat;
    let s1 = |z1: f64| s0 * (-0.5 * sig * sig * t_hat + sig * t_hat.sqrt() * z1).exp();
    let st = |z1: f64, z2: f64| s1(z1) * (-0.5 * sig * sig * tau + sig * tau.sqrt() * z2).exp();
    let phi2 = |z1: f64, z2: f64| {
        (-0.5 * (z1 * z1 + z2 * z2)).exp() / (2.0 * std::f64::consts::PI)
    };
    let plane = Rect::new(
        (f64::NEG_INFINITY, f64::INFINITY),
        (f64::NEG_INFINITY, f64::INFINITY),
    )
    .unwrap();

    let q_call_below = quad2d(
        |z1, z2| {
            let w = phi2(z1, z2);
            if w == 0.0 {
                return 0.0;
            }
            let (a, b) = (s1(z1), st(z1, z2));
            if a < u && b > k { (b - k) * w } else { 0.0 }
        },
        plane,
        1e-9,
    )
    .unwrap();
    let q_put_below = quad2d(
        |z1, z2| {
            let w = phi2(z1, z2);
            if w == 0.0 {
                return 0.0;
            }
            let (a, b) = (s1(z1), st(z1, z2));
            if a < u && b < k { (k - b) * w } else { 0.0 }
        },
        plane,
        1e-9,
    )
    .unwrap();
    assert!(
        (call_below - q_call_below.value).abs() < 1e-8,
        "call_below {call_below} vs quad {} (err est {:e})",
        q_call_below.value,
        q_call_below.error
    );
    assert!(
        (put_below - q_put_below.value).abs() < 1e-8,
        "put_below {put_below} vs quad {} (err est {:e})",
        q_put_below.value,
        q_put_below.error
    );

    // complements reconstruct the plain options
    let full_call = equity::black_scholes(s0, k, sig, t, 0.0, equity::OptionKind::Call);
    let full_put = equity::black_scholes(s0, k, sig, t, 0.0, equity::OptionKind::Put);
    assert!((call_below + call_above - full_call).abs() < 1e-12);
    assert!((put_below + put_above - full_put).abs() < 1e-12);
}

/// Walks paths through the lattice branching and accumulates the discounted
/// positive exposure at every period start: an independent forward-sampling
/// check of the backward-induction adjustment sums.
#[test]
fn tree_bcva_agrees_with_path_simulation() {
    let curve = flat_curve();
    let params = calibrated(&curve);
    let tree = tree_4y(&curve, &params);
    let swap = SwapSpec::new(1.0, PAR_4Y, 4.0, 0.5, Side::Payer).unwrap();
    let pricer = SwapPricer::new(&tree, &swap).unwrap();
    let m = model(0.1, 0.05, 4.0);

    let backward = pricer.exposure_leg(0, &m, Party::A, 4.0).unwrap()[0];

    // exposure slices and claims
    let dates = swap.exposure_dates();
    let slices: Vec<usize> = dates.iter().map(|&t| tree.slice_index(t).unwrap()).collect();
    let claims: Vec<Vec<f64>> = slices
        .iter()
        .map(|&s| {
            pricer
                .swap_value_nodes(s)
                .unwrap()
                .iter()
                .map(|v| v.max(0.0))
                .collect()
        })
        .collect();
    let weights: Vec<f64> = dates
        .iter()
        .zip(swap.pay_times())
        .map(|(&t0, &t1)| m.lgd(Party::A) * m.first_to_default_prob(Party::A, t0, t1).unwrap())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let paths = 400_000;
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    let last_slice = *slices.last().unwrap();
    for _ in 0..paths {
        let mut node = 0usize;
        let mut disc = 1.0f64;
        let mut total = 0.0f64;
        let mut k = 0usize;
        for i in 0..=last_slice {
            if k < slices.len() && slices[k] == i {
                total += weights[k] * disc * claims[k][node];
                k += 1;
            }
            if i < last_slice {
                disc *= tree.one_step_discount(i, node);
                let (centre, pu, pm, _) = tree.transition(i, node);
                let u: f64 = rng.gen();
                node = if u < pu {
                    centre + 1
                } else if u < pu + pm {
                    centre
                } else {
                    centre - 1
                };
            }
        }
        sum += total;
        sum_sq += total * total;
    }
    let n = paths as f64;
    let mean = sum / n;
    let se = ((sum_sq / n - mean * mean).max(0.0) / (n - 1.0)).sqrt();
    let z = (backward - mean).abs() / se;
    assert!(z <= 3.0, "backward {backward} vs paths {mean} +- {se} ({z:.2} se)");

    // regression lock for the flat-curve reference BCVA
    assert!(
        (backward - 1.5445132391e-3).abs() < 1e-12,
        "BCVA regression moved: {backward:e}"
    );
}

/// Jamshidian decomposition of the ATM payer swaption under Hull-White on
/// the flat curve: an analytic check of the lattice dynamics.
#[test]
fn tree_swaption_matches_jamshidian() {
    let curve = flat_curve();
    let params = calibrated(&curve);
    let quote = quote_2y2y();
    let (a, sigma) = (params.mean_reversion(), params.sigma_at(0.0));
    let r_flat = PAR_4Y;
    let expiry = quote.expiry;
    let pays: Vec<f64> = (1..=4).map(|k| expiry + 0.5 * k as f64).collect();
    let strike = curve.par_swap_rate(expiry, &pays);

    let b_factor = |tau: f64| (1.0 - (-a * tau).exp()) / a;
    // P(t, T; r) under HW on a flat curve
    let bond = |t: f64, tt: f64, r: f64| {
        let b = b_factor(tt - t);
        let a_factor = (curve.discount(tt) / curve.discount(t))
            * (b * r_flat - sigma * sigma / (4.0 * a) * b * b * (1.0 - (-2.0 * a * t).exp())).exp();
        a_factor * (-b * r).exp()
    };
    let mut cash: Vec<f64> = pays.iter().map(|_| strike * 0.5).collect();
    *cash.last_mut().unwrap() += 1.0;
    let coupon_bond = |r: f64| -> f64 {
        pays.iter().zip(&cash).map(|(&t, &c)| c * bond(expiry, t, r)).sum::<f64>()
    };
    let gap = |r: f64| coupon_bond(r) - 1.0;
    let r_star = find_root(gap, Bracket::try_from_fn(gap, -1.0, 1.0).unwrap(), 1e-14).unwrap();

    // payer swaption = sum of puts on the component bonds struck at their
    // r* values
    let sig_p = |s: f64| {
        sigma / a * (1.0 - (-a * (s - expiry)).exp())
            * ((1.0 - (-2.0 * a * expiry).exp()) / (2.0 * a)).sqrt()
    };
    let zbp = |s: f64, strike_px: f64| {
        let sp = sig_p(s);
        let h = (curve.discount(s) / (curve.discount(expiry) * strike_px)).ln() / sp + 0.5 * sp;
        strike_px * curve.discount(expiry) * norm_cdf(-h + sp) - curve.discount(s) * norm_cdf(-h)
    };
    let analytic: f64 = pays
        .iter()
        .zip(&cash)
        .map(|(&t, &c)| c * zbp(t, bond(expiry, t, r_star)))
        .sum();

    // first-order discretisation bias: halving the step should roughly
    // halve the gap to the continuous-time price
    let px_12 = hw_swaption_price_with_step(&curve, &params, &quote, 1.0 / 12.0).unwrap();
    let px_24 = hw_swaption_price_with_step(&curve, &params, &quote, 1.0 / 24.0).unwrap();
    let px_48 = hw_swaption_price_with_step(&curve, &params, &quote, 1.0 / 48.0).unwrap();
    let (e12, e24, e48) = (
        (px_12 - analytic).abs(),
        (px_24 - analytic).abs(),
        (px_48 - analytic).abs(),
    );
    assert!(e12 / analytic < 1e-2, "monthly tree off by {:.2e} rel", e12 / analytic);
    assert!(e24 < e12 && e48 < e24, "no convergence: {e12:e} {e24:e} {e48:e}");
    assert!(e48 / analytic < 3e-3, "weekly tree off by {:.2e} rel", e48 / analytic);

    // and the calibration already ties the monthly tree to the Black premium
    let black = black_swaption_price(&curve, &quote);
    assert!(((px_12 - black) / black).abs() < 1e-3);
}

/// The par-rate impact of the break clause is insensitive to the slice step:
/// halving the step moves the measured effect by well under the acceptance
/// resolution.
#[test]
fn break_effect_is_stable_under_step_halving() {
    use breakclause::tree::{build_tree, par_rate, slice_grid, BreakSchedule, Holder};
    let curve = flat_curve();
    let params = calibrated(&curve);
    let m = model(0.1, 0.05, 4.0);
    let keys: Vec<f64> = (1..=8).map(|k| 0.5 * k as f64).collect();
    let effect_at = |step: f64| -> f64 {
        let tree = build_tree(&curve, &params, &slice_grid(&keys, step)).unwrap();
        let breaks = BreakSchedule::new(vec![1.0], Holder::BOnly).unwrap();
        let base = par_rate(|c| {
            let swap = SwapSpec::new(1.0, c, 4.0, 0.5, Side::Payer)?;
            Ok(SwapPricer::new(&tree, &swap)?.valuation(&m, None)?.adjusted_value)
        })
        .unwrap();
        let with = par_rate(|c| {
            let swap = SwapSpec::new(1.0, c, 4.0, 0.5, Side::Payer)?;
            Ok(SwapPricer::new(&tree, &swap)?
                .valuation(&m, Some(&breaks))?
                .adjusted_value)
        })
        .unwrap();
        (with - base) * 1e4
    };
    let coarse = effect_at(1.0 / 12.0);
    let fine = effect_at(1.0 / 24.0);
    assert!(
        (coarse - fine).abs() < 0.1,
        "step halving moved the effect {coarse:.3} -> {fine:.3} bp"
    );
}

#[test]
fn with_bc_value_matches_simulation_for_the_receiver_too() {
    let spec = EquityForwardSpec::new(1.0, 1.02, 4.0, 0.3, 0.0, Side::Receiver).unwrap();
    let m = model(0.1, 0.05, 2.0);
    let bc = SingleBreak::new(1.0).unwrap();
    let analytic = equity::value_with_bc(&spec, &m, bc).unwrap().adjusted_value;
    let mc = breakclause::mc::simulate_equity_forward(&spec, &m, 1.0, Some(bc), 400_000, 9);
    let z = (analytic - mc.value).abs() / mc.std_err;
    assert!(z <= 3.5, "receiver: analytic {analytic} vs mc {} ({z:.2} se)", mc.value);
}
