//! Shared builders for the integration suites: reference markets, the
//! calibrated lattice, and the published table constants.

#![allow(dead_code)]

use breakclause::credit::DefaultModel;
use breakclause::numerics::{find_root, Bracket};
use breakclause::tree::{build_tree, calibrate_sigma, slice_grid, HwParams, HwTree, SwaptionQuote};
use breakclause::YieldCurve;

pub const PAR_4Y: f64 = 0.01677;
pub const SWAPTION_VOL: f64 = 0.376;

pub fn flat_curve() -> YieldCurve {
    YieldCurve::flat(PAR_4Y).unwrap()
}

/// Upward zero curve z(t) = z0 + 0.0025 t anchored so the 4y semi-annual
/// par rate is exactly the quoted level.
pub fn steep_curve() -> YieldCurve {
    let pays: Vec<f64> = (1..=8).map(|k| 0.5 * k as f64).collect();
    let mk = |z0: f64| {
        let pillars: Vec<(f64, f64)> = pays.iter().map(|&t| (t, z0 + 0.0025 * t)).collect();
        YieldCurve::from_zero_pillars(&pillars).unwrap()
    };
    let gap = |z0: f64| mk(z0).par_swap_rate(0.0, &pays) - PAR_4Y;
    let z0 = find_root(gap, Bracket::try_from_fn(gap, 0.0, 0.05).unwrap(), 1e-14).unwrap();
    mk(z0)
}

pub fn quote_2y2y() -> SwaptionQuote {
    SwaptionQuote { expiry: 2.0, tenor: 2.0, frequency: 0.5, vol: SWAPTION_VOL }
}

pub fn calibrated(curve: &YieldCurve) -> HwParams {
    calibrate_sigma(curve, 0.03, &quote_2y2y()).unwrap()
}

pub fn tree_4y(curve: &YieldCurve, params: &HwParams) -> HwTree {
    let keys: Vec<f64> = (1..=8).map(|k| 0.5 * k as f64).collect();
    build_tree(curve, params, &slice_grid(&keys, 1.0 / 12.0)).unwrap()
}

pub fn model(la: f64, lb: f64, th: f64) -> DefaultModel {
    DefaultModel::new(la, lb, th, 1.0, 1.0).unwrap()
}

/// Table 1 of the reference results: par-strike differences in percent vs
/// the 1y no-BC forward, rows theta = 1..5, columns
/// (T=4 with BC at 1y, T=4, T=2 with BC at 1y, T=2).
pub const TABLE1_PAYER: [[f64; 4]; 5] = [
    [0.90, -3.23, 0.43, -0.81],
    [0.24, -4.42, 0.16, -1.09],
    [0.06, -5.33, 0.06, -1.31],
    [0.01, -5.91, 0.02, -1.45],
    [0.00, -6.23, 0.01, -1.53],
];
pub const TABLE1_RECEIVER: [[f64; 4]; 5] = [
    [-0.90, 3.37, -0.43, 0.82],
    [-0.24, 4.70, -0.16, 1.12],
    [-0.06, 5.75, -0.06, 1.36],
    [-0.01, 6.42, -0.02, 1.51],
    [0.00, 6.80, -0.01, 1.59],
];

/// Table 2 of the reference results (basis points), keyed as
/// (break dates, lambda_a, lambda_b, theta) -> (payer, receiver).
pub fn table2_reference() -> Vec<(Vec<f64>, f64, f64, f64, f64, f64)> {
    let sets: [&[f64]; 6] = [
        &[1.0, 2.0, 3.0],
        &[1.0, 2.0],
        &[1.0],
        &[2.0, 3.0],
        &[2.0],
        &[3.0],
    ];
    let left4: [(f64, f64); 6] =
        [(6.0, -2.4), (5.9, -2.4), (5.9, -2.3), (3.5, -1.2), (3.5, -1.2), (1.2, -0.4)];
    let left1: [(f64, f64); 6] =
        [(5.3, -2.0), (5.3, -1.9), (5.0, -1.7), (3.1, -1.0), (3.1, -1.0), (1.1, -0.3)];
    let right4: [(f64, f64); 6] =
        [(0.2, 0.0), (0.2, 0.0), (0.2, 0.0), (0.2, 0.0), (0.2, 0.0), (0.1, 0.0)];
    let right1: [(f64, f64); 6] =
        [(2.4, -0.7), (2.4, -0.7), (2.1, -0.5), (1.5, -0.4), (1.5, -0.4), (0.5, -0.1)];
    let mut rows = Vec::new();
    for (panel, (la, lb)) in [(0.1, 0.05), (0.05, 0.1)].into_iter().enumerate() {
        for (t_i, th) in [4.0, 1.0].into_iter().enumerate() {
            let vals = match (panel, t_i) {
                (0, 0) => &left4,
                (0, 1) => &left1,
                (1, 0) => &right4,
                _ => &right1,
            };
            for (set, &(p, r)) in sets.iter().zip(vals.iter()) {
                rows.push((set.to_vec(), la, lb, th, p, r));
            }
        }
    }
    rows
}
