//! Adaptive two-dimensional quadrature over (possibly semi-infinite)
//! rectangles, built from iterated 7-15 Gauss-Kronrod panels with greedy
//! bisection of the worst panel. Infinite limits are mapped to (0,1) by
//! rational / tangent substitutions; panel nodes are interior, so the
//! integrand is never evaluated at an endpoint.
#![allow(clippy::excessive_precision)]

use super::NumericsError;
use std::cell::Cell;

// 7-15 Gauss-Kronrod abscissae and weights (QUADPACK DQK15).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Integration rectangle; bounds may be `±INFINITY` on either axis.
#[derive(Debug, Clone, Copy)]
pub struct Rect {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Rect {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Result<Self, NumericsError> {
        for (lo, hi) in [x, y] {
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(NumericsError::InvalidRegion(lo, hi));
            }
        }
        Ok(Self { x, y })
    }
}

/// Adaptive estimate with its reported error bound.
#[derive(Debug, Clone, Copy)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
}

/// Maps an axis with possibly infinite bounds onto t in (0,1):
/// returns (point, jacobian) at parameter t.
fn map_axis(lo: f64, hi: f64, t: f64) -> (f64, f64) {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo + t * (hi - lo), hi - lo),
        (true, false) => {
            let u = 1.0 - t;
            (lo + t / u, 1.0 / (u * u))
        }
        (false, true) => ((hi - (1.0 - t) / t), 1.0 / (t * t)),
        (false, false) => {
            let x = (std::f64::consts::PI * (t - 0.5)).tan();
            (x, std::f64::consts::PI * (1.0 + x * x))
        }
    }
}

/// One 7-15 panel on [a, b] (in transformed coordinates).
fn gk15(g: &mut impl FnMut(f64) -> f64, a: f64, b: f64, evals: &Cell<u64>) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = half * XGK[i];
        let fsum = g(center - x) + g(center + x);
        kron += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    evals.set(evals.get() + 15);
    (kron * half, (kron - gauss).abs() * half)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Total integrand-evaluation budget for one quad2d call, shared between
/// the outer axis and every inner integral.
const EVAL_BUDGET: u64 = 5_000_000;

/// Greedy adaptive 1D integration of `g` over [0, 1]: keep bisecting the
/// worst panel until the summed error estimate meets `tol` or the shared
/// budget runs out.
fn adaptive_unit(g: &mut impl FnMut(f64) -> f64, tol: f64, evals: &Cell<u64>) -> (f64, f64) {
    let (v, e) = gk15(g, 0.0, 1.0, evals);
    let mut panels = vec![Panel { a: 0.0, b: 1.0, value: v, error: e }];
    loop {
        let total_err: f64 = panels.iter().map(|p| p.error).sum();
        if total_err <= tol || evals.get() >= EVAL_BUDGET || panels.len() >= 2048 {
            let total: f64 = panels.iter().map(|p| p.value).sum();
            return (total, total_err);
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        let (v1, e1) = gk15(g, a, mid, evals);
        let (v2, e2) = gk15(g, mid, b, evals);
        panels.push(Panel { a, b: mid, value: v1, error: e1 });
        panels.push(Panel { a: mid, b, value: v2, error: e2 });
    }
}

/// Adaptive 2D quadrature of `f` over `region` with absolute tolerance `tol`.
///
/// Iterated integration: the outer axis is adaptively refined, each outer
/// node integrating the inner axis adaptively at a tighter tolerance.
/// Exhausting the evaluation budget returns an error carrying the partial
/// estimate.
pub fn quad2d(
    f: impl Fn(f64, f64) -> f64,
    region: Rect,
    tol: f64,
) -> Result<QuadEstimate, NumericsError> {
    let inner_tol = tol / 16.0;
    let evals = Cell::new(0u64);
    let (xlo, xhi) = region.x;
    let (ylo, yhi) = region.y;

    let mut outer = |tx: f64| {
        let (x, wx) = map_axis(xlo, xhi, tx);
        let mut inner = |ty: f64| {
            let (y, wy) = map_axis(ylo, yhi, ty);
            f(x, y) * wy
        };
        let (v, _) = adaptive_unit(&mut inner, inner_tol, &evals);
        v * wx
    };

    let (value, error) = adaptive_unit(&mut outer, tol, &evals);
    if error > tol {
        return Err(NumericsError::QuadratureBudget { partial: value, error });
    }
    Ok(QuadEstimate { value, error })
}
