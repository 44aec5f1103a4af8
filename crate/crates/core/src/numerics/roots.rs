//! Bracketing root finder: Brent's method (bisection with inverse-quadratic
//! and secant acceleration), derivative-free and deterministic.

use super::NumericsError;

const MAX_ITER: usize = 200;

/// A sign-changing bracket. Construction normalises the endpoint order, so
/// solver results are invariant to swapping `lo` and `hi`.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self, NumericsError> {
        let (lo, hi, f_lo, f_hi) = if lo <= hi {
            (lo, hi, f_lo, f_hi)
        } else {
            (hi, lo, f_hi, f_lo)
        };
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(NumericsError::InvalidBracket(lo, hi));
        }
        if f_lo == 0.0 || f_hi == 0.0 {
            // a root on the boundary is still a valid bracket
            return Ok(Self { lo, hi, f_lo, f_hi });
        }
        if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
            return Err(NumericsError::NoSignChange { lo, hi, f_lo, f_hi });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    /// Evaluates `f` at both endpoints and builds the bracket.
    pub fn try_from_fn(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64) -> Result<Self, NumericsError> {
        let f_lo = f(lo);
        let f_hi = f(hi);
        Self::new(lo, hi, f_lo, f_hi)
    }
}

/// Brent's method on a validated bracket.
///
/// Stops when the bracket width falls below `tol` (plus a machine-precision
/// floor) or the function value vanishes; after 200 iterations returns
/// `MaxIterations` carrying the best iterate.
pub fn find_root(
    mut f: impl FnMut(f64) -> f64,
    bracket: Bracket,
    tol: f64,
) -> Result<f64, NumericsError> {
    let mut a = bracket.lo;
    let mut b = bracket.hi;
    let mut fa = bracket.f_lo;
    let mut fb = bracket.f_hi;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if fb.abs() > fc.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, secant when only two points
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(NumericsError::MaxIterations { best: b, f_best: fb })
}
