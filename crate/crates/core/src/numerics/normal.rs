//! Univariate and bivariate standard normal CDFs.
//!
//! The bivariate CDF follows Genz's double-precision rework of the
//! Drezner–Wesolowsky (1989) method (the BVND routine of TVPACK):
//! Gauss–Legendre quadrature over a trigonometric substitution for
//! |rho| <= 0.925 and an asymptotic expansion plus quadrature for
//! |rho| close to one. Absolute accuracy is around 5e-16, well inside
//! the 1e-10 target.
#![allow(clippy::excessive_precision)]

use super::NumericsError;

/// Standard normal CDF.
///
/// Saturates at 0/1 for large |x|; accurate to well under 1e-12 absolute.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Correlation coefficient, validated into [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation(f64);

impl Correlation {
    pub fn new(rho: f64) -> Result<Self, NumericsError> {
        if !(-1.0..=1.0).contains(&rho) || rho.is_nan() {
            return Err(NumericsError::InvalidCorrelation(rho));
        }
        Ok(Self(rho))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Bivariate standard normal CDF `P(X < x, Y < y)` with correlation `corr`.
///
/// `x` and `y` may be `±INFINITY`; `|rho| = 1` degenerates to the
/// comonotonic / antithetic closed forms.
pub fn binorm_cdf(x: f64, y: f64, corr: Correlation) -> f64 {
    let rho = corr.value();
    if x == f64::NEG_INFINITY || y == f64::NEG_INFINITY {
        return 0.0;
    }
    if x == f64::INFINITY {
        return norm_cdf(y);
    }
    if y == f64::INFINITY {
        return norm_cdf(x);
    }
    if rho == 1.0 {
        return norm_cdf(x.min(y));
    }
    if rho == -1.0 {
        return (norm_cdf(x) + norm_cdf(y) - 1.0).max(0.0);
    }
    // BVND computes P(X > dh, Y > dk).
    bvnd(-x, -y, rho).clamp(0.0, 1.0)
}

// Gauss-Legendre points and weights from TVPACK, (weight, node) pairs.
const GL6: [(f64, f64); 3] = [
    (0.1713244923791705, -0.9324695142031522),
    (0.3607615730481384, -0.6612093864662647),
    (0.4679139345726904, -0.2386191860831970),
];
const GL12: [(f64, f64); 6] = [
    (0.04717533638651177, -0.9815606342467191),
    (0.1069393259953183, -0.9041172563704750),
    (0.1600783285433464, -0.7699026741943050),
    (0.2031674267230659, -0.5873179542866171),
    (0.2334925365383547, -0.3678314989981802),
    (0.2491470458134029, -0.1252334085114692),
];
const GL20: [(f64, f64); 10] = [
    (0.01761400713915212, -0.9931285991850949),
    (0.04060142980038694, -0.9639719272779138),
    (0.06267204833410906, -0.9122344282513259),
    (0.08327674157670475, -0.8391169718222188),
    (0.1019301198172404, -0.7463319064601508),
    (0.1181945319615184, -0.6360536807265150),
    (0.1316886384491766, -0.5108670019508271),
    (0.1420961093183821, -0.3737060887154196),
    (0.1491729864726037, -0.2277858511416451),
    (0.1527533871307259, -0.07652652113349733),
];

fn quadrature(rho_abs: f64) -> &'static [(f64, f64)] {
    if rho_abs < 0.3 {
        &GL6
    } else if rho_abs < 0.75 {
        &GL12
    } else {
        &GL20
    }
}

/// TVPACK BVND: `P(X > dh, Y > dk)` for standard bivariate normal, correlation `r`.
fn bvnd(dh: f64, dk: f64, r: f64) -> f64 {
    let quad = quadrature(r.abs());
    let h = dh;
    let mut k = dk;
    let mut hk = h * k;
    let mut bvn = 0.0;

    if r.abs() <= 0.925 {
        if r.abs() > 0.0 {
            let hs = (h * h + k * k) / 2.0;
            let asr = 0.5 * r.asin();
            for &(w, x) in quad {
                for sign in [-1.0, 1.0] {
                    let sn = (asr * (sign * x + 1.0)).sin();
                    bvn += w * ((sn * hk - hs) / (1.0 - sn * sn)).exp();
                }
            }
            bvn *= asr / (2.0 * std::f64::consts::PI);
        }
        return bvn + norm_cdf(-h) * norm_cdf(-k);
    }

    // |r| > 0.925: Genz's expansion about r = ±1.
    if r < 0.0 {
        k = -k;
        hk = -hk;
    }
    if r.abs() < 1.0 {
        let a_s = (1.0 - r) * (1.0 + r);
        let mut a = a_s.sqrt();
        let b_s = (h - k) * (h - k);
        let c = (4.0 - hk) / 8.0;
        let d = (12.0 - hk) / 16.0;
        let asr = -0.5 * (b_s / a_s + hk);
        if asr > -100.0 {
            bvn = a
                * asr.exp()
                * (1.0 - c * (b_s - a_s) * (1.0 - d * b_s / 5.0) / 3.0 + c * d * a_s * a_s / 5.0);
        }
        if -hk < 100.0 {
            let b = b_s.sqrt();
            bvn -= (-0.5 * hk).exp()
                * (2.0 * std::f64::consts::PI).sqrt()
                * norm_cdf(-b / a)
                * b
                * (1.0 - c * b_s * (1.0 - d * b_s / 5.0) / 3.0);
        }
        a /= 2.0;
        for &(w, x) in quad {
            for sign in [-1.0, 1.0] {
                let xs = (a * (sign * x + 1.0)).powi(2);
                let rs = (1.0 - xs).sqrt();
                let asr = -0.5 * (b_s / xs + hk);
                if asr > -100.0 {
                    bvn += a
                        * w
                        * asr.exp()
                        * ((-hk * (1.0 - rs) / (2.0 * (1.0 + rs))).exp() / rs
                            - (1.0 + c * xs * (1.0 + d * xs)));
                }
            }
        }
        bvn *= -1.0 / (2.0 * std::f64::consts::PI);
    }
    if r > 0.0 {
        bvn + norm_cdf(-h.max(k))
    } else {
        let mut v = -bvn;
        if k > h {
            v += norm_cdf(k) - norm_cdf(h);
        }
        v
    }
}
