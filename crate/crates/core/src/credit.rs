//! Joint default-time model: exponential marginals with constant intensities
//! coupled by a Gumbel copula, giving the bivariate survival law
//! `S(tA, tB) = exp(-[(lA tA)^th + (lB tB)^th]^(1/th))` with `th >= 1`.
//!
//! Simultaneous defaults carry zero probability; all first-to-default
//! quantities come from the closed form obtained by differentiating the
//! survival function along the diagonal (the adaptive quadrature of the joint
//! density is kept as a test oracle only).

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum CreditError {
    #[error("default intensity must be nonnegative, got {0}")]
    InvalidIntensity(f64),
    #[error("copula parameter theta must be >= 1, got {0}")]
    InvalidTheta(f64),
    #[error("loss given default must lie in [0, 1], got {0}")]
    InvalidLossGivenDefault(f64),
    #[error("invalid time window [{t1}, {t2}]")]
    InvalidWindow { t1: f64, t2: f64 },
    #[error("diagonal singular mass excluded: density undefined at tA = tB = {0} for theta > 1")]
    DiagonalExcluded(f64),
}

/// One of the two counterparties. `A` is the counterparty whose default hurts
/// the valuing party `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    A,
    B,
}

/// Kendall's tau implied by the Gumbel parameter: `1 - 1/theta`.
pub fn kendall_tau(theta: f64) -> f64 {
    assert!(theta >= 1.0, "theta must be >= 1");
    1.0 - 1.0 / theta
}

/// Immutable joint default model for the counterparty pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefaultModel {
    lambda_a: f64,
    lambda_b: f64,
    theta: f64,
    lgd_a: f64,
    lgd_b: f64,
}

impl DefaultModel {
    pub fn new(
        lambda_a: f64,
        lambda_b: f64,
        theta: f64,
        lgd_a: f64,
        lgd_b: f64,
    ) -> Result<Self, CreditError> {
        for l in [lambda_a, lambda_b] {
            if !l.is_finite() || l < 0.0 {
                return Err(CreditError::InvalidIntensity(l));
            }
        }
        if !theta.is_finite() || theta < 1.0 {
            return Err(CreditError::InvalidTheta(theta));
        }
        for l in [lgd_a, lgd_b] {
            if !(0.0..=1.0).contains(&l) {
                return Err(CreditError::InvalidLossGivenDefault(l));
            }
        }
        Ok(Self { lambda_a, lambda_b, theta, lgd_a, lgd_b })
    }

    pub fn lambda(&self, party: Party) -> f64 {
        match party {
            Party::A => self.lambda_a,
            Party::B => self.lambda_b,
        }
    }

    pub fn lgd(&self, party: Party) -> f64 {
        match party {
            Party::A => self.lgd_a,
            Party::B => self.lgd_b,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn kendall_tau(&self) -> f64 {
        kendall_tau(self.theta)
    }

    /// Replaces the counterparty intensity, keeping everything else.
    pub fn with_lambda_a(&self, lambda_a: f64) -> Result<Self, CreditError> {
        Self::new(lambda_a, self.lambda_b, self.theta, self.lgd_a, self.lgd_b)
    }

    /// The model with the roles of A and B swapped.
    pub fn mirrored(&self) -> Self {
        Self {
            lambda_a: self.lambda_b,
            lambda_b: self.lambda_a,
            theta: self.theta,
            lgd_a: self.lgd_b,
            lgd_b: self.lgd_a,
        }
    }

    /// Intensity of the first default `min(tauA, tauB)`:
    /// `Lambda = (lA^th + lB^th)^(1/th)`.
    pub fn first_to_default_intensity(&self) -> f64 {
        let s = self.lambda_a.powf(self.theta) + self.lambda_b.powf(self.theta);
        if s == 0.0 {
            0.0
        } else {
            s.powf(1.0 / self.theta)
        }
    }

    /// Share of first defaults attributed to `party`: `lX^th / Lambda^th`.
    fn first_to_default_share(&self, party: Party) -> f64 {
        let num = self.lambda(party).powf(self.theta);
        let den = self.lambda_a.powf(self.theta) + self.lambda_b.powf(self.theta);
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// Joint survival `P(tauA > tA, tauB > tB)`.
    pub fn survival_joint(&self, t_a: f64, t_b: f64) -> f64 {
        assert!(t_a >= 0.0 && t_b >= 0.0, "times must be nonnegative");
        let u = (self.lambda_a * t_a).powf(self.theta) + (self.lambda_b * t_b).powf(self.theta);
        if u == 0.0 {
            return 1.0;
        }
        (-u.powf(1.0 / self.theta)).exp()
    }

    /// Joint survival of both names to `t`: `exp(-Lambda t)`.
    pub fn survival_to(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "time must be nonnegative");
        (-self.first_to_default_intensity() * t).exp()
    }

    /// First-to-default probability `P(t1 < tauX < min(tauY, t2))`, from the
    /// diagonal derivative of the survival function:
    /// `(lX^th / Lambda^th) (exp(-Lambda t1) - exp(-Lambda t2))`.
    pub fn first_to_default_prob(
        &self,
        party: Party,
        t1: f64,
        t2: f64,
    ) -> Result<f64, CreditError> {
        if !(0.0 <= t1 && t1 <= t2) {
            return Err(CreditError::InvalidWindow { t1, t2 });
        }
        let lam = self.first_to_default_intensity();
        if lam == 0.0 {
            return Ok(0.0);
        }
        Ok(self.first_to_default_share(party) * ((-lam * t1).exp() - (-lam * t2).exp()))
    }

    /// Off-diagonal joint density of `(tauA, tauB)`, the mixed second partial
    /// of the survival function. For `theta > 1` the diagonal is refused
    /// (the model disallows simultaneous defaults).
    pub fn joint_density(&self, t_a: f64, t_b: f64) -> Result<f64, CreditError> {
        if !(t_a > 0.0 && t_b > 0.0) {
            return Err(CreditError::InvalidWindow { t1: t_a, t2: t_b });
        }
        if self.theta > 1.0 && t_a == t_b {
            return Err(CreditError::DiagonalExcluded(t_a));
        }
        if self.lambda_a == 0.0 || self.lambda_b == 0.0 {
            return Ok(0.0);
        }
        let th = self.theta;
        let u = (self.lambda_a * t_a).powf(th);
        let v = (self.lambda_b * t_b).powf(th);
        let s = u + v;
        let w = s.powf(1.0 / th);
        let density = (-w).exp()
            * self.lambda_a.powf(th)
            * self.lambda_b.powf(th)
            * (t_a * t_b).powf(th - 1.0)
            * s.powf(1.0 / th - 2.0)
            * (w + th - 1.0);
        Ok(density)
    }
}
