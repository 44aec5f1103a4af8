//! Unilateral CVA and its sensitivity to the counterparty intensity: the
//! expected loss from A's default under the marginal law of tauA (own
//! default ignored, so the no-break figures do not depend on lambda_B or
//! theta), with the break clause entering through the holder's bilateral
//! exercise rule masking the exposure claims at each break slice.

use crate::credit::{CreditError, DefaultModel, Party};
use crate::tree::{BreakSchedule, Holder, SwapPricer, TreeError};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum RiskError {
    #[error("bump must be positive and keep lambda_A nonnegative (lambda_A={lambda_a}, bump={bump})")]
    InvalidBump { lambda_a: f64, bump: f64 },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Credit(#[from] CreditError),
}

/// Central-difference sensitivity of the UCVA to the counterparty intensity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityReport {
    pub base_ucva: f64,
    pub bumped_up: f64,
    pub bumped_down: f64,
    /// dUCVA / dlambda_A.
    pub sensitivity: f64,
    pub bump: f64,
}

impl SensitivityReport {
    /// Residual of `sensitivity * 2 * bump = up - down`; zero by construction.
    pub fn consistency_residual(&self) -> f64 {
        self.sensitivity * 2.0 * self.bump - (self.bumped_up - self.bumped_down)
    }

    /// Sensitivity rescaled to a one-basis-point intensity move.
    pub fn per_basis_point(&self) -> f64 {
        self.sensitivity * 1e-4
    }
}

/// Whether the deal is still alive at each break date, per node: the
/// holder's continuation values decide, mutual clauses terminate with
/// certainty.
fn alive_masks(
    pricer: &SwapPricer,
    model: &DefaultModel,
    breaks: &BreakSchedule,
) -> Result<Vec<Vec<f64>>, RiskError> {
    match breaks.holder() {
        Holder::BOnly => {
            let g = pricer.continuation_values(model, breaks.dates())?;
            Ok(g
                .into_iter()
                .map(|nodes| nodes.into_iter().map(|v| if v > 0.0 { 1.0 } else { 0.0 }).collect())
                .collect())
        }
        Holder::AOnly => {
            // A continues exactly where B would have terminated
            let mirrored_swap = pricer.swap().with_side(pricer.swap().side.flipped());
            let mirrored = SwapPricer::new(pricer.tree(), &mirrored_swap)?;
            let g = mirrored.continuation_values(&model.mirrored(), breaks.dates())?;
            Ok(g
                .into_iter()
                .map(|nodes| nodes.into_iter().map(|v| if v > 0.0 { 1.0 } else { 0.0 }).collect())
                .collect())
        }
        Holder::Mutual => Ok(breaks
            .dates()
            .iter()
            .map(|&d| {
                let slice = pricer.tree().slice_index(d).expect("break on grid");
                vec![0.0; pricer.tree().nodes_at(slice)]
            })
            .collect()),
    }
}

/// Unilateral CVA of the swap: `sum_k L_A (e^{-lA T_{k-1}} - e^{-lA T_k})
/// E{D(0, T_{k-1}) [V0(T_{k-1})]^+}`, the positive part masked by the
/// break-clause exercise when a schedule is given.
pub fn ucva(
    pricer: &SwapPricer,
    model: &DefaultModel,
    breaks: Option<&BreakSchedule>,
) -> Result<f64, RiskError> {
    let lambda_a = model.lambda(Party::A);
    let lgd_a = model.lgd(Party::A);
    if lambda_a == 0.0 || lgd_a == 0.0 {
        return Ok(0.0);
    }
    let tree = pricer.tree();
    let masks = match breaks {
        Some(b) => Some((b, alive_masks(pricer, model, b)?)),
        None => None,
    };
    let exposure_dates = pricer.swap().exposure_dates();
    let pay_times = pricer.swap().pay_times().to_vec();

    let mut total = 0.0;
    for (k, &t_k) in exposure_dates.iter().enumerate() {
        let s_k = tree.slice_index(t_k)?;
        let mut claim = pricer.swap_value_nodes(s_k)?;
        for v in claim.iter_mut() {
            *v = v.max(0.0);
        }
        // roll to the root, masking at any break slice at or before t_k
        let mut cur = s_k;
        if let Some((b, masks)) = &masks {
            for (i, &bd) in b.dates().iter().enumerate().rev() {
                if bd > t_k + 1e-9 {
                    continue;
                }
                let sb = tree.slice_index(bd)?;
                claim = tree.rollback(cur, &claim, sb);
                for (c, m) in claim.iter_mut().zip(&masks[i]) {
                    *c *= m;
                }
                cur = sb;
            }
        }
        let ee = tree.rollback(cur, &claim, 0)[0];
        let pd = (-lambda_a * t_k).exp() - (-lambda_a * pay_times[k]).exp();
        total += lgd_a * pd * ee;
    }
    Ok(total)
}

/// Central finite difference of the UCVA in `lambda_A`, everything else
/// (including the exercise rule, re-derived under each bumped intensity)
/// held fixed.
pub fn ucva_sensitivity(
    pricer: &SwapPricer,
    model: &DefaultModel,
    breaks: Option<&BreakSchedule>,
    bump: f64,
) -> Result<SensitivityReport, RiskError> {
    let lambda_a = model.lambda(Party::A);
    if bump.is_nan() || bump <= 0.0 || lambda_a - bump < 0.0 {
        return Err(RiskError::InvalidBump { lambda_a, bump });
    }
    let base_ucva = ucva(pricer, model, breaks)?;
    let bumped_up = ucva(pricer, &model.with_lambda_a(lambda_a + bump)?, breaks)?;
    let bumped_down = ucva(pricer, &model.with_lambda_a(lambda_a - bump)?, breaks)?;
    Ok(SensitivityReport {
        base_ucva,
        bumped_up,
        bumped_down,
        sensitivity: (bumped_up - bumped_down) / (2.0 * bump),
        bump,
    })
}
