//! Pricing of uncollateralised bilateral derivatives under counterparty
//! default risk, with unilateral / multiple / mutual break clauses settled
//! at the default-risk-free close-out amount.
//!
//! The library has two pricing routes:
//!
//! * [`equity`] — quasi-analytic valuation of an equity forward with a single
//!   unilateral break clause (exercise-boundary solving plus bivariate-normal
//!   barrier terms, defaults lumped at the break date and maturity);
//! * [`tree`] — a curve-calibrated one-factor Hull-White trinomial lattice for
//!   interest-rate swaps, with discretised BCVA/BDVA sums and a backward
//!   recursion over an arbitrary break schedule.
//!
//! Joint default times follow a bivariate exponential law built from a Gumbel
//! copula ([`credit`]); [`risk`] adds the unilateral CVA and its sensitivity
//! to the counterparty intensity; [`mc`] provides simulation cross-checks.

pub mod credit;
pub mod curve;
pub mod equity;
pub mod mc;
pub mod numerics;
pub mod report;
pub mod risk;
pub mod tree;

pub use credit::{DefaultModel, Party};
pub use curve::YieldCurve;
pub use equity::{EquityForwardSpec, SingleBreak};
pub use report::{Side, ValuationReport};
pub use tree::{BreakSchedule, Holder, HwParams, HwTree, SwapPricer, SwapSpec};
