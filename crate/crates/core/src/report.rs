//! Valuation output shared by the analytic and lattice routes.

/// Which side of the trade the valuing party B holds. For an equity forward
/// the payer receives `S_T - K`; for a swap the payer pays the fixed leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Payer,
    Receiver,
}

impl Side {
    pub fn flipped(self) -> Self {
        match self {
            Side::Payer => Side::Receiver,
            Side::Receiver => Side::Payer,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Payer => "payer",
            Side::Receiver => "receiver",
        }
    }

    /// +1 for payer, -1 for receiver.
    pub fn sign(self) -> f64 {
        match self {
            Side::Payer => 1.0,
            Side::Receiver => -1.0,
        }
    }
}

/// Valuation diagnostics, populated where the route provides them.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Diagnostics {
    /// Exercise boundary in the underlying (equity route).
    pub boundary: Option<f64>,
    /// Risk-neutral probability of exercise at the first break date.
    pub exercise_probability: Option<f64>,
    /// Number of lattice time slices (tree route).
    pub tree_slices: Option<usize>,
}

/// Decomposed valuation: `adjusted_value = v0 - bcva + bdva + bc_option`,
/// with `bcva`/`bdva` covering the window up to the first break date when a
/// break schedule is present (the full horizon otherwise) and `bc_option`
/// the survival-weighted value of the right to terminate.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationReport {
    pub v0: f64,
    pub bcva: f64,
    pub bdva: f64,
    pub bc_option: f64,
    pub adjusted_value: f64,
    /// Par strike / par rate when the caller solved for it.
    pub par_level: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl ValuationReport {
    /// Assembles the report so the decomposition identity holds by
    /// construction.
    pub fn assemble(v0: f64, bcva: f64, bdva: f64, bc_option: f64, diagnostics: Diagnostics) -> Self {
        Self {
            v0,
            bcva,
            bdva,
            bc_option,
            adjusted_value: v0 - bcva + bdva + bc_option,
            par_level: None,
            diagnostics,
        }
    }

    pub fn with_par_level(mut self, par: f64) -> Self {
        self.par_level = Some(par);
        self
    }

    /// Residual of the decomposition identity; zero up to rounding.
    pub fn decomposition_residual(&self) -> f64 {
        self.adjusted_value - (self.v0 - self.bcva + self.bdva + self.bc_option)
    }
}
