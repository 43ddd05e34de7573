use std::fmt;

use umbilic_core::analysis::Tolerances;
use umbilic_core::sampling::{DEFAULT_SAMPLES, DEFAULT_SEED};
use umbilic_core::JetOrder;

/// Settings shared by every command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub tol: Tolerances,
    pub samples: usize,
    pub seed: u64,
    pub order: JetOrder,
    /// Random parameter draws per parametric family in `verify-all`.
    pub draws: usize,
    /// Step for the jet-versus-finite-difference agreement check.
    pub fd_step: f64,
    /// Coarser step for the convergence-order (Richardson) check, where
    /// truncation error dominates rounding.
    pub ratio_step: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            order: JetOrder::Three,
            draws: 3,
            fd_step: 1e-4,
            ratio_step: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl RunConfig {
    pub fn validate(&self) -> Result<(), UsageError> {
        if self.samples < 4 {
            return Err(UsageError(format!("--samples must be at least 4, got {}", self.samples)));
        }
        let t = &self.tol;
        if ![t.zero, t.pass, t.fd, self.fd_step, self.ratio_step].iter().all(|x| *x > 0.0 && x.is_finite()) {
            return Err(UsageError("tolerances and steps must be positive".into()));
        }
        Ok(())
    }
}
