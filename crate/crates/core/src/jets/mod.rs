//! Order-3 jets of chart maps.
//!
//! Charts are expression trees evaluated in truncated Taylor arithmetic, which
//! gives first, second and third partial derivatives with no truncation error.
//! [`fd_oracle`] computes the same data by central differences and is only
//! used to cross-check the jets.

mod chart;
mod expr;
mod fd;
mod jet;

pub use chart::{compose, evaluate, ImmersionChart};
pub use expr::{quadratic, vars, ChartScalar, Expr};
pub use fd::{fd_oracle, richardson_check, RichardsonCheck, FD_NOISE_FLOOR};
pub use jet::{Jet3, JetOrder, MAX_VARS};
