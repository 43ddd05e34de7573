//! Numerical engine for totally umbilical submanifolds of pseudo-Riemannian
//! space forms.
//!
//! Immersions are written as explicit chart maps into a flat coordinate space
//! (the pseudo-Euclidean space itself, or the one containing a pseudo-sphere or
//! pseudo-hyperbolic space as a quadric). Exact order-3 jets of those maps feed
//! the curvature computations in [`analysis`]; [`catalog`] holds the families to
//! check, and [`congruence`] decides congruence and inverts the classification.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod analysis;
pub mod ambient;
pub mod bilinear;
pub mod catalog;
pub mod congruence;
pub mod error;
pub mod jets;
pub mod linalg;
pub mod sampling;

pub use ambient::AmbientSpace;
pub use bilinear::{Signature, SymmetricForm};
pub use error::{DomainFault, Error, Result};
pub use jets::{ImmersionChart, Jet3, JetOrder};
pub use linalg::{Matrix, Vector};
