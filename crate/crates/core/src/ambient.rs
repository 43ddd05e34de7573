//! Pseudo-Riemannian space forms and their flat coordinate spaces.

use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::bilinear::Signature;
use crate::error::{Error, Result};
use crate::linalg::Vector;

/// `M^n_p(epsilon)`: pseudo-Euclidean space `E^n_p` (epsilon = 0), the
/// pseudo-sphere `S^n_p(1) = {<x,x> = 1} in E^{n+1}_p` (epsilon = 1), or
/// pseudo-hyperbolic space `H^n_p(-1) = {<x,x> = -1} in E^{n+1}_{p+1}`
/// (epsilon = -1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AmbientSpace {
    epsilon: i8,
    n: usize,
    p: usize,
}

impl AmbientSpace {
    pub fn new(epsilon: i8, n: usize, p: usize) -> Result<Self> {
        if !(-1..=1).contains(&epsilon) {
            return Err(Error::OutsideDomain(format!("curvature sign {epsilon} not in {{-1, 0, 1}}")));
        }
        if p > n {
            return Err(Error::DimensionMismatch { expected: n, found: p });
        }
        Ok(Self { epsilon, n, p })
    }

    pub fn flat(n: usize, p: usize) -> Self {
        assert!(p <= n);
        Self { epsilon: 0, n, p }
    }

    pub fn sphere(n: usize, p: usize) -> Self {
        assert!(p <= n);
        Self { epsilon: 1, n, p }
    }

    pub fn hyperbolic(n: usize, p: usize) -> Self {
        assert!(p <= n);
        Self { epsilon: -1, n, p }
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn eps(&self) -> f64 {
        f64::from(self.epsilon)
    }

    /// Intrinsic dimension `n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Index `p` of the space form.
    pub fn index(&self) -> usize {
        self.p
    }

    /// Signature of the flat coordinate space the charts map into.
    pub fn embedding(&self) -> Signature {
        match self.epsilon {
            0 => Signature::pseudo_euclidean(self.n, self.p),
            1 => Signature::pseudo_euclidean(self.n + 1, self.p),
            _ => Signature::pseudo_euclidean(self.n + 1, self.p + 1),
        }
    }

    /// Number of flat coordinates.
    pub fn coords(&self) -> usize {
        self.embedding().dim()
    }

    /// `|<x,x> - epsilon|` for quadrics, `0` for flat space.
    pub fn constraint_residual(&self, x: &Vector) -> f64 {
        if self.epsilon == 0 {
            0.0
        } else {
            (self.embedding().dot(x, x) - self.eps()).abs()
        }
    }

    pub fn name(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for AmbientSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.epsilon {
            0 => write!(f, "E^{}_{}", self.n, self.p),
            1 => write!(f, "S^{}_{}(1)", self.n, self.p),
            _ => write!(f, "H^{}_{}(-1)", self.n, self.p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_signatures() {
        assert_eq!(AmbientSpace::flat(3, 1).embedding(), Signature::new(1, 2, 0));
        assert_eq!(AmbientSpace::sphere(4, 1).embedding(), Signature::new(1, 4, 0));
        assert_eq!(AmbientSpace::hyperbolic(3, 1).embedding(), Signature::new(2, 2, 0));
    }

    #[test]
    fn quadric_residuals() {
        let y = Vector::from_column_slice(&[1.0, 0.0, 0.0, 0.0, 1.0]);
        // (1, 0, 0, 0, 1) is null in E^5_1, so it is not on S^4_1.
        assert_eq!(AmbientSpace::sphere(4, 1).constraint_residual(&y), 1.0);
        let z = Vector::from_column_slice(&[1.0, 0.0, 0.0]);
        assert_eq!(AmbientSpace::hyperbolic(2, 0).constraint_residual(&z), 0.0);
        assert!(AmbientSpace::new(2, 3, 0).is_err());
        assert_eq!(AmbientSpace::sphere(4, 1).name(), "S^4_1(1)");
    }
}
