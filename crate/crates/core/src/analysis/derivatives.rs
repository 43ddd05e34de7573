use alloc::vec::Vec;

use crate::ambient::AmbientSpace;
use crate::error::Result;
use crate::jets::{fd_oracle, ImmersionChart, Jet3, JetOrder};
use crate::linalg::Vector;

/// Position and partial derivatives of a chart map at one point, as ambient
/// vectors. Third derivatives are present only for order-3 data.
#[derive(Debug, Clone)]
pub struct PointDerivatives {
    pub point: Vec<f64>,
    pub ambient: AmbientSpace,
    pub y: Vector,
    pub d1: Vec<Vector>,
    d2: Vec<Vector>,
    d3: Option<Vec<Vector>>,
}

impl PointDerivatives {
    /// Exact derivatives from jets.
    pub fn at(chart: &ImmersionChart, point: &[f64], order: JetOrder) -> Result<Self> {
        let jets = chart.jets(point, order)?;
        Ok(Self::from_jets(&jets, chart.vars(), chart.ambient(), point))
    }

    /// Central finite-difference derivatives at `step`.
    pub fn finite_difference(chart: &ImmersionChart, point: &[f64], step: f64) -> Result<Self> {
        let jets = fd_oracle(chart, point, step)?;
        Ok(Self::from_jets(&jets, chart.vars(), chart.ambient(), point))
    }

    pub fn from_jets(jets: &[Jet3], m: usize, ambient: AmbientSpace, point: &[f64]) -> Self {
        let n = jets.len();
        let column = |f: &dyn Fn(&Jet3) -> f64| Vector::from_iterator(n, jets.iter().map(f));
        let y = column(&|j| j.value());
        let d1 = (0..m).map(|i| column(&|j| j.grad(i))).collect();
        let mut d2 = Vec::with_capacity(m * m);
        for i in 0..m {
            for k in 0..m {
                d2.push(column(&|j| j.hess(i, k)));
            }
        }
        let third = jets.iter().all(|j| j.order() == JetOrder::Three);
        let d3 = third.then(|| {
            let mut d3 = Vec::with_capacity(m * m * m);
            for i in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        d3.push(column(&|j| j.third(i, k, l).unwrap_or(0.0)));
                    }
                }
            }
            d3
        });
        Self { point: point.to_vec(), ambient, y, d1, d2, d3 }
    }

    /// Number of chart variables.
    pub fn m(&self) -> usize {
        self.d1.len()
    }

    pub fn d2(&self, i: usize, j: usize) -> &Vector {
        &self.d2[i * self.m() + j]
    }

    pub fn d3(&self, i: usize, j: usize, k: usize) -> Option<&Vector> {
        let m = self.m();
        self.d3.as_ref().map(|d| &d[(i * m + j) * m + k])
    }

    pub fn has_third(&self) -> bool {
        self.d3.is_some()
    }
}
