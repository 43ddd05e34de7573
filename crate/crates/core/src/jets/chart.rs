use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::ambient::AmbientSpace;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

use super::expr::{ChartScalar, Expr};
use super::jet::{Jet3, JetOrder, MAX_VARS};

#[derive(Debug, Clone)]
enum ChartMap {
    Exprs(Vec<Expr>),
    Composite { outer: Arc<ImmersionChart>, inner: Arc<ImmersionChart> },
}

/// A map from a box in `R^vars` into the flat coordinate space of an ambient
/// space form, one expression per coordinate.
#[derive(Debug, Clone)]
pub struct ImmersionChart {
    map: ChartMap,
    vars: usize,
    ambient: AmbientSpace,
    sample_box: Vec<[f64; 2]>,
}

impl ImmersionChart {
    pub fn new(coords: Vec<Expr>, vars: usize, ambient: AmbientSpace, sample_box: Vec<[f64; 2]>) -> Result<Self> {
        if coords.len() != ambient.coords() {
            return Err(Error::DimensionMismatch { expected: ambient.coords(), found: coords.len() });
        }
        if sample_box.len() != vars {
            return Err(Error::DimensionMismatch { expected: vars, found: sample_box.len() });
        }
        if let Some(top) = coords.iter().filter_map(Expr::max_var).max() {
            if top >= vars {
                return Err(Error::DimensionMismatch { expected: vars, found: top + 1 });
            }
        }
        Ok(Self { map: ChartMap::Exprs(coords), vars, ambient, sample_box })
    }

    /// `x -> L x`, a linear chart on the whole flat coordinate space of `ambient`.
    pub fn linear(l: &Matrix, ambient: AmbientSpace) -> Result<Self> {
        let n = ambient.coords();
        if l.shape() != (n, n) {
            return Err(Error::DimensionMismatch { expected: n, found: l.nrows() });
        }
        let coords = (0..n)
            .map(|i| {
                Expr::sum((0..n).filter(|&j| l[(i, j)] != 0.0).map(|j| l[(i, j)] * Expr::var(j)))
            })
            .collect();
        Self::new(coords, n, ambient, alloc::vec![[-1.0, 1.0]; n])
    }

    pub fn identity(ambient: AmbientSpace) -> Self {
        let n = ambient.coords();
        Self::new((0..n).map(Expr::var).collect(), n, ambient, alloc::vec![[-1.0, 1.0]; n])
            .expect("identity chart is well formed")
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn ambient(&self) -> AmbientSpace {
        self.ambient
    }

    pub fn coords(&self) -> usize {
        self.ambient.coords()
    }

    /// Per-variable `[lo, hi]` box that samples are drawn from.
    pub fn sample_box(&self) -> &[[f64; 2]] {
        &self.sample_box
    }

    pub fn with_sample_box(mut self, sample_box: Vec<[f64; 2]>) -> Result<Self> {
        if sample_box.len() != self.vars {
            return Err(Error::DimensionMismatch { expected: self.vars, found: sample_box.len() });
        }
        self.sample_box = sample_box;
        Ok(self)
    }

    /// Smallest half-width of the sample box.
    pub fn min_half_width(&self) -> f64 {
        self.sample_box.iter().map(|[lo, hi]| 0.5 * (hi - lo)).fold(f64::INFINITY, f64::min)
    }

    pub fn box_center(&self) -> Vector {
        Vector::from_iterator(self.vars, self.sample_box.iter().map(|[lo, hi]| 0.5 * (lo + hi)))
    }

    /// Evaluate over any scalar type, with `inputs` standing for the chart variables.
    pub fn eval_scalar<S: ChartScalar>(&self, inputs: &[S]) -> Result<Vec<S>> {
        match &self.map {
            ChartMap::Exprs(coords) => coords
                .iter()
                .enumerate()
                .map(|(coordinate, e)| e.eval(inputs).map_err(|fault| Error::Domain { coordinate, fault }))
                .collect(),
            ChartMap::Composite { outer, inner } => outer.eval_scalar(&inner.eval_scalar(inputs)?),
        }
    }

    fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.vars {
            return Err(Error::DimensionMismatch { expected: self.vars, found: point.len() });
        }
        Ok(())
    }

    pub fn values(&self, point: &[f64]) -> Result<Vector> {
        self.check_point(point)?;
        Ok(Vector::from_vec(self.eval_scalar(point)?))
    }

    /// One jet per ambient coordinate, exact to rounding.
    pub fn jets(&self, point: &[f64], order: JetOrder) -> Result<Vec<Jet3>> {
        self.check_point(point)?;
        if self.vars > MAX_VARS {
            return Err(Error::TooManyVariables(self.vars));
        }
        let seeds: Vec<Jet3> =
            point.iter().enumerate().map(|(i, &x)| Jet3::variable(x, i, self.vars, order)).collect();
        self.eval_scalar(&seeds)
    }

    /// Rewrite a composite chart as a single literal expression per coordinate.
    pub fn flatten(&self) -> Result<ImmersionChart> {
        let coords = self.flat_exprs()?;
        Self::new(coords, self.vars, self.ambient, self.sample_box.clone())
    }

    fn flat_exprs(&self) -> Result<Vec<Expr>> {
        match &self.map {
            ChartMap::Exprs(coords) => Ok(coords.clone()),
            ChartMap::Composite { outer, inner } => {
                let args = inner.flat_exprs()?;
                outer
                    .flat_exprs()?
                    .iter()
                    .enumerate()
                    .map(|(coordinate, e)| e.substitute(&args).map_err(|fault| Error::Domain { coordinate, fault }))
                    .collect()
            }
        }
    }
}

/// Exact derivatives of every coordinate of `chart` at `point`.
pub fn evaluate(chart: &ImmersionChart, point: &[f64], order: JetOrder) -> Result<Vec<Jet3>> {
    chart.jets(point, order)
}

/// `outer o inner`. The inner chart's flat coordinates become the outer
/// chart's variables; the result keeps the inner variables and sample box and
/// lands in the outer ambient space. Jets go through the chain rule.
pub fn compose(outer: &ImmersionChart, inner: &ImmersionChart) -> Result<ImmersionChart> {
    if inner.coords() != outer.vars {
        return Err(Error::DimensionMismatch { expected: outer.vars, found: inner.coords() });
    }
    Ok(ImmersionChart {
        map: ChartMap::Composite { outer: Arc::new(outer.clone()), inner: Arc::new(inner.clone()) },
        vars: inner.vars,
        ambient: outer.ambient,
        sample_box: inner.sample_box.clone(),
    })
}
