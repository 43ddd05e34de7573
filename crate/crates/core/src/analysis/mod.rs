//! Extrinsic geometry of immersions into space forms.
//!
//! [`analyze_point`] collects everything at one chart point into a
//! [`GeometryReport`]. Non-degenerate points get the mean curvature,
//! parallelism and first normal space; at points with a degenerate induced
//! metric only the quotient second fundamental form is available, and
//! umbilicity is decided on it.

mod curvature;
mod derivatives;
mod hull;

use alloc::vec::Vec;

use crate::bilinear::{signature_of, Signature, SymmetricForm, DEFAULT_TOL_ZERO};
use crate::error::{Error, Result};
use crate::jets::{ImmersionChart, JetOrder};
use crate::linalg::Vector;

pub use curvature::{
    first_normal_space, induced_metric, mean_curvature, parallelism_test, quotient_with_complement,
    second_fundamental_quotient, umbilicity_test, FirstNormalSpace, MeanCurvature, Parallelism, QuotientForm,
    Umbilicity,
};
pub use derivatives::PointDerivatives;
pub use hull::{fullness_test, reduction_report, ReductionReport, TranslationClass};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Eigenvalues and singular values at or below this count as zero.
    pub zero: f64,
    /// Pass threshold for residuals and equality tests.
    pub pass: f64,
    /// Allowed jet-versus-finite-difference gap.
    pub fd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { zero: DEFAULT_TOL_ZERO, pass: 1e-7, fd: 1e-5 }
    }
}

impl Tolerances {
    /// `zero = t`, `pass = 10 t`, `fd = 1000 t`.
    pub fn scaled(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::BadTolerance(t));
        }
        Ok(Self { zero: t, pass: 10.0 * t, fd: 1000.0 * t })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flags {
    pub totally_geodesic: bool,
    pub totally_umbilical: bool,
    pub minimal: bool,
    /// `None` where the metric is degenerate.
    pub marginally_trapped: Option<bool>,
    /// `None` where the metric is degenerate or only order-2 data is available.
    pub parallel: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    pub umbilicity: f64,
    pub geodesic: f64,
    pub parallel: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometryReport {
    pub point: Vec<f64>,
    pub position: Vector,
    pub induced_metric: SymmetricForm,
    pub metric_signature: Signature,
    pub radical_rank: usize,
    pub radical: Vec<Vector>,
    pub tangent_frame: Vec<Vector>,
    /// Canonical representative of the umbilicity class `[H]`.
    pub h_class: Option<Vector>,
    /// Present when the metric is non-degenerate.
    pub mean: Option<MeanCurvature>,
    pub first_normal: Option<FirstNormalSpace>,
    pub totally_degenerate: bool,
    pub flags: Flags,
    pub residuals: Residuals,
}

impl GeometryReport {
    pub fn h_norm(&self) -> Option<f64> {
        self.mean.as_ref().map(|h| h.h_norm)
    }

    pub fn h_rel(&self) -> Option<&Vector> {
        self.mean.as_ref().map(|h| &h.h_rel)
    }
}

pub fn analyze_point(chart: &ImmersionChart, point: &[f64], order: JetOrder, tol: &Tolerances) -> Result<GeometryReport> {
    analyze_derivatives(&PointDerivatives::at(chart, point, order)?, tol)
}

pub fn analyze_derivatives(d: &PointDerivatives, tol: &Tolerances) -> Result<GeometryReport> {
    let g = induced_metric(d)?;
    let metric_signature = signature_of(&g, tol.zero)?;
    let radical = crate::bilinear::radical_basis(&g, tol.zero)?;
    let q = second_fundamental_quotient(d)?;
    let umb = umbilicity_test(&q, tol.pass);
    let h_class = umb.h_class.as_ref().map(|h| q.representative(h));

    let (mean, first_normal, parallel) = if metric_signature.null == 0 {
        let parallel = if d.has_third() { Some(parallelism_test(d, tol.zero, tol.pass)?) } else { None };
        (
            Some(mean_curvature(d, tol.zero, tol.pass)?),
            Some(first_normal_space(d, tol.zero, tol.pass)?),
            parallel,
        )
    } else {
        (None, None, None)
    };
    let minimal = mean.as_ref().map_or(umb.geodesic, |h| h.minimal);
    let flags = Flags {
        totally_geodesic: umb.geodesic,
        totally_umbilical: umb.umbilical,
        minimal,
        marginally_trapped: mean.as_ref().map(|h| h.marginally_trapped),
        parallel: parallel.map(|p| p.parallel),
    };
    Ok(GeometryReport {
        point: d.point.clone(),
        position: d.y.clone(),
        induced_metric: g,
        metric_signature,
        radical_rank: metric_signature.null,
        radical,
        tangent_frame: d.d1.clone(),
        h_class,
        mean,
        first_normal,
        totally_degenerate: umb.totally_degenerate,
        flags,
        residuals: Residuals {
            umbilicity: umb.residual,
            geodesic: umb.geodesic_residual,
            parallel: parallel.map(|p| p.residual),
        },
    })
}

/// Reports at each of `points`.
pub fn analyze_chart(
    chart: &ImmersionChart,
    points: &[Vec<f64>],
    order: JetOrder,
    tol: &Tolerances,
) -> Result<Vec<GeometryReport>> {
    points.iter().map(|p| analyze_point(chart, p, order, tol)).collect()
}
