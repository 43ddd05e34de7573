//! Serialisable records emitted by the CLI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use umbilic_core::analysis::{GeometryReport, ReductionReport, Tolerances};
use umbilic_core::Signature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Differs from a claim that is known to be disputed; never a failure.
    DiscrepancyNoted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub field: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancesRecord {
    pub zero: f64,
    pub pass: f64,
    pub fd: f64,
}

impl From<Tolerances> for TolerancesRecord {
    fn from(t: Tolerances) -> Self {
        Self { zero: t.zero, pass: t.pass, fd: t.fd }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagsRecord {
    pub umbilical: bool,
    pub geodesic: bool,
    pub minimal: bool,
    pub marginally_trapped: Option<bool>,
    pub parallel: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualsRecord {
    pub umbilicity: f64,
    pub geodesic: f64,
    pub parallel: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub u: Vec<f64>,
    pub g: Vec<Vec<f64>>,
    /// `[neg, pos, null]`.
    pub signature: [usize; 3],
    pub radical_rank: usize,
    #[serde(rename = "H_rel")]
    pub h_rel: Option<Vec<f64>>,
    #[serde(rename = "H_norm")]
    pub h_norm: Option<f64>,
    pub first_normal_dim: Option<usize>,
    pub flags: FlagsRecord,
    pub residuals: ResidualsRecord,
}

fn sig_array(s: Signature) -> [usize; 3] {
    [s.neg, s.pos, s.null]
}

impl From<&GeometryReport> for PointRecord {
    fn from(r: &GeometryReport) -> Self {
        let m = r.induced_metric.dim();
        Self {
            u: r.point.clone(),
            g: (0..m).map(|i| (0..m).map(|j| r.induced_metric.get(i, j)).collect()).collect(),
            signature: sig_array(r.metric_signature),
            radical_rank: r.radical_rank,
            h_rel: r.h_rel().map(|h| h.iter().copied().collect()),
            h_norm: r.h_norm(),
            first_normal_dim: r.first_normal.as_ref().map(|f| f.dim),
            flags: FlagsRecord {
                umbilical: r.flags.totally_umbilical,
                geodesic: r.flags.totally_geodesic,
                minimal: r.flags.minimal,
                marginally_trapped: r.flags.marginally_trapped,
                parallel: r.flags.parallel,
            },
            residuals: ResidualsRecord {
                umbilicity: r.residuals.umbilicity,
                geodesic: r.residuals.geodesic,
                parallel: r.residuals.parallel,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionRecord {
    pub hull_dim: usize,
    pub direction_signature: [usize; 3],
    pub translation_class: String,
    pub rho: Option<f64>,
}

impl From<&ReductionReport> for ReductionRecord {
    fn from(r: &ReductionReport) -> Self {
        Self {
            hull_dim: r.hull_dim,
            direction_signature: sig_array(r.direction_signature),
            translation_class: r.translation_class.label().to_string(),
            rho: r.rho,
        }
    }
}

/// Output of `analyze`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub ambient: String,
    pub points: Vec<PointRecord>,
    pub reduction: Option<ReductionRecord>,
    pub full: Option<bool>,
    pub notes: Vec<String>,
}

/// One catalog entry at one parameter set, checked against its claims.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub ambient: String,
    pub source: String,
    pub seed: u64,
    pub samples: usize,
    pub order: u8,
    pub tolerances: TolerancesRecord,
    /// `pass` iff every check is `pass` or `discrepancy-noted`.
    pub status: Status,
    pub checks: Vec<Check>,
    pub points: Vec<PointRecord>,
    pub reduction: Option<ReductionRecord>,
    pub full: Option<bool>,
    pub notes: Vec<String>,
}

impl VerificationRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn discrepancies(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::DiscrepancyNoted)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub samples: usize,
    pub order: u8,
    pub tolerances: TolerancesRecord,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub discrepancies_noted: usize,
    pub records: Vec<VerificationRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuliRecord {
    pub a: f64,
    pub class: String,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuliReport {
    pub m: usize,
    pub s: usize,
    pub rows: Vec<ModuliRecord>,
    pub pairwise_congruent: Vec<Vec<bool>>,
    pub demonstrated: bool,
}
