//! Checks every catalog entry against its claimed properties.

use std::cmp::Ordering;
use std::fmt::Display;

use rayon::prelude::*;
use umbilic_core::analysis::{
    analyze_chart, fullness_test, reduction_report, GeometryReport, Tolerances, PointDerivatives, ReductionReport,
};
use umbilic_core::catalog::{self, Expected, FamilySpec, HNormRange, Params};
use umbilic_core::congruence::{classify_family, ClassifierInput};
use umbilic_core::jets::{richardson_check, JetOrder};
use umbilic_core::{sampling, Error, ImmersionChart, Vector};

use crate::config::RunConfig;
use crate::record::{AnalyzeReport, Check, PointRecord, ReductionRecord, Status, VerificationRecord, VerifySummary};

/// Negative controls must miss their threshold by at least this much.
pub const CONTROL_GAP: f64 = 1e-2;
/// `|<f,f> - eps|` allowed at sample points.
pub const CONSTRAINT_TOL: f64 = 1e-12;
/// Allowed error in a recovered classification parameter.
pub const R_TOL: f64 = 1e-6;
/// Points per entry that get the (more expensive) convergence-order check.
const RATIO_POINTS: usize = 4;

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Seed for one entry, so results do not depend on scheduling.
pub fn entry_seed(seed: u64, family: &str, params: &Params) -> u64 {
    let key: String = params.iter().map(|(k, v)| format!("{k}={v:e};")).collect();
    seed ^ fnv1a(family) ^ fnv1a(&key).rotate_left(17)
}

/// Default parameters followed by `draws` random draws (none for families
/// without parameters).
pub fn parameter_sets(family: &FamilySpec, seed: u64, draws: usize) -> Vec<Params> {
    let mut sets = vec![family.defaults()];
    if family.has_params() {
        let mut rng = sampling::rng(seed ^ fnv1a(family.id).rotate_left(31));
        sets.extend((0..draws).map(|_| family.draw(&mut rng)));
    }
    sets
}

/// Sample points for an entry: at least `config.samples`, and enough for the
/// affine-hull computations (twice the number of ambient coordinates).
pub fn entry_points(chart: &ImmersionChart, family: &str, params: &Params, config: &RunConfig) -> Vec<Vec<f64>> {
    let count = config.samples.max(2 * chart.coords());
    sampling::sample_points(chart, count, &mut sampling::rng(entry_seed(config.seed, family, params)))
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, field: &str, expected: impl Display, computed: impl Display, ok: bool) {
        self.0.push(Check {
            field: field.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
        });
    }

    fn noted(&mut self, field: &str, expected: impl Display, computed: impl Display) {
        self.0.push(Check {
            field: field.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            status: Status::DiscrepancyNoted,
        });
    }

    /// A boolean that should hold with the same value at every point.
    fn flag(&mut self, field: &str, expected: Option<bool>, values: impl Iterator<Item = Option<bool>>) {
        let Some(expected) = expected else { return };
        let values: Vec<Option<bool>> = values.collect();
        let computed = if values.iter().all(|v| *v == Some(true)) {
            "true".to_string()
        } else if values.iter().all(|v| *v == Some(false)) {
            "false".to_string()
        } else {
            format!("{values:?}")
        };
        self.push(field, expected, &computed, computed == expected.to_string());
    }
}

fn fmt_range(r: HNormRange) -> String {
    match r {
        HNormRange::Equal(v) => format!("= {v}"),
        HNormRange::Open(lo, hi) => format!("in ({lo}, {hi})"),
    }
}

fn max_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0_f64, f64::max)
}

fn min_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(f64::INFINITY, f64::min)
}

/// Largest jet-versus-finite-difference gap over first and second derivatives.
pub fn fd_gap(chart: &ImmersionChart, point: &[f64], step: f64) -> Result<f64, Error> {
    let exact = PointDerivatives::at(chart, point, JetOrder::Two)?;
    let approx = PointDerivatives::finite_difference(chart, point, step)?;
    let m = chart.vars();
    let mut gap = 0.0_f64;
    for i in 0..m {
        gap = gap.max((&exact.d1[i] - &approx.d1[i]).amax());
        for j in 0..m {
            gap = gap.max((exact.d2(i, j) - approx.d2(i, j)).amax());
        }
    }
    Ok(gap)
}

struct Analysis {
    reports: Vec<GeometryReport>,
    images: Vec<Vector>,
    reduction: Result<ReductionReport, Error>,
    full: Result<bool, Error>,
}

fn run_analysis(chart: &ImmersionChart, points: &[Vec<f64>], config: &RunConfig) -> Result<Analysis, Error> {
    let n = config.samples.min(points.len());
    let reports = analyze_chart(chart, &points[..n], config.order, &config.tol)?;
    let images = sampling::images(chart, points)?;
    let ambient = chart.ambient();
    let reduction = reduction_report(&images, ambient, config.tol.zero, config.tol.pass);
    let full = fullness_test(&images, ambient, config.tol.zero);
    Ok(Analysis { reports, images, reduction, full })
}

pub fn verify_entry(family: &FamilySpec, params: &Params, config: &RunConfig) -> VerificationRecord {
    let mut record = VerificationRecord {
        family: family.id.to_string(),
        params: params.clone(),
        ambient: String::new(),
        source: String::new(),
        seed: entry_seed(config.seed, family.id, params),
        samples: config.samples,
        order: config.order.as_int(),
        tolerances: config.tol.into(),
        status: Status::Fail,
        checks: Vec::new(),
        points: Vec::new(),
        reduction: None,
        full: None,
        notes: Vec::new(),
    };
    let mut checks = Checks(Vec::new());
    let built = family.instantiate(params).and_then(|chart| Ok((family.expected(params)?, chart)));
    let (expected, chart) = match built {
        Ok(pair) => pair,
        Err(e) => {
            checks.push("instantiate", "chart", e, false);
            record.checks = checks.0;
            return record;
        }
    };
    record.ambient = chart.ambient().name();
    record.source = expected.source.to_string();
    let points = entry_points(&chart, family.id, params, config);
    match run_analysis(&chart, &points, config) {
        Ok(analysis) => {
            conformance(&mut checks, &mut record.notes, family, params, &expected, &chart, &analysis, &config.tol);
            oracle_checks(&mut checks, &chart, &points[..config.samples.min(points.len())], config);
            record.points = analysis.reports.iter().map(PointRecord::from).collect();
            record.reduction = analysis.reduction.as_ref().ok().map(ReductionRecord::from);
            record.full = analysis.full.as_ref().ok().copied();
        }
        Err(e) => checks.push("analysis", "report at every sample point", e, false),
    }
    record.checks = checks.0;
    record.status = if record.checks.iter().any(|c| c.status == Status::Fail) { Status::Fail } else { Status::Pass };
    record
}

#[allow(clippy::too_many_arguments)]
fn conformance(
    checks: &mut Checks,
    notes: &mut Vec<String>,
    family: &FamilySpec,
    params: &Params,
    expected: &Expected,
    chart: &ImmersionChart,
    analysis: &Analysis,
    tolerances: &Tolerances,
) {
    let ambient = chart.ambient();
    let reports = &analysis.reports;
    let constraint = max_of(analysis.images.iter().map(|y| ambient.constraint_residual(y)));
    checks.push("ambient_constraint", format!("<= {CONSTRAINT_TOL:e}"), format!("{constraint:e}"), constraint <= CONSTRAINT_TOL);

    let ranks: Vec<usize> = reports.iter().map(|r| r.radical_rank).collect();
    let rank = ranks[0];
    if ranks.iter().any(|&r| r != rank) {
        checks.push("radical_rank", expected.radical_rank, format!("{ranks:?}"), false);
    } else {
        match expected.radical_rank_verdict(rank) {
            Some(true) => checks.push("radical_rank", expected.radical_rank, rank, true),
            Some(false) => {
                checks.noted("radical_rank", expected.radical_rank, rank);
                if let Some(note) = expected.discrepancy_note {
                    notes.push(format!("radical_rank: {note}"));
                }
            }
            None => checks.push("radical_rank", expected.radical_rank, rank, false),
        }
    }
    if expected.trailing_radical > 0 {
        let m = chart.vars();
        let k = expected.trailing_radical;
        let worst = max_of(reports.iter().flat_map(|r| {
            (m - k..m).flat_map(move |i| (0..m).map(move |j| r.induced_metric.get(i, j).abs()))
        }));
        checks.push(
            "radical_contains_trailing_vars",
            format!("g(d_i, .) = 0 for the last {k} variables"),
            format!("{worst:e}"),
            worst <= tolerances.zero,
        );
    }

    checks.flag("totally_umbilical", Some(expected.totally_umbilical), reports.iter().map(|r| Some(r.flags.totally_umbilical)));
    checks.flag("totally_geodesic", Some(expected.totally_geodesic), reports.iter().map(|r| Some(r.flags.totally_geodesic)));
    checks.flag("minimal", expected.minimal, reports.iter().map(|r| Some(r.flags.minimal)));
    checks.flag("marginally_trapped", expected.marginally_trapped, reports.iter().map(|r| r.flags.marginally_trapped));
    checks.flag("parallel", expected.parallel, reports.iter().map(|r| r.flags.parallel));
    if !expected.totally_umbilical {
        let least = min_of(reports.iter().map(|r| r.residuals.umbilicity));
        checks.push("umbilicity_residual", format!("> {CONTROL_GAP:e}"), format!("{least:e}"), least > CONTROL_GAP);
    }
    if expected.parallel == Some(false) {
        let least = min_of(reports.iter().map(|r| r.residuals.parallel.unwrap_or(f64::NAN)));
        checks.push("parallel_residual", format!(">= {CONTROL_GAP:e}"), format!("{least:e}"), least >= CONTROL_GAP);
    }

    let tol = tolerances.pass;
    if let Some(claim) = expected.h_norm {
        let values: Vec<f64> = reports.iter().map(|r| r.h_norm().unwrap_or(f64::NAN)).collect();
        let in_range = values.iter().all(|&h| claim.range.contains(h, tol));
        checks.push(
            "H_norm_range",
            fmt_range(claim.range),
            format!("[{:.9}, {:.9}]", min_of(values.iter().copied()), -min_of(values.iter().map(|h| -h))),
            in_range,
        );
        if let Some(v) = claim.value {
            let worst = max_of(values.iter().map(|h| (h - v).abs()));
            checks.push("H_norm", v, format!("max deviation {worst:e}"), worst <= tol);
        }
    }
    if let Some(dim) = expected.first_normal_dim {
        let dims: Vec<Option<usize>> = reports.iter().map(|r| r.first_normal.as_ref().map(|f| f.dim)).collect();
        let ok = dims.iter().all(|d| *d == Some(dim));
        checks.push("first_normal_dim", dim, if ok { dim.to_string() } else { format!("{dims:?}") }, ok);
    }
    if let Some(full) = expected.full {
        match &analysis.full {
            Ok(f) => checks.push("full", full, f, *f == full),
            Err(e) => checks.push("full", full, e, false),
        }
    }
    if let Some(claim) = expected.reduction {
        match &analysis.reduction {
            Ok(red) => {
                checks.push("hull_dim", claim.hull_dim, red.hull_dim, red.hull_dim == claim.hull_dim);
                checks.push(
                    "translation_class",
                    claim.translation,
                    red.translation_class,
                    red.translation_class == claim.translation,
                );
            }
            Err(e) => checks.push("reduction", "report", e, false),
        }
    }
    if family.is_classifiable() {
        let input = ClassifierInput::from_reports(ambient.epsilon(), reports, analysis.reduction.as_ref().ok());
        let result = input.and_then(|i| classify_family(&i, tol));
        match result {
            Ok(c) => {
                let id_ok = c.family == Some(family.id);
                checks.push("classified_as", family.id, c.family.unwrap_or("ambiguous"), id_ok);
                if let (Some(r_true), true) = (params.get("r"), id_ok) {
                    let r = c.r.unwrap_or(f64::NAN);
                    checks.push("recovered_r", r_true, r, (r - r_true).abs() <= R_TOL);
                }
                notes.extend(c.notes);
            }
            Err(e) => checks.push("classified_as", family.id, e, false),
        }
    }
}

fn oracle_checks(checks: &mut Checks, chart: &ImmersionChart, points: &[Vec<f64>], config: &RunConfig) {
    let mut worst = 0.0_f64;
    for p in points {
        match fd_gap(chart, p, config.fd_step) {
            Ok(g) => worst = worst.max(g),
            Err(e) => return checks.push("fd_agreement", "finite differences", e, false),
        }
    }
    checks.push(
        "fd_agreement",
        format!("<= {:e} at step {:e}", config.tol.fd, config.fd_step),
        format!("{worst:e}"),
        worst <= config.tol.fd,
    );
    let mut bad = Vec::new();
    for p in points.iter().take(RATIO_POINTS) {
        match richardson_check(chart, p, config.ratio_step) {
            Ok(r) if r.ratios_ok() => {}
            Ok(r) => bad.push(format!("{:?}", r.ratios)),
            Err(e) => bad.push(e.to_string()),
        }
    }
    checks.push(
        "fd_convergence_order",
        format!("ratios in [3.5, 4.5] at step {:e}", config.ratio_step),
        if bad.is_empty() { "ok".to_string() } else { bad.join("; ") },
        bad.is_empty(),
    );
}

fn cmp_params(a: &Params, b: &Params) -> Ordering {
    let mut ia = a.iter();
    let mut ib = b.iter();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ka, va)), Some((kb, vb))) => {
                let o = ka.cmp(kb).then(va.total_cmp(vb));
                if o != Ordering::Equal {
                    return o;
                }
            }
        }
    }
}

/// Every catalog entry at its defaults plus random draws, sorted by family id
/// then parameters.
pub fn verify_all(config: &RunConfig) -> VerifySummary {
    let jobs: Vec<(&FamilySpec, Params)> = catalog::families()
        .iter()
        .flat_map(|f| parameter_sets(f, config.seed, config.draws).into_iter().map(move |p| (f, p)))
        .collect();
    let mut records: Vec<VerificationRecord> = jobs
        .par_iter()
        .map(|(f, p)| verify_entry(f, p, config))
        .collect();
    records.sort_by(|a, b| a.family.cmp(&b.family).then_with(|| cmp_params(&a.params, &b.params)));
    let passed = records.iter().filter(|r| r.passed()).count();
    VerifySummary {
        seed: config.seed,
        samples: config.samples,
        order: config.order.as_int(),
        tolerances: config.tol.into(),
        total: records.len(),
        passed,
        failed: records.len() - passed,
        discrepancies_noted: records.iter().filter(|r| r.discrepancies().next().is_some()).count(),
        records,
    }
}

/// Reports at `point` (or at the seeded sample points) plus the hull data of
/// the sampled image.
pub fn analyze(family: &FamilySpec, params: &Params, point: Option<&[f64]>, config: &RunConfig) -> Result<AnalyzeReport, Error> {
    let chart = family.instantiate(params)?;
    let resolved = family.resolve(params)?;
    let points = entry_points(&chart, family.id, &resolved, config);
    let analysis = run_analysis(&chart, &points, config)?;
    let reports = match point {
        Some(u) => analyze_chart(&chart, &[u.to_vec()], config.order, &config.tol)?,
        None => analysis.reports,
    };
    let mut notes = Vec::new();
    let expected = family.expected(params)?;
    if let Some(rank) = reports.first().map(|r| r.radical_rank) {
        if expected.radical_rank_verdict(rank) == Some(false) {
            notes.push(format!(
                "radical_rank {rank} differs from the stated {}: {}",
                expected.radical_rank,
                expected.discrepancy_note.unwrap_or("")
            ));
        }
    }
    if let Err(e) = &analysis.reduction {
        notes.push(format!("reduction: {e}"));
    }
    Ok(AnalyzeReport {
        family: family.id.to_string(),
        params: resolved,
        ambient: chart.ambient().name(),
        points: reports.iter().map(PointRecord::from).collect(),
        reduction: analysis.reduction.as_ref().ok().map(ReductionRecord::from),
        full: analysis.full.ok(),
        notes,
    })
}
