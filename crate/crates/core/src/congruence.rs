//! Congruence of sampled immersions, the inverse of the classification tables,
//! and the moduli-space demonstration for the family `x -> (a, x, a)`.
//!
//! Isometries of `S^n_p(1)` and `H^n_p(-1)` are the linear isometries of the
//! flat coordinate space, so two paired sample sets are congruent exactly when
//! their Gram matrices agree and the same linear relations hold among both
//! sets of points. The second condition is what makes the linear map between
//! the spans well defined; equal Gram matrices alone do not imply it when the
//! spans are degenerate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::analysis::{GeometryReport, ReductionReport, Tolerances};
use crate::bilinear::{Signature, SymmetricForm};
use crate::catalog::{self, Params};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CongruenceVerdict {
    pub congruent: bool,
    /// A rank decision sat within the ambiguity band; `congruent` is then false.
    pub indeterminate: bool,
    /// `max |<a_i, a_j> - <b_i, b_j>|`.
    pub gram_residual: f64,
    /// What a Gram-only test would conclude.
    pub gram_match: bool,
    pub kernel_match: bool,
    pub rank_a: usize,
    pub rank_b: usize,
    pub rank_stacked: usize,
}

pub fn congruence_test(a: &[Vector], b: &[Vector], sig: Signature, tol: &Tolerances) -> Result<CongruenceVerdict> {
    if a.len() != b.len() {
        return Err(Error::CountMismatch(a.len(), b.len()));
    }
    let n = sig.dim();
    if let Some(bad) = a.iter().chain(b).find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
    }
    let ga = SymmetricForm::gram(a, sig)?;
    let gb = SymmetricForm::gram(b, sig)?;
    let gram_residual = (ga.matrix() - gb.matrix()).iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let gram_match = gram_residual <= tol.pass;

    let ma = linalg::columns(a, n);
    let mb = linalg::columns(b, n);
    let mut stacked = Matrix::zeros(2 * n, a.len());
    stacked.view_mut((0, 0), (n, a.len())).copy_from(&ma);
    stacked.view_mut((n, 0), (n, a.len())).copy_from(&mb);
    let (ra, rb, rs) = (linalg::rank(&ma, tol.zero), linalg::rank(&mb, tol.zero), linalg::rank(&stacked, tol.zero));
    let kernel_match = ra.rank == rb.rank && rb.rank == rs.rank;
    let indeterminate = ra.ambiguous || rb.ambiguous || rs.ambiguous;
    Ok(CongruenceVerdict {
        congruent: gram_match && kernel_match && !indeterminate,
        indeterminate,
        gram_residual,
        gram_match,
        kernel_match,
        rank_a: ra.rank,
        rank_b: rb.rank,
        rank_stacked: rs.rank,
    })
}

/// What the classifier needs from an analysed immersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierInput {
    pub epsilon: i8,
    /// `H = 0` at every point.
    pub minimal: bool,
    pub h_norm: f64,
    /// Signature of the normal space of the affine hull, for splitting the
    /// totally geodesic cases.
    pub normal_signature: Option<Signature>,
}

impl ClassifierInput {
    /// Average `<H, H>` over the reports. Fails unless every report is
    /// non-degenerate and totally umbilical.
    pub fn from_reports(epsilon: i8, reports: &[GeometryReport], reduction: Option<&ReductionReport>) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::InsufficientSamples { needed: 1, got: 0 });
        }
        let mut sum = 0.0;
        let mut minimal = true;
        for r in reports {
            if !r.flags.totally_umbilical {
                return Err(Error::NotUmbilical(format!("umbilicity residual {:e}", r.residuals.umbilicity)));
            }
            let mean = r.mean.as_ref().ok_or(Error::DegenerateMetric(r.radical_rank))?;
            sum += mean.h_norm;
            minimal &= mean.minimal;
        }
        Ok(Self {
            epsilon,
            minimal,
            h_norm: sum / reports.len() as f64,
            normal_signature: reduction.and_then(|red| red.normal_signature),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    /// The recovered family, `None` when ambiguous.
    pub family: Option<&'static str>,
    /// Every family the input is compatible with.
    pub candidates: Vec<&'static str>,
    pub r: Option<f64>,
    pub h_norm: f64,
    pub notes: Vec<String>,
}

impl ClassificationResult {
    pub fn is_ambiguous(&self) -> bool {
        self.family.is_none()
    }
}

/// Distances to a boundary value in `(tol, AMBIGUITY_BAND * tol]` are too close to call.
pub const AMBIGUITY_BAND: f64 = 10.0;

enum Region {
    Equal(f64, &'static str),
    Open(f64, f64, &'static str, fn(f64) -> f64),
}

const INF: f64 = f64::INFINITY;

fn table(epsilon: i8) -> (&'static [Region], [&'static str; 2]) {
    use Region::{Equal, Open};
    const SPHERE: &[Region] = &[
        Open(-INF, -1.0, "main1-6", |h| 1.0 / libm::sqrt(-1.0 - h)),
        Equal(-1.0, "main1-7"),
        Open(-1.0, 0.0, "main1-4", |h| 1.0 / libm::sqrt(1.0 + h)),
        Equal(0.0, "main1-5"),
        Open(0.0, INF, "main1-3", |h| 1.0 / libm::sqrt(1.0 + h)),
    ];
    const HYPERBOLIC: &[Region] = &[
        Open(-INF, 0.0, "main2-3", |h| 1.0 / libm::sqrt(1.0 - h)),
        Equal(0.0, "main2-5"),
        Open(0.0, 1.0, "main2-4", |h| 1.0 / libm::sqrt(1.0 - h)),
        Equal(1.0, "main2-7"),
        Open(1.0, INF, "main2-6", |h| 1.0 / libm::sqrt(h - 1.0)),
    ];
    const FLAT: &[Region] = &[
        Open(-INF, 0.0, "akk-3", |h| 1.0 / libm::sqrt(-h)),
        Equal(0.0, "akk-4"),
        Open(0.0, INF, "akk-2", |h| 1.0 / libm::sqrt(h)),
    ];
    match epsilon {
        1 => (SPHERE, ["main1-1", "main1-2"]),
        -1 => (HYPERBOLIC, ["main2-1", "main2-2"]),
        _ => (FLAT, ["akk-1", "akk-1"]),
    }
}

pub fn classify_family(input: &ClassifierInput, tol: f64) -> Result<ClassificationResult> {
    let h = input.h_norm;
    let mut out = ClassificationResult { family: None, candidates: Vec::new(), r: None, h_norm: h, notes: Vec::new() };
    let (regions, geodesic) = table(input.epsilon);

    if input.minimal {
        if input.epsilon == 0 {
            out.candidates.push(geodesic[0]);
        } else {
            match input.normal_signature {
                Some(sig) if sig.neg == 0 && sig.pos > 0 => out.candidates.push(geodesic[0]),
                Some(sig) if sig.pos == 0 && sig.neg > 0 => out.candidates.push(geodesic[1]),
                other => {
                    out.candidates.extend(geodesic);
                    out.notes.push(format!("normal space of the hull has signature {other:?}"));
                }
            }
        }
        if out.candidates.len() == 1 {
            out.family = Some(out.candidates[0]);
        }
        return Ok(out);
    }

    for region in regions {
        match *region {
            Region::Equal(c, id) => {
                let gap = (h - c).abs();
                if gap <= AMBIGUITY_BAND * tol {
                    out.candidates.push(id);
                    if gap > tol {
                        out.notes.push(format!("<H,H> = {h} is within {AMBIGUITY_BAND} tol of {c}"));
                    }
                }
            }
            Region::Open(lo, hi, id, r_of) => {
                if h > lo + tol && h < hi - tol {
                    out.candidates.push(id);
                    let r = r_of(h);
                    let spec = catalog::find(id)?.params.iter().find(|p| p.name == "r");
                    if spec.is_some_and(|p| !p.admits(r)) {
                        out.notes.push(format!("r = {r} from {id} lies outside the family's range"));
                    } else {
                        out.r = Some(r);
                    }
                }
            }
        }
    }
    if out.candidates.len() == 1 && out.notes.is_empty() {
        out.family = Some(out.candidates[0]);
    } else {
        out.r = None;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuliClass {
    /// Congruent to `psi_0`, the totally geodesic member.
    G,
    /// Congruent to `psi_1`.
    U,
    Neither,
}

impl ModuliClass {
    pub fn label(self) -> &'static str {
        match self {
            Self::G => "g",
            Self::U => "u",
            Self::Neither => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuliRow {
    pub a: f64,
    pub class: ModuliClass,
    /// `sup |psi_a(x) - psi_0(x)|` over the samples (Euclidean).
    pub distance: f64,
    pub to_g: CongruenceVerdict,
    pub to_u: CongruenceVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuliDemo {
    pub m: usize,
    pub s: usize,
    pub rows: Vec<ModuliRow>,
    /// `pairwise[i][j]`: rows `i` and `j` are congruent.
    pub pairwise: Vec<Vec<bool>>,
}

impl ModuliDemo {
    /// `a = 0` is class g, every other `a` is class u, the u rows are pairwise
    /// congruent and none is congruent to g, and the distance to `psi_0`
    /// shrinks with `|a|`. Needs both classes present.
    pub fn demonstrated(&self) -> bool {
        let has_g = self.rows.iter().any(|r| r.a == 0.0);
        let has_u = self.rows.iter().any(|r| r.a != 0.0);
        let classes_ok = self
            .rows
            .iter()
            .all(|r| r.class == if r.a == 0.0 { ModuliClass::G } else { ModuliClass::U } && !r.to_g.indeterminate);
        let pairs_ok = (0..self.rows.len()).all(|i| {
            (0..self.rows.len()).all(|j| self.pairwise[i][j] == (self.rows[i].class == self.rows[j].class))
        });
        let mut by_size: Vec<&ModuliRow> = self.rows.iter().collect();
        by_size.sort_by(|x, y| libm::fabs(x.a).total_cmp(&libm::fabs(y.a)));
        let monotone = by_size.windows(2).all(|w| w[0].distance <= w[1].distance);
        has_g && has_u && classes_ok && pairs_ok && monotone
    }
}

/// Sample `x -> (a, x, a)` on `S^m_s(1)` for each `a`, classify each against
/// `a = 0` and `a = 1`, and measure the distance to `a = 0`.
pub fn moduli_demo(
    a_values: &[f64],
    m: usize,
    s: usize,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<ModuliDemo> {
    if let Some(&bad) = a_values.iter().find(|a| !a.is_finite()) {
        return Err(Error::ParamOutOfRange { name: "a".into(), value: bad, domain: "finite reals".into() });
    }
    let family = catalog::find("psi-a")?;
    let chart_for = |a: f64| {
        let p: Params =
            [("m", m as f64), ("s", s as f64), ("a", a), ("eps", 1.0)].iter().map(|(k, v)| ((*k).into(), *v)).collect();
        family.instantiate(&p)
    };
    let reference = chart_for(0.0)?;
    let points = sampling::sample_points(&reference, samples, &mut sampling::rng(seed));
    let images = |a: f64| -> Result<Vec<Vector>> { sampling::images(&chart_for(a)?, &points) };
    let sig = reference.ambient().embedding();
    let g = images(0.0)?;
    let u = images(1.0)?;

    let sets: Vec<Vec<Vector>> = a_values.iter().map(|&a| images(a)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(a_values.len());
    for (&a, set) in a_values.iter().zip(&sets) {
        let to_g = congruence_test(set, &g, sig, tol)?;
        let to_u = congruence_test(set, &u, sig, tol)?;
        let class = match (to_g.congruent, to_u.congruent) {
            (true, false) => ModuliClass::G,
            (false, true) => ModuliClass::U,
            _ => ModuliClass::Neither,
        };
        let distance = set.iter().zip(&g).map(|(x, y)| (x - y).norm()).fold(0.0_f64, f64::max);
        rows.push(ModuliRow { a, class, distance, to_g, to_u });
    }
    let pairwise = sets
        .iter()
        .map(|x| sets.iter().map(|y| congruence_test(x, y, sig, tol).map(|v| v.congruent)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuliDemo { m, s, rows, pairwise })
}
