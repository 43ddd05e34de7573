//! Affine hulls of sampled images: codimension reduction and fullness.

use alloc::vec::Vec;
use core::fmt;

use crate::ambient::AmbientSpace;
use crate::bilinear::{orthogonal_split, signature_of, Signature, SymmetricForm};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};

/// Position of an affine hull `q + W` relative to the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TranslationClass {
    /// The hull is a linear subspace (`v = 0`).
    Linear,
    /// Offset `v` perpendicular to `W` with `<v,v> > 0`.
    Spacelike,
    /// Offset `v` perpendicular to `W` with `<v,v> < 0`.
    Timelike,
    /// Non-zero null offset `v` perpendicular to `W`.
    Lightlike,
    /// `W` is degenerate and the hull is displaced along a null transversal
    /// `N` paired with its radical.
    Transversal,
    /// A rank decision sat too close to the tolerance.
    Indeterminate,
}

impl TranslationClass {
    pub fn label(self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Spacelike => "v_S",
            Self::Timelike => "v_T",
            Self::Lightlike => "v_L",
            Self::Transversal => "+N",
            Self::Indeterminate => "indeterminate",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        [Self::Linear, Self::Spacelike, Self::Timelike, Self::Lightlike, Self::Transversal, Self::Indeterminate]
            .into_iter()
            .find(|c| c.label() == label)
    }
}

impl fmt::Display for TranslationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub hull_dim: usize,
    /// Signature of the ambient form on the direction space `W`.
    pub direction_signature: Signature,
    /// Signature on `W^perp`; `None` when `W` is degenerate.
    pub normal_signature: Option<Signature>,
    pub translation_class: TranslationClass,
    /// `sqrt(|<v,v>|)` for the spacelike and timelike classes.
    pub rho: Option<f64>,
    /// The offset `v` (non-degenerate `W`) or the pairings `<q, xi_a>` with
    /// the radical of `W` (degenerate `W`).
    pub offset: Vector,
    /// Radical basis of `W`, empty when `W` is non-degenerate.
    pub radical: Vec<Vector>,
    /// Null vectors `N_a` with `<N_a, xi_b> = delta_ab`, `<N_a, N_b> = 0`,
    /// orthogonal to a screen of `W`.
    pub transversal: Vec<Vector>,
    pub full: bool,
}

fn check_samples(samples: &[Vector], ambient: AmbientSpace, needed: usize) -> Result<usize> {
    let n = ambient.coords();
    if samples.len() < needed {
        return Err(Error::InsufficientSamples { needed, got: samples.len() });
    }
    if let Some(bad) = samples.iter().find(|s| s.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
    }
    Ok(n)
}

fn classify_offset(v: &Vector, sig: Signature, tol: f64) -> (TranslationClass, Option<f64>) {
    if linalg::max_abs(v) <= tol {
        return (TranslationClass::Linear, None);
    }
    let q = sig.dot(v, v);
    if q > tol {
        (TranslationClass::Spacelike, Some(libm::sqrt(q)))
    } else if q < -tol {
        (TranslationClass::Timelike, Some(libm::sqrt(-q)))
    } else {
        (TranslationClass::Lightlike, None)
    }
}

/// Affine hull `q + W` of the samples and the position of `q` relative to `W`.
pub fn reduction_report(samples: &[Vector], ambient: AmbientSpace, tol_zero: f64, tol: f64) -> Result<ReductionReport> {
    let n = check_samples(samples, ambient, 2 * ambient.coords())?;
    let sig = ambient.embedding();
    let q = &samples[0];
    let diffs: Vec<Vector> = samples[1..].iter().map(|s| s - q).collect();
    let est = linalg::rank(&linalg::columns(&diffs, n), tol_zero);
    let w = linalg::span_basis(&diffs, n, tol_zero);
    let gram = SymmetricForm::gram(&w, sig)?;
    let direction_signature = signature_of(&gram, tol_zero)?;
    let full = fullness_test(samples, ambient, tol_zero)?;
    let mut report = ReductionReport {
        hull_dim: w.len(),
        direction_signature,
        normal_signature: None,
        translation_class: TranslationClass::Indeterminate,
        rho: None,
        offset: Vector::zeros(0),
        radical: Vec::new(),
        transversal: Vec::new(),
        full,
    };
    if est.ambiguous {
        return Ok(report);
    }

    if direction_signature.null == 0 {
        let split = orthogonal_split(&w, sig, tol_zero)?;
        let p = split.projector.expect("non-degenerate split has a projector");
        let v = q - &p * q;
        let (class, rho) = classify_offset(&v, sig, tol);
        report.normal_signature = Some(Signature::new(
            sig.neg - direction_signature.neg,
            sig.pos - direction_signature.pos,
            0,
        ));
        report.translation_class = class;
        report.rho = rho;
        report.offset = v;
        return Ok(report);
    }

    // Degenerate W = Rad + S. Pair each radical vector xi_a with a null N_a
    // orthogonal to the screen S; <q, xi_a> is the N_a-component of q and is
    // the same for every hull point.
    let wm = linalg::columns(&w, n);
    let radical: Vec<Vector> = crate::bilinear::radical_basis(&gram, tol_zero)?
        .iter()
        .map(|c| {
            let x = &wm * c;
            let norm = x.norm();
            x / norm
        })
        .collect();
    let r = radical.len();
    let mut rad_rows = Matrix::zeros(r, w.len());
    for (a, xi) in radical.iter().enumerate() {
        rad_rows.set_row(a, &(wm.transpose() * xi).transpose());
    }
    let screen: Vec<Vector> = linalg::null_space(&rad_rows, 1e-10).iter().map(|c| &wm * c).collect();
    let transversal = null_transversal(&radical, &screen, sig, tol_zero)?;
    let pairings = Vector::from_iterator(r, radical.iter().map(|xi| sig.dot(q, xi)));
    report.radical = radical;
    report.transversal = transversal.clone();
    report.offset = pairings.clone();
    if linalg::max_abs(&pairings) > tol {
        report.translation_class = TranslationClass::Transversal;
        return Ok(report);
    }
    // q lies in W + (W + span N)^perp; classify what is left after removing W + span N.
    let mut u = w.clone();
    u.extend(transversal);
    let split = orthogonal_split(&u, sig, tol_zero)?;
    let Some(p) = split.projector else {
        return Ok(report);
    };
    let rest = q - &p * q;
    let (class, rho) = classify_offset(&rest, sig, tol);
    report.translation_class = class;
    report.rho = rho;
    Ok(report)
}

/// Null vectors `N_a` orthogonal to `screen` with `<N_a, xi_b> = delta_ab`.
fn null_transversal(radical: &[Vector], screen: &[Vector], sig: Signature, tol_zero: f64) -> Result<Vec<Vector>> {
    let n = sig.dim();
    let r = radical.len();
    let perp = if screen.is_empty() {
        (0..n).map(|i| Vector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 })).collect()
    } else {
        orthogonal_split(screen, sig, tol_zero)?.complement
    };
    // Solve <sum_c x_c p_c, xi_b> = delta_ab in the basis of S^perp.
    let mut a = Matrix::zeros(r, perp.len());
    for (b, xi) in radical.iter().enumerate() {
        for (c, pc) in perp.iter().enumerate() {
            a[(b, c)] = sig.dot(pc, xi);
        }
    }
    let pm = linalg::columns(&perp, n);
    let z: Vec<Vector> = (0..r)
        .map(|i| {
            let e = Vector::from_fn(r, |k, _| if k == i { 1.0 } else { 0.0 });
            &pm * linalg::solve(&a, &e)
        })
        .collect();
    Ok((0..r)
        .map(|i| {
            let mut v = z[i].clone();
            for b in 0..r {
                v -= &radical[b] * (0.5 * sig.dot(&z[i], &z[b]));
            }
            v
        })
        .collect())
}

/// Whether no non-null vector `c` satisfies `<c, x> = const` on the image: the
/// image then lies in no non-degenerate totally geodesic hypersurface.
/// For a quadric ambient the constant must be zero (hyperplanes through the
/// origin); for flat space any affine hyperplane counts.
pub fn fullness_test(samples: &[Vector], ambient: AmbientSpace, tol_zero: f64) -> Result<bool> {
    check_samples(samples, ambient, ambient.coords() + 2)?;
    let sig = ambient.embedding();
    let span: Vec<Vector> = if ambient.epsilon() == 0 {
        samples[1..].iter().map(|s| s - &samples[0]).collect()
    } else {
        samples.to_vec()
    };
    let complement = orthogonal_split(&span, sig, tol_zero)?.complement;
    if complement.is_empty() {
        return Ok(true);
    }
    Ok(SymmetricForm::gram(&complement, sig)?.max_abs() <= tol_zero)
}
