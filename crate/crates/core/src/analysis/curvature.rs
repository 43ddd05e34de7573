//! Pointwise extrinsic geometry of a chart map: induced metric, second
//! fundamental form modulo the tangent space, mean curvature, parallelism and
//! the first normal space.
//!
//! Everything is computed on the map `f` into the flat coordinate space. For a
//! quadric ambient (`eps = +-1`) second derivatives are first projected onto
//! `T_y M = y^perp`, which turns the flat data into that of the space form.

use alloc::vec::Vec;

use crate::bilinear::{signature_of, Signature, SymmetricForm};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};

use super::derivatives::PointDerivatives;

pub fn induced_metric(d: &PointDerivatives) -> Result<SymmetricForm> {
    SymmetricForm::gram(&d.d1, d.ambient.embedding())
}

fn frame(d: &PointDerivatives) -> Result<Matrix> {
    let f = linalg::columns(&d.d1, d.y.len());
    let est = linalg::rank(&f, 1e-10);
    if est.rank < d.m() {
        return Err(Error::RankLoss { rank: est.rank, expected: d.m() });
    }
    Ok(f)
}

/// `w - eps <w, y> y`: the part of `w` tangent to the space form at `y`.
fn tangency(d: &PointDerivatives, w: &Vector) -> Vector {
    let eps = d.ambient.eps();
    if eps == 0.0 {
        w.clone()
    } else {
        w - &d.y * (eps * d.ambient.embedding().dot(w, &d.y))
    }
}

/// Second fundamental form as classes `Q_ij = [D_ij]` in `T_y M / span(df)`.
#[derive(Debug, Clone)]
pub struct QuotientForm {
    pub metric: SymmetricForm,
    /// Columns span a complement of the tangent frame inside `T_y M`.
    pub complement: Matrix,
    classes: Vec<Vector>,
    // Euclidean projection off the frame, applied to `complement`. Two
    // representatives of a class differ by a tangent vector, so `canonical * b`
    // depends only on the class.
    canonical: Matrix,
}

impl QuotientForm {
    pub fn m(&self) -> usize {
        self.metric.dim()
    }

    /// Coordinates of `Q_ij` in the complement basis.
    pub fn class(&self, i: usize, j: usize) -> &Vector {
        &self.classes[i * self.m() + j]
    }

    /// Canonical ambient representative of a class.
    pub fn representative(&self, class: &Vector) -> Vector {
        &self.canonical * class
    }

    /// Max-norm of the canonical representative; independent of the complement.
    pub fn norm(&self, class: &Vector) -> f64 {
        linalg::max_abs(&self.representative(class))
    }
}

pub fn second_fundamental_quotient(d: &PointDerivatives) -> Result<QuotientForm> {
    quotient_with_complement(d, None)
}

/// As [`second_fundamental_quotient`], with the complement basis `C` replaced by
/// `C + df * mix` (`mix` is `m x c`). Any such choice is again a complement.
pub fn quotient_with_complement(d: &PointDerivatives, mix: Option<&Matrix>) -> Result<QuotientForm> {
    let n = d.y.len();
    let m = d.m();
    let sig = d.ambient.embedding();
    let f = frame(d)?;
    let quadric = d.ambient.epsilon() != 0;
    let mut rows = Matrix::zeros(m + usize::from(quadric), n);
    for i in 0..m {
        rows.set_row(i, &d.d1[i].transpose());
    }
    if quadric {
        rows.set_row(m, &sig.lower(&d.y).transpose());
    }
    let basis = linalg::null_space(&rows, 1e-10);
    let expected = n - rows.nrows();
    if basis.len() != expected {
        return Err(Error::RankLoss { rank: n - basis.len(), expected: rows.nrows() });
    }
    let mut complement = linalg::columns(&basis, n);
    if let Some(mix) = mix {
        if mix.shape() != (m, expected) {
            return Err(Error::DimensionMismatch { expected, found: mix.ncols() });
        }
        complement += &f * mix;
    }

    let mut full = Matrix::zeros(n, m + expected);
    full.view_mut((0, 0), (n, m)).copy_from(&f);
    full.view_mut((0, m), (n, expected)).copy_from(&complement);
    let classes = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| {
            let x = linalg::solve(&full, &tangency(d, d.d2(i, j)));
            x.rows(m, expected).into_owned()
        })
        .collect();

    let ftf = f.transpose() * &f;
    let ftf_inv = ftf.try_inverse().ok_or(Error::RankLoss { rank: 0, expected: m })?;
    let p_perp = Matrix::identity(n, n) - &f * ftf_inv * f.transpose();
    let canonical = p_perp * &complement;
    Ok(QuotientForm { metric: induced_metric(d)?, complement, classes, canonical })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Umbilicity {
    pub umbilical: bool,
    pub geodesic: bool,
    /// The class `[H]` with `Q_ij = g_ij [H]`, in complement coordinates.
    pub h_class: Option<Vector>,
    /// `max ||Q_kl - g_kl [H]||`.
    pub residual: f64,
    /// `max ||Q_kl||`.
    pub geodesic_residual: f64,
    /// `g` vanishes at the point while some `Q_kl` does not, so no `[H]` exists.
    pub totally_degenerate: bool,
}

pub fn umbilicity_test(q: &QuotientForm, tol: f64) -> Umbilicity {
    let m = q.m();
    let geodesic_residual = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| q.norm(q.class(i, j)))
        .fold(0.0_f64, f64::max);
    let geodesic = geodesic_residual <= tol;

    // First largest |g_ij| in scan order.
    let mut pivot = (0, 0);
    let mut best = -1.0;
    for i in 0..m {
        for j in i..m {
            let g = q.metric.get(i, j).abs();
            if g > best {
                best = g;
                pivot = (i, j);
            }
        }
    }
    if best <= tol {
        return Umbilicity {
            umbilical: geodesic,
            geodesic,
            h_class: geodesic.then(|| Vector::zeros(q.complement.ncols())),
            residual: if geodesic { geodesic_residual } else { f64::INFINITY },
            geodesic_residual,
            totally_degenerate: !geodesic,
        };
    }
    let h = q.class(pivot.0, pivot.1) / q.metric.get(pivot.0, pivot.1);
    let mut residual = 0.0_f64;
    for k in 0..m {
        for l in 0..m {
            let diff = q.class(k, l) - &h * q.metric.get(k, l);
            residual = residual.max(q.norm(&diff));
        }
    }
    Umbilicity {
        umbilical: residual <= tol,
        geodesic,
        h_class: Some(h),
        residual,
        geodesic_residual,
        totally_degenerate: false,
    }
}

/// Inverse metric, refusing metrics with a radical at `tol_zero`.
fn inverse_metric(g: &SymmetricForm, tol_zero: f64) -> Result<Matrix> {
    let sig = signature_of(g, tol_zero)?;
    if sig.null > 0 {
        return Err(Error::DegenerateMetric(sig.null));
    }
    g.matrix().clone().try_inverse().ok_or(Error::DegenerateMetric(g.dim()))
}

/// Normal projection in the flat coordinate space: `w - g^ab <w, f_b> f_a`.
struct NormalProjector<'a> {
    d: &'a PointDerivatives,
    sig: Signature,
    g_inv: Matrix,
}

impl NormalProjector<'_> {
    fn apply(&self, w: &Vector) -> Vector {
        let m = self.d.m();
        let pairings: Vec<f64> = self.d.d1.iter().map(|fb| self.sig.dot(w, fb)).collect();
        let mut out = w.clone();
        for a in 0..m {
            let c: f64 = (0..m).map(|b| self.g_inv[(a, b)] * pairings[b]).sum();
            out -= &self.d.d1[a] * c;
        }
        out
    }
}

fn projector(d: &PointDerivatives, tol_zero: f64) -> Result<NormalProjector<'_>> {
    let g = induced_metric(d)?;
    Ok(NormalProjector { d, sig: d.ambient.embedding(), g_inv: inverse_metric(&g, tol_zero)? })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanCurvature {
    /// Mean curvature of `f` into the flat coordinate space.
    pub h_flat: Vector,
    /// Mean curvature relative to the space form, `h_flat + eps y`.
    pub h_rel: Vector,
    /// `<h_rel, h_rel>`.
    pub h_norm: f64,
    pub minimal: bool,
    pub marginally_trapped: bool,
}

pub fn mean_curvature(d: &PointDerivatives, tol_zero: f64, tol: f64) -> Result<MeanCurvature> {
    let np = projector(d, tol_zero)?;
    let m = d.m();
    let mut h_flat = Vector::zeros(d.y.len());
    for i in 0..m {
        for j in 0..m {
            h_flat += np.apply(d.d2(i, j)) * np.g_inv[(i, j)];
        }
    }
    h_flat /= m as f64;
    let h_rel = &h_flat + &d.y * d.ambient.eps();
    let h_norm = np.sig.dot(&h_rel, &h_rel);
    let minimal = linalg::max_abs(&h_rel) <= tol;
    Ok(MeanCurvature { h_flat, h_rel, h_norm, minimal, marginally_trapped: !minimal && h_norm.abs() <= tol })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parallelism {
    pub parallel: bool,
    /// `max ||(nabla h)_{kij}||`.
    pub residual: f64,
}

/// Christoffel symbols `Gamma^a_ij` (index `(a * m + i) * m + j`) from the
/// first derivatives `d_k g_ij = <f_ki, f_j> + <f_i, f_kj>` of the metric.
fn christoffel(d: &PointDerivatives, g_inv: &Matrix) -> Vec<f64> {
    let m = d.m();
    let sig = d.ambient.embedding();
    let dg = |k: usize, i: usize, j: usize| sig.dot(d.d2(k, i), &d.d1[j]) + sig.dot(&d.d1[i], d.d2(k, j));
    let mut lower = alloc::vec![0.0; m * m * m];
    for b in 0..m {
        for i in 0..m {
            for j in 0..m {
                lower[(b * m + i) * m + j] = 0.5 * (dg(i, j, b) + dg(j, i, b) - dg(b, i, j));
            }
        }
    }
    let mut gamma = alloc::vec![0.0; m * m * m];
    for a in 0..m {
        for i in 0..m {
            for j in 0..m {
                gamma[(a * m + i) * m + j] = (0..m).map(|b| g_inv[(a, b)] * lower[(b * m + i) * m + j]).sum();
            }
        }
    }
    gamma
}

/// `(nabla_k h)(e_i, e_j) = N[f_ijk] - Gamma^a_ij h_ak - Gamma^a_ki h_aj - Gamma^a_kj h_ia`,
/// with `h_ij = N[f_ij]` the second fundamental form of `f` in flat space.
/// `f` is parallel exactly when the space-form immersion is.
pub fn parallelism_test(d: &PointDerivatives, tol_zero: f64, tol: f64) -> Result<Parallelism> {
    if !d.has_third() {
        return Err(Error::Unsupported("parallelism needs order-3 derivatives"));
    }
    let np = projector(d, tol_zero)?;
    let m = d.m();
    let gamma = christoffel(d, &np.g_inv);
    let gm = |a: usize, i: usize, j: usize| gamma[(a * m + i) * m + j];
    let h: Vec<Vector> = (0..m * m).map(|ij| np.apply(d.d2(ij / m, ij % m))).collect();
    let hh = |i: usize, j: usize| &h[i * m + j];
    let mut residual = 0.0_f64;
    for k in 0..m {
        for i in 0..m {
            for j in i..m {
                let third = d.d3(i, j, k).expect("checked above");
                let mut v = np.apply(third);
                for a in 0..m {
                    v -= hh(a, k) * gm(a, i, j);
                    v -= hh(a, j) * gm(a, k, i);
                    v -= hh(i, a) * gm(a, k, j);
                }
                residual = residual.max(linalg::max_abs(&v));
            }
        }
    }
    Ok(Parallelism { parallel: residual <= tol, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstNormalSpace {
    /// Span of the space-form second fundamental form `h_ij + eps g_ij y`.
    pub dim: usize,
    pub basis: Vec<Vector>,
    /// Span of the flat-space second fundamental form `h_ij`; for a quadric
    /// ambient this also contains the position direction.
    pub flat_dim: usize,
    pub flat_basis: Vec<Vector>,
}

pub fn first_normal_space(d: &PointDerivatives, tol_zero: f64, tol: f64) -> Result<FirstNormalSpace> {
    let np = projector(d, tol_zero)?;
    let g = induced_metric(d)?;
    let m = d.m();
    let n = d.y.len();
    let eps = d.ambient.eps();
    let mut flat = Vec::with_capacity(m * m);
    let mut rel = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in i..m {
            let h = np.apply(d.d2(i, j));
            rel.push(&h + &d.y * (eps * g.get(i, j)));
            flat.push(h);
        }
    }
    let span = |vs: &[Vector]| -> Vec<Vector> {
        if vs.iter().all(|v| linalg::max_abs(v) <= tol) {
            Vec::new()
        } else {
            linalg::span_basis(vs, n, tol)
        }
    };
    let basis = span(&rel);
    let flat_basis = span(&flat);
    Ok(FirstNormalSpace { dim: basis.len(), basis, flat_dim: flat_basis.len(), flat_basis })
}
