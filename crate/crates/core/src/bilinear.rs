//! Indefinite (and possibly degenerate) inner products.
//!
//! A [`Signature`] `(neg, pos, null)` stands for the diagonal form
//! `diag(-1 x neg, +1 x pos, 0 x null)` in canonical coordinate order: the
//! negative block first, the null block last. Every ambient space in this
//! crate is written in that order.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};

/// Default cut-off below which an eigenvalue counts as zero.
pub const DEFAULT_TOL_ZERO: f64 = 1e-8;

const SYMMETRY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    pub neg: usize,
    pub pos: usize,
    pub null: usize,
}

impl Signature {
    pub const fn new(neg: usize, pos: usize, null: usize) -> Self {
        Self { neg, pos, null }
    }

    /// Non-degenerate signature with `index` negative directions out of `dim`.
    pub const fn pseudo_euclidean(dim: usize, index: usize) -> Self {
        Self { neg: index, pos: dim - index, null: 0 }
    }

    pub const fn dim(&self) -> usize {
        self.neg + self.pos + self.null
    }

    pub const fn is_degenerate(&self) -> bool {
        self.null > 0
    }

    /// Diagonal entry of the form at coordinate `i`.
    pub fn sign(&self, i: usize) -> f64 {
        if i < self.neg {
            -1.0
        } else if i < self.neg + self.pos {
            1.0
        } else {
            0.0
        }
    }

    pub fn metric_matrix(&self) -> Matrix {
        Matrix::from_fn(self.dim(), self.dim(), |i, j| if i == j { self.sign(i) } else { 0.0 })
    }

    /// `eta * v`: lowers the index of `v`.
    pub fn lower(&self, v: &Vector) -> Vector {
        Vector::from_fn(v.len(), |i, _| self.sign(i) * v[i])
    }

    /// Inner product without the dimension check. Callers guarantee lengths.
    pub(crate) fn dot(&self, u: &Vector, v: &Vector) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.neg {
            acc -= u[i] * v[i];
        }
        for i in self.neg..self.neg + self.pos {
            acc += u[i] * v[i];
        }
        acc
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.neg, self.pos, self.null)
    }
}

pub fn inner_product(u: &Vector, v: &Vector, sig: Signature) -> Result<f64> {
    for w in [u, v] {
        if w.len() != sig.dim() {
            return Err(Error::DimensionMismatch { expected: sig.dim(), found: w.len() });
        }
    }
    Ok(sig.dot(u, v))
}

/// A dense symmetric matrix, such as an induced metric or a Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricForm {
    entries: Matrix,
}

impl SymmetricForm {
    pub fn new(entries: Matrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), found: entries.ncols() });
        }
        let n = entries.nrows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((entries[(i, j)] - entries[(j, i)]).abs());
            }
        }
        if worst > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(worst));
        }
        Ok(Self { entries })
    }

    /// Gram matrix `<v_i, v_j>` under `sig`; exactly symmetric by construction.
    pub fn gram(vectors: &[Vector], sig: Signature) -> Result<Self> {
        let k = vectors.len();
        let mut entries = Matrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let value = inner_product(&vectors[i], &vectors[j], sig)?;
                entries[(i, j)] = value;
                entries[(j, i)] = value;
            }
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    pub fn into_matrix(self) -> Matrix {
        self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Eigenvalues in ascending order with matching eigenvector columns.
    fn eigen_sorted(&self) -> (Vec<f64>, Matrix) {
        let n = self.dim();
        if n == 0 {
            return (Vec::new(), Matrix::zeros(0, 0));
        }
        let eig = self.entries.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = Matrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::BadTolerance(tol))
    }
}

pub fn signature_of(form: &SymmetricForm, tol_zero: f64) -> Result<Signature> {
    check_tol(tol_zero)?;
    let (values, _) = form.eigen_sorted();
    let mut sig = Signature::default();
    for lambda in values {
        if lambda < -tol_zero {
            sig.neg += 1;
        } else if lambda > tol_zero {
            sig.pos += 1;
        } else {
            sig.null += 1;
        }
    }
    Ok(sig)
}

/// Orthonormal (Euclidean) basis of the near-kernel of `form`, ordered by
/// ascending `|eigenvalue|`, each vector sign-normalised.
pub fn radical_basis(form: &SymmetricForm, tol_zero: f64) -> Result<Vec<Vector>> {
    check_tol(tol_zero)?;
    let (values, vectors) = form.eigen_sorted();
    let mut picked: Vec<(f64, Vector)> = values
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() <= tol_zero)
        .map(|(k, l)| {
            let mut v = vectors.column(k).into_owned();
            linalg::normalize_sign(&mut v);
            (l.abs(), v)
        })
        .collect();
    picked.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(picked.into_iter().map(|(_, v)| v).collect())
}

#[derive(Debug, Clone)]
pub struct OrthogonalSplit {
    /// Basis of `span^perp = { w : <w, span> = 0 }`.
    pub complement: Vec<Vector>,
    /// `span` meets its own orthogonal complement.
    pub degenerate: bool,
    /// Metric-orthogonal projector onto `span`, when `span` is non-degenerate.
    pub projector: Option<Matrix>,
}

pub fn orthogonal_split(span: &[Vector], sig: Signature, tol: f64) -> Result<OrthogonalSplit> {
    check_tol(tol)?;
    let n = sig.dim();
    if let Some(bad) = span.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
    }
    let basis = linalg::span_basis(span, n, tol);
    let mut rows = Matrix::zeros(basis.len(), n);
    for (k, b) in basis.iter().enumerate() {
        rows.set_row(k, &sig.lower(b).transpose());
    }
    let complement = linalg::null_space(&rows, tol);

    let gram = SymmetricForm::gram(&basis, sig)?;
    let degenerate = signature_of(&gram, tol)?.null > 0;
    let projector = if degenerate {
        None
    } else if basis.is_empty() {
        Some(Matrix::zeros(n, n))
    } else {
        let b = linalg::columns(&basis, n);
        let g_inv = gram
            .matrix()
            .clone()
            .try_inverse()
            .ok_or(Error::DegenerateMetric(0))?;
        Some(&b * g_inv * b.transpose() * sig.metric_matrix())
    };
    Ok(OrthogonalSplit { complement, degenerate, projector })
}

/// A random linear isometry of the form: a product of circular rotations
/// within each sign block, hyperbolic boosts across blocks, and reflections.
/// The null block is left fixed. Boost rapidities stay within `0.35` so the
/// result stays well conditioned.
pub fn random_isometry<R: Rng + ?Sized>(sig: Signature, rng: &mut R) -> Matrix {
    let n = sig.dim();
    let active = sig.neg + sig.pos;
    let mut l = Matrix::identity(n, n);
    if active < 2 {
        return l;
    }
    for _ in 0..2 * active {
        let i = rng.random_range(0..active);
        let mut j = rng.random_range(0..active - 1);
        if j >= i {
            j += 1;
        }
        let (i, j) = (i.min(j), i.max(j));
        let mut e = Matrix::identity(n, n);
        if sig.sign(i) == sig.sign(j) {
            let theta = rng.random_range(-PI..PI);
            let (s, c) = (libm::sin(theta), libm::cos(theta));
            e[(i, i)] = c;
            e[(i, j)] = -s;
            e[(j, i)] = s;
            e[(j, j)] = c;
        } else {
            let phi = rng.random_range(-0.35..0.35);
            let (s, c) = (libm::sinh(phi), libm::cosh(phi));
            e[(i, i)] = c;
            e[(i, j)] = s;
            e[(j, i)] = s;
            e[(j, j)] = c;
        }
        l = e * l;
    }
    for k in 0..active {
        if rng.random_bool(0.25) {
            l.row_mut(k).neg_mut();
        }
    }
    l
}

/// `max |L^T eta L - eta|`.
pub fn isometry_defect(l: &Matrix, sig: Signature) -> f64 {
    let eta = sig.metric_matrix();
    let d = l.transpose() * &eta * l - eta;
    d.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn diag(xs: &[f64]) -> SymmetricForm {
        SymmetricForm::new(Matrix::from_diagonal(&v(xs))).unwrap()
    }

    #[test]
    fn null_pair_pairs_to_one() {
        let xi = v(&[1.0, 0.0, 0.0, 1.0]);
        let n = v(&[-0.5, 0.0, 0.0, 0.5]);
        let sig = Signature::new(1, 3, 0);
        assert_eq!(inner_product(&xi, &n, sig).unwrap(), 1.0);
        assert_eq!(inner_product(&xi, &xi, sig).unwrap(), 0.0);
        assert_eq!(inner_product(&n, &n, sig).unwrap(), 0.0);
    }

    #[test]
    fn negative_block_comes_first() {
        let e1 = v(&[1.0, 0.0]);
        assert_eq!(inner_product(&e1, &e1, Signature::new(1, 1, 0)).unwrap(), -1.0);
    }

    #[test]
    fn lightlike_mean_curvature_direction_is_null() {
        // (1, 0, ..., 0, 1) with one negative coordinate per extra index.
        for s in 0..3 {
            let mut h = Vector::zeros(s + 5);
            h[0] = 1.0;
            h[s + 4] = 1.0;
            let sig = Signature::new(s + 1, 4, 0);
            assert_eq!(inner_product(&h, &h, sig).unwrap(), 0.0);
        }
    }

    #[test]
    fn null_block_is_ignored() {
        let u = v(&[1.0, 2.0, 7.0]);
        assert_eq!(inner_product(&u, &u, Signature::new(0, 2, 1)).unwrap(), 5.0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = inner_product(&v(&[1.0]), &v(&[1.0, 2.0]), Signature::new(0, 2, 0));
        assert!(matches!(err, Err(Error::DimensionMismatch { expected: 2, found: 1 })));
    }

    #[test]
    fn signatures_of_diagonal_forms() {
        let id = SymmetricForm::new(Matrix::identity(3, 3)).unwrap();
        assert_eq!(signature_of(&id, 1e-8).unwrap(), Signature::new(0, 3, 0));
        assert_eq!(signature_of(&diag(&[-1.0, 0.0, 1.0]), 1e-8).unwrap(), Signature::new(1, 1, 1));
    }

    #[test]
    fn cone_tangents_give_degenerate_metric() {
        // f_u = (1, 1, 0), f_v = (0, 0, 1) in signature (1, 2, 0).
        let sig = Signature::new(1, 2, 0);
        let g = SymmetricForm::gram(&[v(&[1.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0])], sig).unwrap();
        assert_eq!(g.matrix(), &Matrix::from_diagonal(&v(&[0.0, 1.0])));
        assert_eq!(signature_of(&g, 1e-8).unwrap(), Signature::new(0, 1, 1));
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.1, 1.0]);
        assert!(matches!(SymmetricForm::new(m), Err(Error::NotSymmetric(_))));
        assert!(matches!(signature_of(&diag(&[1.0]), 0.0), Err(Error::BadTolerance(_))));
    }

    #[test]
    fn radical_bases() {
        let basis = radical_basis(&diag(&[0.0, 1.0]), 1e-8).unwrap();
        assert_eq!(basis.len(), 1);
        assert!((basis[0].clone() - v(&[1.0, 0.0])).norm() < 1e-12);
        let id = SymmetricForm::new(Matrix::identity(3, 3)).unwrap();
        assert!(radical_basis(&id, 1e-8).unwrap().is_empty());
    }

    #[test]
    fn split_of_middle_block() {
        // E^{2}_0 (coordinates 1, 2) inside E^{4}_1.
        let sig = Signature::new(1, 3, 0);
        let span = [v(&[0.0, 1.0, 0.0, 0.0]), v(&[0.0, 0.0, 1.0, 0.0])];
        let split = orthogonal_split(&span, sig, 1e-10).unwrap();
        assert!(!split.degenerate);
        assert_eq!(split.complement.len(), 2);
        for w in &split.complement {
            assert!(w[1].abs() < 1e-12 && w[2].abs() < 1e-12);
        }
        let p = split.projector.unwrap();
        assert!((&p * &p - &p).norm() < 1e-12);
    }

    #[test]
    fn lightlike_plane_is_degenerate() {
        // {(t, v, t)} in signature (1, 2, 0).
        let sig = Signature::new(1, 2, 0);
        let span = [v(&[1.0, 0.0, 1.0]), v(&[0.0, 1.0, 0.0])];
        let split = orthogonal_split(&span, sig, 1e-10).unwrap();
        assert!(split.degenerate);
        assert!(split.projector.is_none());
    }

    #[test]
    fn null_line_lies_in_its_complement() {
        let sig = Signature::new(1, 3, 0);
        let xi = v(&[1.0, 0.0, 0.0, 1.0]);
        let split = orthogonal_split(core::slice::from_ref(&xi), sig, 1e-10).unwrap();
        assert!(split.degenerate);
        assert_eq!(split.complement.len(), 3);
        // xi is a combination of the complement basis.
        let c = linalg::columns(&split.complement, 4);
        let coeffs = linalg::solve(&c, &xi);
        assert!((&c * coeffs - xi).norm() < 1e-12);
    }

    #[test]
    fn random_isometries_preserve_the_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for sig in [Signature::new(1, 3, 0), Signature::new(2, 3, 0), Signature::new(0, 4, 1)] {
            for _ in 0..10 {
                let l = random_isometry(sig, &mut rng);
                assert!(isometry_defect(&l, sig) < 1e-12);
            }
        }
        let _ = vec![0u8];
    }
}
