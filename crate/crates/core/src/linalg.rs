//! Small dense helpers shared by the geometry modules. Everything here is
//! Euclidean (no ambient form involved).

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, Dyn, SVD};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Singular values within this factor of the threshold make a rank call ambiguous.
pub const RANK_BAND: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankEstimate {
    pub rank: usize,
    /// Some singular value sits within [`RANK_BAND`] of the cut-off.
    pub ambiguous: bool,
}

struct FullSvd {
    /// Descending, one per column of the input.
    sigma: Vec<f64>,
    /// Columns are right singular vectors, same order as `sigma`.
    v: Matrix,
    /// Columns are left singular vectors, same order as `sigma`.
    u: Matrix,
}

/// SVD whose factors reproduce `a` to near machine precision.
///
/// nalgebra's bidiagonal iteration sometimes stops on a wrong split for
/// rank-deficient input at its default convergence threshold (reconstruction
/// errors of 1e-2 happen). Each attempt is checked and a looser threshold is
/// tried until one reconstructs `a`.
pub fn svd(a: &Matrix) -> SVD<f64, Dyn, Dyn> {
    let scale = a.amax().max(f64::MIN_POSITIVE);
    let ok = |s: &SVD<f64, Dyn, Dyn>| {
        let (u, v_t) = (s.u.as_ref().expect("u requested"), s.v_t.as_ref().expect("v requested"));
        let back = u * Matrix::from_diagonal(&s.singular_values) * v_t;
        (back - a).amax() <= SVD_CHECK * scale
    };
    let mut fallback = None;
    for eps in [f64::EPSILON, 1e-15, 1e-14, 1e-13, 1e-12] {
        if let Some(s) = a.clone().try_svd(true, true, eps, 0) {
            if ok(&s) {
                return s;
            }
            fallback.get_or_insert(s);
        }
    }
    fallback.unwrap_or_else(|| a.clone().svd(true, true))
}

/// Relative reconstruction error accepted from [`svd`].
const SVD_CHECK: f64 = 1e-12;

// Zero rows are appended when the matrix is wide so that V comes out square.
fn full_svd(a: &Matrix) -> FullSvd {
    let (rows, cols) = a.shape();
    if cols == 0 || rows == 0 {
        return FullSvd {
            sigma: alloc::vec![0.0; cols],
            v: Matrix::identity(cols, cols),
            u: Matrix::zeros(rows, cols),
        };
    }
    let padded_rows = rows.max(cols);
    let mut tall = Matrix::zeros(padded_rows, cols);
    tall.view_mut((0, 0), (rows, cols)).copy_from(a);
    let svd = svd(&tall);
    let u_full = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v requested");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut v = Matrix::zeros(cols, cols);
    let mut u = Matrix::zeros(rows, cols);
    for (k, &i) in order.iter().enumerate() {
        for c in 0..cols {
            v[(c, k)] = v_t[(i, c)];
        }
        for r in 0..rows {
            u[(r, k)] = u_full[(r, i)];
        }
    }
    FullSvd { sigma, v, u }
}

fn threshold(sigma: &[f64], rel_tol: f64) -> f64 {
    let top = sigma.first().copied().unwrap_or(0.0);
    rel_tol * top.max(1.0)
}

pub fn rank(a: &Matrix, rel_tol: f64) -> RankEstimate {
    let svd = full_svd(a);
    let cut = threshold(&svd.sigma, rel_tol);
    let sigma = &svd.sigma;
    let rank = sigma.iter().filter(|&&s| s > cut).count();
    let ambiguous = sigma
        .iter()
        .any(|&s| s > cut / RANK_BAND && s <= cut * RANK_BAND);
    RankEstimate { rank, ambiguous }
}

/// Orthonormal basis of `{x : a x = 0}`.
pub fn null_space(a: &Matrix, rel_tol: f64) -> Vec<Vector> {
    let cols = a.ncols();
    if a.nrows() == 0 {
        return (0..cols)
            .map(|i| {
                let mut e = Vector::zeros(cols);
                e[i] = 1.0;
                e
            })
            .collect();
    }
    let svd = full_svd(a);
    let cut = threshold(&svd.sigma, rel_tol);
    (0..cols)
        .filter(|&k| svd.sigma[k] <= cut)
        .map(|k| svd.v.column(k).into_owned())
        .collect()
}

/// Orthonormal basis of the span of `vectors` (all of length `dim`).
pub fn span_basis(vectors: &[Vector], dim: usize, rel_tol: f64) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let a = columns(vectors, dim);
    let svd = full_svd(&a);
    let cut = threshold(&svd.sigma, rel_tol);
    (0..a.ncols())
        .filter(|&k| svd.sigma[k] > cut)
        .map(|k| svd.u.column(k).into_owned())
        .collect()
}

/// Stack vectors as the columns of a `dim x k` matrix.
pub fn columns(vectors: &[Vector], dim: usize) -> Matrix {
    let mut a = Matrix::zeros(dim, vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        a.set_column(k, v);
    }
    a
}

/// Least-squares solution of `a x = b`.
pub fn solve(a: &Matrix, b: &Vector) -> Vector {
    svd(a).solve(b, 1e-13).unwrap_or_else(|_| Vector::zeros(a.ncols()))
}

pub fn max_abs(v: &Vector) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Flip the sign so the first component above `tiny` in magnitude is positive.
pub fn normalize_sign(v: &mut Vector) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12).copied() {
        if first < 0.0 {
            v.neg_mut();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let a = Matrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space(&a, 1e-10);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&a * v).norm() < 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_flags_borderline_values() {
        let a = Matrix::from_diagonal(&Vector::from_vec(alloc::vec![1.0, 1e-8, 0.0]));
        let est = rank(&a, 1e-8);
        assert_eq!(est.rank, 1);
        assert!(est.ambiguous);
        let clean = Matrix::from_diagonal(&Vector::from_vec(alloc::vec![1.0, 1e-3, 1e-17]));
        assert_eq!(rank(&clean, 1e-8), RankEstimate { rank: 2, ambiguous: false });
    }

    #[test]
    fn span_of_dependent_vectors() {
        let v = Vector::from_vec(alloc::vec![1.0, 2.0, 3.0]);
        let basis = span_basis(&[v.clone(), v * 2.0], 3, 1e-10);
        assert_eq!(basis.len(), 1);
    }
}
