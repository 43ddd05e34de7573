use proptest::prelude::*;
use umbilic_core::analysis::fullness_test;
use umbilic_core::bilinear::{orthogonal_split, random_isometry};
use umbilic_core::catalog::{self, Params};
use umbilic_core::jets::{compose, ImmersionChart};
use umbilic_core::linalg::{span_basis, svd};
use umbilic_core::{sampling, Matrix};

#[test]
fn rank_deficient_samples_factor_exactly() {
    // images of (x, t) -> (t, x, t): every column has equal first and last entries
    let p: Params = [("m", 4.0), ("s", 2.0)].iter().map(|(k, v)| ((*k).into(), *v)).collect();
    let c = catalog::instantiate("light1-1", &p).unwrap();
    let pts = sampling::sample_points(&c, 12, &mut sampling::rng(990 ^ 7));
    let images = sampling::images(&c, &pts).unwrap();
    for b in span_basis(&images, 6, 1e-8) {
        assert!((b[0] - b[5]).abs() <= 1e-12, "{b}");
    }
    let sig = c.ambient().embedding();
    let comp = orthogonal_split(&images, sig, 1e-8).unwrap().complement;
    assert_eq!(comp.len(), 1);
    assert!((comp[0][0].abs() - 0.5_f64.sqrt()).abs() <= 1e-12);

    let l = random_isometry(sig, &mut sampling::rng(990));
    let moved = compose(&ImmersionChart::linear(&l, c.ambient()).unwrap(), &c).unwrap();
    assert!(fullness_test(&images, c.ambient(), 1e-8).unwrap());
    assert!(fullness_test(&sampling::images(&moved, &pts).unwrap(), c.ambient(), 1e-8).unwrap());
}

proptest! {
    #[test]
    fn svd_reconstructs_low_rank_products(
        rows in 2usize..8,
        cols in 2usize..14,
        rank in 1usize..5,
        entries in prop::collection::vec(-2.0..2.0_f64, 2 * 8 * 14),
    ) {
        let rank = rank.min(rows).min(cols);
        let left = Matrix::from_fn(rows, rank, |i, j| entries[i * rank + j]);
        let right = Matrix::from_fn(rank, cols, |i, j| entries[8 * 14 + i * cols + j]);
        let a = left * right;
        let s = svd(&a);
        let back = s.u.as_ref().unwrap() * Matrix::from_diagonal(&s.singular_values) * s.v_t.as_ref().unwrap();
        prop_assert!((back - &a).amax() <= 1e-12 * a.amax().max(1.0));
    }
}
