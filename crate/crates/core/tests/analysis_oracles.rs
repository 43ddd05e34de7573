use umbilic_core::ambient::AmbientSpace;
use umbilic_core::analysis::{
    analyze_derivatives, analyze_point, fullness_test, induced_metric, reduction_report, GeometryReport,
    PointDerivatives, Tolerances, TranslationClass,
};
use umbilic_core::bilinear::{inner_product, Signature};
use umbilic_core::catalog::{self, Params};
use umbilic_core::jets::{compose, Expr, ImmersionChart, JetOrder};
use umbilic_core::{sampling, Vector};

fn params(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|(k, v)| ((*k).to_string(), *v)).collect()
}

fn chart(id: &str, pairs: &[(&str, f64)]) -> ImmersionChart {
    catalog::instantiate(id, &params(pairs)).unwrap()
}

fn report(id: &str, pairs: &[(&str, f64)], u: &[f64]) -> GeometryReport {
    analyze_point(&chart(id, pairs), u, JetOrder::Three, &Tolerances::default()).unwrap()
}

fn reports(c: &ImmersionChart, n: usize, seed: u64) -> Vec<GeometryReport> {
    let points = sampling::sample_points(c, n, &mut sampling::rng(seed));
    points.iter().map(|p| analyze_point(c, p, JetOrder::Three, &Tolerances::default()).unwrap()).collect()
}

fn images(c: &ImmersionChart, n: usize, seed: u64) -> Vec<Vector> {
    let points = sampling::sample_points(c, n, &mut sampling::rng(seed));
    sampling::images(c, &points).unwrap()
}

fn metric_entries(r: &GeometryReport) -> Vec<f64> {
    let m = r.induced_metric.dim();
    (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| r.induced_metric.get(i, j)).collect()
}

#[test]
fn example_surface_at_origin() {
    let r = report("main1-5", &[("m", 2.0), ("s", 0.0)], &[0.0, 0.0]);
    assert_eq!(metric_entries(&r), vec![1.0, 0.0, 0.0, 1.0]);
    let h = r.h_rel().unwrap();
    for (x, y) in h.iter().zip([1.0, 0.0, 0.0, 0.0, 1.0]) {
        assert!((x - y).abs() <= 1e-9, "{h}");
    }
    assert!(r.h_norm().unwrap().abs() <= 1e-12);
    assert!(r.flags.totally_umbilical && !r.flags.totally_geodesic);
    assert_eq!(r.flags.marginally_trapped, Some(true));
}

#[test]
fn lightcone_metric_is_degenerate() {
    let r = report("lightcone", &[("m", 2.0), ("s", 0.0)], &[1.0, 0.0]);
    let g = metric_entries(&r);
    for (x, y) in g.iter().zip([0.0, 0.0, 0.0, 1.0]) {
        assert!((x - y).abs() <= 1e-14);
    }
    assert_eq!(r.metric_signature, Signature::new(0, 1, 1));
    assert!(r.flags.totally_umbilical && !r.flags.totally_geodesic);
    assert!(r.h_class.is_some());
    assert!(r.mean.is_none());
}

#[test]
fn plane_metric_is_constant_and_geodesic() {
    let c = chart("plane", &[("s", 1.0), ("t", 1.0), ("r", 1.0)]);
    for r in reports(&c, 8, 3) {
        assert_eq!(metric_entries(&r), vec![-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(r.flags.totally_geodesic);
        assert_eq!(r.radical_rank, 1);
    }
}

#[test]
fn main1_3_half_radius() {
    // image is x -> (r x, sqrt(1 - r^2)) on the unit sphere: <H, H> = 1/r^2 - 1 = 3
    let c = chart("main1-3", &[("m", 2.0), ("s", 0.0), ("r", 0.5)]);
    for r in reports(&c, 16, 5) {
        assert!((r.h_norm().unwrap() - 3.0).abs() <= 1e-9);
        assert!(r.flags.totally_umbilical && !r.flags.minimal);
        assert_eq!(r.first_normal.as_ref().unwrap().dim, 1);
    }
    let red = reduction_report(&images(&c, 16, 5), c.ambient(), 1e-8, 1e-7).unwrap();
    assert_eq!(red.hull_dim, 3);
    assert_eq!(red.direction_signature, Signature::new(0, 3, 0));
    assert_eq!(red.translation_class, TranslationClass::Spacelike);
    assert!((red.rho.unwrap() - 0.75_f64.sqrt()).abs() <= 1e-10);
}

#[test]
fn finite_difference_pipeline_reproduces_h_norm() {
    // independent of the jets: second derivatives from central differences
    let c = chart("main1-3", &[("m", 2.0), ("s", 0.0), ("r", 0.5)]);
    let d = PointDerivatives::finite_difference(&c, &[0.1, -0.2], 1e-4).unwrap();
    let r = analyze_derivatives(&d, &Tolerances::default()).unwrap();
    assert!((r.h_norm().unwrap() - 3.0).abs() <= 1e-5);
}

#[test]
fn main1_7_has_h_norm_minus_one() {
    let c = chart("main1-7", &[("m", 2.0), ("s", 0.0)]);
    for r in reports(&c, 16, 7) {
        assert!((r.h_norm().unwrap() + 1.0).abs() <= 1e-9);
    }
}

#[test]
fn translation_classes_of_the_geodesic_and_null_families() {
    let c = chart("main1-5", &[("m", 2.0), ("s", 0.0)]);
    let red = reduction_report(&images(&c, 16, 9), c.ambient(), 1e-8, 1e-7).unwrap();
    assert_eq!(red.hull_dim, 3);
    assert_eq!(red.translation_class, TranslationClass::Lightlike);
    // the offset is a multiple of (1, 0, ..., 0, 1)
    let v = &red.offset;
    assert!((v[0] - v[v.len() - 1]).abs() <= 1e-10 && v[0].abs() > 1e-3);
    assert!(v.rows(1, v.len() - 2).amax() <= 1e-10);

    let c = chart("main1-1", &[("m", 2.0), ("s", 0.0)]);
    let red = reduction_report(&images(&c, 16, 9), c.ambient(), 1e-8, 1e-7).unwrap();
    assert_eq!(red.translation_class, TranslationClass::Linear);
}

#[test]
fn fullness_examples() {
    let c = chart("main1-5", &[("m", 2.0), ("s", 0.0)]);
    assert!(fullness_test(&images(&c, 16, 1), c.ambient(), 1e-8).unwrap());

    let c = chart("light1-5", &[("m", 2.0), ("s", 0.0)]);
    assert!(fullness_test(&images(&c, 16, 1), c.ambient(), 1e-8).unwrap());

    let inner = chart("main1-3", &[("m", 2.0), ("s", 0.0), ("r", 0.5)]);
    let mut coords: Vec<Expr> = (0..4).map(Expr::var).collect();
    coords.push(Expr::c(0.0));
    let lift = ImmersionChart::new(coords, 4, AmbientSpace::sphere(4, 0), vec![[-1.0, 1.0]; 4]).unwrap();
    let c = compose(&lift, &inner).unwrap();
    assert!(!fullness_test(&images(&c, 16, 1), c.ambient(), 1e-8).unwrap());
}

#[test]
fn clifford_torus_is_not_umbilical() {
    let c = chart("clifford-control", &[]);
    for r in reports(&c, 16, 11) {
        assert!(!r.flags.totally_umbilical);
        assert!(r.residuals.umbilicity > 1e-2);
        assert!(r.flags.minimal);
    }
}

#[test]
fn cubic_graph_is_not_parallel() {
    let c = chart("cubic-graph-control", &[]);
    let r = analyze_point(&c, &[0.3, 0.1], JetOrder::Three, &Tolerances::default()).unwrap();
    assert_eq!(r.flags.parallel, Some(false));
    assert!(r.residuals.parallel.unwrap() >= 1e-2);
}

#[test]
fn flat_parallel_surface() {
    let c = chart("cv-parallel", &[("a", 1.0)]);
    for r in reports(&c, 16, 13) {
        assert!(r.residuals.parallel.unwrap() <= 1e-8);
        assert!(!r.flags.totally_umbilical);
    }
}

#[test]
fn order_two_skips_parallelism() {
    let c = chart("cv-parallel", &[("a", 1.0)]);
    let r = analyze_point(&c, &[0.1, 0.2], JetOrder::Two, &Tolerances::default()).unwrap();
    assert_eq!(r.flags.parallel, None);
}

#[test]
fn flat_u_has_a_null_first_normal_space() {
    let c = chart("akk-4", &[("m", 2.0), ("s", 0.0)]);
    for r in reports(&c, 8, 17) {
        let n1 = r.first_normal.as_ref().unwrap();
        assert_eq!(n1.dim, 1);
        let b = &n1.basis[0];
        assert!(inner_product(b, b, c.ambient().embedding()).unwrap().abs() <= 1e-9);
        assert_eq!(r.flags.marginally_trapped, Some(true));
    }
}

#[test]
fn lightlike_items() {
    let r = report("light1-4", &[("m", 2.0), ("s", 0.0), ("r", 1.0)], &[0.1, 0.2]);
    assert!(r.flags.totally_umbilical && !r.flags.totally_geodesic);

    let c = chart("light1-6", &[("m", 3.0), ("s", 0.0)]);
    for r in reports(&c, 8, 19) {
        assert_eq!(r.radical.len(), 2);
        assert!(r.flags.totally_umbilical && !r.flags.totally_geodesic);
    }
}

#[test]
fn s_example_radical_has_rank_one() {
    // -|u|^2 + |v|^2 on the x-block vanishes only along t
    let c = chart("S-example", &[("m", 1.0), ("s", 0.0)]);
    for r in reports(&c, 8, 23) {
        assert_eq!(r.radical_rank, 1);
        assert!(r.flags.totally_umbilical);
    }
}

#[test]
fn induced_metric_matches_gram_of_jets() {
    let c = chart("main2-4", &[("m", 2.0), ("s", 0.0), ("r", 2.0)]);
    let d = PointDerivatives::at(&c, &[0.1, 0.1], JetOrder::Two).unwrap();
    let g = induced_metric(&d).unwrap();
    let sig = c.ambient().embedding();
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(g.get(i, j), inner_product(&d.d1[i], &d.d1[j], sig).unwrap());
        }
    }
}
