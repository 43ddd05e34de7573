use proptest::prelude::*;
use umbilic_core::analysis::{analyze_chart, reduction_report, Tolerances};
use umbilic_core::bilinear::random_isometry;
use umbilic_core::catalog::{self, Params};
use umbilic_core::congruence::{classify_family, congruence_test, moduli_demo, ClassifierInput, ModuliClass};
use umbilic_core::jets::{compose, ImmersionChart, JetOrder};
use umbilic_core::{sampling, Signature, Vector};

fn psi(a: f64, points: &[Vec<f64>]) -> Vec<Vector> {
    let p: Params = [("m", 2.0), ("s", 0.0), ("a", a), ("eps", 1.0)].iter().map(|(k, v)| ((*k).into(), *v)).collect();
    sampling::images(&catalog::instantiate("psi-a", &p).unwrap(), points).unwrap()
}

fn psi_points(n: usize, seed: u64) -> (Vec<Vec<f64>>, Signature) {
    let p: Params = [("m", 2.0), ("s", 0.0), ("a", 0.0), ("eps", 1.0)].iter().map(|(k, v)| ((*k).into(), *v)).collect();
    let c = catalog::instantiate("psi-a", &p).unwrap();
    (sampling::sample_points(&c, n, &mut sampling::rng(seed)), c.ambient().embedding())
}

fn input(eps: i8, minimal: bool, h_norm: f64) -> ClassifierInput {
    ClassifierInput { epsilon: eps, minimal, h_norm, normal_signature: None }
}

#[test]
fn kernel_clause_separates_psi_one_from_psi_zero() {
    let (pts, sig) = psi_points(16, 42);
    let v = congruence_test(&psi(1.0, &pts), &psi(0.0, &pts), sig, &Tolerances::default()).unwrap();
    assert!(v.gram_residual <= 1e-12);
    assert!(v.gram_match, "a Gram-only test would call these congruent");
    assert!(!v.kernel_match && !v.congruent && !v.indeterminate);
    assert_eq!((v.rank_a, v.rank_b), (4, 3));
}

#[test]
fn nonzero_members_are_congruent() {
    let (pts, sig) = psi_points(16, 1);
    let tol = Tolerances::default();
    for (a, b) in [(1.0, 2.0), (0.5, -3.0), (1e-3, 1.0)] {
        assert!(congruence_test(&psi(a, &pts), &psi(b, &pts), sig, &tol).unwrap().congruent);
    }
    let set = psi(0.0, &pts);
    assert!(congruence_test(&set, &set, sig, &tol).unwrap().congruent);
}

#[test]
fn mismatched_counts_are_rejected() {
    let (pts, sig) = psi_points(4, 1);
    let a = psi(1.0, &pts);
    assert!(congruence_test(&a, &a[..3], sig, &Tolerances::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn congruence_is_an_equivalence_on_the_family(
        a in prop::sample::select(vec![0.0, 1e-3, 0.5, 1.0, -2.0]),
        b in prop::sample::select(vec![0.0, 1e-2, 0.7, -1.0]),
        c in prop::sample::select(vec![0.0, 0.3, 3.0]),
        seed in 0u64..100,
    ) {
        let (pts, sig) = psi_points(12, seed);
        let tol = Tolerances::default();
        let (x, y, z) = (psi(a, &pts), psi(b, &pts), psi(c, &pts));
        let rel = |p: &[Vector], q: &[Vector]| congruence_test(p, q, sig, &tol).unwrap().congruent;
        prop_assert!(rel(&x, &x));
        prop_assert_eq!(rel(&x, &y), rel(&y, &x));
        if rel(&x, &y) && rel(&y, &z) {
            prop_assert!(rel(&x, &z));
        }
        prop_assert_eq!(rel(&x, &y), (a == 0.0) == (b == 0.0));
    }

    #[test]
    fn isometric_copies_are_congruent(seed in 0u64..1000) {
        let (pts, sig) = psi_points(12, seed);
        let l = random_isometry(sig, &mut sampling::rng(seed));
        let x = psi(0.8, &pts);
        let y: Vec<Vector> = x.iter().map(|v| &l * v).collect();
        let v = congruence_test(&x, &y, sig, &Tolerances::default()).unwrap();
        prop_assert!(v.congruent, "{v:?}");
    }
}

#[test]
fn moduli_pattern() {
    let tol = Tolerances::default();
    let a = [0.0, 1e-3, 1e-2, 1e-1, 1.0];
    let demo = moduli_demo(&a, 2, 0, 16, 42, &tol).unwrap();
    let classes: Vec<ModuliClass> = demo.rows.iter().map(|r| r.class).collect();
    assert_eq!(classes, [ModuliClass::G, ModuliClass::U, ModuliClass::U, ModuliClass::U, ModuliClass::U]);
    for r in &demo.rows {
        assert!((r.distance - r.a * 2.0_f64.sqrt()).abs() <= 1e-12);
    }
    assert!(demo.demonstrated());

    let single = moduli_demo(&[0.0], 2, 0, 16, 42, &tol).unwrap();
    assert_eq!(single.rows.len(), 1);
    assert_eq!(single.rows[0].class, ModuliClass::G);
    assert!(!single.demonstrated());

    let pair = moduli_demo(&[1.0, 2.0], 2, 0, 16, 42, &tol).unwrap();
    assert!(pair.pairwise[0][1]);
}

#[test]
fn classifier_examples() {
    let r = classify_family(&input(1, false, 3.0), 1e-7).unwrap();
    assert_eq!(r.family, Some("main1-3"));
    assert!((r.r.unwrap() - 0.5).abs() <= 1e-12);
    assert_eq!(classify_family(&input(1, false, 0.0), 1e-7).unwrap().family, Some("main1-5"));
    assert_eq!(classify_family(&input(-1, false, 1.0), 1e-7).unwrap().family, Some("main2-7"));
    assert_eq!(classify_family(&input(1, false, -1.0), 1e-7).unwrap().family, Some("main1-7"));
    assert_eq!(classify_family(&input(0, true, 0.0), 1e-7).unwrap().family, Some("akk-1"));
    let r = classify_family(&input(0, false, 4.0), 1e-7).unwrap();
    assert_eq!(r.family, Some("akk-2"));
    assert!((r.r.unwrap() - 0.5).abs() <= 1e-12);
}

#[test]
fn classifier_splits_geodesic_cases_by_normal_signature() {
    let mut i = input(1, true, 0.0);
    i.normal_signature = Some(Signature::new(0, 1, 0));
    assert_eq!(classify_family(&i, 1e-7).unwrap().family, Some("main1-1"));
    i.normal_signature = Some(Signature::new(1, 0, 0));
    assert_eq!(classify_family(&i, 1e-7).unwrap().family, Some("main1-2"));
    i.normal_signature = None;
    assert!(classify_family(&i, 1e-7).unwrap().is_ambiguous());
}

#[test]
fn values_near_a_boundary_are_ambiguous() {
    // between tol and the ambiguity band of H_norm = -1
    let r = classify_family(&input(1, false, -1.0 - 5e-7), 1e-7).unwrap();
    assert!(r.is_ambiguous());
    assert!(r.candidates.contains(&"main1-7") && r.candidates.contains(&"main1-6"));
    // clear offsets classify cleanly
    assert_eq!(classify_family(&input(1, false, -1.0 - 1e-3), 1e-7).unwrap().family, Some("main1-6"));
}

fn classify_chart(c: &ImmersionChart, seed: u64) -> (Option<&'static str>, Option<f64>) {
    let tol = Tolerances::default();
    let n = 2 * c.ambient().coords();
    let pts = sampling::sample_points(c, n.max(8), &mut sampling::rng(seed));
    let reports = analyze_chart(c, &pts[..8], JetOrder::Two, &tol).unwrap();
    let red = reduction_report(&sampling::images(c, &pts).unwrap(), c.ambient(), tol.zero, tol.pass).unwrap();
    let input = ClassifierInput::from_reports(c.ambient().epsilon(), &reports, Some(&red)).unwrap();
    let out = classify_family(&input, tol.pass).unwrap();
    (out.family, out.r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classification_round_trips(index in 0usize..100, seed in 0u64..10_000) {
        let families: Vec<_> = catalog::families().iter().filter(|f| f.is_classifiable()).collect();
        let f = families[index % families.len()];
        let p = f.draw(&mut sampling::rng(seed));
        let c = f.instantiate(&p).unwrap();
        let (family, r) = classify_chart(&c, seed);
        prop_assert_eq!(family, Some(f.id));
        if let Some(&r_true) = p.get("r") {
            prop_assert!((r.unwrap() - r_true).abs() <= 1e-6);
        }

        // and again after an ambient isometry
        let l = random_isometry(c.ambient().embedding(), &mut sampling::rng(seed ^ 1));
        let moved = compose(&ImmersionChart::linear(&l, c.ambient()).unwrap(), &c).unwrap();
        prop_assert_eq!(classify_chart(&moved, seed).0, Some(f.id));
    }
}
