use proptest::prelude::*;
use umbilic_core::ambient::AmbientSpace;
use umbilic_core::jets::{compose, fd_oracle, richardson_check, Expr, ImmersionChart, JetOrder};

/// Smooth expressions in `vars` variables, defined everywhere.
fn expr(vars: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0..vars).prop_map(Expr::var), (-2.0..2.0_f64).prop_map(Expr::c)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / (b.square() + 1.0)),
            inner.clone().prop_map(|a| (a.square() + 0.5).sqrt()),
            inner.clone().prop_map(Expr::sin),
            inner.clone().prop_map(Expr::cos),
            inner.clone().prop_map(|a| (a * 0.3).sinh()),
            inner.prop_map(|a| (a * 0.3).cosh()),
        ]
    })
}

fn chart(coords: Vec<Expr>, vars: usize) -> ImmersionChart {
    let n = coords.len();
    ImmersionChart::new(coords, vars, AmbientSpace::flat(n, 0), vec![[-0.5, 0.5]; vars]).unwrap()
}

fn point(vars: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.5..0.5_f64, vars)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_obeys_the_chain_rule(
        inner in prop::collection::vec(expr(2), 3),
        outer in prop::collection::vec(expr(3), 2),
        p in point(2),
    ) {
        let inner = chart(inner, 2);
        let outer = chart(outer, 3);
        let composite = compose(&outer, &inner).unwrap();
        let literal = composite.flatten().unwrap();
        let a = composite.jets(&p, JetOrder::Three).unwrap();
        let b = literal.jets(&p, JetOrder::Three).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let scale = 1.0 + y.value().abs();
            prop_assert!((x.value() - y.value()).abs() <= 1e-10 * scale);
            for i in 0..2 {
                prop_assert!((x.grad(i) - y.grad(i)).abs() <= 1e-10 * (1.0 + y.grad(i).abs()));
                for j in 0..2 {
                    prop_assert!((x.hess(i, j) - y.hess(i, j)).abs() <= 1e-10 * (1.0 + y.hess(i, j).abs()));
                    for k in 0..2 {
                        let (t, u) = (x.third(i, j, k).unwrap(), y.third(i, j, k).unwrap());
                        prop_assert!((t - u).abs() <= 1e-10 * (1.0 + u.abs()));
                    }
                }
            }
        }
    }

    #[test]
    fn derivative_tables_are_exactly_symmetric(e in expr(3), p in point(3)) {
        let jets = chart(vec![e], 3).jets(&p, JetOrder::Three).unwrap();
        let j = &jets[0];
        for a in 0..3 {
            for b in 0..3 {
                prop_assert_eq!(j.hess(a, b).to_bits(), j.hess(b, a).to_bits());
                for c in 0..3 {
                    let t = j.third(a, b, c).unwrap().to_bits();
                    for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        prop_assert_eq!(t, j.third(x, y, z).unwrap().to_bits());
                    }
                }
            }
        }
    }

    #[test]
    fn finite_differences_agree_with_jets(e in expr(2), p in point(2)) {
        let c = chart(vec![e], 2);
        let exact = c.jets(&p, JetOrder::Three).unwrap();
        let approx = fd_oracle(&c, &p, 1e-4).unwrap();
        let scale = 1.0 + (0..2).map(|i| exact[0].grad(i).abs()).fold(0.0, f64::max)
            + (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| exact[0].hess(i, j).abs()).fold(0.0, f64::max);
        for i in 0..2 {
            prop_assert!((exact[0].grad(i) - approx[0].grad(i)).abs() <= 1e-5 * scale);
            for j in 0..2 {
                prop_assert!((exact[0].hess(i, j) - approx[0].hess(i, j)).abs() <= 1e-5 * scale);
            }
        }
    }
}

#[test]
fn richardson_ratios_on_a_transcendental_chart() {
    let e = Expr::sin(Expr::var(0)) * Expr::cosh(Expr::var(1)) + (Expr::var(0).square() + Expr::var(1).square() + 1.0).sqrt();
    let c = chart(vec![e.clone(), Expr::cos(Expr::var(0) * Expr::var(1))], 2);
    for p in [[0.1, 0.2], [-0.3, 0.25], [0.4, -0.4]] {
        let r = richardson_check(&c, &p, 1e-2).unwrap();
        assert!(r.ratios_ok(), "{:?}", r.ratios);
    }
}
