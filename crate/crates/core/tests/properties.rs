use fgverify_core::ambient::{christoffel_central_difference, christoffel_symbols, random_metric};
use fgverify_core::expr::{coordinate_jets, parse, Expr};
use fgverify_core::linalg::{gram_schmidt, orthonormality_defect, project};
use fgverify_core::warp::{product_config, rotation_config, Restriction};
use fgverify_core::{BilinearForm, CoordVector};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![(-3.0f64..3.0).prop_map(|c| format!("{c:.3}")), Just("x".to_string()), Just("y".to_string()),]
}

/// Expressions that stay finite on `[-1, 1]^2`.
fn expr_source() -> impl Strategy<Value = String> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), 1i64..4).prop_map(|(a, k)| format!("({a})^{k}")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("exp(0.1*({a}))")),
            inner.clone().prop_map(|a| format!("1/(2 + sin({a}))")),
            inner.prop_map(|a| format!("sqrt(1.5 + cos({a}))")),
        ]
    })
}

fn bound(src: &str) -> fgverify_core::expr::BoundExpr {
    parse(src).unwrap().bind(&["x", "y"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printing_round_trips(src in expr_source()) {
        let e: Expr = parse(&src).unwrap();
        let printed = e.to_string();
        let again = parse(&printed).unwrap();
        prop_assert_eq!(again.to_string(), printed);
        let (a, b) = (e.bind(&["x", "y"]).unwrap(), again.bind(&["x", "y"]).unwrap());
        let p = [0.3, -0.7];
        prop_assert_eq!(a.eval(&p).unwrap().to_bits(), b.eval(&p).unwrap().to_bits());
    }

    #[test]
    fn jet_value_matches_plain_evaluation(src in expr_source(), x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let e = bound(&src);
        let v = e.eval(&[x, y]).unwrap();
        let j = e.eval_jet(&coordinate_jets(&[x, y])).unwrap();
        prop_assert!((j.value() - v).abs() <= 1e-12 * v.abs().max(1.0));
    }

    #[test]
    fn jet_derivatives_match_finite_differences(src in expr_source(), x in -0.9f64..0.9, y in -0.9f64..0.9) {
        let e = bound(&src);
        let j = e.eval_jet(&coordinate_jets(&[x, y])).unwrap();
        let h = 1e-4;
        let f = |a: f64, b: f64| e.eval(&[a, b]).unwrap();
        let fd = [(f(x + h, y) - f(x - h, y)) / (2.0 * h), (f(x, y + h) - f(x, y - h)) / (2.0 * h)];
        for (i, fdi) in fd.iter().enumerate() {
            let scale = j.d(i).abs().max(1.0);
            prop_assert!((j.d(i) - fdi).abs() < 1e-5 * scale * (1.0 + j.value().abs()), "d{} {} vs {}", i, j.d(i), fdi);
        }
        let fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
        prop_assert!((j.dd(0, 1) - fxy).abs() < 1e-3 * (1.0 + j.dd(0, 1).abs() + j.value().abs()));
        prop_assert_eq!(j.dd(0, 1).to_bits(), j.dd(1, 0).to_bits());
    }

    #[test]
    fn gram_schmidt_is_orthonormal_and_projection_idempotent(
        seed in proptest::collection::vec(-1.0f64..1.0, 9),
        v in proptest::collection::vec(-2.0f64..2.0, 3),
    ) {
        let m = BilinearForm::new(3, vec![2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.0]).unwrap();
        let vecs: Vec<CoordVector> = seed.chunks(3).map(|c| CoordVector::new(c.to_vec())).collect();
        if let Ok(frame) = gram_schmidt(&vecs[..2], &m) {
            prop_assert!(orthonormality_defect(&frame, &m) < 1e-9);
            let v = CoordVector::new(v);
            let p = project(&v, &frame, &m).unwrap();
            let pp = project(&p, &frame, &m).unwrap();
            prop_assert!(p.sub(&pp).max_abs() < 1e-9 * v.max_abs().max(1.0));
        }
    }

    #[test]
    fn restricted_gradients_are_bounded_by_the_full_one(seed in 0u64..1000, s in 1usize..3) {
        let cfgs = [rotation_config(s, 0.9, 1.5).unwrap(), product_config(s, 0.9, 1.1).unwrap()];
        for c in &cfgs {
            let p = fgverify_core::sample::sample_box(&c.immersion.domain.bounds, 1, seed).remove(0);
            let geo = c.immersion.geometry(&p).unwrap();
            let full = c.grad_ln_f(&geo, Restriction::Full).unwrap().norm_squared;
            let a = c.grad_ln_f(&geo, Restriction::Perp).unwrap().norm_squared;
            let b = c.grad_ln_f(&geo, Restriction::Theta).unwrap().norm_squared;
            prop_assert!(a + b <= full + 1e-9);
        }
    }
}

#[test]
fn christoffel_symbols_match_central_differences() {
    for seed in 0..10u64 {
        let n = 3 + (seed as usize % 2);
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let g: Vec<_> = random_metric(seed, n).iter().map(|s| parse(s).unwrap().bind(&refs).unwrap()).collect();
        let values = |p: &[f64]| g.iter().map(|e| e.eval(p)).collect::<fgverify_core::Result<Vec<f64>>>();
        for p in fgverify_core::sample::sample_box(&vec![(-1.0, 1.0); n], 5, seed) {
            let jets: Vec<_> = g.iter().map(|e| e.eval_jet(&coordinate_jets(&p)).unwrap()).collect();
            let exact = christoffel_symbols(&jets, n).unwrap().gamma;
            let fd = christoffel_central_difference(values, &p, 1e-4).unwrap();
            let scale = exact.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-12);
            let err = exact.iter().zip(&fd).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err / scale < 1e-5, "seed {seed}: relative error {}", err / scale);
        }
    }
}
