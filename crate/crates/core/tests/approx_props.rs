use proptest::prelude::*;
use spap_core::basis::{clenshaw, gauss_chebyshev};
use spap_core::best_approx::{estimate_en, l2_projection, remez, RemezOptions};
use spap_core::{EnMethod, FunctionExpr, GridSpec, RealFunction};

fn quad_l2_sq<F: RealFunction>(f: &F, coeffs: &[f64], m: usize) -> f64 {
    let rule = gauss_chebyshev(m);
    rule.nodes
        .iter()
        .map(|&x| {
            let r = f.eval(x).unwrap() - clenshaw(coeffs, x);
            r * r
        })
        .sum::<f64>()
        * rule.weight
}

fn check_equioscillation<F: RealFunction>(f: &F, n: usize) -> Result<f64, TestCaseError> {
    let r = remez(f, n, RemezOptions::default()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let e = r.e_uniform.unwrap();
    if let Some(ext) = &r.extrema {
        prop_assert_eq!(ext.len(), n + 2);
        for w in ext.windows(2) {
            prop_assert!(w[0].0 < w[1].0);
            prop_assert!(w[0].1 * w[1].1 < 0.0, "signs do not alternate: {:?}", ext);
        }
        for &(_, err) in ext {
            prop_assert!((err.abs() - e).abs() <= 1e-8 * e, "|{}| vs E={}", err, e);
        }
    } else {
        prop_assert!(e <= 1e-12);
    }
    Ok(e)
}

#[test]
fn builtin_equioscillation() {
    let runge = FunctionExpr::builtin("runge").unwrap();
    let exp = FunctionExpr::parse("exp(x)").unwrap();
    for n in [5, 10, 20] {
        check_equioscillation(&runge, n).unwrap();
    }
    check_equioscillation(&exp, 5).unwrap();
}

#[test]
fn best_errors_are_monotone_above_roundoff() {
    let fns = ["runge", "sqrt105", "exp(x)", "1/(2-x)"];
    let grid = GridSpec::default();
    for name in fns {
        let f = FunctionExpr::resolve(name).unwrap();
        let mut prev = f64::INFINITY;
        for n in 1..=120 {
            let e = estimate_en(&f, n, EnMethod::ChebTail, &grid).unwrap();
            assert!(e <= prev + 1e-14, "{name}: n={n} {e} > {prev}");
            prev = e;
        }
        let mut prev = f64::INFINITY;
        for n in 1..=12 {
            let e = estimate_en(&f, n, EnMethod::Remez, &grid).unwrap();
            assert!(e <= prev + 1e-14, "{name}: remez n={n} {e} > {prev}");
            prev = e;
        }
    }
}

fn smooth_function() -> impl Strategy<Value = (String, FunctionExpr)> {
    prop_oneof![
        (0.2f64..3.0).prop_map(|a| format!("exp({a}*x)")),
        (0.5f64..4.0).prop_map(|b| format!("sin({b}*x) + x^2")),
        (1.5f64..4.0).prop_map(|c| format!("1/({c} - x)")),
        (1.0f64..10.0).prop_map(|k| format!("1/(1 + {k}*x^2)")),
        (1.1f64..3.0).prop_map(|c| format!("sqrt({c} + x)")),
    ]
    .prop_map(|s| {
        let f = FunctionExpr::parse(&s).unwrap();
        (s, f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn remez_equioscillates((_, f) in smooth_function(), n in 1usize..=8) {
        let e = remez(&f, n, RemezOptions::default()).unwrap().e_uniform.unwrap();
        prop_assume!(e >= 1e-6);
        check_equioscillation(&f, n)?;
    }

    #[test]
    fn remez_sandwich((src, f) in smooth_function(), n in 1usize..=12) {
        let grid = GridSpec::default();
        let e = estimate_en(&f, n, EnMethod::Remez, &grid).unwrap();
        prop_assume!(e >= 1e-11);
        let t = estimate_en(&f, n, EnMethod::ChebTail, &grid).unwrap();
        prop_assert!(e <= t && t <= 4.0 * e, "{}: n={} remez {} cheb_tail {}", src, n, e, t);
    }

    #[test]
    fn projection_is_idempotent((_, f) in smooth_function(), n in 0usize..60) {
        let grid = GridSpec::uniform(2001).unwrap();
        let p = l2_projection(&f, n, None, &grid).unwrap().coeffs;
        let q = l2_projection(&p, n, None, &grid).unwrap().coeffs;
        for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
            prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
        }
    }

    #[test]
    fn projection_minimizes_quadrature_error(
        (_, f) in smooth_function(),
        n in 0usize..30,
        perturb in prop::collection::vec(-1.0f64..1.0, 30),
        scale in 1e-6f64..1.0,
    ) {
        let grid = GridSpec::uniform(101).unwrap();
        let m = 4 * (n + 1);
        let best = l2_projection(&f, n, None, &grid).unwrap();
        let opt = best.coeffs.coeffs().to_vec();
        let other: Vec<f64> = opt.iter().zip(&perturb).map(|(c, d)| c + scale * d).collect();
        let e_opt = quad_l2_sq(&f, &opt, m);
        let e_other = quad_l2_sq(&f, &other, m);
        prop_assert!(e_other >= e_opt - 1e-10);
        prop_assert!((best.t_l2.unwrap().powi(2) - e_opt).abs() <= 1e-12 + 1e-9 * e_opt);
    }
}
