use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use spap_core::basis::{build_matrix, sample_arcsine};
use spap_core::solver::{solve, solve_bpdn, solve_weighted_bpdn, Algorithm};
use spap_core::{BasisSpec, ConstrainedL1Problem, SolverOptions};

#[derive(Debug, Clone)]
struct Instance {
    a: DMatrix<f64>,
    c: Vec<f64>,
    y: DVector<f64>,
    eps: f64,
}

/// Chebyshev sampling matrix, sparse reference vector and noisy data with
/// `||A c - y|| <= eps`.
fn instance() -> impl Strategy<Value = Instance> {
    (
        any::<u64>(),
        8usize..40,
        1usize..4,
        1usize..8,
        0.0f64..1e-2,
        1.0f64..2.0,
        any::<u64>(),
    )
        .prop_flat_map(|(seed, m, ratio, s, noise, slack, noise_seed)| {
            let n = m * ratio + 1;
            let s = s.min(n);
            (
                Just((seed, m, n, noise, slack, noise_seed)),
                prop::collection::vec((0..n, -2.0f64..2.0), s),
            )
        })
        .prop_map(|((seed, m, n, noise, slack, noise_seed), entries)| {
            let pts = sample_arcsine(seed, m);
            let a = build_matrix(&pts, BasisSpec::new(n - 1)).unwrap();
            let mut c = vec![0.0; n];
            for (j, v) in entries {
                c[j] = v;
            }
            let clean = &a * DVector::from_column_slice(&c);
            let e = DVector::from_vec(sample_arcsine(noise_seed, m));
            let e = if e.norm() > 0.0 {
                e.normalize() * noise
            } else {
                e
            };
            let y = clean + e;
            let eps = ((&a * DVector::from_column_slice(&c)) - &y).norm() * slack;
            Instance { a, c, y, eps }
        })
}

fn l1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

fn opts(algorithm: Algorithm) -> SolverOptions {
    SolverOptions {
        algorithm,
        ..SolverOptions::default()
    }
}

#[test]
fn exact_sparse_recovery_example() {
    let n = 201;
    let m = 120;
    let pts = sample_arcsine(2024, m);
    let a = build_matrix(&pts, BasisSpec::new(n - 1)).unwrap();
    let mut c = vec![0.0; n];
    for (i, j) in [3usize, 17, 40, 41, 88, 120, 151, 199]
        .into_iter()
        .enumerate()
    {
        c[j] = if i % 2 == 0 { 1.0 } else { -1.0 };
    }
    let y = &a * DVector::from_column_slice(&c);
    let p = ConstrainedL1Problem::new(a, y, 0.0, None).unwrap();
    let r = solve_bpdn(&p, &SolverOptions::default()).unwrap();
    let err =
        r.z.iter()
            .zip(&c)
            .map(|(u, v)| (u - v).powi(2))
            .sum::<f64>()
            .sqrt();
    assert!(err <= 1e-6, "recovery error {err}");
    assert!(r.converged);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn feasible_and_near_optimal(inst in instance()) {
        let p = ConstrainedL1Problem::new(inst.a.clone(), inst.y.clone(), inst.eps, None).unwrap();
        let r = solve_bpdn(&p, &SolverOptions::default()).unwrap();
        prop_assert!(r.converged, "gap {}", r.relative_gap());
        prop_assert!(r.residual_l2 <= inst.eps * (1.0 + 1e-6) + 1e-9, "{} > {}", r.residual_l2, inst.eps);
        prop_assert!((r.objective - l1(&r.z)).abs() <= 1e-12 * r.objective.max(1e-300));
        prop_assert!(r.objective <= l1(&inst.c) * (1.0 + 1e-6) + 1e-9);
        prop_assert!(r.dual_objective <= l1(&inst.c) * (1.0 + 1e-9) + 1e-9);
    }

    #[test]
    fn positively_homogeneous(inst in instance(), log_alpha in -3.0f64..3.0) {
        prop_assume!(inst.eps >= 1e-6 * inst.y.norm());
        let alpha = 10f64.powf(log_alpha);
        let o = SolverOptions::default();
        let base = solve_bpdn(&ConstrainedL1Problem::new(inst.a.clone(), inst.y.clone(), inst.eps, None).unwrap(), &o).unwrap();
        let scaled = solve_bpdn(
            &ConstrainedL1Problem::new(inst.a.clone(), &inst.y * alpha, inst.eps * alpha, None).unwrap(),
            &o,
        )
        .unwrap();
        let rel = |u: f64, v: f64| (u - v).abs() / u.abs().max(v.abs()).max(1e-300);
        prop_assert!(rel(scaled.objective, alpha * base.objective) <= 1e-7, "{} vs {}", scaled.objective, alpha * base.objective);
        prop_assert!(rel(scaled.residual_l2, alpha * base.residual_l2) <= 1e-7);
    }

    #[test]
    fn homotopy_agrees_with_admm(inst in instance()) {
        prop_assume!(inst.eps > 0.0);
        let p = ConstrainedL1Problem::new(inst.a.clone(), inst.y.clone(), inst.eps, None).unwrap();
        let h = solve(&p, &opts(Algorithm::Homotopy)).unwrap();
        let d = solve(&p, &opts(Algorithm::Admm)).unwrap();
        prop_assert!(h.converged);
        if d.converged {
            prop_assert!(d.residual_l2 <= inst.eps * (1.0 + 1e-6) + 1e-9);
            let rel = (h.objective - d.objective).abs() / h.objective.max(1e-300);
            prop_assert!(rel <= 1e-6, "homotopy {} admm {}", h.objective, d.objective);
        }
    }

    #[test]
    fn unit_weights_match_unweighted(inst in instance()) {
        let n = inst.a.ncols();
        let plain = solve_bpdn(&ConstrainedL1Problem::new(inst.a.clone(), inst.y.clone(), inst.eps, None).unwrap(), &SolverOptions::default()).unwrap();
        let weighted = solve_weighted_bpdn(
            &ConstrainedL1Problem::new(inst.a.clone(), inst.y.clone(), inst.eps, Some(vec![1.0; n])).unwrap(),
            &SolverOptions::default(),
        )
        .unwrap();
        prop_assert!((plain.objective - weighted.objective).abs() <= 1e-9);
    }

    #[test]
    fn weighted_is_feasible_and_near_optimal(inst in instance(), growth in 0.0f64..1.0) {
        let n = inst.a.ncols();
        let w: Vec<f64> = (1..=n).map(|i| (i as f64).powf(growth)).collect();
        let p = ConstrainedL1Problem::new(inst.a.clone(), inst.y.clone(), inst.eps, Some(w.clone())).unwrap();
        let r = solve_weighted_bpdn(&p, &SolverOptions::default()).unwrap();
        prop_assert!(r.converged, "gap {}", r.relative_gap());
        prop_assert!(r.residual_l2 <= inst.eps * (1.0 + 1e-6) + 1e-9);
        let wref: f64 = inst.c.iter().zip(&w).map(|(c, w)| w * c.abs()).sum();
        prop_assert!(r.objective <= wref * (1.0 + 1e-6) + 1e-9);
    }
}
