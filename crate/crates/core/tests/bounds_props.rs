use proptest::prelude::*;
use spap_core::bounds::{
    degree_for_budget, derivative_jackson, l2_recovery_bound, lipschitz_jackson,
    sample_count_bound, smooth_jackson, uniform_recovery_bound, weighted_recovery_bound,
    BoundParams, Constants, Smoothness,
};

fn params() -> impl Strategy<Value = BoundParams> {
    (
        -5.0f64..0.0,
        0.1f64..5.0,
        0.5f64..3.0,
        0.0f64..1e6,
        1.0f64..200.0,
        1usize..2000,
        0.05f64..0.95,
        prop::collection::vec(0.1f64..10.0, 8),
    )
        .prop_map(|(a, width, k, theta, s, n, q, c)| BoundParams {
            a,
            b: a + width,
            k,
            theta,
            s,
            n,
            q,
            constants: Constants {
                c: c[0],
                c1: c[1],
                c2: c[2],
                d1: c[3],
                d2: c[4],
                f2: c[5],
                g2: c[6],
                cp: c[7],
            },
        })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
}

/// `g(t x) - g(0) == t (g(x) - g(0))` up to rounding of the three values.
fn linear(g0: f64, g1: f64, gt: f64, t: f64) -> bool {
    ((gt - g0) - t * (g1 - g0)).abs() <= 1e-12 * (gt.abs() + (1.0 + t) * g0.abs() + t * g1.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn uniform_rhs_is_linear_and_nonnegative(p in params(), sigma in 0.0f64..10.0, e in 0.0f64..1.0, t in 0.0f64..10.0) {
        let f = |s, e| uniform_recovery_bound(&p, s, e).unwrap();
        prop_assert!(f(sigma, e) >= 0.0);
        prop_assert!(linear(f(0.0, e), f(sigma, e), f(t * sigma, e), t));
        prop_assert!(linear(f(sigma, 0.0), f(sigma, e), f(sigma, t * e), t));

    }

    #[test]
    fn l2_rhs_is_linear_and_nonnegative(p in params(), sigma in 0.0f64..10.0, ti in 0.0f64..1.0, tl in 0.0f64..1.0, t in 0.0f64..10.0) {
        let f = |s, a, b| l2_recovery_bound(&p, s, a, b).unwrap();
        prop_assert!(f(sigma, ti, tl) >= 0.0);
        prop_assert!(linear(f(0.0, ti, tl), f(sigma, ti, tl), f(t * sigma, ti, tl), t));
        prop_assert!(linear(f(sigma, 0.0, tl), f(sigma, ti, tl), f(sigma, t * ti, tl), t));
        prop_assert!(linear(f(sigma, ti, 0.0), f(sigma, ti, tl), f(sigma, ti, t * tl), t));
    }

    #[test]
    fn weighted_rhs_is_linear_and_nonnegative(p in params(), sw in 0.0f64..10.0, anchor in 0.0f64..1.0, e in 0.0f64..1.0, t in 0.0f64..10.0) {
        let f = |a, b, c| weighted_recovery_bound(&p, a, b, c).unwrap();
        prop_assert!(f(sw, anchor, e) >= 0.0);
        prop_assert!(linear(f(0.0, anchor, e), f(sw, anchor, e), f(t * sw, anchor, e), t));
        prop_assert!(linear(f(sw, 0.0, e), f(sw, anchor, e), f(sw, t * anchor, e), t));
        prop_assert!(linear(f(sw, anchor, 0.0), f(sw, anchor, e), f(sw, anchor, t * e), t));
    }

    #[test]
    fn jackson_scaling(m in 0.0f64..10.0, alpha in 0.05f64..=1.0, p in 0u32..6, n in 1usize..500) {
        let l1 = lipschitz_jackson(m, alpha, -1.0, 1.0, n).unwrap();
        let l2 = lipschitz_jackson(m, alpha, -1.0, 1.0, 2 * n).unwrap();
        prop_assert!(close(l1, l2 * 2f64.powf(alpha)));
        let d1 = derivative_jackson(m, -1.0, 1.0, n).unwrap();
        prop_assert!(close(d1, 2.0 * derivative_jackson(m, -1.0, 1.0, 2 * n).unwrap()));
        let s1 = smooth_jackson(m, p, -1.0, 1.0, n, 1.0).unwrap();
        let s2 = smooth_jackson(m, p, -1.0, 1.0, 2 * n, 1.0).unwrap();
        prop_assert!(close(s1, s2 * 2f64.powi(p as i32 + 1)));
    }

    #[test]
    fn sample_count_is_monotone(s in 2usize..500, n in 1usize..5000, k in 0.5f64..3.0, c in 0.1f64..10.0) {
        let base = sample_count_bound(s, n, k, c).unwrap();
        prop_assert!(sample_count_bound(s + 1, n, k, c).unwrap() >= base);
        prop_assert!(sample_count_bound(s, n + 1, k, c).unwrap() >= base);
        prop_assert!(sample_count_bound(s, n, k * 1.1, c).unwrap() >= base);
        prop_assert!(sample_count_bound(s, n, k, c * 1.1).unwrap() >= base);
    }

    #[test]
    fn smoother_needs_lower_degree(s in 1.0f64..1e4, q in 0.05f64..0.95, p in 1u32..8) {
        let lower = degree_for_budget(s, q, Smoothness::OrderP(p)).unwrap();
        let higher = degree_for_budget(s, q, Smoothness::OrderP(p + 1)).unwrap();
        prop_assert!(higher <= lower);
        let deriv = degree_for_budget(s, q, Smoothness::Derivative).unwrap();
        prop_assert!(lower <= deriv);
        prop_assert!(deriv <= degree_for_budget(s, q, Smoothness::Lipschitz(0.5)).unwrap());
    }

    #[test]
    fn degree_grows_with_budget(s in 1.0f64..1e4, q in 0.05f64..0.95, p in 1u32..8) {
        let a = degree_for_budget(s, q, Smoothness::OrderP(p)).unwrap();
        let b = degree_for_budget(s * 2.0, q, Smoothness::OrderP(p)).unwrap();
        prop_assert!(a <= b && a >= 1);
    }
}
