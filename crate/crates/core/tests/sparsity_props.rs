use proptest::prelude::*;
use spap_core::sparsity::{
    lq_norm, sigma_s, sigma_s_weighted, weighted_card, weighted_norm, SigmaMode,
};

/// Weighted s-term error by enumerating every index subset.
fn brute_force(z: &[f64], s: f64, w: &[f64]) -> f64 {
    let n = z.len();
    let total: f64 = z.iter().zip(w).map(|(x, wj)| wj * x.abs()).sum();
    let mut best = total;
    for mask in 0u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        if weighted_card(&set, w).unwrap() > s + 1e-9 {
            continue;
        }
        let kept: f64 = set.iter().map(|&j| w[j] * z[j].abs()).sum();
        best = best.min(total - kept);
    }
    best
}

fn small_integer_vector() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=12).prop_flat_map(|n| {
        (
            prop::collection::vec((-6i32..=6).prop_map(f64::from), n),
            prop::collection::vec(prop_oneof![Just(1.0), Just(2f64.sqrt()), Just(2.0)], n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn stechkin(z in prop::collection::vec(-1e3f64..1e3, 1..200), s in 1usize..=20) {
        let sigma = sigma_s(&z, s, 1.0).unwrap();
        for q in [0.3, 0.5, 0.7] {
            let rhs = (s as f64).powf(1.0 - 1.0 / q) * lq_norm(&z, q).unwrap();
            prop_assert!(sigma <= rhs * (1.0 + 1e-12), "s={} q={}: {} > {}", s, q, sigma, rhs);
        }
    }

    #[test]
    fn unit_weights_reduce_to_plain(z in prop::collection::vec(-10f64..10.0, 0..40), s in 0usize..45) {
        let w = vec![1.0; z.len()];
        let plain = sigma_s(&z, s, 1.0).unwrap();
        prop_assert_eq!(sigma_s_weighted(&z, s as f64, &w, SigmaMode::Greedy).unwrap(), plain);
        if z.len() <= 20 {
            prop_assert_eq!(sigma_s_weighted(&z, s as f64, &w, SigmaMode::Exact).unwrap(), plain);
        }
    }

    #[test]
    fn exact_matches_enumeration((z, w) in small_integer_vector(), s in 0.0f64..20.0) {
        let exact = sigma_s_weighted(&z, s, &w, SigmaMode::Exact).unwrap();
        let greedy = sigma_s_weighted(&z, s, &w, SigmaMode::Greedy).unwrap();
        let brute = brute_force(&z, s, &w);
        prop_assert!((exact - brute).abs() <= 1e-9, "exact {} brute {}", exact, brute);
        prop_assert!(greedy >= exact - 1e-9, "greedy {} below exact {}", greedy, exact);
    }

    #[test]
    fn sigma_is_monotone_in_s(z in prop::collection::vec(-10f64..10.0, 1..60), p in prop_oneof![Just(0.5), Just(1.0), Just(2.0), Just(f64::INFINITY)]) {
        let mut prev = f64::INFINITY;
        for s in 0..=z.len() {
            let v = sigma_s(&z, s, p).unwrap();
            prop_assert!(v <= prev);
            prev = v;
        }
        prop_assert_eq!(prev, 0.0);
    }

    #[test]
    fn weighted_norm_reduces_with_unit_weights(z in prop::collection::vec(-10f64..10.0, 1..60), p in 0.1f64..=2.0) {
        let w = vec![1.0; z.len()];
        let a = weighted_norm(&z, &w, p).unwrap();
        let b = lq_norm(&z, p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0));
    }
}
