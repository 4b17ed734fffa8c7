//! Best s-term errors, weighted norms and coefficient quasi-norms.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::CoefficientVector;

/// Largest vector length accepted by [`SigmaMode::Exact`].
pub const EXACT_MAX_LEN: usize = 25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SparsityError {
    #[error("length mismatch: vector has {left} entries, weights have {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("exponent {0} is outside the admissible range")]
    InvalidExponent(f64),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("exact weighted s-term search supports at most {max} entries, got {len}")]
    TooLarge { len: usize, max: usize },
    #[error("budget must be a nonnegative finite number, got {0}")]
    InvalidBudget(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaMode {
    Greedy,
    Exact,
}

fn check_dims(z: &[f64], w: &[f64]) -> Result<(), SparsityError> {
    if z.len() != w.len() {
        return Err(SparsityError::DimensionMismatch {
            left: z.len(),
            right: w.len(),
        });
    }
    Ok(())
}

/// Sum of nonnegative terms in ascending order.
fn sum_ascending(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}

/// `(sum w_j^(2-p) |z_j|^p)^(1/p)` for `0 < p <= 2`.
pub fn weighted_norm(z: &[f64], w: &[f64], p: f64) -> Result<f64, SparsityError> {
    check_dims(z, w)?;
    if !(p > 0.0 && p <= 2.0) {
        return Err(SparsityError::InvalidExponent(p));
    }
    if p == 1.0 {
        return Ok(z.iter().zip(w).map(|(x, wj)| wj * x.abs()).sum());
    }
    let s: f64 = z
        .iter()
        .zip(w)
        .map(|(x, wj)| wj.powf(2.0 - p) * x.abs().powf(p))
        .sum();
    Ok(s.powf(1.0 / p))
}

/// Weighted cardinality `sum_{j in S} w_j^2`.
pub fn weighted_card(set: &[usize], w: &[f64]) -> Result<f64, SparsityError> {
    set.iter()
        .map(|&j| {
            w.get(j)
                .map(|v| v * v)
                .ok_or(SparsityError::IndexOutOfRange {
                    index: j,
                    len: w.len(),
                })
        })
        .sum()
}

/// Indices ordered by magnitude descending, index ascending.
fn magnitude_order(z: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..z.len()).collect();
    idx.sort_by(|&a, &b| z[b].abs().total_cmp(&z[a].abs()).then(a.cmp(&b)));
    idx
}

/// l_p error of the best s-term approximation of `z` (`p > 0`).
pub fn sigma_s(z: &[f64], s: usize, p: f64) -> Result<f64, SparsityError> {
    if !(p > 0.0) || p.is_nan() {
        return Err(SparsityError::InvalidExponent(p));
    }
    let order = magnitude_order(z);
    let rest: Vec<f64> = order.iter().skip(s).map(|&j| z[j].abs()).collect();
    if p.is_infinite() {
        return Ok(rest.into_iter().fold(0.0, f64::max));
    }
    if p == 1.0 {
        return Ok(sum_ascending(rest));
    }
    Ok(sum_ascending(rest.into_iter().map(|v| v.powf(p)).collect()).powf(1.0 / p))
}

/// `(sum |z_j|^q)^(1/q)` for any `q > 0`.
pub fn lq_norm(z: &[f64], q: f64) -> Result<f64, SparsityError> {
    if !(q > 0.0) || q.is_infinite() {
        return Err(SparsityError::InvalidExponent(q));
    }
    let s: f64 = z.iter().map(|v| v.abs().powf(q)).sum();
    Ok(s.powf(1.0 / q))
}

/// Coefficient quasi-norm `||c||_{A_q}` for `0 < q < 1`.
pub fn quasi_norm_aq(c: &CoefficientVector, q: f64) -> Result<f64, SparsityError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(SparsityError::InvalidExponent(q));
    }
    lq_norm(c.coeffs(), q)
}

fn dropped_sum(z: &[f64], w: &[f64], kept: &[bool]) -> f64 {
    sum_ascending(
        z.iter()
            .zip(w)
            .zip(kept)
            .filter(|(_, &k)| !k)
            .map(|((x, wj), _)| wj * x.abs())
            .collect(),
    )
}

/// Weighted best s-term error with `p = 1`: the smallest `sum_{j not in S} w_j |z_j|`
/// over index sets with `sum_{j in S} w_j^2 <= s`.
pub fn sigma_s_weighted(
    z: &[f64],
    s: f64,
    w: &[f64],
    mode: SigmaMode,
) -> Result<f64, SparsityError> {
    check_dims(z, w)?;
    if !(s >= 0.0) || !s.is_finite() {
        return Err(SparsityError::InvalidBudget(s));
    }
    let budget = s + 1e-12 * s.max(1.0);
    let kept = match mode {
        SigmaMode::Greedy => greedy_keep(z, w, budget),
        SigmaMode::Exact => {
            if z.len() > EXACT_MAX_LEN {
                return Err(SparsityError::TooLarge {
                    len: z.len(),
                    max: EXACT_MAX_LEN,
                });
            }
            exact_keep(z, w, budget)
        }
    };
    Ok(dropped_sum(z, w, &kept))
}

fn greedy_keep(z: &[f64], w: &[f64], budget: f64) -> Vec<bool> {
    let mut idx: Vec<usize> = (0..z.len()).filter(|&j| z[j] != 0.0).collect();
    idx.sort_by(|&a, &b| {
        (z[b].abs() / w[b])
            .total_cmp(&(z[a].abs() / w[a]))
            .then(a.cmp(&b))
    });
    let mut kept = vec![false; z.len()];
    let mut used = 0.0;
    for j in idx {
        let cost = w[j] * w[j];
        if used + cost <= budget {
            used += cost;
            kept[j] = true;
        }
    }
    kept
}

/// `(cost, value, mask)` for every subset of `items`.
fn enumerate_half(items: &[usize], z: &[f64], w: &[f64]) -> Vec<(f64, f64, u32)> {
    let mut out = Vec::with_capacity(1 << items.len());
    for mask in 0u32..(1 << items.len()) {
        let (mut cost, mut value) = (0.0, 0.0);
        for (bit, &j) in items.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                cost += w[j] * w[j];
                value += w[j] * z[j].abs();
            }
        }
        out.push((cost, value, mask));
    }
    out
}

/// Meet-in-the-middle 0/1 knapsack maximizing the kept weighted mass.
fn exact_keep(z: &[f64], w: &[f64], budget: f64) -> Vec<bool> {
    let items: Vec<usize> = (0..z.len()).filter(|&j| z[j] != 0.0).collect();
    let (left, right) = items.split_at(items.len() / 2);
    let lsets = enumerate_half(left, z, w);
    let mut rsets = enumerate_half(right, z, w);
    rsets.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
    // Running best value among right subsets of cost <= rsets[i].0.
    let mut prefix = Vec::with_capacity(rsets.len());
    let mut best_i = 0;
    for i in 0..rsets.len() {
        if rsets[i].1 > rsets[best_i].1 {
            best_i = i;
        }
        prefix.push(best_i);
    }

    let mut best = (-1.0, 0u32, 0u32);
    for &(lcost, lvalue, lmask) in &lsets {
        if lcost > budget {
            continue;
        }
        let room = budget - lcost;
        let count = rsets.partition_point(|r| r.0 <= room);
        if count == 0 {
            continue;
        }
        let r = &rsets[prefix[count - 1]];
        let value = lvalue + r.1;
        if value > best.0 {
            best = (value, lmask, r.2);
        }
    }

    let mut kept = vec![false; z.len()];
    for (bit, &j) in left.iter().enumerate() {
        kept[j] = best.1 >> bit & 1 == 1;
    }
    for (bit, &j) in right.iter().enumerate() {
        kept[j] = best.2 >> bit & 1 == 1;
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_norm_examples() {
        assert_eq!(weighted_norm(&[1.0, 1.0], &[1.0, 2.0], 1.0).unwrap(), 3.0);
        assert_eq!(weighted_norm(&[3.0, 0.0], &[2.0, 5.0], 2.0).unwrap(), 3.0);
        let z = [0.5, -2.0, 1.5];
        let ones = [1.0; 3];
        assert!((weighted_norm(&z, &ones, 0.5).unwrap() - lq_norm(&z, 0.5).unwrap()).abs() < 1e-14);
        assert!(weighted_norm(&z, &ones, 2.5).is_err());
        assert!(weighted_norm(&z, &[1.0], 1.0).is_err());
    }

    #[test]
    fn weighted_card_examples() {
        let w = [2f64.sqrt(), 3f64.sqrt(), 1.0];
        assert_eq!(weighted_card(&[], &w).unwrap(), 0.0);
        assert!((weighted_card(&[0, 1], &w).unwrap() - 5.0).abs() < 1e-14);
        assert_eq!(weighted_card(&[0, 2, 3], &[1.0; 4]).unwrap(), 3.0);
        assert!(weighted_card(&[5], &w).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_s(&[3.0, 1.0, 0.5], 1, 1.0).unwrap(), 1.5);
        assert_eq!(sigma_s(&[3.0, 0.0, -2.0], 2, 1.0).unwrap(), 0.0);
        assert_eq!(sigma_s(&[3.0, 4.0], 1, 2.0).unwrap(), 3.0);
        assert_eq!(sigma_s(&[1.0, -1.0, 1.0], 1, 1.0).unwrap(), 2.0);
        assert_eq!(sigma_s(&[1.0, 2.0], 5, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn weighted_sigma_examples() {
        let z = [5.0, 1.0];
        let w = [2.0, 1.0];
        assert_eq!(
            sigma_s_weighted(&z, 1.0, &w, SigmaMode::Exact).unwrap(),
            10.0
        );
        assert!(sigma_s_weighted(&z, 1.0, &w, SigmaMode::Greedy).unwrap() >= 10.0);
        assert_eq!(
            sigma_s_weighted(&z, 5.0, &w, SigmaMode::Exact).unwrap(),
            0.0
        );
        assert_eq!(
            sigma_s_weighted(&z, 5.0, &w, SigmaMode::Greedy).unwrap(),
            0.0
        );
        let v = [0.2, -3.0, 1.0, 0.0, 2.5];
        for s in 0..6 {
            let want = sigma_s(&v, s, 1.0).unwrap();
            for mode in [SigmaMode::Greedy, SigmaMode::Exact] {
                assert_eq!(
                    sigma_s_weighted(&v, s as f64, &[1.0; 5], mode).unwrap(),
                    want
                );
            }
        }
        assert!(matches!(
            sigma_s_weighted(&[1.0; 26], 3.0, &[1.0; 26], SigmaMode::Exact),
            Err(SparsityError::TooLarge { len: 26, max: 25 })
        ));
        assert!(sigma_s_weighted(&[1.0; 26], 3.0, &[1.0; 26], SigmaMode::Greedy).is_ok());
    }

    #[test]
    fn quasi_norm_examples() {
        let e = CoefficientVector::from_coeffs(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(quasi_norm_aq(&e, 0.3).unwrap(), 1.0);
        let c = CoefficientVector::from_coeffs(vec![1.0, 1.0]).unwrap();
        assert_eq!(quasi_norm_aq(&c, 0.5).unwrap(), 4.0);
        let zero = CoefficientVector::from_coeffs(vec![0.0; 4]).unwrap();
        assert_eq!(quasi_norm_aq(&zero, 0.7).unwrap(), 0.0);
        assert!(quasi_norm_aq(&c, 1.0).is_err());
    }
}
