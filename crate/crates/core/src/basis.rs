//! The normalized first-kind Chebyshev system on `[-1, 1]`.
//!
//! `C_0(x) = 1` and `C_k(x) = sqrt(2) T_k(x)` for `k >= 1`. The family is
//! orthonormal with respect to the arcsine probability measure
//! `dx / (pi sqrt(1 - x^2))` and uniformly bounded by `sqrt(2)`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::function::{EvalError, RealFunction};
use crate::rng;

/// Uniform bound of the normalized Chebyshev system.
pub const UNIFORM_BOUND: f64 = SQRT_2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("coefficient vector has length {len}, expected {expected}")]
    Length { len: usize, expected: usize },
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// The span of `C_0, ..., C_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub max_degree: usize,
}

impl BasisSpec {
    pub fn new(max_degree: usize) -> Self {
        Self { max_degree }
    }

    /// Number of basis functions, `N + 1`.
    pub fn size(&self) -> usize {
        self.max_degree + 1
    }

    pub fn uniform_bound(&self) -> f64 {
        UNIFORM_BOUND
    }
}

/// Coordinates of a polynomial of degree at most `N` in the normalized basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientVector {
    coeffs: Vec<f64>,
    basis: BasisSpec,
}

impl CoefficientVector {
    pub fn new(coeffs: Vec<f64>, basis: BasisSpec) -> Result<Self, BasisError> {
        if coeffs.len() != basis.size() {
            return Err(BasisError::Length {
                len: coeffs.len(),
                expected: basis.size(),
            });
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(BasisError::NonFinite { index });
        }
        Ok(Self { coeffs, basis })
    }

    /// Builds a vector whose degree is implied by the length (`N = len - 1`).
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self, BasisError> {
        assert!(
            !coeffs.is_empty(),
            "a coefficient vector needs at least C_0"
        );
        let basis = BasisSpec::new(coeffs.len() - 1);
        Self::new(coeffs, basis)
    }

    /// The zero polynomial in the span of `basis`.
    pub fn zeros(basis: BasisSpec) -> Self {
        Self {
            coeffs: vec![0.0; basis.size()],
            basis,
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn basis(&self) -> BasisSpec {
        self.basis
    }

    pub fn degree(&self) -> usize {
        self.basis.max_degree
    }
}

impl RealFunction for CoefficientVector {
    fn eval(&self, x: f64) -> Result<f64, EvalError> {
        eval_polynomial(self, x)
    }
}

/// Random sampling points with the function values observed there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSet {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    pub seed: u64,
}

impl SampleSet {
    /// Draws `m` arcsine points from `seed` and evaluates `f` at them.
    pub fn draw<F: RealFunction + ?Sized>(f: &F, seed: u64, m: usize) -> Result<Self, EvalError> {
        let points = sample_arcsine(seed, m);
        let values = points
            .iter()
            .map(|&x| f.eval(x))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            points,
            values,
            seed,
        })
    }
}

/// Equal-weight Gauss-Chebyshev rule for the arcsine probability measure.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weight: f64,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(1/M) sum f(node_i)`.
    pub fn integrate<F: RealFunction + ?Sized>(&self, f: &F) -> Result<f64, EvalError> {
        let values = self
            .nodes
            .iter()
            .map(|&x| f.eval(x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(pairwise_sum(&values) * self.weight)
    }
}

fn check_interval(x: f64) -> Result<(), EvalError> {
    if (-1.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(EvalError::OutOfInterval { x })
    }
}

/// `C_k(x)` from the trigonometric closed form.
pub fn eval_basis(k: usize, x: f64) -> Result<f64, EvalError> {
    check_interval(x)?;
    Ok(basis_unchecked(k, x))
}

pub(crate) fn basis_unchecked(k: usize, x: f64) -> f64 {
    if k == 0 {
        1.0
    } else {
        SQRT_2 * (k as f64 * x.acos()).cos()
    }
}

/// The basis function `C_k` as a [`RealFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisFunction(pub usize);

impl RealFunction for BasisFunction {
    fn eval(&self, x: f64) -> Result<f64, EvalError> {
        eval_basis(self.0, x)
    }
}

/// Evaluates `sum c_k C_k(x)` with the Clenshaw recurrence.
pub fn eval_polynomial(c: &CoefficientVector, x: f64) -> Result<f64, EvalError> {
    check_interval(x)?;
    Ok(clenshaw(c.coeffs(), x))
}

/// Clenshaw recurrence for coefficients in the normalized basis.
///
/// The recurrence runs on `T_k` with coefficients `a_0 = c_0`,
/// `a_k = sqrt(2) c_k`; no interval check is made.
pub fn clenshaw(coeffs: &[f64], x: f64) -> f64 {
    match coeffs.len() {
        0 => 0.0,
        1 => coeffs[0],
        _ => {
            let two_x = 2.0 * x;
            let (mut b1, mut b2) = (0.0, 0.0);
            for &c in coeffs[1..].iter().rev() {
                let b0 = SQRT_2 * c + two_x * b1 - b2;
                b2 = b1;
                b1 = b0;
            }
            coeffs[0] + x * b1 - b2
        }
    }
}

/// `m` i.i.d. arcsine draws `cos(pi U)`, `U ~ Uniform(0, 1)`.
pub fn sample_arcsine(seed: u64, m: usize) -> Vec<f64> {
    let mut stream = rng::stream(seed);
    (0..m)
        .map(|_| {
            let u: f64 = stream.random();
            (PI * u).cos()
        })
        .collect()
}

/// Sampling matrix with entries `A[j, k] = C_k(points[j])`.
pub fn build_matrix(points: &[f64], basis: BasisSpec) -> Result<DMatrix<f64>, EvalError> {
    for &x in points {
        check_interval(x)?;
    }
    let n = basis.size();
    let mut a = DMatrix::zeros(points.len(), n);
    for (j, &x) in points.iter().enumerate() {
        a[(j, 0)] = 1.0;
        let (mut t_prev, mut t) = (1.0, x);
        for k in 1..n {
            a[(j, k)] = SQRT_2 * t;
            let next = 2.0 * x * t - t_prev;
            t_prev = t;
            t = next;
        }
    }
    Ok(a)
}

/// Gauss-Chebyshev rule with nodes `cos((2i - 1) pi / (2M))`, `i = 1..M`.
///
/// # Panics
/// If `m == 0`.
pub fn gauss_chebyshev(m: usize) -> QuadratureRule {
    assert!(m >= 1, "a quadrature rule needs at least one node");
    let nodes = (1..=m)
        .map(|i| {
            let node = ((2 * i - 1) as f64 * PI / (2 * m) as f64).cos();
            if 2 * i - 1 == m {
                0.0
            } else {
                node
            }
        })
        .collect();
    QuadratureRule {
        nodes,
        weight: 1.0 / m as f64,
    }
}

/// Discrete inner product `(1/M) sum f(x_i) g(x_i)` over Gauss-Chebyshev nodes.
pub fn inner_product<F, G>(f: &F, g: &G, m: usize) -> Result<f64, EvalError>
where
    F: RealFunction + ?Sized,
    G: RealFunction + ?Sized,
{
    let rule = gauss_chebyshev(m);
    let terms = rule
        .nodes
        .iter()
        .map(|&x| Ok(f.eval(x)? * g.eval(x)?))
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(pairwise_sum(&terms) * rule.weight)
}

/// Pairwise (cascade) summation; the result depends only on the input order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn basis_examples() {
        assert_eq!(eval_basis(0, 0.3).unwrap(), 1.0);
        assert_relative_eq!(
            eval_basis(1, 0.5).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert!(eval_basis(3, (PI / 6.0).cos()).unwrap().abs() < 1e-15);
        assert_eq!(eval_basis(2, 1.5), Err(EvalError::OutOfInterval { x: 1.5 }));
    }

    #[test]
    fn polynomial_examples() {
        let e0 = CoefficientVector::from_coeffs(vec![1.0, 0.0, 0.0]).unwrap();
        for x in [-1.0, -0.2, 0.0, 0.9, 1.0] {
            assert_eq!(eval_polynomial(&e0, x).unwrap(), 1.0);
        }
        let e1 = CoefficientVector::from_coeffs(vec![0.0, 1.0]).unwrap();
        assert_relative_eq!(
            eval_polynomial(&e1, 0.5).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert!(eval_polynomial(&e1, -1.0000001).is_err());
    }

    #[test]
    fn coefficient_vector_invariants() {
        assert!(matches!(
            CoefficientVector::new(vec![1.0, 2.0], BasisSpec::new(2)),
            Err(BasisError::Length {
                len: 2,
                expected: 3
            })
        ));
        assert!(matches!(
            CoefficientVector::from_coeffs(vec![1.0, f64::NAN]),
            Err(BasisError::NonFinite { index: 1 })
        ));
        assert_eq!(BasisSpec::new(4).uniform_bound(), SQRT_2);
    }

    #[test]
    fn matrix_examples() {
        let a = build_matrix(&[1.0], BasisSpec::new(2)).unwrap();
        assert_relative_eq!(a[(0, 0)], 1.0);
        assert_relative_eq!(a[(0, 1)], SQRT_2);
        assert_relative_eq!(a[(0, 2)], SQRT_2);
        let a = build_matrix(&[0.0], BasisSpec::new(2)).unwrap();
        assert_eq!(
            a.row(0).iter().copied().collect::<Vec<_>>(),
            vec![1.0, 0.0, -SQRT_2]
        );
        let a = build_matrix(&[0.1, -0.4, 0.8], BasisSpec::new(4)).unwrap();
        assert_eq!(a.shape(), (3, 5));
        assert!(build_matrix(&[0.0, 1.01], BasisSpec::new(4)).is_err());
    }

    #[test]
    fn matrix_matches_closed_form() {
        let points = sample_arcsine(11, 50);
        let a = build_matrix(&points, BasisSpec::new(300)).unwrap();
        for (j, &x) in points.iter().enumerate() {
            for k in 0..=300 {
                let direct = eval_basis(k, x).unwrap();
                assert!((a[(j, k)] - direct).abs() <= 1e-12, "k={k} x={x}");
                assert!(a[(j, k)].abs() <= SQRT_2 + 1e-12);
            }
        }
    }

    #[test]
    fn quadrature_examples() {
        let rule = gauss_chebyshev(1);
        assert_eq!(rule.nodes, vec![0.0]);
        assert_eq!(rule.weight, 1.0);
        let rule = gauss_chebyshev(2);
        assert_relative_eq!(rule.nodes[0], SQRT_2 / 2.0, epsilon = 1e-15);
        assert_relative_eq!(rule.nodes[1], -SQRT_2 / 2.0, epsilon = 1e-15);
        assert_eq!(rule.weight, 0.5);
        assert_relative_eq!(
            rule.integrate(&|x: f64| x * x).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        for m in [1, 2, 7, 64] {
            assert_relative_eq!(
                gauss_chebyshev(m).integrate(&|_: f64| 1.0).unwrap(),
                1.0,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn inner_product_examples() {
        let c3 = BasisFunction(3);
        assert!((inner_product(&c3, &c3, 8).unwrap() - 1.0).abs() <= 1e-13);
        assert!(
            inner_product(&BasisFunction(2), &BasisFunction(5), 8)
                .unwrap()
                .abs()
                <= 1e-13
        );
        let one = |_: f64| 1.0;
        assert_eq!(inner_product(&one, &one, 5).unwrap(), 1.0);
    }

    #[test]
    fn sampler_is_deterministic_and_in_range() {
        assert_eq!(sample_arcsine(42, 5), sample_arcsine(42, 5));
        assert_ne!(sample_arcsine(42, 5), sample_arcsine(43, 5));
        assert!(sample_arcsine(3, 100_000)
            .iter()
            .all(|x| (-1.0..=1.0).contains(x)));
    }

    #[test]
    fn sample_set_draw() {
        let s = SampleSet::draw(&|x: f64| 2.0 * x, 9, 4).unwrap();
        assert_eq!(s.points, sample_arcsine(9, 4));
        for (x, y) in s.points.iter().zip(&s.values) {
            assert_eq!(*y, 2.0 * x);
        }
    }
}
