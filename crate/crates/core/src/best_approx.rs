//! Best uniform and best square polynomial approximation on `[-1, 1]`.

use std::collections::VecDeque;
use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::{self, gauss_chebyshev, pairwise_sum, BasisSpec, CoefficientVector};
use crate::function::{EvalError, RealFunction};

/// Largest degree accepted by [`remez`].
pub const REMEZ_DEGREE_CAP: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApproxError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("remez is limited to degree {cap}, got {n}")]
    DegreeCap { n: usize, cap: usize },
    #[error("remez did not level after {iterations} iterations (relative spread {spread:e})")]
    NoConvergence { iterations: usize, spread: f64 },
    #[error("remez reference system is singular")]
    Singular,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum GridLayout {
    #[default]
    #[serde(rename = "uniform")]
    Uniform,
    #[serde(rename = "chebyshev-extrema", alias = "chebyshev_extrema")]
    ChebyshevExtrema,
}

/// A finite discretization of `[-1, 1]` used for sup norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    pub size: usize,
    #[serde(default)]
    pub layout: GridLayout,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            size: 10_001,
            layout: GridLayout::Uniform,
        }
    }
}

impl GridSpec {
    pub fn new(size: usize, layout: GridLayout) -> Result<Self, ApproxError> {
        let grid = Self { size, layout };
        grid.validate()?;
        Ok(grid)
    }

    pub fn uniform(size: usize) -> Result<Self, ApproxError> {
        Self::new(size, GridLayout::Uniform)
    }

    pub fn validate(&self) -> Result<(), ApproxError> {
        if self.size < 2 {
            return Err(ApproxError::InvalidArgument(format!(
                "grid size must be at least 2, got {}",
                self.size
            )));
        }
        Ok(())
    }

    /// Grid points in ascending order; both endpoints are always present.
    pub fn points(&self) -> Vec<f64> {
        let g = self.size.max(2);
        let last = (g - 1) as f64;
        (0..g)
            .map(|i| {
                if i == 0 {
                    -1.0
                } else if i == g - 1 {
                    1.0
                } else {
                    match self.layout {
                        GridLayout::Uniform => -1.0 + 2.0 * i as f64 / last,
                        GridLayout::ChebyshevExtrema => -(PI * i as f64 / last).cos(),
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ApproxMethod {
    #[serde(rename = "remez")]
    Remez,
    #[serde(rename = "cheb_tail", alias = "cheb-tail")]
    ChebTail,
    #[serde(rename = "l2_projection", alias = "l2-projection")]
    L2Projection,
}

/// How [`estimate_en`] obtains the best uniform approximation error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum EnMethod {
    #[serde(rename = "remez")]
    Remez,
    #[default]
    #[serde(rename = "cheb_tail", alias = "cheb-tail")]
    ChebTail,
}

/// A best-approximation polynomial with its error scalars.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestApproxResult {
    pub coeffs: CoefficientVector,
    /// Leveled minimax error `E_n` (Remez only).
    pub e_uniform: Option<f64>,
    /// Sup norm of the residual on the evaluation grid.
    pub t_inf: Option<f64>,
    /// Quadrature L2 norm of the residual.
    pub t_l2: Option<f64>,
    pub method: ApproxMethod,
    /// Alternation points `(x, f(x) - p(x))` (Remez only).
    pub extrema: Option<Vec<(f64, f64)>>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemezOptions {
    /// Target relative spread `(max - min) / max` of the extremal errors.
    /// Leveling also stops once the spread drops below the double-precision
    /// resolution of `f - p`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RemezOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100,
        }
    }
}

fn eval_all<F: RealFunction + ?Sized>(f: &F, points: &[f64]) -> Result<Vec<f64>, EvalError> {
    points.iter().map(|&x| f.eval(x)).collect()
}

/// The first `M` normalized Chebyshev coefficients of `f` from the `M`-point
/// Gauss-Chebyshev rule.
pub fn chebyshev_coeffs<F: RealFunction + ?Sized>(
    f: &F,
    m: usize,
) -> Result<Vec<f64>, ApproxError> {
    if m == 0 {
        return Err(ApproxError::InvalidArgument(
            "quadrature size must be positive".into(),
        ));
    }
    let rule = gauss_chebyshev(m);
    Ok(coeffs_from_node_values(&eval_all(f, &rule.nodes)?))
}

/// Discrete Chebyshev transform of values at the Gauss-Chebyshev nodes.
///
/// `C_k(x_i) = sqrt(2) cos(k (2i + 1) pi / (2M))` is read from a table of
/// `cos(j pi / (2M))`, so every basis value is correctly rounded.
pub(crate) fn coeffs_from_node_values(values: &[f64]) -> Vec<f64> {
    let m = values.len();
    let period = 4 * m;
    let table: Vec<f64> = (0..period)
        .map(|j| {
            if j % (2 * m) == m {
                0.0
            } else {
                (PI * j as f64 / (2 * m) as f64).cos()
            }
        })
        .collect();
    let scale = 1.0 / m as f64;
    let mut out = Vec::with_capacity(m);
    out.push(pairwise_sum(values) * scale);
    for k in 1..m {
        let step = (2 * k) % period;
        let mut j = k % period;
        let mut acc = 0.0;
        for &v in values {
            acc += v * table[j];
            j += step;
            if j >= period {
                j -= period;
            }
        }
        out.push(SQRT_2 * acc * scale);
    }
    out
}

/// `max_i |values_i - p(points_i)|`.
pub(crate) fn sup_residual(points: &[f64], values: &[f64], coeffs: &[f64]) -> f64 {
    points
        .iter()
        .zip(values)
        .map(|(&x, &v)| (v - basis::clenshaw(coeffs, x)).abs())
        .fold(0.0, f64::max)
}

/// Quadrature L2 norm of `values - p` at the given nodes.
pub(crate) fn l2_residual(nodes: &[f64], values: &[f64], coeffs: &[f64]) -> f64 {
    let sq: Vec<f64> = nodes
        .iter()
        .zip(values)
        .map(|(&x, &v)| {
            let r = v - basis::clenshaw(coeffs, x);
            r * r
        })
        .collect();
    (pairwise_sum(&sq) / nodes.len() as f64).sqrt()
}

/// Degree-`N` truncation of the `M`-point discrete Chebyshev expansion.
///
/// `m` defaults to `4(N + 1)`.
pub fn l2_projection<F: RealFunction + ?Sized>(
    f: &F,
    n: usize,
    m: Option<usize>,
    grid: &GridSpec,
) -> Result<BestApproxResult, ApproxError> {
    grid.validate()?;
    let m = m.unwrap_or(4 * (n + 1));
    if m < n + 1 {
        return Err(ApproxError::InvalidArgument(format!(
            "quadrature size {m} is smaller than N + 1 = {}",
            n + 1
        )));
    }
    let nodes = gauss_chebyshev(m).nodes;
    let node_values = eval_all(f, &nodes)?;
    let points = grid.points();
    let grid_values = eval_all(f, &points)?;
    Ok(projection_from_values(
        n,
        &nodes,
        &node_values,
        &points,
        &grid_values,
    ))
}

pub(crate) fn projection_from_values(
    n: usize,
    nodes: &[f64],
    node_values: &[f64],
    points: &[f64],
    grid_values: &[f64],
) -> BestApproxResult {
    let mut coeffs = coeffs_from_node_values(node_values);
    coeffs.truncate(n + 1);
    let t_inf = sup_residual(points, grid_values, &coeffs);
    let t_l2 = l2_residual(nodes, node_values, &coeffs);
    BestApproxResult {
        coeffs: CoefficientVector::new(coeffs, BasisSpec::new(n))
            .expect("finite function values give finite coefficients"),
        e_uniform: None,
        t_inf: Some(t_inf),
        t_l2: Some(t_l2),
        method: ApproxMethod::L2Projection,
        extrema: None,
        iterations: 0,
    }
}

/// Best uniform approximation of degree `n` by the second Remez algorithm.
pub fn remez<F: RealFunction + ?Sized>(
    f: &F,
    n: usize,
    opts: RemezOptions,
) -> Result<BestApproxResult, ApproxError> {
    if n > REMEZ_DEGREE_CAP {
        return Err(ApproxError::DegreeCap {
            n,
            cap: REMEZ_DEGREE_CAP,
        });
    }
    let npts = n + 2;
    // Slightly skewed Chebyshev extrema.
    let mut reference: Vec<f64> = (0..npts)
        .map(|j| {
            let t = j as f64 / (n + 1) as f64;
            -(PI * (t + 0.1 * (PI * t).sin() / (n + 1) as f64)).cos()
        })
        .collect();
    reference[0] = -1.0;
    reference[npts - 1] = 1.0;

    let scan_size = (100 * npts).max(4001);
    let scan = GridSpec {
        size: scan_size,
        layout: GridLayout::ChebyshevExtrema,
    }
    .points();
    let scan_f = eval_all(f, &scan)?;
    let f_scale = scan_f.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(1.0);

    let mut spread = f64::INFINITY;
    for iteration in 1..=opts.max_iter {
        let (coeffs, h) = solve_reference(f, n, &reference)?;
        let err =
            |x: f64| -> Result<f64, EvalError> { Ok(f.eval(x)? - basis::clenshaw(&coeffs, x)) };

        let scan_err: Vec<f64> = scan
            .iter()
            .zip(&scan_f)
            .map(|(&x, &v)| v - basis::clenshaw(&coeffs, x))
            .collect();
        let max_scan = scan_err.iter().fold(0.0_f64, |a, e| a.max(e.abs()));
        if max_scan <= 1e-13 * f_scale {
            return Ok(remez_result(coeffs, n, max_scan, None, iteration));
        }

        let mut extrema = Vec::new();
        let mut start = 0;
        while start < scan.len() {
            let positive = scan_err[start] >= 0.0;
            let mut end = start;
            while end + 1 < scan.len() && (scan_err[end + 1] >= 0.0) == positive {
                end += 1;
            }
            let best = (start..=end)
                .max_by(|&a, &b| scan_err[a].abs().total_cmp(&scan_err[b].abs()))
                .unwrap();
            let lo = scan[best.saturating_sub(1)];
            let hi = scan[(best + 1).min(scan.len() - 1)];
            let sign = if positive { 1.0 } else { -1.0 };
            let (x, e) = refine_extremum(&err, lo, hi, sign, (scan[best], scan_err[best]))?;
            extrema.push((x, e));
            start = end + 1;
        }

        if extrema.len() < npts {
            return Err(ApproxError::NoConvergence {
                iterations: iteration,
                spread,
            });
        }
        let global = extrema.iter().fold(0.0_f64, |a, p| a.max(p.1.abs()));
        while extrema.len() > npts {
            if extrema[0].1.abs() < extrema[extrema.len() - 1].1.abs() {
                extrema.remove(0);
            } else {
                extrema.pop();
            }
        }
        let lo = extrema.iter().fold(f64::INFINITY, |a, p| a.min(p.1.abs()));
        let hi = extrema
            .iter()
            .fold(0.0_f64, |a, p| a.max(p.1.abs()))
            .max(global);
        spread = (hi - lo) / hi;
        // Absolute resolution of `f - p` in double precision.
        let coeff_sum: f64 = coeffs.iter().map(|c| c.abs()).sum();
        let noise = 64.0 * f64::EPSILON * (f_scale + SQRT_2 * coeff_sum);
        if spread <= opts.tol || hi - lo <= noise {
            return Ok(remez_result(coeffs, n, h.abs(), Some(extrema), iteration));
        }
        let next: Vec<f64> = extrema.iter().map(|p| p.0).collect();
        if next.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ApproxError::NoConvergence {
                iterations: iteration,
                spread,
            });
        }
        reference = next;
    }
    Err(ApproxError::NoConvergence {
        iterations: opts.max_iter,
        spread,
    })
}

fn remez_result(
    coeffs: Vec<f64>,
    n: usize,
    e: f64,
    extrema: Option<Vec<(f64, f64)>>,
    iterations: usize,
) -> BestApproxResult {
    BestApproxResult {
        coeffs: CoefficientVector::new(coeffs, BasisSpec::new(n))
            .expect("reference solve yields finite coefficients"),
        e_uniform: Some(e),
        t_inf: None,
        t_l2: None,
        method: ApproxMethod::Remez,
        extrema,
        iterations,
    }
}

/// Solves `p(x_j) + (-1)^j h = f(x_j)` in the Chebyshev basis.
fn solve_reference<F: RealFunction + ?Sized>(
    f: &F,
    n: usize,
    reference: &[f64],
) -> Result<(Vec<f64>, f64), ApproxError> {
    let npts = n + 2;
    let mut a = DMatrix::zeros(npts, npts);
    let mut rhs = DVector::zeros(npts);
    for (j, &x) in reference.iter().enumerate() {
        for k in 0..=n {
            a[(j, k)] = basis::basis_unchecked(k, x);
        }
        a[(j, n + 1)] = if j % 2 == 0 { 1.0 } else { -1.0 };
        rhs[j] = f.eval(x)?;
    }
    let sol = a.lu().solve(&rhs).ok_or(ApproxError::Singular)?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(ApproxError::Singular);
    }
    let coeffs = sol.rows(0, n + 1).iter().copied().collect();
    Ok((coeffs, sol[n + 1]))
}

/// Golden-section maximization of `sign * err` on `[lo, hi]`.
fn refine_extremum<E>(
    err: &E,
    lo: f64,
    hi: f64,
    sign: f64,
    seed: (f64, f64),
) -> Result<(f64, f64), EvalError>
where
    E: Fn(f64) -> Result<f64, EvalError>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = sign * err(c)?;
    let mut fd = sign * err(d)?;
    for _ in 0..80 {
        if b - a <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = sign * err(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = sign * err(d)?;
        }
    }
    let mut best = seed;
    for x in [a, b, 0.5 * (a + b), lo, hi] {
        let e = err(x)?;
        if sign * e > sign * best.1 {
            best = (x, e);
        }
    }
    Ok(best)
}

/// Estimates the best uniform approximation error `E_N`.
///
/// `Remez` levels the minimax error directly (`N <= 50`). `ChebTail` returns
/// the grid sup norm of `f - p_N`, where `p_N` truncates the `4(N + 1)`-point
/// expansion to degree `N`; it is an upper bound of `E_N` up to grid
/// resolution.
pub fn estimate_en<F: RealFunction + ?Sized>(
    f: &F,
    n: usize,
    method: EnMethod,
    grid: &GridSpec,
) -> Result<f64, ApproxError> {
    match method {
        EnMethod::Remez => Ok(remez(f, n, RemezOptions::default())?
            .e_uniform
            .expect("remez sets e_uniform")),
        EnMethod::ChebTail => Ok(l2_projection(f, n, None, grid)?
            .t_inf
            .expect("projection sets t_inf")),
    }
}

/// `max |g|` over the grid.
pub fn sup_norm_on_grid<G: RealFunction + ?Sized>(
    g: &G,
    grid: &GridSpec,
) -> Result<f64, ApproxError> {
    grid.validate()?;
    Ok(eval_all(g, &grid.points())?
        .into_iter()
        .fold(0.0, |a, v| a.max(v.abs())))
}

/// Discrete modulus of continuity: `max |f(x) - f(y)|` over grid pairs with
/// `|x - y| <= delta`.
pub fn modulus_estimate<F: RealFunction + ?Sized>(
    f: &F,
    delta: f64,
    grid: &GridSpec,
) -> Result<f64, ApproxError> {
    grid.validate()?;
    if !(delta > 0.0 && delta <= 2.0) {
        return Err(ApproxError::InvalidArgument(format!(
            "delta must lie in (0, 2], got {delta}"
        )));
    }
    let points = grid.points();
    let values = eval_all(f, &points)?;
    Ok(sliding_oscillation(&points, &values, delta))
}

/// Largest `max - min` of `values` over windows of ascending `points` of
/// width at most `delta`, using monotone deques.
pub(crate) fn sliding_oscillation(points: &[f64], values: &[f64], delta: f64) -> f64 {
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut left = 0;
    let mut best = 0.0_f64;
    let slack = 4.0 * f64::EPSILON;
    for right in 0..points.len() {
        while maxq.back().is_some_and(|&i| values[i] <= values[right]) {
            maxq.pop_back();
        }
        maxq.push_back(right);
        while minq.back().is_some_and(|&i| values[i] >= values[right]) {
            minq.pop_back();
        }
        minq.push_back(right);
        while points[right] - points[left] > delta + slack {
            left += 1;
        }
        while maxq.front().is_some_and(|&i| i < left) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&i| i < left) {
            minq.pop_front();
        }
        best = best.max(values[maxq[0]] - values[minq[0]]);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisFunction;

    fn runge(x: f64) -> f64 {
        1.0 / (1.0 + 25.0 * x * x)
    }

    #[test]
    fn coeff_examples() {
        let c = chebyshev_coeffs(&BasisFunction(2), 8).unwrap();
        for (k, v) in c.iter().enumerate() {
            let want = if k == 2 { 1.0 } else { 0.0 };
            assert!((v - want).abs() <= 1e-13, "k={k} v={v}");
        }
        let c = chebyshev_coeffs(&|x: f64| x, 8).unwrap();
        assert!((c[1] - 1.0 / SQRT_2).abs() <= 1e-13);
        assert!(c
            .iter()
            .enumerate()
            .all(|(k, v)| k == 1 || v.abs() <= 1e-13));
        let c = chebyshev_coeffs(&|x: f64| x * x, 8).unwrap();
        assert!((c[0] - 0.5).abs() <= 1e-13);
        assert!((c[2] - 0.3535533906).abs() <= 1e-10);
        assert!(c
            .iter()
            .enumerate()
            .all(|(k, v)| k == 0 || k == 2 || v.abs() <= 1e-13));
    }

    #[test]
    fn transform_matches_direct_sum() {
        let m = 37;
        let coeffs = chebyshev_coeffs(&runge, m).unwrap();
        let rule = gauss_chebyshev(m);
        for (k, c) in coeffs.iter().enumerate() {
            let direct: f64 = rule
                .nodes
                .iter()
                .map(|&x| runge(x) * basis::eval_basis(k, x).unwrap())
                .sum::<f64>()
                / m as f64;
            assert!((c - direct).abs() <= 1e-14);
        }
    }

    #[test]
    fn projection_reproduces_polynomials() {
        let p = CoefficientVector::from_coeffs(vec![0.3, -1.0, 0.25, 0.0, 2.0]).unwrap();
        let r = l2_projection(&p, 6, None, &GridSpec::default()).unwrap();
        for (k, c) in r.coeffs.coeffs().iter().enumerate() {
            let want = p.coeffs().get(k).copied().unwrap_or(0.0);
            assert!((c - want).abs() <= 1e-12);
        }
        assert!(r.t_l2.unwrap() <= 1e-12);
        assert!(r.t_inf.unwrap() <= 1e-12);
    }

    #[test]
    fn projection_of_next_basis_function() {
        let n = 9;
        let r = l2_projection(&BasisFunction(n + 1), n, None, &GridSpec::default()).unwrap();
        assert!((r.t_l2.unwrap() - 1.0).abs() <= 1e-12);
        assert!(r.coeffs.coeffs().iter().all(|c| c.abs() <= 1e-12));
        assert!(r.t_l2.unwrap() <= r.t_inf.unwrap());
    }

    #[test]
    fn runge_projection_degree_200() {
        let r = l2_projection(&runge, 200, None, &GridSpec::default()).unwrap();
        assert!(r.t_inf.unwrap() < 1e-8);
    }

    #[test]
    fn remez_examples() {
        let r = remez(&|x: f64| x * x, 1, RemezOptions::default()).unwrap();
        assert!((r.e_uniform.unwrap() - 0.5).abs() <= 1e-10);
        assert!((r.coeffs.coeffs()[0] - 0.5).abs() <= 1e-10);
        assert!(r.coeffs.coeffs()[1].abs() <= 1e-10);
        assert_eq!(r.extrema.as_ref().unwrap().len(), 3);

        let r = remez(&|x: f64| x * x * x, 2, RemezOptions::default()).unwrap();
        assert!((r.e_uniform.unwrap() - 0.25).abs() <= 1e-10);
        let p = &r.coeffs;
        for x in [-0.7, 0.1, 0.9] {
            assert!((basis::eval_polynomial(p, x).unwrap() - 0.75 * x).abs() <= 1e-9);
        }

        let r = remez(
            &|x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x,
            4,
            RemezOptions::default(),
        )
        .unwrap();
        assert!(r.e_uniform.unwrap() <= 1e-12);
    }

    #[test]
    fn remez_degree_cap() {
        assert!(matches!(
            remez(&runge, 51, RemezOptions::default()),
            Err(ApproxError::DegreeCap { n: 51, cap: 50 })
        ));
    }

    #[test]
    fn runge_methods_agree() {
        let grid = GridSpec::default();
        let e = estimate_en(&runge, 20, EnMethod::Remez, &grid).unwrap();
        let t = estimate_en(&runge, 20, EnMethod::ChebTail, &grid).unwrap();
        assert!(e <= t && t <= 4.0 * e, "remez {e} cheb_tail {t}");
    }

    #[test]
    fn sup_norm_examples() {
        let grid = GridSpec::default();
        assert_eq!(sup_norm_on_grid(&|_: f64| -2.5, &grid).unwrap(), 2.5);
        assert_eq!(sup_norm_on_grid(&|x: f64| x, &grid).unwrap(), 1.0);
        assert!((sup_norm_on_grid(&BasisFunction(5), &grid).unwrap() - SQRT_2).abs() <= 1e-6);
        let cheb = GridSpec::new(11, GridLayout::ChebyshevExtrema).unwrap();
        let pts = cheb.points();
        assert_eq!((pts[0], pts[10]), (-1.0, 1.0));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(GridSpec::uniform(1).is_err());
    }

    fn brute_oscillation(points: &[f64], values: &[f64], delta: f64) -> f64 {
        let mut best = 0.0_f64;
        for i in 0..points.len() {
            for j in i..points.len() {
                if points[j] - points[i] <= delta + 4.0 * f64::EPSILON {
                    best = best.max((values[i] - values[j]).abs());
                }
            }
        }
        best
    }

    #[test]
    fn modulus_examples() {
        let grid = GridSpec::default();
        let res = 2.0 / 10_000.0;
        assert_eq!(modulus_estimate(&|_: f64| 3.0, 0.5, &grid).unwrap(), 0.0);
        assert!((modulus_estimate(&|x: f64| x, 0.1, &grid).unwrap() - 0.1).abs() <= res);
        assert!((modulus_estimate(&|x: f64| x.abs(), 0.2, &grid).unwrap() - 0.2).abs() <= res);
        assert!(modulus_estimate(&|x: f64| x, 0.0, &grid).is_err());
    }

    #[test]
    fn modulus_matches_brute_force() {
        let f = |x: f64| (7.0 * x).sin() + (x * x * 3.0).cos() * x.abs().sqrt();
        for layout in [GridLayout::Uniform, GridLayout::ChebyshevExtrema] {
            let grid = GridSpec::new(301, layout).unwrap();
            let pts = grid.points();
            let vals: Vec<f64> = pts.iter().map(|&x| f(x)).collect();
            for delta in [0.001, 0.013, 0.2, 0.77, 2.0] {
                assert_eq!(
                    sliding_oscillation(&pts, &vals, delta),
                    brute_oscillation(&pts, &vals, delta),
                    "delta={delta}"
                );
            }
        }
    }
}
