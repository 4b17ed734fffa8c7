//! Constrained l1 and weighted l1 minimization.
//!
//! Solves `min sum_j w_j |z_j|` subject to `||A z - y||_2 <= eps`. Substituting
//! `x = W z` turns every weighted problem into an unweighted one for the
//! column-scaled matrix `A W^{-1}`, which is what the algorithms operate on.
//!
//! Two algorithms are available. [`Algorithm::Homotopy`] follows the
//! piecewise-linear LASSO path from `z = 0` until the residual reaches `eps`,
//! which gives an exact solution in finitely many steps. [`Algorithm::Admm`]
//! is a graph-form splitting scheme alternating soft thresholding with
//! projection onto the residual ball.

mod admm;
mod cholesky;
mod homotopy;
mod simplex;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("epsilon must be finite and nonnegative, got {0}")]
    InvalidEpsilon(f64),
    #[error("weight {index} is {value}; weights must be finite and at least 1")]
    InvalidWeight { index: usize, value: f64 },
    #[error("unweighted solve called on a weighted problem")]
    UnexpectedWeights,
    #[error("weighted solve called without weights")]
    MissingWeights,
    #[error("data contains a non-finite entry")]
    NonFinite,
    #[error(
        "constraint cannot be met: smallest attainable residual {residual:e} exceeds {epsilon:e}"
    )]
    Infeasible { residual: f64, epsilon: f64 },
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
}

/// `min ||W z||_1` subject to `||A z - y||_2 <= epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedL1Problem {
    a: DMatrix<f64>,
    y: DVector<f64>,
    epsilon: f64,
    weights: Option<Vec<f64>>,
}

impl ConstrainedL1Problem {
    pub fn new(
        a: DMatrix<f64>,
        y: DVector<f64>,
        epsilon: f64,
        weights: Option<Vec<f64>>,
    ) -> Result<Self, SolverError> {
        if a.nrows() != y.len() {
            return Err(SolverError::Dimension(format!(
                "A has {} rows but y has {} entries",
                a.nrows(),
                y.len()
            )));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(SolverError::InvalidEpsilon(epsilon));
        }
        if a.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(SolverError::NonFinite);
        }
        if let Some(w) = &weights {
            if w.len() != a.ncols() {
                return Err(SolverError::Dimension(format!(
                    "A has {} columns but {} weights were given",
                    a.ncols(),
                    w.len()
                )));
            }
            if let Some((index, &value)) = w
                .iter()
                .enumerate()
                .find(|(_, v)| !(**v >= 1.0 && v.is_finite()))
            {
                return Err(SolverError::InvalidWeight { index, value });
            }
        }
        Ok(Self {
            a,
            y,
            epsilon,
            weights,
        })
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// `sum w_j |z_j|` with unit weights when none are set.
    pub fn objective(&self, z: &[f64]) -> f64 {
        match &self.weights {
            Some(w) => z.iter().zip(w).map(|(v, wj)| wj * v.abs()).sum(),
            None => z.iter().map(|v| v.abs()).sum(),
        }
    }

    /// `||A z - y||_2`.
    pub fn residual(&self, z: &[f64]) -> f64 {
        (&self.a * DVector::from_column_slice(z) - &self.y).norm()
    }

    /// The column-scaled matrix `A W^{-1}`.
    fn scaled_matrix(&self) -> DMatrix<f64> {
        match &self.weights {
            None => self.a.clone(),
            Some(w) => {
                let mut a = self.a.clone();
                for (j, mut col) in a.column_iter_mut().enumerate() {
                    col /= w[j];
                }
                a
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[default]
    Homotopy,
    Admm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub feas_tol: f64,
    pub rel_gap_tol: f64,
    pub max_iter: usize,
    pub algorithm: Algorithm,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            feas_tol: 1e-9,
            rel_gap_tol: 1e-8,
            max_iter: 50_000,
            algorithm: Algorithm::Homotopy,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.feas_tol > 0.0) || !(self.rel_gap_tol > 0.0) || self.max_iter == 0 {
            return Err(SolverError::InvalidOptions(
                "tolerances and max_iter must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverResult {
    pub z: Vec<f64>,
    pub residual_l2: f64,
    pub objective: f64,
    /// Value of a dual feasible point, a lower bound on the optimal objective.
    pub dual_objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl SolverResult {
    /// `max(objective - dual, 0) / max(objective, dual, tiny)`.
    ///
    /// A dual value above the objective means `z` uses the feasibility
    /// slack; that is accounted for by the residual check, not the gap.
    pub fn relative_gap(&self) -> f64 {
        let scale = self
            .objective
            .abs()
            .max(self.dual_objective.abs())
            .max(f64::MIN_POSITIVE);
        (self.objective - self.dual_objective).max(0.0) / scale
    }
}

/// Solution of the scaled problem `min ||x||_1`, `||A_s x - y|| <= eps`.
struct ScaledSolution {
    x: Vec<f64>,
    /// Candidate dual points, in any scaling; the best one certifies the gap.
    duals: Vec<DVector<f64>>,
    iterations: usize,
    finished: bool,
}

/// Unweighted solve; rejects problems carrying weights.
pub fn solve_bpdn(
    p: &ConstrainedL1Problem,
    opts: &SolverOptions,
) -> Result<SolverResult, SolverError> {
    if p.weights.is_some() {
        return Err(SolverError::UnexpectedWeights);
    }
    solve(p, opts)
}

/// Weighted solve; requires weights.
pub fn solve_weighted_bpdn(
    p: &ConstrainedL1Problem,
    opts: &SolverOptions,
) -> Result<SolverResult, SolverError> {
    if p.weights.is_none() {
        return Err(SolverError::MissingWeights);
    }
    solve(p, opts)
}

/// Solves either form, dispatching on `opts.algorithm`.
pub fn solve(p: &ConstrainedL1Problem, opts: &SolverOptions) -> Result<SolverResult, SolverError> {
    opts.validate()?;
    let n = p.a.ncols();
    let y_norm = p.y.norm();
    if y_norm <= p.epsilon || n == 0 {
        if y_norm > p.epsilon + opts.feas_tol {
            return Err(SolverError::Infeasible {
                residual: y_norm,
                epsilon: p.epsilon,
            });
        }
        return Ok(SolverResult {
            z: vec![0.0; n],
            residual_l2: y_norm,
            objective: 0.0,
            dual_objective: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    let a = p.scaled_matrix();
    let sol = match opts.algorithm {
        Algorithm::Homotopy => homotopy::solve(&a, &p.y, p.epsilon, opts)?,
        Algorithm::Admm => admm::solve(&a, &p.y, p.epsilon, opts)?,
    };

    let mut result = assemble(p, &a, &sol, opts);
    if !result.converged && opts.algorithm == Algorithm::Homotopy {
        if let Some(v) = simplex::solve(&a, &p.y, &sol.x, 3 * a.nrows()) {
            let vertex = ScaledSolution {
                x: v.x,
                duals: vec![v.nu],
                iterations: sol.iterations,
                finished: v.optimal,
            };
            let polished = assemble(p, &a, &vertex, opts);
            let feasible = polished.residual_l2 <= p.epsilon * (1.0 + 1e-6) + opts.feas_tol;
            if feasible && (polished.converged || polished.relative_gap() < result.relative_gap()) {
                result = polished;
            }
        }
    }
    Ok(result)
}

/// Maps a scaled solution back and certifies it with its best dual point.
fn assemble(
    p: &ConstrainedL1Problem,
    a: &DMatrix<f64>,
    sol: &ScaledSolution,
    opts: &SolverOptions,
) -> SolverResult {
    let z: Vec<f64> = match &p.weights {
        Some(w) => sol.x.iter().zip(w).map(|(x, wj)| x / wj).collect(),
        None => sol.x.clone(),
    };
    let residual_l2 = p.residual(&z);
    let objective = p.objective(&z);
    let dual_objective = sol
        .duals
        .iter()
        .map(|nu| dual_value(a, &p.y, p.epsilon, nu))
        .fold(0.0, f64::max);
    let feasible = residual_l2 <= p.epsilon * (1.0 + 1e-6) + opts.feas_tol;
    let mut result = SolverResult {
        z,
        residual_l2,
        objective,
        dual_objective,
        iterations: sol.iterations,
        converged: false,
    };
    result.converged = sol.finished && feasible && result.relative_gap() <= opts.rel_gap_tol;
    result
}

/// `y - A x` accumulated in doubled precision (error-free products and sums).
pub(crate) fn accurate_residual(a: &DMatrix<f64>, y: &DVector<f64>, x: &[f64]) -> DVector<f64> {
    let mut hi = y.clone();
    let mut lo = DVector::<f64>::zeros(y.len());
    for (j, &xj) in x.iter().enumerate() {
        if xj == 0.0 {
            continue;
        }
        for (i, &aij) in a.column(j).iter().enumerate() {
            let p = -aij * xj;
            let p_err = (-aij).mul_add(xj, -p);
            let s = hi[i] + p;
            let bp = s - hi[i];
            let s_err = (hi[i] - (s - bp)) + (p - bp);
            hi[i] = s;
            lo[i] += s_err + p_err;
        }
    }
    hi + lo
}

/// Moves `x` by the minimum-norm step onto `A z = y`, twice.
///
/// Returns `None` when `A` does not have full row rank.
pub(crate) fn min_norm_correction(
    a: &DMatrix<f64>,
    y: &DVector<f64>,
    x: &[f64],
) -> Option<Vec<f64>> {
    let (m, n) = a.shape();
    if m > n {
        return None;
    }
    let qr = a.transpose().qr();
    let r = qr.r();
    let scale = r.diagonal().amax();
    if r.diagonal().iter().any(|d| !(d.abs() > 1e-14 * scale)) {
        return None;
    }
    let q = qr.q();
    let mut z = x.to_vec();
    for _ in 0..2 {
        let res = accurate_residual(a, y, &z);
        let w = r.tr_solve_upper_triangular(&res)?;
        let step = &q * w;
        z.iter_mut().zip(step.iter()).for_each(|(zi, d)| *zi += d);
    }
    Some(z)
}

/// `y^T nu - eps ||nu||` for `nu` rescaled to `||A^T nu||_inf = 1`.
fn dual_value(a: &DMatrix<f64>, y: &DVector<f64>, eps: f64, nu: &DVector<f64>) -> f64 {
    let corr = a.tr_mul(nu).amax();
    if corr == 0.0 || !corr.is_finite() {
        return 0.0;
    }
    let nu = nu / corr;
    (y.dot(&nu) - eps * nu.norm()).max(0.0)
}

/// Dual points built from a support `S` with signs `s`, given a solver for
/// the Gram matrix `G = A_S^T A_S`: the residual `r` corrected so that
/// `A_S^T nu` is exactly parallel to `s`, and the direction `A_S G^{-1} s`.
fn support_duals<F>(
    a: &DMatrix<f64>,
    r: &DVector<f64>,
    support: &[usize],
    signs: &[f64],
    solve: F,
) -> Vec<DVector<f64>>
where
    F: Fn(&[f64]) -> Option<Vec<f64>>,
{
    let mut out = Vec::new();
    if support.is_empty() {
        return out;
    }
    let combine = |coef: &[f64], base: &DVector<f64>| {
        let mut v = base.clone();
        for (pos, &j) in support.iter().enumerate() {
            v.axpy(coef[pos], &a.column(j), 1.0);
        }
        v
    };
    let zero = DVector::zeros(r.len());
    // Iterative refinement of `G x = rhs` against the explicit columns.
    let refined = |rhs: &[f64]| {
        let mut x = solve(rhs)?;
        for _ in 0..3 {
            let v = combine(&x, &zero);
            let res: Vec<f64> = support
                .iter()
                .zip(rhs)
                .map(|(&j, b)| b - a.column(j).dot(&v))
                .collect();
            let dx = solve(&res)?;
            x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi += d);
        }
        Some(x)
    };
    let c_s: Vec<f64> = support.iter().map(|&j| a.column(j).dot(r)).collect();
    let t = c_s.iter().zip(signs).map(|(c, s)| c * s).sum::<f64>() / support.len() as f64;
    let defect: Vec<f64> = c_s.iter().zip(signs).map(|(c, s)| t * s - c).collect();
    if let Some(fix) = refined(&defect) {
        out.push(combine(&fix, r));
    }
    if let Some(d) = refined(signs) {
        out.push(combine(&d, &zero));
    }
    out
}

/// Sign-consistent minimizer of `s^T x` over `||A_S x - y|| <= eps` on a fixed support.
///
/// Returns `None` when the support cannot reach the ball (within `slack`) or
/// the signs flip.
fn restricted_kkt(
    a: &DMatrix<f64>,
    y: &DVector<f64>,
    eps: f64,
    slack: f64,
    support: &[usize],
    signs: &[f64],
) -> Option<(Vec<f64>, DVector<f64>)> {
    let k = support.len();
    if k == 0 {
        return None;
    }
    let sub = a.select_columns(support);
    let gram = sub.tr_mul(&sub);
    let chol = gram.cholesky()?;
    let x_ls = chol.solve(&sub.tr_mul(y));
    let r_ls = y - &sub * &x_ls;
    let r_ls2 = r_ls.norm_squared();
    if r_ls2.sqrt() > eps + slack {
        return None;
    }
    let s = DVector::from_column_slice(signs);
    let g_inv_s = chol.solve(&s);
    let quad = s.dot(&g_inv_s);
    if !(quad > 0.0) {
        return None;
    }
    let t = ((eps * eps - r_ls2).max(0.0) / quad).sqrt();
    let x = &x_ls - &g_inv_s * t;
    if x.iter().zip(signs).any(|(v, s)| v * s < 0.0) {
        return None;
    }
    let r = y - &sub * &x;
    let mut full = vec![0.0; a.ncols()];
    for (pos, &j) in support.iter().enumerate() {
        full[j] = x[pos];
    }
    Some((full, r))
}
