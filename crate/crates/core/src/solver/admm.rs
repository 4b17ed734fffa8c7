//! Graph-form ADMM for `min ||x||_1 + I(||u - y|| <= eps)` subject to `u = A x`.
//!
//! The graph projection `(I + A^T A)^{-1}` is applied through the Woodbury
//! identity with a Cholesky factor of the `m x m` matrix `I + A A^T`. Every
//! few iterations the support of the iterate is polished by solving the
//! sign-fixed problem exactly; a polished point whose dual certificate closes
//! the gap ends the run.

use nalgebra::{DMatrix, DVector};

use super::{
    accurate_residual, restricted_kkt, support_duals, ScaledSolution, SolverError, SolverOptions,
};

const RELAX: f64 = 1.6;
const POLISH_EVERY: usize = 50;

fn soft(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

fn project_ball(v: &DVector<f64>, center: &DVector<f64>, radius: f64) -> DVector<f64> {
    let diff = v - center;
    let norm = diff.norm();
    if norm <= radius {
        v.clone()
    } else {
        center + diff * (radius / norm)
    }
}

/// Polished candidate and its dual points, if the support admits one.
fn polish(
    a: &DMatrix<f64>,
    y: &DVector<f64>,
    eps: f64,
    x: &[f64],
) -> Option<(Vec<f64>, Vec<DVector<f64>>)> {
    let support: Vec<usize> = (0..x.len()).filter(|&j| x[j] != 0.0).collect();
    if support.is_empty() || support.len() > a.nrows() {
        return None;
    }
    let signs: Vec<f64> = support.iter().map(|&j| x[j].signum()).collect();
    let (cand, _) = restricted_kkt(a, y, eps, 0.0, &support, &signs)?;
    let sub = a.select_columns(&support);
    let chol = sub.tr_mul(&sub).cholesky()?;
    let r = accurate_residual(a, y, &cand);
    let mut duals = support_duals(a, &r, &support, &signs, |b| {
        Some(
            chol.solve(&DVector::from_column_slice(b))
                .iter()
                .copied()
                .collect(),
        )
    });
    duals.push(r);
    Some((cand, duals))
}

pub(super) fn solve(
    a: &DMatrix<f64>,
    y: &DVector<f64>,
    eps: f64,
    opts: &SolverOptions,
) -> Result<ScaledSolution, SolverError> {
    let (m, n) = a.shape();
    let mut inner = a * a.transpose();
    for i in 0..m {
        inner[(i, i)] += 1.0;
    }
    let chol = inner.cholesky().ok_or_else(|| {
        SolverError::InvalidOptions("graph projection is not positive definite".into())
    })?;
    let graph_project = |c: &DVector<f64>, d: &DVector<f64>| {
        let w = c + a.tr_mul(d);
        let zx = &w - a.tr_mul(&chol.solve(&(a * &w)));
        let zu = a * &zx;
        (zx, zu)
    };

    let aty = a.tr_mul(y).amax();
    let rho0 = if aty > 0.0 {
        (n as f64).sqrt() / aty
    } else {
        1.0
    };
    let (rho_min, rho_max) = (rho0 * 1e-4, rho0 * 1e4);
    let mut rho = rho0;

    let mut x = DVector::<f64>::zeros(n);
    let mut zx = DVector::<f64>::zeros(n);
    let mut zu = DVector::<f64>::zeros(m);
    let mut lx = DVector::<f64>::zeros(n);
    let mut lu = DVector::<f64>::zeros(m);
    let mut best: Option<(f64, Vec<f64>, Vec<DVector<f64>>)> = None;
    let tol = 1e-10;

    for it in 1..=opts.max_iter {
        x = (&zx - &lx).map(|v| soft(v, 1.0 / rho));
        let u = project_ball(&(&zu - &lu), y, eps);
        let xh = &x * RELAX + &zx * (1.0 - RELAX);
        let uh = &u * RELAX + &zu * (1.0 - RELAX);
        let zx_old = zx.clone();
        (zx, zu) = graph_project(&(&xh + &lx), &(&uh + &lu));
        lx += &xh - &zx;
        lu += &uh - &zu;

        let prim = ((&x - &zx).norm_squared() + (&u - &zu).norm_squared()).sqrt();
        let dual = rho * (&zx - &zx_old).norm();
        let prim_scale = x.norm().max(zx.norm()).max(1e-300);
        let dual_scale = (rho * lx.norm())
            .max(rho * a.tr_mul(&lu).norm())
            .max(1e-300);
        let (prim_rel, dual_rel) = (prim / prim_scale, dual / dual_scale);

        if it % POLISH_EVERY == 0 || (prim_rel < tol && dual_rel < tol) {
            if let Some((cand, duals)) = polish(a, y, eps, x.as_slice()) {
                let obj: f64 = cand.iter().map(|v| v.abs()).sum();
                let dual_obj = duals
                    .iter()
                    .map(|nu| super::dual_value(a, y, eps, nu))
                    .fold(0.0, f64::max);
                let gap = (obj - dual_obj).abs() / obj.max(dual_obj).max(f64::MIN_POSITIVE);
                if gap <= opts.rel_gap_tol {
                    return Ok(ScaledSolution {
                        x: cand,
                        duals,
                        iterations: it,
                        finished: true,
                    });
                }
                if best.as_ref().is_none_or(|b| gap < b.0) {
                    best = Some((gap, cand, duals));
                }
            }
        }

        if it % 10 == 0 {
            let scale = if prim_rel > 10.0 * dual_rel {
                2.0
            } else if dual_rel > 10.0 * prim_rel {
                0.5
            } else {
                1.0
            };
            let next = (rho * scale).clamp(rho_min, rho_max);
            if next != rho {
                lx *= rho / next;
                lu *= rho / next;
                rho = next;
            }
        }
    }

    let (x, duals) = match best {
        Some((_, cand, duals)) => (cand, duals),
        None => (x.iter().copied().collect(), vec![lu * -rho]),
    };
    Ok(ScaledSolution {
        x,
        duals,
        iterations: opts.max_iter,
        finished: false,
    })
}
