//! LASSO homotopy stopped at the residual radius.
//!
//! Along the path of `min 0.5 ||A x - y||^2 + lambda ||x||_1` the residual
//! norm decreases as `lambda` decreases; the first point where it reaches
//! `eps` solves the constrained problem, with dual certificate `r / lambda`.

use nalgebra::{DMatrix, DVector};

use super::cholesky::UpdatableCholesky;
use super::{
    accurate_residual, min_norm_correction, restricted_kkt, support_duals, ScaledSolution,
    SolverError, SolverOptions,
};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Event {
    Cross,
    End,
    Join(usize),
    Remove(usize),
}

struct Path<'a> {
    a: &'a DMatrix<f64>,
    y: &'a DVector<f64>,
    x: Vec<f64>,
    active: Vec<usize>,
    signs: Vec<f64>,
    position: Vec<Option<usize>>,
    chol: UpdatableCholesky,
    col_norms: Vec<f64>,
}

impl<'a> Path<'a> {
    fn residual(&self) -> DVector<f64> {
        let mut r = self.y.clone();
        for &j in &self.active {
            r.axpy(-self.x[j], &self.a.column(j), 1.0);
        }
        r
    }

    fn try_join(&mut self, j: usize, sign: f64) -> bool {
        let col = self.a.column(j);
        let g: Vec<f64> = self
            .active
            .iter()
            .map(|&i| self.a.column(i).dot(&col))
            .collect();
        if !self.chol.push(&g, self.col_norms[j]) {
            return false;
        }
        self.position[j] = Some(self.active.len());
        self.active.push(j);
        self.signs.push(sign);
        true
    }

    fn remove(&mut self, j: usize) {
        let pos = self.position[j].expect("removed index is active");
        self.chol.remove(pos);
        self.active.remove(pos);
        self.signs.remove(pos);
        self.position[j] = None;
        for (p, &i) in self.active.iter().enumerate().skip(pos) {
            self.position[i] = Some(p);
        }
        self.x[j] = 0.0;
    }

    /// Rebuilds the factor from scratch, dropping columns that became dependent.
    fn refactor(&mut self) {
        let old: Vec<(usize, f64)> = self
            .active
            .iter()
            .copied()
            .zip(self.signs.iter().copied())
            .collect();
        self.chol.clear();
        self.active.clear();
        self.signs.clear();
        for p in self.position.iter_mut() {
            *p = None;
        }
        for (j, s) in old {
            if !self.try_join(j, s) {
                self.x[j] = 0.0;
            }
        }
    }

    /// Restores `A_S^T r = lambda s` on the active set, removing drift from
    /// the incremental updates.
    fn reanchor(&mut self, lambda: f64) {
        for _ in 0..2 {
            let r = accurate_residual(self.a, self.y, &self.x);
            let defect: Vec<f64> = self
                .active
                .iter()
                .zip(&self.signs)
                .map(|(&j, s)| self.a.column(j).dot(&r) - lambda * s)
                .collect();
            if defect.iter().all(|e| e.abs() <= 1e-12 * lambda) {
                return;
            }
            let dx = self.chol.solve(&defect);
            for (pos, &j) in self.active.iter().enumerate() {
                self.x[j] += dx[pos];
            }
        }
    }

    fn combine(&self, d: &[f64]) -> DVector<f64> {
        let mut v = DVector::zeros(self.a.nrows());
        for (pos, &j) in self.active.iter().enumerate() {
            v.axpy(d[pos], &self.a.column(j), 1.0);
        }
        v
    }

    /// Direction `d_S = G^{-1} s`, with `v = A_S d_S`, iteratively refined.
    fn direction(&self) -> (Vec<f64>, DVector<f64>) {
        let mut d = self.chol.solve(&self.signs);
        let mut v = self.combine(&d);
        for _ in 0..3 {
            let res: Vec<f64> = self
                .active
                .iter()
                .zip(&self.signs)
                .map(|(&j, s)| s - self.a.column(j).dot(&v))
                .collect();
            if res.iter().all(|r| r.abs() <= 1e-14) {
                break;
            }
            let dd = self.chol.solve(&res);
            d.iter_mut().zip(&dd).for_each(|(x, y)| *x += y);
            v = self.combine(&d);
        }
        (d, v)
    }
}

pub(super) fn solve(
    a: &DMatrix<f64>,
    y: &DVector<f64>,
    eps: f64,
    opts: &SolverOptions,
) -> Result<ScaledSolution, SolverError> {
    let (m, n) = a.shape();
    let max_active = m.min(n);
    let target = eps.max(0.5 * opts.feas_tol);
    let tiny = 1e-12;

    let mut path = Path {
        a,
        y,
        x: vec![0.0; n],
        active: Vec::new(),
        signs: Vec::new(),
        position: vec![None; n],
        chol: UpdatableCholesky::with_capacity(max_active),
        col_norms: a.column_iter().map(|c| c.norm_squared()).collect(),
    };

    let mut r = y.clone();
    let mut c = a.tr_mul(&r);
    let (j0, lambda0) =
        c.iter()
            .enumerate()
            .map(|(j, v)| (j, v.abs()))
            .fold(
                (0, 0.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
    if lambda0 == 0.0 {
        return Err(SolverError::Infeasible {
            residual: y.norm(),
            epsilon: eps,
        });
    }
    let mut lambda = lambda0;
    let mut blocked = vec![false; n];
    if !path.try_join(j0, c[j0].signum()) {
        blocked[j0] = true;
    }
    let mut just_added = Some(j0);
    let mut just_removed: Option<usize> = None;
    let mut iterations = 0;
    let mut finished = false;
    let mut best_dual = (0.0, DVector::zeros(m));
    let mut offer = |nu: &DVector<f64>, corr: f64| {
        if corr > 0.0 {
            let value = (y.dot(nu) - eps * nu.norm()) / corr;
            if value > best_dual.0 {
                best_dual = (value, nu.clone());
            }
        }
    };

    while iterations < opts.max_iter {
        iterations += 1;
        if path.active.is_empty() {
            break;
        }
        let (mut d, mut v) = path.direction();
        let mut av = a.tr_mul(&v);
        let drift = path
            .active
            .iter()
            .zip(&path.signs)
            .map(|(&j, s)| (av[j] - s).abs())
            .fold(0.0, f64::max);
        if drift > 1e-8 || iterations % 200 == 0 {
            path.refactor();
            if path.active.is_empty() {
                break;
            }
            (d, v) = path.direction();
            av = a.tr_mul(&v);
        }
        offer(&v, av.amax());
        offer(&r, c.amax());

        let (rr, rv, vv) = (r.norm_squared(), r.dot(&v), v.norm_squared());
        let mut best = (lambda, Event::End);
        if rr <= target * target {
            best = (0.0, Event::Cross);
        } else if vv > 0.0 {
            let perp = (&r - &v * (rv / vv)).norm_squared();
            let disc = vv * (target * target - perp);
            if disc >= 0.0 {
                let g = (rr - target * target) / (rv + disc.sqrt());
                if g >= 0.0 && g < best.0 {
                    best = (g, Event::Cross);
                }
            }
        }
        for (pos, &j) in path.active.iter().enumerate() {
            if Some(j) == just_added {
                continue;
            }
            let (xs, ds) = (path.x[j] * path.signs[pos], d[pos] * path.signs[pos]);
            let g = if xs < 0.0 || (xs == 0.0 && ds < 0.0) {
                0.0
            } else if ds < 0.0 {
                -path.x[j] / d[pos]
            } else {
                continue;
            };
            if g < best.0 {
                best = (g, Event::Remove(j));
            }
        }
        if path.active.len() < max_active {
            for j in 0..n {
                if path.position[j].is_some() || blocked[j] {
                    continue;
                }
                let fresh = Some(j) == just_removed;
                let (cj, aj) = (c[j], av[j]);
                let mut g = f64::INFINITY;
                if 1.0 - aj > tiny {
                    g = g.min((lambda - cj) / (1.0 - aj));
                }
                if 1.0 + aj > tiny {
                    g = g.min((lambda + cj) / (1.0 + aj));
                }
                if fresh && g <= tiny * lambda {
                    continue;
                }
                if g < 0.0 {
                    if cj.abs() >= lambda {
                        g = 0.0;
                    } else {
                        continue;
                    }
                }
                if g < best.0 {
                    best = (g, Event::Join(j));
                }
            }
        }

        let (gamma, event) = best;
        for (pos, &j) in path.active.iter().enumerate() {
            path.x[j] += gamma * d[pos];
        }
        lambda -= gamma;
        if event == Event::End {
            lambda = 0.0;
        }
        r = path.residual();
        c = a.tr_mul(&r);

        match event {
            Event::Cross => {
                finished = true;
                break;
            }
            Event::End => {
                finished = false;
                break;
            }
            Event::Join(j) => {
                let sign = c[j].signum();
                if path.try_join(j, sign) {
                    just_added = Some(j);
                    just_removed = None;
                } else {
                    blocked[j] = true;
                }
            }
            Event::Remove(j) => {
                path.remove(j);
                just_removed = Some(j);
                just_added = None;
                blocked.iter_mut().for_each(|b| *b = false);
            }
        }
        path.reanchor(lambda);
        r = path.residual();
        c = a.tr_mul(&r);
    }

    let mut x = std::mem::take(&mut path.x);
    let tolerance = eps * (1.0 + 1e-6) + opts.feas_tol;
    let mut residual = accurate_residual(a, y, &x).norm();
    if finished && eps < target && residual > 0.0 {
        let signs: Vec<f64> = path.active.iter().map(|&j| x[j].signum()).collect();
        if signs.iter().all(|s| *s != 0.0) {
            if let Some((polished, _)) = restricted_kkt(a, y, eps, target, &path.active, &signs) {
                let pr = accurate_residual(a, y, &polished).norm();
                if pr <= residual {
                    x = polished;
                    residual = pr;
                }
            }
        }
    }
    if residual > tolerance {
        if let Some(z) = min_norm_correction(a, y, &x) {
            let zr = accurate_residual(a, y, &z).norm();
            if zr < residual {
                x = z;
                residual = zr;
            }
        }
    }
    if residual > tolerance {
        if iterations < opts.max_iter {
            return Err(SolverError::Infeasible {
                residual,
                epsilon: eps,
            });
        }
        finished = false;
    } else if iterations < opts.max_iter {
        finished = true;
    }

    let r = accurate_residual(a, y, &x);
    let mut duals = vec![best_dual.1];
    if path.signs.iter().all(|s| *s != 0.0) {
        duals.extend(support_duals(a, &r, &path.active, &path.signs, |b| {
            Some(path.chol.solve(b))
        }));
    }
    duals.push(r);
    Ok(ScaledSolution {
        x,
        duals,
        iterations,
        finished,
    })
}
