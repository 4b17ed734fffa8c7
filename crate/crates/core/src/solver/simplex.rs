//! Primal simplex for `min ||x||_1` subject to `A x = y`, warm-started from an
//! approximate solution.
//!
//! Each basis is a set of `m` linearly independent columns. Writing
//! `x_B = B^{-1} y` and `s = sign(x_B)`, the basis is feasible for the split
//! formulation `x = u - v`, `u, v >= 0`, and its dual point solves
//! `B^T nu = s`. The basis is optimal once `||A^T nu||_inf <= 1`.

use nalgebra::{DMatrix, DVector};

use super::accurate_residual;

/// Consecutive degenerate pivots after which pricing switches to Bland's rule.
const DEGENERATE_LIMIT: usize = 20;

/// Pivots between refactorizations of the basis inverse.
const REFACTOR_EVERY: usize = 100;

pub(super) struct Vertex {
    pub x: Vec<f64>,
    pub nu: DVector<f64>,
    pub optimal: bool,
}

/// Picks `m` independent columns, preferring the support of `x0` by magnitude
/// and then the columns least explained by those already chosen.
fn initial_basis(a: &DMatrix<f64>, x0: &[f64]) -> Option<Vec<usize>> {
    let (m, n) = a.shape();
    let norms: Vec<f64> = a.column_iter().map(|c| c.norm()).collect();
    let mut rest = a.clone();
    let mut chosen = Vec::with_capacity(m);
    let mut used = vec![false; n];
    let take =
        |k: usize, rest: &mut DMatrix<f64>, chosen: &mut Vec<usize>, used: &mut Vec<bool>| {
            let q = rest.column(k) / rest.column(k).norm();
            let proj = rest.tr_mul(&q);
            rest.ger(-1.0, &q, &proj, 1.0);
            chosen.push(k);
            used[k] = true;
        };

    let mut support: Vec<usize> = (0..n).filter(|&j| x0[j] != 0.0).collect();
    support.sort_by(|&i, &j| x0[j].abs().total_cmp(&x0[i].abs()));
    for j in support {
        if chosen.len() == m {
            break;
        }
        if rest.column(j).norm() > 1e-8 * norms[j] {
            take(j, &mut rest, &mut chosen, &mut used);
        }
    }
    while chosen.len() < m {
        let (k, score) = (0..n)
            .filter(|&j| !used[j] && norms[j] > 0.0)
            .map(|j| (j, rest.column(j).norm() / norms[j]))
            .fold(
                (usize::MAX, 0.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if k == usize::MAX || score <= 1e-10 {
            return None;
        }
        take(k, &mut rest, &mut chosen, &mut used);
    }
    Some(chosen)
}

/// Explicit inverse of the basis matrix, updated in product form.
struct Basis {
    cols: Vec<usize>,
    inv: DMatrix<f64>,
    since_refactor: usize,
}

impl Basis {
    fn new(a: &DMatrix<f64>, cols: Vec<usize>) -> Option<Self> {
        let inv = a.select_columns(&cols).try_inverse()?;
        Some(Self {
            cols,
            inv,
            since_refactor: 0,
        })
    }

    /// Basic solution, refined against the accurate residual.
    fn solution(&self, a: &DMatrix<f64>, y: &DVector<f64>) -> Vec<f64> {
        let mut full = vec![0.0; a.ncols()];
        let mut xb = &self.inv * y;
        for step in 0..4 {
            for (pos, &j) in self.cols.iter().enumerate() {
                full[j] = xb[pos];
            }
            if step == 3 {
                break;
            }
            xb += &self.inv * accurate_residual(a, y, &full);
        }
        full
    }

    /// Replaces the column at `pos` by column `q`, given `w = B^{-1} a_q`.
    /// Returns whether the inverse was refactored.
    fn replace(
        &mut self,
        a: &DMatrix<f64>,
        pos: usize,
        q: usize,
        w: &DVector<f64>,
    ) -> Option<bool> {
        self.cols[pos] = q;
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY {
            *self = Self::new(a, std::mem::take(&mut self.cols))?;
            return Some(true);
        }
        let pivot = w[pos];
        let row = self.inv.row(pos) / pivot;
        self.inv.ger(-1.0, w, &row.transpose(), 1.0);
        self.inv.set_row(pos, &row);
        Some(false)
    }
}

pub(super) fn solve(
    a: &DMatrix<f64>,
    y: &DVector<f64>,
    x0: &[f64],
    max_pivots: usize,
) -> Option<Vertex> {
    let (m, n) = a.shape();
    if m == 0 || m > n {
        return None;
    }
    let mut basis = Basis::new(a, initial_basis(a, x0)?)?;
    let mut degenerate = 0;
    let mut in_basis = vec![false; n];
    basis.cols.iter().for_each(|&j| in_basis[j] = true);
    let mut x = basis.solution(a, y);
    let mut fresh = true;
    for _ in 0..max_pivots {
        let signs = DVector::from_iterator(
            m,
            basis
                .cols
                .iter()
                .map(|&j| if x[j] < 0.0 { -1.0 } else { 1.0 }),
        );
        let nu = basis.inv.tr_mul(&signs);
        let corr = a.tr_mul(&nu);

        let bland = degenerate >= DEGENERATE_LIMIT;
        let mut entering = None;
        let mut best = 1e-12;
        for j in 0..n {
            if in_basis[j] {
                continue;
            }
            let excess = corr[j].abs() - 1.0;
            if excess > best {
                entering = Some(j);
                if bland {
                    break;
                }
                best = excess;
            }
        }
        let Some(q) = entering else {
            if !fresh {
                // Confirm optimality from an accurately recomputed vertex.
                x = basis.solution(a, y);
                fresh = true;
                continue;
            }
            let nu = refined_dual(a, &basis.cols, &signs).unwrap_or(nu);
            return Some(Vertex {
                x,
                nu,
                optimal: true,
            });
        };

        // Raising |x_q| along sign(corr_q) moves the basics by -t * s * B^{-1} a_q.
        let s = corr[q].signum();
        let w = &basis.inv * a.column(q);
        let scale = w.amax();
        let mut leave: Option<(f64, usize)> = None;
        for (pos, &j) in basis.cols.iter().enumerate() {
            let rate = signs[pos] * s * w[pos];
            if rate <= 1e-12 * scale {
                continue;
            }
            let t = (x[j] * signs[pos]).max(0.0) / rate;
            let better = match leave {
                None => true,
                Some((tb, pb)) => t < tb || (t == tb && basis.cols[pos] < basis.cols[pb]),
            };
            if better {
                leave = Some((t, pos));
            }
        }
        let (t, pos) = leave?;
        degenerate = if t == 0.0 { degenerate + 1 } else { 0 };
        for (p, &j) in basis.cols.iter().enumerate() {
            x[j] -= t * s * w[p];
        }
        let out = basis.cols[pos];
        x[out] = 0.0;
        x[q] = t * s;
        in_basis[out] = false;
        in_basis[q] = true;
        fresh = basis.replace(a, pos, q, &w)?;
        if fresh {
            x = basis.solution(a, y);
        }
    }
    let x = basis.solution(a, y);
    let signs = DVector::from_iterator(
        m,
        basis
            .cols
            .iter()
            .map(|&j| if x[j] < 0.0 { -1.0 } else { 1.0 }),
    );
    let nu = refined_dual(a, &basis.cols, &signs)?;
    Some(Vertex {
        x,
        nu,
        optimal: false,
    })
}

/// Solves `B^T nu = signs` from a fresh factorization.
fn refined_dual(a: &DMatrix<f64>, cols: &[usize], signs: &DVector<f64>) -> Option<DVector<f64>> {
    let bt = a.select_columns(cols).transpose();
    let lu = bt.clone().lu();
    let mut nu = lu.solve(signs)?;
    let res = signs - &bt * &nu;
    nu += lu.solve(&res)?;
    Some(nu)
}
