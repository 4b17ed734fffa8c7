//! Cholesky factor of a Gram matrix that grows and shrinks one column at a time.

use nalgebra::DMatrix;

/// Upper-triangular `R` with `R^T R = G`, stored in the leading `k x k` block.
#[derive(Debug, Clone)]
pub(crate) struct UpdatableCholesky {
    r: DMatrix<f64>,
    k: usize,
}

impl UpdatableCholesky {
    pub fn with_capacity(cap: usize) -> Self {
        Self {
            r: DMatrix::zeros(cap.max(1), cap.max(1)),
            k: 0,
        }
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.k
    }

    pub fn clear(&mut self) {
        self.r.fill(0.0);
        self.k = 0;
    }

    /// Appends a column with cross products `g = A_S^T a` and `diag = a^T a`.
    ///
    /// Returns `false`, leaving the factor unchanged, when the new column is
    /// numerically dependent on the current ones.
    pub fn push(&mut self, g: &[f64], diag: f64) -> bool {
        let k = self.k;
        debug_assert_eq!(g.len(), k);
        if k == self.r.nrows() {
            return false;
        }
        let mut u = vec![0.0; k];
        for i in 0..k {
            let mut acc = g[i];
            for (l, ul) in u.iter().enumerate().take(i) {
                acc -= self.r[(l, i)] * ul;
            }
            u[i] = acc / self.r[(i, i)];
        }
        let delta = diag - u.iter().map(|v| v * v).sum::<f64>();
        if !(delta > 1e-11 * diag) {
            return false;
        }
        for (i, ui) in u.into_iter().enumerate() {
            self.r[(i, k)] = ui;
        }
        self.r[(k, k)] = delta.sqrt();
        self.k += 1;
        true
    }

    /// Deletes column `i` and restores triangular form with Givens rotations.
    pub fn remove(&mut self, i: usize) {
        let k = self.k;
        assert!(i < k);
        for j in i..k - 1 {
            for row in 0..=j + 1 {
                self.r[(row, j)] = self.r[(row, j + 1)];
            }
        }
        for row in 0..k {
            self.r[(row, k - 1)] = 0.0;
        }
        for j in i..k - 1 {
            let (a, b) = (self.r[(j, j)], self.r[(j + 1, j)]);
            let h = a.hypot(b);
            if h == 0.0 {
                continue;
            }
            let (c, s) = (a / h, b / h);
            for col in j..k - 1 {
                let (p, q) = (self.r[(j, col)], self.r[(j + 1, col)]);
                self.r[(j, col)] = c * p + s * q;
                self.r[(j + 1, col)] = -s * p + c * q;
            }
            self.r[(j + 1, j)] = 0.0;
        }
        for col in 0..k {
            self.r[(k - 1, col)] = 0.0;
        }
        self.k -= 1;
    }

    /// Solves `G x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let k = self.k;
        debug_assert_eq!(b.len(), k);
        let mut t = b.to_vec();
        for i in 0..k {
            let mut acc = t[i];
            for l in 0..i {
                acc -= self.r[(l, i)] * t[l];
            }
            t[i] = acc / self.r[(i, i)];
        }
        for i in (0..k).rev() {
            let mut acc = t[i];
            for l in i + 1..k {
                acc -= self.r[(i, l)] * t[l];
            }
            t[i] = acc / self.r[(i, i)];
        }
        t
    }
}
