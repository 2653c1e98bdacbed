//! Dense two-phase simplex for the tiny linear programs behind nullspace
//! optimization. Bland's rule is used for both pivot choices, which rules
//! out cycling and makes every run bit-identical.

use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpResult<T> {
    Optimal { x: Vec<T>, objective: T },
    Unbounded,
    Infeasible,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>, // constraint rows, last column is the rhs
    basis: Vec<usize>,
    n_structural: usize,
    n_slack: usize,
    n_artificial: usize,
    pivot_tol: T,
}

impl<T: Scalar> Tableau<T> {
    fn n_columns(&self) -> usize {
        self.n_structural + self.n_slack + self.n_artificial
    }

    fn rhs(&self, row: usize) -> T {
        let cols = self.n_columns();
        self.rows[row][cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let cols = self.n_columns() + 1;
        let p = self.rows[row][col];
        for j in 0..cols {
            self.rows[row][j] = self.rows[row][j] / p;
        }
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let f = self.rows[i][col];
            if f == T::zero() {
                continue;
            }
            for j in 0..cols {
                let delta = f * self.rows[row][j];
                self.rows[i][j] = self.rows[i][j] - delta;
            }
        }
        self.basis[row] = col;
    }

    /// Reduced cost of column `j` for objective `cost` (maximization form):
    /// `cost[j] - sum_i cost[basis[i]] * rows[i][j]`.
    fn reduced_cost(&self, cost: &[T], j: usize) -> T {
        let mut z = T::zero();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = cost[self.basis[i]];
            if cb != T::zero() {
                z += cb * row[j];
            }
        }
        cost[j] - z
    }

    fn objective(&self, cost: &[T]) -> T {
        let mut v = T::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            v += cost[b] * self.rhs(i);
        }
        v
    }

    /// Runs simplex iterations for the given objective. Columns for which
    /// `allowed` is false are never entered. Returns false on unboundedness.
    fn run(&mut self, cost: &[T], allowed: impl Fn(usize) -> bool) -> bool {
        // generous safety cap; Bland's rule terminates long before this
        let max_iters = 100_000;
        for _ in 0..max_iters {
            // Bland: smallest improving column index
            let mut entering = None;
            for j in 0..self.n_columns() {
                if !allowed(j) || self.basis.contains(&j) {
                    continue;
                }
                if self.reduced_cost(cost, j) > self.pivot_tol {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return true; // optimal
            };

            // ratio test; ties broken by smallest basis variable index (Bland)
            let mut leaving: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][col];
                if a > self.pivot_tol {
                    let ratio = self.rhs(i) / a;
                    match leaving {
                        None => leaving = Some((i, ratio)),
                        Some((best_row, best_ratio)) => {
                            if ratio < best_ratio
                                || (ratio == best_ratio
                                    && self.basis[i] < self.basis[best_row])
                            {
                                leaving = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((row, _)) = leaving else {
                return false; // unbounded direction
            };
            self.pivot(row, col);
        }
        debug_assert!(false, "simplex iteration cap reached");
        true
    }
}

/// Maximizes `c . x` subject to `rows[i] . x <= rhs[i]` and `x >= 0`.
pub(crate) fn maximize<T: Scalar>(c: &[T], rows: &[Vec<T>], rhs: &[T]) -> LpResult<T> {
    let n = c.len();
    let m = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    debug_assert_eq!(rhs.len(), m);

    // rows with negative rhs get flipped and take an artificial variable
    let needs_artificial: Vec<bool> = rhs.iter().map(|&b| b < T::zero()).collect();
    let n_artificial = needs_artificial.iter().filter(|&&x| x).count();
    let n_cols = n + m + n_artificial;

    let mut tableau_rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut artificial_seen = 0;
    for i in 0..m {
        let flip = if needs_artificial[i] { -T::one() } else { T::one() };
        let mut row = vec![T::zero(); n_cols + 1];
        for j in 0..n {
            row[j] = flip * rows[i][j];
        }
        row[n + i] = flip; // slack
        if needs_artificial[i] {
            let col = n + m + artificial_seen;
            row[col] = T::one();
            basis.push(col);
            artificial_seen += 1;
        } else {
            basis.push(n + i);
        }
        row[n_cols] = flip * rhs[i];
        tableau_rows.push(row);
    }

    let mut t = Tableau {
        rows: tableau_rows,
        basis,
        n_structural: n,
        n_slack: m,
        n_artificial,
        pivot_tol: T::epsilon() * lit(1e3),
    };

    let artificial_start = n + m;

    if n_artificial > 0 {
        // phase 1: drive the artificial variables to zero
        let mut phase1_cost = vec![T::zero(); n_cols];
        for j in artificial_start..n_cols {
            phase1_cost[j] = -T::one();
        }
        let bounded = t.run(&phase1_cost, |_| true);
        debug_assert!(bounded, "phase-1 objective is bounded by construction");
        let feas_tol = t.pivot_tol * lit(1e3);
        if t.objective(&phase1_cost) < -feas_tol {
            return LpResult::Infeasible;
        }
        // pivot remaining zero-level artificials out of the basis
        for i in 0..t.rows.len() {
            if t.basis[i] >= artificial_start {
                let col = (0..artificial_start)
                    .find(|&j| t.rows[i][j].abs() > t.pivot_tol && !t.basis.contains(&j));
                if let Some(j) = col {
                    t.pivot(i, j);
                }
                // a row whose only support is artificial is redundant; its
                // basic artificial stays at zero and never re-enters
            }
        }
    }

    // phase 2 on the real objective, artificial columns barred
    let mut cost = vec![T::zero(); n_cols];
    cost[..n].copy_from_slice(c);
    if !t.run(&cost, |j| j < artificial_start) {
        return LpResult::Unbounded;
    }

    let mut x = vec![T::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs(i);
        }
    }
    let objective = t.objective(&cost);
    LpResult::Optimal { x, objective }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_bounded_problem() {
        // max x + y s.t. x + y <= 4, x <= 3, y <= 2
        let c = vec![1.0, 1.0];
        let rows = vec![vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let rhs = vec![4.0, 3.0, 2.0];
        match maximize(&c, &rows, &rhs) {
            LpResult::Optimal { objective, .. } => assert!((objective - 4.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_forces_phase_one() {
        // max -x s.t. -x <= -2  (i.e. x >= 2): optimum x = 2
        let c = vec![-1.0];
        let rows = vec![vec![-1.0]];
        let rhs = vec![-2.0];
        match maximize(&c, &rows, &rhs) {
            LpResult::Optimal { x, objective } => {
                assert!((x[0] - 2.0).abs() < 1e-12);
                assert!((objective + 2.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible() {
        // x <= 1 and x >= 2
        let c = vec![0.0];
        let rows = vec![vec![1.0], vec![-1.0]];
        let rhs = vec![1.0, -2.0];
        assert_eq!(maximize(&c, &rows, &rhs), LpResult::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        // max x with no constraint binding it
        let c = vec![1.0];
        let rows = vec![vec![-1.0]];
        let rhs = vec![1.0];
        assert_eq!(maximize(&c, &rows, &rhs), LpResult::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // redundant constraints meeting at one vertex
        let c = vec![1.0, 1.0];
        let rows = vec![
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ];
        let rhs = vec![1.0, 1.0, 1.0, 2.0];
        match maximize(&c, &rows, &rhs) {
            LpResult::Optimal { objective, .. } => assert!((objective - 2.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_like_pair_resolves() {
        // max t s.t. t - y <= 0.3, t + y <= 0.7 -> t* = 0.5 at y = 0.2
        let c = vec![1.0, 0.0];
        let rows = vec![vec![1.0, -1.0], vec![1.0, 1.0]];
        let rhs = vec![0.3, 0.7];
        match maximize(&c, &rows, &rhs) {
            LpResult::Optimal { x, objective } => {
                assert!((objective - 0.5).abs() < 1e-12);
                assert!((x[1] - 0.2).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }
}
