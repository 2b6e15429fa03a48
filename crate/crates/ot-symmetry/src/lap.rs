//! Dense linear assignment via the Jonker-Volgenant algorithm.
//!
//! Shortest augmenting path formulation of
//! R. Jonker and A. Volgenant, "A Shortest Augmenting Path Algorithm for
//! Dense and Sparse Linear Assignment Problems", Computing 38 (1987),
//! with column reduction and augmenting row reduction preprocessing.
//! Generic over the cost scalar; worst case O(n³).

use num_traits::Float;
use std::ops::{AddAssign, SubAssign};

pub trait LapCost: Float + AddAssign + SubAssign + std::fmt::Debug {}
impl<T> LapCost for T where T: Float + AddAssign + SubAssign + std::fmt::Debug {}

const UNASSIGNED: usize = usize::MAX;

/// Solution of a square assignment problem.
#[derive(Debug, Clone)]
pub struct LapSolution<F> {
    /// `row_to_col[i]` = column assigned to row i.
    pub row_to_col: Vec<usize>,
    /// `col_to_row[j]` = row assigned to column j.
    pub col_to_row: Vec<usize>,
    /// Column duals at termination; row duals follow from
    /// complementary slackness as `u[i] = c(i, row_to_col[i]) - v[row_to_col[i]]`.
    pub col_duals: Vec<F>,
}

impl<F: LapCost> LapSolution<F> {
    pub fn total_cost(&self, costs: &SquareMatrix<F>) -> F {
        self.row_to_col
            .iter()
            .enumerate()
            .fold(F::zero(), |acc, (i, &j)| acc + costs.at(i, j))
    }

    pub fn row_duals(&self, costs: &SquareMatrix<F>) -> Vec<F> {
        self.row_to_col
            .iter()
            .enumerate()
            .map(|(i, &j)| costs.at(i, j) - self.col_duals[j])
            .collect()
    }
}

/// Row-major square matrix of costs.
#[derive(Debug, Clone)]
pub struct SquareMatrix<F> {
    pub n: usize,
    pub data: Vec<F>,
}

impl<F: LapCost> SquareMatrix<F> {
    pub fn new(n: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    #[inline(always)]
    pub fn at(&self, i: usize, j: usize) -> F {
        self.data[i * self.n + j]
    }

    #[inline(always)]
    fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// Solve the assignment problem for a square cost matrix.
pub fn solve<F: LapCost>(costs: &SquareMatrix<F>) -> LapSolution<F> {
    let mut state = Solver::new(costs);
    state.ccrrt_dense();
    for _ in 0..2 {
        if state.free_rows.is_empty() {
            break;
        }
        state.carr_dense();
    }
    if !state.free_rows.is_empty() {
        state.ca_dense();
    }
    LapSolution {
        row_to_col: state.in_row,
        col_to_row: state.in_col,
        col_duals: state.v,
    }
}

struct Solver<'a, F> {
    costs: &'a SquareMatrix<F>,
    dim: usize,
    free_rows: Vec<usize>,
    v: Vec<F>,
    in_row: Vec<usize>,
    in_col: Vec<usize>,
}

impl<'a, F: LapCost> Solver<'a, F> {
    fn new(costs: &'a SquareMatrix<F>) -> Self {
        let dim = costs.n;
        Self {
            costs,
            dim,
            free_rows: Vec::with_capacity(dim),
            v: Vec::with_capacity(dim),
            in_row: vec![0; dim],
            in_col: Vec::with_capacity(dim),
        }
    }

    #[inline(always)]
    fn reduced_cost(&self, i: usize, j: usize) -> F {
        self.costs.at(i, j) - self.v[j]
    }

    // Column reduction and reduction transfer.
    fn ccrrt_dense(&mut self) {
        let dim = self.dim;
        let mut unique = vec![true; dim];
        let mut in_row_not_set = vec![true; dim];

        for j in 0..dim {
            let mut min_i = 0;
            let mut min_v = self.costs.at(0, j);
            for i in 1..dim {
                let c = self.costs.at(i, j);
                if c < min_v {
                    min_v = c;
                    min_i = i;
                }
            }
            self.in_col.push(min_i);
            self.v.push(min_v);
        }

        for j in (0..dim).rev() {
            let i = self.in_col[j];
            if in_row_not_set[i] {
                self.in_row[i] = j;
                in_row_not_set[i] = false;
            } else {
                unique[i] = false;
                self.in_col[j] = UNASSIGNED;
            }
        }

        for i in 0..dim {
            if in_row_not_set[i] {
                self.free_rows.push(i);
            } else if unique[i] {
                let j = self.in_row[i];
                let mut min = F::max_value();
                for j2 in 0..dim {
                    if j2 == j {
                        continue;
                    }
                    let c = self.reduced_cost(i, j2);
                    if c < min {
                        min = c;
                    }
                }
                self.v[j] -= min;
            }
        }
    }

    // Augmenting row reduction.
    fn carr_dense(&mut self) {
        let dim = self.dim;
        let mut current = 0;
        let mut new_free_rows = 0;
        let mut rr_cnt = 0usize;
        let num_free_rows = self.free_rows.len();

        while current < num_free_rows {
            rr_cnt += 1;
            let free_i = self.free_rows[current];
            current += 1;
            let (v1, v2, mut j1, j2) = find_umins(self.costs.row(free_i), &self.v);

            let mut i0 = self.in_col[j1];
            let v1_new = self.v[j1] - (v2 - v1);
            let v1_lowers = v1_new < self.v[j1];

            if rr_cnt < current * dim {
                if v1_lowers {
                    self.v[j1] = v1_new;
                } else if i0 != UNASSIGNED {
                    if let Some(j2) = j2 {
                        j1 = j2;
                        i0 = self.in_col[j1];
                    }
                }
                if i0 != UNASSIGNED {
                    if v1_lowers {
                        current -= 1;
                        self.free_rows[current] = i0;
                    } else {
                        self.free_rows[new_free_rows] = i0;
                        new_free_rows += 1;
                    }
                }
            } else if i0 != UNASSIGNED {
                self.free_rows[new_free_rows] = i0;
                new_free_rows += 1;
            }
            self.in_row[free_i] = j1;
            self.in_col[j1] = free_i;
        }
        self.free_rows.truncate(new_free_rows);
    }

    // Augmentation phase: one shortest-path tree per remaining free row.
    fn ca_dense(&mut self) {
        let dim = self.dim;
        let mut pred = vec![0; dim];
        let free_rows = std::mem::take(&mut self.free_rows);
        for freerow in free_rows {
            let mut i = UNASSIGNED;
            let mut k = 0;
            let mut j = self.find_path_dense(freerow, &mut pred);
            while i != freerow {
                i = pred[j];
                self.in_col[j] = i;
                std::mem::swap(&mut j, &mut self.in_row[i]);
                k += 1;
                assert!(k <= dim, "augmentation failed to terminate");
            }
        }
    }

    // Modified Dijkstra; returns the closest free column.
    fn find_path_dense(&mut self, start_i: usize, pred: &mut [usize]) -> usize {
        let dim = self.dim;
        let mut collist: Vec<usize> = (0..dim).collect();
        let mut d: Vec<F> = (0..dim).map(|j| self.reduced_cost(start_i, j)).collect();
        pred.iter_mut().for_each(|p| *p = start_i);

        let mut lo = 0;
        let mut hi = 0;
        let mut n_ready = 0;
        let mut final_j = None;

        while final_j.is_none() {
            if lo == hi {
                n_ready = lo;
                hi = find_min_block(dim, lo, &d, &mut collist);
                for &j in collist.iter().take(hi).skip(lo) {
                    if self.in_col[j] == UNASSIGNED {
                        final_j = Some(j);
                    }
                }
            }
            if final_j.is_none() {
                final_j = self.scan_dense(&mut lo, &mut hi, &mut d, &mut collist, pred);
            }
        }

        let mind = d[collist[lo]];
        for &j in collist.iter().take(n_ready) {
            self.v[j] += d[j] - mind;
        }
        final_j.unwrap()
    }

    fn scan_dense(
        &self,
        plo: &mut usize,
        phi: &mut usize,
        d: &mut [F],
        collist: &mut [usize],
        pred: &mut [usize],
    ) -> Option<usize> {
        // epsilon-tolerant equality keeps float ties from cycling
        let eps = F::from(1e-12).unwrap();
        let mut lo = *plo;
        let mut hi = *phi;
        while lo != hi {
            let j = collist[lo];
            lo += 1;
            let i = self.in_col[j];
            let mind = d[j];
            let h = self.reduced_cost(i, j) - mind;
            for k in hi..collist.len() {
                let j = collist[k];
                let cred_ij = self.reduced_cost(i, j) - h;
                if cred_ij < d[j] {
                    d[j] = cred_ij;
                    pred[j] = i;
                    if (cred_ij - mind).abs() < eps {
                        if self.in_col[j] == UNASSIGNED {
                            return Some(j);
                        }
                        collist[k] = collist[hi];
                        collist[hi] = j;
                        hi += 1;
                    }
                }
            }
        }
        *plo = lo;
        *phi = hi;
        None
    }
}

fn find_min_block<F: LapCost>(dim: usize, lo: usize, d: &[F], collist: &mut [usize]) -> usize {
    let mut hi = lo + 1;
    let mut mind = d[collist[lo]];
    for k in hi..dim {
        let j = collist[k];
        let h = d[j];
        if h <= mind {
            if h < mind {
                hi = lo;
                mind = h;
            }
            collist[k] = collist[hi];
            collist[hi] = j;
            hi += 1;
        }
    }
    hi
}

// (min, second min, argmin, arg-second-min) of the reduced costs in a row.
#[inline(always)]
fn find_umins<F: LapCost>(row: &[F], v: &[F]) -> (F, F, usize, Option<usize>) {
    let mut umin = row[0] - v[0];
    let mut usubmin = F::max_value();
    let mut j1 = 0;
    let mut j2 = None;
    for j in 1..row.len() {
        let h = row[j] - v[j];
        if h < usubmin {
            if h >= umin {
                usubmin = h;
                j2 = Some(j);
            } else {
                usubmin = umin;
                umin = h;
                j2 = Some(j1);
                j1 = j;
            }
        }
    }
    (umin, usubmin, j1, j2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_by_three() {
        let m = SquareMatrix::new(3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]);
        let sol = solve(&m);
        assert_eq!(sol.row_to_col, vec![2, 0, 1]);
        assert_eq!(sol.col_to_row, vec![1, 2, 0]);
        assert!((sol.total_cost(&m) - 15.0).abs() < 1e-12);
    }

    #[test]
    fn one_by_one() {
        let m = SquareMatrix::new(1, vec![42.0]);
        let sol = solve(&m);
        assert_eq!(sol.row_to_col, vec![0]);
        assert!((sol.total_cost(&m) - 42.0).abs() < 1e-12);
    }

    #[test]
    fn works_in_f32() {
        let m = SquareMatrix::new(2, vec![0.0f32, 5.0, 5.0, 0.0]);
        let sol = solve(&m);
        assert_eq!(sol.row_to_col, vec![0, 1]);
    }

    #[test]
    fn dual_feasibility_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for n in [2usize, 5, 17, 40] {
            let m = SquareMatrix::from_fn(n, |_, _| rng.random::<f64>());
            let sol = solve(&m);
            let u = sol.row_duals(&m);
            for i in 0..n {
                for j in 0..n {
                    assert!(
                        u[i] + sol.col_duals[j] <= m.at(i, j) + 1e-7,
                        "dual infeasible at ({i},{j})"
                    );
                }
            }
        }
    }
}
