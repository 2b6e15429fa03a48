//! Balanced assignment of data points to reference points under the
//! group-orbit cost: a generic O(n³) solver, an O(n log n) fast path for
//! the spherical group, and a factorial brute-force oracle for tests.

use crate::error::{Error, Result};
use crate::group::{tied, SymmetryGroup};
use crate::lap::{self, SquareMatrix};
use crate::reference::ReferenceSet;
use crate::{norm, Point, Real};

/// Pairwise orbit costs, entry (i, j) = orbit_cost(X_i, h_j).
#[derive(Debug, Clone)]
pub struct CostMatrix {
    pub matrix: SquareMatrix<Real>,
}

impl CostMatrix {
    pub fn new(n: usize, entries: Vec<Real>) -> Result<Self> {
        let matrix = SquareMatrix::new(n, entries);
        for i in 0..n {
            for j in 0..n {
                let c = matrix.at(i, j);
                if !c.is_finite() || c < 0.0 {
                    return Err(Error::NonFiniteCost { row: i, col: j });
                }
            }
        }
        Ok(Self { matrix })
    }

    /// Orbit costs of every (data, reference) pair.
    pub fn from_instance(group: &SymmetryGroup, data: &[Point], reference: &[Point]) -> Result<Self> {
        if data.len() != reference.len() {
            return Err(Error::SizeMismatch { data: data.len(), reference: reference.len() });
        }
        let n = data.len();
        let mut entries = Vec::with_capacity(n * n);
        for x in data {
            for h in reference {
                entries.push(group.orbit_cost(x, h)?);
            }
        }
        Self::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.matrix.n
    }
}

/// A cost-minimizing matching of data to reference points.
#[derive(Debug, Clone)]
pub struct Assignment {
    /// `permutation[i]` = reference index assigned to data point i.
    pub permutation: Vec<usize>,
    pub total_cost: Real,
    /// True when the oracle found several permutations within tolerance
    /// of the minimum (only the brute-force path detects this).
    pub tie_flag: bool,
}

/// Solve the assignment problem with the shortest-augmenting-path
/// algorithm; the result carries a dual-feasibility certificate, checked
/// before returning.
pub fn solve_lap(costs: &CostMatrix) -> Assignment {
    let sol = lap::solve(&costs.matrix);
    let n = costs.n();
    let u = sol.row_duals(&costs.matrix);
    for i in 0..n {
        for j in 0..n {
            debug_assert!(
                u[i] + sol.col_duals[j] <= costs.matrix.at(i, j) + 1e-7,
                "dual certificate failed at ({i}, {j})"
            );
        }
    }
    let total_cost = sol.total_cost(&costs.matrix);
    Assignment { permutation: sol.row_to_col, total_cost, tie_flag: false }
}

/// O(n log n) assignment for the spherical group: both sides are sorted
/// by Euclidean norm and matched rank to rank.
pub fn solve_spherical(data: &[Point], reference: &ReferenceSet) -> Result<Assignment> {
    let href = reference.points();
    if data.len() != href.len() {
        return Err(Error::SizeMismatch { data: data.len(), reference: href.len() });
    }
    let n = data.len();
    let ref_norms: Vec<Real> = href.iter().map(|h| norm(h)).collect();
    let mut ref_order: Vec<usize> = (0..n).collect();
    ref_order.sort_by(|&a, &b| ref_norms[a].partial_cmp(&ref_norms[b]).unwrap());
    for w in ref_order.windows(2) {
        if ref_norms[w[0]] == ref_norms[w[1]] {
            return Err(Error::DuplicateNorms(w[0], w[1]));
        }
    }
    let data_norms: Vec<Real> = data.iter().map(|x| norm(x)).collect();
    let mut data_order: Vec<usize> = (0..n).collect();
    data_order.sort_by(|&a, &b| data_norms[a].partial_cmp(&data_norms[b]).unwrap());

    let mut permutation = vec![0usize; n];
    let mut total_cost = 0.0;
    for k in 0..n {
        let i = data_order[k];
        let j = ref_order[k];
        permutation[i] = j;
        let d = data_norms[i] - ref_norms[j];
        total_cost += d * d;
    }
    Ok(Assignment { permutation, total_cost, tie_flag: false })
}

/// Exact minimum over all n! permutations; limited to n ≤ 9. Detects
/// ties among optimal permutations within the shared tolerance.
pub fn brute_force_lap(costs: &CostMatrix) -> Result<Assignment> {
    let n = costs.n();
    if n > 9 {
        return Err(Error::TooLarge { limit: 9, got: n });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best_cost = Real::INFINITY;
    let mut best_perm = perm.clone();
    let mut tie_flag = false;

    let cost_of = |p: &[usize]| -> Real {
        p.iter().enumerate().map(|(i, &j)| costs.matrix.at(i, j)).sum()
    };

    // Heap's algorithm over all permutations.
    let mut c = vec![0usize; n];
    let consider = |p: &[usize], best_cost: &mut Real, best_perm: &mut Vec<usize>, tie: &mut bool| {
        let cost = cost_of(p);
        if cost < *best_cost {
            if tied(cost, *best_cost) {
                *tie = true;
            } else {
                *tie = false;
            }
            *best_cost = cost;
            *best_perm = p.to_vec();
        } else if tied(cost, *best_cost) {
            *tie = true;
        }
    };
    consider(&perm, &mut best_cost, &mut best_perm, &mut tie_flag);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            consider(&perm, &mut best_cost, &mut best_perm, &mut tie_flag);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(Assignment { permutation: best_perm, total_cost: best_cost, tie_flag })
}
