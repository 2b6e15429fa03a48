//! Generalized signs, ranks, and signed-ranks: the per-observation
//! output of the optimal assignment of data to reference points.

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind};
use crate::reference::ReferenceSet;
use crate::seed::{self, Stream};
use crate::transport::{solve_lap, solve_spherical, CostMatrix};
use crate::{Point, Real};
use nalgebra::DMatrix;

/// The decomposition of a sample into signs, ranks, and signed-ranks.
///
/// `ranks` is a permutation of the reference points; `signs[i]` is the
/// group element carrying the orbit representative `ranks[i]` toward
/// `X_i`; `signed_ranks[i] = signs[i]·ranks[i]` is the nearest point to
/// `X_i` on the orbit of its rank.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub signs: Vec<GroupElement>,
    pub ranks: Vec<Point>,
    pub signed_ranks: Vec<Point>,
    /// `permutation[i]` = index of the reference point assigned to X_i.
    pub permutation: Vec<usize>,
    /// Seed used for tie and spherical-sign randomization.
    pub seed: u64,
}

/// Assign the data to the reference points and read off signs and
/// ranks. Pure given (data, reference, seed).
pub fn decompose(data: &[Point], reference: &ReferenceSet, seed_value: u64) -> Result<Decomposition> {
    if data.len() != reference.len() {
        return Err(Error::SizeMismatch { data: data.len(), reference: reference.len() });
    }
    let group = reference.group();
    for x in data {
        if x.len() != group.dim {
            return Err(Error::DimensionMismatch { expected: group.dim, got: x.len() });
        }
    }
    let assignment = if matches!(group.kind, GroupKind::Spherical) {
        solve_spherical(data, reference)?
    } else {
        let costs = CostMatrix::from_instance(group, data, reference.points())?;
        solve_lap(&costs)
    };
    let mut rng = seed::rng(seed_value, Stream::Ties, 0);
    let mut signs = Vec::with_capacity(data.len());
    let mut ranks = Vec::with_capacity(data.len());
    let mut signed_ranks = Vec::with_capacity(data.len());
    for (i, x) in data.iter().enumerate() {
        let h = reference.points()[assignment.permutation[i]].clone();
        let s = group.argmin_sign(x, &h, &mut rng)?;
        signed_ranks.push(s.apply(&h));
        signs.push(s);
        ranks.push(h);
    }
    Ok(Decomposition {
        signs,
        ranks,
        signed_ranks,
        permutation: assignment.permutation,
        seed: seed_value,
    })
}

/// The population signed-rank map for Gaussian data with a standard
/// Gaussian reference: x ↦ Σ^{-1/2}x via the symmetric square root.
pub fn population_map_gaussian_oracle(x: &[Real], sigma: &DMatrix<Real>) -> Result<Point> {
    let p = x.len();
    if sigma.nrows() != p || sigma.ncols() != p {
        return Err(Error::DimensionMismatch { expected: p, got: sigma.nrows() });
    }
    for i in 0..p {
        for j in 0..i {
            if (sigma[(i, j)] - sigma[(j, i)]).abs() > 1e-10 {
                return Err(Error::NotSpd);
            }
        }
    }
    let eig = sigma.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::NotSpd);
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    let m = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    let v = m * DMatrix::from_column_slice(p, 1, x);
    Ok(v.as_slice().to_vec())
}
