//! Distribution-free tests of multivariate symmetry.
//!
//! Generalized signs, ranks, and signed-ranks are obtained by optimally
//! assigning the data to a fixed reference set under a group-orbit cost.
//! On top of the assignment sit a generalized sign test, a generalized
//! Wilcoxon signed-rank (GWSR) test, Hotelling's T² as a parametric
//! baseline, exact (Monte-Carlo) and asymptotic chi-square calibration,
//! confidence sets for the center of symmetry, and a simulation harness.
//!
//! The low-level numeric kernels ([`lap`], [`qmc`]) are generic over the
//! scalar type; the statistical layer is fixed to [`Real`] (`f64`).

pub mod confset;
pub mod diagnostics;
pub mod error;
pub mod group;
pub mod io;
pub mod lap;
pub mod qmc;
pub mod reference;
pub mod seed;
pub mod signedrank;
pub mod simulate;
pub mod special;
pub mod stats;
pub mod transport;

/// Scalar type used throughout the statistical layer.
pub type Real = f64;

/// A data point in R^p.
pub type Point = Vec<Real>;

pub use error::Error;
pub use group::{GroupElement, GroupKind, SymmetryGroup};
pub use reference::{Construction, ErdKind, ReferenceSet, ScoreFunction};
pub use signedrank::Decomposition;
pub use stats::{Calibration, TestKind, TestReport};

/// Tool version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Cap the global worker pool; call once, before any parallel work.
pub fn build_thread_pool(threads: usize) -> std::result::Result<(), rayon::ThreadPoolBuildError> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()
}

pub(crate) fn dot(a: &[Real], b: &[Real]) -> Real {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[Real]) -> Real {
    dot(a, a).sqrt()
}

pub(crate) fn sq_dist(a: &[Real], b: &[Real]) -> Real {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
