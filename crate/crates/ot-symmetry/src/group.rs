//! Compact symmetry groups: Haar sampling, orbit costs, minimizing signs.
//!
//! A `SymmetryGroup` is a compact subgroup of the orthogonal group O(p).
//! Four kinds are supported: the central group {I, -I}, the sign-change
//! group of diagonal ±1 matrices, the full orthogonal group (spherical
//! symmetry), and a user-supplied finite list of orthogonal matrices.
//! The per-pair orbit cost min over Q in G of ‖Qᵀx - h‖² and the
//! minimizing element (the generalized sign) use closed forms wherever
//! one exists; only the finite case enumerates.

use crate::error::{Error, Result};
use crate::{dot, norm, sq_dist, Point, Real};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Relative tolerance under which two candidate costs count as tied.
pub const TIE_TOL: Real = 1e-9;

#[inline]
pub(crate) fn tied(a: Real, b: Real) -> bool {
    (a - b).abs() <= TIE_TOL * (1.0 + a.abs().max(b.abs()))
}

/// The kind of symmetry hypothesis, i.e. which subgroup of O(p) acts.
#[derive(Debug, Clone)]
pub enum GroupKind {
    /// {I, -I}: symmetry about the center.
    Central,
    /// Diagonal ±1 matrices (2^p elements, held implicitly).
    SignChange,
    /// All of O(p).
    Spherical,
    /// An explicit finite list of orthogonal matrices.
    FiniteMatrices(Vec<DMatrix<Real>>),
}

/// A compact subgroup of O(p) together with its dimension.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    pub kind: GroupKind,
    pub dim: usize,
    mean_is_zero: bool,
}

/// One group element, stored compactly when possible.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    /// s·I with s = ±1.
    Scalar(Real),
    /// diag(d) with d ∈ {±1}^p.
    Diagonal(Vec<Real>),
    /// An explicit orthogonal matrix.
    Matrix(DMatrix<Real>),
}

impl GroupElement {
    /// Q x.
    pub fn apply(&self, x: &[Real]) -> Point {
        match self {
            GroupElement::Scalar(s) => x.iter().map(|xi| s * xi).collect(),
            GroupElement::Diagonal(d) => x.iter().zip(d).map(|(xi, di)| di * xi).collect(),
            GroupElement::Matrix(m) => {
                let v = m * DMatrix::from_column_slice(x.len(), 1, x);
                v.as_slice().to_vec()
            }
        }
    }

    /// Qᵀ x.
    pub fn apply_transpose(&self, x: &[Real]) -> Point {
        match self {
            GroupElement::Scalar(_) | GroupElement::Diagonal(_) => self.apply(x),
            GroupElement::Matrix(m) => {
                let v = m.transpose() * DMatrix::from_column_slice(x.len(), 1, x);
                v.as_slice().to_vec()
            }
        }
    }

    /// Materialize as a p×p matrix.
    pub fn to_matrix(&self, p: usize) -> DMatrix<Real> {
        match self {
            GroupElement::Scalar(s) => DMatrix::identity(p, p) * *s,
            GroupElement::Diagonal(d) => {
                assert_eq!(d.len(), p);
                DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d))
            }
            GroupElement::Matrix(m) => {
                assert_eq!(m.nrows(), p);
                m.clone()
            }
        }
    }
}

fn max_abs(m: &DMatrix<Real>) -> Real {
    m.iter().fold(0.0, |acc, &x| acc.max(x.abs()))
}

fn is_orthogonal(m: &DMatrix<Real>, tol: Real) -> bool {
    let p = m.nrows();
    max_abs(&(m.transpose() * m - DMatrix::identity(p, p))) <= tol
}

impl SymmetryGroup {
    pub fn central(p: usize) -> Self {
        assert!(p >= 1);
        Self { kind: GroupKind::Central, dim: p, mean_is_zero: true }
    }

    pub fn sign_change(p: usize) -> Self {
        assert!(p >= 1);
        Self { kind: GroupKind::SignChange, dim: p, mean_is_zero: true }
    }

    pub fn spherical(p: usize) -> Self {
        assert!(p >= 1);
        Self { kind: GroupKind::Spherical, dim: p, mean_is_zero: true }
    }

    /// Build a finite matrix group, checking the group axioms: every
    /// matrix orthogonal to 1e-10, the identity present, and the list
    /// closed under multiplication and inversion.
    pub fn finite(matrices: Vec<DMatrix<Real>>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::InvalidGroup("empty matrix list".into()));
        }
        let p = matrices[0].nrows();
        let tol = 1e-10;
        let close = |a: &DMatrix<Real>, b: &DMatrix<Real>| max_abs(&(a - b)) <= 1e-8;
        for (k, m) in matrices.iter().enumerate() {
            if m.nrows() != p || m.ncols() != p {
                return Err(Error::InvalidGroup(format!("matrix {k} is not {p}x{p}")));
            }
            if !is_orthogonal(m, tol) {
                return Err(Error::InvalidGroup(format!("matrix {k} is not orthogonal")));
            }
        }
        let id = DMatrix::identity(p, p);
        if !matrices.iter().any(|m| close(m, &id)) {
            return Err(Error::InvalidGroup("identity is missing".into()));
        }
        for (a_idx, a) in matrices.iter().enumerate() {
            let inv = a.transpose();
            if !matrices.iter().any(|m| close(m, &inv)) {
                return Err(Error::InvalidGroup(format!("inverse of matrix {a_idx} is missing")));
            }
            for (b_idx, b) in matrices.iter().enumerate() {
                let prod = a * b;
                if !matrices.iter().any(|m| close(m, &prod)) {
                    return Err(Error::InvalidGroup(format!(
                        "product of matrices {a_idx} and {b_idx} is missing"
                    )));
                }
            }
        }
        let mut mean = DMatrix::zeros(p, p);
        for m in &matrices {
            mean += m;
        }
        mean /= matrices.len() as Real;
        let mean_is_zero = max_abs(&mean) <= 1e-10;
        Ok(Self { kind: GroupKind::FiniteMatrices(matrices), dim: p, mean_is_zero })
    }

    /// Whether the Haar mean of the group is the zero matrix.
    pub fn mean_is_zero(&self) -> bool {
        self.mean_is_zero
    }

    fn check_dim(&self, x: &[Real]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    /// Draw a Haar-uniform element.
    pub fn haar_sample<R: Rng>(&self, rng: &mut R) -> GroupElement {
        match &self.kind {
            GroupKind::Central => {
                GroupElement::Scalar(if rng.random::<bool>() { 1.0 } else { -1.0 })
            }
            GroupKind::SignChange => GroupElement::Diagonal(
                (0..self.dim)
                    .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                    .collect(),
            ),
            GroupKind::Spherical => GroupElement::Matrix(haar_orthogonal(self.dim, rng)),
            GroupKind::FiniteMatrices(list) => {
                let k = rng.random_range(0..list.len());
                GroupElement::Matrix(list[k].clone())
            }
        }
    }

    /// min over Q in G of ‖Qᵀx - h‖².
    pub fn orbit_cost(&self, x: &[Real], h: &[Real]) -> Result<Real> {
        self.check_dim(x)?;
        self.check_dim(h)?;
        Ok(match &self.kind {
            GroupKind::Central => {
                let plus: Real = sq_dist(x, h);
                let minus: Real =
                    x.iter().zip(h).map(|(xi, hi)| (xi + hi) * (xi + hi)).sum();
                plus.min(minus)
            }
            GroupKind::SignChange => x
                .iter()
                .zip(h)
                .map(|(xi, hi)| {
                    let d = (xi - hi) * (xi - hi);
                    let s = (xi + hi) * (xi + hi);
                    d.min(s)
                })
                .sum(),
            GroupKind::Spherical => {
                let d = norm(x) - norm(h);
                d * d
            }
            GroupKind::FiniteMatrices(list) => list
                .iter()
                .map(|q| {
                    let qtx = GroupElement::Matrix(q.clone()).apply_transpose(x);
                    sq_dist(&qtx, h)
                })
                .fold(Real::INFINITY, Real::min),
        })
    }

    /// A group element Q attaining orbit_cost(x, h), equivalently
    /// maximizing xᵀQh. Ties are broken uniformly at random.
    pub fn argmin_sign<R: Rng>(&self, x: &[Real], h: &[Real], rng: &mut R) -> Result<GroupElement> {
        self.check_dim(x)?;
        self.check_dim(h)?;
        Ok(match &self.kind {
            GroupKind::Central => {
                let ip = dot(x, h);
                let scale = norm(x) * norm(h);
                if ip.abs() <= TIE_TOL * (1.0 + scale) {
                    GroupElement::Scalar(if rng.random::<bool>() { 1.0 } else { -1.0 })
                } else {
                    GroupElement::Scalar(ip.signum())
                }
            }
            GroupKind::SignChange => GroupElement::Diagonal(
                x.iter()
                    .zip(h)
                    .map(|(xi, hi)| {
                        let prod = xi * hi;
                        if prod.abs() <= TIE_TOL * (1.0 + xi.abs() * hi.abs()) {
                            if rng.random::<bool>() {
                                1.0
                            } else {
                                -1.0
                            }
                        } else {
                            prod.signum()
                        }
                    })
                    .collect(),
            ),
            GroupKind::Spherical => {
                GroupElement::Matrix(spherical_sign(x, h, self.dim, rng)?)
            }
            GroupKind::FiniteMatrices(list) => {
                let costs: Vec<Real> = list
                    .iter()
                    .map(|q| {
                        let qtx = GroupElement::Matrix(q.clone()).apply_transpose(x);
                        sq_dist(&qtx, h)
                    })
                    .collect();
                let best = costs.iter().copied().fold(Real::INFINITY, Real::min);
                let minimizers: Vec<usize> =
                    (0..list.len()).filter(|&k| tied(costs[k], best)).collect();
                let pick = minimizers[rng.random_range(0..minimizers.len())];
                GroupElement::Matrix(list[pick].clone())
            }
        })
    }
}

/// Haar-uniform matrix on O(p): QR of a standard Gaussian matrix with
/// the columns rescaled so the triangular factor has positive diagonal.
pub fn haar_orthogonal<R: Rng>(p: usize, rng: &mut R) -> DMatrix<Real> {
    let g: DMatrix<Real> = DMatrix::from_fn(p, p, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..p {
        if r[(j, j)] < 0.0 {
            for i in 0..p {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// The randomized minimizer for spherical symmetry: a Haar draw from
/// O(p) conditioned on mapping h/‖h‖ to x/‖x‖.
fn spherical_sign<R: Rng>(x: &[Real], h: &[Real], p: usize, rng: &mut R) -> Result<DMatrix<Real>> {
    let nx = norm(x);
    let nh = norm(h);
    if nx == 0.0 || nh == 0.0 {
        return Err(Error::SphericalZeroVector);
    }
    let w: Vec<Real> = x.iter().map(|xi| xi / nx).collect();
    let v: Vec<Real> = h.iter().map(|hi| hi / nh).collect();

    // [v V]: complete v to an orthonormal basis by a Householder
    // reflection carrying e1 to v (columns 2..p are then orthogonal to v).
    let v_basis = householder_basis(&v);

    // GS([w ε]) with ε a p×(p-1) Gaussian block.
    let mut cols = DMatrix::from_fn(p, p, |i, j| {
        if j == 0 {
            w[i]
        } else {
            StandardNormal.sample(rng)
        }
    });
    gram_schmidt(&mut cols);

    Ok(cols * v_basis.transpose())
}

/// Orthogonal matrix whose first column is the unit vector `v`.
fn householder_basis(v: &[Real]) -> DMatrix<Real> {
    let p = v.len();
    let mut u: Vec<Real> = v.to_vec();
    u[0] -= 1.0;
    let nu = norm(&u);
    if nu <= 1e-14 {
        return DMatrix::identity(p, p);
    }
    let u: Vec<Real> = u.iter().map(|ui| ui / nu).collect();
    DMatrix::from_fn(p, p, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - 2.0 * u[i] * u[j]
    })
}

/// In-place modified Gram-Schmidt on the columns, in column order.
fn gram_schmidt(m: &mut DMatrix<Real>) {
    let (p, k) = (m.nrows(), m.ncols());
    for j in 0..k {
        for prev in 0..j {
            let mut proj = 0.0;
            for i in 0..p {
                proj += m[(i, prev)] * m[(i, j)];
            }
            for i in 0..p {
                m[(i, j)] -= proj * m[(i, prev)];
            }
        }
        let mut nrm = 0.0;
        for i in 0..p {
            nrm += m[(i, j)] * m[(i, j)];
        }
        let nrm = nrm.sqrt();
        assert!(nrm > 1e-12, "degenerate column in orthogonalization");
        for i in 0..p {
            m[(i, j)] /= nrm;
        }
    }
}
