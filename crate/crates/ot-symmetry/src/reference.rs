//! Fixed reference sets living in a fundamental domain of the group,
//! their construction (random sampling or Halton-transformed), score
//! functions, and the reference-distribution covariance that calibrates
//! the signed-rank test.

use crate::error::{Error, Result};
use crate::group::{GroupKind, SymmetryGroup};
use crate::seed::{self, Stream};
use crate::special::{chi_quantile, half_normal_quantile, normal_quantile};
use crate::{norm, qmc, Point, Real};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Effective reference distribution: the law of S·J(H) with S Haar on
/// the group and H drawn from the reference measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErdKind {
    /// Standard Gaussian folded into the fundamental domain.
    Gaussian,
    /// Product of uniforms on the fundamental domain.
    Uniform,
    /// Uniform direction with Uniform(0,1) radius, folded.
    SphericalUniform,
}

/// Score transform applied to rank vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum ScoreFunction {
    Identity,
    /// Multiplication by a fixed SPD matrix, typically an inverse
    /// square root of an estimated covariance.
    GaussianPlugIn(DMatrix<Real>),
}

impl ScoreFunction {
    pub fn gaussian_plug_in(m: DMatrix<Real>) -> Result<Self> {
        let p = m.nrows();
        if m.ncols() != p {
            return Err(Error::NotSpd);
        }
        for i in 0..p {
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-8 {
                    return Err(Error::NotSpd);
                }
            }
        }
        if m.clone().cholesky().is_none() {
            return Err(Error::NotSpd);
        }
        Ok(ScoreFunction::GaussianPlugIn(m))
    }

    /// J(h).
    pub fn apply(&self, h: &[Real]) -> Point {
        match self {
            ScoreFunction::Identity => h.to_vec(),
            ScoreFunction::GaussianPlugIn(m) => {
                let v = m * DMatrix::from_column_slice(h.len(), 1, h);
                v.as_slice().to_vec()
            }
        }
    }
}

/// How the reference points were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// i.i.d. draws from the reference measure, then frozen.
    RandomSample,
    /// Quantile transforms of the Halton sequence.
    HaltonTransformed,
    /// Points supplied directly by the caller.
    Explicit,
}

impl Construction {
    pub fn label(self) -> &'static str {
        match self {
            Construction::RandomSample => "random",
            Construction::HaltonTransformed => "halton",
            Construction::Explicit => "explicit",
        }
    }
}

/// A frozen set of n reference points, one per orbit.
#[derive(Debug, Clone)]
pub struct ReferenceSet {
    points: Vec<Point>,
    group: SymmetryGroup,
    pub erd: ErdKind,
    pub score: ScoreFunction,
    pub construction: Construction,
    pub seed: u64,
}

impl ReferenceSet {
    /// Build n reference points for the given group and reference
    /// distribution. `seed` drives the random-sample construction and
    /// is recorded either way.
    pub fn build(
        group: &SymmetryGroup,
        erd: ErdKind,
        n: usize,
        construction: Construction,
        seed_value: u64,
    ) -> Result<Self> {
        assert!(n >= 1);
        if erd == ErdKind::Uniform && matches!(group.kind, GroupKind::Spherical) {
            return Err(Error::IncompatibleErd);
        }
        let mut rng = seed::rng(seed_value, Stream::Reference, 0);
        let points: Result<Vec<Point>> = (1..=n as u64)
            .map(|i| match construction {
                Construction::HaltonTransformed => halton_point(group, erd, i),
                Construction::RandomSample => random_point(group, erd, &mut rng),
                Construction::Explicit => {
                    Err(Error::Domain("explicit construction needs from_points".into()))
                }
            })
            .collect();
        let set = Self {
            points: points?,
            group: group.clone(),
            erd,
            score: ScoreFunction::Identity,
            construction,
            seed: seed_value,
        };
        set.assert_orbit_distinct()?;
        Ok(set)
    }

    /// Wrap caller-supplied points, folding each into the fundamental
    /// domain (an orbit-preserving change) and checking distinctness.
    pub fn from_points(group: SymmetryGroup, points: Vec<Point>, erd: ErdKind) -> Result<Self> {
        for pt in &points {
            if pt.len() != group.dim {
                return Err(Error::DimensionMismatch { expected: group.dim, got: pt.len() });
            }
        }
        let points = points.into_iter().map(|pt| fold(&group, pt)).collect();
        let set = Self {
            points,
            group,
            erd,
            score: ScoreFunction::Identity,
            construction: Construction::Explicit,
            seed: 0,
        };
        set.assert_orbit_distinct()?;
        Ok(set)
    }

    pub fn with_score(mut self, score: ScoreFunction) -> Self {
        self.score = score;
        self
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn group(&self) -> &SymmetryGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.group.dim
    }

    /// No two points may share a G-orbit. Checked with an orbit
    /// invariant sort key so construction stays O(n log n).
    fn assert_orbit_distinct(&self) -> Result<()> {
        let n = self.points.len();
        match &self.group.kind {
            GroupKind::FiniteMatrices(_) => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        let c = self.group.orbit_cost(&self.points[i], &self.points[j])?;
                        if c <= 1e-18 {
                            return Err(Error::OrbitCollision(i, j));
                        }
                    }
                }
            }
            _ => {
                // points are already folded into the domain, so orbit
                // equality is plain equality of the stored vectors
                // (Spherical: equality of norms)
                let keys: Vec<Point> = match self.group.kind {
                    GroupKind::Spherical => {
                        self.points.iter().map(|h| vec![norm(h)]).collect()
                    }
                    _ => self.points.clone(),
                };
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| keys[a].partial_cmp(&keys[b]).unwrap());
                for w in order.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let close = keys[a]
                        .iter()
                        .zip(&keys[b])
                        .all(|(x, y)| (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs())));
                    if close {
                        return Err(Error::OrbitCollision(a.min(b), a.max(b)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Analytic covariance of the effective reference distribution with
    /// the identity score: I, I/3, or I/(3p).
    pub fn erd_covariance(&self) -> DMatrix<Real> {
        let p = self.dim();
        let scale = match self.erd {
            ErdKind::Gaussian => 1.0,
            ErdKind::Uniform => 1.0 / 3.0,
            ErdKind::SphericalUniform => 1.0 / (3.0 * p as Real),
        };
        DMatrix::identity(p, p) * scale
    }

    /// Finite-n empirical covariance (1/n) Σᵢ E_S[S J(hᵢ) J(hᵢ)ᵀ Sᵀ],
    /// using the per-group closed form of the inner expectation.
    pub fn erd_covariance_empirical(&self) -> DMatrix<Real> {
        let p = self.dim();
        let n = self.len() as Real;
        let mut acc = DMatrix::zeros(p, p);
        for h in &self.points {
            let y = self.score.apply(h);
            match &self.group.kind {
                GroupKind::Central => {
                    for i in 0..p {
                        for j in 0..p {
                            acc[(i, j)] += y[i] * y[j];
                        }
                    }
                }
                GroupKind::SignChange => {
                    for i in 0..p {
                        acc[(i, i)] += y[i] * y[i];
                    }
                }
                GroupKind::Spherical => {
                    let s = crate::dot(&y, &y) / p as Real;
                    for i in 0..p {
                        acc[(i, i)] += s;
                    }
                }
                GroupKind::FiniteMatrices(list) => {
                    let yv = DMatrix::from_column_slice(p, 1, &y);
                    let outer = &yv * yv.transpose();
                    let mut inner = DMatrix::zeros(p, p);
                    for q in list {
                        inner += q * &outer * q.transpose();
                    }
                    acc += inner / list.len() as Real;
                }
            }
        }
        acc / n
    }
}

/// Move a point onto the representative of its orbit inside the
/// fundamental domain.
fn fold(group: &SymmetryGroup, mut pt: Point) -> Point {
    match group.kind {
        GroupKind::Central => {
            let lead = pt.iter().find(|&&x| x != 0.0).copied().unwrap_or(0.0);
            if lead < 0.0 {
                for x in &mut pt {
                    *x = -*x;
                }
            }
            pt
        }
        GroupKind::SignChange => {
            for x in &mut pt {
                *x = x.abs();
            }
            pt
        }
        GroupKind::Spherical => {
            let mut out = vec![0.0; pt.len()];
            out[0] = norm(&pt);
            out
        }
        GroupKind::FiniteMatrices(_) => pt,
    }
}

fn halton_point(group: &SymmetryGroup, erd: ErdKind, index: u64) -> Result<Point> {
    let p = group.dim;
    match (erd, &group.kind) {
        (ErdKind::Gaussian, GroupKind::Central) => {
            let bases = qmc::primes(p);
            let u: Vec<Real> = qmc::halton_point(index, &bases);
            let mut pt = vec![half_normal_quantile(u[0])?];
            for &ui in &u[1..] {
                pt.push(normal_quantile(ui)?);
            }
            Ok(pt)
        }
        (ErdKind::Gaussian, GroupKind::SignChange) => {
            let bases = qmc::primes(p);
            qmc::halton_point::<Real>(index, &bases)
                .iter()
                .map(|&ui| half_normal_quantile(ui))
                .collect()
        }
        (ErdKind::Gaussian, GroupKind::Spherical) => {
            let u: Real = qmc::halton(index, 2);
            let mut pt = vec![0.0; p];
            pt[0] = chi_quantile(u, p)?;
            Ok(pt)
        }
        (ErdKind::Uniform, GroupKind::Central) => {
            let bases = qmc::primes(p);
            let u: Vec<Real> = qmc::halton_point(index, &bases);
            let mut pt = vec![u[0]];
            for &ui in &u[1..] {
                pt.push(2.0 * ui - 1.0);
            }
            Ok(pt)
        }
        (ErdKind::Uniform, GroupKind::SignChange) => {
            let bases = qmc::primes(p);
            Ok(qmc::halton_point(index, &bases))
        }
        (ErdKind::SphericalUniform, GroupKind::Spherical) => {
            let u: Real = qmc::halton(index, 2);
            let mut pt = vec![0.0; p];
            pt[0] = u;
            Ok(pt)
        }
        (ErdKind::SphericalUniform, _) => {
            // radius from the first coordinate, direction from Gaussian
            // quantiles of the remaining p coordinates
            let bases = qmc::primes(p + 1);
            let u: Vec<Real> = qmc::halton_point(index, &bases);
            let r = u[0];
            let z: Result<Vec<Real>> = u[1..].iter().map(|&ui| normal_quantile(ui)).collect();
            let z = z?;
            let nz = norm(&z);
            if nz == 0.0 {
                return Err(Error::Domain("degenerate direction".into()));
            }
            Ok(fold(group, z.iter().map(|zi| r * zi / nz).collect()))
        }
        (_, GroupKind::FiniteMatrices(_)) => Err(Error::Domain(
            "Halton construction is not defined for custom matrix groups; use random sampling"
                .into(),
        )),
        (ErdKind::Uniform, GroupKind::Spherical) => Err(Error::IncompatibleErd),
    }
}

fn random_point<R: Rng>(group: &SymmetryGroup, erd: ErdKind, rng: &mut R) -> Result<Point> {
    let p = group.dim;
    match (erd, &group.kind) {
        (ErdKind::Gaussian, GroupKind::Spherical) => {
            let z: Vec<Real> = (0..p).map(|_| StandardNormal.sample(rng)).collect();
            let mut pt = vec![0.0; p];
            pt[0] = norm(&z);
            Ok(pt)
        }
        (ErdKind::Gaussian, _) => {
            let z: Vec<Real> = (0..p).map(|_| StandardNormal.sample(rng)).collect();
            Ok(fold(group, z))
        }
        (ErdKind::Uniform, GroupKind::Central) => {
            let mut pt = vec![rng.random::<Real>()];
            for _ in 1..p {
                pt.push(2.0 * rng.random::<Real>() - 1.0);
            }
            Ok(pt)
        }
        (ErdKind::Uniform, GroupKind::SignChange) => {
            Ok((0..p).map(|_| rng.random::<Real>()).collect())
        }
        (ErdKind::SphericalUniform, GroupKind::Spherical) => {
            let mut pt = vec![0.0; p];
            pt[0] = rng.random::<Real>();
            Ok(pt)
        }
        (ErdKind::SphericalUniform, _) => {
            let z: Vec<Real> = (0..p).map(|_| StandardNormal.sample(rng)).collect();
            let nz = norm(&z);
            if nz == 0.0 {
                return Err(Error::Domain("degenerate direction".into()));
            }
            let r: Real = rng.random();
            Ok(fold(group, z.iter().map(|zi| r * zi / nz).collect()))
        }
        (ErdKind::Uniform, GroupKind::Spherical) => Err(Error::IncompatibleErd),
        (ErdKind::Uniform, GroupKind::FiniteMatrices(_)) => Err(Error::Domain(
            "uniform reference distribution is not defined for custom matrix groups".into(),
        )),
    }
}
