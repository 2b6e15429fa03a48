//! Confidence sets for the center of symmetry, by inverting a symmetry
//! test over candidate centers.

use crate::error::{Error, Result};
use crate::group::SymmetryGroup;
use crate::reference::{Construction, ErdKind, ReferenceSet};
use crate::seed::{self, Stream};
use crate::signedrank::decompose;
use crate::special::chi_square_cdf;
use crate::stats::{
    exact_null, exact_p_value, gwsr_statistic, hotelling_t2, sign_statistic, Calibration, TestKind,
};
use crate::{Point, Real};
use rayon::prelude::*;
use serde::Serialize;

/// An axis-aligned evaluation grid.
#[derive(Debug, Clone, Serialize)]
pub struct GridSpec {
    pub lower: Point,
    pub upper: Point,
    /// Points per axis.
    pub steps: Vec<usize>,
}

impl GridSpec {
    /// Default grid: data mean ± 3 times the largest marginal standard
    /// deviation, `steps` points per axis.
    pub fn from_data(data: &[Point], steps: usize) -> Self {
        let n = data.len() as Real;
        let p = data[0].len();
        let mut mean = vec![0.0; p];
        for x in data {
            for k in 0..p {
                mean[k] += x[k] / n;
            }
        }
        let mut max_sd: Real = 0.0;
        for k in 0..p {
            let v = data.iter().map(|x| (x[k] - mean[k]).powi(2)).sum::<Real>() / (n - 1.0);
            max_sd = max_sd.max(v.sqrt());
        }
        let lower = mean.iter().map(|m| m - 3.0 * max_sd).collect();
        let upper = mean.iter().map(|m| m + 3.0 * max_sd).collect();
        Self { lower, upper, steps: vec![steps; p] }
    }

    pub fn points(&self) -> Vec<Point> {
        let p = self.lower.len();
        let total: usize = self.steps.iter().product();
        if total == 0 {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; p];
        'outer: loop {
            let pt: Point = (0..p)
                .map(|k| {
                    if self.steps[k] == 1 {
                        self.lower[k]
                    } else {
                        self.lower[k]
                            + (self.upper[k] - self.lower[k]) * idx[k] as Real
                                / (self.steps[k] - 1) as Real
                    }
                })
                .collect();
            out.push(pt);
            for k in (0..p).rev() {
                idx[k] += 1;
                if idx[k] < self.steps[k] {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
        out
    }

    /// Volume of one grid cell.
    pub fn cell_volume(&self) -> Real {
        (0..self.lower.len())
            .map(|k| {
                if self.steps[k] <= 1 {
                    1.0
                } else {
                    (self.upper[k] - self.lower[k]) / (self.steps[k] - 1) as Real
                }
            })
            .product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfidenceMode {
    Grid,
    DataPointHull,
}

/// The inverted-test confidence set: accepted centers and, in hull
/// mode, the hull vertices.
#[derive(Debug, Clone, Serialize)]
pub struct ConfidenceSet {
    pub mode: ConfidenceMode,
    pub accepted: Vec<Point>,
    pub candidates: usize,
    pub grid: Option<GridSpec>,
    /// Convex hull vertices of the accepted points (counterclockwise
    /// for p = 2; the accepted list itself for higher dimension).
    pub hull: Option<Vec<Point>>,
    pub level: Real,
}

impl ConfidenceSet {
    pub fn contains_grid_point(&self, theta: &[Real], tol: Real) -> bool {
        self.accepted
            .iter()
            .any(|a| a.iter().zip(theta).all(|(x, y)| (x - y).abs() <= tol))
    }

    /// Accepted-cell volume estimate (grid mode).
    pub fn volume(&self) -> Option<Real> {
        self.grid.as_ref().map(|g| g.cell_volume() * self.accepted.len() as Real)
    }

    /// CSV of every candidate with its acceptance flag.
    pub fn csv(&self, all_candidates: &[Point], flags: &[bool]) -> String {
        let p = all_candidates[0].len();
        let mut out = (1..=p).map(|k| format!("theta{k}")).collect::<Vec<_>>().join(",");
        out.push_str(",accepted\n");
        for (pt, &ok) in all_candidates.iter().zip(flags) {
            let row: Vec<String> = pt.iter().map(|&v| crate::io::fmt_sig(v)).collect();
            out.push_str(&row.join(","));
            out.push_str(if ok { ",1\n" } else { ",0\n" });
        }
        out
    }
}

struct Inverter {
    reference: Option<ReferenceSet>,
    null: Option<Vec<Real>>,
    test_kind: TestKind,
    alpha: Real,
    seed: u64,
}

impl Inverter {
    fn new(
        group: &SymmetryGroup,
        erd: ErdKind,
        construction: Construction,
        n: usize,
        test_kind: TestKind,
        alpha: Real,
        calibration: Calibration,
        seed_value: u64,
    ) -> Result<Self> {
        let (reference, null) = if test_kind == TestKind::HotellingT2 {
            (None, None)
        } else {
            let reference = ReferenceSet::build(
                group,
                erd,
                n,
                construction,
                seed::derive(seed_value, Stream::Reference, 0),
            )?;
            // one shared null sample: the null law depends only on the
            // reference, not on the candidate center
            let null = match calibration {
                Calibration::Exact(b) => {
                    let mut rng = seed::rng(seed_value, Stream::Null, 0);
                    Some(exact_null(&reference, test_kind, b, &mut rng)?)
                }
                Calibration::Asymptotic => None,
            };
            (Some(reference), null)
        };
        Ok(Self { reference, null, test_kind, alpha, seed: seed_value })
    }

    /// Whether H0 "center = theta" is accepted.
    fn accepts(&self, data: &[Point], theta: &[Real]) -> Result<bool> {
        let shifted: Vec<Point> = data
            .iter()
            .map(|x| x.iter().zip(theta).map(|(xi, ti)| xi - ti).collect())
            .collect();
        if self.test_kind == TestKind::HotellingT2 {
            let (_, p_value) = hotelling_t2(&shifted)?;
            return Ok(p_value > self.alpha);
        }
        let reference = self.reference.as_ref().unwrap();
        let decomp = decompose(&shifted, reference, self.seed)?;
        let (statistic, df) = match self.test_kind {
            TestKind::Gwsr => {
                let (_, s) = gwsr_statistic(&decomp, reference)?;
                (s, reference.dim())
            }
            TestKind::GeneralizedSign => {
                let (_, s, df) = sign_statistic(&decomp, reference.group());
                let s = s.ok_or_else(|| {
                    Error::Domain("sign-test inversion needs a chi-square reference".into())
                })?;
                (s, df.unwrap())
            }
            TestKind::HotellingT2 => unreachable!(),
        };
        let p_value = match &self.null {
            Some(null) => exact_p_value(null, statistic),
            None => 1.0 - chi_square_cdf(statistic, df)?,
        };
        Ok(p_value > self.alpha)
    }
}

/// Accept every grid point θ for which the symmetry test on the data
/// shifted by −θ does not reject. One reference set and one null
/// sample are shared across the whole grid.
#[allow(clippy::too_many_arguments)]
pub fn confidence_grid(
    data: &[Point],
    group: &SymmetryGroup,
    erd: ErdKind,
    construction: Construction,
    test_kind: TestKind,
    alpha: Real,
    grid: &GridSpec,
    calibration: Calibration,
    seed_value: u64,
) -> Result<(ConfidenceSet, Vec<Point>, Vec<bool>)> {
    let candidates = grid.points();
    if candidates.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let inv = Inverter::new(
        group,
        erd,
        construction,
        data.len(),
        test_kind,
        alpha,
        calibration,
        seed_value,
    )?;
    let flags: Result<Vec<bool>> =
        candidates.par_iter().map(|theta| inv.accepts(data, theta)).collect();
    let flags = flags?;
    let accepted: Vec<Point> = candidates
        .iter()
        .zip(&flags)
        .filter(|(_, &ok)| ok)
        .map(|(pt, _)| pt.clone())
        .collect();
    let set = ConfidenceSet {
        mode: ConfidenceMode::Grid,
        candidates: candidates.len(),
        grid: Some(grid.clone()),
        hull: None,
        level: 1.0 - alpha,
        accepted,
    };
    Ok((set, candidates, flags))
}

/// Test θ = Xᵢ for each data point and return the convex hull of the
/// accepted ones.
#[allow(clippy::too_many_arguments)]
pub fn confidence_hull(
    data: &[Point],
    group: &SymmetryGroup,
    erd: ErdKind,
    construction: Construction,
    test_kind: TestKind,
    alpha: Real,
    calibration: Calibration,
    seed_value: u64,
) -> Result<(ConfidenceSet, Vec<Point>, Vec<bool>)> {
    let p = data[0].len();
    if data.len() < p + 1 {
        return Err(Error::TooFewObservations { n: data.len(), p });
    }
    let inv = Inverter::new(
        group,
        erd,
        construction,
        data.len(),
        test_kind,
        alpha,
        calibration,
        seed_value,
    )?;
    let flags: Result<Vec<bool>> =
        data.par_iter().map(|theta| inv.accepts(data, theta)).collect();
    let flags = flags?;
    let accepted: Vec<Point> = data
        .iter()
        .zip(&flags)
        .filter(|(_, &ok)| ok)
        .map(|(pt, _)| pt.clone())
        .collect();
    let hull = if p == 2 { convex_hull_2d(&accepted) } else { accepted.clone() };
    let set = ConfidenceSet {
        mode: ConfidenceMode::DataPointHull,
        candidates: data.len(),
        grid: None,
        hull: Some(hull),
        level: 1.0 - alpha,
        accepted,
    };
    Ok((set, data.to_vec(), flags))
}

/// Andrew's monotone chain; returns the hull vertices in
/// counterclockwise order without the repeated first point.
pub fn convex_hull_2d(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| a == b);
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &Point, a: &Point, b: &Point| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<Point> = Vec::new();
    for pt in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], pt) <= 0.0
        {
            lower.pop();
        }
        lower.push(pt.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for pt in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], pt) <= 0.0
        {
            upper.pop();
        }
        upper.push(pt.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn shifted_gaussian(n: usize, shift: &[Real], rng: &mut ChaCha8Rng) -> Vec<Point> {
        (0..n)
            .map(|_| {
                shift
                    .iter()
                    .map(|&s| {
                        let z: Real = StandardNormal.sample(rng);
                        z + s
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn hull_of_square() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
            vec![0.2, 0.8],
        ];
        let hull = convex_hull_2d(&pts);
        assert_eq!(hull.len(), 4);
    }

    #[test]
    fn grid_points_and_volume() {
        let g = GridSpec { lower: vec![0.0, 0.0], upper: vec![1.0, 2.0], steps: vec![3, 5] };
        let pts = g.points();
        assert_eq!(pts.len(), 15);
        assert_eq!(pts[0], vec![0.0, 0.0]);
        assert_eq!(pts[14], vec![1.0, 2.0]);
        assert!((g.cell_volume() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn exact_center_accepted_far_grid_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let theta = [0.5, 0.5];
        let data = shifted_gaussian(50, &theta, &mut rng);
        let group = SymmetryGroup::central(2);
        let grid = GridSpec { lower: vec![0.5, 0.5], upper: vec![0.5, 0.5], steps: vec![1, 1] };
        let (set, _, _) = confidence_grid(
            &data,
            &group,
            ErdKind::Gaussian,
            Construction::HaltonTransformed,
            TestKind::Gwsr,
            0.05,
            &grid,
            Calibration::Exact(199),
            1,
        )
        .unwrap();
        // a single true-center candidate is rejected with prob <= alpha
        assert!(set.accepted.len() <= 1);
        let far = GridSpec { lower: vec![40.0, 40.0], upper: vec![41.0, 41.0], steps: vec![3, 3] };
        let (set, cands, flags) = confidence_grid(
            &data,
            &group,
            ErdKind::Gaussian,
            Construction::HaltonTransformed,
            TestKind::Gwsr,
            0.05,
            &far,
            Calibration::Exact(199),
            1,
        )
        .unwrap();
        assert!(set.accepted.is_empty());
        let csv = set.csv(&cands, &flags);
        assert!(csv.starts_with("theta1,theta2,accepted\n"));
        assert_eq!(csv.lines().count(), 10);
    }

    #[test]
    fn empty_grid_rejected() {
        let grid = GridSpec { lower: vec![0.0], upper: vec![1.0], steps: vec![0] };
        let group = SymmetryGroup::central(1);
        let err = confidence_grid(
            &[vec![0.1], vec![-0.2]],
            &group,
            ErdKind::Gaussian,
            Construction::HaltonTransformed,
            TestKind::Gwsr,
            0.05,
            &grid,
            Calibration::Exact(99),
            0,
        );
        assert!(matches!(err, Err(Error::EmptyGrid)));
    }

    #[test]
    fn hull_variant_covers_center_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let data = shifted_gaussian(40, &[0.0, 0.0], &mut rng);
        let group = SymmetryGroup::central(2);
        let (set, _, _) = confidence_hull(
            &data,
            &group,
            ErdKind::Gaussian,
            Construction::HaltonTransformed,
            TestKind::Gwsr,
            0.05,
            Calibration::Exact(199),
            2,
        )
        .unwrap();
        assert!(set.hull.is_some());
        assert!(set.accepted.len() <= 40);
    }

    #[test]
    fn hotelling_inversion_accepts_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let data = shifted_gaussian(60, &[1.0, -1.0], &mut rng);
        let n = data.len() as Real;
        let mean: Point = (0..2)
            .map(|k| data.iter().map(|x| x[k]).sum::<Real>() / n)
            .collect();
        let group = SymmetryGroup::central(2);
        let grid = GridSpec { lower: mean.clone(), upper: mean.clone(), steps: vec![1, 1] };
        let (set, _, _) = confidence_grid(
            &data,
            &group,
            ErdKind::Gaussian,
            Construction::HaltonTransformed,
            TestKind::HotellingT2,
            0.05,
            &grid,
            Calibration::Asymptotic,
            0,
        )
        .unwrap();
        assert_eq!(set.accepted.len(), 1);
    }
}
