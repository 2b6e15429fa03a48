//! Test statistics and calibration: the generalized sign statistic, the
//! generalized Wilcoxon signed-rank (GWSR) statistic, Hotelling's T²,
//! and both chi-square and Monte-Carlo exact calibration.

use crate::error::{Error, Result};
use crate::group::{GroupKind, SymmetryGroup};
use crate::reference::{ReferenceSet, ScoreFunction};
use crate::seed::{self, Stream};
use crate::signedrank::{decompose, Decomposition};
use crate::special::chi_square_cdf;
use crate::{Point, Real};
use nalgebra::DMatrix;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    GeneralizedSign,
    Gwsr,
    HotellingT2,
}

impl TestKind {
    pub fn label(self) -> &'static str {
        match self {
            TestKind::GeneralizedSign => "generalized_sign",
            TestKind::Gwsr => "gwsr",
            TestKind::HotellingT2 => "hotelling_t2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Calibration {
    Asymptotic,
    /// Monte-Carlo null with the given replication count.
    Exact(usize),
}

/// Everything a single test run reports.
#[derive(Debug, Clone, Serialize)]
pub struct TestReport {
    pub test_kind: TestKind,
    /// The calibrated scalar compared against the null distribution.
    pub statistic: Real,
    /// The underlying vector (GWSR) or row-major matrix (sign test).
    pub raw: Vec<Real>,
    pub p_asymptotic: Option<Real>,
    pub p_exact: Option<Real>,
    /// Monte-Carlo replication count behind `p_exact`.
    pub b: Option<usize>,
    pub alpha: Real,
    pub reject: bool,
    pub df: Option<usize>,
    pub seed: u64,
    pub n: usize,
    pub p: usize,
    pub group: String,
    pub erd: Option<String>,
}

pub(crate) fn group_label(kind: &GroupKind) -> &'static str {
    match kind {
        GroupKind::Central => "central",
        GroupKind::SignChange => "sign",
        GroupKind::Spherical => "spherical",
        GroupKind::FiniteMatrices(_) => "finite",
    }
}

pub(crate) fn erd_label(erd: crate::reference::ErdKind) -> &'static str {
    match erd {
        crate::reference::ErdKind::Gaussian => "gaussian",
        crate::reference::ErdKind::Uniform => "uniform",
        crate::reference::ErdKind::SphericalUniform => "spherical-uniform",
    }
}

fn frobenius_sq(m: &DMatrix<Real>) -> Real {
    m.iter().map(|x| x * x).sum()
}

/// T_n = n^{-1/2} Σᵢ Sᵢ as a p×p matrix together with the calibrated
/// scalar (None for custom matrix groups, which have no chi-square
/// reference).
pub fn sign_statistic(
    decomp: &Decomposition,
    group: &SymmetryGroup,
) -> (DMatrix<Real>, Option<Real>, Option<usize>) {
    let p = group.dim;
    let n = decomp.signs.len();
    let mut t = DMatrix::zeros(p, p);
    for s in &decomp.signs {
        t += s.to_matrix(p);
    }
    t /= (n as Real).sqrt();
    let f = frobenius_sq(&t);
    let (scalar, df) = match group.kind {
        GroupKind::Central => (Some(f / p as Real), Some(1)),
        GroupKind::SignChange => (Some(f), Some(p)),
        GroupKind::Spherical => (Some(p as Real * f), Some(p * p)),
        GroupKind::FiniteMatrices(_) => (None, None),
    };
    (t, scalar, df)
}

/// Frobenius scalar for a sign-test matrix drawn in the exact null;
/// custom matrix groups use the unscaled Frobenius norm (exact
/// calibration makes the scaling irrelevant).
fn sign_scalar(t: &DMatrix<Real>, kind: &GroupKind, p: usize) -> Real {
    let f = frobenius_sq(t);
    match kind {
        GroupKind::Central => f / p as Real,
        GroupKind::SignChange => f,
        GroupKind::Spherical => p as Real * f,
        GroupKind::FiniteMatrices(_) => f,
    }
}

/// W_n = n^{-1/2} Σᵢ Sᵢ J(Rᵢ) and the calibrated scalar
/// W_nᵀ Σ_ERD⁻¹ W_n. The plug-in score multiplies the signed-rank sum.
pub fn gwsr_statistic(decomp: &Decomposition, reference: &ReferenceSet) -> Result<(Point, Real)> {
    let p = reference.dim();
    let n = decomp.signed_ranks.len();
    let mut w = vec![0.0; p];
    for sr in &decomp.signed_ranks {
        for k in 0..p {
            w[k] += sr[k];
        }
    }
    let root = (n as Real).sqrt();
    for wk in &mut w {
        *wk /= root;
    }
    let w = reference.score.apply(&w);
    let scalar = erd_quadratic_form(&w, reference)?;
    Ok((w, scalar))
}

fn erd_quadratic_form(w: &[Real], reference: &ReferenceSet) -> Result<Real> {
    let sigma = reference.erd_covariance();
    let scale = sigma[(0, 0)];
    if scale <= 0.0 {
        return Err(Error::SingularErd);
    }
    Ok(crate::dot(w, w) / scale)
}

/// Sample mean and (n-1)-denominator covariance.
fn mean_and_cov(data: &[Point]) -> (Vec<Real>, DMatrix<Real>) {
    let n = data.len();
    let p = data[0].len();
    let mut mean = vec![0.0; p];
    for x in data {
        for k in 0..p {
            mean[k] += x[k];
        }
    }
    for m in &mut mean {
        *m /= n as Real;
    }
    let mut cov = DMatrix::zeros(p, p);
    for x in data {
        for i in 0..p {
            for j in 0..p {
                cov[(i, j)] += (x[i] - mean[i]) * (x[j] - mean[j]);
            }
        }
    }
    cov /= (n - 1) as Real;
    (mean, cov)
}

/// Hotelling's T² = n·X̄ᵀ S⁻¹ X̄ with its chi-square p-value.
pub fn hotelling_t2(data: &[Point]) -> Result<(Real, Real)> {
    let n = data.len();
    let p = data[0].len();
    if n <= p {
        return Err(Error::TooFewObservations { n, p });
    }
    let (mean, cov) = mean_and_cov(data);
    let eig = cov.clone().symmetric_eigen();
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    if min <= 0.0 || max / min >= 1e12 {
        return Err(Error::SingularCovariance);
    }
    let inv = cov.try_inverse().ok_or(Error::SingularCovariance)?;
    let m = DMatrix::from_column_slice(p, 1, &mean);
    let t2 = n as Real * (m.transpose() * inv * m)[(0, 0)];
    let p_value = 1.0 - chi_square_cdf(t2, p)?;
    Ok((t2, p_value))
}

/// The inverse symmetric square root of the sample covariance, for the
/// data-driven plug-in score.
pub fn plug_in_score(data: &[Point]) -> Result<ScoreFunction> {
    let n = data.len();
    let p = data[0].len();
    if n <= p {
        return Err(Error::TooFewObservations { n, p });
    }
    let (_, cov) = mean_and_cov(data);
    let eig = cov.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::SingularCovariance);
    }
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    let m = &eig.eigenvectors * d * eig.eigenvectors.transpose();
    ScoreFunction::gaussian_plug_in(m)
}

/// Sample the conditional-on-reference null law of the calibrated
/// scalar: B draws of i.i.d. Haar signs applied to the reference
/// points. Returns the sorted scalars.
pub fn exact_null<R: rand::Rng>(
    reference: &ReferenceSet,
    test_kind: TestKind,
    b: usize,
    rng: &mut R,
) -> Result<Vec<Real>> {
    assert!(b >= 1);
    let group = reference.group();
    let p = reference.dim();
    let n = reference.len();
    let root = (n as Real).sqrt();
    let mut out = Vec::with_capacity(b);
    for _ in 0..b {
        let scalar = match test_kind {
            TestKind::GeneralizedSign => {
                let mut t = DMatrix::zeros(p, p);
                for _ in 0..n {
                    t += group.haar_sample(rng).to_matrix(p);
                }
                t /= root;
                sign_scalar(&t, &group.kind, p)
            }
            TestKind::Gwsr => {
                let mut w = vec![0.0; p];
                for h in reference.points() {
                    let s = group.haar_sample(rng);
                    let sh = s.apply(h);
                    for k in 0..p {
                        w[k] += sh[k];
                    }
                }
                for wk in &mut w {
                    *wk /= root;
                }
                let w = reference.score.apply(&w);
                erd_quadratic_form(&w, reference)?
            }
            TestKind::HotellingT2 => {
                return Err(Error::Domain(
                    "exact calibration is not defined for Hotelling's T²".into(),
                ))
            }
        };
        out.push(scalar);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Finite-sample-valid Monte-Carlo p-value (1 + #{null ≥ obs})/(B + 1).
/// Null draws within rounding error of the observation count as ties so
/// that lattice-valued statistics are handled conservatively.
pub fn exact_p_value(null_sorted: &[Real], observed: Real) -> Real {
    let b = null_sorted.len();
    let cut = observed - 1e-9 * (1.0 + observed.abs());
    let idx = null_sorted.partition_point(|&v| v < cut);
    let count = b - idx;
    (1.0 + count as Real) / (b as Real + 1.0)
}

/// Decompose, compute the requested statistic, calibrate, and assemble
/// the report. Deterministic given (data, reference, seed).
pub fn run_test(
    data: &[Point],
    reference: &ReferenceSet,
    test_kind: TestKind,
    alpha: Real,
    calibration: Calibration,
    seed_value: u64,
) -> Result<TestReport> {
    let group = reference.group();
    let p = group.dim;
    let n = data.len();

    if test_kind == TestKind::HotellingT2 {
        let (t2, p_value) = hotelling_t2(data)?;
        return Ok(TestReport {
            test_kind,
            statistic: t2,
            raw: vec![t2],
            p_asymptotic: Some(p_value),
            p_exact: None,
            b: None,
            alpha,
            reject: p_value <= alpha,
            df: Some(p),
            seed: seed_value,
            n,
            p,
            group: group_label(&group.kind).to_string(),
            erd: None,
        });
    }

    let decomp = decompose(data, reference, seed_value)?;
    let (raw, statistic, df) = match test_kind {
        TestKind::GeneralizedSign => {
            let (t, scalar, df) = sign_statistic(&decomp, group);
            let scalar = match scalar {
                Some(s) => s,
                None => sign_scalar(&t, &group.kind, p),
            };
            (t.transpose().as_slice().to_vec(), scalar, df)
        }
        TestKind::Gwsr => {
            let (w, scalar) = gwsr_statistic(&decomp, reference)?;
            (w, scalar, Some(p))
        }
        TestKind::HotellingT2 => unreachable!(),
    };

    let p_asymptotic = match df {
        Some(k) => Some(1.0 - chi_square_cdf(statistic, k)?),
        None => None,
    };
    let (p_exact, b_used) = match calibration {
        Calibration::Exact(b) => {
            let mut rng = seed::rng(seed_value, Stream::Null, 0);
            let null = exact_null(reference, test_kind, b, &mut rng)?;
            (Some(exact_p_value(&null, statistic)), Some(b))
        }
        Calibration::Asymptotic => (None, None),
    };
    let chosen = match calibration {
        Calibration::Exact(_) => p_exact.unwrap(),
        Calibration::Asymptotic => p_asymptotic.ok_or_else(|| {
            Error::Domain(
                "chi-square calibration is unavailable for custom matrix groups; use exact"
                    .into(),
            )
        })?,
    };
    Ok(TestReport {
        test_kind,
        statistic,
        raw,
        p_asymptotic,
        p_exact,
        b: b_used,
        alpha,
        reject: chosen <= alpha,
        df,
        seed: seed_value,
        n,
        p,
        group: group_label(&group.kind).to_string(),
        erd: Some(erd_label(reference.erd).to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use crate::reference::{Construction, ErdKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian_sample(n: usize, p: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
        (0..n)
            .map(|_| (0..p).map(|_| StandardNormal.sample(rng)).collect())
            .collect()
    }

    fn fake_decomp(signs: Vec<GroupElement>, signed_ranks: Vec<Point>) -> Decomposition {
        let n = signs.len();
        Decomposition {
            ranks: signed_ranks.clone(),
            permutation: (0..n).collect(),
            signs,
            signed_ranks,
            seed: 0,
        }
    }

    #[test]
    fn sign_statistic_cancellation_and_sum() {
        let g = SymmetryGroup::central(2);
        let signs = vec![
            GroupElement::Scalar(1.0),
            GroupElement::Scalar(1.0),
            GroupElement::Scalar(-1.0),
            GroupElement::Scalar(-1.0),
        ];
        let d = fake_decomp(signs, vec![vec![0.0, 0.0]; 4]);
        let (t, scalar, df) = sign_statistic(&d, &g);
        assert_eq!(t, DMatrix::zeros(2, 2));
        assert_eq!(scalar, Some(0.0));
        assert_eq!(df, Some(1));

        let all_plus = vec![GroupElement::Scalar(1.0); 4];
        let d = fake_decomp(all_plus, vec![vec![0.0, 0.0]; 4]);
        let (t, scalar, _) = sign_statistic(&d, &g);
        assert_eq!(t, DMatrix::identity(2, 2) * 2.0);
        assert_eq!(scalar, Some(4.0));
    }

    #[test]
    fn gwsr_hand_example() {
        let g = SymmetryGroup::central(2);
        let reference = ReferenceSet::from_points(
            g,
            vec![vec![1.0, 0.1], vec![0.1, 1.0]],
            ErdKind::Gaussian,
        )
        .unwrap();
        let d = fake_decomp(
            vec![GroupElement::Scalar(1.0); 2],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        );
        let (w, scalar) = gwsr_statistic(&d, &reference).unwrap();
        let r = 1.0 / 2.0f64.sqrt();
        assert!((w[0] - r).abs() < 1e-12 && (w[1] - r).abs() < 1e-12);
        assert!((scalar - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gwsr_zero_sum_is_zero() {
        let g = SymmetryGroup::central(2);
        let reference = ReferenceSet::from_points(
            g,
            vec![vec![1.0, 0.1], vec![0.1, 1.0]],
            ErdKind::Gaussian,
        )
        .unwrap();
        let d = fake_decomp(
            vec![GroupElement::Scalar(1.0), GroupElement::Scalar(-1.0)],
            vec![vec![1.0, 0.5], vec![-1.0, -0.5]],
        );
        let (_, scalar) = gwsr_statistic(&d, &reference).unwrap();
        assert_eq!(scalar, 0.0);
    }

    #[test]
    fn hotelling_hand_example_and_errors() {
        let (t2, _) = hotelling_t2(&[vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        assert!((t2 - 12.0).abs() < 1e-9);
        assert!(matches!(
            hotelling_t2(&[vec![1.0, 2.0]]),
            Err(Error::TooFewObservations { n: 1, p: 2 })
        ));
        let degenerate = vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0]];
        assert!(matches!(hotelling_t2(&degenerate), Err(Error::SingularCovariance)));
    }

    #[test]
    fn hotelling_zero_mean_is_zero() {
        let data = vec![vec![1.0, 2.0], vec![-1.0, -2.0], vec![2.0, -1.0], vec![-2.0, 1.0]];
        let (t2, p_value) = hotelling_t2(&data).unwrap();
        assert!(t2.abs() < 1e-12);
        assert!((p_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn hotelling_affine_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let data = gaussian_sample(30, 3, &mut rng);
        let (t2, _) = hotelling_t2(&data).unwrap();
        let a = nalgebra::DMatrix::from_row_slice(
            3,
            3,
            &[2.0, 0.3, -0.5, 0.1, 1.5, 0.2, -0.7, 0.4, 0.9],
        );
        let mapped: Vec<Point> = data
            .iter()
            .map(|x| {
                let v = &a * nalgebra::DMatrix::from_column_slice(3, 1, x);
                v.as_slice().to_vec()
            })
            .collect();
        let (t2_mapped, _) = hotelling_t2(&mapped).unwrap();
        assert!((t2 - t2_mapped).abs() <= 1e-9 * (1.0 + t2.abs()));
    }

    #[test]
    fn hotelling_null_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let reps = 10_000;
        let mut rejections = 0;
        for _ in 0..reps {
            let data = gaussian_sample(200, 2, &mut rng);
            let (_, p_value) = hotelling_t2(&data).unwrap();
            if p_value <= 0.05 {
                rejections += 1;
            }
        }
        let rate = rejections as Real / reps as Real;
        assert!((rate - 0.05).abs() <= 0.01, "size {rate}");
    }

    #[test]
    fn exact_null_single_point_two_values() {
        let g = SymmetryGroup::central(2);
        let reference =
            ReferenceSet::from_points(g, vec![vec![1.0, 2.0]], ErdKind::Gaussian).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let null = exact_null(&reference, TestKind::Gwsr, 200, &mut rng).unwrap();
        let mut distinct: Vec<Real> = null.clone();
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        assert!(distinct.len() <= 2, "{distinct:?}");
    }

    #[test]
    fn exact_null_sign_test_matches_binomial() {
        // Central group, n = 10: the scalar is (2K - 10)²/10 with
        // K ~ Binomial(10, 1/2)
        let g = SymmetryGroup::central(1);
        let reference = ReferenceSet::build(
            &g,
            ErdKind::Gaussian,
            10,
            Construction::HaltonTransformed,
            0,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let b = 100_000;
        let null = exact_null(&reference, TestKind::GeneralizedSign, b, &mut rng).unwrap();
        let n = 10u64;
        let mut binom = std::collections::BTreeMap::new();
        for k in 0..=n {
            let weight = (0..k).fold(1.0, |acc, i| {
                acc * (n - i) as Real / (i + 1) as Real
            }) / 2.0f64.powi(n as i32);
            let value = ((2.0 * k as Real - 10.0).powi(2) / 10.0 * 1e9).round() as i64;
            *binom.entry(value).or_insert(0.0) += weight;
        }
        let mut empirical = std::collections::BTreeMap::new();
        for &v in &null {
            *empirical.entry((v * 1e9).round() as i64).or_insert(0.0) += 1.0 / b as Real;
        }
        let keys: std::collections::BTreeSet<i64> =
            binom.keys().chain(empirical.keys()).copied().collect();
        let tv: Real = keys
            .iter()
            .map(|k| {
                (binom.get(k).copied().unwrap_or(0.0)
                    - empirical.get(k).copied().unwrap_or(0.0))
                .abs()
            })
            .sum::<Real>()
            / 2.0;
        assert!(tv <= 0.02, "total variation {tv}");
    }

    #[test]
    fn exact_p_value_rule() {
        let null = vec![1.0, 2.0, 3.0, 4.0];
        assert_eq!(exact_p_value(&null, 5.0), 1.0 / 5.0);
        assert_eq!(exact_p_value(&null, 2.5), 3.0 / 5.0);
        assert_eq!(exact_p_value(&null, 0.0), 1.0);
        // observations tied with null values count as >=
        assert_eq!(exact_p_value(&null, 3.0), 3.0 / 5.0);
    }

    #[test]
    fn exact_p_value_super_uniform() {
        let g = SymmetryGroup::central(2);
        let n = 10;
        let reference =
            ReferenceSet::build(&g, ErdKind::Gaussian, n, Construction::HaltonTransformed, 0)
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let reps = 10_000;
        let mut p_values = Vec::with_capacity(reps);
        for rep in 0..reps {
            let data = gaussian_sample(n, 2, &mut rng);
            let report = run_test(
                &data,
                &reference,
                TestKind::Gwsr,
                0.05,
                Calibration::Exact(99),
                rep as u64,
            )
            .unwrap();
            p_values.push(report.p_exact.unwrap());
        }
        for alpha in [0.01, 0.05, 0.1] {
            let rate = p_values.iter().filter(|&&pv| pv <= alpha).count() as Real
                / reps as Real;
            assert!(rate <= alpha + 0.01, "P(p <= {alpha}) = {rate}");
        }
    }

    #[test]
    fn null_components_asymptotically_gaussian() {
        let g = SymmetryGroup::central(2);
        let n = 2000;
        let reference =
            ReferenceSet::build(&g, ErdKind::Gaussian, n, Construction::HaltonTransformed, 0)
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let b = 10_000;
        let root = (n as Real).sqrt();
        let mut comp0 = Vec::with_capacity(b);
        for _ in 0..b {
            let mut w = [0.0; 2];
            for h in reference.points() {
                let s = g.haar_sample(&mut rng);
                let sh = s.apply(h);
                w[0] += sh[0];
                w[1] += sh[1];
            }
            comp0.push(w[0] / root);
        }
        let p_value = crate::diagnostics::ks_one_sample(&comp0, crate::special::normal_cdf);
        assert!(p_value > 0.001, "KS p-value {p_value}");
    }

    #[test]
    fn run_test_report_consistency() {
        let g = SymmetryGroup::central(2);
        let n = 30;
        let reference =
            ReferenceSet::build(&g, ErdKind::Gaussian, n, Construction::HaltonTransformed, 0)
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let data = gaussian_sample(n, 2, &mut rng);
        for kind in [TestKind::GeneralizedSign, TestKind::Gwsr] {
            let report =
                run_test(&data, &reference, kind, 0.05, Calibration::Exact(199), 7).unwrap();
            let pe = report.p_exact.unwrap();
            assert!((0.0..=1.0).contains(&pe));
            assert_eq!(report.reject, pe <= report.alpha);
            assert_eq!(report.n, n);
            assert_eq!(report.group, "central");
            let again =
                run_test(&data, &reference, kind, 0.05, Calibration::Exact(199), 7).unwrap();
            assert_eq!(serde_json::to_string(&report).unwrap(), serde_json::to_string(&again).unwrap());
        }
        let hot = run_test(&data, &reference, TestKind::HotellingT2, 0.05, Calibration::Asymptotic, 7)
            .unwrap();
        assert!(hot.p_asymptotic.is_some());
    }

    #[test]
    fn finite_group_requires_exact() {
        let refl = nalgebra::DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0]);
        let g = SymmetryGroup::finite(vec![nalgebra::DMatrix::identity(2, 2), refl]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let n = 10;
        let reference =
            ReferenceSet::build(&g, ErdKind::Gaussian, n, Construction::RandomSample, 1).unwrap();
        let data = gaussian_sample(n, 2, &mut rng);
        assert!(run_test(
            &data,
            &reference,
            TestKind::GeneralizedSign,
            0.05,
            Calibration::Asymptotic,
            0
        )
        .is_err());
        assert!(run_test(
            &data,
            &reference,
            TestKind::GeneralizedSign,
            0.05,
            Calibration::Exact(99),
            0
        )
        .is_ok());
    }

    #[test]
    fn plug_in_score_matrix_is_inverse_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        let data: Vec<Point> = (0..5000)
            .map(|_| {
                let z1: Real = StandardNormal.sample(&mut rng);
                let z2: Real = StandardNormal.sample(&mut rng);
                vec![2.0 * z1, 3.0 * z2]
            })
            .collect();
        let score = plug_in_score(&data).unwrap();
        match score {
            ScoreFunction::GaussianPlugIn(m) => {
                assert!((m[(0, 0)] - 0.5).abs() < 0.05);
                assert!((m[(1, 1)] - 1.0 / 3.0).abs() < 0.05);
                assert!(m[(0, 1)].abs() < 0.05);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
