//! Data-generating scenarios, the power-study runner, and the relative
//! efficiency harness.

use crate::error::{Error, Result};
use crate::group::SymmetryGroup;
use crate::reference::{Construction, ErdKind, ReferenceSet};
use crate::seed::{self, Stream};
use crate::stats::{run_test, Calibration, TestKind};
use crate::{Point, Real};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

/// Which symmetry hypothesis a scenario family targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Central,
    Sign,
    Spherical,
}

/// A named data-generating configuration.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub name: String,
    pub n: usize,
    pub p: usize,
    /// Shift magnitude for scenarios with a λ parameter; ignored by the
    /// fixed-alternative scenarios.
    pub lambda: Real,
}

impl ScenarioSpec {
    /// Look up a named scenario with its default sample size and
    /// dimension.
    pub fn named(name: &str, lambda: Real) -> Result<Self> {
        let (n, p) = match name {
            "C1" | "C2" | "C3" | "C7" => (200, 2),
            "C4" | "C5" | "C6" => (if name == "C5" { 200 } else { 100 }, 2),
            "C8" | "C9" | "C10" => (200, 50),
            "S1" | "S2" | "S3" | "S4" | "S7" => (200, 2),
            "S5" | "S6" => (100, 2),
            "S8" | "S9" | "S10" => (200, 50),
            "Sp1" | "Sp2" | "Sp3" | "Sp4" | "Sp5" => (200, 2),
            "Sp6" => (1000, 2),
            "Sp7" => (100, 2),
            "Sp8" | "Sp9" | "Sp10" => (200, 50),
            _ => return Err(Error::UnknownScenario(name.to_string())),
        };
        Ok(Self { name: name.to_string(), n, p, lambda })
    }

    pub fn family(&self) -> Family {
        if self.name.starts_with("Sp") {
            Family::Spherical
        } else if self.name.starts_with('S') {
            Family::Sign
        } else {
            Family::Central
        }
    }

    /// The group under test for this scenario family.
    pub fn group(&self) -> SymmetryGroup {
        match self.family() {
            Family::Central => SymmetryGroup::central(self.p),
            Family::Sign => SymmetryGroup::sign_change(self.p),
            Family::Spherical => SymmetryGroup::spherical(self.p),
        }
    }
}

fn mvn_chol(cov: &[[Real; 2]; 2]) -> [[Real; 2]; 2] {
    let l11 = cov[0][0].sqrt();
    let l21 = cov[1][0] / l11;
    let l22 = (cov[1][1] - l21 * l21).sqrt();
    [[l11, 0.0], [l21, l22]]
}

fn mvn2<R: Rng>(l: &[[Real; 2]; 2], shift: Real, rng: &mut R) -> Point {
    let z1: Real = StandardNormal.sample(rng);
    let z2: Real = StandardNormal.sample(rng);
    vec![l[0][0] * z1 + shift, l[1][0] * z1 + l[1][1] * z2 + shift]
}

/// Multivariate t with 1 df: location + L z / sqrt(chi-square(1)).
fn mvt1<R: Rng>(l: &[[Real; 2]; 2], loc: Real, rng: &mut R) -> Point {
    let z1: Real = StandardNormal.sample(rng);
    let z2: Real = StandardNormal.sample(rng);
    let w: Real = StandardNormal.sample(rng);
    let denom = (w * w).sqrt();
    vec![
        (l[0][0] * z1) / denom + loc,
        (l[1][0] * z1 + l[1][1] * z2) / denom + loc,
    ]
}

fn chi1_shifted<R: Rng>(rng: &mut R) -> Real {
    let z: Real = StandardNormal.sample(rng);
    z * z - 1.0
}

fn laplace<R: Rng>(loc: Real, scale: Real, rng: &mut R) -> Real {
    let u: Real = rng.random::<Real>() - 0.5;
    loc - scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
}

fn ar1_chain<R: Rng, F: FnMut(&mut R) -> Real>(p: usize, rng: &mut R, mut innov: F) -> Point {
    let mut x = vec![0.0; p];
    x[0] = innov(rng);
    for i in 1..p {
        x[i] = 0.5 * x[i - 1] + innov(rng);
    }
    x
}

fn t1_scalar<R: Rng>(rng: &mut R) -> Real {
    let z: Real = StandardNormal.sample(rng);
    let w: Real = StandardNormal.sample(rng);
    z / (w * w).sqrt()
}

/// Inverse CDF of the standard Epanechnikov law with density
/// (3/4)(1 - y²) on [-1, 1], by safeguarded Newton on the cubic.
fn epanechnikov_std_quantile(u: Real) -> Real {
    let f = |y: Real| (2.0 + 3.0 * y - y * y * y) / 4.0;
    let (mut lo, mut hi) = (-1.0, 1.0);
    let mut y = 2.0 * u - 1.0;
    for _ in 0..100 {
        let fy = f(y);
        if (fy - u).abs() <= 1e-10 {
            break;
        }
        if fy < u {
            lo = y;
        } else {
            hi = y;
        }
        let deriv = 0.75 * (1.0 - y * y);
        let next = if deriv > 1e-12 { y - (fy - u) / deriv } else { 0.5 * (lo + hi) };
        y = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    y
}

/// Draw from the Epanechnikov density (3/(20√5 σ³))(5σ² - x²) on
/// |x| ≤ √5·σ, which has mean 0 and variance σ².
pub fn epanechnikov<R: Rng>(sigma: Real, rng: &mut R) -> Real {
    5.0f64.sqrt() * sigma * epanechnikov_std_quantile(rng.random())
}

/// Generate one sample from a named scenario.
pub fn generate(spec: &ScenarioSpec, rng: &mut ChaCha8Rng) -> Result<Vec<Point>> {
    let n = spec.n;
    let p = spec.p;
    let lam = spec.lambda;
    let cov_c = [[2.0, 1.0], [1.0, 3.0]];
    let cov_s = [[2.0, 0.0], [0.0, 3.0]];
    let data: Vec<Point> = match spec.name.as_str() {
        "C1" => {
            let l = mvn_chol(&cov_c);
            (0..n).map(|_| mvn2(&l, lam, rng)).collect()
        }
        "C2" => {
            let l = mvn_chol(&cov_c);
            (0..n).map(|_| mvt1(&l, lam, rng)).collect()
        }
        "C3" => (0..n)
            .map(|_| {
                let s: Real = if rng.random::<bool>() { 1.0 } else { -1.0 };
                vec![s * rng.random::<Real>() + lam, s * rng.random::<Real>() + lam]
            })
            .collect(),
        "C4" | "C5" | "S5" => (0..n)
            .map(|_| {
                (0..2)
                    .map(|_| {
                        let e: Real = Exp1.sample(rng);
                        e - 1.0
                    })
                    .collect()
            })
            .collect(),
        "C6" | "S6" | "Sp7" => (0..n).map(|_| vec![chi1_shifted(rng), chi1_shifted(rng)]).collect(),
        "C7" => (0..n)
            .map(|_| {
                (0..2)
                    .map(|_| 1.0 / (1.0 - rng.random::<Real>()) - 2.0)
                    .collect()
            })
            .collect(),
        "C8" => (0..n)
            .map(|_| ar1_chain(p, rng, |r| StandardNormal.sample(r)))
            .collect(),
        "C9" => (0..n)
            .map(|_| {
                let mut x = ar1_chain(p, rng, |r| StandardNormal.sample(r));
                for v in &mut x {
                    *v += 0.15;
                }
                x
            })
            .collect(),
        "C10" => (0..n)
            .map(|_| {
                let mut x = ar1_chain(p, rng, t1_scalar);
                for v in &mut x {
                    *v += 0.9;
                }
                x
            })
            .collect(),
        "S1" => {
            let l = mvn_chol(&cov_s);
            (0..n).map(|_| mvn2(&l, lam, rng)).collect()
        }
        "S2" => {
            let l = mvn_chol(&cov_s);
            (0..n).map(|_| mvt1(&l, lam, rng)).collect()
        }
        "S3" => (0..n)
            .map(|_| {
                (0..2)
                    .map(|_| 2.0 * rng.random::<Real>() - 1.0 + lam)
                    .collect()
            })
            .collect(),
        "S4" => {
            let l = mvn_chol(&cov_c);
            (0..n).map(|_| mvn2(&l, 0.0, rng)).collect()
        }
        "S7" => (0..n).map(|_| vec![laplace(0.2, 1.0, rng), laplace(0.2, 1.0, rng)]).collect(),
        "S8" | "S9" => {
            let shift = if spec.name == "S9" { 0.003 } else { 0.0 };
            (0..n)
                .map(|_| {
                    (1..=p)
                        .map(|i| {
                            let z: Real = StandardNormal.sample(rng);
                            (i as Real).sin() * z + shift
                        })
                        .collect()
                })
                .collect()
        }
        "S10" => (0..n)
            .map(|_| {
                let w: Real = StandardNormal.sample(rng);
                let denom = (w * w).sqrt();
                (1..=p)
                    .map(|i| {
                        let z: Real = StandardNormal.sample(rng);
                        (i as Real).sin() * z / denom + 0.003
                    })
                    .collect()
            })
            .collect(),
        "Sp1" => (0..n)
            .map(|_| {
                (0..2)
                    .map(|_| {
                        let z: Real = StandardNormal.sample(rng);
                        z + lam
                    })
                    .collect()
            })
            .collect(),
        "Sp2" => {
            let l = [[1.0, 0.0], [0.0, 1.0]];
            (0..n).map(|_| mvt1(&l, lam, rng)).collect()
        }
        "Sp3" => (0..n)
            .map(|_| {
                let r = rng.random::<Real>().sqrt();
                let theta = 2.0 * std::f64::consts::PI * rng.random::<Real>();
                vec![r * theta.cos() + lam, r * theta.sin() + lam]
            })
            .collect(),
        "Sp4" => (0..n)
            .map(|_| {
                let z1: Real = StandardNormal.sample(rng);
                let z2: Real = StandardNormal.sample(rng);
                vec![2.0 * z1, z2]
            })
            .collect(),
        "Sp5" => {
            let l = mvn_chol(&[[1.0, 0.6], [0.6, 1.0]]);
            (0..n).map(|_| mvn2(&l, 0.0, rng)).collect()
        }
        "Sp6" => (0..n)
            .map(|_| (0..2).map(|_| 2.0 * rng.random::<Real>() - 1.0).collect())
            .collect(),
        "Sp8" | "Sp9" => {
            let shift = if spec.name == "Sp9" { 0.05 } else { 0.0 };
            (0..n)
                .map(|_| {
                    (0..p)
                        .map(|_| {
                            let z: Real = StandardNormal.sample(rng);
                            z + shift
                        })
                        .collect()
                })
                .collect()
        }
        "Sp10" => (0..n)
            .map(|_| {
                let w: Real = StandardNormal.sample(rng);
                let denom = (w * w).sqrt();
                (0..p)
                    .map(|_| {
                        let z: Real = StandardNormal.sample(rng);
                        z / denom + 0.05
                    })
                    .collect()
            })
            .collect(),
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    Ok(data)
}

/// One test procedure inside a power study.
#[derive(Debug, Clone)]
pub struct Method {
    pub test: TestKind,
    pub erd: ErdKind,
    pub construction: Construction,
    pub calibration: Calibration,
}

impl Method {
    pub fn label(&self) -> String {
        match self.test {
            TestKind::HotellingT2 => "hotelling".to_string(),
            _ => format!("{}-{}", self.test.label(), self.construction.label()),
        }
    }
}

/// Aggregated rejection counts for one (scenario, method) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerResult {
    pub scenario: String,
    pub method: String,
    pub lambda: Real,
    pub n: usize,
    pub p: usize,
    pub replications: usize,
    pub rejections: usize,
    pub power: Real,
    pub stderr: Real,
}

impl PowerResult {
    fn new(
        scenario: &str,
        method: String,
        lambda: Real,
        n: usize,
        p: usize,
        replications: usize,
        rejections: usize,
    ) -> Self {
        let power = rejections as Real / replications as Real;
        Self {
            scenario: scenario.to_string(),
            method,
            lambda,
            n,
            p,
            replications,
            rejections,
            power,
            stderr: (power * (1.0 - power) / replications as Real).sqrt(),
        }
    }
}

/// Empirical power of each method over independent replications. A
/// random-sampling reference is redrawn inside every replication; the
/// Halton reference is the same deterministic set throughout.
pub fn power_study(
    spec: &ScenarioSpec,
    methods: &[Method],
    replications: usize,
    alpha: Real,
    seed_value: u64,
) -> Result<Vec<PowerResult>> {
    assert!(replications >= 1);
    let group = spec.group();
    let rejections: Result<Vec<Vec<bool>>> = (0..replications as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = seed::rng(seed_value, Stream::Scenario, rep);
            let data = generate(spec, &mut rng)?;
            let child = seed::derive(seed_value, Stream::Null, rep);
            methods
                .iter()
                .map(|m| {
                    if m.test == TestKind::HotellingT2 {
                        let (_, p_value) = crate::stats::hotelling_t2(&data)?;
                        return Ok(p_value <= alpha);
                    }
                    let reference = ReferenceSet::build(
                        &group,
                        m.erd,
                        spec.n,
                        m.construction,
                        seed::derive(seed_value, Stream::Reference, rep),
                    )?;
                    let report = run_test(&data, &reference, m.test, alpha, m.calibration, child)?;
                    Ok(report.reject)
                })
                .collect()
        })
        .collect();
    let rejections = rejections?;
    Ok(methods
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let count = rejections.iter().filter(|r| r[k]).count();
            PowerResult::new(
                &spec.name,
                m.label(),
                spec.lambda,
                spec.n,
                spec.p,
                replications,
                count,
            )
        })
        .collect())
}

/// Product-marginal law used by the efficiency harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AreLaw {
    /// i.i.d. N(0,1) coordinates.
    Gaussian,
    /// i.i.d. Epanechnikov coordinates with variance 1/5.
    Epanechnikov,
}

fn are_sample(law: AreLaw, n: usize, p: usize, shift: Real, rng: &mut ChaCha8Rng) -> Vec<Point> {
    (0..n)
        .map(|_| {
            (0..p)
                .map(|_| match law {
                    AreLaw::Gaussian => {
                        let z: Real = StandardNormal.sample(rng);
                        z + shift
                    }
                    AreLaw::Epanechnikov => epanechnikov(1.0 / 5.0f64.sqrt(), rng) + shift,
                })
                .collect()
        })
        .collect()
}

/// Compare the signed-rank test at the full sample size with
/// Hotelling's T² at the reduced size `round(ratio·n_full)`, both under
/// the same shifted product law.
#[allow(clippy::too_many_arguments)]
pub fn are_check(
    law: AreLaw,
    erd: ErdKind,
    p: usize,
    shift: Real,
    n_full: usize,
    efficiency_ratio: Real,
    replications: usize,
    alpha: Real,
    seed_value: u64,
) -> Result<(PowerResult, PowerResult)> {
    assert!(efficiency_ratio > 0.0 && efficiency_ratio <= 1.0);
    let n_reduced = (efficiency_ratio * n_full as Real).round() as usize;
    let group = SymmetryGroup::central(p);
    let counts: Result<Vec<(bool, bool)>> = (0..replications as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = seed::rng(seed_value, Stream::Scenario, rep);
            let data = are_sample(law, n_full, p, shift, &mut rng);
            let reference = ReferenceSet::build(
                &group,
                erd,
                n_full,
                Construction::RandomSample,
                seed::derive(seed_value, Stream::Reference, rep),
            )?;
            let gwsr = run_test(
                &data,
                &reference,
                TestKind::Gwsr,
                alpha,
                Calibration::Asymptotic,
                seed::derive(seed_value, Stream::Null, rep),
            )?;
            let (_, p_hot) = crate::stats::hotelling_t2(&data[..n_reduced])?;
            Ok((gwsr.reject, p_hot <= alpha))
        })
        .collect();
    let counts = counts?;
    let g = counts.iter().filter(|c| c.0).count();
    let h = counts.iter().filter(|c| c.1).count();
    let law_name = match law {
        AreLaw::Gaussian => "gauss-shift",
        AreLaw::Epanechnikov => "epanechnikov-shift",
    };
    Ok((
        PowerResult::new(law_name, "gwsr".into(), shift, n_full, p, replications, g),
        PowerResult::new(law_name, "hotelling".into(), shift, n_reduced, p, replications, h),
    ))
}

/// CSV rows for a list of power results, with header.
pub fn power_csv(results: &[PowerResult]) -> String {
    let mut out = String::from("scenario,method,lambda,n,p,replications,power,stderr\n");
    for r in results {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.scenario,
            r.method,
            crate::io::fmt_sig(r.lambda),
            r.n,
            r.p,
            r.replications,
            crate::io::fmt_sig(r.power),
            crate::io::fmt_sig(r.stderr),
        ));
    }
    out
}
