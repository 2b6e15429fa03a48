//! Goodness-of-fit helpers used by the test suite and the simulation
//! harness: Kolmogorov-Smirnov tests and a chi-square test on counts.

use crate::special::chi_square_cdf;
use crate::Real;

/// P(K > lambda) for the Kolmogorov distribution, by the alternating
/// series; the Stephens small-sample correction is applied by callers.
fn kolmogorov_sf(lambda: Real) -> Real {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as Real) * (k as Real) * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-12 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn ks_p_value(d: Real, n_eff: Real) -> Real {
    let sn = n_eff.sqrt();
    kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)
}

/// One-sample KS test of `sample` against the continuous CDF `cdf`.
/// Returns the asymptotic p-value.
pub fn ks_one_sample(sample: &[Real], cdf: impl Fn(Real) -> Real) -> Real {
    let n = sample.len();
    assert!(n > 0);
    let mut xs = sample.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut d: Real = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as Real / n as Real);
        d = d.max((i + 1) as Real / n as Real - f);
    }
    ks_p_value(d, n as Real)
}

/// Two-sample KS test; returns the asymptotic p-value.
pub fn ks_two_sample(a: &[Real], b: &[Real]) -> Real {
    let (n, m) = (a.len(), b.len());
    assert!(n > 0 && m > 0);
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|u, v| u.partial_cmp(v).unwrap());
    ys.sort_by(|u, v| u.partial_cmp(v).unwrap());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: Real = 0.0;
    while i < n && j < m {
        let (fx, fy) = (xs[i], ys[j]);
        if fx <= fy {
            i += 1;
        }
        if fy <= fx {
            j += 1;
        }
        d = d.max((i as Real / n as Real - j as Real / m as Real).abs());
    }
    let n_eff = (n * m) as Real / (n + m) as Real;
    ks_p_value(d, n_eff)
}

/// Chi-square test of observed counts against expected counts.
/// Returns the p-value with `counts.len() - 1` degrees of freedom.
pub fn chi_square_gof(observed: &[u64], expected: &[Real]) -> Real {
    assert_eq!(observed.len(), expected.len());
    assert!(observed.len() >= 2);
    let stat: Real = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            assert!(e > 0.0);
            let d = o as Real - e;
            d * d / e
        })
        .sum();
    1.0 - chi_square_cdf(stat, observed.len() - 1).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ks_accepts_uniform_rejects_shifted() {
        let mut r = ChaCha8Rng::seed_from_u64(10);
        let u: Vec<Real> = (0..2000).map(|_| r.random::<Real>()).collect();
        assert!(ks_one_sample(&u, |x| x.clamp(0.0, 1.0)) > 0.01);
        let v: Vec<Real> = u.iter().map(|x| x.powi(2)).collect();
        assert!(ks_one_sample(&v, |x| x.clamp(0.0, 1.0)) < 1e-6);
    }

    #[test]
    fn two_sample_same_law() {
        let mut r = ChaCha8Rng::seed_from_u64(11);
        let a: Vec<Real> = (0..1500).map(|_| r.random::<Real>()).collect();
        let b: Vec<Real> = (0..900).map(|_| r.random::<Real>()).collect();
        assert!(ks_two_sample(&a, &b) > 0.01);
        let c: Vec<Real> = b.iter().map(|x| x + 0.2).collect();
        assert!(ks_two_sample(&a, &c) < 1e-6);
    }

    #[test]
    fn chi_square_counts() {
        let obs = [245u64, 255, 260, 240];
        let exp = [250.0; 4];
        assert!(chi_square_gof(&obs, &exp) > 0.05);
        let skew = [400u64, 200, 200, 200];
        assert!(chi_square_gof(&skew, &exp) < 1e-6);
    }
}
