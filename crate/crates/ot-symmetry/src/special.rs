//! Normal and chi-square distribution functions.
//!
//! Self-contained implementations tuned for the accuracy the calibration
//! layer needs: absolute error below 1e-9 for the normal CDF/quantile and
//! relative error below 1e-10 for the regularized incomplete gamma.

use crate::error::{Error, Result};
use crate::Real;

/// ln Γ(x) for x > 0, Lanczos approximation (g = 7, n = 9).
pub fn ln_gamma(x: Real) -> Real {
    const COEFFS: [Real; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // reflection formula
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + (i as Real) + 1.0);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Error function via Taylor series (small x) or continued fraction (large x).
pub fn erf(x: Real) -> Real {
    if x < 0.0 {
        return -erf(-x);
    }
    if x < 3.0 {
        // erf(x) = (2/sqrt(pi)) e^{-x^2} sum_{n>=0} x^{2n+1} 2^n / (1*3*...*(2n+1))
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut n = 0u32;
        while term.abs() > 1e-18 * sum.abs() + 1e-300 {
            n += 1;
            term *= 2.0 * x2 / (2.0 * n as Real + 1.0);
            sum += term;
        }
        2.0 / std::f64::consts::PI.sqrt() * (-x2).exp() * sum
    } else {
        1.0 - erfc_cf(x)
    }
}

/// Complementary error function; continued fraction for the tail.
pub fn erfc(x: Real) -> Real {
    if x < 0.0 {
        2.0 - erfc(-x)
    } else if x < 3.0 {
        1.0 - erf(x)
    } else {
        erfc_cf(x)
    }
}

// Lentz's algorithm on the Laplace continued fraction, valid for x >= 3.
fn erfc_cf(x: Real) -> Real {
    if x > 27.0 {
        return 0.0; // below double-precision underflow of exp(-x^2)
    }
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    let tiny = 1e-300;
    for n in 1..200 {
        let a = 0.5 * n as Real;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / std::f64::consts::PI.sqrt() / f
}

/// Standard normal CDF Φ(x).
pub fn normal_cdf(x: Real) -> Real {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density φ(x).
pub fn normal_pdf(x: Real) -> Real {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal quantile Φ⁻¹(u), u in (0, 1).
///
/// Acklam's rational approximation refined by one Halley step on Φ.
pub fn normal_quantile(u: Real) -> Result<Real> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!("normal quantile needs u in (0,1), got {u}")));
    }
    const A: [Real; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [Real; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [Real; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [Real; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    let u_low = 0.02425;
    let mut x = if u < u_low {
        let q = (-2.0 * u.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if u <= 1.0 - u_low {
        let q = u - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - u).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    // one Halley refinement
    let e = normal_cdf(x) - u;
    let f = e * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * x * x).exp();
    x -= f / (1.0 + 0.5 * x * f);
    Ok(x)
}

/// Half-normal quantile: F⁻¹ for |Z| with Z ~ N(0,1).
pub fn half_normal_quantile(u: Real) -> Result<Real> {
    normal_quantile(0.5 * (1.0 + u))
}

/// Regularized lower incomplete gamma P(a, x).
pub fn reg_gamma_lower(a: Real, x: Real) -> Result<Real> {
    if a <= 0.0 || x < 0.0 {
        return Err(Error::Domain(format!("reg_gamma_lower needs a > 0, x >= 0 (a={a}, x={x})")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        // series representation
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut k = a;
        for _ in 0..1000 {
            k += 1.0;
            term *= x / k;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        Ok(sum * (-x + a * x.ln() - ln_gamma(a)).exp())
    } else {
        Ok(1.0 - reg_gamma_upper_cf(a, x))
    }
}

// Q(a, x) by Lentz's continued fraction, valid for x >= a + 1.
fn reg_gamma_upper_cf(a: Real, x: Real) -> Real {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut f = d;
    for i in 1..1000 {
        let an = -(i as Real) * (i as Real - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Chi-square CDF with k degrees of freedom.
pub fn chi_square_cdf(x: Real, k: usize) -> Result<Real> {
    if k == 0 {
        return Err(Error::Domain("chi-square needs k >= 1".into()));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!("chi-square CDF needs x >= 0, got {x}")));
    }
    reg_gamma_lower(0.5 * k as Real, 0.5 * x)
}

fn chi_square_pdf(x: Real, k: usize) -> Real {
    let a = 0.5 * k as Real;
    if x <= 0.0 {
        return 0.0;
    }
    ((a - 1.0) * x.ln() - 0.5 * x - a * std::f64::consts::LN_2 - ln_gamma(a)).exp()
}

/// Chi-square quantile: the x with F(x; k) = u.
///
/// Wilson-Hilferty starting value, then Newton on the CDF with a
/// bisection safeguard; terminates with |F(x) - u| <= 1e-10.
pub fn chi_square_quantile(u: Real, k: usize) -> Result<Real> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!("chi-square quantile needs u in (0,1), got {u}")));
    }
    let kf = k as Real;
    let z = normal_quantile(u)?;
    let h = 2.0 / (9.0 * kf);
    let mut x = kf * (1.0 - h + z * h.sqrt()).powi(3);
    if !(x > 0.0) {
        x = 1e-8;
    }
    let (mut lo, mut hi) = (0.0_f64, Real::INFINITY);
    for _ in 0..200 {
        let f = chi_square_cdf(x, k)? - u;
        if f.abs() <= 1e-10 {
            return Ok(x);
        }
        if f > 0.0 {
            hi = hi.min(x);
        } else {
            lo = lo.max(x);
        }
        let df = chi_square_pdf(x, k);
        let mut next = x - f / df;
        if !(next.is_finite() && next > lo && next < hi) {
            next = if hi.is_finite() { 0.5 * (lo + hi) } else { 2.0 * x.max(1.0) };
        }
        x = next;
    }
    Ok(x)
}

/// Chi quantile: F⁻¹ for ‖Z‖ with Z ~ N(0, I_k).
pub fn chi_quantile(u: Real, k: usize) -> Result<Real> {
    Ok(chi_square_quantile(u, k)?.sqrt())
}
