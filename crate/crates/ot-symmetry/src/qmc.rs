//! Halton low-discrepancy sequences.

use num_traits::Float;

/// First 26 primes; enough coordinate bases for p up to 26. Larger p
/// extends the list on demand via [`primes`].
const SMALL_PRIMES: [u64; 26] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101,
];

/// The first `k` primes.
pub fn primes(k: usize) -> Vec<u64> {
    let mut out: Vec<u64> = SMALL_PRIMES.iter().copied().take(k).collect();
    let mut candidate = *out.last().unwrap_or(&1) + 1;
    while out.len() < k {
        if (2..).take_while(|d| d * d <= candidate).all(|d| candidate % d != 0) {
            out.push(candidate);
        }
        candidate += 1;
    }
    out
}

/// Radical inverse of `index` in the given prime base: the Halton point
/// u_index in (0, 1). Indexing starts at 1.
pub fn halton<F: Float>(index: u64, base: u64) -> F {
    debug_assert!(index >= 1 && base >= 2);
    let b = F::from(base).unwrap();
    let mut inv = b.recip();
    let mut x = F::zero();
    let mut i = index;
    while i > 0 {
        x = x + F::from(i % base).unwrap() * inv;
        i /= base;
        inv = inv / b;
    }
    x
}

/// The `index`-th point of the p-dimensional Halton sequence (bases are
/// the first p primes).
pub fn halton_point<F: Float>(index: u64, bases: &[u64]) -> Vec<F> {
    bases.iter().map(|&b| halton(index, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_by_hand() {
        // 1 = (1)_2 -> 0.1_2
        assert_eq!(halton::<f64>(1, 2), 0.5);
        // 3 = (11)_2 -> 0.11_2
        assert_eq!(halton::<f64>(3, 2), 0.75);
        // 2 = (2)_3 -> 0.2_3
        assert!((halton::<f64>(2, 3) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(halton::<f32>(1, 2), 0.5f32);
    }

    #[test]
    fn base2_star_discrepancy() {
        // star discrepancy of the first 64 base-2 points
        let n = 64;
        let mut pts: Vec<f64> = (1..=n).map(|i| halton(i, 2)).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut disc = 0.0f64;
        for (i, &x) in pts.iter().enumerate() {
            disc = disc.max((x - i as f64 / n as f64).abs());
            disc = disc.max((x - (i + 1) as f64 / n as f64).abs());
        }
        assert!(disc <= 0.05, "star discrepancy {disc}");
    }

    #[test]
    fn primes_extend() {
        assert_eq!(primes(5), vec![2, 3, 5, 7, 11]);
        assert_eq!(primes(30)[29], 113);
    }
}
