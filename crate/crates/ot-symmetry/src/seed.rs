//! Deterministic seed derivation.
//!
//! A master seed is split into independent named streams (reference
//! construction, tie randomization, null resampling, scenario data) so
//! each component is reproducible on its own. Derivation is a splitmix64
//! mix of the master seed with a stream tag and a counter.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags for the fixed components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Reference,
    Ties,
    Null,
    Scenario,
}

impl Stream {
    fn tag(self) -> u64 {
        match self {
            Stream::Reference => 1,
            Stream::Ties => 2,
            Stream::Null => 3,
            Stream::Scenario => 4,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from (master, stream, counter).
pub fn derive(master: u64, stream: Stream, counter: u64) -> u64 {
    let mixed = splitmix64(master ^ splitmix64(stream.tag()));
    splitmix64(mixed ^ counter.wrapping_mul(0xd605_bbb5_8c8a_bc2d))
}

/// Seeded generator for a named stream.
pub fn rng(master: u64, stream: Stream, counter: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, stream, counter))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_distinct_and_stable() {
        let a = derive(7, Stream::Reference, 0);
        let b = derive(7, Stream::Ties, 0);
        let c = derive(7, Stream::Reference, 1);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive(7, Stream::Reference, 0));
    }
}
