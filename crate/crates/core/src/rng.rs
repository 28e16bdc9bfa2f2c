//! Counter-based splittable random numbers ("splitmix64 counter mode").
//!
//! Output `t` of stream `s` under seed `k` is `mix64(key(k, s) + t * GAMMA)`,
//! so any position of any stream is computable directly. Monte Carlo workers
//! get one stream per fixed-size chunk, which makes parallel runs
//! reproducible bit-for-bit regardless of thread count.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One stream of the generator; cheap to create, `Copy`-free by design so
/// the counter cannot be duplicated accidentally.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(seed ^ mix64(stream.wrapping_add(GAMMA)));
        CounterRng { key, counter: 0 }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let v = mix64(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)));
        self.counter += 1;
        v
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const DEN: f64 = (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64) / DEN
    }

    /// Uniform in [lo, hi).
    #[inline]
    pub fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in [0, n) by rejection-free widening multiply; a tiny
    /// modulo bias (< 2^-32 for our n) is irrelevant for test data.
    #[inline]
    pub fn next_below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Uniform integer in [lo, hi] inclusive.
    #[inline]
    pub fn next_range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.next_below((hi - lo + 1) as u64) as i64
    }
}
