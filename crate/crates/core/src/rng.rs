//! Reproducible random streams.
//!
//! Every sampler in the crate draws from [`CounterRng`], a SplitMix64 stream:
//! the `k`-th output (k = 1, 2, ...) of a stream with key `s` is
//! `mix64(s + k * GOLDEN_GAMMA)` with wrapping arithmetic. The output is a pure
//! function of `(key, k)`, so streams are reproducible bit-for-bit on every
//! platform. Transcendental functions go through `libm` for the same reason.
//!
//! Independent sub-streams (replications, mixture components) are keyed with
//! [`stream_seed`].

/// Weyl increment of SplitMix64 (2^64 / golden ratio, odd).
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer (Stafford's "Mix13").
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Key of sub-stream `stream` derived from `seed`.
///
/// `stream_seed(seed, m) = mix64(seed + mix64((m + 1) * GOLDEN_GAMMA))`.
#[inline]
pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    mix64(seed.wrapping_add(mix64(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))))
}

/// Counter-based 64-bit generator.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { key: seed, counter: 0 }
    }

    /// Generator for sub-stream `stream` of `seed`.
    pub fn from_stream(seed: u64, stream: u64) -> Self {
        Self::new(stream_seed(seed, stream))
    }

    /// Number of 64-bit words drawn so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate (Marsaglia polar method).
    pub fn standard_normal(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                // the second variate of the pair is discarded so that each call
                // consumes a self-contained block of the stream
                return u * libm::sqrt(-2.0 * libm::log(s) / s);
            }
        }
    }

    /// Gamma(shape, 1) variate (Marsaglia-Tsang, with the `U^(1/a)` boost for a < 1).
    pub fn gamma(&mut self, shape: f64) -> f64 {
        debug_assert!(shape > 0.0);
        if shape < 1.0 {
            let boost = libm::pow(self.next_open01(), 1.0 / shape);
            return self.gamma(shape + 1.0) * boost;
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / libm::sqrt(9.0 * d);
        loop {
            let x = self.standard_normal();
            let v = 1.0 + c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = self.next_open01();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                return d * v;
            }
            if libm::log(u) < 0.5 * x2 + d * (1.0 - v + libm::log(v)) {
                return d * v;
            }
        }
    }

    /// Beta(a, b) variate as a ratio of gamma variates.
    pub fn beta(&mut self, a: f64, b: f64) -> f64 {
        let x = self.gamma(a);
        let y = self.gamma(b);
        x / (x + y)
    }
}
