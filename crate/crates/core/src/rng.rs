use core::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::C64;

/// Seeded random stream.
///
/// A stream is identified by `(seed, stream_index)`; two streams with the same
/// identity produce bit-identical draws. Distinct stream indices select
/// independent ChaCha8 streams under the same key, which is what Monte Carlo
/// drivers use to give every trial its own substream.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_index);
        RngStream {
            seed,
            stream_index,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Child stream number `index`, derived from this stream's identity only
    /// (not from how many values it has already produced).
    pub fn substream(&self, index: u64) -> RngStream {
        let key = splitmix64(self.seed ^ splitmix64(self.stream_index.wrapping_add(0x5851_f42d_4c95_7f2d)));
        RngStream::new(key, index)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform_open0(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard complex Gaussian: real and imaginary parts independent with
    /// variance 1/2, so `|g|^2` is exponential with unit mean.
    ///
    /// Polar Box-Muller: `|g|^2 = -ln u1` and the phase is `2 pi u2`.
    pub fn complex_gaussian(&mut self) -> C64 {
        let r = libm::sqrt(-libm::log(self.uniform_open0()));
        let theta = TAU * self.uniform();
        C64::new(r * libm::cos(theta), r * libm::sin(theta))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
