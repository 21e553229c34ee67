//! Monte Carlo samples of squared overlaps.

use alloc::vec::Vec;

use crate::hypothesis::{mean_and_variance, sorted};
use crate::limits::check_state_dim;
use crate::state::{haar_state, overlap_sq};
use crate::trials::try_map_indices;
use crate::{Error, Result, RngStream, StateVector};

/// Sorted squared overlaps together with where their randomness came from.
///
/// Draw `i` of a sample produced from stream `(seed, stream_index)` used
/// `RngStream::new(seed, stream_index).substream(i)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmpiricalSample {
    dim: usize,
    seed: u64,
    stream_index: u64,
    values: Vec<f64>,
}

impl EmpiricalSample {
    /// Sorts `values`; every value must lie in `[0, 1]`.
    pub fn from_values(dim: usize, values: Vec<f64>, seed: u64, stream_index: u64) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::domain("overlap", bad, "0 <= value <= 1"));
        }
        Ok(EmpiricalSample {
            dim,
            seed,
            stream_index,
            values: sorted(values),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        mean_and_variance(&self.values).0
    }

    /// Unbiased sample standard deviation.
    pub fn std_dev(&self) -> f64 {
        libm::sqrt(mean_and_variance(&self.values).1)
    }

    pub fn standard_error(&self) -> f64 {
        self.std_dev() / libm::sqrt(self.count() as f64)
    }

    /// Number of values `>= eps`.
    pub fn exceedances(&self, eps: f64) -> usize {
        self.count() - self.values.partition_point(|&v| v < eps)
    }

    /// Empirical CDF at `x`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.values.partition_point(|&v| v <= x) as f64 / self.count() as f64
    }
}

fn check_sampling(d: usize, n: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::domain("d", d as f64, "d >= 2"));
    }
    if n == 0 {
        return Err(Error::domain("N", 0.0, "N >= 1"));
    }
    check_state_dim(d)
}

/// `n` draws of `|<e_1|psi>|^2` for Haar-random `psi` in dimension `d`.
pub fn sample_overlaps(d: usize, n: usize, rng: &RngStream) -> Result<EmpiricalSample> {
    check_sampling(d, n)?;
    let reference = StateVector::basis(d, 0)?;
    let values = try_map_indices(n, |i| {
        let mut r = rng.substream(i as u64);
        overlap_sq(&haar_state(d, &mut r)?, &reference)
    })?;
    EmpiricalSample::from_values(d, values, rng.seed(), rng.stream_index())
}

/// `n` draws of `|<phi|psi>|^2` for two independent Haar-random states.
pub fn sample_pair_overlaps(d: usize, n: usize, rng: &RngStream) -> Result<EmpiricalSample> {
    check_sampling(d, n)?;
    let values = try_map_indices(n, |i| {
        let mut r = rng.substream(i as u64);
        let phi = haar_state(d, &mut r)?;
        let psi = haar_state(d, &mut r)?;
        overlap_sq(&psi, &phi)
    })?;
    EmpiricalSample::from_values(d, values, rng.seed(), rng.stream_index())
}
