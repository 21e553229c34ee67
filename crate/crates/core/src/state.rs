//! Unit vectors in `C^d`.

use alloc::vec::Vec;

use crate::limits::check_state_dim;
use crate::{Error, Result, RngStream, C64, NORM_TOL};

/// A unit vector in a `d`-dimensional complex Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Wrap amplitudes that are already normalized (squared norm within
    /// [`NORM_TOL`] of 1).
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        check_dim(amps.len())?;
        let n2 = norm_sqr(&amps);
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(StateVector { amps })
    }

    /// Normalize arbitrary non-zero amplitudes.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        check_dim(amps.len())?;
        let n2 = norm_sqr(&amps);
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::NotNormalized(n2));
        }
        let inv = 1.0 / libm::sqrt(n2);
        for a in &mut amps {
            *a *= inv;
        }
        Ok(StateVector { amps })
    }

    pub(crate) fn from_raw(amps: Vec<C64>) -> Self {
        debug_assert!((norm_sqr(&amps) - 1.0).abs() <= crate::APPLY_TOL);
        StateVector { amps }
    }

    /// Computational basis vector `e_k` (zero-based `k`).
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        check_dim(d)?;
        if k >= d {
            return Err(Error::InvalidDimension(k));
        }
        let mut amps = alloc::vec![C64::new(0.0, 0.0); d];
        amps[k] = C64::new(1.0, 0.0);
        Ok(StateVector { amps })
    }

    /// Equal-weight superposition of all `d` basis vectors.
    pub fn uniform(d: usize) -> Result<Self> {
        check_dim(d)?;
        let a = 1.0 / libm::sqrt(d as f64);
        Ok(StateVector {
            amps: alloc::vec![C64::new(a, 0.0); d],
        })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// Global phase `e^{i phi} |psi>`.
    pub fn with_phase(&self, phase: C64) -> StateVector {
        StateVector {
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }

    /// Number of qubits when the dimension is a power of two.
    pub fn qubits(&self) -> Result<usize> {
        qubits_of(self.dim())
    }
}

pub(crate) fn qubits_of(d: usize) -> Result<usize> {
    if d.is_power_of_two() {
        Ok(d.trailing_zeros() as usize)
    } else {
        Err(Error::NotPowerOfTwo(d))
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    check_state_dim(d)
}

fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

fn same_dim(psi: &StateVector, phi: &StateVector) -> Result<()> {
    if psi.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            left: psi.dim(),
            right: phi.dim(),
        });
    }
    Ok(())
}

/// Haar-random state: `d` independent standard complex Gaussians, normalized.
pub fn haar_state(d: usize, rng: &mut RngStream) -> Result<StateVector> {
    check_dim(d)?;
    let amps: Vec<C64> = (0..d).map(|_| rng.complex_gaussian()).collect();
    StateVector::normalized(amps)
}

/// `<phi|psi>`, conjugate-linear in `phi`.
pub fn inner(psi: &StateVector, phi: &StateVector) -> Result<C64> {
    same_dim(psi, phi)?;
    Ok(inner_unchecked(psi.amplitudes(), phi.amplitudes()))
}

pub(crate) fn inner_unchecked(psi: &[C64], phi: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (p, f) in psi.iter().zip(phi) {
        acc += f.conj() * p;
    }
    acc
}

/// Squared overlap `|<phi|psi>|^2`.
pub fn overlap_sq(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    Ok(clamp_unit(inner(psi, phi)?.norm_sqr()))
}

pub(crate) fn clamp_unit(x: f64) -> f64 {
    // rounding can push |<phi|psi>|^2 a hair past 1
    if x > 1.0 && x - 1.0 < NORM_TOL {
        1.0
    } else {
        x
    }
}

/// Euclidean distance `||psi - phi||` in `C^d`.
pub fn chordal_distance(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    same_dim(psi, phi)?;
    let s: f64 = psi
        .amplitudes()
        .iter()
        .zip(phi.amplitudes())
        .map(|(p, f)| (p - f).norm_sqr())
        .sum();
    Ok(libm::sqrt(s))
}

/// `psi (x) phi`, first factor on the slow index.
pub fn tensor(psi: &StateVector, phi: &StateVector) -> Result<StateVector> {
    let d = psi.dim().checked_mul(phi.dim()).ok_or(Error::Resource {
        what: "state dimension",
        requested: psi.dim() as u128 * phi.dim() as u128,
        cap: usize::MAX as u128,
    })?;
    check_state_dim(d)?;
    let mut amps = Vec::with_capacity(d);
    for a in psi.amplitudes() {
        for b in phi.amplitudes() {
            amps.push(a * b);
        }
    }
    Ok(StateVector::from_raw(amps))
}
