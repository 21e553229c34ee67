//! Effective dimension of the environmental subspace explored by the
//! dynamics.
//!
//! Natural units (`k_B = 1`): entropies are dimensionless and
//! `d_eff = e^S`. For an initial state in an energy window `[E, E + dE)` the
//! accessible subspace is approximated by the microcanonical shell, whose
//! dimension is the eigenvalue count in that window. The inverse
//! participation ratio gives a basis-dependent estimate of how many basis
//! states a particular vector occupies.

use alloc::vec::Vec;

use crate::state::inner_unchecked;
use crate::{Error, Result, StateVector, Unitary};

/// Ascending, finite eigenvalues of an environment Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Spectrum {
    energies: Vec<f64>,
}

impl Spectrum {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite energy"));
        }
        if energies.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidSpectrum("energies are not sorted ascending"));
        }
        Ok(Spectrum { energies })
    }

    /// Spectrum of `n` non-interacting qubits with unit level spacing: the
    /// energy of basis state `x` is its popcount.
    pub fn popcount(n: u32) -> Result<Self> {
        if n > 26 {
            return Err(Error::Resource {
                what: "popcount spectrum size",
                requested: 1u128 << n,
                cap: 1 << 26,
            });
        }
        let mut energies: Vec<f64> = (0u64..1 << n).map(|x| x.count_ones() as f64).collect();
        energies.sort_by(f64::total_cmp);
        Ok(Spectrum { energies })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

/// Number of eigenvalues in `[energy, energy + width)`.
pub fn microcanonical_dim(spectrum: &Spectrum, energy: f64, width: f64) -> Result<usize> {
    if !(width > 0.0) {
        return Err(Error::domain("dE", width, "dE > 0"));
    }
    let e = &spectrum.energies;
    let lo = e.partition_point(|&x| x < energy);
    let hi = e.partition_point(|&x| x < energy + width);
    Ok(hi - lo)
}

/// `S = ln d_eff`.
pub fn entropy_of(d_eff: f64) -> Result<f64> {
    if !(d_eff >= 1.0) {
        return Err(Error::domain("d_eff", d_eff, "d_eff >= 1"));
    }
    Ok(libm::log(d_eff))
}

/// `1 / sum_k p_k^2` with `p_k = |<b_k|psi>|^2`. `basis` holds the basis
/// vectors as columns; `None` means the computational basis.
pub fn ipr_dimension(state: &StateVector, basis: Option<&Unitary>) -> Result<f64> {
    let amps = state.amplitudes();
    let sum_p2: f64 = match basis {
        None => amps.iter().map(|a| a.norm_sqr() * a.norm_sqr()).sum(),
        Some(u) => {
            if u.dim() != state.dim() {
                return Err(Error::DimensionMismatch {
                    left: u.dim(),
                    right: state.dim(),
                });
            }
            // <b_k|psi> with b_k the k-th column of U
            (0..u.dim())
                .map(|k| {
                    let column: Vec<_> = (0..u.dim()).map(|r| u.entry(r, k)).collect();
                    let p = inner_unchecked(amps, &column).norm_sqr();
                    p * p
                })
                .sum()
        }
    };
    Ok((1.0 / sum_p2).clamp(1.0, state.dim() as f64))
}

/// `(1/d_eff, 1/sqrt(d_eff))`, i.e. `(e^-S, e^-S/2)`.
pub fn suppression_scale(d_eff: f64) -> Result<(f64, f64)> {
    if !(d_eff >= 1.0) {
        return Err(Error::domain("d_eff", d_eff, "d_eff >= 1"));
    }
    Ok((1.0 / d_eff, 1.0 / libm::sqrt(d_eff)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DimensionMethod {
    MicrocanonicalShell,
    Ipr,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EffectiveDimensionReport {
    pub d_eff: f64,
    pub entropy: f64,
    pub method: DimensionMethod,
}

impl EffectiveDimensionReport {
    pub fn new(d_eff: f64, method: DimensionMethod) -> Result<Self> {
        Ok(EffectiveDimensionReport {
            d_eff,
            entropy: entropy_of(d_eff)?,
            method,
        })
    }

    /// `None` for an empty shell.
    pub fn microcanonical(spectrum: &Spectrum, energy: f64, width: f64) -> Result<Option<Self>> {
        match microcanonical_dim(spectrum, energy, width)? {
            0 => Ok(None),
            n => EffectiveDimensionReport::new(n as f64, DimensionMethod::MicrocanonicalShell).map(Some),
        }
    }

    pub fn ipr(state: &StateVector, basis: Option<&Unitary>) -> Result<Self> {
        EffectiveDimensionReport::new(ipr_dimension(state, basis)?, DimensionMethod::Ipr)
    }
}
