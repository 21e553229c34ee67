//! Process-wide resource caps.
//!
//! Dense vectors of dimension `d` cost `16 d` bytes, dense unitaries `16 d^2`
//! and pairwise certification of `M` vectors `M^2 d` multiply-adds. The caps
//! reject configurations that would blow up memory or run time by accident.

use core::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Limits {
    /// Largest dimension of a dense state vector.
    pub max_state_dim: usize,
    /// Largest dimension of a dense unitary.
    pub max_unitary_dim: usize,
    /// Largest `M^2 d` budget for all-pairs certification.
    pub max_pair_ops: u64,
}

impl Limits {
    pub const DEFAULT: Limits = Limits {
        max_state_dim: 1 << 14,
        max_unitary_dim: 1 << 11,
        max_pair_ops: 10_000_000_000,
    };

    /// Currently installed caps.
    pub fn current() -> Limits {
        Limits {
            max_state_dim: MAX_STATE_DIM.load(Ordering::Relaxed),
            max_unitary_dim: MAX_UNITARY_DIM.load(Ordering::Relaxed),
            max_pair_ops: MAX_PAIR_OPS.load(Ordering::Relaxed),
        }
    }

    /// Install these caps for the whole process.
    pub fn install(self) {
        MAX_STATE_DIM.store(self.max_state_dim, Ordering::Relaxed);
        MAX_UNITARY_DIM.store(self.max_unitary_dim, Ordering::Relaxed);
        MAX_PAIR_OPS.store(self.max_pair_ops, Ordering::Relaxed);
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::DEFAULT
    }
}

static MAX_STATE_DIM: AtomicUsize = AtomicUsize::new(Limits::DEFAULT.max_state_dim);
static MAX_UNITARY_DIM: AtomicUsize = AtomicUsize::new(Limits::DEFAULT.max_unitary_dim);
static MAX_PAIR_OPS: AtomicU64 = AtomicU64::new(Limits::DEFAULT.max_pair_ops);

pub(crate) fn check_state_dim(d: usize) -> Result<()> {
    let cap = MAX_STATE_DIM.load(Ordering::Relaxed);
    if d > cap {
        return Err(Error::Resource {
            what: "state dimension",
            requested: d as u128,
            cap: cap as u128,
        });
    }
    Ok(())
}

pub(crate) fn check_unitary_dim(d: usize) -> Result<()> {
    let cap = MAX_UNITARY_DIM.load(Ordering::Relaxed);
    if d > cap {
        return Err(Error::Resource {
            what: "unitary dimension",
            requested: d as u128,
            cap: cap as u128,
        });
    }
    Ok(())
}

pub(crate) fn check_pair_ops(m: usize, d: usize) -> Result<()> {
    let cap = MAX_PAIR_OPS.load(Ordering::Relaxed);
    let requested = (m as u128) * (m as u128) * (d as u128);
    if requested > cap as u128 {
        return Err(Error::Resource {
            what: "pairwise certification (M^2 d)",
            requested,
            cap: cap as u128,
        });
    }
    Ok(())
}
