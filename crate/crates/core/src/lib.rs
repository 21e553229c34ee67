//! Geometry of random pure states in finite-dimensional Hilbert spaces.
//!
//! The crate covers four connected pieces:
//!
//! - [`state`] and [`unitary`]: unit vectors in `C^d`, Haar sampling of states
//!   and unitaries, tensor products and local gates on qubit registers.
//! - [`overlap`], [`sample`] and [`hypothesis`]: the exact `Beta(1, d-1)` law
//!   of the squared overlap `|<phi|psi>|^2`, Levy-type concentration bounds,
//!   Monte Carlo sampling and the KS / Wilson machinery that checks them.
//! - [`packing`]: the random-coding lower bound on the size of
//!   epsilon-quasi-orthogonal families, with constructions and certification.
//! - [`decoherence`] and [`deff`]: a toy measurement model whose environmental
//!   branch records are produced by Haar, brickwork-circuit or integrable
//!   dynamics, the resulting reduced density matrix, and effective-dimension
//!   accounting.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled. The `parallel` feature runs Monte Carlo trials on rayon; every
//! trial draws from its own [`RngStream`] substream, so results do not depend
//! on the number of threads.
//!
//! Qubit ordering is global: qubit 0 is the most significant bit of the
//! amplitude index.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` style guards also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod decoherence;
pub mod deff;
mod error;
pub mod hypothesis;
pub mod limits;
pub mod matrix;
pub mod overlap;
pub mod packing;
mod rng;
pub mod sample;
pub mod state;
mod trials;
pub mod unitary;

pub use error::{Error, Result};
pub use limits::Limits;
pub use num_complex::Complex64 as C64;
pub use rng::RngStream;
pub use state::StateVector;
pub use unitary::Unitary;

/// Absolute tolerance on the squared norm of freshly constructed vectors.
pub const NORM_TOL: f64 = 1e-10;

/// Absolute tolerance on norms and unitarity after applying a unitary.
pub const APPLY_TOL: f64 = 1e-9;
