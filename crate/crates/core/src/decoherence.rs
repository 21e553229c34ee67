//! Toy measurement model.
//!
//! A system with pointer states `|s_i>` and amplitudes `c_i` couples to an
//! `n`-qubit environment that starts in `|E_0>`. A measurement-like
//! interaction leaves the environment in a branch record `|E_i> = U_i |E_0>`
//! correlated with each pointer value, and the system's reduced density
//! matrix is
//!
//! ```text
//! rho_ij = c_i c_j^* <E_j|E_i>
//! ```
//!
//! so coherences are bounded by the branch overlaps. Three choices of the
//! conditional unitaries are provided: independent Haar unitaries,
//! pointer-dependent brickwork circuits of two-qubit Haar gates, and an
//! integrable product rotation that serves as a negative control.
//!
//! System states are never materialized; `rho` depends only on the
//! coefficients and the Gram matrix of the branches.

use alloc::string::String;
use alloc::vec::Vec;

use crate::hypothesis::mean_and_variance;
use crate::limits::{check_state_dim, check_unitary_dim};
use crate::matrix::SquareMatrix;
use crate::state::{clamp_unit, haar_state, inner_unchecked};
use crate::trials::try_map_indices;
use crate::unitary::{apply, apply_local_in_place, haar_unitary};
use crate::{Error, Result, RngStream, StateVector, Unitary, APPLY_TOL, C64, NORM_TOL};

/// Typicality ratios above this are flagged atypical (when also
/// statistically resolved; see [`SuppressionRecord::atypical`]).
pub const ATYPICAL_RATIO: f64 = 2.0;

/// How the conditional unitaries `U_i` are produced.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum Dynamics {
    /// Independent Haar unitaries. With `dense_unitaries = false` the branch
    /// `U_i |E_0>` is drawn directly as a Haar state, which has the same law.
    ExactHaar {
        #[cfg_attr(feature = "serde", serde(default))]
        dense_unitaries: bool,
    },
    /// Brickwork circuit of `depth` layers of two-qubit Haar gates; even
    /// layers act on bonds (0,1), (2,3), ..., odd layers on (1,2), (3,4), ...
    /// Each pointer value gets its own gate seeds.
    ChaoticCircuit { depth: usize },
    /// `U_i = R_y(theta_i)` on every qubit. Branch overlaps from `|0...0>` are
    /// `cos^(2n)((theta_i - theta_j)/2)`.
    IntegrableProduct { angles: Vec<f64> },
}

impl Dynamics {
    /// Brickwork circuit with the default depth `4n`.
    pub fn chaotic_default(env_qubits: u32) -> Self {
        Dynamics::ChaoticCircuit {
            depth: 4 * env_qubits as usize,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Dynamics::ExactHaar { .. } => "exact-haar",
            Dynamics::ChaoticCircuit { .. } => "chaotic-circuit",
            Dynamics::IntegrableProduct { .. } => "integrable-product",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementModel {
    coefficients: Vec<C64>,
    env_qubits: u32,
    dynamics: Dynamics,
    env_initial: StateVector,
}

impl MeasurementModel {
    /// Environment starts in `|0...0>`.
    pub fn new(coefficients: Vec<C64>, env_qubits: u32, dynamics: Dynamics) -> Result<Self> {
        if env_qubits == 0 || env_qubits > 30 {
            return Err(Error::domain("n", env_qubits as f64, "1 <= n"));
        }
        let d = 1usize << env_qubits;
        check_state_dim(d)?;
        let k = coefficients.len();
        if k < 2 {
            return Err(Error::domain("k", k as f64, "k >= 2"));
        }
        let n2: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        match &dynamics {
            Dynamics::IntegrableProduct { angles } => {
                if angles.len() != k {
                    return Err(Error::DimensionMismatch {
                        left: angles.len(),
                        right: k,
                    });
                }
                if let Some(&bad) = angles.iter().find(|a| !a.is_finite()) {
                    return Err(Error::domain("theta", bad, "finite angle"));
                }
            }
            Dynamics::ChaoticCircuit { depth } => {
                if env_qubits < 2 && *depth > 0 {
                    return Err(Error::domain("n", env_qubits as f64, "n >= 2 for two-qubit gates"));
                }
            }
            Dynamics::ExactHaar { dense_unitaries } => {
                if *dense_unitaries {
                    check_unitary_dim(d)?;
                }
            }
        }
        Ok(MeasurementModel {
            coefficients,
            env_qubits,
            dynamics,
            env_initial: StateVector::basis(d, 0)?,
        })
    }

    /// `c_i = 1/sqrt(k)` for every pointer value.
    pub fn equal_weights(k: usize, env_qubits: u32, dynamics: Dynamics) -> Result<Self> {
        let c = C64::new(1.0 / libm::sqrt(k as f64), 0.0);
        MeasurementModel::new(alloc::vec![c; k], env_qubits, dynamics)
    }

    pub fn with_env_initial(mut self, state: StateVector) -> Result<Self> {
        if state.dim() != self.env_dim() {
            return Err(Error::DimensionMismatch {
                left: state.dim(),
                right: self.env_dim(),
            });
        }
        self.env_initial = state;
        Ok(self)
    }

    pub fn pointer_count(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn env_qubits(&self) -> u32 {
        self.env_qubits
    }

    pub fn env_dim(&self) -> usize {
        1 << self.env_qubits
    }

    pub fn dynamics(&self) -> &Dynamics {
        &self.dynamics
    }

    pub fn env_initial(&self) -> &StateVector {
        &self.env_initial
    }

    /// `max_{i != j} |c_i c_j|`.
    pub fn max_coefficient_product(&self) -> f64 {
        let c = &self.coefficients;
        let mut worst: f64 = 0.0;
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                worst = worst.max(c[i].norm() * c[j].norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenerationRecord {
    pub dynamics: String,
    pub seed: u64,
    pub stream_index: u64,
    /// Circuit depth for brickwork dynamics; absent otherwise.
    pub depth: Option<usize>,
}

/// Environmental records `|E_i>`, one per pointer value.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSet {
    branches: Vec<StateVector>,
    record: GenerationRecord,
}

impl BranchSet {
    pub fn new(branches: Vec<StateVector>, record: GenerationRecord) -> Result<Self> {
        let dim = branches
            .first()
            .map(StateVector::dim)
            .ok_or(Error::InvalidDimension(0))?;
        for b in &branches {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: b.dim(),
                });
            }
            if (b.norm_sqr() - 1.0).abs() > APPLY_TOL {
                return Err(Error::NotNormalized(b.norm_sqr()));
            }
        }
        Ok(BranchSet { branches, record })
    }

    pub fn branches(&self) -> &[StateVector] {
        &self.branches
    }

    pub fn record(&self) -> &GenerationRecord {
        &self.record
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Squared overlaps `|<E_j|E_i>|^2` for `i < j`, in lexicographic order.
    pub fn pairwise_overlaps(&self) -> Vec<((usize, usize), f64)> {
        let b = &self.branches;
        let mut out = Vec::with_capacity(b.len() * b.len().saturating_sub(1) / 2);
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let o = inner_unchecked(b[i].amplitudes(), b[j].amplitudes()).norm_sqr();
                out.push(((i, j), clamp_unit(o)));
            }
        }
        out
    }
}

/// One brickwork layer of independent two-qubit Haar gates.
fn brickwork_layer(amps: &mut [C64], n: usize, layer: usize, rng: &mut RngStream) -> Result<()> {
    let mut q = layer % 2;
    while q + 1 < n {
        let gate = haar_unitary(4, rng)?;
        apply_local_in_place(&gate, &[q, q + 1], amps)?;
        q += 2;
    }
    Ok(())
}

/// `|E_i> = U_i |E_0>` for every pointer value `i`. Branch `i` draws from
/// `rng.substream(i)`.
pub fn generate_branches(model: &MeasurementModel, rng: &RngStream) -> Result<BranchSet> {
    let n = model.env_qubits as usize;
    let d = model.env_dim();
    let k = model.pointer_count();
    let mut branches = Vec::with_capacity(k);
    for i in 0..k {
        let mut r = rng.substream(i as u64);
        let branch = match &model.dynamics {
            Dynamics::ExactHaar { dense_unitaries: false } => haar_state(d, &mut r)?,
            Dynamics::ExactHaar { dense_unitaries: true } => apply(&haar_unitary(d, &mut r)?, &model.env_initial)?,
            Dynamics::ChaoticCircuit { depth } => {
                let mut amps = model.env_initial.amplitudes().to_vec();
                for layer in 0..*depth {
                    brickwork_layer(&mut amps, n, layer, &mut r)?;
                }
                StateVector::from_raw(amps)
            }
            Dynamics::IntegrableProduct { angles } => {
                let rot = Unitary::rotation_y(angles[i]);
                let mut amps = model.env_initial.amplitudes().to_vec();
                for q in 0..n {
                    apply_local_in_place(&rot, &[q], &mut amps)?;
                }
                StateVector::from_raw(amps)
            }
        };
        branches.push(branch);
    }
    let depth = match model.dynamics {
        Dynamics::ChaoticCircuit { depth } => Some(depth),
        _ => None,
    };
    BranchSet::new(
        branches,
        GenerationRecord {
            dynamics: model.dynamics.name().into(),
            seed: rng.seed(),
            stream_index: rng.stream_index(),
            depth,
        },
    )
}

/// Gram matrix `G[a][b] = <E_a|E_b>`; Hermitian with unit diagonal.
pub fn gram_matrix(branches: &BranchSet) -> SquareMatrix {
    let b = branches.branches();
    let mut g = SquareMatrix::identity(b.len());
    for a in 0..b.len() {
        for c in a + 1..b.len() {
            // <E_a|E_c>
            let v = inner_unchecked(b[c].amplitudes(), b[a].amplitudes());
            g[(a, c)] = v;
            g[(c, a)] = v.conj();
        }
    }
    g
}

/// Reduced density matrix of the system after tracing out the environment.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    matrix: SquareMatrix,
}

/// Tolerance on Hermiticity and unit trace of `rho`.
pub const RHO_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated in `rho`.
pub const RHO_PSD_TOL: f64 = 1e-9;

impl ReducedDensityMatrix {
    /// Checks Hermiticity, unit trace and positivity within tolerance.
    pub fn new(matrix: SquareMatrix) -> Result<Self> {
        if matrix.hermiticity_defect() > RHO_TOL {
            return Err(Error::InvalidDensityMatrix("not Hermitian"));
        }
        if (matrix.trace() - C64::new(1.0, 0.0)).norm() > RHO_TOL {
            return Err(Error::InvalidDensityMatrix("trace differs from 1"));
        }
        if !matrix.is_psd_within(RHO_PSD_TOL) {
            return Err(Error::InvalidDensityMatrix("negative eigenvalue"));
        }
        Ok(ReducedDensityMatrix { matrix })
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i, j)]
    }
}

/// `rho_ij = c_i c_j^* <E_j|E_i>`.
pub fn reduced_density(model: &MeasurementModel, branches: &BranchSet) -> Result<ReducedDensityMatrix> {
    let k = model.pointer_count();
    if branches.len() != k {
        return Err(Error::DimensionMismatch {
            left: branches.len(),
            right: k,
        });
    }
    let g = gram_matrix(branches);
    let c = model.coefficients();
    let rho = SquareMatrix::from_fn(k, |i, j| c[i] * c[j].conj() * g[(j, i)]);
    ReducedDensityMatrix::new(rho)
}

/// Largest off-diagonal modulus `max_{i != j} |rho_ij|`.
pub fn max_coherence(rho: &ReducedDensityMatrix) -> f64 {
    let k = rho.dim();
    let mut worst: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            if i != j {
                worst = worst.max(rho.get(i, j).norm());
            }
        }
    }
    worst
}

/// Mean pairwise squared overlap times `d_eff`. About 1 for branch pairs that
/// look like typical vectors of a `d_eff`-dimensional subspace; much larger
/// when the dynamics fails to spread the records.
pub fn typicality_ratio(branches: &BranchSet, d_eff: f64) -> Result<f64> {
    if branches.len() < 2 {
        return Err(Error::domain("k", branches.len() as f64, "k >= 2"));
    }
    if !(d_eff >= 1.0) {
        return Err(Error::domain("d_eff", d_eff, "d_eff >= 1"));
    }
    let pairs = branches.pairwise_overlaps();
    let mean = pairs.iter().map(|(_, o)| o).sum::<f64>() / pairs.len() as f64;
    Ok(mean * d_eff)
}

/// Exact squared overlap of two product-rotation branches started from
/// `|0...0>`: `cos^(2n)(delta_theta / 2)`.
pub fn integrable_overlap_exact(n: u32, delta_theta: f64) -> f64 {
    libm::pow(libm::cos(delta_theta / 2.0), 2.0 * n as f64)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairRow {
    pub i: usize,
    pub j: usize,
    pub squared_overlap: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialRow {
    pub trial: usize,
    pub pairs: Vec<PairRow>,
    pub max_coherence: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuppressionRecord {
    pub dynamics: String,
    pub env_qubits: u32,
    pub pointer_count: usize,
    pub depth: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub stream_index: u64,
    pub d_eff: f64,
    /// Pooled over every pair of every trial.
    pub mean_overlap_sq: f64,
    pub var_overlap_sq: f64,
    pub se_overlap_sq: f64,
    pub mean_max_coherence: f64,
    pub var_max_coherence: f64,
    /// `1 / d_eff`.
    pub predicted_overlap_sq: f64,
    /// `1 / sqrt(d_eff)`.
    pub predicted_amplitude: f64,
    pub typicality_ratio: f64,
    /// `typicality_ratio > ATYPICAL_RATIO` and the excess over 1 exceeds five
    /// standard errors of the ratio.
    pub atypical: bool,
    pub rows: Vec<TrialRow>,
}

/// Regenerate the branches on `trials` independent substreams and collect
/// overlap and coherence statistics against the `d_eff = 2^n` prediction.
pub fn suppression_experiment(model: &MeasurementModel, trials: usize, rng: &RngStream) -> Result<SuppressionRecord> {
    if trials < 30 {
        return Err(Error::domain("trials", trials as f64, "trials >= 30"));
    }
    let rows = try_map_indices(trials, |t| {
        let branches = generate_branches(model, &rng.substream(t as u64))?;
        let rho = reduced_density(model, &branches)?;
        Ok(TrialRow {
            trial: t,
            pairs: branches
                .pairwise_overlaps()
                .into_iter()
                .map(|((i, j), o)| PairRow {
                    i,
                    j,
                    squared_overlap: o,
                })
                .collect(),
            max_coherence: max_coherence(&rho),
        })
    })?;
    let overlaps: Vec<f64> = rows
        .iter()
        .flat_map(|r| r.pairs.iter().map(|p| p.squared_overlap))
        .collect();
    let (mean_overlap_sq, var_overlap_sq) = mean_and_variance(&overlaps);
    let se_overlap_sq = libm::sqrt(var_overlap_sq / overlaps.len() as f64);
    let coherences: Vec<f64> = rows.iter().map(|r| r.max_coherence).collect();
    let (mean_max_coherence, var_max_coherence) = mean_and_variance(&coherences);
    let d_eff = model.env_dim() as f64;
    let ratio = mean_overlap_sq * d_eff;
    let atypical = ratio > ATYPICAL_RATIO && ratio - 1.0 > 5.0 * se_overlap_sq * d_eff;
    Ok(SuppressionRecord {
        dynamics: model.dynamics.name().into(),
        env_qubits: model.env_qubits,
        pointer_count: model.pointer_count(),
        depth: match model.dynamics {
            Dynamics::ChaoticCircuit { depth } => Some(depth),
            _ => None,
        },
        trials,
        seed: rng.seed(),
        stream_index: rng.stream_index(),
        d_eff,
        mean_overlap_sq,
        var_overlap_sq,
        se_overlap_sq,
        mean_max_coherence,
        var_max_coherence,
        predicted_overlap_sq: 1.0 / d_eff,
        predicted_amplitude: 1.0 / libm::sqrt(d_eff),
        typicality_ratio: ratio,
        atypical,
        rows,
    })
}
