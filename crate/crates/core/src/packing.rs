//! Epsilon-quasi-orthogonal families: the random-coding lower bound on their
//! size, probabilistic and greedy constructions, and all-pairs certification.
//!
//! The lower bound is
//!
//! ```text
//! M_eps(d) >= floor(exp((d-1)/2 * (-ln(1-eps)) - 1/2))
//! ```
//!
//! For small `eps` the exponent is about `eps d / 2`, so for `n` qubits
//! (`d = 2^n`) the family size is doubly exponential in `n`. Everything here
//! uses the explicit form; the log form is exposed for regimes where the
//! bound itself is not representable.

use alloc::string::String;
use alloc::vec::Vec;

use crate::hypothesis::TestReport;
use crate::limits::check_pair_ops;
use crate::state::{clamp_unit, haar_state, inner_unchecked};
use crate::trials::{map_indices, try_map_indices};
use crate::{Error, Result, RngStream, StateVector};

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::domain("eps", eps, "0 <= eps < 1"));
    }
    Ok(())
}

/// `((d-1)/2)(-ln(1-eps)) - 1/2`, the natural log of the bound before the
/// floor.
pub fn log_lower_bound(d: u64, eps: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    check_eps(eps)?;
    Ok(log_bound_f64(d as f64, eps))
}

fn log_bound_f64(d: f64, eps: f64) -> f64 {
    (d - 1.0) / 2.0 * -libm::log1p(-eps) - 0.5
}

/// Random-coding lower bound on the largest epsilon-quasi-orthogonal family
/// in dimension `d`.
///
/// Fails with [`Error::Unrepresentable`] once the bound reaches `2^53`, past
/// which `f64` no longer pins down the floor; use [`log_lower_bound`] there.
pub fn lower_bound(d: u64, eps: f64) -> Result<u64> {
    let log = log_lower_bound(d, eps)?;
    if log < 0.0 {
        return Ok(0);
    }
    if log >= 53.0 * core::f64::consts::LN_2 {
        return Err(Error::Unrepresentable(log));
    }
    Ok(libm::floor(libm::exp(log)) as u64)
}

/// `log_lower_bound(2^n, eps)`, evaluated without forming `2^n` as an integer.
pub fn qubit_capacity_log(n: u32, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if n > 1023 {
        return Err(Error::domain("n", n as f64, "n <= 1023"));
    }
    Ok(log_bound_f64(libm::ldexp(1.0, n as i32), eps))
}

/// Union bound on the probability that `m` independent Haar states fail to
/// be epsilon-quasi-orthogonal: `(1/2) m^2 (1-eps)^(d-1)`. May exceed 1.
pub fn union_bound_failure(d: u64, eps: f64, m: u64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::domain("eps", eps, "0 <= eps <= 1"));
    }
    if m < 2 {
        return Err(Error::domain("M", m as f64, "M >= 2"));
    }
    let mf = m as f64;
    let log = 2.0 * libm::log(mf) - core::f64::consts::LN_2 + (d as f64 - 1.0) * libm::log1p(-eps);
    Ok(libm::exp(log))
}

/// A set of unit vectors with a threshold `eps` on pairwise squared overlaps.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiOrthogonalFamily {
    dim: usize,
    eps: f64,
    vectors: Vec<StateVector>,
    max_pairwise: Option<f64>,
}

impl QuasiOrthogonalFamily {
    /// Uncertified family; every vector must share one dimension.
    pub fn new(eps: f64, vectors: Vec<StateVector>) -> Result<Self> {
        let dim = vectors
            .first()
            .map(StateVector::dim)
            .ok_or(Error::InvalidDimension(0))?;
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: v.dim(),
            });
        }
        Ok(QuasiOrthogonalFamily {
            dim,
            eps,
            vectors,
            max_pairwise: None,
        })
    }

    /// The computational basis of `C^d`.
    pub fn orthonormal_basis(d: usize, eps: f64) -> Result<Self> {
        let vectors = (0..d).map(|k| StateVector::basis(d, k)).collect::<Result<Vec<_>>>()?;
        QuasiOrthogonalFamily::new(eps, vectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    /// Largest pairwise squared overlap, once verified.
    pub fn max_pairwise(&self) -> Option<f64> {
        self.max_pairwise
    }

    pub fn is_certified(&self) -> bool {
        self.max_pairwise.is_some_and(|m| m <= self.eps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verification {
    pub max_pairwise: f64,
    pub pass: bool,
}

struct PairScan {
    max: f64,
    first_violation: Option<(usize, usize)>,
}

// Exact all-pairs scan. Row maxima and first violations are combined in row
// order, so the result does not depend on scheduling.
fn scan_pairs(vectors: &[StateVector], eps: f64) -> PairScan {
    let rows = map_indices(vectors.len(), |i| {
        let a = vectors[i].amplitudes();
        let mut max: f64 = 0.0;
        let mut first = None;
        for (j, v) in vectors.iter().enumerate().skip(i + 1) {
            let o = clamp_unit(inner_unchecked(a, v.amplitudes()).norm_sqr());
            if o > eps && first.is_none() {
                first = Some(j);
            }
            max = max.max(o);
        }
        (max, first)
    });
    let mut scan = PairScan {
        max: 0.0,
        first_violation: None,
    };
    for (i, (max, first)) in rows.into_iter().enumerate() {
        scan.max = scan.max.max(max);
        if scan.first_violation.is_none() {
            scan.first_violation = first.map(|j| (i, j));
        }
    }
    scan
}

/// Exact all-pairs maximum of the squared overlaps. A singleton has maximum 0.
pub fn verify(family: &mut QuasiOrthogonalFamily) -> Result<Verification> {
    if family.is_empty() {
        return Err(Error::InvalidDimension(0));
    }
    check_pair_ops(family.len(), family.dim)?;
    let scan = scan_pairs(&family.vectors, family.eps);
    family.max_pairwise = Some(scan.max);
    Ok(Verification {
        max_pairwise: scan.max,
        pass: scan.max <= family.eps,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PackingReport {
    pub d: usize,
    pub eps: f64,
    pub m_requested: usize,
    pub success: bool,
    pub max_pairwise: f64,
    /// First pair `(i, j)`, `i < j`, in lexicographic order whose squared
    /// overlap exceeds `eps`.
    pub failure_pair: Option<(usize, usize)>,
    /// `(1/2) M^2 (1-eps)^(d-1)`; 0 when `M < 2`.
    pub union_bound: f64,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub family: Option<QuasiOrthogonalFamily>,
}

fn check_construct(d: usize, eps: f64, m: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::domain("eps", eps, "0 <= eps <= 1"));
    }
    if m == 0 {
        return Err(Error::domain("M", 0.0, "M >= 1"));
    }
    check_pair_ops(m, d)
}

/// Sample `m` Haar states and certify them. On success the report carries the
/// certified family.
pub fn random_coding_construct(d: usize, eps: f64, m: usize, rng: &mut RngStream) -> Result<PackingReport> {
    check_construct(d, eps, m)?;
    let vectors = (0..m).map(|_| haar_state(d, rng)).collect::<Result<Vec<_>>>()?;
    let scan = scan_pairs(&vectors, eps);
    let success = scan.max <= eps;
    let union_bound = if m >= 2 {
        union_bound_failure(d as u64, eps, m as u64)?
    } else {
        0.0
    };
    let family = success.then_some(QuasiOrthogonalFamily {
        dim: d,
        eps,
        vectors,
        max_pairwise: Some(scan.max),
    });
    Ok(PackingReport {
        d,
        eps,
        m_requested: m,
        success,
        max_pairwise: scan.max,
        failure_pair: scan.first_violation,
        union_bound,
        family,
    })
}

/// Rejection sampling: keep a fresh Haar state only if it stays
/// epsilon-quasi-orthogonal to everything kept so far. Stops at `target_m`
/// vectors or after `max_attempts` draws; the result is always certified.
pub fn greedy_construct(
    d: usize,
    eps: f64,
    target_m: usize,
    max_attempts: usize,
    rng: &mut RngStream,
) -> Result<QuasiOrthogonalFamily> {
    check_construct(d, eps, target_m)?;
    if max_attempts < target_m {
        return Err(Error::domain(
            "max_attempts",
            max_attempts as f64,
            "max_attempts >= target_M",
        ));
    }
    let mut kept: Vec<StateVector> = Vec::with_capacity(target_m);
    let mut max: f64 = 0.0;
    for _ in 0..max_attempts {
        if kept.len() == target_m {
            break;
        }
        let cand = haar_state(d, rng)?;
        let worst = kept
            .iter()
            .map(|v| clamp_unit(inner_unchecked(cand.amplitudes(), v.amplitudes()).norm_sqr()))
            .fold(0.0, f64::max);
        if worst <= eps {
            max = max.max(worst);
            kept.push(cand);
        }
    }
    Ok(QuasiOrthogonalFamily {
        dim: d,
        eps,
        vectors: kept,
        max_pairwise: Some(max),
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SuccessRate {
    pub d: usize,
    pub eps: f64,
    pub m: usize,
    pub trials: usize,
    pub successes: usize,
    pub fraction: f64,
    pub union_bound: f64,
    /// `1 - union_bound`, the guaranteed success probability.
    pub guarantee: f64,
    pub max_pairwise: Vec<f64>,
    /// `statistic = guarantee - fraction`, `threshold = 3 sqrt(p(1-p)/trials)`.
    pub report: TestReport,
}

/// Run [`random_coding_construct`] on `trials` independent substreams and
/// check the success fraction against the union-bound guarantee, allowing
/// three binomial standard errors.
pub fn success_rate_experiment(d: usize, eps: f64, m: usize, trials: usize, rng: &RngStream) -> Result<SuccessRate> {
    if trials < 30 {
        return Err(Error::domain("trials", trials as f64, "trials >= 30"));
    }
    check_construct(d, eps, m)?;
    let outcomes = try_map_indices(trials, |t| {
        let mut r = rng.substream(t as u64);
        let rep = random_coding_construct(d, eps, m, &mut r)?;
        Ok((rep.success, rep.max_pairwise))
    })?;
    let successes = outcomes.iter().filter(|(s, _)| *s).count();
    let fraction = successes as f64 / trials as f64;
    let union_bound = if m >= 2 {
        union_bound_failure(d as u64, eps, m as u64)?
    } else {
        0.0
    };
    let guarantee = 1.0 - union_bound;
    let se = libm::sqrt(fraction * (1.0 - fraction) / trials as f64);
    let report = TestReport::new(
        guarantee - fraction,
        3.0 * se,
        0.00135,
        alloc::format!("success fraction {successes}/{trials} vs union-bound guarantee {guarantee:.6}"),
    );
    Ok(SuccessRate {
        d,
        eps,
        m,
        trials,
        successes,
        fraction,
        union_bound,
        guarantee,
        max_pairwise: outcomes.into_iter().map(|(_, m)| m).collect(),
        report,
    })
}

/// Human-readable summary used by report writers.
pub fn describe(report: &PackingReport) -> String {
    match report.failure_pair {
        None => alloc::format!(
            "certified {} vectors in d = {} with max overlap {:.3e} <= {}",
            report.m_requested,
            report.d,
            report.max_pairwise,
            report.eps
        ),
        Some((i, j)) => alloc::format!(
            "pair ({i}, {j}) violates eps = {}; max overlap {:.3e}",
            report.eps,
            report.max_pairwise
        ),
    }
}
