//! Exact law of the squared overlap `X = |<phi|psi>|^2` of a Haar-random
//! `psi` with a fixed unit vector in dimension `d`, and the Levy-type
//! concentration bounds it is compared against.
//!
//! `X ~ Beta(1, d - 1)`: density `(d-1)(1-x)^(d-2)`, survival
//! `(1-x)^(d-1)`, mean `1/d`. Tail quantities are evaluated as
//! `exp((d-1) log1p(-x))` so they stay accurate where the power underflows.

use core::f64::consts::PI;

use crate::{Error, Result};

/// `Beta(1, d - 1)`, the law of the squared overlap in dimension `d >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OverlapDistribution {
    dim: usize,
}

impl OverlapDistribution {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::domain("d", dim as f64, "d >= 2"));
        }
        Ok(OverlapDistribution { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_unit("x", x)?;
        if self.dim == 2 {
            return Ok(1.0);
        }
        let d = self.dim as f64;
        Ok(libm::exp(libm::log(d - 1.0) + (d - 2.0) * libm::log1p(-x)))
    }

    pub fn survival(&self, eps: f64) -> Result<f64> {
        check_unit("eps", eps)?;
        Ok(libm::exp((self.dim as f64 - 1.0) * libm::log1p(-eps)))
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_unit("x", x)?;
        // 1 - (1-x)^(d-1) without cancellation for small x
        Ok(-libm::expm1((self.dim as f64 - 1.0) * libm::log1p(-x)))
    }

    pub fn mean(&self) -> f64 {
        1.0 / self.dim as f64
    }
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(name, x, "0 <= value <= 1"));
    }
    Ok(())
}

/// Density `(d-1)(1-x)^(d-2)`.
pub fn pdf(d: usize, x: f64) -> Result<f64> {
    OverlapDistribution::new(d)?.pdf(x)
}

/// `P(X >= eps) = (1-eps)^(d-1)`.
pub fn survival(d: usize, eps: f64) -> Result<f64> {
    OverlapDistribution::new(d)?.survival(eps)
}

/// `P(X <= x) = 1 - (1-x)^(d-1)`.
pub fn cdf(d: usize, x: f64) -> Result<f64> {
    OverlapDistribution::new(d)?.cdf(x)
}

/// Haar mean `1/d`. Defined for `d >= 1` (at `d = 1` the overlap is always 1).
pub fn mean(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Ok(1.0 / d as f64)
}

/// A tail bound. Values `>= 1` are vacuous and are reported unclipped.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TailBound {
    pub value: f64,
    pub vacuous: bool,
}

impl TailBound {
    fn new(value: f64) -> Self {
        TailBound {
            value,
            vacuous: value >= 1.0,
        }
    }
}

/// Levy's lemma for an `L`-Lipschitz function on the unit sphere of `C^d`:
/// `2 exp(-(2d-1) delta^2 / (9 pi^3 L^2))`.
pub fn levy_tail_bound(d: usize, delta: f64, lipschitz: f64) -> Result<TailBound> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if !(delta > 0.0) {
        return Err(Error::domain("delta", delta, "delta > 0"));
    }
    if !(lipschitz > 0.0) {
        return Err(Error::domain("L", lipschitz, "L > 0"));
    }
    let exponent = (2.0 * d as f64 - 1.0) * delta * delta / (9.0 * PI * PI * PI * lipschitz * lipschitz);
    Ok(TailBound::new(2.0 * libm::exp(-exponent)))
}

/// Lipschitz constant of `psi -> |<phi|psi>|^2` with respect to the chordal
/// distance.
pub const OVERLAP_LIPSCHITZ: f64 = 2.0;

/// Levy's lemma specialised to the squared overlap:
/// `2 exp(-(2d-1) delta^2 / (36 pi^3))`.
pub fn overlap_tail_bound(d: usize, delta: f64) -> Result<TailBound> {
    levy_tail_bound(d, delta, OVERLAP_LIPSCHITZ)
}

/// `P(|X - 1/d| >= delta)` under the exact Beta law.
pub fn two_sided_exact_tail(d: usize, delta: f64) -> Result<f64> {
    let law = OverlapDistribution::new(d)?;
    if !(delta > 0.0) {
        return Err(Error::domain("delta", delta, "delta > 0"));
    }
    let m = law.mean();
    let upper_at = m + delta;
    let upper = if upper_at >= 1.0 { 0.0 } else { law.survival(upper_at)? };
    let lower = if delta < m { law.cdf(m - delta)? } else { 0.0 };
    Ok(upper + lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Composite Simpson on [a, b] with n (even) panels.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let x = a + i as f64 * h;
            s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
        }
        s * h / 3.0
    }

    #[test]
    fn pdf_examples() {
        for x in [0.0, 0.3, 1.0] {
            assert_eq!(pdf(2, x).unwrap(), 1.0);
        }
        assert_eq!(pdf(3, 1.0).unwrap(), 0.0);
        assert_eq!(pdf(1000, 1.0).unwrap(), 0.0);
        assert!((pdf(1024, 0.0).unwrap() - 1023.0).abs() < 1e-9);
    }

    #[test]
    fn pdf_domain() {
        assert!(pdf(1, 0.5).is_err());
        assert!(pdf(4, -0.1).is_err());
        assert!(pdf(4, 1.1).is_err());
        assert!(pdf(4, f64::NAN).is_err());
    }

    #[test]
    fn pdf_integrates_to_one() {
        for d in [2usize, 8, 64, 1024] {
            // the mass sits in [0, ~40/d]; split there so Simpson resolves it
            let cut = (60.0 / d as f64).min(1.0);
            let f = |x: f64| pdf(d, x).unwrap();
            let mut total = simpson(f, 0.0, cut, 20_000);
            if cut < 1.0 {
                total += simpson(f, cut, 1.0, 20_000);
            }
            assert!((total - 1.0).abs() < 1e-8, "d={d} total={total}");
        }
    }

    #[test]
    fn mean_matches_quadrature() {
        assert_eq!(mean(1).unwrap(), 1.0);
        assert_eq!(mean(2).unwrap(), 0.5);
        assert!(mean(0).is_err());
        let d = 64;
        let m = simpson(|x| x * pdf(d, x).unwrap(), 0.0, 1.0, 200_000);
        assert!((m - mean(d).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn survival_examples() {
        assert_eq!(survival(10, 0.0).unwrap(), 1.0);
        assert_eq!(survival(10, 1.0).unwrap(), 0.0);
        // (0.995)^1023, extended precision: 5.92941165747e-3
        assert!((survival(1024, 0.005).unwrap() - 5.929_411_657_474_158e-3).abs() < 1e-15);
        // (0.9)^15 = 0.205891132094649
        assert!((survival(16, 0.1).unwrap() - 0.205_891_132_094_649).abs() < 1e-14);
    }

    #[test]
    fn survival_is_strictly_decreasing() {
        let eps = [0.001, 0.01, 0.1, 0.5, 0.9];
        for w in eps.windows(2) {
            assert!(survival(64, w[0]).unwrap() > survival(64, w[1]).unwrap());
        }
        for e in eps {
            let mut prev = survival(2, e).unwrap();
            for d in [3, 5, 16, 100, 257] {
                let s = survival(d, e).unwrap();
                assert!(s < prev, "d={d} eps={e}");
                prev = s;
            }
        }
    }

    #[test]
    fn survival_does_not_underflow_early() {
        let s = survival(16384, 0.01).unwrap();
        // exp(16383 * log(0.99)) ~ 4.4e-72
        assert!(s > 1e-73 && s < 1e-71);
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(cdf(7, 0.0).unwrap(), 0.0);
        assert_eq!(cdf(7, 1.0).unwrap(), 1.0);
        assert!((cdf(2, 0.5).unwrap() - 0.5).abs() < 1e-15);
        let mut prev = 0.0;
        for i in 0..=100 {
            let c = cdf(50, i as f64 / 100.0).unwrap();
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn levy_examples() {
        // 2 exp(-2047 / (36 pi^3)) = 0.319591742518...
        let b = levy_tail_bound(1024, 1.0, 2.0).unwrap();
        assert!((b.value - 0.319_591_742_518_373_6).abs() < 1e-12);
        assert!(!b.vacuous);
        // 1.963657095502577
        let b = overlap_tail_bound(1024, 0.1).unwrap();
        assert!((b.value - 1.963_657_095_502_577).abs() < 1e-12);
        assert!(b.vacuous);
        let mut prev = f64::INFINITY;
        for delta in [0.01, 0.1, 0.5, 1.0, 2.0, 10.0] {
            let v = levy_tail_bound(128, delta, 1.0).unwrap().value;
            assert!(v < prev);
            prev = v;
        }
        assert!(levy_tail_bound(128, 100.0, 1.0).unwrap().value < 1e-300);
    }

    #[test]
    fn levy_domain() {
        assert!(levy_tail_bound(10, 0.0, 2.0).is_err());
        assert!(levy_tail_bound(10, 0.1, -1.0).is_err());
        assert!(levy_tail_bound(0, 0.1, 2.0).is_err());
    }

    #[test]
    fn overlap_bound_is_levy_at_two() {
        for d in [1, 2, 16, 1000] {
            for delta in [0.01, 0.3, 1.0] {
                assert_eq!(
                    overlap_tail_bound(d, delta).unwrap(),
                    levy_tail_bound(d, delta, 2.0).unwrap()
                );
            }
        }
        let mut prev = f64::INFINITY;
        for d in [2, 16, 128, 1024, 4096] {
            let v = overlap_tail_bound(d, 0.2).unwrap().value;
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn two_sided_examples() {
        // (1 - 1/1024 - 0.005)^1023 = 2.17143512264396e-3; lower tail empty
        let t = two_sided_exact_tail(1024, 0.005).unwrap();
        assert!((t - 2.171_435_122_643_963e-3).abs() < 1e-15);
        assert_eq!(two_sided_exact_tail(16, 1.0 - 1.0 / 16.0).unwrap(), 0.0);
        assert_eq!(two_sided_exact_tail(16, 0.99).unwrap(), 0.0);
        // delta < 1/d: lower tail contributes
        let d = 4;
        let delta = 0.1;
        let expect = survival(d, 0.35).unwrap() + cdf(d, 0.15).unwrap();
        assert!((two_sided_exact_tail(d, delta).unwrap() - expect).abs() < 1e-15);
    }
}
