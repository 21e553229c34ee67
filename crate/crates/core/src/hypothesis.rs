//! Kolmogorov-Smirnov tests, Wilson intervals and the report type shared by
//! every statistical check in the crate.

use alloc::string::String;
use alloc::vec::Vec;

use crate::overlap::OverlapDistribution;
use crate::sample::EmpiricalSample;
use crate::{Error, Result};

/// Smallest sample accepted by the KS tests (asymptotic critical values).
pub const KS_MIN_SAMPLES: usize = 100;

/// Outcome of a statistical check. `pass` holds exactly when
/// `statistic <= threshold`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TestReport {
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub alpha: f64,
    pub description: String,
}

impl TestReport {
    pub fn new(statistic: f64, threshold: f64, alpha: f64, description: impl Into<String>) -> Self {
        TestReport {
            statistic,
            threshold,
            pass: statistic <= threshold,
            alpha,
            description: description.into(),
        }
    }
}

/// Asymptotic Kolmogorov critical value `c(alpha) = sqrt(-ln(alpha/2) / 2)`.
/// `c(0.01) = 1.628`.
pub fn ks_critical_value(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(libm::sqrt(-libm::log(alpha / 2.0) / 2.0))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("alpha", alpha, "0 < alpha < 1"));
    }
    Ok(())
}

/// `sup_x |F_N(x) - F(x)|` for ascending `sorted` values against `cdf`.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut worst: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        worst = worst.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    worst
}

/// One-sample KS test of an overlap sample against `Beta(1, d-1)` at
/// `alpha = 0.01`.
pub fn ks_test(sample: &EmpiricalSample) -> Result<TestReport> {
    ks_test_at(sample, 0.01)
}

pub fn ks_test_at(sample: &EmpiricalSample, alpha: f64) -> Result<TestReport> {
    let n = sample.count();
    if n < KS_MIN_SAMPLES {
        return Err(Error::domain("N", n as f64, "N >= 100 for the KS test"));
    }
    let law = OverlapDistribution::new(sample.dim())?;
    let stat = ks_statistic(sample.values(), |x| law.cdf(x.clamp(0.0, 1.0)).unwrap_or(1.0));
    let threshold = ks_critical_value(alpha)? / libm::sqrt(n as f64);
    Ok(TestReport::new(
        stat,
        threshold,
        alpha,
        alloc::format!("one-sample KS vs Beta(1, {}) with N = {}", sample.dim() - 1, n),
    ))
}

/// Two-sample KS test; both inputs ascending.
pub fn ks_two_sample(a: &[f64], b: &[f64], alpha: f64) -> Result<TestReport> {
    let (n, m) = (a.len(), b.len());
    if n.min(m) < KS_MIN_SAMPLES {
        return Err(Error::domain("N", n.min(m) as f64, "N >= 100 for the KS test"));
    }
    let (mut i, mut j) = (0, 0);
    let mut worst: f64 = 0.0;
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        worst = worst.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let (nf, mf) = (n as f64, m as f64);
    let threshold = ks_critical_value(alpha)? * libm::sqrt((nf + mf) / (nf * mf));
    Ok(TestReport::new(
        worst,
        threshold,
        alpha,
        alloc::format!("two-sample KS with N = {n}, M = {m}"),
    ))
}

/// Wilson score interval for `k` successes out of `n` at confidence
/// `1 - alpha`.
pub fn wilson_interval(k: u64, n: u64, alpha: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::domain("N", 0.0, "N >= 1"));
    }
    if k > n {
        return Err(Error::domain("k", k as f64, "0 <= k <= N"));
    }
    check_alpha(alpha)?;
    let z = normal_quantile(1.0 - alpha / 2.0);
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * libm::sqrt(p * (1.0 - p) / nf + z2 / (4.0 * nf * nf));
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (center + half).min(1.0) };
    Ok((lo, hi))
}

/// Standard normal quantile. Acklam's rational approximation followed by one
/// Halley step against `erfc`, accurate to about 1e-15.
pub fn normal_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let p_low = 0.02425;
    let x = if p < p_low {
        let q = libm::sqrt(-2.0 * libm::log(p));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - p_low {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = libm::sqrt(-2.0 * libm::log1p(-p));
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let e = 0.5 * libm::erfc(-x / core::f64::consts::SQRT_2) - p;
    let u = e * libm::sqrt(2.0 * core::f64::consts::PI) * libm::exp(x * x / 2.0);
    x - u / (1.0 + x * u / 2.0)
}

/// Sample mean and unbiased variance.
pub fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, ss / (n as f64 - 1.0))
}

pub(crate) fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RngStream;

    #[test]
    fn critical_value_at_one_percent() {
        let c = ks_critical_value(0.01).unwrap();
        assert!((c - 1.628).abs() < 5e-4);
        assert!(ks_critical_value(0.0).is_err());
    }

    #[test]
    fn normal_quantile_known_points() {
        assert!(normal_quantile(0.5).abs() < 1e-15);
        assert!((normal_quantile(0.995) - 2.575_829_303_548_901).abs() < 1e-12);
        assert!((normal_quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-12);
        assert!((normal_quantile(1e-10) + 6.361_340_902_404_056).abs() < 1e-9);
    }

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson_interval(0, 50, 0.01).unwrap();
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.2);
        let (lo, hi) = wilson_interval(50, 50, 0.01).unwrap();
        assert_eq!(hi, 1.0);
        assert!(lo > 0.8);
        assert!(wilson_interval(3, 2, 0.01).is_err());
        assert!(wilson_interval(0, 0, 0.01).is_err());
        assert!(wilson_interval(1, 2, 1.5).is_err());
    }

    #[test]
    fn wilson_symmetric_and_shrinking() {
        let mut prev_width = f64::INFINITY;
        for n in [100u64, 10_000, 1_000_000] {
            let (lo, hi) = wilson_interval(n / 2, n, 0.01).unwrap();
            assert!(((lo + hi) / 2.0 - 0.5).abs() < 1e-12);
            let width = hi - lo;
            assert!(width < prev_width);
            // width -> 2 z sqrt(1/4N) = z / sqrt(N)
            assert!((width * libm::sqrt(n as f64) / 2.5758 - 1.0).abs() < 0.04);
            prev_width = width;
        }
    }

    #[test]
    fn ks_accepts_inverse_transform_sample() {
        for (seed, d) in [(1u64, 2usize), (2, 64), (3, 1024)] {
            let mut rng = RngStream::new(seed, 0);
            // inverse CDF of Beta(1, d-1): x = 1 - u^(1/(d-1))
            let values: Vec<f64> = (0..20_000)
                .map(|_| 1.0 - libm::pow(rng.uniform_open0(), 1.0 / (d as f64 - 1.0)))
                .collect();
            let s = EmpiricalSample::from_values(d, values, seed, 0).unwrap();
            let r = ks_test(&s).unwrap();
            assert!(r.pass, "d={d} stat={} thr={}", r.statistic, r.threshold);
        }
    }

    #[test]
    fn ks_rejects_wrong_law() {
        let mut rng = RngStream::new(4, 0);
        let values: Vec<f64> = (0..1000).map(|_| rng.uniform()).collect();
        let s = EmpiricalSample::from_values(1024, values, 4, 0).unwrap();
        assert!(!ks_test(&s).unwrap().pass);
    }

    #[test]
    fn ks_statistic_ignores_construction_order() {
        let mut rng = RngStream::new(5, 0);
        let values: Vec<f64> = (0..500).map(|_| rng.uniform()).collect();
        let mut reversed = values.clone();
        reversed.reverse();
        let a = EmpiricalSample::from_values(8, values, 0, 0).unwrap();
        let b = EmpiricalSample::from_values(8, reversed, 0, 0).unwrap();
        assert_eq!(ks_test(&a).unwrap(), ks_test(&b).unwrap());
    }

    #[test]
    fn ks_undersized() {
        let s = EmpiricalSample::from_values(8, alloc::vec![0.1; 99], 0, 0).unwrap();
        assert!(ks_test(&s).is_err());
    }

    #[test]
    fn two_sample_same_and_different() {
        let mut rng = RngStream::new(6, 0);
        let a = sorted((0..2000).map(|_| rng.uniform()).collect());
        let b = sorted((0..2000).map(|_| rng.uniform()).collect());
        assert!(ks_two_sample(&a, &b, 0.01).unwrap().pass);
        let c = sorted((0..2000).map(|_| rng.uniform() * 0.8).collect());
        assert!(!ks_two_sample(&a, &c, 0.01).unwrap().pass);
    }

    #[test]
    fn two_sample_handles_ties() {
        let a = alloc::vec![0.5; 200];
        let b = alloc::vec![0.5; 300];
        assert_eq!(ks_two_sample(&a, &b, 0.01).unwrap().statistic, 0.0);
    }

    #[test]
    fn report_pass_iff_below_threshold() {
        assert!(TestReport::new(1.0, 1.0, 0.01, "").pass);
        assert!(!TestReport::new(1.0 + 1e-12, 1.0, 0.01, "").pass);
    }
}
