use std::fmt::Write as _;

use quasiortho::hypothesis::{ks_test_at, KS_MIN_SAMPLES};
use quasiortho::overlap::OverlapDistribution;
use quasiortho::sample::{sample_overlaps, EmpiricalSample};
use quasiortho::RngStream;
use serde_json::json;

use super::{provenance, resolve_seed, Outcome};
use crate::args::{Format, GlobalArgs, OverlapDistArgs};
use crate::error::CliError;
use crate::output::{emit, header_lines, num, pretty, Provenance, Report};

pub const DEFAULT_TRIALS: usize = 100_000;

pub fn run(g: &GlobalArgs, a: &OverlapDistArgs) -> Result<Outcome, CliError> {
    if a.d < 2 {
        return Err(CliError::usage("--d must be at least 2"));
    }
    let trials = g.trials.unwrap_or(DEFAULT_TRIALS);
    if trials < KS_MIN_SAMPLES {
        return Err(CliError::usage(format!(
            "--trials must be at least {KS_MIN_SAMPLES} for the KS test"
        )));
    }
    if a.bins == 0 {
        return Err(CliError::usage("--bins must be positive"));
    }
    let seed = resolve_seed(g);
    let params = json!({ "d": a.d, "trials": trials, "bins": a.bins, "alpha": a.alpha });
    let prov = provenance(g, "overlap-dist", Some(seed), params);

    let sample = sample_overlaps(a.d, trials, &RngStream::new(seed, 0))?;
    let ks = ks_test_at(&sample, a.alpha)?;
    let dist = OverlapDistribution::new(a.d)?;

    let mut report = Report::new(
        "histogram",
        &[
            "bin_lo",
            "bin_hi",
            "bin_mid",
            "empirical_density",
            "analytic_pdf",
            "empirical_cdf",
            "analytic_cdf",
        ],
    );
    report
        .summary("d", a.d)
        .summary("trials", trials)
        .summary("mean", sample.mean())
        .summary("expected_mean", dist.mean())
        .summary("standard_error", sample.standard_error())
        .summary("ks_statistic", ks.statistic)
        .summary("ks_threshold", ks.threshold)
        .summary("ks_alpha", ks.alpha)
        .summary("ks_pass", ks.pass);

    let values = sample.values();
    let top = values.last().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
    let width = top / a.bins as f64;
    let mut counts = vec![0usize; a.bins];
    for &x in values {
        counts[((x / width) as usize).min(a.bins - 1)] += 1;
    }
    let mut cumulative = 0;
    for (b, &c) in counts.iter().enumerate() {
        let lo = b as f64 * width;
        let hi = if b + 1 == a.bins { top } else { (b + 1) as f64 * width };
        let mid = 0.5 * (lo + hi);
        cumulative += c;
        report.row(vec![
            json!(lo),
            json!(hi),
            json!(mid),
            json!(c as f64 / (trials as f64 * (hi - lo))),
            json!(dist.pdf(mid)?),
            json!(cumulative as f64 / trials as f64),
            json!(dist.cdf(hi)?),
        ]);
    }

    if let Some(path) = &a.samples {
        emit(Some(path), &render_sample(&sample, &prov, g.format))?;
    }
    Ok(Outcome::new(&report, &prov, g, ks.pass))
}

fn render_sample(sample: &EmpiricalSample, prov: &Provenance, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = header_lines(prov);
            let _ = writeln!(
                out,
                "# dim: {}\n# count: {}\n# seed: {}",
                sample.dim(),
                sample.count(),
                sample.seed()
            );
            out.push_str("squared_overlap\n");
            for &v in sample.values() {
                out.push_str(&num(v));
                out.push('\n');
            }
            out
        }
        Format::Json => pretty(json!({
            "provenance": prov,
            "dim": sample.dim(),
            "count": sample.count(),
            "seed": sample.seed(),
            "values": sample.values(),
        })),
    }
}
