use std::fmt::Write as _;

use quasiortho::packing::{
    describe, greedy_construct, log_lower_bound, lower_bound, qubit_capacity_log, random_coding_construct,
    success_rate_experiment, union_bound_failure, QuasiOrthogonalFamily,
};
use quasiortho::{Error, RngStream};
use serde_json::{json, Value};

use super::{provenance, resolve_seed, Outcome};
use crate::args::{Format, GlobalArgs, PackingBuildArgs};
use crate::error::CliError;
use crate::output::{emit, header_lines, num, pretty, Provenance, Report};

/// `None` when the bound is too large for an exact integer.
fn representable(d: u64, eps: f64) -> Result<Option<u64>, CliError> {
    match lower_bound(d, eps) {
        Ok(m) => Ok(Some(m)),
        Err(Error::Unrepresentable(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn bound(g: &GlobalArgs, d: Option<u64>, qubits: Option<u32>, eps: f64) -> Result<Outcome, CliError> {
    let (report, prov) = match (d, qubits) {
        (Some(d), _) => {
            let prov = provenance(g, "packing bound", None, json!({ "d": d, "eps": eps }));
            let log = log_lower_bound(d, eps)?;
            let m = representable(d, eps)?;
            let union = match m {
                Some(m) if m >= 2 => Some(union_bound_failure(d, eps, m)?),
                _ => None,
            };
            let mut r = Report::new(
                "bound",
                &["d", "eps", "log_lower_bound", "lower_bound", "union_bound_failure"],
            );
            r.row(vec![json!(d), json!(eps), json!(log), json!(m), json!(union)]);
            (r, prov)
        }
        (None, Some(n)) => {
            let prov = provenance(g, "packing bound", None, json!({ "qubits": n, "eps": eps }));
            let log = qubit_capacity_log(n, eps)?;
            let m = if n < 64 { representable(1u64 << n, eps)? } else { None };
            let mut r = Report::new("bound", &["qubits", "eps", "log_lower_bound", "lower_bound"]);
            r.row(vec![json!(n), json!(eps), json!(log), json!(m)]);
            (r, prov)
        }
        (None, None) => return Err(CliError::usage("one of --d or --qubits is required")),
    };
    Ok(Outcome::new(&report, &prov, g, true))
}

pub fn build(g: &GlobalArgs, a: &PackingBuildArgs) -> Result<Outcome, CliError> {
    let seed = resolve_seed(g);
    let rng = RngStream::new(seed, 0);
    if a.greedy {
        return build_greedy(g, a, seed, &rng);
    }
    let mut params = json!({ "d": a.d, "eps": a.eps, "M": a.m, "greedy": false });
    if let Some(t) = g.trials {
        params["trials"] = json!(t);
    }
    let prov = provenance(g, "packing build", Some(seed), params);

    // trial 0 of the rate experiment uses the same substream
    let single = random_coding_construct(a.d, a.eps, a.m, &mut rng.substream(0))?;
    if let Some(path) = &a.family {
        match &single.family {
            Some(f) => emit(Some(path), &render_family(f, &prov, g.format))?,
            None => eprintln!("warning: first construction was not certified; no family written"),
        }
    }

    let Some(trials) = g.trials else {
        let mut r = Report::new(
            "construction",
            &[
                "d",
                "eps",
                "M",
                "success",
                "max_pairwise",
                "failure_i",
                "failure_j",
                "union_bound_failure",
            ],
        );
        let (fi, fj) = single.failure_pair.map_or((None, None), |(i, j)| (Some(i), Some(j)));
        r.summary("result", describe(&single));
        r.row(vec![
            json!(a.d),
            json!(a.eps),
            json!(a.m),
            json!(single.success),
            json!(single.max_pairwise),
            json!(fi),
            json!(fj),
            json!(single.union_bound),
        ]);
        return Ok(Outcome::new(&r, &prov, g, single.success));
    };

    let rate = success_rate_experiment(a.d, a.eps, a.m, trials, &rng)?;
    let mut r = Report::new("trials", &["trial", "max_pairwise", "success"]);
    r.summary("d", a.d)
        .summary("eps", a.eps)
        .summary("M", a.m)
        .summary("trials", rate.trials)
        .summary("successes", rate.successes)
        .summary("success_fraction", rate.fraction)
        .summary("union_bound_failure", rate.union_bound)
        .summary("guarantee", rate.guarantee)
        .summary("test_statistic", rate.report.statistic)
        .summary("test_threshold", rate.report.threshold)
        .summary("test_pass", rate.report.pass);
    for (t, &m) in rate.max_pairwise.iter().enumerate() {
        r.row(vec![json!(t), json!(m), json!(m <= a.eps)]);
    }
    Ok(Outcome::new(&r, &prov, g, rate.report.pass))
}

fn build_greedy(g: &GlobalArgs, a: &PackingBuildArgs, seed: u64, rng: &RngStream) -> Result<Outcome, CliError> {
    let attempts = a.max_attempts.unwrap_or_else(|| a.m.saturating_mul(100));
    let params = json!({ "d": a.d, "eps": a.eps, "M": a.m, "greedy": true, "max_attempts": attempts });
    let prov = provenance(g, "packing build", Some(seed), params);
    let family = greedy_construct(a.d, a.eps, a.m, attempts, &mut rng.substream(0))?;
    if let Some(path) = &a.family {
        emit(Some(path), &render_family(&family, &prov, g.format))?;
    }
    let reached = family.len() == a.m;
    let mut r = Report::new(
        "construction",
        &["d", "eps", "M", "kept", "max_attempts", "max_pairwise", "reached"],
    );
    r.row(vec![
        json!(a.d),
        json!(a.eps),
        json!(a.m),
        json!(family.len()),
        json!(attempts),
        json!(family.max_pairwise()),
        json!(reached),
    ]);
    Ok(Outcome::new(&r, &prov, g, reached))
}

fn render_family(f: &QuasiOrthogonalFamily, prov: &Provenance, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = header_lines(prov);
            let _ = writeln!(out, "# d: {}\n# eps: {}\n# vectors: {}", f.dim(), f.eps(), f.len());
            out.push_str("vector");
            for k in 0..f.dim() {
                let _ = write!(out, ",re_{k},im_{k}");
            }
            out.push('\n');
            for (i, v) in f.vectors().iter().enumerate() {
                out.push_str(&i.to_string());
                for z in v.amplitudes() {
                    let _ = write!(out, ",{},{}", num(z.re), num(z.im));
                }
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let vectors: Vec<Value> = f
                .vectors()
                .iter()
                .map(|v| json!(v.amplitudes().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()))
                .collect();
            pretty(json!({
                "provenance": prov,
                "d": f.dim(),
                "eps": f.eps(),
                "max_pairwise": f.max_pairwise(),
                "vectors": vectors,
            }))
        }
    }
}
