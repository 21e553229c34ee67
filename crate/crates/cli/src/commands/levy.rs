use quasiortho::overlap::{overlap_tail_bound, two_sided_exact_tail};
use serde_json::json;

use super::{provenance, Outcome};
use crate::args::{GlobalArgs, LevyCheckArgs};
use crate::error::CliError;
use crate::output::Report;

pub const DEFAULT_DIMS: [usize; 5] = [2, 16, 128, 1024, 4096];
pub const DEFAULT_DELTAS: [f64; 5] = [0.01, 0.05, 0.1, 0.5, 1.0];

pub fn run(g: &GlobalArgs, a: &LevyCheckArgs) -> Result<Outcome, CliError> {
    let dims = if a.d.is_empty() {
        DEFAULT_DIMS.to_vec()
    } else {
        a.d.clone()
    };
    let deltas = if a.delta.is_empty() {
        DEFAULT_DELTAS.to_vec()
    } else {
        a.delta.clone()
    };
    let prov = provenance(g, "levy-check", None, json!({ "d": dims, "delta": deltas }));

    let mut report = Report::new("grid", &["d", "delta", "exact_tail", "levy_bound", "vacuous", "holds"]);
    let mut all = true;
    let mut vacuous = 0;
    for &d in &dims {
        for &delta in &deltas {
            let exact = two_sided_exact_tail(d, delta)?;
            let bound = overlap_tail_bound(d, delta)?;
            let holds = exact <= bound.value;
            all &= holds;
            vacuous += bound.vacuous as usize;
            report.row(vec![
                json!(d),
                json!(delta),
                json!(exact),
                json!(bound.value),
                json!(bound.vacuous),
                json!(holds),
            ]);
        }
    }
    report
        .summary("points", dims.len() * deltas.len())
        .summary("vacuous", vacuous)
        .summary("all_hold", all);
    Ok(Outcome::new(&report, &prov, g, all))
}
