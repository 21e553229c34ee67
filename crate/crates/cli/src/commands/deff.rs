use quasiortho::deff::{microcanonical_dim, suppression_scale, EffectiveDimensionReport, Spectrum};
use serde_json::json;

use super::{provenance, Outcome};
use crate::args::{DeffArgs, GlobalArgs};
use crate::error::CliError;
use crate::input::read_spectrum;
use crate::output::Report;

pub fn run(g: &GlobalArgs, a: &DeffArgs) -> Result<Outcome, CliError> {
    let (spectrum, source) = match (&a.spectrum, a.popcount) {
        (Some(path), _) => (read_spectrum(path)?, json!({ "file": path.display().to_string() })),
        (None, Some(n)) => (Spectrum::popcount(n)?, json!({ "popcount": n })),
        (None, None) => return Err(CliError::usage("one of --spectrum or --popcount is required")),
    };
    let params = json!({ "spectrum": source, "energy": a.energy, "width": a.width });
    let prov = provenance(g, "deff", None, params);

    let d = microcanonical_dim(&spectrum, a.energy, a.width)?;
    let mut r = Report::new(
        "shell",
        &[
            "spectrum_size",
            "energy",
            "width",
            "d_eff",
            "entropy",
            "overlap_scale",
            "amplitude_scale",
        ],
    );
    r.summary("spectrum_size", spectrum.len()).summary("d_eff", d);
    let report = EffectiveDimensionReport::microcanonical(&spectrum, a.energy, a.width)?;
    let (entropy, scales) = match report {
        Some(rep) => {
            let (o, amp) = suppression_scale(rep.d_eff)?;
            r.summary("entropy", rep.entropy)
                .summary("overlap_scale", o)
                .summary("amplitude_scale", amp);
            (Some(rep.entropy), Some((o, amp)))
        }
        None => {
            let msg = format!(
                "window [{}, {}) contains no levels; zero-dimensional shell, entropy undefined",
                a.energy,
                a.energy + a.width
            );
            eprintln!("warning: {msg}");
            r.summary("warning", msg);
            (None, None)
        }
    };
    r.row(vec![
        json!(spectrum.len()),
        json!(a.energy),
        json!(a.width),
        json!(d),
        json!(entropy),
        json!(scales.map(|s| s.0)),
        json!(scales.map(|s| s.1)),
    ]);
    r.csv_table_only();
    Ok(Outcome::new(&r, &prov, g, true))
}
