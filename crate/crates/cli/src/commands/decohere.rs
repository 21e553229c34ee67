use quasiortho::decoherence::{suppression_experiment, Dynamics};
use quasiortho::{RngStream, C64};
use serde_json::json;

use super::{provenance, resolve_seed, Outcome};
use crate::args::{DecohereArgs, DynamicsKind, GlobalArgs};
use crate::error::CliError;
use crate::input::ModelConfig;
use crate::output::Report;

pub const DEFAULT_TRIALS: usize = 200;

pub fn run(g: &GlobalArgs, a: &DecohereArgs) -> Result<Outcome, CliError> {
    let config = match &a.config {
        Some(path) => ModelConfig::read(path)?,
        None => config_from_flags(a)?,
    };
    let model = config.build()?;
    let trials = g.trials.unwrap_or(DEFAULT_TRIALS);
    let seed = resolve_seed(g);
    let params = json!({ "model": config, "trials": trials });
    let prov = provenance(g, "decohere", Some(seed), params);

    let rec = suppression_experiment(&model, trials, &RngStream::new(seed, 0))?;
    let mut r = Report::new("rows", &["trial", "pair", "squared_overlap", "max_coherence"]);
    r.summary("dynamics", &rec.dynamics)
        .summary("env_qubits", rec.env_qubits)
        .summary("pointer_count", rec.pointer_count)
        .summary("depth", rec.depth)
        .summary("trials", rec.trials)
        .summary("d_eff", rec.d_eff)
        .summary("mean_overlap_sq", rec.mean_overlap_sq)
        .summary("var_overlap_sq", rec.var_overlap_sq)
        .summary("se_overlap_sq", rec.se_overlap_sq)
        .summary("mean_max_coherence", rec.mean_max_coherence)
        .summary("var_max_coherence", rec.var_max_coherence)
        .summary("predicted_overlap_sq", rec.predicted_overlap_sq)
        .summary("predicted_amplitude", rec.predicted_amplitude)
        .summary("typicality_ratio", rec.typicality_ratio)
        .summary("atypical", rec.atypical);
    for row in &rec.rows {
        for p in &row.pairs {
            r.row(vec![
                json!(row.trial),
                json!(format!("{}-{}", p.i, p.j)),
                json!(p.squared_overlap),
                json!(row.max_coherence),
            ]);
        }
    }
    r.csv_table_only().extra("record", &rec);
    Ok(Outcome::new(&r, &prov, g, !(a.check && rec.atypical)))
}

fn config_from_flags(a: &DecohereArgs) -> Result<ModelConfig, CliError> {
    let n = a.n.ok_or_else(|| CliError::usage("--n is required without --config"))?;
    let kind = a.dynamics.unwrap_or(if a.theta.is_empty() {
        DynamicsKind::ExactHaar
    } else {
        DynamicsKind::Integrable
    });
    let k =
        a.k.or((!a.theta.is_empty()).then_some(a.theta.len()))
            .or((!a.coefficients.is_empty()).then_some(a.coefficients.len()))
            .unwrap_or(2);
    if k < 2 {
        return Err(CliError::usage("--k must be at least 2"));
    }
    for (flag, len) in [("--theta", a.theta.len()), ("--coefficients", a.coefficients.len())] {
        if len != 0 && len != k {
            return Err(CliError::usage(format!("{flag} has {len} values but k = {k}")));
        }
    }
    if a.depth.is_some() && kind != DynamicsKind::Chaotic {
        return Err(CliError::usage("--depth applies to chaotic dynamics only"));
    }
    if !a.theta.is_empty() && kind != DynamicsKind::Integrable {
        return Err(CliError::usage("--theta applies to integrable dynamics only"));
    }
    if a.dense_unitaries && kind != DynamicsKind::ExactHaar {
        return Err(CliError::usage("--dense-unitaries applies to exact-haar dynamics only"));
    }
    let dynamics = match kind {
        DynamicsKind::ExactHaar => Dynamics::ExactHaar {
            dense_unitaries: a.dense_unitaries,
        },
        DynamicsKind::Chaotic => match a.depth {
            Some(depth) => Dynamics::ChaoticCircuit { depth },
            None => Dynamics::chaotic_default(n),
        },
        DynamicsKind::Integrable if a.theta.is_empty() => {
            return Err(CliError::usage("integrable dynamics needs --theta"));
        }
        DynamicsKind::Integrable => Dynamics::IntegrableProduct {
            angles: a.theta.clone(),
        },
    };
    let coefficients = if a.coefficients.is_empty() {
        None
    } else {
        let norm = a.coefficients.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(CliError::usage("--coefficients must have a finite, nonzero norm"));
        }
        Some(a.coefficients.iter().map(|c| C64::new(c / norm, 0.0)).collect())
    };
    Ok(ModelConfig {
        env_qubits: n,
        coefficients,
        pointers: Some(k),
        dynamics,
    })
}
