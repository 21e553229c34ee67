mod decohere;
mod deff;
mod levy;
mod overlap_dist;
mod packing;

use crate::args::{Cli, Command, GlobalArgs, PackingMode};
use crate::error::CliError;
use crate::output::{emit, Provenance, Report};

/// A finished command: its report and whether its check passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

impl Outcome {
    fn new(report: &Report, prov: &Provenance, g: &GlobalArgs, pass: bool) -> Self {
        Outcome {
            text: report.render(prov, g.format),
            pass,
        }
    }
}

/// Run the parsed command line, write its report, and return the exit code.
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let g = &cli.global;
    if let Some(t) = g.threads {
        if t == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let outcome = match &cli.command {
        Command::OverlapDist(a) => overlap_dist::run(g, a)?,
        Command::LevyCheck(a) => levy::run(g, a)?,
        Command::Packing {
            mode: PackingMode::Bound { d, qubits, eps },
        } => packing::bound(g, *d, *qubits, *eps)?,
        Command::Packing {
            mode: PackingMode::Build(a),
        } => packing::build(g, a)?,
        Command::Decohere(a) => decohere::run(g, a)?,
        Command::Deff(a) => deff::run(g, a)?,
    };
    emit(g.output.as_deref(), &outcome.text)?;
    Ok(if outcome.pass { 0 } else { 1 })
}

fn resolve_seed(g: &GlobalArgs) -> u64 {
    g.seed.unwrap_or_else(rand::random)
}

fn provenance(g: &GlobalArgs, command: &str, seed: Option<u64>, parameters: serde_json::Value) -> Provenance {
    Provenance::new(command, seed, parameters, !g.no_timestamp)
}
