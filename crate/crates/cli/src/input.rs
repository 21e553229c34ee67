//! Spectrum files and decoherence model configs.

use std::fs;
use std::path::Path;

use quasiortho::decoherence::{Dynamics, MeasurementModel};
use quasiortho::deff::Spectrum;
use quasiortho::C64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Read energies from one-per-line text (blank lines and `#` comments
/// allowed) or a JSON array. Unsorted input is an error, not silently sorted.
pub fn read_spectrum(path: &Path) -> Result<Spectrum, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let energies = parse_energies(&text).map_err(|m| CliError::io(format!("{}: {m}", path.display())))?;
    Spectrum::new(energies).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

pub fn parse_energies(text: &str) -> Result<Vec<f64>, String> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| format!("bad JSON array: {e}"));
    }
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let e: f64 = line
            .parse()
            .map_err(|_| format!("line {}: not a number: {line:?}", no + 1))?;
        out.push(e);
    }
    Ok(out)
}

/// Declarative form of a measurement model.
///
/// ```toml
/// env_qubits = 8
/// coefficients = [[0.6, 0.0], [0.0, 0.8]]   # optional, complex as [re, im]
/// pointers = 2                              # used when coefficients are absent
///
/// [dynamics]
/// kind = "chaotic-circuit"
/// depth = 16
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub env_qubits: u32,
    #[serde(default)]
    pub coefficients: Option<Vec<C64>>,
    #[serde(default)]
    pub pointers: Option<usize>,
    pub dynamics: Dynamics,
}

impl ModelConfig {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    pub fn build(&self) -> Result<MeasurementModel, CliError> {
        let coeffs = match (&self.coefficients, self.pointers) {
            (Some(c), None) => c.clone(),
            (Some(c), Some(k)) if c.len() == k => c.clone(),
            (Some(c), Some(k)) => {
                return Err(CliError::usage(format!("{} coefficients but pointers = {k}", c.len())));
            }
            (None, k) => {
                let k = k.unwrap_or(2);
                if k == 0 {
                    return Err(CliError::usage("pointers must be at least 2"));
                }
                vec![C64::new(1.0 / (k as f64).sqrt(), 0.0); k]
            }
        };
        Ok(MeasurementModel::new(coeffs, self.env_qubits, self.dynamics.clone())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energies_from_lines_and_json() {
        assert_eq!(parse_energies("0\n# c\n1.5\n\n2\n").unwrap(), vec![0.0, 1.5, 2.0]);
        assert_eq!(parse_energies(" [0, 1, 2.5]").unwrap(), vec![0.0, 1.0, 2.5]);
        assert!(parse_energies("0\nx\n").unwrap_err().contains("line 2"));
    }

    #[test]
    fn config_round_trip() {
        let text = "env_qubits = 6\ncoefficients = [[0.6, 0.0], [0.0, 0.8]]\n[dynamics]\nkind = \"chaotic-circuit\"\ndepth = 3\n";
        let cfg: ModelConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.dynamics, Dynamics::ChaoticCircuit { depth: 3 });
        let m = cfg.build().unwrap();
        assert_eq!(m.pointer_count(), 2);
        assert_eq!(m.coefficients()[1], C64::new(0.0, 0.8));
    }

    #[test]
    fn config_defaults_to_equal_weights() {
        let text = "env_qubits = 4\npointers = 3\n[dynamics]\nkind = \"exact-haar\"\n";
        let m = toml::from_str::<ModelConfig>(text).unwrap().build().unwrap();
        assert_eq!(m.pointer_count(), 3);
        assert_eq!(m.dynamics(), &Dynamics::ExactHaar { dense_unitaries: false });
    }

    #[test]
    fn single_pointer_rejected() {
        let text = "env_qubits = 4\npointers = 1\n[dynamics]\nkind = \"exact-haar\"\n";
        let err = toml::from_str::<ModelConfig>(text).unwrap().build().unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
