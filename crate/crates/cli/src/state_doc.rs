//! State files: a line-based key/value document with four amplitude pairs.
//!
//! ```text
//! # two-qubit state, basis order |00>, |01>, |10>, |11>
//! label = singlet
//! amp00 = 0.0000000000000000e0 0.0000000000000000e0
//! amp01 = 7.0710678118654746e-1 0.0000000000000000e0
//! amp10 = -7.0710678118654746e-1 0.0000000000000000e0
//! amp11 = 0.0000000000000000e0 0.0000000000000000e0
//! ```
//!
//! An optional `normalize = true` line asks the loader to rescale the
//! amplitudes instead of requiring unit norm. Blank lines and `#` comments
//! are ignored; unknown or duplicate keys are rejected by name.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use spinpair::entangle::TwoQubitState;
use spinpair::linalg::Vector4;

use crate::{fmt_f64, CliError};

const AMP_KEYS: [&str; 4] = ["amp00", "amp01", "amp10", "amp11"];

/// Raw content of a state file. Amplitudes are kept as the exact `f64` pairs
/// read or written, in basis order `|00>, |01>, |10>, |11>`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateDocument {
    pub label: Option<String>,
    pub normalize: bool,
    pub amplitudes: [[f64; 2]; 4],
}

impl StateDocument {
    pub fn from_state(psi: &TwoQubitState, label: Option<String>) -> Self {
        let a = psi.amplitudes().0;
        StateDocument {
            label,
            normalize: false,
            amplitudes: [
                [a[0].re, a[0].im],
                [a[1].re, a[1].im],
                [a[2].re, a[2].im],
                [a[3].re, a[3].im],
            ],
        }
    }

    /// Builds the state, enforcing unit norm within `tolerance` unless the
    /// document asks for normalization.
    pub fn to_state(&self, tolerance: f64) -> Result<TwoQubitState, CliError> {
        let amps = Vector4::new([
            Complex64::new(self.amplitudes[0][0], self.amplitudes[0][1]),
            Complex64::new(self.amplitudes[1][0], self.amplitudes[1][1]),
            Complex64::new(self.amplitudes[2][0], self.amplitudes[2][1]),
            Complex64::new(self.amplitudes[3][0], self.amplitudes[3][1]),
        ]);
        if !amps.is_finite() {
            return Err(CliError::Input(
                "state file: non-finite amplitude".to_string(),
            ));
        }
        if !self.normalize {
            let defect = (amps.norm2() - 1.0).abs();
            if defect > tolerance {
                return Err(CliError::Input(format!(
                    "state file: |norm^2 - 1| = {defect:.3e} exceeds tolerance {tolerance:.1e}; \
                     fix the amplitudes or set normalize = true"
                )));
            }
        }
        TwoQubitState::from_amplitudes_normalized(amps)
            .map_err(|e| CliError::Input(format!("state file: {e}")))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut label = None;
        let mut normalize = None;
        let mut amplitudes: [Option<[f64; 2]>; 4] = [None; 4];

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Input(format!(
                    "state file line {}: expected 'key = value', got '{line}'",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "label" => {
                    if label.replace(value.to_string()).is_some() {
                        return Err(CliError::Input("state file: duplicate field label".into()));
                    }
                }
                "normalize" => {
                    let flag = match value {
                        "true" => true,
                        "false" => false,
                        other => {
                            return Err(CliError::Input(format!(
                                "state file: field normalize must be true or false, got '{other}'"
                            )))
                        }
                    };
                    if normalize.replace(flag).is_some() {
                        return Err(CliError::Input(
                            "state file: duplicate field normalize".into(),
                        ));
                    }
                }
                _ => match AMP_KEYS.iter().position(|&k| k == key) {
                    Some(slot) => {
                        let pair = parse_pair(key, value)?;
                        if amplitudes[slot].replace(pair).is_some() {
                            return Err(CliError::Input(format!(
                                "state file: duplicate field {key}"
                            )));
                        }
                    }
                    None => {
                        return Err(CliError::Input(format!(
                            "state file: unknown field '{key}'"
                        )))
                    }
                },
            }
        }

        let mut out = [[0.0; 2]; 4];
        for (slot, key) in AMP_KEYS.iter().enumerate() {
            out[slot] = amplitudes[slot].ok_or_else(|| {
                CliError::Input(format!("state file: missing field {key}"))
            })?;
        }
        Ok(StateDocument {
            label,
            normalize: normalize.unwrap_or(false),
            amplitudes: out,
        })
    }

    pub fn render(&self) -> String {
        let mut out = String::from("# two-qubit state, basis order |00>, |01>, |10>, |11>\n");
        if let Some(label) = &self.label {
            out.push_str(&format!("label = {label}\n"));
        }
        if self.normalize {
            out.push_str("normalize = true\n");
        }
        for (slot, key) in AMP_KEYS.iter().enumerate() {
            out.push_str(&format!(
                "{key} = {} {}\n",
                fmt_f64(self.amplitudes[slot][0]),
                fmt_f64(self.amplitudes[slot][1])
            ));
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::Input(format!("cannot read state file {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.render()).map_err(|e| {
            CliError::Input(format!("cannot write state file {}: {e}", path.display()))
        })
    }
}

fn parse_pair(key: &str, value: &str) -> Result<[f64; 2], CliError> {
    let mut parts = value.split_whitespace();
    let mut next = |which: &str| -> Result<f64, CliError> {
        parts
            .next()
            .ok_or_else(|| {
                CliError::Input(format!(
                    "state file: field {key} needs '<re> <im>', missing {which} part"
                ))
            })?
            .parse::<f64>()
            .map_err(|_| {
                CliError::Input(format!(
                    "state file: field {key}: cannot parse {which} part as a number"
                ))
            })
    };
    let re = next("real")?;
    let im = next("imaginary")?;
    if parts.next().is_some() {
        return Err(CliError::Input(format!(
            "state file: field {key} has trailing tokens"
        )));
    }
    Ok([re, im])
}
