//! File formats and shared helpers behind the `spinpair` binary.
//!
//! State files are line-based key/value documents, grids are plain CSV with a
//! fixed header; both render numbers with 17 significant digits so that a
//! write/read round trip is bit-exact.

pub mod grid_doc;
pub mod state_doc;

use spinpair::verify::SuiteReport;

/// Errors of the command-line layer, split by exit code: input problems exit
/// with 2, verification failures with 1.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(msg) | CliError::Verification(msg) => msg,
        }
    }
}

impl From<spinpair::Error> for CliError {
    fn from(err: spinpair::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

/// Renders a float with 17 significant digits, enough to reparse the exact
/// same bits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Exit code for a verification run: 0 when every suite passed, 1 otherwise.
pub fn exit_code_for_reports(reports: &[SuiteReport]) -> u8 {
    if reports.iter().all(SuiteReport::passed) {
        0
    } else {
        1
    }
}
