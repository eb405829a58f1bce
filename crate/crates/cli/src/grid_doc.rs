//! Grid files: comma-separated text with a mandatory header row and one line
//! per grid point, theta-major, all numbers at 17 significant digits.
//! Degenerate image points carry NaN in the image columns.

use std::fs;
use std::path::Path;

use spinpair::measurement::GridRow;

use crate::{fmt_f64, CliError};

pub const GRID_HEADER: &str = "theta1,phi1,theta2,phi2,norm2,axis_projection";

pub fn render_grid(rows: &[GridRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 160 + GRID_HEADER.len() + 1);
    out.push_str(GRID_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(row.theta1),
            fmt_f64(row.phi1),
            fmt_f64(row.theta2),
            fmt_f64(row.phi2),
            fmt_f64(row.norm2),
            fmt_f64(row.axis_projection)
        ));
    }
    out
}

pub fn parse_grid(text: &str) -> Result<Vec<GridRow>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header.trim() == GRID_HEADER => {}
        other => {
            return Err(CliError::Input(format!(
                "grid file: expected header '{GRID_HEADER}', got {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(CliError::Input(format!(
                "grid file row {}: expected 6 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let mut values = [0.0f64; 6];
        for (slot, field) in fields.iter().enumerate() {
            values[slot] = field.trim().parse::<f64>().map_err(|_| {
                CliError::Input(format!(
                    "grid file row {}: field {} is not a number",
                    lineno + 2,
                    slot + 1
                ))
            })?;
        }
        rows.push(GridRow {
            theta1: values[0],
            phi1: values[1],
            theta2: values[2],
            phi2: values[3],
            norm2: values[4],
            axis_projection: values[5],
        });
    }
    Ok(rows)
}

pub fn write_grid(path: &Path, rows: &[GridRow]) -> Result<(), CliError> {
    fs::write(path, render_grid(rows)).map_err(|e| {
        CliError::Input(format!("cannot write grid file {}: {e}", path.display()))
    })
}

pub fn read_grid(path: &Path) -> Result<Vec<GridRow>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Input(format!("cannot read grid file {}: {e}", path.display()))
    })?;
    parse_grid(&text)
}
