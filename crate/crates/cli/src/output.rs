//! Output formatting: 6-digit human-diffable defaults with a
//! full-precision escape hatch for JSON.

use std::path::Path;

use crate::CliError;

/// Fixed 6-digit rendering used in CSV columns and reports.
pub fn sig6(x: f64) -> String {
    format!("{x:.6}")
}

/// Round through the 6-digit rendering so JSON matches CSV.
pub fn round6(x: f64) -> f64 {
    sig6(x).parse().expect("formatted float parses")
}

pub fn json_number(x: f64, full_precision: bool) -> serde_json::Value {
    let v = if full_precision { x } else { round6(x) };
    serde_json::Value::from(v)
}

pub fn write_text(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
