//! Record rendering and atomic artifact writing. Every byte of output is
//! accumulated in memory first; files are only created once the whole run
//! has succeeded, so a failing run leaves nothing partial behind.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::Value;

use crate::args::Format;
use crate::error::CliError;

/// Everything a completed command wants to persist: the main record in both
/// renderings plus any side files (traces, state dumps).
pub struct CommandOutput {
    pub record: Value,
    pub csv: CsvRecord,
    pub extra_files: Vec<(PathBuf, String)>,
}

/// One header/value row pair, built in column order.
#[derive(Default)]
pub struct CsvRecord {
    header: Vec<String>,
    row: Vec<String>,
}

impl CsvRecord {
    pub fn push(&mut self, name: &str, value: impl std::fmt::Display) {
        self.header.push(name.to_string());
        self.row.push(value.to_string());
    }

    /// Sequences become semicolon-joined cells so the table stays
    /// comma-clean.
    pub fn push_list<T: std::fmt::Display>(&mut self, name: &str, values: &[T]) {
        let joined = values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(";");
        self.push(name, joined);
    }

    pub fn render(&self) -> String {
        let mut text = String::new();
        let _ = writeln!(text, "{}", self.header.join(","));
        let _ = writeln!(text, "{}", self.row.join(","));
        text
    }
}

/// The record with the measured duration appended, in the chosen format.
pub fn render_record(output: &mut CommandOutput, format: Format, duration_ms: f64) -> String {
    if let Value::Object(map) = &mut output.record {
        map.insert("duration_ms".to_string(), Value::from(duration_ms));
    }
    match format {
        Format::Json => {
            let mut text =
                serde_json::to_string_pretty(&output.record).expect("record serializes");
            text.push('\n');
            text
        }
        Format::Csv => {
            output.csv.push("duration_ms", duration_ms);
            output.csv.render()
        }
    }
}

/// Writes the record (to the path or standard output) and the side files.
pub fn write_artifacts(
    record_text: &str,
    output_path: Option<&PathBuf>,
    extra_files: &[(PathBuf, String)],
) -> Result<(), CliError> {
    for (path, contents) in extra_files {
        std::fs::write(path, contents)
            .map_err(|e| CliError::file(&path.display().to_string(), e))?;
    }
    match output_path {
        Some(path) => std::fs::write(path, record_text)
            .map_err(|e| CliError::file(&path.display().to_string(), e))?,
        None => print!("{record_text}"),
    }
    Ok(())
}
