use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::ExperimentConfig;
use crate::error::{Error, Result};

/// Seventeen significant digits; non-finite values become empty fields.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

/// Rows of already formatted fields under a header.
#[derive(Clone, Debug, Default)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Leading integer columns followed by floats.
    pub fn push_mixed(&mut self, ints: &[u64], floats: &[f64]) {
        let mut row: Vec<String> = ints.iter().map(u64::to_string).collect();
        row.extend(floats.iter().map(|&x| format_float(x)));
        self.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Config(format!("csv buffer: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// File-system friendly label for a named-state spec.
pub fn state_label(spec: &str) -> String {
    spec.chars()
        .map(|c| match c {
            ':' => '-',
            '+' => '_',
            c if c.is_ascii_alphanumeric() || c == '_' || c == '-' => c,
            _ => '_',
        })
        .collect()
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    scenario: String,
    parameters: &'a ExperimentConfig,
    files: Vec<String>,
    wall_clock_seconds: f64,
}

/// Write `manifest.json` next to the outputs.
pub fn write_manifest(
    dir: &Path,
    cfg: &ExperimentConfig,
    files: &[PathBuf],
    seconds: f64,
) -> Result<PathBuf> {
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        scenario: cfg.scenario.to_string(),
        parameters: cfg,
        files: files
            .iter()
            .map(|p| {
                p.file_name()
                    .map(|f| f.to_string_lossy().into_owned())
                    .unwrap_or_default()
            })
            .collect(),
        wall_clock_seconds: seconds,
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest)?;
    fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(f64::INFINITY), "");
        assert_eq!(format_float(f64::NAN), "");
        let x = 0.123_456_789_012_345_68;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn table_uses_lf() {
        let mut t = Table::new(["t", "x"]);
        t.push_mixed(&[0], &[1.5]);
        t.push_mixed(&[1], &[f64::NAN]);
        assert_eq!(
            t.to_csv_string().unwrap(),
            "t,x\n0,1.5000000000000000e0\n1,\n"
        );
    }

    #[test]
    fn labels() {
        assert_eq!(
            state_label("glider_bc:0+double_wall:10"),
            "glider_bc-0_double_wall-10"
        );
        assert_eq!(state_label("A"), "A");
    }
}
