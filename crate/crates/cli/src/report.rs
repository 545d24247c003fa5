//! Tabular reports as CSV or JSON, written atomically.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use recip_core::lfunc::TAIL_TARGET;
use recip_core::mellin::{ContourSpec, KernelFamily};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    /// Integers as integers; floats as the shortest decimal that reads
    /// back to the same bits.
    pub fn to_csv(self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:?}"),
        }
    }

    pub fn to_json(self) -> Value {
        match self {
            Cell::Int(i) => Value::from(i),
            Cell::Float(x) => serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_csv()))
                .expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    pub fn rows_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(k, c)| (k.to_string(), c.to_json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Numerical settings that a report's numbers depend on.
pub fn suite_versions(family: &KernelFamily) -> Value {
    let v = family.contour();
    let k_abscissa = ContourSpec::K_DEFAULT.abscissa;
    json!({
        "recip": env!("CARGO_PKG_VERSION"),
        "kernel_shape": family.shape_name(),
        "v_contour": {"abscissa": v.abscissa, "height": v.height, "step": v.step},
        "k_contour": {"abscissa": k_abscissa, "height": v.height, "step": v.step},
        "tail_target": TAIL_TARGET,
    })
}

/// JSON text with a trailing newline.
pub fn json_bytes(value: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("values are finite or null");
    out.push(b'\n');
    out
}

/// Writes `bytes` to `path` through a temporary file in the same
/// directory, so a failed run never leaves a partial report behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes to `path` if given, otherwise to stdout.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> std::io::Result<()> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_round_trip() {
        let t = Table {
            columns: vec!["q", "value"],
            rows: vec![
                vec![Cell::Int(7), Cell::Float(0.1)],
                vec![Cell::Int(11), Cell::Float(-1.25e-13)],
            ],
        };
        let text = String::from_utf8(t.to_csv()).unwrap();
        assert_eq!(text, "q,value\n7,0.1\n11,-1.25e-13\n");
        for line in text.lines().skip(1) {
            let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert!(v == 0.1 || v == -1.25e-13);
        }
    }

    #[test]
    fn json_rows_keep_column_order() {
        let t = Table {
            columns: vec!["z", "a"],
            rows: vec![vec![Cell::Int(1), Cell::Float(f64::NAN)]],
        };
        assert_eq!(
            serde_json::to_string(&t.rows_json()).unwrap(),
            r#"[{"z":1,"a":null}]"#
        );
    }

    #[test]
    fn atomic_write_replaces_whole_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_atomic(&path, b"one\n").unwrap();
        write_atomic(&path, b"two\n").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
