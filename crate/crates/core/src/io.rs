//! CSV ingestion and atomic file output.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Cell contents treated as missing.
pub const MISSING_TOKENS: [&str; 7] = ["", "NA", "N/A", "NaN", "nan", "null", "NULL"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NaPolicy {
    #[default]
    Fail,
    DropRows,
}

/// Which input columns play the roles of X, Y, Z, W and V.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnMapping {
    pub x_col: String,
    pub y_col: String,
    pub z_col: String,
    pub w_col: String,
    #[serde(default)]
    pub v_cols: Vec<String>,
    #[serde(default)]
    pub na_policy: NaPolicy,
}

impl Default for ColumnMapping {
    /// The layout written by the simulator, with one covariate.
    fn default() -> Self {
        ColumnMapping {
            x_col: "X".into(),
            y_col: "Y".into(),
            z_col: "Z".into(),
            w_col: "W".into(),
            v_cols: vec!["V1".into()],
            na_policy: NaPolicy::Fail,
        }
    }
}

impl ColumnMapping {
    pub fn validate(&self) -> Result<()> {
        for (field, name) in [
            ("mapping.x_col", &self.x_col),
            ("mapping.y_col", &self.y_col),
            ("mapping.z_col", &self.z_col),
            ("mapping.w_col", &self.w_col),
        ] {
            if name.trim().is_empty() {
                return Err(Error::config(field, "column name must not be empty"));
            }
        }
        let all = self.all_columns();
        for (i, a) in all.iter().enumerate() {
            if all[..i].contains(a) {
                return Err(Error::config("mapping", format!("column `{a}` is mapped twice")));
            }
        }
        Ok(())
    }

    fn all_columns(&self) -> Vec<&str> {
        let mut cols = vec![
            self.x_col.as_str(),
            self.y_col.as_str(),
            self.z_col.as_str(),
            self.w_col.as_str(),
        ];
        cols.extend(self.v_cols.iter().map(String::as_str));
        cols
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedData {
    pub data: Dataset,
    /// Data rows in the file, excluding the header.
    pub rows_read: usize,
    pub rows_dropped: usize,
}

fn is_missing(s: &str) -> bool {
    MISSING_TOKENS.contains(&s.trim())
}

/// Reads a header-first, comma-separated file into a [`Dataset`], keeping
/// the original row order.
pub fn load_dataset(path: &Path, mapping: &ColumnMapping) -> Result<LoadedData> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_dataset(file, mapping).map_err(|e| match e {
        Error::Csv(_) | Error::Parse { .. } | Error::InvalidData(_) => {
            e.context(path.display().to_string())
        }
        other => other,
    })
}

/// [`load_dataset`] on any reader.
pub fn read_dataset<R: std::io::Read>(reader: R, mapping: &ColumnMapping) -> Result<LoadedData> {
    mapping.validate()?;
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers()?.clone();
    let names = mapping.all_columns();
    let mut positions = Vec::with_capacity(names.len());
    for name in &names {
        let pos = header
            .iter()
            .position(|h| h.trim() == *name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))?;
        positions.push(pos);
    }

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    let mut rows_read = 0;
    let mut rows_dropped = 0;
    let mut values = vec![0.0; names.len()];
    for record in rdr.records() {
        let record = record?;
        rows_read += 1;
        let line = record.position().map_or(rows_read as u64 + 1, |p| p.line());
        let mut missing = false;
        for (k, (&pos, name)) in positions.iter().zip(&names).enumerate() {
            let raw = record.get(pos).unwrap_or("");
            if is_missing(raw) {
                if mapping.na_policy == NaPolicy::Fail {
                    return Err(Error::InvalidData(format!(
                        "missing value in column `{name}` at line {line} (set na_policy to drop_rows to skip such rows)"
                    )));
                }
                missing = true;
                continue;
            }
            let v: f64 = raw.trim().parse().map_err(|_| Error::Parse {
                line,
                column: name.to_string(),
                value: raw.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    column: name.to_string(),
                    value: raw.to_string(),
                });
            }
            values[k] = v;
        }
        if missing {
            rows_dropped += 1;
            continue;
        }
        for (col, v) in columns.iter_mut().zip(&values) {
            col.push(*v);
        }
    }
    if columns[0].is_empty() {
        return Err(Error::EmptyAfterFilter {
            dropped: rows_dropped,
        });
    }
    let v = columns.split_off(4);
    let mut it = columns.into_iter();
    let (x, y, z, w) = (
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    );
    let data = Dataset::new(x, y, z, w, v, mapping.v_cols.clone())?;
    Ok(LoadedData {
        data,
        rows_read,
        rows_dropped,
    })
}

/// Writes `bytes` to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
