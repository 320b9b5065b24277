//! Sample files: one observation per line, comma-separated coordinates,
//! `#` comment lines, no header.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::sphere::{DirectionalSample, UnitVector, UNIT_NORM_TOLERANCE};

/// Problems with a sample file. Line numbers are 1-based.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: norm {norm} is not within 1e-8 of one (normalization not requested)")]
    Norm { line: u64, norm: f64 },
    #[error("line {line}: expected {expected} coordinates, found {found}")]
    DimInconsistent { line: u64, expected: usize, found: usize },
    #[error("no observations in input")]
    Empty,
}

impl DataError {
    pub fn line(&self) -> Option<u64> {
        match self {
            DataError::Parse { line, .. } | DataError::Norm { line, .. } | DataError::DimInconsistent { line, .. } => {
                Some(*line)
            }
            _ => None,
        }
    }
}

/// Parses sample text. Rows off the unit sphere by more than 1e-8 are
/// rejected unless `normalize` is set, in which case they are rescaled.
pub fn parse_sample(text: &str, normalize: bool) -> Result<DirectionalSample, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    let mut dim = None;
    for record in reader.records() {
        let record = record.map_err(|e| DataError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let xs = record
            .iter()
            .map(|f| {
                f.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| DataError::Parse {
                    line,
                    message: format!("'{f}' is not a finite number"),
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        match dim {
            None if xs.len() < 2 => {
                return Err(DataError::Parse {
                    line,
                    message: format!("need at least 2 coordinates, found {}", xs.len()),
                })
            }
            None => dim = Some(xs.len()),
            Some(d) if d != xs.len() => {
                return Err(DataError::DimInconsistent {
                    line,
                    expected: d,
                    found: xs.len(),
                })
            }
            Some(_) => {}
        }
        let norm = xs.iter().map(|x| x * x).sum::<f64>().sqrt();
        let off_sphere = (norm - 1.0).abs() > UNIT_NORM_TOLERANCE;
        if norm < 1e-300 || (off_sphere && !normalize) {
            return Err(DataError::Norm { line, norm });
        }
        let point = UnitVector::from_components(&xs).map_err(|_| DataError::Norm { line, norm })?;
        points.push(point);
    }
    if points.is_empty() {
        return Err(DataError::Empty);
    }
    DirectionalSample::new(points).map_err(|e| DataError::Parse {
        line: 0,
        message: e.to_string(),
    })
}

/// Reads and parses a sample file.
pub fn read_sample(path: impl AsRef<Path>, normalize: bool) -> Result<DirectionalSample, DataError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| DataError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_sample(&text, normalize)
}

/// Formats a sample with 17 significant digits per coordinate.
pub fn format_sample(sample: &DirectionalSample) -> String {
    let mut out = String::with_capacity(sample.len() * sample.dim() * 24);
    for row in sample.rows() {
        let fields: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn write_sample(sample: &DirectionalSample, path: impl AsRef<Path>) -> std::io::Result<()> {
    fs::write(path, format_sample(sample))
}

/// Parses a comma-separated list of reals, e.g. a `--theta` argument.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>, DataError> {
    s.split(',')
        .map(|f| {
            let f = f.trim();
            f.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| DataError::Parse {
                line: 1,
                message: format!("'{f}' is not a finite number"),
            })
        })
        .collect()
}

/// Parses a labels file: one `1` or `2` per line, `#` comments allowed.
pub fn parse_labels(text: &str) -> Result<Vec<crate::classification::Population>, DataError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let label = line
            .parse::<u8>()
            .ok()
            .and_then(|v| crate::classification::Population::from_u8(v).ok())
            .ok_or_else(|| DataError::Parse {
                line: i as u64 + 1,
                message: format!("label '{line}' is not 1 or 2"),
            })?;
        out.push(label);
    }
    Ok(out)
}
