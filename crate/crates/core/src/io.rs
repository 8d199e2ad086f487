//! Shared text I/O helpers for the CSV artifacts.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Scientific notation with 17 significant digits; parses back bit-exactly.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Write a file, creating missing parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Parse a finite decimal number.
pub(crate) fn parse_finite(field: &str, path: &Path, line: usize) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| parse_error(path, line, format!("not a number: {:?}", field.trim())))?;
    if !v.is_finite() {
        return Err(parse_error(path, line, format!("non-finite value {v}")));
    }
    Ok(v)
}

/// Parse numeric CSV rows under the given header. Lines starting with `#`
/// and blank lines are skipped. Returns `(line number, fields)` pairs.
pub fn parse_csv_rows(text: &str, path: &Path, header: &[&str]) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            let got: Vec<&str> = line.split(',').map(str::trim).collect();
            if got != header {
                return Err(parse_error(
                    path,
                    line_no,
                    format!("expected header {:?}, found {:?}", header.join(","), line),
                ));
            }
            seen_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(parse_error(
                path,
                line_no,
                format!("expected {} columns, found {}", header.len(), fields.len()),
            ));
        }
        let values = fields
            .iter()
            .map(|f| parse_finite(f, path, line_no))
            .collect::<Result<Vec<_>>>()?;
        rows.push((line_no, values));
    }
    if !seen_header {
        return Err(parse_error(path, 1, "missing header line"));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_round_trips() {
        for x in [
            0.1,
            -1.0 / 3.0,
            1e-300,
            6.02214076e23,
            f64::MIN_POSITIVE,
            0.0,
        ] {
            let back: f64 = format_f64(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn csv_errors_name_line() {
        let p = Path::new("t.csv");
        let err = parse_csv_rows("r,value\n1,2\n3\n", p, &["r", "value"]).unwrap_err();
        assert!(err.to_string().contains(":3:"), "{err}");
        let err = parse_csv_rows("r,value\n1,inf\n", p, &["r", "value"]).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
        let err = parse_csv_rows("r,value\n1,abc\n", p, &["r", "value"]).unwrap_err();
        assert!(err.to_string().contains("not a number"));
        assert!(parse_csv_rows("x,y\n", p, &["r", "value"]).is_err());
        assert!(parse_csv_rows("r,value\n", p, &["r", "value"])
            .unwrap()
            .is_empty());
    }
}
