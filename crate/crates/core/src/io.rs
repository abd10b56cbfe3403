//! Comma-delimited matrix text files.
//!
//! One row per line, entries separated by commas, decimal notation with an
//! optional exponent, no header and no trailing delimiter. Values are written
//! in the shortest form that parses back to the identical `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let lines: Vec<&str> = text.lines().collect();
    let end = lines
        .iter()
        .rposition(|l| !l.trim().is_empty())
        .map_or(0, |p| p + 1);
    if end == 0 {
        return Err(Error::Parse {
            line: 1,
            message: "empty input".into(),
        });
    }

    let mut cols = 0;
    let mut data = Vec::new();
    for (idx, line) in lines[..end].iter().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "blank line inside matrix".into(),
            });
        }
        let mut count = 0;
        for token in line.split(',') {
            let token = token.trim();
            let value: f64 = token.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("non-numeric token {token:?}"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("non-finite value {token:?}"),
                });
            }
            data.push(value);
            count += 1;
        }
        if idx == 0 {
            cols = count;
        } else if count != cols {
            return Err(Error::Parse {
                line: line_no,
                message: format!("ragged row: expected {cols} entries, found {count}"),
            });
        }
    }
    Matrix::new(end, cols, data)
}

/// Splits text on blank lines and parses each block as a matrix.
pub fn parse_blocks(text: &str) -> Result<Vec<Matrix>> {
    let mut blocks = Vec::new();
    let mut current = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                blocks.push(parse_matrix(&current)?);
                current.clear();
            }
        } else {
            current.push_str(line);
            current.push('\n');
        }
    }
    if !current.is_empty() {
        blocks.push(parse_matrix(&current)?);
    }
    Ok(blocks)
}

pub fn format_value(x: f64) -> String {
    let ax = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&ax) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn format_row(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| format_value(v))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn format_matrix(a: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..a.rows() {
        let _ = writeln!(out, "{}", format_row(a.row(i)));
    }
    out
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    parse_matrix(&fs::read_to_string(path)?)
}

pub fn write_matrix(a: &Matrix, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_matrix(a))?;
    Ok(())
}
