use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{FitError, Result};
use crate::linalg::Matrix;

/// Reads a rectangular numeric CSV file into a matrix, one row per record.
///
/// A first row containing any non-numeric cell is taken as a header and
/// skipped. A header made only of numbers is indistinguishable from data and
/// is read as data.
pub fn parse_csv(path: &Path) -> Result<Matrix> {
    let file = File::open(path).map_err(|e| FitError::Io(format!("{}: {e}", path.display())))?;
    parse_csv_reader(file)
}

pub fn parse_csv_str(text: &str) -> Result<Matrix> {
    parse_csv_reader(text.as_bytes())
}

fn parse_cell(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn parse_csv_reader<R: Read>(input: R) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let mut width: Option<usize> = None;
    let mut values = Vec::new();
    let mut rows = 0;
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            FitError::Format {
                line,
                col: None,
                detail: e.to_string(),
            }
        })?;
        let line = record.position().map_or(idx + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if idx == 0 && record.iter().any(|c| parse_cell(c).is_none()) {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(FitError::Format {
                    line,
                    col: None,
                    detail: format!("expected {w} fields, found {}", record.len()),
                })
            }
            Some(_) => {}
        }
        for (c, cell) in record.iter().enumerate() {
            let v = parse_cell(cell).ok_or_else(|| FitError::Format {
                line,
                col: Some(c + 1),
                detail: format!("not a finite number: {cell:?}"),
            })?;
            values.push(v);
        }
        rows += 1;
    }
    let cols = match width {
        Some(w) if rows > 0 => w,
        _ => return Err(FitError::EmptyData("no numeric rows in input".into())),
    };
    Matrix::from_row_major(rows, cols, &values)
}
