//! Delimited numeric text: one example per row, comma- or
//! whitespace-separated, with an optional header row.

use crate::error::{Error, Result};
use crate::sample::Sample;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Column names when the first row was not numeric.
    pub header: Option<Vec<String>>,
    pub sample: Sample,
}

/// Splits on commas when the line has any, on whitespace otherwise.
fn fields(line: &str, comma: bool) -> Vec<&str> {
    if comma {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Parses delimited numeric text.
///
/// Blank lines and lines starting with `#` are skipped. The delimiter is
/// fixed by the first content line. That line is a header when any of its
/// fields is not a number. NaN and infinite values are errors, as are
/// ragged rows.
pub fn parse_table(text: &str) -> Result<Table> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let Some(&(_, first)) = lines.peek() else {
        return Err(Error::Parse {
            line: 0,
            message: "no data rows".into(),
        });
    };
    let comma = first.contains(',');
    let header = if fields(first, comma).iter().any(|f| f.parse::<f64>().is_err()) {
        lines.next();
        Some(fields(first, comma).iter().map(|s| s.to_string()).collect::<Vec<_>>())
    } else {
        None
    };

    let mut cols = header.as_ref().map(Vec::len);
    let mut data = Vec::new();
    let mut rows = 0;
    for (line, text) in lines {
        let f = fields(text, comma);
        match cols {
            None => cols = Some(f.len()),
            Some(c) if c != f.len() => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {c} fields, found {}", f.len()),
                })
            }
            _ => {}
        }
        for tok in f {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line,
                message: format!("'{tok}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("non-finite value '{tok}'"),
                });
            }
            data.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::Parse {
            line: 0,
            message: "no data rows".into(),
        });
    }
    Ok(Table {
        header,
        sample: Sample::new(rows, cols.unwrap_or(0), data)?,
    })
}
