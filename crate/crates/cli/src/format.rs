//! The plain-text matrix file.
//!
//! ```text
//! group=GOplus l=1 field=5 similitude=0
//! 0 4
//! 4 0
//! ```
//!
//! Blank lines and `#` comments are ignored. Several records may follow one
//! another; each starts with its own header.

use steinberg::{Family, Field, GroupDescriptor, Matrix};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    At { line: usize, msg: String },
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub descriptor: GroupDescriptor,
    pub matrix: Matrix,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn parse_header(line: &str) -> Result<GroupDescriptor, String> {
    let (mut fam, mut l, mut field, mut sim) = (None, None, None, None);
    for kv in line.split_whitespace() {
        let (k, v) = kv.split_once('=').ok_or_else(|| format!("expected key=value, got {kv:?}"))?;
        match k {
            "group" => fam = Some(v.parse::<Family>().map_err(|e| e.to_string())?),
            "l" => l = Some(v.parse::<usize>().map_err(|_| format!("bad rank {v:?}"))?),
            "field" => field = Some(v.parse::<Field>().map_err(|e| e.to_string())?),
            "similitude" => {
                sim = Some(match v {
                    "0" => false,
                    "1" => true,
                    _ => return Err(format!("similitude must be 0 or 1, got {v:?}")),
                })
            }
            _ => return Err(format!("unknown header key {k:?}")),
        }
    }
    let missing = |name: &str| format!("header is missing {name}=");
    GroupDescriptor::new(
        fam.ok_or_else(|| missing("group"))?,
        l.ok_or_else(|| missing("l"))?,
        field.ok_or_else(|| missing("field"))?,
        sim.unwrap_or(false),
    )
    .map_err(|e| e.to_string())
}

fn parse_row(d: &GroupDescriptor, line: usize, text: &str) -> Result<Vec<steinberg::Scalar>, ParseError> {
    let at = |msg: String| ParseError::At { line, msg };
    let row = text
        .split_whitespace()
        .map(|s| d.field.parse(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| at(e.to_string()))?;
    if row.len() != d.n() {
        return Err(at(format!("expected {} entries, got {}", d.n(), row.len())));
    }
    Ok(row)
}

/// Every record in `text`.
pub fn parse_records(text: &str) -> Result<Vec<MatrixFile>, ParseError> {
    let mut out = Vec::new();
    let mut lines = content_lines(text).peekable();
    while let Some((no, header)) = lines.next() {
        let descriptor = parse_header(header).map_err(|msg| ParseError::At { line: no, msg })?;
        let n = descriptor.n();
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (no, text) = lines
                .next()
                .ok_or_else(|| ParseError::Other(format!("expected {n} rows after the header on line {no}")))?;
            rows.push(parse_row(&descriptor, no, text)?);
        }
        let matrix = Matrix::from_rows(descriptor.field, rows).map_err(|e| ParseError::Other(e.to_string()))?;
        out.push(MatrixFile { descriptor, matrix });
    }
    Ok(out)
}

/// Exactly one record.
pub fn parse_matrix_file(text: &str) -> Result<MatrixFile, ParseError> {
    let mut recs = parse_records(text)?;
    match recs.len() {
        1 => Ok(recs.pop().expect("one record")),
        0 => Err(ParseError::Other("empty matrix file".into())),
        k => Err(ParseError::Other(format!("expected one matrix, found {k}"))),
    }
}

pub fn write_matrix_file(d: &GroupDescriptor, g: &Matrix) -> String {
    format!("{d}\n{g}")
}

/// `I`, or rows joined by `;`.
pub fn inline_matrix(g: &Matrix) -> String {
    if g.is_identity() {
        return "I".into();
    }
    (0..g.rows())
        .map(|i| g.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_inline_matrix(d: &GroupDescriptor, text: &str) -> Result<Matrix, ParseError> {
    let text = text.trim();
    if text == "I" || text.is_empty() {
        return Ok(d.identity());
    }
    let rows = text.split(';').map(|r| parse_row(d, 0, r)).collect::<Result<Vec<_>, _>>()?;
    if rows.len() != d.n() {
        return Err(ParseError::Other(format!("expected {} rows in D, got {}", d.n(), rows.len())));
    }
    Matrix::from_rows(d.field, rows).map_err(|e| ParseError::Other(e.to_string()))
}
