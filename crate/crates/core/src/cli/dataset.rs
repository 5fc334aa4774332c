//! CSV rectangle datasets: header `id,minx,miny,maxx,maxy`, one rectangle per line.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::geometry::Rect;

pub const HEADER: [&str; 5] = ["id", "minx", "miny", "maxx", "maxy"];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
}

fn parse_err(line: u64, message: impl Into<String>) -> DatasetError {
    DatasetError::Parse { line, message: message.into() }
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub source: PathBuf,
    pub rects: Vec<Rect<i64>>,
}

impl Dataset {
    pub fn load(path: &Path) -> Result<Self, DatasetError> {
        let bytes = fs::read(path).map_err(|source| DatasetError::Io { path: path.to_owned(), source })?;
        Ok(Dataset { source: path.to_owned(), rects: parse_csv(&bytes)? })
    }
}

/// Parses a dataset, reporting the first problem with its 1-based line number.
pub fn parse_csv(bytes: &[u8]) -> Result<Vec<Rect<i64>>, DatasetError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(bytes);
    let mut records = reader.records();

    match records.next() {
        None => return Err(parse_err(1, format!("missing header, expected `{}`", HEADER.join(",")))),
        Some(Err(e)) => return Err(csv_err(bytes, e)),
        Some(Ok(header)) => {
            if header.iter().ne(HEADER.iter().copied()) {
                let line = header.position().map_or(1, |p| line_at(bytes, p.byte()));
                return Err(parse_err(
                    line,
                    format!("bad header `{}`, expected `{}`", header.iter().collect::<Vec<_>>().join(","), HEADER.join(",")),
                ));
            }
        }
    }

    let mut rects = Vec::new();
    let mut seen: HashMap<u64, u64> = HashMap::new();
    for record in records {
        let record = record.map_err(|e| csv_err(bytes, e))?;
        let line = record.position().map_or(0, |p| line_at(bytes, p.byte()));
        if record.len() != HEADER.len() {
            return Err(parse_err(line, format!("expected 5 fields, found {}", record.len())));
        }
        let id: u64 = record[0]
            .parse()
            .map_err(|_| parse_err(line, format!("id `{}` is not a non-negative integer", &record[0])))?;
        let mut c = [0i64; 4];
        for (k, slot) in c.iter_mut().enumerate() {
            let field = &record[k + 1];
            *slot = field
                .parse()
                .map_err(|_| parse_err(line, format!("{} `{}` is not an integer", HEADER[k + 1], field)))?;
        }
        if let Some(first) = seen.insert(id, line) {
            return Err(parse_err(line, format!("duplicate id {id} (first seen on line {first})")));
        }
        let rect = Rect::new(id, c[0], c[1], c[2], c[3]).map_err(|e| parse_err(line, e.to_string()))?;
        rects.push(rect);
    }
    Ok(rects)
}

// csv's line counter and record offsets lag behind on CRLF input (the offset can land on the
// previous terminator), so skip terminators and count newlines ourselves
fn line_at(bytes: &[u8], offset: u64) -> u64 {
    let mut end = (offset as usize).min(bytes.len());
    while end < bytes.len() && matches!(bytes[end], b'\r' | b'\n') {
        end += 1;
    }
    bytes[..end].iter().filter(|&&b| b == b'\n').count() as u64 + 1
}

fn csv_err(bytes: &[u8], e: csv::Error) -> DatasetError {
    let line = e.position().map_or(0, |p| line_at(bytes, p.byte()));
    parse_err(line, e.to_string())
}

/// Serializes rectangles in the dataset format.
pub fn to_csv(rects: &[Rect<i64>]) -> String {
    let mut s = HEADER.join(",");
    s.push('\n');
    for r in rects {
        s.push_str(&format!("{},{},{},{},{}\n", r.id, r.min_x, r.min_y, r.max_x, r.max_y));
    }
    s
}
