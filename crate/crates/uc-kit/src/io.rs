//! Locale-free CSV and JSON emission.
//!
//! Reals are written with 17 significant digits so that every value parses
//! back to the same `f64`.

use serde::Serialize;

use crate::{Error, Result};

/// `x` as `d.dddddddddddddddde±X`; non-finite values as `nan`, `inf`, `-inf`.
///
/// ```
/// let s = uc_kit::io::fmt_real(0.1);
/// assert_eq!(s, "1.0000000000000001e-1");
/// assert_eq!(s.parse::<f64>().unwrap(), 0.1);
/// ```
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// In-memory CSV table with a fixed header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

/// A CSV cell.
pub enum Cell<'a> {
    Real(f64),
    Int(i64),
    Text(&'a str),
    Owned(String),
}

impl From<f64> for Cell<'_> {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell<'_> {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell<'_> {
    fn from(v: u64) -> Self {
        Cell::Owned(v.to_string())
    }
}

impl<'a> From<&'a str> for Cell<'a> {
    fn from(v: &'a str) -> Self {
        Cell::Text(v)
    }
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table { header: header.iter().map(|h| h.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<Cell<'_>>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(
            row.into_iter()
                .map(|c| match c {
                    Cell::Real(v) => fmt_real(v),
                    Cell::Int(v) => v.to_string(),
                    Cell::Text(s) => s.to_string(),
                    Cell::Owned(s) => s,
                })
                .collect(),
        );
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    /// Parse a table produced by [`Table::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(io)?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(io)?.iter().map(str::to_string).collect());
        }
        Ok(Table { header, rows })
    }

    /// Column `name` parsed as reals.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i =
            self.header.iter().position(|h| h == name).ok_or_else(|| Error::Io(format!("missing column {name}")))?;
        self.rows.iter().map(|r| r[i].parse::<f64>().map_err(|e| Error::Io(format!("column {name}: {e}")))).collect()
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))
}
