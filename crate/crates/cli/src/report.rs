//! CSV reports: a header row, then rows in a fixed order.

use std::io::Write;
use std::path::Path;

use covlab_core::rational::{format_rational, format_sig9};
use covlab_core::Rational;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(header: &[&str]) -> Report {
        Report {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Panics if the row width differs from the header.
    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let row: Vec<String> = cells.into_iter().map(Into::into).collect();
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    /// First value in `column` of the row whose first cell is `key`.
    pub fn lookup(&self, key: &str, column: &str) -> Option<&str> {
        let c = self.header.iter().position(|h| h == column)?;
        self.rows
            .iter()
            .find(|r| r[0] == key)
            .map(|r| r[c].as_str())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    /// Writes to `path`, or to stdout when absent.
    pub fn emit(&self, path: Option<&Path>) -> CliResult<()> {
        let text = self.to_csv();
        match path {
            Some(p) => std::fs::write(p, text)
                .map_err(|e| CliError::failure(format!("cannot write {}: {e}", p.display()))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::failure(format!("cannot write report: {e}"))),
        }
    }
}

pub fn rat(r: &Rational) -> String {
    format_rational(r)
}

pub fn float(x: f64) -> String {
    format_sig9(x)
}

pub fn flag(b: bool) -> String {
    b.to_string()
}
