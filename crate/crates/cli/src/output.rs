use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

use crate::{CliError, Settings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Witness lists in tables stop after this many entries.
pub const TABLE_WITNESSES: usize = 5;

pub fn emit(settings: &Settings, text: &str) -> Result<(), CliError> {
    match &settings.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Left-aligned columns separated by two spaces.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    pub fn render(&self) -> String {
        let cols = self.header.len();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let mut line = String::new();
            for (i, cell) in row.iter().enumerate().take(cols) {
                if i + 1 == cols {
                    line.push_str(cell);
                } else {
                    let pad = widths[i] - cell.chars().count();
                    write!(line, "{cell}{}  ", " ".repeat(pad)).unwrap();
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

/// `items` joined by `sep`, cut to the first [`TABLE_WITNESSES`].
pub fn truncated(items: &[String], sep: &str) -> String {
    let shown = items.iter().take(TABLE_WITNESSES).cloned().collect::<Vec<_>>().join(sep);
    if items.len() > TABLE_WITNESSES {
        format!("{shown}{sep}… ({} more)", items.len() - TABLE_WITNESSES)
    } else {
        shown
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_alignment() {
        let mut t = Table::new(["J", "beta"]);
        t.row(["{1,2}", "2"]);
        t.row(["∅", "1"]);
        assert_eq!(t.render(), "J      beta\n{1,2}  2\n∅      1\n");
    }

    #[test]
    fn truncation() {
        let items: Vec<String> = (0..7).map(|i| i.to_string()).collect();
        assert_eq!(truncated(&items, "; "), "0; 1; 2; 3; 4; … (2 more)");
        assert_eq!(truncated(&items[..2], "; "), "0; 1");
    }
}
