use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Header names recognised as a leading row-id column.
const ID_COLUMNS: [&str; 5] = ["id", "spkr", "speaker", "segment", "row"];

/// A rectangular numeric table with named columns and optional row ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    ids: Option<Vec<String>>,
}

impl DataTable {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(bad) = rows.iter().position(|r| r.len() != columns.len()) {
            return Err(Error::InvalidInput(format!(
                "row {} has {} values for {} columns",
                bad + 1,
                rows[bad].len(),
                columns.len()
            )));
        }
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].contains(c) {
                return Err(Error::InvalidInput(format!("duplicate column `{c}`")));
            }
        }
        Ok(DataTable {
            columns,
            rows,
            ids: None,
        })
    }

    /// Parses a CSV with a header row. A first column named `id`, `SPKR`,
    /// `speaker`, `segment` or `row` (any case) is kept as row ids; every
    /// other cell must be a number.
    pub fn from_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(input);
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| Error::Parse {
                line: 1,
                message: e.to_string(),
            })?
            .iter()
            .map(str::to_owned)
            .collect();
        let has_ids = headers
            .first()
            .is_some_and(|h| ID_COLUMNS.contains(&h.to_ascii_lowercase().as_str()));
        let skip = usize::from(has_ids);
        let columns = headers[skip..].to_vec();
        let mut rows = Vec::new();
        let mut ids = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line());
            if has_ids {
                ids.push(record[0].to_owned());
            }
            let row = record
                .iter()
                .skip(skip)
                .enumerate()
                .map(|(i, cell)| {
                    cell.parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        message: format!("column `{}`: `{cell}` is not a number", columns[i]),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        let mut table = DataTable::new(columns, rows)?;
        if has_ids {
            table.ids = Some(ids);
        }
        Ok(table)
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn ids(&self) -> Option<&[String]> {
        self.ids.as_deref()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_owned()))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Replaces a column's values through `f`.
    pub fn map_column(&mut self, name: &str, f: impl Fn(f64) -> f64) -> Result<()> {
        let idx = self.column_index(name)?;
        for row in &mut self.rows {
            row[idx] = f(row[idx]);
        }
        Ok(())
    }
}
