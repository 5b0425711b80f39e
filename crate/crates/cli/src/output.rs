use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> CliResult<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Sink { out })
    }

    pub fn line(&mut self, text: impl AsRef<str>) -> CliResult<()> {
        writeln!(self.out, "{}", text.as_ref()).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn record<T: Serialize>(&mut self, value: &T) -> CliResult<()> {
        let json = serde_json::to_string(value).map_err(|e| CliError::Io(e.to_string()))?;
        self.line(json)
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.out.flush().map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Fixed-width cell, `-` for a missing value.
pub fn cell(value: Option<f64>, width: usize, decimals: usize) -> String {
    match value {
        Some(v) => format!("{v:>width$.decimals$}"),
        None => format!("{:>width$}", "-"),
    }
}
