//! Deterministic CSV emission with `#`-prefixed metadata headers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// Artifact format version stamped into every header.
pub const ARTIFACT_VERSION: &str = "giantatom-csv v1";

pub fn fmt_f(x: f64) -> String {
    // negative zero (e.g. an empty float sum) must not leak into output
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.12e}")
}

/// A CSV sink: a file when a path is given, standard output otherwise.
pub struct Sink {
    writer: BufWriter<Box<dyn Write>>,
}

impl Sink {
    pub fn file(path: &Path) -> io::Result<Self> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        Ok(Self { writer: BufWriter::new(Box::new(File::create(path)?)) })
    }

    pub fn stdout() -> Self {
        Self { writer: BufWriter::new(Box::new(io::stdout())) }
    }

    /// Writes the metadata block: artifact version, schema tag, config
    /// echo, then the column header row.
    pub fn header(&mut self, schema: &str, echo: &[String], columns: &[&str]) -> io::Result<()> {
        writeln!(self.writer, "# {ARTIFACT_VERSION}")?;
        writeln!(self.writer, "# schema = {schema}")?;
        for line in echo {
            writeln!(self.writer, "# {line}")?;
        }
        writeln!(self.writer, "{}", columns.join(","))
    }

    pub fn row(&mut self, fields: &[String]) -> io::Result<()> {
        writeln!(self.writer, "{}", fields.join(","))
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.writer.flush()
    }
}
