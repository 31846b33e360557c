//! Artifact writers. Every file starts with a `#` header carrying the tool
//! version and the resolved configuration; bodies are deterministic.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::config::RunConfig;

pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

pub struct Artifacts {
    dir: PathBuf,
    header: Vec<String>,
    written: Vec<PathBuf>,
}

impl Artifacts {
    pub fn new(dir: &Path, config: &RunConfig, extra: &[String]) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        let mut header = vec![VERSION.to_string()];
        header.extend(config.describe());
        header.extend(extra.iter().cloned());
        Ok(Artifacts {
            dir: dir.to_path_buf(),
            header,
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(name);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        for line in &self.header {
            writeln!(w, "# {line}")?;
        }
        self.written.push(path);
        Ok(w)
    }

    /// A CSV file with the given column names and rows.
    pub fn csv<R, I>(&mut self, name: &str, columns: &[&str], rows: R) -> Result<()>
    where
        R: IntoIterator<Item = I>,
        I: IntoIterator<Item = String>,
    {
        let mut w = csv::Writer::from_writer(self.create(name)?);
        w.write_record(columns)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// A plain-text file whose body lines follow the header.
    pub fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let mut w = self.create(name)?;
        w.write_all(body.as_bytes())?;
        if !body.ends_with('\n') {
            writeln!(w)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip form, in exponent notation for very small or large
/// magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}
