use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Output directory, created on first write.
pub struct Output {
    dir: PathBuf,
    written: Vec<String>,
}

impl Output {
    pub fn new(dir: PathBuf) -> Self {
        Output { dir, written: Vec::new() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    fn path(&mut self, name: &str) -> CliResult<PathBuf> {
        std::fs::create_dir_all(&self.dir).map_err(|e| {
            CliError::validation(format!("cannot create output directory {}: {e}", self.dir.display()))
        })?;
        self.written.push(name.to_string());
        Ok(self.dir.join(name))
    }

    pub fn csv<R: Serialize>(
        &mut self,
        name: &str,
        header: &[&str],
        rows: impl IntoIterator<Item = R>,
    ) -> CliResult<()> {
        let path = self.path(name)?;
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(&path)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))?;
        w.write_record(header)?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let path = self.path(name)?;
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(&path, text)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))
    }
}

#[derive(Serialize)]
pub struct Manifest<'a> {
    pub subcommand: &'a str,
    pub version: &'a str,
    pub seed: u64,
    pub threads: Option<u64>,
    /// Every resolved parameter, defaults included.
    pub parameters: serde_json::Value,
    /// Effective argument list after config merging; rerunning it reproduces
    /// the outputs.
    pub argv: Vec<String>,
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
    pub started_unix: u64,
}
