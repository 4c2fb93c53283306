//! Output directory with atomic writes and a run manifest.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use uc_kit::io::Table;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::plot::{line_plot, PlotSpec};

pub struct OutDir {
    root: PathBuf,
    plots: bool,
    written: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    seed: u64,
    /// Filled config; rerunning it reproduces every CSV file.
    config: &'a ExperimentConfig,
    outputs: &'a [String],
}

impl OutDir {
    pub fn create(root: &Path, plots: bool) -> Result<Self, CliError> {
        std::fs::create_dir_all(root)
            .map_err(|e| CliError::Validation(format!("cannot create output directory {}: {e}", root.display())))?;
        Ok(OutDir { root: root.to_path_buf(), plots, written: Vec::new() })
    }

    /// Write through a temporary file in the same directory, then rename.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.root)?;
        tmp.write_all(contents.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.root.join(name)).map_err(|e| CliError::Validation(format!("i/o: {e}")))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn csv(&mut self, name: &str, table: &Table) -> Result<(), CliError> {
        self.write(name, &table.to_csv()?)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = uc_kit::io::to_json_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    /// SVG of `spec` drawn from `table`; skipped with `--no-plots` or when
    /// nothing is drawable.
    pub fn plot(&mut self, name: &str, table: &Table, spec: &PlotSpec) -> Result<(), CliError> {
        if !self.plots {
            return Ok(());
        }
        match line_plot(table, spec) {
            Some(svg) => self.write(name, &svg),
            None => Ok(()),
        }
    }

    pub fn finish(mut self, config: &ExperimentConfig, command: &str, seed: u64) -> Result<Vec<String>, CliError> {
        let mut outputs = self.written.clone();
        outputs.push("manifest.json".into());
        let manifest =
            Manifest { tool: "uc-kit", version: env!("CARGO_PKG_VERSION"), command, seed, config, outputs: &outputs };
        self.json("manifest.json", &manifest)?;
        Ok(outputs)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}
