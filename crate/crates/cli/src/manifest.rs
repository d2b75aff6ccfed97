//! Run manifest: what ran, with which config, what it wrote.

use std::path::{Path, PathBuf};
use std::time::Duration;

use bubblewave::io::write_report;
use bubblewave::SimulationConfig;

use crate::{CliError, CliResult};

/// File name of the manifest inside the output directory.
pub const MANIFEST_FILE: &str = "manifest.txt";
/// File name of the config snapshot; loadable with `--config`.
pub const CONFIG_FILE: &str = "config.txt";

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: SimulationConfig,
    pub outputs: Vec<PathBuf>,
    pub wall_clock: Duration,
    /// `ok` or the failure message.
    pub status: String,
    /// Smallest 1 + 2kp seen by the wave monitor, if a wave ran.
    pub gamma_min: Option<f64>,
    /// Smallest bubble radius over all bubble runs (m).
    pub min_radius: Option<f64>,
    pub seed: Option<u64>,
    /// Extra `key = value` results (metrics, claims, orders).
    pub results: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: &SimulationConfig, seed: Option<u64>) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            config: config.clone(),
            outputs: Vec::new(),
            wall_clock: Duration::ZERO,
            status: "ok".to_string(),
            gamma_min: None,
            min_radius: None,
            seed,
            results: Vec::new(),
        }
    }

    pub fn result(&mut self, key: impl Into<String>, value: impl ToString) {
        self.results.push((key.into(), value.to_string()));
    }

    pub fn output(&mut self, path: impl Into<PathBuf>) {
        self.outputs.push(path.into());
    }

    pub fn note_radius(&mut self, r: f64) {
        self.min_radius = Some(self.min_radius.map_or(r, |m| m.min(r)));
    }

    pub fn note_gamma(&mut self, g: f64) {
        self.gamma_min = Some(self.gamma_min.map_or(g, |m| m.min(g)));
    }

    fn entries(&self, dir: &Path) -> Vec<(String, String)> {
        let mut e = vec![
            ("subcommand".to_string(), self.subcommand.clone()),
            ("status".to_string(), self.status.clone()),
            ("config".to_string(), dir.join(CONFIG_FILE).display().to_string()),
            ("wall_clock_s".to_string(), format!("{:.3}", self.wall_clock.as_secs_f64())),
            ("workers".to_string(), rayon::current_num_threads().to_string()),
            (
                "seed".to_string(),
                self.seed.map_or("none".to_string(), |s| s.to_string()),
            ),
            (
                "gamma_min".to_string(),
                self.gamma_min.map_or("none".to_string(), |g| format!("{g:?}")),
            ),
            (
                "min_radius".to_string(),
                self.min_radius.map_or("none".to_string(), |r| format!("{r:?}")),
            ),
        ];
        e.extend(self.results.iter().cloned());
        for (i, p) in self.outputs.iter().enumerate() {
            e.push((format!("output.{i}"), p.display().to_string()));
        }
        e
    }

    /// Writes the config snapshot and the manifest into `dir`; both are
    /// appended to the output list.
    pub fn write(&mut self, dir: &Path) -> CliResult<PathBuf> {
        let config_path = dir.join(CONFIG_FILE);
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        std::fs::write(&config_path, self.config.to_string()).map_err(|e| CliError::io(&config_path, e))?;
        let manifest_path = dir.join(MANIFEST_FILE);
        self.outputs.push(config_path);
        self.outputs.push(manifest_path.clone());
        write_report(&manifest_path, &self.entries(dir)).map_err(|e| CliError::io(&manifest_path, e))?;
        Ok(manifest_path)
    }

    /// One-line console summary.
    pub fn summary(&self) -> String {
        let extra: Vec<String> = self.results.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "{}: {} ({} files, {:.2} s){}{}",
            self.subcommand,
            self.status,
            self.outputs.len(),
            self.wall_clock.as_secs_f64(),
            if extra.is_empty() { "" } else { "; " },
            extra.join(", ")
        )
    }
}
