use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use nnls_approx::export::write_atomic;
use nnls_approx::{ExperimentConfig, Termination};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct StageTime {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Default, Serialize)]
pub struct SolverSummary {
    pub termination: Option<Termination>,
    pub outer_iterations: Option<usize>,
    pub support_sizes: Vec<usize>,
    pub selected_iter: Option<usize>,
    pub residual_norm: Option<f64>,
    pub max_epsilon: Option<f64>,
    pub error: Option<String>,
}

/// Record of one command invocation.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Option<ExperimentConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_table: Option<String>,
    /// Paths relative to the output directory.
    pub outputs: Vec<PathBuf>,
    pub timing: Vec<StageTime>,
    pub solver_summary: SolverSummary,
}

/// Output directory that remembers what was written.
pub struct OutDir {
    root: PathBuf,
    written: Vec<PathBuf>,
    timing: Vec<StageTime>,
    clock: Instant,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root)
            .with_context(|| format!("creating output directory {}", root.display()))?;
        Ok(OutDir { root: root.to_path_buf(), written: Vec::new(), timing: Vec::new(), clock: Instant::now() })
    }

    pub fn write(&mut self, rel: impl AsRef<Path>, contents: &[u8]) -> Result<()> {
        let rel = rel.as_ref();
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        write_atomic(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(rel.to_path_buf());
        Ok(())
    }

    /// Closes the current timing stage.
    pub fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.timing.push(StageTime { stage: stage.to_string(), seconds: (now - self.clock).as_secs_f64() });
        self.clock = now;
    }

    pub fn finish(
        mut self,
        command: &str,
        config: Option<ExperimentConfig>,
        reference_table: Option<String>,
        solver_summary: SolverSummary,
    ) -> Result<()> {
        self.written.push(PathBuf::from("manifest.json"));
        let manifest = RunManifest {
            command: command.to_string(),
            config,
            reference_table,
            outputs: self.written,
            timing: self.timing,
            solver_summary,
        };
        let json = serde_json::to_string_pretty(&manifest)?;
        let path = self.root.join("manifest.json");
        write_atomic(&path, json.as_bytes()).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
