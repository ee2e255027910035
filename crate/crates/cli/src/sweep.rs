use std::path::{Path, PathBuf};
use std::time::Instant;

use besovlab::euler::{simulate, SimConfig};
use besovlab::PhysicalParams;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{parse_config, preset};
use crate::error::{CliError, CliResult};
use crate::output::{write_json, write_run, RunManifest, RunStatus, MANIFEST_FILE};

/// Cartesian product over parameter sets, amplitudes and seeds around a base run.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub base: Option<serde_json::Value>,
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub params: Vec<PhysicalParams>,
    #[serde(default)]
    pub amplitudes: Vec<f64>,
    #[serde(default)]
    pub seeds: Vec<u64>,
}

impl SweepSpec {
    pub fn base_config(&self) -> CliResult<SimConfig> {
        match (&self.base, &self.preset) {
            (Some(v), None) => parse_config(&v.to_string()),
            (None, Some(name)) => preset(name),
            _ => Err(CliError::Config(
                "a sweep needs exactly one of `base` or `preset`".into(),
            )),
        }
    }

    pub fn expand(&self) -> CliResult<Vec<SimConfig>> {
        let base = self.base_config()?;
        let params = if self.params.is_empty() {
            vec![base.params]
        } else {
            self.params.clone()
        };
        let amps = if self.amplitudes.is_empty() {
            vec![base.ic.amplitude]
        } else {
            self.amplitudes.clone()
        };
        let seeds = if self.seeds.is_empty() {
            vec![base.ic.seed]
        } else {
            self.seeds.clone()
        };
        let mut out = Vec::with_capacity(params.len() * amps.len() * seeds.len());
        for p in &params {
            for &amp in &amps {
                for &seed in &seeds {
                    let mut cfg = base.clone();
                    cfg.params = *p;
                    cfg.ic.amplitude = amp;
                    cfg.ic.seed = seed;
                    out.push(cfg);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Serialize)]
pub struct SweepEntry {
    pub index: usize,
    pub dir: PathBuf,
    pub amplitude: f64,
    pub seed: u64,
    pub params: PhysicalParams,
    pub status: RunStatus,
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub artifact: &'static str,
    pub version: &'static str,
    pub runs: Vec<SweepEntry>,
}

fn run_one(dir: &Path, cfg: &SimConfig) -> CliResult<RunStatus> {
    let start = Instant::now();
    match simulate(cfg) {
        Ok(traj) => Ok(write_run(dir, "sweep", cfg, &traj, start.elapsed())?.status),
        Err(e) => {
            std::fs::create_dir_all(dir)?;
            let mut m = RunManifest::new("sweep", cfg, start.elapsed());
            m.message = Some(e.to_string());
            write_json(&dir.join(MANIFEST_FILE), &m)?;
            Ok(RunStatus::Error)
        }
    }
}

/// Runs every configuration concurrently, one subdirectory each.
pub fn run_sweep(spec: &SweepSpec, out: &Path) -> CliResult<SweepSummary> {
    if out.exists() {
        return Err(CliError::Config(format!(
            "output directory {} already exists",
            out.display()
        )));
    }
    let configs = spec.expand()?;
    std::fs::create_dir_all(out)?;
    let statuses = configs
        .par_iter()
        .enumerate()
        .map(|(i, cfg)| run_one(&out.join(format!("run-{i:03}")), cfg))
        .collect::<CliResult<Vec<_>>>()?;
    let runs = configs
        .iter()
        .zip(statuses)
        .enumerate()
        .map(|(index, (cfg, status))| SweepEntry {
            index,
            dir: PathBuf::from(format!("run-{index:03}")),
            amplitude: cfg.ic.amplitude,
            seed: cfg.ic.seed,
            params: cfg.params,
            status,
        })
        .collect();
    let summary = SweepSummary {
        artifact: "besovlab",
        version: env!("CARGO_PKG_VERSION"),
        runs,
    };
    write_json(&out.join("sweep.json"), &summary)?;
    Ok(summary)
}
