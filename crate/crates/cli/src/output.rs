use std::path::{Path, PathBuf};
use std::time::Duration;

use besovlab::euler::{GridSpec, SimConfig, TerminalStatus, Trajectory};
use besovlab::PhysicalParams;
use serde::Serialize;

use crate::error::CliResult;

pub const SERIES_FILE: &str = "series.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Column headers of a series file; block columns run `q = -1..=q_max`.
pub fn series_header(traj: &Trajectory) -> Vec<String> {
    let mut cols: Vec<String> = [
        "t",
        "besov_u",
        "besov_ut",
        "energy",
        "dissipation",
        "vorticity_norm",
        "grad_m_norm",
        "u_norm_eps_prime",
        "besov_sigma_21",
        "min_density",
        "sup_m",
        "sup_u",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let blocks = traj.records.first().map_or(0, |r| r.block_energies.len());
    cols.extend((0..blocks).map(|i| format!("block_{}", i as i32 - 1)));
    cols
}

/// Shortest round-trip text, in exponent form away from unit scale.
fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e6).contains(&a) || !v.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

pub fn write_series(path: &Path, traj: &Trajectory) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(series_header(traj))?;
    for r in &traj.records {
        let mut row = vec![
            num(r.t),
            num(r.besov_u),
            num(r.besov_ut),
            num(r.energy),
            num(r.dissipation),
            r.vorticity_norm.map_or_else(String::new, num),
            num(r.grad_m_norm),
            num(r.u_norm_eps_prime),
            num(r.besov_sigma_21),
            num(r.min_density),
            num(r.sup_m),
            num(r.sup_u),
        ];
        row.extend(r.block_energies.iter().map(|&b| num(b)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads one named column of a series file as `(t, value)` pairs; empty cells are skipped.
pub fn read_series_column(path: &Path, column: &str) -> CliResult<Vec<(f64, f64)>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| crate::error::CliError::Config(format!("column `{name}` not found in {}", path.display())))
    };
    let (ti, ci) = (find("t")?, find(column)?);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let parse = |i: usize| -> CliResult<Option<f64>> {
            let cell = rec.get(i).unwrap_or("").trim();
            if cell.is_empty() {
                return Ok(None);
            }
            cell.parse()
                .map(Some)
                .map_err(|_| crate::error::CliError::Config(format!("bad number `{cell}` in {}", path.display())))
        };
        if let (Some(t), Some(v)) = (parse(ti)?, parse(ci)?) {
            out.push((t, v));
        }
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub artifact: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: SimConfig,
    pub seed: u64,
    pub grid: GridSpec,
    pub params: PhysicalParams,
    pub dt: f64,
    pub steps_taken: usize,
    pub records: usize,
    pub outputs: Vec<PathBuf>,
    pub status: RunStatus,
    pub message: Option<String>,
    pub duration_seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    Blowup,
    PositivityLost,
    Error,
}

impl From<TerminalStatus> for RunStatus {
    fn from(s: TerminalStatus) -> Self {
        match s {
            TerminalStatus::Completed => RunStatus::Completed,
            TerminalStatus::Blowup => RunStatus::Blowup,
            TerminalStatus::PositivityLost => RunStatus::PositivityLost,
        }
    }
}

impl RunManifest {
    pub fn new(command: &str, config: &SimConfig, duration: Duration) -> Self {
        RunManifest {
            artifact: "besovlab",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config: config.clone(),
            seed: config.ic.seed,
            grid: config.grid,
            params: config.params,
            dt: 0.0,
            steps_taken: 0,
            records: 0,
            outputs: Vec::new(),
            status: RunStatus::Error,
            message: None,
            duration_seconds: duration.as_secs_f64(),
        }
    }

    pub fn with_trajectory(mut self, traj: &Trajectory) -> Self {
        self.dt = traj.dt;
        self.steps_taken = traj.steps_taken;
        self.records = traj.records.len();
        self.status = traj.status.into();
        self
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Writes the series and manifest of a finished run into `dir`.
pub fn write_run(
    dir: &Path,
    command: &str,
    cfg: &SimConfig,
    traj: &Trajectory,
    took: Duration,
) -> CliResult<RunManifest> {
    std::fs::create_dir_all(dir)?;
    write_series(&dir.join(SERIES_FILE), traj)?;
    let mut manifest = RunManifest::new(command, cfg, took).with_trajectory(traj);
    manifest.outputs = vec![PathBuf::from(SERIES_FILE)];
    write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    Ok(manifest)
}
