use std::path::{Path, PathBuf};

use besovlab::euler::{GridSpec, SimConfig};
use besovlab::PhysicalParams;
use clap::Args;

use crate::error::{CliError, CliResult};

/// Built-in scenarios, shipped as JSON next to the crate.
pub const PRESETS: &[(&str, &str)] = &[
    ("equilibrium", include_str!("../presets/equilibrium.json")),
    ("small3d", include_str!("../presets/small3d.json")),
    ("linear-mode", include_str!("../presets/linear-mode.json")),
    ("vortex3d", include_str!("../presets/vortex3d.json")),
    ("moderate1d", include_str!("../presets/moderate1d.json")),
];

pub fn preset(name: &str) -> CliResult<SimConfig> {
    let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
        CliError::Config(format!("unknown preset `{name}` (available: {})", names.join(", ")))
    })?;
    parse_config(text)
}

pub fn parse_config(text: &str) -> CliResult<SimConfig> {
    let cfg: SimConfig = serde_json::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn read_config(path: &Path) -> CliResult<SimConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Scenario selection plus per-field overrides.
#[derive(Args, Debug, Clone, Default)]
pub struct RunArgs {
    /// JSON run configuration.
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in scenario name.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Grid points per axis.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Pressure constant in `p = A n^γ`.
    #[arg(long = "A", id = "pressure_const")]
    pub pressure_const: Option<f64>,
    /// Damping coefficient.
    #[arg(long = "a", id = "damping")]
    pub damping: Option<f64>,
    #[arg(long)]
    pub nbar: Option<f64>,
    #[arg(long)]
    pub tend: Option<f64>,
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long = "eps-prime")]
    pub eps_prime: Option<f64>,
}

impl RunArgs {
    /// The selected configuration with overrides applied and validated.
    pub fn resolve(&self) -> CliResult<SimConfig> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), _) => read_config(path)?,
            (None, Some(name)) => preset(name)?,
            (None, None) => return Err(CliError::Config("either --config or --preset is required".into())),
        };
        self.apply(&mut cfg)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&self, cfg: &mut SimConfig) -> CliResult<()> {
        if let Some(seed) = self.seed {
            cfg.ic.seed = seed;
        }
        if let Some(dim) = self.dim {
            cfg.grid = GridSpec { dim, ..cfg.grid };
        }
        if let Some(points) = self.points {
            cfg.grid = GridSpec {
                points_per_axis: points,
                ..cfg.grid
            };
        }
        if let Some(amp) = self.amplitude {
            cfg.ic.amplitude = amp;
        }
        let p = cfg.params;
        if self.gamma.is_some() || self.pressure_const.is_some() || self.damping.is_some() || self.nbar.is_some() {
            cfg.params = PhysicalParams::new(
                self.pressure_const.unwrap_or(p.pressure_const()),
                self.gamma.unwrap_or(p.gamma()),
                self.damping.unwrap_or(p.damping()),
                self.nbar.unwrap_or(p.n_bar()),
            )?;
        }
        if let Some(t) = self.tend {
            cfg.t_end = t;
        }
        if let Some(c) = self.cfl {
            cfg.cfl = c;
        }
        if let Some(e) = self.eps {
            cfg.eps = e;
        }
        if let Some(e) = self.eps_prime {
            cfg.eps_prime = e;
        }
        Ok(())
    }
}
