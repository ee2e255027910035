mod config;
mod error;
mod output;
mod sweep;

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use besovlab::estimate::decay::VORTICITY_TOL;
use besovlab::estimate::{
    check_energy_monotonicity, commutator_scan, fit_decay_rate, grad_m_decay_check, scan_all, vorticity_decay_check,
    CommutatorVariant, ScanFields,
};
use besovlab::euler::simulate;
use besovlab::lp::dump::load_field;
use besovlab::lp::{besov_norm, make_grid, BesovSpec};
use besovlab::DyadicPartition;
use clap::{Parser, Subcommand};
use serde_json::json;

use config::{read_config, RunArgs};
use error::{CliError, CliResult};
use output::{write_json, write_series, RunManifest, RunStatus, MANIFEST_FILE, SERIES_FILE};

#[derive(Parser, Debug)]
#[command(
    name = "besovlab",
    version,
    about = "Dyadic analysis and damped Euler experiments on the torus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the dyadic partition on a grid and verify it sums to one.
    PartitionCheck {
        /// Take the grid from a run configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = TAU)]
        period: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Besov norm of a dumped field.
    Besov {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value = "2")]
        p: String,
        /// Summability exponent; `inf` selects the sup form.
        #[arg(long, default_value = "2")]
        r: String,
    },
    /// Integrate a configuration and write its diagnostic series.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: PathBuf,
        /// Evaluate the energy and decay checks; exit 4 when one fails.
        #[arg(long)]
        check: bool,
    },
    /// Exponential decay rate of one column of a series file.
    DecayFit {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, default_value = "vorticity_norm")]
        column: String,
        /// Time window as `lo,hi`; the full series by default.
        #[arg(long)]
        window: Option<String>,
    },
    /// Commutator scans on the initial state of a configuration.
    CommutatorScan {
        #[command(flatten)]
        run: RunArgs,
        /// Variant name, or `all`.
        #[arg(long, default_value = "all")]
        variant: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep concurrently.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_exponent(s: &str) -> CliResult<f64> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        v => v.parse().map_err(|_| CliError::Config(format!("bad exponent `{s}`"))),
    }
}

fn parse_window(s: &str) -> CliResult<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = || CliError::Config(format!("window must be `lo,hi`, got `{s}`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn print_json<T: serde::Serialize>(value: &T) -> CliResult<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn partition_check(
    config: Option<&Path>,
    dim: usize,
    points: usize,
    period: f64,
    tol: f64,
    out: Option<&Path>,
) -> CliResult<()> {
    let grid = match config {
        Some(path) => read_config(path)?.grid.build()?,
        None => make_grid(dim, points, period)?,
    };
    let report = DyadicPartition::new(grid, tol)?.report();
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    print_json(&report)?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Assertion(format!(
            "partition residual {:e} over {tol:e}",
            report.max_residual
        )))
    }
}

fn besov(field: &Path, s: f64, p: &str, r: &str) -> CliResult<()> {
    let f = load_field(field).map_err(|e| CliError::Config(format!("{}: {e}", field.display())))?;
    let spec = BesovSpec::new(s, parse_exponent(p)?, parse_exponent(r)?)?;
    let part = DyadicPartition::new(*f.grid(), besovlab::euler::simulate::PARTITION_TOL)?;
    let norm = besov_norm(&part, &f, spec)?;
    print_json(&json!({ "s": s, "p": p, "r": r, "norm": norm }))
}

fn run_checks(traj: &besovlab::euler::Trajectory) -> CliResult<(serde_json::Value, Vec<String>)> {
    let mut failures = Vec::new();
    let mono = check_energy_monotonicity(traj).ok();
    if let Some(m) = &mono {
        if !(m.holds && m.non_increasing) {
            failures.push("energy monotonicity".to_string());
        }
    }
    let vort = if traj.grid.dim() == 3 {
        Some(vorticity_decay_check(traj, VORTICITY_TOL)?)
    } else {
        None
    };
    if let Some(v) = &vort {
        if !v.holds {
            failures.push("vorticity decay".to_string());
        }
    }
    let grad_m = grad_m_decay_check(traj);
    if !grad_m.holds {
        failures.push("gradient decay".to_string());
    }
    let value = json!({
        "energy_monotonicity": mono,
        "vorticity_decay": vort.map(|v| json!({
            "holds": v.holds, "damping": v.damping, "tol": v.tol, "worst_ratio": v.worst_ratio, "fit": v.fit,
        })),
        "grad_m_decay": json!({
            "applicable": grad_m.applicable, "grad_m_halved": grad_m.grad_m_halved,
            "u_halved": grad_m.u_halved, "holds": grad_m.holds,
        }),
        "failures": failures,
    });
    Ok((value, failures))
}

fn simulate_cmd(run: &RunArgs, out: &Path, check: bool) -> CliResult<()> {
    let cfg = run.resolve()?;
    let start = Instant::now();
    let traj = simulate(&cfg)?;
    let checks = if check { Some(run_checks(&traj)?) } else { None };
    let took = start.elapsed();

    std::fs::create_dir_all(out)?;
    write_series(&out.join(SERIES_FILE), &traj)?;
    let mut manifest = RunManifest::new("simulate", &cfg, took).with_trajectory(&traj);
    manifest.outputs.push(PathBuf::from(SERIES_FILE));
    if let Some((value, _)) = &checks {
        write_json(&out.join("checks.json"), value)?;
        manifest.outputs.push(PathBuf::from("checks.json"));
    }
    write_json(&out.join(MANIFEST_FILE), &manifest)?;
    eprintln!(
        "{:?} after {} steps (dt {:e}), {} records in {}",
        manifest.status,
        traj.steps_taken,
        traj.dt,
        traj.records.len(),
        out.display()
    );
    match manifest.status {
        RunStatus::Completed => {}
        s => return Err(CliError::Numerical(format!("run ended with status {s:?}"))),
    }
    match checks {
        Some((_, failures)) if !failures.is_empty() => Err(CliError::Assertion(failures.join(", "))),
        _ => Ok(()),
    }
}

fn decay_fit(series: &Path, column: &str, window: Option<&str>) -> CliResult<()> {
    let data = output::read_series_column(series, column)?;
    let window = match window {
        Some(w) => parse_window(w)?,
        None => {
            let lo = data.first().map_or(0.0, |p| p.0);
            let hi = data.last().map_or(0.0, |p| p.0);
            (lo, hi)
        }
    };
    let fit = fit_decay_rate(&data, window)?;
    print_json(&json!({ "column": column, "window": [window.0, window.1], "fit": fit }))
}

fn commutator_cmd(run: &RunArgs, variant: &str, out: Option<&Path>) -> CliResult<()> {
    let cfg = run.resolve()?;
    let grid = cfg.grid.build()?;
    let state = cfg.ic.build(&grid, &cfg.params)?;
    let fields = ScanFields::from_state(&state, &cfg.model())?;
    let part = DyadicPartition::new(grid, besovlab::euler::simulate::PARTITION_TOL)?;
    let indices = cfg.indices(grid.dim())?;
    let reports = if variant == "all" {
        scan_all(&part, &fields, &indices)?
    } else {
        let v: CommutatorVariant = variant.parse()?;
        vec![commutator_scan(&part, &fields, v, &indices)?]
    };
    if let Some(path) = out {
        write_json(path, &reports)?;
    }
    print_json(&reports)
}

fn sweep_cmd(config: &Path, out: &Path) -> CliResult<()> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config.display())))?;
    let spec: sweep::SweepSpec = serde_json::from_str(&text)?;
    let summary = sweep::run_sweep(&spec, out)?;
    for r in &summary.runs {
        eprintln!(
            "{}: amplitude {:e} seed {} -> {:?}",
            r.dir.display(),
            r.amplitude,
            r.seed,
            r.status
        );
    }
    Ok(())
}

fn init_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("BESOVLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("BESOVLAB_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn dispatch(cli: Cli) -> CliResult<()> {
    init_threads()?;
    match cli.command {
        Command::PartitionCheck {
            config,
            dim,
            points,
            period,
            tol,
            out,
        } => partition_check(config.as_deref(), dim, points, period, tol, out.as_deref()),
        Command::Besov { field, s, p, r } => besov(&field, s, &p, &r),
        Command::Simulate { run, out, check } => simulate_cmd(&run, &out, check),
        Command::DecayFit { series, column, window } => decay_fit(&series, &column, window.as_deref()),
        Command::CommutatorScan { run, variant, out } => commutator_cmd(&run, &variant, out.as_deref()),
        Command::Sweep { config, out } => sweep_cmd(&config, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
