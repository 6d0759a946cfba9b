use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use secsched::secrecy::{validate_outage, MIN_VALIDATION_SAMPLES};
use secsched::simulator::{run, RunMetrics, RunOptions};
use secsched::{Collusion, CsiKind, ScenarioConfig};

use crate::error::CliError;
use crate::output;
use crate::sweep::SweepSpec;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_config(path: &Path, seed: Option<u64>) -> Result<ScenarioConfig, CliError> {
    let mut c = ScenarioConfig::from_toml_str(&read(path)?)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if let Some(s) = seed {
        c.seed = s;
    }
    Ok(c)
}

/// `summary.csv` → `summary.trace.csv`; stdout → `trace.csv`.
pub fn default_trace_path(out: Option<&Path>) -> PathBuf {
    match out {
        Some(p) => {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "summary".into());
            p.with_file_name(format!("{stem}.trace.csv"))
        }
        None => PathBuf::from("trace.csv"),
    }
}

pub struct RunArgs<'a> {
    pub config: &'a Path,
    pub out: Option<&'a Path>,
    pub trace: bool,
    pub trace_out: Option<&'a Path>,
    pub seed: Option<u64>,
}

pub fn cmd_run(args: &RunArgs<'_>) -> Result<(), CliError> {
    let config = load_config(args.config, args.seed)?;
    let trace_path = args.trace.then(|| args.trace_out.map(Path::to_path_buf).unwrap_or_else(|| default_trace_path(args.out)));
    let result = run::<f64>(&config, RunOptions { trace: args.trace })?;

    let mut w = output::open(args.out)?;
    w.write_record(output::summary_header(config.n_users))?;
    w.write_record(output::summary_row(&result.metrics))?;
    w.flush()?;

    if let (Some(path), Some(trace)) = (trace_path, result.trace) {
        let mut w = output::open(Some(&path))?;
        w.write_record(output::trace_header(config.n_users))?;
        for r in &trace {
            w.write_record(output::trace_row(r))?;
        }
        w.flush()?;
    }
    Ok(())
}

pub struct SweepArgs<'a> {
    pub config: &'a Path,
    pub out: Option<&'a Path>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

/// Runs every point, in parallel up to `jobs`, and writes rows in axis
/// order. After a failure no new points start; rows before the first failed
/// point are still written.
pub fn cmd_sweep(args: &SweepArgs<'_>) -> Result<(), CliError> {
    let mut spec = SweepSpec::from_toml_str(&read(args.config)?)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;
    if let Some(s) = args.seed {
        spec = spec.with_seed(s);
    }
    let points: Vec<ScenarioConfig> = (0..spec.values.len()).map(|k| spec.point(k)).collect::<Result<_, _>>()?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        if j == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?;

    let failed = AtomicBool::new(false);
    let results: Vec<Option<Result<RunMetrics<f64>, CliError>>> = pool.install(|| {
        points
            .par_iter()
            .map(|c| {
                if failed.load(Ordering::Relaxed) {
                    return None;
                }
                let r = run::<f64>(c, RunOptions::default()).map(|o| o.metrics).map_err(CliError::from);
                if r.is_err() {
                    failed.store(true, Ordering::Relaxed);
                }
                Some(r)
            })
            .collect()
    });

    let n_users = spec.base.n_users;
    let mut w = output::open(args.out)?;
    let mut header = vec![spec.axis.name().to_string(), "seed".to_string()];
    header.extend(output::summary_header(n_users));
    w.write_record(&header)?;
    for ((value, config), result) in spec.values.iter().zip(&points).zip(results) {
        match result {
            Some(Ok(m)) => {
                let mut row = vec![output::float(*value), config.seed.to_string()];
                row.extend(output::summary_row(&m));
                w.write_record(&row)?;
            }
            Some(Err(e)) => {
                w.flush()?;
                return Err(match e {
                    CliError::Invariant(m) => CliError::Invariant(format!("{} = {value}: {m}", spec.axis.name())),
                    other => other,
                });
            }
            // Skipped after an earlier-finishing point failed; that failure is
            // reported when its row is reached.
            None => continue,
        }
    }
    w.flush()?;
    Ok(())
}

pub struct ValidateArgs<'a> {
    pub config: Option<&'a Path>,
    pub out: Option<&'a Path>,
    pub n_antennas: Option<usize>,
    pub n_eves: Option<usize>,
    pub eta: Option<f64>,
    pub colluding: bool,
    pub samples: usize,
    pub seed: Option<u64>,
    pub ratio_steps: Option<usize>,
}

/// Returns `Invariant` when any row misses the target by more than three
/// standard errors; every row is written regardless.
pub fn cmd_validate_outage(args: &ValidateArgs<'_>) -> Result<(), CliError> {
    let base = match args.config {
        Some(p) => Some(load_config(p, None)?),
        None => None,
    };
    let n_antennas = args.n_antennas.or(base.as_ref().map(|c| c.n_antennas)).unwrap_or(6);
    let n_eves = args.n_eves.or(base.as_ref().map(|c| c.n_eves)).unwrap_or(3);
    let eta = args.eta.or(base.as_ref().and_then(|c| c.eta)).unwrap_or(0.1);
    let colluding = args.colluding || base.as_ref().is_some_and(|c| c.colluding);
    let seed = args.seed.or(base.as_ref().map(|c| c.seed)).unwrap_or(1);
    let grid: Vec<f64> = match (args.ratio_steps, &base) {
        (Some(0), _) => return Err(CliError::Config("--ratio-steps must be at least 1".into())),
        (Some(n), _) => (0..=n).map(|k| k as f64 / n as f64).collect(),
        (None, Some(c)) => c.ratio_grid.clone(),
        (None, None) => (0..=20).map(|k| k as f64 / 20.0).collect(),
    };
    if let Some(c) = &base {
        if c.csi != CsiKind::Partial && args.eta.is_none() {
            return Err(CliError::Config("outage validation needs csi = \"partial\" or --eta".into()));
        }
    }
    if args.samples < MIN_VALIDATION_SAMPLES {
        return Err(CliError::Config(format!("--samples must be at least {MIN_VALIDATION_SAMPLES}")));
    }
    let collusion = if colluding { Collusion::Colluding } else { Collusion::NonColluding };
    let rows = validate_outage(n_antennas, n_eves, eta, collusion, &grid, args.samples, seed)?;

    let mut w = output::open(args.out)?;
    w.write_record(output::VALIDATION_HEADER)?;
    for r in &rows {
        w.write_record(output::validation_row(r))?;
    }
    w.flush()?;
    let failed: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| r.epsilon.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!(
            "outage estimate outside 3 standard errors at epsilon = {}",
            failed.join(", ")
        )))
    }
}
