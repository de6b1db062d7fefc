//! `shadow-bias` command line front end.
//!
//! Every subcommand resolves its parameters as flags, then the `--config`
//! JSON file, then built-in defaults. The fully resolved parameters go into
//! the `#` header of the CSV, so identical resolved configs give identical
//! bytes. Output files are written to a temporary name and renamed, so a
//! failed run leaves nothing behind.
//!
//! Exit codes: 0 success, 2 invalid parameters, 3 I/O failure. Errors are
//! reported on stderr as a one-line JSON object.

pub mod args;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

pub use args::*;

use crate::analytics::{average_loss, best_case_mse, eps_min, shadow_snr, snr, worst_case_mse_auto};
use crate::error::Error;
use crate::pauli::PauliString;
use crate::spinring::density::{DEFAULT_EPSILON, DEFAULT_N_S, DEFAULT_Z};
use crate::spinring::combined::default_correction;
use crate::spinring::{
    combined_estimator_demo, emit_density_samples, ground_state, perturbation_experiment, AlphaSource,
    ExperimentConfig, SpinRingSpec,
};
use crate::state::BlochVector;
use crate::table::Table;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "SHADOW_BIAS_OUTPUT_DIR";

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            kind: "invalid_parameter",
            message: message.into(),
        }
    }

    fn to_json(&self) -> String {
        json!({"error": self.kind, "code": self.code, "message": self.message}).to_string()
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(io) => Self {
                code: EXIT_IO,
                kind: "io",
                message: io.to_string(),
            },
            other => Self::invalid(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    File(PathBuf),
    Json(String),
}

/// Parses `args` (including the program name) and runs the subcommand,
/// reporting on the given streams. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = CliError {
                code: EXIT_INVALID,
                kind: "invalid_arguments",
                message: e.to_string().trim().to_string(),
            };
            let _ = writeln!(stderr, "{}", err.to_json());
            return err.code;
        }
    };
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    match execute(cli.command, env_dir) {
        Ok(Output::File(path)) => {
            let _ = writeln!(stdout, "{}", json!({"output": path}));
            0
        }
        Ok(Output::Json(s)) => {
            let _ = writeln!(stdout, "{s}");
            0
        }
        Err(err) => {
            let _ = writeln!(stderr, "{}", err.to_json());
            err.code
        }
    }
}

/// Runs a parsed subcommand. `env_dir` is the fallback output directory.
pub fn execute(command: Command, env_dir: Option<PathBuf>) -> CliResult<Output> {
    let name = command.name();
    match command {
        Command::LossCurve { args, common } => {
            let a = resolve(args, &common, name)?;
            let table = loss_curve(&a)?;
            write_table(&table, &common, env_dir, "loss-curve.csv".into())
        }
        Command::WorstCase { args, common } => {
            let a = resolve(args, &common, name)?;
            let table = worst_case(&a)?;
            let file = format!(
                "worst-case_w{}_ns{}.csv",
                join(a.w.as_deref().unwrap_or_default()),
                join(a.n_s.as_deref().unwrap_or_default())
            );
            write_table(&table, &common, env_dir, file)
        }
        Command::BestCase { args, common } => {
            let a = resolve(args, &common, name)?;
            let table = best_case(&a)?;
            let file = format!(
                "best-case_w{}_ns{}_seed{}.csv",
                join(a.w.as_deref().unwrap_or_default()),
                join(a.n_s.as_deref().unwrap_or_default()),
                a.seed.unwrap_or_default()
            );
            write_table(&table, &common, env_dir, file)
        }
        Command::Snr { args, common } => {
            let a = resolve(args, &common, name)?;
            let report = snr_report(&a)?;
            if let Some(path) = &common.output {
                write_atomic(path, format!("{report}\n").as_bytes())?;
            }
            Ok(Output::Json(report))
        }
        Command::Experiment { args, common } => {
            let a = resolve(args, &common, name)?;
            let table = experiment(&a)?;
            let file = format!(
                "experiment_n{}_w{}_ns{}_seed{}.csv",
                a.n.unwrap_or_default(),
                a.w.unwrap_or_default(),
                a.n_s.unwrap_or_default(),
                a.seed.unwrap_or_default()
            );
            write_table(&table, &common, env_dir, file)
        }
        Command::Combined { args, common } => {
            let a = resolve(args, &common, name)?;
            let table = combined(&a)?;
            let file = format!(
                "combined_n{}_w{}_ns{}_seed{}.csv",
                a.n.unwrap_or_default(),
                a.w.unwrap_or_default(),
                a.n_s.unwrap_or_default(),
                a.seed.unwrap_or_default()
            );
            write_table(&table, &common, env_dir, file)
        }
        Command::DensitySamples { args, common } => {
            let a = resolve(args, &common, name)?;
            let table = density(&a)?;
            let file = format!(
                "density-samples_ns{}_seed{}.csv",
                a.n_s.unwrap_or_default(),
                a.seed.unwrap_or_default()
            );
            write_table(&table, &common, env_dir, file)
        }
    }
}

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join("-")
}

/// Flags, then the config file, then `Default` plus per-command defaults
/// applied in [`Defaults::with_defaults`].
fn resolve<A>(flags: A, common: &Common, name: &str) -> CliResult<A>
where
    A: Merge + DeserializeOwned + Defaults,
{
    let merged = match &common.config {
        Some(path) => flags.merge(load_config(path, name)?),
        None => flags,
    };
    Ok(merged.with_defaults())
}

fn load_config<A: DeserializeOwned>(path: &Path, name: &str) -> CliResult<A> {
    let text = fs::read_to_string(path).map_err(Error::from)?;
    let mut value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("config {}: {e}", path.display())))?;
    let map = value
        .as_object_mut()
        .ok_or_else(|| CliError::invalid("config must be a JSON object"))?;
    if let Some(sub) = map.remove("subcommand") {
        if sub != name {
            return Err(CliError::invalid(format!(
                "config is for subcommand {sub}, not \"{name}\""
            )));
        }
    }
    serde_json::from_value(value).map_err(|e| CliError::invalid(format!("config {}: {e}", path.display())))
}

/// Fills unset parameters with the built-in defaults.
pub trait Defaults {
    fn with_defaults(self) -> Self;
}

impl Defaults for LossCurveArgs {
    fn with_defaults(self) -> Self {
        Self {
            r: self.r.or(Some(vec![0.25, 0.5, 0.75, 1.0])),
            epsilon_grid: self.epsilon_grid.or(Some(EpsilonGrid { start: 0.0, end: 1.0, count: 101 })),
        }
    }
}

impl Defaults for WorstCaseArgs {
    fn with_defaults(self) -> Self {
        Self {
            w: self.w.or(Some(vec![1, 2, 4])),
            n_s: self.n_s.or(Some(vec![10, 100, 1000])),
            epsilon_grid: self.epsilon_grid.or(Some(EpsilonGrid { start: 0.0, end: 0.99, count: 100 })),
        }
    }
}

impl Defaults for BestCaseArgs {
    fn with_defaults(self) -> Self {
        Self {
            w: self.w.or(Some(vec![1, 2])),
            n_s: self.n_s.or(Some(vec![10, 100])),
            epsilon_grid: self.epsilon_grid.or(Some(EpsilonGrid { start: 0.0, end: 1.0, count: 21 })),
            reps: self.reps.or(Some(100_000)),
            seed: self.seed.or(Some(0)),
        }
    }
}

impl Defaults for SnrArgs {
    fn with_defaults(self) -> Self {
        self
    }
}

impl Defaults for ExperimentArgs {
    fn with_defaults(self) -> Self {
        Self {
            n: self.n.or(Some(8)),
            coupling: self.coupling.or(Some(0.3)),
            omega_seed: self.omega_seed.or(Some(0)),
            n_s: self.n_s.or(Some(10_000)),
            w: self.w.or(Some(6)),
            n_obs: self.n_obs.or(Some(20)),
            repetitions: self.repetitions.or(Some(1000)),
            seed: self.seed.or(Some(0)),
            split: self.split.or(Some(false)),
            variance_model: self.variance_model.or(Some(VarianceModelArg::Theoretical)),
        }
    }
}

impl Defaults for CombinedArgs {
    fn with_defaults(self) -> Self {
        Self {
            n: self.n.or(Some(8)),
            coupling: self.coupling.or(Some(0.3)),
            omega_seed: self.omega_seed.or(Some(0)),
            n_s: self.n_s.or(Some(10_000)),
            w: self
                .w
                .or_else(|| self.pauli.as_ref().and_then(|p| p.parse::<PauliString>().ok()).map(|p| p.weight()))
                .or(Some(6)),
            pauli: self.pauli,
            repetitions: self.repetitions.or(Some(1000)),
            seed: self.seed.or(Some(0)),
            alpha_source: self.alpha_source.or(Some(AlphaSourceArg::Exact)),
            alpha: self.alpha,
        }
    }
}

impl Defaults for DensityArgs {
    fn with_defaults(self) -> Self {
        Self {
            bloch: self.bloch.or(Some(vec![0.0, 0.0, DEFAULT_Z])),
            n_s: self.n_s.or(Some(DEFAULT_N_S)),
            n_points: self.n_points.or(Some(1000)),
            epsilon: self.epsilon.or(Some(DEFAULT_EPSILON)),
            seed: self.seed.or(Some(0)),
        }
    }
}

fn required<T: Clone>(v: &Option<T>, name: &str) -> CliResult<T> {
    v.clone().ok_or_else(|| CliError::invalid(format!("missing parameter {name}")))
}

fn non_empty<T: Clone>(v: &Option<Vec<T>>, name: &str) -> CliResult<Vec<T>> {
    let v = required(v, name)?;
    if v.is_empty() {
        return Err(CliError::invalid(format!("{name} must not be empty")));
    }
    Ok(v)
}

fn header(name: &str, resolved: &impl serde::Serialize) -> CliResult<Value> {
    let resolved = serde_json::to_value(resolved).map_err(Error::from)?;
    Ok(json!({"subcommand": name, "resolved": resolved}))
}

/// Adds the resolved parameters to a library-built header.
fn with_resolved(mut table: Table, resolved: &impl serde::Serialize) -> CliResult<Table> {
    let resolved = serde_json::to_value(resolved).map_err(Error::from)?;
    if let Some(map) = table.config.as_object_mut() {
        map.insert("resolved".into(), resolved);
    }
    Ok(table)
}

fn loss_curve(a: &LossCurveArgs) -> CliResult<Table> {
    let rs = non_empty(&a.r, "r")?;
    let grid = required(&a.epsilon_grid, "epsilon_grid")?;
    let mut minima = Vec::new();
    for &r in &rs {
        let (e, l) = eps_min(r)?;
        minima.push(json!({"r": r, "eps_min": e, "loss_min": l}));
    }
    let mut config = header("loss-curve", a)?;
    config["minima"] = Value::Array(minima);
    let mut table = Table::new(config, &["r", "epsilon", "loss"]);
    for &r in &rs {
        for eps in grid.points() {
            table.push(vec![r.into(), eps.into(), average_loss(r, eps)?.into()]);
        }
    }
    Ok(table)
}

fn worst_case(a: &WorstCaseArgs) -> CliResult<Table> {
    let ws = non_empty(&a.w, "w")?;
    let ns = non_empty(&a.n_s, "n_s")?;
    let grid = required(&a.epsilon_grid, "epsilon_grid")?;
    let mut table = Table::new(header("worst-case", a)?, &["epsilon", "w", "n_s", "mse", "relative_mse"]);
    for &w in &ws {
        for &n_s in &ns {
            let base = worst_case_mse_auto(w, n_s, 0.0)?;
            for eps in grid.points() {
                let mse = worst_case_mse_auto(w, n_s, eps)?;
                table.push(vec![eps.into(), w.into(), n_s.into(), mse.into(), (mse / base).into()]);
            }
        }
    }
    Ok(table)
}

fn best_case(a: &BestCaseArgs) -> CliResult<Table> {
    let ws = non_empty(&a.w, "w")?;
    let ns = non_empty(&a.n_s, "n_s")?;
    let grid = required(&a.epsilon_grid, "epsilon_grid")?;
    let reps = required(&a.reps, "reps")?;
    let seed = required(&a.seed, "seed")?;
    let mut table = Table::new(
        header("best-case", a)?,
        &["epsilon", "w", "n_s", "mse", "standard_error", "relative_mse"],
    );
    for &w in &ws {
        for &n_s in &ns {
            let base = best_case_mse(w, n_s, 0.0, reps, seed)?;
            for eps in grid.points() {
                let e = best_case_mse(w, n_s, eps, reps, seed)?;
                let rel = if base.mse > 0.0 { e.mse / base.mse } else { f64::NAN };
                table.push(vec![
                    eps.into(),
                    w.into(),
                    n_s.into(),
                    e.mse.into(),
                    e.standard_error.into(),
                    rel.into(),
                ]);
            }
        }
    }
    Ok(table)
}

fn snr_report(a: &SnrArgs) -> CliResult<String> {
    let n_s = required(&a.n_s, "n_s")?;
    let report = match (a.mean, a.variance, a.w, a.expectation) {
        (Some(m), Some(v), None, None) => snr(m, v, n_s)?,
        (None, None, Some(w), Some(e)) => shadow_snr(w, e, n_s)?,
        _ => {
            return Err(CliError::invalid(
                "give either --mean and --variance, or --w and --expectation",
            ))
        }
    };
    Ok(report.to_json()?)
}

fn ring(n: &Option<usize>, coupling: &Option<f64>, omega_seed: &Option<u64>) -> CliResult<SpinRingSpec> {
    Ok(SpinRingSpec::random(
        required(n, "n")?,
        required(coupling, "coupling")?,
        required(omega_seed, "omega_seed")?,
    )?)
}

fn experiment(a: &ExperimentArgs) -> CliResult<Table> {
    let spec = ring(&a.n, &a.coupling, &a.omega_seed)?;
    let mut config = ExperimentConfig::new(
        required(&a.n_s, "n_s")?,
        required(&a.w, "w")?,
        required(&a.n_obs, "n_obs")?,
        required(&a.repetitions, "repetitions")?,
        required(&a.seed, "seed")?,
    );
    config.split = a.split.unwrap_or(false);
    config.variance_model = a.variance_model.unwrap_or(VarianceModelArg::Theoretical).into();
    let report = perturbation_experiment(&spec, &config)?;
    with_resolved(report.to_table(), a)
}

fn combined(a: &CombinedArgs) -> CliResult<Table> {
    let spec = ring(&a.n, &a.coupling, &a.omega_seed)?;
    let n_s = required(&a.n_s, "n_s")?;
    let seed = required(&a.seed, "seed")?;
    let source = match required(&a.alpha_source, "alpha_source")? {
        AlphaSourceArg::Exact => AlphaSource::Exact,
        AlphaSourceArg::Plugin => AlphaSource::Plugin,
        AlphaSourceArg::Fixed => AlphaSource::Fixed(required(&a.alpha, "alpha")?),
    };
    let p = match &a.pauli {
        Some(s) => s.parse::<PauliString>()?,
        None => {
            let w = required(&a.w, "w")?;
            let gs = ground_state(&spec.hamiltonian())?;
            default_correction(&gs.state, w, n_s, seed)?
        }
    };
    let report = combined_estimator_demo(&spec, n_s, &p, required(&a.repetitions, "repetitions")?, seed, source)?;
    with_resolved(report.to_table(), a)
}

fn density(a: &DensityArgs) -> CliResult<Table> {
    let b = required(&a.bloch, "bloch")?;
    let [x, y, z] = b.as_slice() else {
        return Err(CliError::invalid("bloch needs exactly three components"));
    };
    let samples = emit_density_samples(
        &BlochVector::new(*x, *y, *z),
        required(&a.n_s, "n_s")?,
        required(&a.n_points, "n_points")?,
        required(&a.epsilon, "epsilon")?,
        required(&a.seed, "seed")?,
    )?;
    with_resolved(samples.to_table(), a)
}

fn write_table(table: &Table, common: &Common, env_dir: Option<PathBuf>, file: String) -> CliResult<Output> {
    let path = match &common.output {
        Some(p) => p.clone(),
        None => common
            .output_dir
            .clone()
            .or(env_dir)
            .unwrap_or_else(|| PathBuf::from("."))
            .join(file),
    };
    write_atomic(&path, table.to_csv().as_bytes())?;
    Ok(Output::File(path))
}

/// Writes `bytes` next to `path` under a temporary name, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let mut tmp_name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    tmp_name.push(format!(".tmp-{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = fs::write(&tmp, bytes).and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::Io(e).into());
    }
    Ok(())
}

