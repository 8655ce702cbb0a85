//! Config-driven scenario runner behind the `dephase` binary.
//!
//! A config file is a list of `key = value` lines. Lines before the first
//! `[section]` header are defaults shared by every section; each section is
//! one run. A file without sections describes a single run. Command-line
//! flags override the file for every run. `#` and `;` start comments.
//!
//! Units: `t_max` is in `1/omega_c`, `omega_max` in `omega_c`, the CSV time
//! column is `omega_c * t`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{self, RegimeReport};
use crate::channel::{BathMode, BathParams};
use crate::error::Error;
use crate::hilbert::{pure_density, LevelSystem, NamedState, StateVector, SystemKind};
use crate::measures;

/// Amplitude lists further than this from unit norm are rejected.
pub const AMPLITUDE_REJECT_TOL: f64 = 1e-9;
/// Amplitude lists further than this from unit norm are renormalized with a
/// warning.
pub const AMPLITUDE_WARN_TOL: f64 = 1e-12;
/// Number of points of the alpha sweep.
pub const SWEEP_POINTS: usize = 201;

pub const TIME_SERIES_HEADER: &str = "t,concurrence,coherence,linear_entropy";
pub const SWEEP_HEADER: &str = "alpha,concurrence";

const KEYS: &[&str] = &[
    "system",
    "state",
    "alpha",
    "amplitudes",
    "temperature_ratio",
    "j0",
    "omega_c",
    "omega0",
    "mode",
    "n_modes",
    "omega_max",
    "t_max",
    "steps",
    "sweep",
    "out",
    "report",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(Error),
    #[error("cannot read config {path}: {source}")]
    UnreadableConfig {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    UnwritableOutput {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::UnreadableConfig { .. } => 4,
            CliError::UnwritableOutput { .. } => 5,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e)
        } else {
            CliError::Config(e.to_string())
        }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Debug, Clone, Default, Parser)]
#[command(name = "dephase", version, about = "Collective pure-dephasing scenario runner")]
pub struct Args {
    /// Run configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory that relative output paths are resolved against.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    /// Comma-separated amplitudes, e.g. `0.6,0.8i,0,0`.
    #[arg(long, allow_hyphen_values = true)]
    pub amplitudes: Option<String>,
    /// `T / T_c`, decimal or fraction such as `1/60`.
    #[arg(long)]
    pub temperature_ratio: Option<String>,
    #[arg(long)]
    pub j0: Option<String>,
    #[arg(long)]
    pub omega_c: Option<String>,
    #[arg(long)]
    pub omega0: Option<String>,
    #[arg(long, value_parser = ["auto", "zero-t", "low-t", "quadrature", "discrete"])]
    pub mode: Option<String>,
    #[arg(long)]
    pub n_modes: Option<String>,
    #[arg(long)]
    pub omega_max: Option<String>,
    #[arg(long)]
    pub t_max: Option<String>,
    #[arg(long)]
    pub steps: Option<String>,
    /// `alpha` for the decoherence-free family sweep.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Output CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output JSON report.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

impl Args {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.to_string_lossy().into_owned());
        let pairs = [
            ("system", self.system.clone()),
            ("state", self.state.clone()),
            ("alpha", self.alpha.clone()),
            ("amplitudes", self.amplitudes.clone()),
            ("temperature_ratio", self.temperature_ratio.clone()),
            ("j0", self.j0.clone()),
            ("omega_c", self.omega_c.clone()),
            ("omega0", self.omega0.clone()),
            ("mode", self.mode.clone()),
            ("n_modes", self.n_modes.clone()),
            ("omega_max", self.omega_max.clone()),
            ("t_max", self.t_max.clone()),
            ("steps", self.steps.clone()),
            ("sweep", self.sweep.clone()),
            ("out", path(&self.out)),
            ("report", path(&self.report)),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect()
    }
}

/// Raw key/value pairs of one run before validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Section {
    pub name: Option<String>,
    pub values: BTreeMap<String, String>,
}

/// Parse config text into its runs, with the shared defaults merged in.
pub fn parse_config(text: &str) -> Result<Vec<Section>, CliError> {
    let mut shared = Section::default();
    let mut sections: Vec<Section> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.find(['#', ';']).map_or(raw, |i| &raw[..i]).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .map(str::trim)
                .filter(|n| !n.is_empty())
                .ok_or_else(|| config_err(format!("line {lineno}: malformed section header '{line}'")))?;
            if sections.iter().any(|s| s.name.as_deref() == Some(name)) {
                return Err(config_err(format!("line {lineno}: duplicate section [{name}]")));
            }
            sections.push(Section {
                name: Some(name.to_string()),
                values: BTreeMap::new(),
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("line {lineno}: expected 'key = value', got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(config_err(format!("line {lineno}: unknown key '{key}'")));
        }
        let target = sections.last_mut().unwrap_or(&mut shared);
        if target.values.insert(key.to_string(), value.to_string()).is_some() {
            return Err(config_err(format!("line {lineno}: duplicate key '{key}'")));
        }
    }
    if sections.is_empty() {
        return Ok(vec![shared]);
    }
    for s in &mut sections {
        for (k, v) in &shared.values {
            s.values.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }
    Ok(sections)
}

/// The initial condition of a time-series run.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Named { name: String, state: NamedState },
    Amplitudes(Vec<C64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    TimeSeries,
    AlphaSweep,
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub task: Task,
    pub system: SystemKind,
    /// `None` only for sweeps.
    pub state: Option<InitialState>,
    pub temperature_ratio: f64,
    pub j0: f64,
    pub omega_c: f64,
    pub omega0: f64,
    pub mode: BathMode,
    /// In units of `1/omega_c`.
    pub t_max: f64,
    pub steps: usize,
    pub out: PathBuf,
    /// Not written for sweeps.
    pub report: Option<PathBuf>,
}

fn parse_f64(key: &str, v: &str) -> Result<f64, CliError> {
    let parsed = match v.split_once('/') {
        Some((num, den)) => num
            .trim()
            .parse::<f64>()
            .ok()
            .zip(den.trim().parse::<f64>().ok())
            .map(|(n, d)| n / d),
        None => v.parse().ok(),
    };
    parsed
        .filter(|x| x.is_finite())
        .ok_or_else(|| config_err(format!("{key}: expected a finite number, got '{v}'")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize, CliError> {
    v.parse()
        .map_err(|_| config_err(format!("{key}: expected a non-negative integer, got '{v}'")))
}

fn parse_complex(key: &str, v: &str) -> Result<C64, CliError> {
    let compact: String = v.chars().filter(|c| !c.is_whitespace()).collect();
    compact
        .parse::<C64>()
        .ok()
        .filter(|z| z.is_finite())
        .ok_or_else(|| config_err(format!("{key}: expected a complex number, got '{v}'")))
}

fn parse_amplitudes(v: &str) -> Result<Vec<C64>, CliError> {
    let inner = v.trim();
    let inner = inner
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(inner);
    inner.split(',').map(|a| parse_complex("amplitudes", a)).collect()
}

/// Resolve one section (plus overrides) into a run.
pub fn resolve(section: &Section, default_name: &str) -> Result<RunConfig, CliError> {
    let get = |k: &str| section.values.get(k).map(String::as_str);
    let name = section.name.clone().unwrap_or_else(|| default_name.to_string());

    let task = match get("sweep") {
        None => Task::TimeSeries,
        Some("alpha") => Task::AlphaSweep,
        Some(other) => return Err(config_err(format!("sweep: only 'alpha' is supported, got '{other}'"))),
    };
    let declared = get("system")
        .map(|s| s.parse::<SystemKind>())
        .transpose()?;
    let alpha = get("alpha").map(|v| parse_complex("alpha", v)).transpose()?;

    let (system, state) = match task {
        Task::AlphaSweep => {
            for k in ["state", "amplitudes", "alpha"] {
                if get(k).is_some() {
                    return Err(config_err(format!("'{k}' cannot be combined with sweep = alpha")));
                }
            }
            let system = declared.ok_or_else(|| config_err("sweep = alpha needs 'system'"))?;
            (system, None)
        }
        Task::TimeSeries => match (get("state"), get("amplitudes")) {
            (Some(_), Some(_)) => return Err(config_err("give either 'state' or 'amplitudes', not both")),
            (None, None) => return Err(config_err("missing 'state' or 'amplitudes'")),
            (Some(s), None) => {
                let state = NamedState::parse(s, alpha)?;
                if alpha.is_some() && !matches!(state, NamedState::DfsFermion(_) | NamedState::DfsQubit(_)) {
                    return Err(config_err(format!("'alpha' does not apply to state '{s}'")));
                }
                let kind = state.system_kind();
                if declared.is_some_and(|d| d != kind) {
                    return Err(config_err(format!("state '{s}' belongs to the {kind} system")));
                }
                (
                    kind,
                    Some(InitialState::Named {
                        name: s.to_string(),
                        state,
                    }),
                )
            }
            (None, Some(a)) => {
                if alpha.is_some() {
                    return Err(config_err("'alpha' does not apply to explicit amplitudes"));
                }
                let amps = parse_amplitudes(a)?;
                let kind = match (declared, amps.len()) {
                    (Some(d), _) => d,
                    (None, 6) => SystemKind::Fermionic,
                    (None, 4) => SystemKind::Qubit,
                    (None, n) => return Err(config_err(format!("cannot infer a system from {n} amplitudes"))),
                };
                if amps.len() != kind.dim() {
                    return Err(config_err(format!(
                        "{kind} system needs {} amplitudes, got {}",
                        kind.dim(),
                        amps.len()
                    )));
                }
                (kind, Some(InitialState::Amplitudes(amps)))
            }
        },
    };

    let number = |k: &str, default: f64| get(k).map_or(Ok(default), |v| parse_f64(k, v));
    let temperature_ratio = number("temperature_ratio", 0.0)?;
    let j0 = number("j0", 1.0)?;
    let omega_c = number("omega_c", 1.0)?;
    let omega0 = number("omega0", 0.0)?;
    let t_max = number("t_max", 10.0)?;
    let steps = get("steps").map_or(Ok(2001), |v| parse_usize("steps", v))?;
    if !(t_max > 0.0) {
        return Err(config_err(format!("t_max must be > 0, got {t_max}")));
    }
    if steps < 2 {
        return Err(config_err(format!("steps must be >= 2, got {steps}")));
    }
    if omega_c <= 0.0 {
        return Err(config_err(format!("omega_c must be > 0, got {omega_c}")));
    }

    let mode_name = get("mode").unwrap_or("auto");
    if mode_name != "discrete" && (get("n_modes").is_some() || get("omega_max").is_some()) {
        return Err(config_err("'n_modes' and 'omega_max' only apply to mode = discrete"));
    }
    let mode = match mode_name {
        "auto" if temperature_ratio == 0.0 => BathMode::ClosedFormZeroT,
        "auto" => BathMode::ClosedFormLowT,
        "zero-t" => BathMode::ClosedFormZeroT,
        "low-t" => BathMode::ClosedFormLowT,
        "quadrature" => BathMode::Quadrature,
        "discrete" => BathMode::DiscreteModes {
            n_modes: get("n_modes").map_or(Ok(4000), |v| parse_usize("n_modes", v))?,
            omega_max: number("omega_max", 40.0)? * omega_c,
        },
        other => return Err(config_err(format!("unknown mode '{other}'"))),
    };
    // Validate the bath now so a bad combination is a config error.
    BathParams::from_temperature_ratio(j0, omega_c, temperature_ratio, mode)?;
    LevelSystem::new(system, omega0)?;

    let out = get("out").map_or_else(|| PathBuf::from(format!("{name}.csv")), PathBuf::from);
    let report = match task {
        Task::AlphaSweep if get("report").is_some() => {
            return Err(config_err("sweep = alpha writes no report"));
        }
        Task::AlphaSweep => None,
        Task::TimeSeries => Some(get("report").map_or_else(|| out.with_extension("json"), PathBuf::from)),
    };

    Ok(RunConfig {
        name,
        task,
        system,
        state,
        temperature_ratio,
        j0,
        omega_c,
        omega0,
        mode,
        t_max,
        steps,
        out,
        report,
    })
}

/// All runs described by `args`: the config file (if any) with the flags
/// applied on top.
pub fn load_runs(args: &Args) -> Result<Vec<RunConfig>, CliError> {
    let (mut sections, default_name) = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::UnreadableConfig {
                path: path.clone(),
                source,
            })?;
            let stem = path
                .file_stem()
                .map_or_else(|| "run".to_string(), |s| s.to_string_lossy().into_owned());
            (parse_config(&text)?, stem)
        }
        None => (vec![Section::default()], "run".to_string()),
    };
    if sections.len() > 1 && (args.out.is_some() || args.report.is_some()) {
        return Err(config_err("--out and --report need a config with a single run"));
    }
    let overrides = args.overrides();
    for s in &mut sections {
        for (k, v) in &overrides {
            s.values.insert(k.to_string(), v.clone());
        }
        // A state flag replaces the file's choice of initial condition.
        if args.state.is_some() && args.amplitudes.is_none() {
            s.values.remove("amplitudes");
        }
        if args.amplitudes.is_some() && args.state.is_none() {
            s.values.remove("state");
        }
    }
    let runs = sections
        .iter()
        .map(|s| resolve(s, &default_name))
        .collect::<Result<Vec<_>, _>>()?;
    let mut seen = std::collections::HashSet::new();
    for r in &runs {
        if !seen.insert(&r.out) {
            return Err(config_err(format!("two runs write {}", r.out.display())));
        }
    }
    Ok(runs)
}

/// `%.15g`-style formatting: 15 significant digits, trailing zeros
/// stripped, exponent form outside `1e-4 <= |x| < 1e15`.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 15;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS).contains(&exp) {
        let fixed = format!("{:.*}", (DIGITS - 1 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Serialize)]
struct BathReport {
    j0: f64,
    omega_c: f64,
    /// `null` at zero temperature.
    beta: Option<f64>,
    temperature_ratio: f64,
    mode: BathMode,
}

#[derive(Debug, Clone, Serialize)]
struct Report {
    name: String,
    system: SystemKind,
    state: Option<String>,
    amplitudes: Vec<[f64; 2]>,
    omega0: f64,
    t_max: f64,
    steps: usize,
    bath: BathReport,
    regime: RegimeReport,
    saturation_entropy: f64,
    csv: String,
}

/// Files written by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub name: String,
    pub csv: PathBuf,
    pub report: Option<PathBuf>,
    pub regime: Option<RegimeReport>,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let wrap = |source| CliError::UnwritableOutput {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(wrap)?;
    }
    fs::write(path, contents).map_err(wrap)
}

fn initial_state(config: &RunConfig) -> Result<StateVector, CliError> {
    match config.state.as_ref().expect("time-series runs have a state") {
        InitialState::Named { state, .. } => Ok(state.build(config.omega0)?),
        InitialState::Amplitudes(amps) => {
            let system = LevelSystem::new(config.system, config.omega0)?;
            let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            let dev = (norm_sqr - 1.0).abs();
            if dev > AMPLITUDE_REJECT_TOL {
                return Err(config_err(format!("amplitudes have norm^2 = {norm_sqr}, expected 1")));
            }
            if dev > AMPLITUDE_WARN_TOL {
                log::warn!("renormalizing amplitudes with norm^2 = {norm_sqr}");
            }
            Ok(StateVector::normalized(system, amps.clone())?)
        }
    }
}

/// Time-series CSV of a run.
pub fn time_series_csv(config: &RunConfig) -> Result<(String, StateVector, BathParams), CliError> {
    let params = BathParams::from_temperature_ratio(config.j0, config.omega_c, config.temperature_ratio, config.mode)?;
    let psi = initial_state(config)?;
    let series = analysis::time_series(&psi, &params, config.t_max / config.omega_c, config.steps)?;
    let mut csv = String::with_capacity(80 * series.len());
    csv.push_str(TIME_SERIES_HEADER);
    csv.push('\n');
    for k in 0..series.len() {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            format_sig(series.times[k]),
            format_sig(series.concurrence[k]),
            format_sig(series.coherence[k]),
            format_sig(series.linear_entropy[k])
        );
    }
    Ok((csv, psi, params))
}

/// `alpha,concurrence` over the decoherence-free family.
pub fn sweep_csv(system: SystemKind) -> Result<String, CliError> {
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for k in 0..SWEEP_POINTS {
        let alpha = k as f64 / (SWEEP_POINTS - 1) as f64;
        let state = match system {
            SystemKind::Fermionic => NamedState::DfsFermion(C64::new(alpha, 0.0)),
            SystemKind::Qubit => NamedState::DfsQubit(C64::new(alpha, 0.0)),
        };
        let c = measures::concurrence(&pure_density(&state.build(0.0)?))?;
        let _ = writeln!(csv, "{},{}", format_sig(alpha), format_sig(c));
    }
    Ok(csv)
}

/// Execute one run, writing its artifacts below `out_dir`.
pub fn run(config: &RunConfig, out_dir: &Path) -> Result<RunOutcome, CliError> {
    let csv_path = out_dir.join(&config.out);
    match config.task {
        Task::AlphaSweep => {
            write_file(&csv_path, &sweep_csv(config.system)?)?;
            Ok(RunOutcome {
                name: config.name.clone(),
                csv: csv_path,
                report: None,
                regime: None,
            })
        }
        Task::TimeSeries => {
            let (csv, psi, params) = time_series_csv(config)?;
            let regime = analysis::analyze_on_grid(&psi, &params, config.t_max / config.omega_c, config.steps)?;
            write_file(&csv_path, &csv)?;
            let report_path = config.report.as_ref().map(|r| out_dir.join(r));
            if let Some(path) = &report_path {
                let state = match &config.state {
                    Some(InitialState::Named { name, .. }) => Some(name.clone()),
                    _ => None,
                };
                let report = Report {
                    name: config.name.clone(),
                    system: config.system,
                    state,
                    amplitudes: psi.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
                    omega0: config.omega0,
                    t_max: config.t_max,
                    steps: config.steps,
                    bath: BathReport {
                        j0: params.j0(),
                        omega_c: params.omega_c(),
                        beta: params.beta().is_finite().then(|| params.beta()),
                        temperature_ratio: params.temperature_ratio(),
                        mode: params.mode(),
                    },
                    regime: regime.clone(),
                    saturation_entropy: analysis::saturation_entropy(&psi),
                    csv: config.out.to_string_lossy().into_owned(),
                };
                let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
                json.push('\n');
                write_file(path, &json)?;
            }
            Ok(RunOutcome {
                name: config.name.clone(),
                csv: csv_path,
                report: report_path,
                regime: Some(regime),
            })
        }
    }
}

/// Load and execute every run described by `args`.
pub fn run_all(args: &Args) -> Result<Vec<RunOutcome>, CliError> {
    load_runs(args)?.iter().map(|c| run(c, &args.out_dir)).collect()
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_all(&args) {
        Ok(outcomes) => {
            for o in outcomes {
                match &o.regime {
                    Some(r) => println!(
                        "{}: {} ({:?}, {} events)",
                        o.name,
                        o.csv.display(),
                        r.regime,
                        r.events.len()
                    ),
                    None => println!("{}: {}", o.name, o.csv.display()),
                }
            }
            0
        }
        Err(e) => {
            eprintln!("dephase: {e}");
            e.exit_code()
        }
    }
}
