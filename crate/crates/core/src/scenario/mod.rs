//! Named experiments with typed parameters, run from the command line or a
//! JSON config, writing a results table plus a manifest that can be fed back
//! in as a config.

mod cli;
mod experiments;
mod table;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub use cli::{command, config_from_args, run_cli};
pub use experiments::execute;
pub use table::{Cell, ResultsTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Packet,
    Dirac,
    Dispersion,
    Harmonic,
    Box,
    String,
    Flowtest,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 7] = [
        ScenarioKind::Packet,
        ScenarioKind::Dirac,
        ScenarioKind::Dispersion,
        ScenarioKind::Harmonic,
        ScenarioKind::Box,
        ScenarioKind::String,
        ScenarioKind::Flowtest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Packet => "packet",
            ScenarioKind::Dirac => "dirac",
            ScenarioKind::Dispersion => "dispersion",
            ScenarioKind::Harmonic => "harmonic",
            ScenarioKind::Box => "box",
            ScenarioKind::String => "string",
            ScenarioKind::Flowtest => "flowtest",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            ScenarioKind::Packet => "Gaussian packet width against time, boosted vs at rest",
            ScenarioKind::Dirac => "spinor bilinear relation table at one velocity",
            ScenarioKind::Dispersion => "de Broglie residuals at random wavenumbers",
            ScenarioKind::Harmonic => "oscillator levels from orbit phase closure",
            ScenarioKind::Box => "particle-in-box levels",
            ScenarioKind::String => "open-string constants for several lengths",
            ScenarioKind::Flowtest => "RK4 period-return error against step size",
        }
    }

    /// Scenarios that draw random numbers and therefore need a pinned seed
    /// before their output can serve as a golden file.
    pub fn uses_rng(self) -> bool {
        matches!(self, ScenarioKind::Dispersion)
    }

    pub fn params(self) -> Vec<ParamSpec> {
        use ParamValue::{Float as F, Int as I, List as L};
        let p = ParamSpec::new;
        match self {
            ScenarioKind::Packet => vec![
                p("sigma", F(1.0), "initial width"),
                p("m", F(1.0), "mass"),
                p("gamma", F(5.0), "Lorentz factor of the boosted packet"),
                p("amplitude", F(1.0), "packet amplitude"),
                p("t-max", F(10.0), "final time"),
                p("steps", I(50), "number of time intervals"),
                p("x-nodes", I(512), "spatial samples per time slice"),
                p("k-nodes", I(2048), "wavenumber quadrature nodes"),
            ],
            ScenarioKind::Dirac => vec![
                p("vx", F(0.0), "velocity x component"),
                p("vy", F(0.0), "velocity y component"),
                p("vz", F(0.6), "velocity z component"),
                p("m", F(1.0), "mass"),
            ],
            ScenarioKind::Dispersion => vec![
                p("m", F(1.0), "mass"),
                p("samples", I(100), "number of random wavenumbers"),
                p("k-max", F(10.0), "wavenumbers drawn from [-k-max, k-max]"),
                p("seed", I(0), "RNG seed"),
            ],
            ScenarioKind::Harmonic => vec![
                p("omega", F(1.0), "angular frequency"),
                p("m", F(1.0), "mass"),
                p("x0", F(1.0), "orbit amplitude"),
                p("n-max", I(5), "highest level"),
                p("dt", F(1e-3), "integrator step"),
            ],
            ScenarioKind::Box => vec![
                p("l", F(1.0), "box length"),
                p("m", F(1.0), "mass"),
                p("n-max", I(10), "highest level"),
            ],
            ScenarioKind::String => vec![p("l-s", L(vec![0.5, 1.0, 2.0]), "string lengths")],
            ScenarioKind::Flowtest => vec![
                p("omega", F(2.0), "oscillator frequency"),
                p("dt", L(vec![1e-2, 1e-3, 1e-4]), "step sizes"),
            ],
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::validation(format!("unknown scenario '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    List(Vec<f64>),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::Float(x) => write!(f, "{x}"),
            ParamValue::List(l) => {
                let parts: Vec<String> = l.iter().map(|x| x.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl ParamValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Int(i) => Some(*i as f64),
            ParamValue::Float(f) => Some(*f),
            ParamValue::List(_) => None,
        }
    }

    fn type_name(&self) -> &'static str {
        match self {
            ParamValue::Int(_) => "integer",
            ParamValue::Float(_) => "number",
            ParamValue::List(_) => "list of numbers",
        }
    }

    /// Coerces `self` to the type of `template`.
    fn conform(self, template: &ParamValue, key: &str) -> Result<ParamValue> {
        let bad = |v: &ParamValue| {
            Error::validation(format!("parameter '{key}' expects {}, got {v}", template.type_name()))
        };
        let out = match (template, self) {
            (ParamValue::Float(_), ParamValue::Int(i)) => ParamValue::Float(i as f64),
            (ParamValue::Float(_), v @ ParamValue::Float(_)) => v,
            (ParamValue::Int(_), v @ ParamValue::Int(_)) => v,
            (ParamValue::Int(_), ParamValue::Float(f)) if f.fract() == 0.0 && f.abs() < 9.0e15 => {
                ParamValue::Int(f as i64)
            }
            (ParamValue::List(_), v @ ParamValue::List(_)) => v,
            (ParamValue::List(_), ParamValue::Int(i)) => ParamValue::List(vec![i as f64]),
            (ParamValue::List(_), ParamValue::Float(f)) => ParamValue::List(vec![f]),
            (_, v) => return Err(bad(&v)),
        };
        let finite = match &out {
            ParamValue::Float(f) => f.is_finite(),
            ParamValue::List(v) => !v.is_empty() && v.iter().all(|f| f.is_finite()),
            ParamValue::Int(_) => true,
        };
        if !finite {
            return Err(Error::validation(format!("parameter '{key}' must be finite and non-empty")));
        }
        Ok(out)
    }

    /// Parses a command-line string into the type of `template`.
    pub fn parse_like(template: &ParamValue, key: &str, s: &str) -> Result<ParamValue> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::validation(format!("parameter '{key}': cannot parse '{t}' as a number")))
        };
        let raw = match template {
            ParamValue::Int(_) => ParamValue::Int(
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::validation(format!("parameter '{key}': cannot parse '{s}' as an integer")))?,
            ),
            ParamValue::Float(_) => ParamValue::Float(num(s)?),
            ParamValue::List(_) => ParamValue::List(s.split(',').map(num).collect::<Result<_>>()?),
        };
        raw.conform(template, key)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamSpec {
    pub key: &'static str,
    pub default: ParamValue,
    pub help: &'static str,
}

impl ParamSpec {
    fn new(key: &'static str, default: ParamValue, help: &'static str) -> Self {
        Self { key, default, help }
    }
}

/// Fully resolved parameters of one scenario, in key order.
pub type Params = BTreeMap<String, ParamValue>;

/// Merges overrides into the scenario defaults. Unknown keys are rejected.
pub fn resolve_params(kind: ScenarioKind, overrides: &Params) -> Result<Params> {
    let specs = kind.params();
    let mut out: Params = specs.iter().map(|s| (s.key.to_owned(), s.default.clone())).collect();
    for (key, value) in overrides {
        let spec = specs.iter().find(|s| s.key == key).ok_or_else(|| {
            let known: Vec<_> = specs.iter().map(|s| s.key).collect();
            Error::validation(format!("unknown parameter '{key}' for {kind} (known: {})", known.join(", ")))
        })?;
        out.insert(key.clone(), value.clone().conform(&spec.default, key)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::validation(format!("unknown format '{s}' (csv or json)"))),
        }
    }
}

/// One scenario invocation. `params` holds only explicit overrides; defaults
/// are filled in by [`resolve_params`] at run time.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub params: Params,
    pub output_path: PathBuf,
    pub format: OutputFormat,
}

/// On-disk config. Manifests parse as configs: their extra fields are ignored.
#[derive(Debug, Deserialize)]
struct ConfigFile {
    scenario: Option<ScenarioKind>,
    #[serde(default)]
    params: BTreeMap<String, Value>,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn new(scenario: ScenarioKind) -> Self {
        Self { scenario, params: Params::new(), output_path: PathBuf::from("."), format: OutputFormat::Csv }
    }

    pub fn with_param(mut self, key: &str, value: ParamValue) -> Self {
        self.params.insert(key.to_owned(), value);
        self
    }

    pub fn with_output(mut self, dir: impl Into<PathBuf>) -> Self {
        self.output_path = dir.into();
        self
    }

    pub fn with_format(mut self, format: OutputFormat) -> Self {
        self.format = format;
        self
    }

    /// Reads a JSON config (or a manifest from an earlier run). When
    /// `scenario` is given it must agree with the file's, if the file has one.
    pub fn from_json_file(path: &Path, scenario: Option<ScenarioKind>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_json_str(&text, scenario)
    }

    pub fn from_json_str(text: &str, scenario: Option<ScenarioKind>) -> Result<Self> {
        let file: ConfigFile = serde_json::from_str(text)?;
        let kind = match (scenario, file.scenario) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::validation(format!("config is for scenario '{b}', not '{a}'")))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(Error::validation("config does not name a scenario")),
        };
        let mut params = Params::new();
        for (key, value) in file.params {
            let value: ParamValue = serde_json::from_value(value.clone())
                .map_err(|_| Error::validation(format!("parameter '{key}' has unsupported value {value}")))?;
            params.insert(key, value);
        }
        // fail early on unknown keys
        resolve_params(kind, &params)?;
        let mut cfg = Self::new(kind);
        cfg.params = params;
        if let Some(f) = file.format {
            cfg.format = f;
        }
        if let Some(out) = file.out {
            cfg.output_path = out;
        }
        Ok(cfg)
    }

    pub fn resolved_params(&self) -> Result<Params> {
        resolve_params(self.scenario, &self.params)
    }

    /// The `seed` parameter, if the scenario has one.
    pub fn seed(&self) -> Result<Option<u64>> {
        Ok(match self.resolved_params()?.get("seed") {
            Some(ParamValue::Int(s)) if *s >= 0 => Some(*s as u64),
            Some(v) => return Err(Error::validation(format!("seed must be a non-negative integer, got {v}"))),
            None => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub scenario: ScenarioKind,
    pub params: Params,
    pub version: String,
    pub timestamp: String,
    pub duration_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub results: PathBuf,
    pub manifest: PathBuf,
    pub table: ResultsTable,
}

/// Runs a scenario and writes `<scenario>.<csv|json>` and
/// `<scenario>.manifest.json` into the output directory.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunArtifacts> {
    let params = cfg.resolved_params()?;
    let started = Instant::now();
    let timestamp = chrono::Utc::now().to_rfc3339();
    log::info!("running {} with {:?}", cfg.scenario, params);
    let table = execute(cfg.scenario, &params)?;
    let duration_s = started.elapsed().as_secs_f64();

    fs::create_dir_all(&cfg.output_path)?;
    let results = cfg.output_path.join(format!("{}.{}", cfg.scenario, cfg.format.extension()));
    let body = match cfg.format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => table.to_json(),
    };
    fs::write(&results, body)?;

    let manifest = Manifest {
        scenario: cfg.scenario,
        params,
        version: env!("CARGO_PKG_VERSION").to_owned(),
        timestamp,
        duration_s,
    };
    let manifest_path = cfg.output_path.join(format!("{}.manifest.json", cfg.scenario));
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(RunArtifacts { results, manifest: manifest_path, table })
}

/// Writes the canonical CSV for regression comparison to
/// `<dir>/<scenario>.golden.csv`. Randomized scenarios must pin `seed`.
pub fn emit_golden(cfg: &ScenarioConfig, dir: &Path) -> Result<PathBuf> {
    if cfg.scenario.uses_rng() && !cfg.params.contains_key("seed") {
        return Err(Error::validation(format!(
            "scenario '{}' is randomized; pass an explicit seed to emit a golden file",
            cfg.scenario
        )));
    }
    let table = execute(cfg.scenario, &cfg.resolved_params()?)?;
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.golden.csv", cfg.scenario));
    fs::write(&path, table.to_csv())?;
    Ok(path)
}
