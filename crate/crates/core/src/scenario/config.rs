//! `key = value` scenario configs.
//!
//! One assignment per line, `#` starts a comment. Numeric values accept
//! `pi`, `sqrt(..)` and basic arithmetic, e.g. `phi = -pi/2`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use serde_json::{json, Value};

use super::expr::evaluate;
use crate::error::{Error, Result};
use crate::linalg::c;
use crate::metric::{MetricBuildOptions, EP_BAND};
use crate::model::{ModelParams, PreparedState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    PhaseDiagram,
    UrGrid,
    TimeTrace,
    SpSurface,
    OverlapCurve,
    LindbladCompare,
    SinglePoint,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 7] = [
        ScenarioKind::PhaseDiagram,
        ScenarioKind::UrGrid,
        ScenarioKind::TimeTrace,
        ScenarioKind::SpSurface,
        ScenarioKind::OverlapCurve,
        ScenarioKind::LindbladCompare,
        ScenarioKind::SinglePoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::PhaseDiagram => "phase-diagram",
            ScenarioKind::UrGrid => "ur-grid",
            ScenarioKind::TimeTrace => "time-trace",
            ScenarioKind::SpSurface => "sp-surface",
            ScenarioKind::OverlapCurve => "overlap-curve",
            ScenarioKind::LindbladCompare => "lindblad-compare",
            ScenarioKind::SinglePoint => "single-point",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        ScenarioKind::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Whether the scenario evolves a specific model.
    pub fn needs_model(self) -> bool {
        !matches!(self, ScenarioKind::PhaseDiagram | ScenarioKind::OverlapCurve)
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        crate::dynamics::linspace(self.min, self.max, self.count)
    }

    fn to_json(self) -> Value {
        json!({"min": self.min, "max": self.max, "count": self.count})
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpMode {
    /// `sp_inf` over the `(φ, p)` grid.
    Asymptotic,
    /// `sp` over the `(p, t)` grid at fixed `φ`.
    Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapSource {
    /// The closed-form curve as a function of `η`.
    Formula,
    /// Overlap under the metric built for each `η`.
    Metric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
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

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub model: Option<ModelParams>,
    pub state: PreparedState,
    /// Evaluation time for `ur-grid` and `single-point`.
    pub t: f64,
    pub phi_grid: GridSpec,
    pub p_grid: GridSpec,
    pub theta_grid: GridSpec,
    pub s_over_r_grid: GridSpec,
    pub eta_grid: GridSpec,
    /// `None` means the model's default time grid.
    pub t_grid: Option<GridSpec>,
    pub sp_mode: SpMode,
    pub overlap_source: OverlapSource,
    pub metric: MetricBuildOptions,
    pub dt_max: Option<f64>,
    pub steady_t_min: f64,
    pub steady_tol: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

const KEYS: &[&str] = &[
    "scenario", "r", "s", "theta", "eta", "rho", "p", "phi", "t", "mode", "overlap", "phi_min",
    "phi_max", "phi_count", "p_min", "p_max", "p_count", "theta_min", "theta_max", "theta_count",
    "s_over_r_min", "s_over_r_max", "s_over_r_count", "eta_min", "eta_max", "eta_count", "t_min",
    "t_max", "t_count", "zeta_re", "zeta_im", "b", "tol", "dt_max", "steady_t_min", "steady_tol",
    "format", "out", "threads",
];

/// Unresolved assignments, keyed by name, with the line each came from
/// (`0` for overrides).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (idx, full) in text.lines().enumerate() {
            let line = idx + 1;
            let body = full.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| parse_err(line, format!("expected 'key = value', got '{body}'")))?;
            let key = key.trim();
            if raw.entries.contains_key(key) {
                return Err(parse_err(line, format!("duplicate key '{key}'")));
            }
            raw.insert(line, key, value.trim())?;
        }
        Ok(raw)
    }

    fn insert(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(parse_err(line, format!("unknown key '{key}'")));
        }
        if value.is_empty() {
            return Err(parse_err(line, format!("empty value for '{key}'")));
        }
        self.entries.insert(key.to_string(), (line, value.to_string()));
        Ok(())
    }

    /// Sets or replaces `key`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        self.insert(0, key.trim(), value.trim())
    }

    /// Parses a `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| parse_err(0, format!("expected key=value, got '{pair}'")))?;
        self.set(k, v)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn num(&self, key: &str) -> Result<Option<f64>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => evaluate(v)
                .map(Some)
                .map_err(|m| parse_err(*line, format!("{key}: {m}"))),
        }
    }

    fn num_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.num(key)?.unwrap_or(default))
    }

    fn count(&self, key: &str) -> Result<Option<usize>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| parse_err(*line, format!("{key}: expected a non-negative integer, got '{v}'"))),
        }
    }

    fn grid(&self, name: &str, default: GridSpec) -> Result<GridSpec> {
        let g = GridSpec {
            min: self.num_or(&format!("{name}_min"), default.min)?,
            max: self.num_or(&format!("{name}_max"), default.max)?,
            count: self.count(&format!("{name}_count"))?.unwrap_or(default.count),
        };
        if g.count < 2 {
            return Err(Error::Validation(format!("{name}_count must be at least 2, got {}", g.count)));
        }
        if !(g.max > g.min) {
            return Err(Error::Validation(format!(
                "{name} range must satisfy min < max, got [{}, {}]",
                g.min, g.max
            )));
        }
        Ok(g)
    }

    fn has_any(&self, keys: &[&str]) -> bool {
        keys.iter().any(|k| self.entries.contains_key(*k))
    }

    fn model(&self) -> Result<Option<ModelParams>> {
        let direct = self.has_any(&["r", "theta"]);
        let via_eta = self.has_any(&["eta", "rho"]);
        if direct && via_eta {
            return Err(Error::Validation(
                "give the model either as (r, s, theta) or as (eta, s, rho), not both".into(),
            ));
        }
        if !direct && !via_eta {
            return Ok(None);
        }
        let s = self
            .num("s")?
            .ok_or_else(|| Error::Validation("model needs 's'".into()))?;
        let mp = if direct {
            let r = self
                .num("r")?
                .ok_or_else(|| Error::Validation("model needs 'r'".into()))?;
            let theta = self
                .num("theta")?
                .ok_or_else(|| Error::Validation("model needs 'theta'".into()))?;
            ModelParams::new(r, s, theta)
        } else {
            let eta = self
                .num("eta")?
                .ok_or_else(|| Error::Validation("model needs 'eta'".into()))?;
            ModelParams::from_eta(eta, s, self.num_or("rho", 0.0)?)
        };
        mp.map(Some).map_err(|e| Error::Validation(format!("model: {e}")))
    }

    /// Fills defaults and validates.
    pub fn resolve(&self) -> Result<ScenarioConfig> {
        let scenario = match self.entries.get("scenario") {
            None => return Err(parse_err(0, "missing 'scenario' key")),
            Some((line, v)) => ScenarioKind::from_name(v)
                .ok_or_else(|| parse_err(*line, format!("unknown scenario '{v}'")))?,
        };
        let model = self.model()?;
        if scenario.needs_model() && model.is_none() {
            return Err(Error::Validation(format!(
                "scenario {scenario} needs a model: (r, s, theta) or (eta, s[, rho])"
            )));
        }
        let state = PreparedState::new(self.num_or("p", 1.0)?, self.num_or("phi", 0.0)?)
            .map_err(|e| Error::Validation(format!("state: {e}")))?;
        let pi = std::f64::consts::PI;

        let mut metric = match &model {
            Some(mp) => MetricBuildOptions::for_model(mp),
            None => MetricBuildOptions::default(),
        };
        metric.zeta = c(self.num_or("zeta_re", metric.zeta.re)?, self.num_or("zeta_im", metric.zeta.im)?);
        metric.b = self.num_or("b", metric.b)?;
        metric.tol = self.num_or("tol", EP_BAND)?;
        metric
            .validate()
            .map_err(|e| Error::Validation(format!("metric options: {e}")))?;

        let t_grid = if self.has_any(&["t_min", "t_max", "t_count"]) || scenario == ScenarioKind::LindbladCompare {
            let default_end = if scenario == ScenarioKind::LindbladCompare { 30.0 } else { 10.0 };
            Some(self.grid("t", GridSpec { min: 0.0, max: default_end, count: 301 })?)
        } else {
            None
        };

        let sp_mode = match self.entries.get("mode") {
            None => SpMode::Asymptotic,
            Some((line, v)) => match v.as_str() {
                "asymptotic" => SpMode::Asymptotic,
                "time" => SpMode::Time,
                other => return Err(parse_err(*line, format!("mode must be asymptotic or time, got '{other}'"))),
            },
        };
        let overlap_source = match self.entries.get("overlap") {
            None => OverlapSource::Formula,
            Some((line, v)) => match v.as_str() {
                "formula" => OverlapSource::Formula,
                "metric" => OverlapSource::Metric,
                other => return Err(parse_err(*line, format!("overlap must be formula or metric, got '{other}'"))),
            },
        };
        let format = match self.entries.get("format") {
            None if scenario == ScenarioKind::SinglePoint => OutputFormat::Json,
            None => OutputFormat::Csv,
            Some((line, v)) => match v.as_str() {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                other => return Err(parse_err(*line, format!("format must be csv or json, got '{other}'"))),
            },
        };
        if scenario == ScenarioKind::SinglePoint && format == OutputFormat::Csv {
            return Err(Error::Validation("single-point results are written as json".into()));
        }
        let threads = self.count("threads")?;
        if threads == Some(0) {
            return Err(Error::Validation("threads must be at least 1".into()));
        }
        let dt_max = self.num("dt_max")?;
        if let Some(dt) = dt_max {
            if !(dt > 0.0) {
                return Err(Error::Validation(format!("dt_max must be positive, got {dt}")));
            }
        }
        let steady_tol = self.num_or("steady_tol", 5e-2)?;
        if !(steady_tol > 0.0) {
            return Err(Error::Validation(format!("steady_tol must be positive, got {steady_tol}")));
        }

        Ok(ScenarioConfig {
            scenario,
            model,
            state,
            t: self.num_or("t", 0.0)?,
            phi_grid: self.grid("phi", GridSpec { min: -pi, max: pi, count: 101 })?,
            p_grid: self.grid("p", GridSpec { min: -2.0, max: 2.0, count: 101 })?,
            theta_grid: self.grid("theta", GridSpec { min: -pi, max: pi, count: 200 })?,
            s_over_r_grid: self.grid("s_over_r", GridSpec { min: 0.0, max: 2.0, count: 200 })?,
            eta_grid: self.grid("eta", GridSpec { min: 0.0, max: 3.0, count: 301 })?,
            t_grid,
            sp_mode,
            overlap_source,
            metric,
            dt_max,
            steady_t_min: self.num_or("steady_t_min", 15.0)?,
            steady_tol,
            format,
            out: self.get("out").map(PathBuf::from),
            threads,
        })
    }
}

/// Parses and resolves a config text.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    RawConfig::parse(text)?.resolve()
}

impl ScenarioConfig {
    /// The model, or an error naming the scenario.
    pub fn require_model(&self) -> Result<ModelParams> {
        self.model
            .ok_or_else(|| Error::Validation(format!("scenario {} needs a model", self.scenario)))
    }

    /// The resolved config as recorded in the manifest. Output location and
    /// thread count are left out since they do not affect results.
    pub fn to_json(&self) -> Value {
        let model = self.model.map(|mp| json!({"r": mp.r, "s": mp.s, "theta": mp.theta}));
        json!({
            "scenario": self.scenario.name(),
            "model": model,
            "state": {"p": self.state.p, "phi": self.state.phi},
            "t": self.t,
            "grids": {
                "phi": self.phi_grid.to_json(),
                "p": self.p_grid.to_json(),
                "theta": self.theta_grid.to_json(),
                "s_over_r": self.s_over_r_grid.to_json(),
                "eta": self.eta_grid.to_json(),
                "t": self.t_grid.map(GridSpec::to_json),
            },
            "mode": match self.sp_mode { SpMode::Asymptotic => "asymptotic", SpMode::Time => "time" },
            "overlap": match self.overlap_source { OverlapSource::Formula => "formula", OverlapSource::Metric => "metric" },
            "metric": {
                "zeta_re": self.metric.zeta.re,
                "zeta_im": self.metric.zeta.im,
                "b": self.metric.b,
                "tol": self.metric.tol,
            },
            "dt_max": self.dt_max,
            "steady_t_min": self.steady_t_min,
            "steady_tol": self.steady_tol,
            "format": self.format.extension(),
        })
    }
}
