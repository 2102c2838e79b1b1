use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::config::{OutputFormat, OverlapSource, ScenarioConfig, ScenarioKind, SpMode};
use super::RunError;
use crate::dynamics::{asymptotic_sp, default_grid, evolve, NumericSetup, Snapshot};
use crate::error::Result;
use crate::lindblad::{compare_steady_state, integrate, model_lindblad_config, DensityMatrix};
use crate::metric::{build_metric, eigenstate_overlap, SpectralRegime};
use crate::model::{
    derive, discriminant, eigen_overlap, hamiltonian, initial_state, regime_from_d, ModelParams,
    PreparedState,
};

/// Version of the column layouts below. Bumped whenever a header changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Tag(&'static str),
}

/// One scenario's tabular result, rows in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    pub regimes: Vec<SpectralRegime>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Table(Table),
    Record(Value),
}

/// The result of a scenario before it is written anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutput {
    pub scenario: ScenarioKind,
    pub payload: Payload,
    /// Scenario-specific diagnostics recorded in the manifest.
    pub summary: Option<Value>,
}

fn numerical(context: String) -> impl FnOnce(crate::Error) -> RunError {
    move |source| RunError::Numerical { context, source }
}

/// Evaluates `f` on every point in parallel. The first failure in grid order
/// is reported.
fn par_grid<P, T, F, C>(points: &[P], f: F, ctx: C) -> std::result::Result<Vec<T>, RunError>
where
    P: Sync,
    T: Send,
    F: Fn(&P) -> Result<T> + Sync,
    C: Fn(&P) -> String + Sync,
{
    let results: Vec<Result<T>> = points.par_iter().map(&f).collect();
    let mut out = Vec::with_capacity(points.len());
    for (pt, r) in points.iter().zip(results) {
        out.push(r.map_err(numerical(ctx(pt)))?);
    }
    Ok(out)
}

fn product(outer: &[f64], inner: &[f64]) -> Vec<(f64, f64)> {
    outer
        .iter()
        .flat_map(|&a| inner.iter().map(move |&b| (a, b)))
        .collect()
}

fn model(cfg: &ScenarioConfig) -> std::result::Result<ModelParams, RunError> {
    cfg.require_model().map_err(RunError::Config)
}

fn times(cfg: &ScenarioConfig, mp: &ModelParams) -> Vec<f64> {
    match cfg.t_grid {
        Some(g) => g.points(),
        None => default_grid(mp),
    }
}

/// A numeric setup reusing one metric for many initial states.
fn setup_for(base: &NumericSetup, ps: &PreparedState) -> Result<NumericSetup> {
    let psi0 = evolve(&base.h, &base.metric, &initial_state(ps), 0.0)?;
    Ok(NumericSetup {
        state0: *ps,
        psi0,
        ..base.clone()
    })
}

fn base_setup(cfg: &ScenarioConfig, mp: &ModelParams) -> std::result::Result<NumericSetup, RunError> {
    NumericSetup::new(mp, &cfg.state, &cfg.metric).map_err(numerical(format!(
        "metric for r={}, s={}, theta={}",
        mp.r, mp.s, mp.theta
    )))
}

fn phase_diagram(cfg: &ScenarioConfig) -> std::result::Result<Table, RunError> {
    let pts = product(&cfg.theta_grid.points(), &cfg.s_over_r_grid.points());
    let mut rows = Vec::with_capacity(pts.len());
    let mut regimes = Vec::with_capacity(pts.len());
    for (theta, sr) in pts {
        let d = discriminant(theta, sr);
        let regime = regime_from_d(d);
        rows.push(vec![Cell::Num(theta), Cell::Num(sr), Cell::Num(d), Cell::Tag(regime.tag())]);
        regimes.push(regime);
    }
    Ok(Table {
        columns: &["theta", "s_over_r", "d", "regime"],
        rows,
        regimes,
    })
}

fn ur_grid(cfg: &ScenarioConfig) -> std::result::Result<Table, RunError> {
    let mp = model(cfg)?;
    let base = base_setup(cfg, &mp)?;
    let pts = product(&cfg.phi_grid.points(), &cfg.p_grid.points());
    let t = cfg.t;
    let urs = par_grid(
        &pts,
        |&(phi, p)| {
            let s = setup_for(&base, &PreparedState::new(p, phi)?)?;
            Ok(s.snapshot(t)?.ur_gap)
        },
        |&(phi, p)| format!("phi={phi}, p={p}, t={t}"),
    )?;
    let regime = base.metric.regime();
    Ok(Table {
        columns: &["phi", "p", "ur"],
        rows: pts
            .iter()
            .zip(urs)
            .map(|(&(phi, p), ur)| vec![Cell::Num(phi), Cell::Num(p), Cell::Num(ur)])
            .collect(),
        regimes: vec![regime; pts.len()],
    })
}

fn trace_row(s: &Snapshot) -> Vec<Cell> {
    [s.t, s.sx, s.sy, s.sz, s.ur_gap, s.sp, s.theta_s, s.varphi_s]
        .into_iter()
        .map(Cell::Num)
        .collect()
}

fn time_trace(cfg: &ScenarioConfig) -> std::result::Result<Table, RunError> {
    let mp = model(cfg)?;
    let base = base_setup(cfg, &mp)?;
    let ts = times(cfg, &mp);
    let snaps = par_grid(&ts, |&t| base.snapshot(t), |&t| format!("t={t}"))?;
    Ok(Table {
        columns: &["t", "sx", "sy", "sz", "ur", "sp", "theta_s", "varphi_s"],
        rows: snaps.iter().map(trace_row).collect(),
        regimes: vec![base.metric.regime(); ts.len()],
    })
}

fn sp_surface(cfg: &ScenarioConfig) -> std::result::Result<Table, RunError> {
    let mp = model(cfg)?;
    match cfg.sp_mode {
        SpMode::Asymptotic => {
            let pts = product(&cfg.phi_grid.points(), &cfg.p_grid.points());
            let sps = par_grid(
                &pts,
                |&(phi, p)| asymptotic_sp(&mp, &PreparedState::new(p, phi)?),
                |&(phi, p)| format!("phi={phi}, p={p}"),
            )?;
            Ok(Table {
                columns: &["phi", "p", "sp_inf"],
                rows: pts
                    .iter()
                    .zip(sps)
                    .map(|(&(phi, p), sp)| vec![Cell::Num(phi), Cell::Num(p), Cell::Num(sp)])
                    .collect(),
                regimes: vec![mp.regime(); pts.len()],
            })
        }
        SpMode::Time => {
            let base = base_setup(cfg, &mp)?;
            let phi = cfg.state.phi;
            let pts = product(&cfg.p_grid.points(), &times(cfg, &mp));
            let sps = par_grid(
                &pts,
                |&(p, t)| {
                    let s = setup_for(&base, &PreparedState::new(p, phi)?)?;
                    Ok(s.snapshot(t)?.sp)
                },
                |&(p, t)| format!("phi={phi}, p={p}, t={t}"),
            )?;
            Ok(Table {
                columns: &["p", "t", "sp"],
                rows: pts
                    .iter()
                    .zip(sps)
                    .map(|(&(p, t), sp)| vec![Cell::Num(p), Cell::Num(t), Cell::Num(sp)])
                    .collect(),
                regimes: vec![base.metric.regime(); pts.len()],
            })
        }
    }
}

fn overlap_curve(cfg: &ScenarioConfig) -> std::result::Result<Table, RunError> {
    let (s, rho) = cfg.model.map_or((1.0, 0.0), |mp| (mp.s, mp.rho()));
    let etas = cfg.eta_grid.points();
    let source = cfg.overlap_source;
    let metric_opts = cfg.metric;
    let vals = par_grid(
        &etas,
        |&eta| {
            let mp = ModelParams::from_eta(eta, s, rho)?;
            let ov = match source {
                OverlapSource::Formula => eigen_overlap(eta),
                OverlapSource::Metric => {
                    let h = hamiltonian(&mp);
                    eigenstate_overlap(&h, &build_metric(&h, &metric_opts)?)?
                }
            };
            Ok((ov, mp.regime()))
        },
        |&eta| format!("eta={eta}"),
    )?;
    Ok(Table {
        columns: &["eta", "overlap"],
        rows: etas
            .iter()
            .zip(&vals)
            .map(|(&eta, &(ov, _))| vec![Cell::Num(eta), Cell::Num(ov)])
            .collect(),
        regimes: vals.iter().map(|&(_, r)| r).collect(),
    })
}

fn lindblad_compare(cfg: &ScenarioConfig) -> std::result::Result<(Table, Value), RunError> {
    let mp = model(cfg)?;
    let base = base_setup(cfg, &mp)?;
    let ts = times(cfg, &mp);
    let trace = base.trace(&ts).map_err(numerical("metric trace".into()))?;

    let lb_cfg = model_lindblad_config(&mp);
    let dt_max = cfg.dt_max.unwrap_or_else(|| lb_cfg.default_dt_max());
    let rho0 = DensityMatrix::pure(&initial_state(&cfg.state)).map_err(numerical("initial density matrix".into()))?;
    // Both traces start from the prepared state at t = 0.
    let lead = ts.first().is_some_and(|&t0| t0 > 0.0);
    let mut grid = Vec::with_capacity(ts.len() + 1);
    if lead {
        grid.push(0.0);
    }
    grid.extend_from_slice(&ts);
    let mut lb = integrate(&lb_cfg, &rho0, &grid, dt_max).map_err(numerical(format!("lindblad, dt_max={dt_max}")))?;
    if lead {
        lb.remove(0);
    }
    let (pass, dev) = compare_steady_state(&trace, &lb, cfg.steady_t_min, cfg.steady_tol)
        .map_err(numerical(format!("steady-state comparison, t_min={}", cfg.steady_t_min)))?;

    let rows = trace
        .snapshots
        .iter()
        .zip(&lb)
        .map(|(m, l)| {
            [m.t, m.sx, m.sy, m.sz, l.sx, l.sy, l.sz]
                .into_iter()
                .map(Cell::Num)
                .collect()
        })
        .collect();
    let summary = json!({
        "dt_max": dt_max,
        "steady_t_min": cfg.steady_t_min,
        "steady_tol": cfg.steady_tol,
        "steady_max_deviation": dev,
        "steady_within_tol": pass,
    });
    Ok((
        Table {
            columns: &["t", "sx_metric", "sy_metric", "sz_metric", "sx_lb", "sy_lb", "sz_lb"],
            rows,
            regimes: vec![trace.regime; ts.len()],
        },
        summary,
    ))
}

fn single_point(cfg: &ScenarioConfig) -> std::result::Result<Value, RunError> {
    let mp = model(cfg)?;
    let base = base_setup(cfg, &mp)?;
    let t = cfg.t;
    let snap = base.snapshot(t).map_err(numerical(format!("t={t}")))?;
    let dp = derive(&mp);
    let sp_inf = match mp.regime() {
        SpectralRegime::UnbrokenSymmetric => None,
        _ => Some(asymptotic_sp(&mp, &cfg.state).map_err(numerical("asymptotic survival probability".into()))?),
    };
    let overlap = eigenstate_overlap(&base.h, &base.metric).map_err(numerical("eigenstate overlap".into()))?;
    Ok(json!({
        "regime": base.metric.regime().tag(),
        "params": {"r": mp.r, "s": mp.s, "theta": mp.theta},
        "derived": {"rho": dp.rho, "lambda": dp.lambda, "eta": dp.eta, "d": dp.d},
        "state": {"p": cfg.state.p, "phi": cfg.state.phi},
        "snapshot": serde_json::to_value(snap).expect("snapshot serializes"),
        "sp_inf": sp_inf,
        "eigenstate_overlap": overlap,
        "eigenstate_overlap_formula": eigen_overlap(dp.eta),
    }))
}

/// Computes a scenario without touching the filesystem.
pub fn compute(cfg: &ScenarioConfig) -> std::result::Result<ScenarioOutput, RunError> {
    let (payload, summary) = match cfg.scenario {
        ScenarioKind::PhaseDiagram => (Payload::Table(phase_diagram(cfg)?), None),
        ScenarioKind::UrGrid => (Payload::Table(ur_grid(cfg)?), None),
        ScenarioKind::TimeTrace => (Payload::Table(time_trace(cfg)?), None),
        ScenarioKind::SpSurface => (Payload::Table(sp_surface(cfg)?), None),
        ScenarioKind::OverlapCurve => (Payload::Table(overlap_curve(cfg)?), None),
        ScenarioKind::LindbladCompare => {
            let (t, s) = lindblad_compare(cfg)?;
            (Payload::Table(t), Some(s))
        }
        ScenarioKind::SinglePoint => (Payload::Record(single_point(cfg)?), None),
    };
    Ok(ScenarioOutput {
        scenario: cfg.scenario,
        payload,
        summary,
    })
}

/// 17 significant digits.
pub fn format_num(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => format_num(*x),
                    Cell::Tag(s) => (*s).to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|c| match c {
                            Cell::Num(x) => json!(x),
                            Cell::Tag(s) => json!(s),
                        })
                        .collect(),
                )
            })
            .collect();
        json!({"columns": self.columns, "rows": rows})
    }

    /// Consecutive runs of equal regimes, in row order.
    pub fn regime_runs(&self) -> Vec<(SpectralRegime, usize)> {
        run_lengths(&self.regimes)
    }
}

pub fn run_lengths(regimes: &[SpectralRegime]) -> Vec<(SpectralRegime, usize)> {
    let mut runs: Vec<(SpectralRegime, usize)> = Vec::new();
    for &r in regimes {
        match runs.last_mut() {
            Some((last, n)) if *last == r => *n += 1,
            _ => runs.push((r, 1)),
        }
    }
    runs
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

impl ScenarioOutput {
    pub fn file_name(&self, format: OutputFormat) -> String {
        format!("{}.{}", self.scenario.name(), format.extension())
    }

    /// The data file contents.
    pub fn render(&self, format: OutputFormat) -> String {
        match (&self.payload, format) {
            (Payload::Table(t), OutputFormat::Csv) => t.to_csv(),
            (Payload::Table(t), OutputFormat::Json) => pretty(&t.to_json()),
            (Payload::Record(v), _) => pretty(v),
        }
    }

    pub fn manifest(&self, cfg: &ScenarioConfig) -> String {
        let mut m = Map::new();
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("library_version".into(), json!(crate::VERSION));
        m.insert("scenario".into(), json!(self.scenario.name()));
        m.insert("output".into(), json!(self.file_name(cfg.format)));
        m.insert("config".into(), cfg.to_json());
        match &self.payload {
            Payload::Table(t) => {
                m.insert("columns".into(), json!(t.columns));
                m.insert("rows".into(), json!(t.rows.len()));
                let runs: Vec<Value> = t
                    .regime_runs()
                    .into_iter()
                    .map(|(r, n)| json!({"regime": r.tag(), "count": n}))
                    .collect();
                m.insert("regimes".into(), Value::Array(runs));
            }
            Payload::Record(v) => {
                m.insert("rows".into(), json!(1));
                let tag = v.get("regime").cloned().unwrap_or(Value::Null);
                m.insert("regimes".into(), json!([{"regime": tag, "count": 1}]));
            }
        }
        if let Some(s) = &self.summary {
            m.insert("summary".into(), s.clone());
        }
        pretty(&Value::Object(m))
    }
}
