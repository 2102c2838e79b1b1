use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptmetric::scenario::{run, RawConfig, RunError, RunReport, ScenarioConfig, ScenarioKind};

#[derive(Parser)]
#[command(name = "ptmetric", version, about = "Pseudo-Hermitian two-level dynamics: data for plots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// d = (s/r)^2 - sin^2(theta) and the regime over a (theta, s/r) grid.
    PhaseDiagram(Common),
    /// Uncertainty gap of (sigma_x, sigma_y) over a (phi, p) grid at time t.
    UrGrid(Common),
    /// Spin expectations, uncertainty gap, survival probability and Bloch angles vs t.
    TimeTrace(Common),
    /// Survival probability: long-time limit over (phi, p), or over (p, t) with mode=time.
    SpSurface(Common),
    /// Overlap of the two eigenstates as a function of eta.
    OverlapCurve(Common),
    /// Metric dynamics next to a Lindblad master-equation trace.
    LindbladCompare(Common),
    /// Everything about one parameter point, as JSON.
    SinglePoint(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    threads: Option<usize>,
    /// Metric construction tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Extra key=value settings, applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn build(kind: ScenarioKind, c: &Common) -> Result<(ScenarioConfig, PathBuf), RunError> {
    let mut raw = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
                path: path.clone(),
                source,
            })?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    if let Some(name) = raw.get("scenario") {
        if name != kind.name() {
            return Err(RunError::Config(ptmetric::Error::Validation(format!(
                "config is for scenario '{name}', subcommand is '{kind}'"
            ))));
        }
    }
    raw.set("scenario", kind.name())?;
    for pair in &c.set {
        raw.set_pair(pair)?;
    }
    if let Some(f) = c.format {
        raw.set("format", match f {
            Format::Csv => "csv",
            Format::Json => "json",
        })?;
    }
    if let Some(n) = c.threads {
        raw.set("threads", &n.to_string())?;
    }
    if let Some(t) = c.tol {
        raw.set("tol", &format!("{t:e}"))?;
    }
    if let Some(out) = &c.out {
        raw.set("out", &out.to_string_lossy())?;
    }
    let cfg = raw.resolve()?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from(format!("ptmetric-out/{kind}")));
    Ok((cfg, dir))
}

fn execute(cli: &Cli) -> Result<RunReport, RunError> {
    let (kind, common) = match &cli.command {
        Command::PhaseDiagram(c) => (ScenarioKind::PhaseDiagram, c),
        Command::UrGrid(c) => (ScenarioKind::UrGrid, c),
        Command::TimeTrace(c) => (ScenarioKind::TimeTrace, c),
        Command::SpSurface(c) => (ScenarioKind::SpSurface, c),
        Command::OverlapCurve(c) => (ScenarioKind::OverlapCurve, c),
        Command::LindbladCompare(c) => (ScenarioKind::LindbladCompare, c),
        Command::SinglePoint(c) => (ScenarioKind::SinglePoint, c),
    };
    let (cfg, dir) = build(kind, common)?;
    run(&cfg, &dir)
}

fn main() -> ExitCode {
    match execute(&Cli::parse()) {
        Ok(report) => {
            println!("{}", report.data.display());
            println!("{}", report.manifest.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ptmetric: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
