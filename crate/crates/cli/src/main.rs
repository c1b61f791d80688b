use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use saucer::chart::ChartPoint5;
use saucer::fibration::{d2_csv, joystick, lifted_csv, projected_csv, D2Controls};
use saucer::gl2::classify_with;
use saucer::maneuvers::{constraint_residuals, integrate_trajectory_from, ControlProgram, ControlSignal, ManeuverMode};
use saucer::planner::{plan_path, replay, PlanError};
use saucer::sampling::DEFAULT_SEED;
use saucer::suites::{catalog_report, run_all, run_suite, Context, Suite};
use saucer::symmetry::SymmetryCatalog;
use saucer::tol::Tolerances;

#[derive(Parser, Debug)]
#[command(name = "saucer", version, about = "Maneuver geometry of the flying saucer configuration space")]
struct Cli {
    /// Tolerance overrides, one `key = value` per line.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Pretty,
    Compact,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run seeded verification suites and print a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, env = "SAUCER_SEED")]
        seed: Option<u64>,
        /// Detailed symmetry report for one catalog (attacking, landing, g2).
        #[arg(long)]
        catalog: Option<String>,
        /// Run checks on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Integrate a control program; CSV to `--out`, residual report to stdout.
    Simulate {
        #[arg(long)]
        mode: String,
        /// JSON object with `u1`, `u2`, `u3` signals and optional `start`.
        #[arg(long)]
        controls: PathBuf,
        /// Time grid `start:end:step`.
        #[arg(long, default_value = "0:1:0.001")]
        t: String,
        #[arg(long, default_value = "trajectory.csv")]
        out: PathBuf,
    },
    /// Classify a direction in the maneuver distribution.
    Classify {
        /// Four comma-separated Z-frame coefficients.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Lift a D₂ curve and project it to a G₂ maneuver.
    Lift {
        /// JSON object with `u`, `w` signals and optional `start`.
        #[arg(long)]
        controls: PathBuf,
        #[arg(long, default_value = "0:2:0.001")]
        t: String,
        /// Directory for `d2.csv`, `lifted.csv`, `projected.csv`.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Plan a constrained path between two chart points.
    Plan {
        #[arg(long)]
        mode: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Replay trajectory CSV.
        #[arg(long, default_value = "replay.csv")]
        out: PathBuf,
    },
}

/// Usage problems exit with 2, failed checks with 1.
enum Failure {
    Usage(anyhow::Error),
    Check(Option<String>),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

#[derive(Deserialize)]
struct SimulateControls {
    #[serde(default = "ControlSignal::zero")]
    u1: ControlSignal,
    #[serde(default = "ControlSignal::zero")]
    u2: ControlSignal,
    #[serde(default = "ControlSignal::zero")]
    u3: ControlSignal,
    #[serde(default)]
    start: [f64; 5],
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    mode: ManeuverMode,
    pass: bool,
    samples: usize,
    end: ChartPoint5,
    warnings: &'a [String],
    residuals: saucer::maneuvers::ResidualReport,
}

#[derive(Serialize)]
struct LiftReport<'a> {
    pass: bool,
    samples: usize,
    certificate: &'a saucer::fibration::CubicCertificate,
    files: Vec<String>,
}

#[derive(Serialize)]
struct PlanReport<'a> {
    pass: bool,
    plan: &'a saucer::planner::Plan,
    replay: Option<ReplaySummary>,
}

#[derive(Serialize)]
struct ReplaySummary {
    max_contact: f64,
    max_nullity: f64,
    endpoint_drift: f64,
    certified: bool,
}

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let code = execute(std::env::args_os(), &mut stdout.lock(), &mut std::io::stderr());
    ExitCode::from(code)
}

/// Parse `args`, run the command and return the process exit code.
fn execute<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(Failure::Check(msg)) => {
            if let Some(m) = msg {
                let _ = writeln!(err, "error: {m}");
            }
            1
        }
        Err(Failure::Usage(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            let _ = writeln!(err, "usage: saucer <verify|simulate|classify|lift|plan> [options]; see `saucer --help`");
            2
        }
    }
}

fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    let mut tol = Tolerances::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        tol.apply_config(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    }
    let fmt = cli.format;
    match cli.command {
        Command::Verify { suite, seed, catalog, sequential } => {
            let mut ctx = Context::new(seed.unwrap_or(DEFAULT_SEED));
            ctx.tol = tol;
            if sequential {
                ctx.exec = saucer::par::Exec::Sequential;
            }
            if let Some(name) = catalog {
                let cat: SymmetryCatalog = name.parse().map_err(|e| anyhow!("{e}"))?;
                if suite != "symmetry" && suite != "all" {
                    return Err(anyhow!("--catalog only applies to the symmetry suite").into());
                }
                let r = catalog_report(cat, &ctx);
                emit(stdout, &r, fmt)?;
                return verdict(r.pass);
            }
            if suite == "all" {
                let r = run_all(&ctx);
                emit(stdout, &r, fmt)?;
                verdict(r.pass)
            } else {
                let s: Suite = suite.parse().map_err(|e: String| anyhow!(e))?;
                let r = run_suite(s, &ctx);
                emit(stdout, &r, fmt)?;
                verdict(r.pass)
            }
        }
        Command::Simulate { mode, controls, t, out } => {
            let mode: ManeuverMode = mode.parse().map_err(|e| anyhow!("{e}"))?;
            let c: SimulateControls = read_json(&controls)?;
            let (t0, t1, dt) = parse_grid(&t)?;
            let prog = ControlProgram { mode, u1: c.u1, u2: c.u2, u3: c.u3, duration: t1 - t0, dt };
            let start = point(c.start)?;
            let tr = integrate_trajectory_from(&prog, &start, t0).map_err(|e| anyhow!("{e}"))?;
            let residuals = constraint_residuals(&tr, mode).map_err(|e| anyhow!("{e}"))?;
            write(&out, &tr.to_csv())?;
            let pass = residuals.certifies(tol.contact, tol.nullity);
            emit(
                stdout,
                &SimulateReport { mode, pass, samples: tr.samples.len(), end: tr.end(), warnings: &tr.warnings, residuals },
                fmt,
            )?;
            verdict(pass)
        }
        Command::Classify { vector } => {
            let v = parse_floats::<4>(&vector)?;
            let c = classify_with(&v, tol.classify).map_err(|e| anyhow!("{e}"))?;
            emit(stdout, &c, fmt)?;
            Ok(())
        }
        Command::Lift { controls, t, out } => {
            let c: D2Controls = read_json(&controls)?;
            c.validate().map_err(|e| anyhow!("{e}"))?;
            let (t0, t1, dt) = parse_grid(&t)?;
            let j = match joystick(&c, t0, t1, dt) {
                Ok(j) => j,
                Err(e) => return Err(Failure::Check(Some(e.to_string()))),
            };
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let mut files = Vec::new();
            for (name, body) in
                [("d2.csv", d2_csv(&j.d2)), ("lifted.csv", lifted_csv(&j.lifted)), ("projected.csv", projected_csv(&j.projected))]
            {
                let path = out.join(name);
                write(&path, &body)?;
                files.push(path.display().to_string());
            }
            let pass = j.certificate.certifies(tol.replay_contact, tol.cubic_angle);
            emit(stdout, &LiftReport { pass, samples: j.d2.t.len(), certificate: &j.certificate, files }, fmt)?;
            verdict(pass)
        }
        Command::Plan { mode, from, to, tol: plan_tol, out } => {
            let mode: ManeuverMode = mode.parse().map_err(|e| anyhow!("{e}"))?;
            if !(plan_tol > 0.0 && plan_tol.is_finite()) {
                return Err(anyhow!("--tol must be positive").into());
            }
            let a = point(parse_floats::<5>(&from)?)?;
            let b = point(parse_floats::<5>(&to)?)?;
            let plan = match plan_path(mode, &a, &b, plan_tol) {
                Ok(p) => p,
                Err(PlanError::NoConvergence { best, .. }) => {
                    emit(stdout, &PlanReport { pass: false, plan: &best, replay: None }, fmt)?;
                    return Err(Failure::Check(None));
                }
                Err(e @ PlanError::OutOfBox(_)) => return Err(anyhow!("{e}").into()),
                Err(e) => return Err(Failure::Check(Some(e.to_string()))),
            };
            let r = replay(&plan).map_err(|e| anyhow!("{e}"))?;
            write(&out, &r.trajectory.to_csv())?;
            let certified = r.residuals.certifies(tol.replay_contact, tol.replay_nullity);
            let summary = ReplaySummary {
                max_contact: r.residuals.max_contact,
                max_nullity: r.residuals.max_nullity,
                endpoint_drift: r.endpoint_drift,
                certified,
            };
            emit(stdout, &PlanReport { pass: certified, plan: &plan, replay: Some(summary) }, fmt)?;
            verdict(certified)
        }
    }
}

fn verdict(pass: bool) -> Result<(), Failure> {
    if pass {
        Ok(())
    } else {
        Err(Failure::Check(None))
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T, fmt: Format) -> Result<()> {
    let text = match fmt {
        Format::Pretty => serde_json::to_string_pretty(value)?,
        Format::Compact => serde_json::to_string(value)?,
    };
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        bail!("expected {N} comma-separated numbers, got `{s}`");
    }
    let mut out = [0.0f64; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().with_context(|| format!("`{p}` is not a number"))?;
        if !o.is_finite() {
            bail!("`{p}` is not finite");
        }
    }
    Ok(out)
}

fn point(c: [f64; 5]) -> Result<ChartPoint5> {
    if !c.iter().all(|v| v.is_finite()) {
        bail!("non-finite start point");
    }
    Ok(ChartPoint5::from_array(c))
}

/// `start:end:step`.
fn parse_grid(s: &str) -> Result<(f64, f64, f64)> {
    let v: Vec<&str> = s.split(':').collect();
    if v.len() != 3 {
        bail!("time grid must be start:end:step, got `{s}`");
    }
    let n = |x: &str| x.trim().parse::<f64>().with_context(|| format!("`{x}` is not a number"));
    let (a, b, h) = (n(v[0])?, n(v[1])?, n(v[2])?);
    if !(a.is_finite() && b.is_finite() && b >= a && h > 0.0 && h.is_finite()) {
        bail!("time grid needs finite start <= end and a positive step, got `{s}`");
    }
    Ok((a, b, h))
}
