//! Command line front end.
//!
//! Every command writes one report: JSON for most, CSV for `series`. Reports
//! go to stdout or, with `--output`, to a file that is written to a temporary
//! sibling first and renamed into place. Failures print a single line
//! `error code=<code>: <message>` on stderr.
//!
//! Exit status: 0 on success, 1 when a check fails or a computation cannot
//! finish, 2 for bad flags or bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::asymptotics::{
    classify_divergence, default_delta0, dyadic_series, estimate_critical_p_with, Classification, DivergenceClass,
    DyadicSeries, CRITICAL_ORDER, DEFAULT_LEVELS,
};
use crate::decomposition::{
    assemble_upper_bound, corner_decomposition, default_epsilon, separation_constants, CornerDecomposition,
    SeparationConstants, UpperBound,
};
use crate::energy::{energy, EnergyKind, EnergyReport};
use crate::error::{Error, Result};
use crate::geom::{kappa, make_e_phi, Point, PointTriple, Polygon};
use crate::inequalities::{corner_bound_check, pushforward_check, straightening_check, CheckReport, TestIntegrand};
use crate::mesh::{QuadratureSpec, TruncationSpec};
use crate::monte_carlo::mc_energy;
use crate::parallel::{init_thread_pool, parse_thread_count, THREADS_ENV};
use crate::sup::{kappa_g, kappa_i};

/// Environment variable with the default seed for randomized commands.
pub const SEED_ENV: &str = "MENGER_SEED";

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "menger", version, about = "Menger curvature energies of polygons")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads (overrides MENGER_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Fill in the `seconds` field of energy reports.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Debug, Clone, Args)]
pub struct QuadratureArgs {
    /// Gauss–Legendre nodes per panel [default: 16, critical-p: 8].
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Grading ratio.
    #[arg(long, global = true, default_value_t = QuadratureSpec::default().ratio)]
    pub ratio: f64,
    /// Graded boundaries per corner.
    #[arg(long, global = true, default_value_t = QuadratureSpec::default().depth)]
    pub depth: usize,
    /// Relative tolerance of the sup searches.
    #[arg(long, global = true, default_value_t = QuadratureSpec::default().rel_tol)]
    pub tol: f64,
}

impl QuadratureArgs {
    pub fn spec(&self, default_order: usize) -> QuadratureSpec {
        QuadratureSpec {
            order: self.order.unwrap_or(default_order),
            ratio: self.ratio,
            depth: self.depth,
            rel_tol: self.tol,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EnergyArgs {
    /// Polygon JSON file.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Energy: M, I or U.
    #[arg(long, short)]
    pub kind: EnergyKind,
    /// Exponent.
    #[arg(long)]
    pub p: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// Starting truncation (default: shortest edge / 16).
    #[arg(long)]
    pub delta0: Option<f64>,
    /// Number of halvings.
    #[arg(long, default_value_t = DEFAULT_LEVELS)]
    pub levels: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Writes the model corner with opening angle PHI (radians).
    MakeEphi {
        #[arg(long)]
        phi: f64,
    },
    /// Truncated energy by graded quadrature.
    Energy {
        #[command(flatten)]
        energy: EnergyArgs,
        #[arg(long)]
        delta: f64,
    },
    /// Truncated energy by Monte Carlo.
    McEnergy {
        #[command(flatten)]
        energy: EnergyArgs,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Seed (default: MENGER_SEED, else 0).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Dyadic truncation series as CSV.
    Series {
        #[command(flatten)]
        energy: EnergyArgs,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Classifies the small-truncation behaviour of a series.
    Classify {
        /// Series CSV; computed from the other flags when absent.
        #[arg(long, conflicts_with_all = ["input", "kind", "p"])]
        series: Option<PathBuf>,
        #[arg(long, short, required_unless_present = "series")]
        input: Option<PathBuf>,
        #[arg(long, short, required_unless_present = "series")]
        kind: Option<EnergyKind>,
        #[arg(long, required_unless_present = "series")]
        p: Option<f64>,
        #[command(flatten)]
        levels: SeriesArgs,
    },
    /// Critical exponent by bisection on the divergence slope.
    CriticalP {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        kind: EnergyKind,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Corner sets, middles and separation constants.
    Decompose {
        #[arg(long, short)]
        input: PathBuf,
        /// Corner radius (default: shortest effective edge / 8).
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Upper bound assembled from the decomposition.
    Bound {
        #[command(flatten)]
        energy: EnergyArgs,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Energy of the right-angle corner; extrapolated when absent.
        #[arg(long)]
        ref_energy: Option<f64>,
    },
    /// Numerical inequality checks.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Point evaluations of the curvature kernels.
    #[command(subcommand)]
    Kernel(KernelCommand),
}

#[derive(Debug, Clone, Subcommand)]
pub enum CheckCommand {
    /// Kernel bound on the model corner against the right angle.
    #[command(alias = "lemma1")]
    CornerBound {
        #[arg(long)]
        phi: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Straightening map: kernel comparison and distortion.
    #[command(alias = "lemma2")]
    Straightening {
        #[arg(long)]
        phi: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Change of variables under a linear stretch.
    Pushforward {
        #[arg(long, default_value_t = 2.0)]
        stretch: f64,
        #[arg(long, default_value_t = 1)]
        arity: usize,
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        #[arg(long, value_enum, default_value = "product")]
        integrand: IntegrandArg,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum IntegrandArg {
    Constant,
    Product,
}

impl From<IntegrandArg> for TestIntegrand {
    fn from(a: IntegrandArg) -> Self {
        match a {
            IntegrandArg::Constant => TestIntegrand::Constant,
            IntegrandArg::Product => TestIntegrand::Product,
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum KernelCommand {
    /// Curvature of three points, each given as comma-separated coordinates.
    Kappa {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Sup over the third point on the polygon.
    KappaI {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Sup over two points on the polygon.
    KappaG {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
}

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub body: Vec<u8>,
    /// `false` when a check ran but failed.
    pub pass: bool,
}

impl Outcome {
    fn json<T: Serialize>(value: &T) -> Self {
        Self::check(value, true)
    }

    fn check<T: Serialize>(value: &T, pass: bool) -> Self {
        let mut body = serde_json::to_vec_pretty(value).expect("report serializes");
        body.push(b'\n');
        Self { body, pass }
    }
}

/// Reads and validates a polygon file.
pub fn parse_polygon_file(path: &Path) -> Result<Polygon> {
    let text = std::fs::read_to_string(path)?;
    Polygon::from_json_str(&text)
}

fn parse_point(s: &str) -> Result<Point> {
    let coords = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidArgument(format!("bad coordinate {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Point::new(coords)
}

fn default_seed() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{SEED_ENV} must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(0),
    }
}

fn seed_or_default(seed: Option<u64>) -> Result<u64> {
    seed.map_or_else(default_seed, Ok)
}

fn finish_report(mut r: EnergyReport, timing: bool) -> EnergyReport {
    if !timing {
        r.seconds = None;
    }
    r
}

#[derive(Serialize)]
struct ClassifyReport {
    #[serde(flatten)]
    classification: Classification,
    delta0: f64,
    levels: usize,
    log2_ratios: Vec<f64>,
}

#[derive(Serialize)]
struct DecomposeReport {
    decomposition: CornerDecomposition,
    separation: SeparationConstants,
}

#[derive(Serialize)]
struct BoundReport {
    kind: EnergyKind,
    p: f64,
    epsilon: f64,
    ref_energy: f64,
    separation: SeparationConstants,
    bound: UpperBound,
}

#[derive(Serialize)]
struct KernelReport {
    kernel: &'static str,
    value: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    argmax: Vec<Point>,
    converged: bool,
}

fn classify_series(series: &DyadicSeries) -> Result<ClassifyReport> {
    let classification = classify_divergence(series)?;
    Ok(ClassifyReport {
        classification,
        delta0: series.delta0,
        levels: series.levels,
        log2_ratios: series.log2_ratios(4),
    })
}

/// `𝓔_p(E_{π/2})` from an extrapolated dyadic series.
fn reference_energy(kind: EnergyKind, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    let corner = make_e_phi(std::f64::consts::FRAC_PI_2)?;
    let series = dyadic_series(&corner, kind, p, default_delta0(&corner), DEFAULT_LEVELS, spec)?;
    match classify_divergence(&series)?.class {
        DivergenceClass::Finite(v) => Ok(v),
        _ => Err(Error::AboveThreshold {
            p,
            threshold: kind.threshold(),
        }),
    }
}

/// Runs one command and returns its report.
pub fn run_command(cfg: &RunConfig) -> Result<Outcome> {
    let default_order = match cfg.command {
        Command::CriticalP { .. } => CRITICAL_ORDER,
        _ => QuadratureSpec::default().order,
    };
    let spec = cfg.quadrature.spec(default_order);
    spec.validate()?;
    match &cfg.command {
        Command::MakeEphi { phi } => {
            let mut body = make_e_phi(*phi)?.to_json_string().into_bytes();
            body.push(b'\n');
            Ok(Outcome { body, pass: true })
        }
        Command::Energy { energy: e, delta } => {
            let poly = parse_polygon_file(&e.input)?;
            let r = energy(&poly, e.kind, e.p, &TruncationSpec::new(*delta), &spec)?;
            Ok(Outcome::json(&finish_report(r, cfg.timing)))
        }
        Command::McEnergy {
            energy: e,
            delta,
            samples,
            seed,
        } => {
            let poly = parse_polygon_file(&e.input)?;
            let seed = seed_or_default(*seed)?;
            let r = mc_energy(&poly, e.kind, e.p, &TruncationSpec::new(*delta), *samples, seed)?;
            Ok(Outcome::json(&finish_report(r, cfg.timing)))
        }
        Command::Series { energy: e, series } => {
            let poly = parse_polygon_file(&e.input)?;
            let delta0 = series.delta0.unwrap_or_else(|| default_delta0(&poly));
            let s = dyadic_series(&poly, e.kind, e.p, delta0, series.levels, &spec)?;
            let mut body = Vec::new();
            s.write_csv(&mut body)?;
            Ok(Outcome { body, pass: true })
        }
        Command::Classify {
            series,
            input,
            kind,
            p,
            levels,
        } => {
            let s = match series {
                Some(path) => DyadicSeries::read_csv(std::fs::File::open(path)?)?,
                None => {
                    let missing = |f: &str| Error::InvalidArgument(format!("--{f} is required without --series"));
                    let poly = parse_polygon_file(input.as_ref().ok_or_else(|| missing("input"))?)?;
                    let delta0 = levels.delta0.unwrap_or_else(|| default_delta0(&poly));
                    dyadic_series(
                        &poly,
                        kind.ok_or_else(|| missing("kind"))?,
                        p.ok_or_else(|| missing("p"))?,
                        delta0,
                        levels.levels,
                        &spec,
                    )?
                }
            };
            Ok(Outcome::json(&classify_series(&s)?))
        }
        Command::CriticalP { input, kind, series } => {
            let poly = parse_polygon_file(input)?;
            let delta0 = series.delta0.unwrap_or_else(|| default_delta0(&poly));
            let est = estimate_critical_p_with(&poly, *kind, &spec, delta0, series.levels)?;
            Ok(Outcome::json(&est))
        }
        Command::Decompose { input, epsilon } => {
            let poly = parse_polygon_file(input)?;
            let eps = epsilon.unwrap_or_else(|| default_epsilon(&poly));
            let decomposition = corner_decomposition(&poly, eps)?;
            let separation = separation_constants(&poly, &decomposition)?;
            Ok(Outcome::json(&DecomposeReport {
                decomposition,
                separation,
            }))
        }
        Command::Bound {
            energy: e,
            epsilon,
            ref_energy,
        } => {
            let poly = parse_polygon_file(&e.input)?;
            let eps = epsilon.unwrap_or_else(|| default_epsilon(&poly));
            let dec = corner_decomposition(&poly, eps)?;
            let sep = separation_constants(&poly, &dec)?;
            let ref_energy = match ref_energy {
                Some(v) => *v,
                None => reference_energy(e.kind, e.p, &spec)?,
            };
            let bound = assemble_upper_bound(&poly, e.kind, e.p, &dec, &sep, ref_energy)?;
            Ok(Outcome::json(&BoundReport {
                kind: e.kind,
                p: e.p,
                epsilon: eps,
                ref_energy,
                separation: sep,
                bound,
            }))
        }
        Command::Check(c) => {
            let r: CheckReport = match c {
                CheckCommand::CornerBound { phi, samples, seed } => {
                    corner_bound_check(*phi, *samples, seed_or_default(*seed)?)?
                }
                CheckCommand::Straightening { phi, samples, seed } => {
                    straightening_check(*phi, *samples, seed_or_default(*seed)?)?
                }
                CheckCommand::Pushforward {
                    stretch,
                    arity,
                    samples,
                    integrand,
                } => pushforward_check(*stretch, *arity, *samples, (*integrand).into())?,
            };
            Ok(Outcome::check(&r, r.pass))
        }
        Command::Kernel(k) => {
            let report = match k {
                KernelCommand::Kappa { x, y, z } => {
                    let t = PointTriple::new(parse_point(x)?, parse_point(y)?, parse_point(z)?)?;
                    KernelReport {
                        kernel: "kappa",
                        value: kappa(&t),
                        argmax: Vec::new(),
                        converged: true,
                    }
                }
                KernelCommand::KappaI { input, x, y } => {
                    let poly = parse_polygon_file(input)?;
                    let r = kappa_i(&poly, &parse_point(x)?, &parse_point(y)?, spec.rel_tol)?;
                    KernelReport {
                        kernel: "kappa_i",
                        value: r.value,
                        argmax: r.argmax,
                        converged: r.converged,
                    }
                }
                KernelCommand::KappaG { input, x } => {
                    let poly = parse_polygon_file(input)?;
                    let r = kappa_g(&poly, &parse_point(x)?, spec.rel_tol)?;
                    KernelReport {
                        kernel: "kappa_g",
                        value: r.value,
                        argmax: r.argmax,
                        converged: r.converged,
                    }
                }
            };
            Ok(Outcome::json(&report))
        }
    }
}

/// Writes `body` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, body: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Exit status for a library error: 2 for bad input, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonMonotone(_) | Error::NoCorner | Error::AboveThreshold { .. } => 1,
        _ => 2,
    }
}

fn diagnostic(code: &str, msg: &str) -> String {
    let flat: Vec<&str> = msg.split_whitespace().collect();
    format!("error code={code}: {}", flat.join(" "))
}

fn configure_threads(cfg: &RunConfig) -> Result<()> {
    let n = match cfg.threads {
        Some(0) => return Err(Error::InvalidArgument("--threads must be positive".into())),
        Some(n) => n,
        None => match std::env::var(THREADS_ENV) {
            Ok(s) => parse_thread_count(&s).ok_or_else(|| {
                Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))
            })?,
            Err(_) => return Ok(()),
        },
    };
    init_thread_pool(n);
    Ok(())
}

/// Parses `args`, runs the command and emits the report. Returns the exit
/// status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", diagnostic("usage", first));
            return 2;
        }
    };
    let result = configure_threads(&cfg).and_then(|_| run_command(&cfg)).and_then(|out| {
        match &cfg.output {
            Some(path) => write_atomic(path, &out.body)?,
            None => std::io::stdout().write_all(&out.body)?,
        }
        Ok(out.pass)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("{}", diagnostic("check_failed", "inequality check failed"));
            1
        }
        Err(e) => {
            eprintln!("{}", diagnostic(e.code(), &e.to_string()));
            exit_code(&e)
        }
    }
}
