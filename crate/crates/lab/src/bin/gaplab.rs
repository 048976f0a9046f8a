use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gaplab::config::{ConfigFile, Ensemble, ExperimentConfig, IntervalSpec};
use gaplab::error::{LabError, LabResult};
use gaplab::output::{csv_bytes, fmt_f64, write_result, Summary};
use gaplab::verify::{self, Suite};
use gaplab::{convergence_sweep, run_experiment};
use gaplab_core::detengine::{
    dikz_log_gap, finite_n_gap, sine_gap_fredholm, sine_log_gap_asymptotic, toeplitz_gap_cue,
};
use gaplab_core::equilibrium::{analyze, Minimizer};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "gaplab", version, about = "Largest bulk gaps of unitary-invariant random matrices")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// TOML file with [experiment] and [engine] sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Equilibrium data and gap constants of a window.
    Constants {
        #[arg(long, value_enum)]
        ensemble: Ensemble,
        #[arg(long, allow_hyphen_values = true)]
        interval: IntervalSpec,
    },
    /// Monte Carlo experiment; writes summary.json, taus.csv and exceedance.csv.
    Simulate {
        #[command(flatten)]
        overrides: Overrides,
        /// Also write cdf_k<k>.csv for each gap order.
        #[arg(long)]
        emit_cdf: bool,
    },
    /// KS distance of tau_1 to its limit law across matrix sizes.
    Converge {
        #[command(flatten)]
        overrides: Overrides,
        /// Increasing matrix sizes, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Gap probabilities from the determinant engines.
    GapProb {
        #[command(subcommand)]
        engine: Engine,
    },
}

#[derive(Args)]
struct Overrides {
    #[arg(long, value_enum)]
    ensemble: Option<Ensemble>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    replicas: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    interval: Option<IntervalSpec>,
    #[arg(long, value_delimiter = ',')]
    k_list: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x_list: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory; defaults to $GAPLAB_OUT_DIR or ./gaplab-out.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Engine {
    /// CUE probability of no eigenangle in an arc of length 2 alpha.
    Toeplitz {
        #[arg(long)]
        n: usize,
        #[arg(long, required_unless_present = "sweep")]
        alpha: Option<f64>,
        #[arg(long)]
        sweep: Option<Sweep>,
    },
    /// Sine-kernel probability of no point in an interval of length r.
    Sine {
        #[arg(long, required_unless_present = "sweep")]
        r: Option<f64>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        sweep: Option<Sweep>,
    },
    /// Finite-n probability of no eigenvalue in [x, x + delta].
    Finite {
        #[arg(long, value_enum)]
        ensemble: Ensemble,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, required_unless_present = "sweep")]
        delta: Option<f64>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        sweep: Option<Sweep>,
    },
}

/// `lo:hi:count`, `count` equally spaced values including both ends.
#[derive(Clone, Copy, Debug)]
struct Sweep {
    lo: f64,
    hi: f64,
    count: usize,
}

impl std::str::FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let p: Vec<&str> = s.split(':').collect();
        let [lo, hi, count] = p[..] else { return Err("expected lo:hi:count".into()) };
        let lo: f64 = lo.parse().map_err(|e| format!("{e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("{e}"))?;
        let count: usize = count.parse().map_err(|e| format!("{e}"))?;
        if count == 0 || lo.is_nan() || hi.is_nan() || lo > hi {
            return Err("need lo <= hi and count >= 1".into());
        }
        Ok(Sweep { lo, hi, count })
    }
}

impl Sweep {
    fn points(self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.lo + step * i as f64).collect()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("gaplab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: &Cli) -> LabResult<u8> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    match &cli.command {
        Command::Constants { ensemble, interval } => constants(cli.json, *ensemble, interval),
        Command::Simulate { overrides, emit_cdf } => simulate(cli.json, experiment(&file, overrides)?, *emit_cdf),
        Command::Converge { overrides, n_list } => converge(cli.json, experiment(&file, overrides)?, n_list),
        Command::Verify { suite } => run_verify(cli.json, *suite),
        Command::GapProb { engine } => gap_prob(cli.json, engine, file.engine.nystrom_order),
    }
}

fn print_json(v: &impl Serialize) -> LabResult<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

#[derive(Serialize)]
struct MinimizerOut {
    u: f64,
    q_u: u32,
    d_u: f64,
}

impl From<&Minimizer> for MinimizerOut {
    fn from(m: &Minimizer) -> Self {
        MinimizerOut { u: m.u, q_u: m.q_u, d_u: m.d_u }
    }
}

fn constants(as_json: bool, ensemble: Ensemble, interval: &IntervalSpec) -> LabResult<u8> {
    let spec = ensemble.spec();
    let window = interval.union()?;
    window.validate_for(&spec)?;
    let r = analyze(&spec, &window)?;
    let boundary: Vec<MinimizerOut> = r.boundary.iter().map(Into::into).collect();
    let interior: Vec<MinimizerOut> = r.interior.iter().map(Into::into).collect();
    if as_json {
        print_json(&json!({
            "ensemble": ensemble.name(),
            "interval": interval,
            "rho_i": r.rho_i,
            "q": r.q,
            "boundary": boundary,
            "interior": interior,
            "m_i": r.constants.map(|c| c.m_i),
            "s_i": r.constants.map(|c| c.s_i),
            "c_vi": r.constants.map(|c| c.c_vi),
        }))?;
        return Ok(0);
    }
    let list = |ms: &[MinimizerOut]| {
        let s: Vec<String> = ms.iter().map(|m| format!("{} (d_u={}, q_u={})", m.u, m.d_u, m.q_u)).collect();
        if s.is_empty() {
            "{}".to_string()
        } else {
            format!("{{{}}}", s.join(", "))
        }
    };
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.16e}"));
    let rows = [
        ("ensemble", ensemble.name().to_string()),
        ("interval", interval.to_string()),
        ("rho_I", format!("{:.16e}", r.rho_i)),
        ("q", r.q.to_string()),
        ("A", list(&boundary)),
        ("B", list(&interior)),
        ("M(I)", opt(r.constants.map(|c| c.m_i))),
        ("S(I)", opt(r.constants.map(|c| c.s_i))),
        ("c_VI", opt(r.constants.map(|c| c.c_vi))),
    ];
    for (k, v) in rows {
        println!("{k:<9} {v}");
    }
    Ok(0)
}

fn experiment(file: &ConfigFile, o: &Overrides) -> LabResult<ExperimentConfig> {
    let missing = |what: &str| LabError::Config(format!("--{what} is required without an [experiment] section"));
    let mut c = match &file.experiment {
        Some(c) => c.clone(),
        None => ExperimentConfig::new(
            o.ensemble.ok_or_else(|| missing("ensemble"))?,
            o.n.ok_or_else(|| missing("n"))?,
            o.replicas.ok_or_else(|| missing("replicas"))?,
            o.interval.clone().ok_or_else(|| missing("interval"))?,
        ),
    };
    if let Some(v) = o.ensemble {
        c.ensemble = v;
    }
    if let Some(v) = o.n {
        c.n = v;
    }
    if let Some(v) = o.replicas {
        c.replicas = v;
    }
    if let Some(v) = &o.interval {
        c.interval = v.clone();
    }
    if let Some(v) = &o.k_list {
        c.k_list = v.clone();
    }
    if let Some(v) = &o.x_list {
        c.x_list = v.clone();
    }
    if let Some(v) = o.seed {
        c.seed = v;
    }
    if let Some(v) = o.workers {
        c.workers = v;
    }
    if let Some(v) = &o.output {
        c.output = v.clone();
    }
    c.validate()?;
    Ok(c)
}

fn simulate(as_json: bool, config: ExperimentConfig, emit_cdf: bool) -> LabResult<u8> {
    let r = run_experiment(&config)?;
    let files = write_result(&r, &config.output, emit_cdf)?;
    if as_json {
        print_json(&Summary::new(&r))?;
        return Ok(0);
    }
    let ks: Vec<String> =
        r.ks.iter()
            .map(|k| format!("k={} ks={} missing={}", k.k, k.ks.map_or("-".into(), |d| format!("{d:.6}")), k.missing))
            .collect();
    println!(
        "{} n={} replicas={} c_VI={:.6} | {} | {:.2}s",
        config.ensemble.name(),
        config.n,
        config.replicas,
        r.constants.c_vi,
        ks.join("; "),
        r.wall_time_secs
    );
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(0)
}

fn converge(as_json: bool, config: ExperimentConfig, n_list: &[usize]) -> LabResult<u8> {
    let rows = convergence_sweep(&config, n_list)?;
    if as_json {
        print_json(&rows)?;
    } else {
        for row in rows {
            println!("n={:<8} ks_tau1={}", row.n, row.ks_tau1.map_or("-".into(), fmt_f64));
        }
    }
    Ok(0)
}

fn run_verify(as_json: bool, suite: Suite) -> LabResult<u8> {
    let report = verify::run(suite)?;
    if as_json {
        print_json(&json!({ "suite": suite, "passed": report.passed(), "checks": report.checks }))?;
    } else {
        print!("{}", report.table());
        println!("{}", if report.passed() { "PASS" } else { "FAIL" });
    }
    Ok(if report.passed() { 0 } else { 1 })
}

struct Point {
    parameter: f64,
    value: f64,
    asymptotic: Option<f64>,
}

fn gap_prob(as_json: bool, engine: &Engine, default_order: usize) -> LabResult<u8> {
    let (name, sweep, points): (&str, Option<Sweep>, Vec<Point>) = match engine {
        Engine::Toeplitz { n, alpha, sweep } => {
            let eval = |a: f64| -> LabResult<Point> {
                Ok(Point {
                    parameter: a,
                    value: toeplitz_gap_cue(*n, a)?,
                    asymptotic: dikz_log_gap(*n, a).ok().map(f64::exp),
                })
            };
            let pts = collect(*alpha, *sweep, eval)?;
            ("alpha", *sweep, pts)
        }
        Engine::Sine { r, order, sweep } => {
            let m = order.unwrap_or(default_order);
            let eval = |r: f64| -> LabResult<Point> {
                let asym = if r > 0.0 { Some(sine_log_gap_asymptotic(r).exp()) } else { None };
                Ok(Point { parameter: r, value: sine_gap_fredholm(r, m)?, asymptotic: asym })
            };
            let pts = collect(*r, *sweep, eval)?;
            ("r", *sweep, pts)
        }
        Engine::Finite { ensemble, n, x, delta, order, sweep } => {
            let spec = ensemble.spec();
            let m = order.unwrap_or(default_order);
            let rho = spec.density(*x)?;
            let eval = |d: f64| -> LabResult<Point> {
                let cue = toeplitz_gap_cue(*n, std::f64::consts::PI * rho * d).ok();
                Ok(Point { parameter: d, value: finite_n_gap(&spec, *n, *x, d, m)?, asymptotic: cue })
            };
            let pts = collect(*delta, *sweep, eval)?;
            ("delta", *sweep, pts)
        }
    };
    if sweep.is_some() {
        return emit_sweep(as_json, name, &points);
    }
    let p = &points[0];
    if as_json {
        print_json(&json!({ "parameter": name, name: p.parameter, "value": p.value }))?;
    } else {
        println!("{}", p.value);
    }
    Ok(0)
}

fn collect(single: Option<f64>, sweep: Option<Sweep>, eval: impl Fn(f64) -> LabResult<Point>) -> LabResult<Vec<Point>> {
    match (single, sweep) {
        (_, Some(s)) => s.points().into_iter().map(eval).collect(),
        (Some(v), None) => Ok(vec![eval(v)?]),
        (None, None) => Err(LabError::Config("a value or --sweep is required".into())),
    }
}

fn emit_sweep(as_json: bool, name: &str, points: &[Point]) -> LabResult<u8> {
    if as_json {
        let rows: Vec<_> = points
            .iter()
            .map(|p| {
                json!({
                    "parameter": p.parameter,
                    "value": p.value,
                    "asymptotic": p.asymptotic,
                    "difference": p.asymptotic.map(|a| p.value - a),
                })
            })
            .collect();
        print_json(&json!({ "parameter": name, "rows": rows }))?;
        return Ok(0);
    }
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let rows = points.iter().map(|p| {
        vec![fmt_f64(p.parameter), fmt_f64(p.value), opt(p.asymptotic), opt(p.asymptotic.map(|a| p.value - a))]
    });
    let bytes = csv_bytes(&["parameter", "value", "asymptotic", "difference"], rows)?;
    std::io::stdout().write_all(&bytes).map_err(|e| LabError::io("stdout", e))?;
    Ok(0)
}
