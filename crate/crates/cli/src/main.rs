//! Command-line driver for sweeps, scaling studies and cross-engine checks.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinbus::experiment::{
    self, classical_crossing, Corruption, Engine, ExperimentConfig, ExperimentKind, PeakMetric, Range,
};
use spinbus::output::{self, Asymptotics, Format, Provenance, Rows};
use spinbus::par::{self, Execution};
use spinbus::{ChainConfig, ChainSpec, Error, ErrorClass, InitialState, ModelKind, Result};

#[derive(Parser)]
#[command(name = "spinbus", version, about = "Quantum state transfer through spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Merit functions sampled over the time window, plus the arrival point.
    TimeSeries(Common),
    /// Arrival-time figures over a (γ, h) grid of XY chains.
    Grid(Common),
    /// XXZ chains over a range of Δ with the exact engine.
    DeltaSweep(Common),
    /// Arrival-time figures against chain length.
    Scaling(Common),
    /// Exact XX arrival against the large-N formulas.
    Asymptotics(Common),
    /// Free-fermion against exact diagonalization on random points.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Auto,
    Ff,
    Ed,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Oaf,
    Concurrence,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// JSON experiment description; built-in defaults otherwise.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long, value_enum)]
    engine: Option<EngineArg>,
    /// Merit whose first peak defines t*.
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Allow exact-engine chains beyond desk scale.
    #[arg(long)]
    stretch: bool,
    /// Fill the per-row wall_time column.
    #[arg(long)]
    timing: bool,
    /// Run every sweep on a single thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    /// Shift the free-fermion φ_u by π; the check must then fail.
    #[arg(long, hide = true)]
    corrupt_phase: bool,
}

fn default_config(kind: ExperimentKind) -> ExperimentConfig {
    let xy = |n, g, h| ChainConfig::from_spec(&ChainSpec::xy(n, g, h).expect("valid default"), InitialState::FerroDown);
    let mut cfg = match kind {
        ExperimentKind::DeltaSweep => ExperimentConfig::new(
            kind,
            ChainConfig::from_spec(&ChainSpec::xxz(10, 0.0, 0.0).expect("valid default"), InitialState::FerroDown),
        ),
        ExperimentKind::CrossValidate => ExperimentConfig::new(kind, xy(6, 0.5, 0.7)),
        _ => ExperimentConfig::new(kind, xy(50, 0.0, 0.0)),
    };
    match kind {
        ExperimentKind::GammaHGrid => {
            cfg.gamma_range = Some(Range { start: 0.0, stop: 1.0, step: 0.05 });
            cfg.h_range = Some(Range { start: 0.0, stop: 2.0, step: 0.05 });
        }
        ExperimentKind::DeltaSweep => {
            cfg.delta_range = Some(Range { start: -2.0, stop: 2.0, step: 0.1 });
            cfg.inits = InitialState::STANDARD.to_vec();
        }
        ExperimentKind::NScaling => cfg.n_list = Some((1..=24).map(|k| 10 * k).collect()),
        ExperimentKind::AsymptoticsCheck => cfg.n_list = Some(vec![50, 100, 200]),
        ExperimentKind::CrossValidate => cfg.samples = 20,
        ExperimentKind::TimeSeries => {}
    }
    cfg
}

fn load_config(kind: ExperimentKind, args: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        None => default_config(kind),
    };
    if cfg.experiment != kind {
        return Err(Error::Config(format!("config describes {:?}, not {kind:?}", cfg.experiment)));
    }
    if let Some(e) = args.engine {
        cfg.engine = match e {
            EngineArg::Auto => Engine::Auto,
            EngineArg::Ff => Engine::FreeFermion,
            EngineArg::Ed => Engine::ExactDiag,
        };
    }
    if let Some(m) = args.metric {
        cfg.metric = match m {
            MetricArg::Oaf => PeakMetric::Oaf,
            MetricArg::Concurrence => PeakMetric::Concurrence,
        };
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.stretch |= args.stretch;
    cfg.timing |= args.timing;
    cfg.engine.resolve(cfg.chain.model)?;
    Ok(cfg)
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit<T: output::Table>(args: &Common, cfg: &ExperimentConfig, engine: Engine, start: Instant, data: &T) -> Result<()> {
    let format = match args.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let prov = Provenance::new(cfg, engine, start.elapsed().as_secs_f64());
    let mut out = open_output(&args.out)?;
    output::write_table(&mut out, format, data, cfg, &prov)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let (kind, args) = match &cli.command {
        Command::TimeSeries(a) => (ExperimentKind::TimeSeries, a),
        Command::Grid(a) => (ExperimentKind::GammaHGrid, a),
        Command::DeltaSweep(a) => (ExperimentKind::DeltaSweep, a),
        Command::Scaling(a) => (ExperimentKind::NScaling, a),
        Command::Asymptotics(a) => (ExperimentKind::AsymptoticsCheck, a),
        Command::Validate(v) => (ExperimentKind::CrossValidate, &v.common),
    };
    let cfg = load_config(kind, args)?;
    if let Some(t) = args.threads {
        if t == 0 {
            return Err(Error::Config("--threads must be positive".into()));
        }
        par::configure_threads(t);
    }
    let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let engine = cfg.engine.resolve(cfg.chain.model)?;
    let big_ed = engine == Engine::ExactDiag && cfg.chain.n > experiment::ED_DESK_MAX_N;
    if big_ed && cfg.stretch {
        eprintln!("warning: N = {} with the exact engine may take a long time", cfg.chain.n);
    }
    let start = Instant::now();
    match kind {
        ExperimentKind::TimeSeries => emit(args, &cfg, engine, start, &experiment::run_time_series(&cfg, exec)?)?,
        ExperimentKind::GammaHGrid => {
            let grid = experiment::run_gamma_h_grid(&cfg, exec)?;
            if let Some(a) = grid.argmax {
                eprintln!("argmax: gamma = {}, h = {}, value = {}", a.gamma, a.h, a.value);
            }
            emit(args, &cfg, engine, start, &grid)?;
        }
        ExperimentKind::DeltaSweep => {
            let rows = experiment::run_delta_sweep(&cfg, exec)?;
            emit(args, &cfg, Engine::ExactDiag, start, &Rows { rows: &rows })?;
        }
        ExperimentKind::NScaling => {
            let rows = experiment::run_n_scaling(&cfg, exec)?;
            if let Some(n) = classical_crossing(&rows) {
                eprintln!("F(t*) drops below 2/3 at N = {n}");
            }
            emit(args, &cfg, engine, start, &Rows { rows: &rows })?;
        }
        ExperimentKind::AsymptoticsCheck => {
            if cfg.chain.model != ModelKind::Xy {
                return Err(Error::WrongModel { expected: "xy" });
            }
            let rows = experiment::run_asymptotics(&cfg, exec)?;
            emit(args, &cfg, Engine::FreeFermion, start, &Asymptotics { rows: &rows })?;
        }
        ExperimentKind::CrossValidate => {
            let corrupt = matches!(&cli.command, Command::Validate(v) if v.corrupt_phase);
            let corruption = if corrupt { Corruption::FlipPhaseU } else { Corruption::None };
            let report = experiment::run_cross_validate(&cfg, exec, corruption)?;
            emit(args, &cfg, engine, start, &report)?;
            eprintln!(
                "max deviation {:e} (tolerance {:e}): {}",
                report.max.max(),
                report.tolerance,
                if report.pass { "pass" } else { "FAIL" }
            );
            if !report.pass {
                return Ok(ExitCode::from(4));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Config => 2,
                ErrorClass::Engine => 3,
                ErrorClass::Validation => 4,
            })
        }
    }
}
