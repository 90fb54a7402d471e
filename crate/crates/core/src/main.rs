use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dsm::experiment::{
    curves_path, load_config, parse_config, run_figure, run_qfi, write_table, ExperimentConfig, ExperimentKind,
    OutputFormat, Record,
};
use dsm::Error;

const EXIT_VALIDATION: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

#[derive(Parser)]
#[command(name = "dsm", version, about = "Direct state measurement under SPAM noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Override the master seed of the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the Monte Carlo repetitions (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file; `.json` selects JSON, anything else CSV. Overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Use the full-scale copy budgets where a config provides them.
    #[arg(long, global = true)]
    full: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config.
    Run { config: PathBuf },
    /// Run the shipped config(s) for one figure.
    Preset { figure: Figure },
    /// Check a config without running it.
    Validate { config: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

const PRESETS: &[(&str, &str)] = &[
    ("fig2a_haar", include_str!("../../../presets/fig2a_haar.json")),
    ("fig2b_ghz", include_str!("../../../presets/fig2b_ghz.json")),
    ("fig2c_w", include_str!("../../../presets/fig2c_w.json")),
    ("fig2d_dicke", include_str!("../../../presets/fig2d_dicke.json")),
    ("fig3a_haar", include_str!("../../../presets/fig3a_haar.json")),
    ("fig3b_ghz", include_str!("../../../presets/fig3b_ghz.json")),
    ("fig4", include_str!("../../../presets/fig4.json")),
    ("fig5a", include_str!("../../../presets/fig5a.json")),
    ("fig5b", include_str!("../../../presets/fig5b.json")),
    ("fig6", include_str!("../../../presets/fig6.json")),
];

impl Figure {
    fn prefix(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
        }
    }
}

enum Failure {
    Validation(Error),
    Runtime(Error),
}

impl Failure {
    fn report(self) -> ExitCode {
        let (code, err) = match self {
            Failure::Validation(e) => (EXIT_VALIDATION, e),
            Failure::Runtime(e) => (EXIT_RUNTIME, e),
        };
        eprintln!("error: {err}");
        ExitCode::from(code)
    }
}

fn classify(e: Error) -> Failure {
    match e {
        Error::Config(_) => Failure::Validation(e),
        other => Failure::Runtime(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let configs = match &cli.command {
        Command::Validate { config } => {
            let cfg = load(config, cli.seed)?;
            let points = match cfg.experiment {
                ExperimentKind::Tomography => cfg.grid(cli.full).len(),
                ExperimentKind::Qfi => 1,
            };
            println!("ok: {} ({points} grid points)", config.display());
            return Ok(());
        }
        Command::Run { config } => vec![load(config, cli.seed)?],
        Command::Preset { figure } => PRESETS
            .iter()
            .filter(|(name, _)| name.starts_with(figure.prefix()))
            .map(|(name, text)| {
                let mut cfg =
                    parse_config(text).map_err(|e| Failure::Runtime(Error::Config(format!("preset {name}: {e}"))))?;
                if let Some(s) = cli.seed {
                    cfg.seed = s;
                }
                Ok(cfg)
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Runtime(Error::Parameter(e.to_string())))?;
    let out = cli
        .out
        .clone()
        .or_else(|| configs[0].output.as_ref().map(PathBuf::from));
    pool.install(|| run_all(&configs, cli.full, out.as_deref()))
}

fn load(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig, Failure> {
    let mut cfg = load_config(path).map_err(|e| match e {
        Error::Io(_) => Failure::Runtime(e),
        other => Failure::Validation(other),
    })?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run_all(configs: &[ExperimentConfig], full: bool, out: Option<&Path>) -> Result<(), Failure> {
    if configs.iter().all(|c| c.experiment == ExperimentKind::Qfi) {
        for cfg in configs {
            let tables = run_qfi(cfg).map_err(classify)?;
            match out {
                Some(path) => {
                    emit(&tables.histogram, Some(path))?;
                    emit(&tables.curves, Some(&curves_path(path)))?;
                }
                None => {
                    emit(&tables.histogram, None)?;
                    println!();
                    emit(&tables.curves, None)?;
                }
            }
        }
        return Ok(());
    }
    let mut rows = Vec::new();
    let mut failure = None;
    for cfg in configs {
        let run = run_figure(cfg, full).map_err(classify)?;
        rows.extend(run.rows);
        if let Some(e) = run.failure {
            failure = Some(e);
            break;
        }
    }
    emit(&rows, out)?;
    match failure {
        Some(e) => Err(Failure::Runtime(e)),
        None => Ok(()),
    }
}

fn emit<R: Record>(rows: &[R], path: Option<&Path>) -> Result<(), Failure> {
    let io_err = |e: io::Error| Failure::Runtime(Error::Io(e));
    match path {
        Some(p) => {
            let file = File::create(p).map_err(io_err)?;
            let mut w = BufWriter::new(file);
            write_table(rows, OutputFormat::from_path(p), &mut w).map_err(Failure::Runtime)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_table(rows, OutputFormat::Csv, &mut lock).map_err(Failure::Runtime)
        }
    }
}
