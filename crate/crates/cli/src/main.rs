//! `mythforge`: build, validate, query and export a nanopublication graph
//! from a tabular collection.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 build integrity
//! failure, 3 validation failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mythforge_core::pipeline::{self, PipelineConfig, PipelineError, ENV_CONFIG};
use mythforge_core::reconcile::Mode;
use mythforge_core::vocab::DEFAULT_BASE;
use mythforge_core::Iri;

const EXIT_USAGE: u8 = 1;
const EXIT_INTEGRITY: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "mythforge", version, about)]
struct Cli {
    /// Pipeline config file.
    #[arg(long, global = true, env = ENV_CONFIG)]
    config: Option<PathBuf>,
    /// Overrides the reconciliation mode of the config.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Offline,
    Online,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert a CSV export into dataset.trig, dataset.nq and a build report.
    Build {
        input: PathBuf,
        #[arg(long, short, default_value = "out")]
        out: PathBuf,
    },
    /// Run integrity checks and a competency-question suite.
    Validate {
        dataset: PathBuf,
        suite: PathBuf,
        /// Report directory; defaults to the dataset's directory.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Evaluate a query file and print the result as TSV.
    Query { dataset: PathBuf, query: PathBuf },
    /// Write the catalog, facet and storytelling bundles.
    Export {
        dataset: PathBuf,
        #[arg(long, short, default_value = "out")]
        out: PathBuf,
        /// Work slug for the storytelling bundle.
        #[arg(long)]
        work: Option<String>,
        #[arg(long)]
        bucket_width: Option<u32>,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("mythforge: {msg}");
    ExitCode::from(code)
}

fn load_config(cli: &Cli) -> Result<PipelineConfig, PipelineError> {
    let Some(path) = &cli.config else {
        return Err(PipelineError::Config {
            path: PathBuf::new(),
            reason: format!("no config given; pass --config or set {ENV_CONFIG}"),
        });
    };
    let mut config = PipelineConfig::load(path)?;
    if let Some(mode) = cli.mode {
        config.mode = match mode {
            ModeArg::Offline => Mode::Offline,
            ModeArg::Online => Mode::Online,
        };
        config.validate()?;
    }
    Ok(config)
}

/// Base IRI from the config when one is given, else the default.
fn optional_config(cli: &Cli) -> Result<Option<PipelineConfig>, PipelineError> {
    match cli.config {
        Some(_) => load_config(cli).map(Some),
        None => Ok(None),
    }
}

fn base_of(config: &Option<PipelineConfig>) -> Iri {
    config
        .as_ref()
        .map_or_else(|| Iri::new(DEFAULT_BASE).expect("default base"), PipelineConfig::base)
}

fn run(cli: &Cli) -> Result<ExitCode, ExitCode> {
    let usage = |e: PipelineError| fail(EXIT_USAGE, e);
    match &cli.command {
        Command::Build { input, out } => {
            let config = load_config(cli).map_err(usage)?;
            let run = pipeline::run_build(&config, input, out).map_err(usage)?;
            let r = &run.report;
            eprintln!(
                "{} records, {} quads, {} nanopublications, {} issues, {} review candidates -> {}",
                r.records,
                r.quads,
                r.nanopubs,
                r.issues.len(),
                r.review_candidates,
                out.display()
            );
            if !r.passed() {
                for f in &r.fatal {
                    eprintln!("fatal: {f}");
                }
                for v in &r.integrity_violations {
                    eprintln!("integrity: {v}");
                }
                return Err(fail(EXIT_INTEGRITY, "build failed integrity checks"));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { dataset, suite, out } => {
            let config = optional_config(cli).map_err(usage)?;
            let out = out
                .clone()
                .unwrap_or_else(|| dataset.parent().map(Path::to_path_buf).unwrap_or_default());
            let report = pipeline::run_validate(&base_of(&config), dataset, suite, &out).map_err(usage)?;
            for v in &report.integrity_violations {
                println!("INTEGRITY {v}");
            }
            print!("{}", report.competency_questions.render_text());
            if report.passed {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(fail(EXIT_VALIDATION, "validation failed"))
            }
        }
        Command::Query { dataset, query } => {
            let config = optional_config(cli).map_err(usage)?;
            let (table, prefixes) = pipeline::run_query(&base_of(&config), dataset, query).map_err(usage)?;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(table.to_tsv(&prefixes).as_bytes())
                .map_err(|e| fail(EXIT_USAGE, e))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Export {
            dataset,
            out,
            work,
            bucket_width,
        } => {
            let config = optional_config(cli).map_err(usage)?;
            let work = work
                .clone()
                .or_else(|| config.as_ref().map(|c| c.default_work.clone()))
                .unwrap_or_else(|| mythforge_core::export::DEFAULT_WORK.to_string());
            let width = bucket_width
                .or_else(|| config.as_ref().map(|c| c.bucket_width))
                .unwrap_or(mythforge_core::export::DEFAULT_BUCKET_WIDTH);
            if width == 0 {
                return Err(fail(EXIT_USAGE, "--bucket-width must be positive"));
            }
            let files = pipeline::run_export(&base_of(&config), dataset, out, &work, width).map_err(usage)?;
            for f in [&files.catalog, &files.facets, &files.storytelling] {
                eprintln!("wrote {}", f.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) | Err(code) => code,
    }
}
