use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, Subcommand, ValueEnum};
use mcqa_core::eval::{evaluate, MethodRegistry};
use mcqa_core::kg::{build_index, KgError};
use mcqa_core::pipeline::{generate_dataset, stats, PipelineConfig, PipelineError};
use mcqa_core::StrategyRegistry;

#[derive(Parser)]
#[command(name = "mcqa", version, about = "Synthesize and evaluate multiple-choice QA datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write train.jsonl, dev.jsonl and report.json.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a binary adjacency index from a tab-separated assertion dump.
    KgIndex {
        #[arg(long)]
        assertions: PathBuf,
        #[arg(long, default_value = "en")]
        lang: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-type counts of a dataset file.
    Stats {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = StatsFormat::Table)]
        format: StatsFormat,
    },
    /// Score a dataset with a training-free baseline.
    Eval {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        method: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StatsFormat {
    Table,
    Json,
}

/// An error and the exit code it maps to.
struct Failure(u8, anyhow::Error);

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure(e.exit_code() as u8, e.into())
    }
}

fn kg_failure(e: KgError) -> Failure {
    let code = match e {
        KgError::Io { .. } => 3,
        _ => 2,
    };
    Failure(code, e.into())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { config, out } => {
            let config = PipelineConfig::load(&config)?;
            let generation = generate_dataset(&config, &StrategyRegistry::default())?;
            generation.write(&out)?;
            let r = &generation.report;
            eprintln!(
                "{} passages, {} attempted, {} emitted, {} dropped ({} train / {} dev passages)",
                r.passages, r.attempted, r.emitted, r.dropped, r.split.train_passages, r.split.dev_passages
            );
        }
        Command::KgIndex { assertions, lang, out } => {
            if !assertions.is_file() {
                return Err(Failure(2, anyhow!("assertion file {} not found", assertions.display())));
            }
            let (index, report) = build_index(&assertions, &lang).map_err(kg_failure)?;
            index.save(&out).map_err(kg_failure)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Command::Stats { data, format } => {
            let s = stats(&data)?;
            match format {
                StatsFormat::Table => print!("{s}"),
                StatsFormat::Json => println!("{}", serde_json::to_string_pretty(&s).expect("stats serialize")),
            }
        }
        Command::Eval { data, method, seed } => {
            let registry = MethodRegistry::default();
            let Some(m) = registry.get(&method) else {
                let known: Vec<_> = registry.names().collect();
                return Err(Failure(1, anyhow!("unknown method `{method}` (known: {})", known.join(", "))));
            };
            let result = evaluate(&data, m.as_ref(), seed)?;
            println!("{}", serde_json::to_string_pretty(&result).expect("result serializes"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
