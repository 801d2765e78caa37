use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcb::commands::{self, ExperimentConfig};
use pcb::{report, CliError};

#[derive(Parser)]
#[command(name = "pcb", version = pcb::VERSION, about = "Causal bounds from selection-biased data and bound-truncated bandits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a selection-biased dataset from a model.
    Generate(Common),
    /// Derive per (context, arm) bounds from biased data.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// Print the symbolic plan.
        #[arg(long)]
        explain: bool,
    },
    /// Compare bounds against the CP and Biased estimates and the truth.
    Offline(Common),
    /// Run the online policy roster and write regret curves.
    Online(Common),
    /// Merge offline reports and online summaries into one JSON file.
    Report {
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Model,
    UnbiasedSample,
    Biased,
}

#[derive(Args)]
struct Common {
    /// Model JSON, or `builtin:synthetic`.
    #[arg(long, default_value = "builtin:synthetic")]
    model: String,
    /// Graph JSON, or `builtin:synthetic-graph`. Defaults to the model's graph.
    #[arg(long)]
    graph: Option<String>,
    /// Dataset CSV; sampled from the model when absent.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 30_000)]
    n_pre: usize,
    #[arg(long, default_value_t = 15_000)]
    rounds: usize,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 2)]
    kmax: usize,
    #[arg(long, value_enum, default_value = "model")]
    context_source: Source,
    /// Comma-separated roster.
    #[arg(long, value_delimiter = ',', default_values_t = commands::DEFAULT_ROSTER.map(String::from))]
    policies: Vec<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "X1,X2")]
    treatments: Vec<String>,
    #[arg(long, default_value = "Y")]
    outcome: String,
    #[arg(long, value_delimiter = ',', default_value = "U1,U2")]
    contexts: Vec<String>,
    /// LinUCB exploration weight.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Warm-start pseudo-observations per (context, arm).
    #[arg(long, default_value_t = 100)]
    n0: u32,
}

impl Common {
    fn config(self) -> ExperimentConfig {
        ExperimentConfig {
            model: Some(self.model),
            graph: self.graph,
            data: self.data,
            n_pre: self.n_pre,
            rounds: self.rounds,
            reps: self.reps,
            seed: self.seed,
            kmax: self.kmax,
            context_source: match self.context_source {
                Source::Model => "model",
                Source::UnbiasedSample => "unbiased-sample",
                Source::Biased => "biased",
            }
            .into(),
            policies: self.policies,
            out: self.out,
            treatments: self.treatments,
            outcome: self.outcome,
            contexts: self.contexts,
            alpha: self.alpha,
            n0: self.n0,
        }
    }
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    match cli.command {
        Command::Generate(c) => {
            let cfg = c.config();
            cfg.validate()?;
            commands::cmd_generate(&cfg)
        }
        Command::Bounds { common, explain } => {
            let cfg = common.config();
            cfg.validate()?;
            let (paths, lines) = commands::cmd_bounds(&cfg)?;
            if explain {
                for l in lines {
                    println!("{l}");
                }
            }
            Ok(paths)
        }
        Command::Offline(c) => {
            let cfg = c.config();
            cfg.validate()?;
            commands::cmd_offline(&cfg)
        }
        Command::Online(c) => {
            let cfg = c.config();
            cfg.validate()?;
            commands::cmd_online(&cfg)
        }
        Command::Report { inputs, out } => Ok(vec![report::cmd_report(&inputs, &out)?]),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
