//! `ctxbell` command-line front end.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use commands::{CompareMode, Delimiter, Failure, GuppyArgs, Inputs, SemspaceArgs, TableSource};
use report::Format;

#[derive(Parser)]
#[command(
    name = "ctxbell",
    version,
    about = "Concept states, entanglement and Bell tests for contextual probability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "record")]
    format: Format,

    /// Add wall-clock timing to the output (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TableInput {
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Probability of case C in the pet/food scenario.
    #[arg(long)]
    lambda: Option<f64>,
    /// Four joints E11,E12,E21,E22.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    joint: Option<Vec<f64>>,
}

impl TableInput {
    fn source(&self) -> Result<TableSource<'_>, Failure> {
        if let Some(p) = commands::path_arg(&self.scenario) {
            Ok(TableSource::Scenario(p))
        } else if let Some(l) = self.lambda {
            Ok(TableSource::Lambda(l))
        } else {
            match self.joint.as_deref() {
                Some(&[a, b, c, d]) => Ok(TableSource::Joint([a, b, c, d])),
                Some(j) => Err(Failure(format!("--joint takes 4 values, got {}", j.len()))),
                None => unreachable!("clap requires one input"),
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Typicality distribution and ranking of a rating table under one context.
    Ratings {
        #[arg(long)]
        table: PathBuf,
        /// Context label, or a unique case-insensitive part of it.
        #[arg(long)]
        context: String,
        #[arg(long, value_enum, default_value = "tab")]
        delimiter: Delimiter,
    },
    /// Bell functional, all-forms maximum, product equalities and band.
    Bell {
        #[command(flatten)]
        input: TableInput,
        /// Tolerance for the product-equality check.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Bell value of the pet/food scenario over a range of case-C probabilities.
    Sweep {
        /// start:stop:step within [0, 1].
        #[arg(long, default_value = "0:1:0.1")]
        range: String,
    },
    /// Combined-concept typicality against single-concept typicalities.
    Guppy {
        #[arg(long)]
        concept_a: PathBuf,
        #[arg(long)]
        context_a: Option<String>,
        #[arg(long)]
        concept_b: PathBuf,
        #[arg(long)]
        context_b: Option<String>,
        /// Compatibility relation (TOML).
        #[arg(long)]
        relation: PathBuf,
        #[arg(long)]
        exemplar: String,
        #[arg(long, value_enum, default_value = "tab")]
        delimiter: Delimiter,
    },
    /// Latent semantic space of a corpus, word similarities, and word-order comparison.
    Semspace {
        /// One document per line.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        k: usize,
        /// Word pair `a,b`; repeatable.
        #[arg(long = "pair")]
        pairs: Vec<String>,
        /// Two sentences to compare.
        #[arg(long, num_args = 2)]
        compare: Vec<String>,
        #[arg(long, value_enum, default_value = "both")]
        mode: CompareMode,
        /// Keep token case.
        #[arg(long)]
        no_lowercase: bool,
    },
    /// Classical realizability with strategy weights or a violated facet.
    Kolmo {
        #[command(flatten)]
        input: TableInput,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ratings { .. } => "ratings",
            Command::Bell { .. } => "bell",
            Command::Sweep { .. } => "sweep",
            Command::Guppy { .. } => "guppy",
            Command::Semspace { .. } => "semspace",
            Command::Kolmo { .. } => "kolmo",
        }
    }
}

fn run(cli: &Cli, inputs: &mut Inputs) -> Result<report::Output, Failure> {
    match &cli.command {
        Command::Ratings {
            table,
            context,
            delimiter,
        } => commands::ratings(inputs, table, context, *delimiter),
        Command::Bell { input, tol } => commands::bell(inputs, input.source()?, *tol),
        Command::Sweep { range } => commands::sweep(range),
        Command::Guppy {
            concept_a,
            context_a,
            concept_b,
            context_b,
            relation,
            exemplar,
            delimiter,
        } => commands::guppy(
            inputs,
            GuppyArgs {
                concept_a,
                context_a: context_a.as_deref(),
                concept_b,
                context_b: context_b.as_deref(),
                relation,
                exemplar,
                delimiter: *delimiter,
            },
        ),
        Command::Semspace {
            corpus,
            k,
            pairs,
            compare,
            mode,
            no_lowercase,
        } => commands::semspace(
            inputs,
            SemspaceArgs {
                corpus,
                k: *k,
                pairs,
                compare,
                mode: *mode,
                lowercase: !no_lowercase,
            },
        ),
        Command::Kolmo { input } => commands::kolmo(inputs, input.source()?),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let mut inputs = Inputs::default();
    match run(&cli, &mut inputs) {
        Ok(output) => {
            let elapsed = cli.timing.then(|| start.elapsed());
            let text = report::render(
                cli.format,
                cli.command.name(),
                &args,
                &inputs.contents,
                &output,
                elapsed,
            );
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
