use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rootval::Error;
use rootval_cli::{error_value, render, run, Command, Format, Inputs, Request, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "rootval", version, about = "Exact invariants of plane curve singularities")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: OutputFormat,
    /// Working precision (at least 4); never exceeds declared truncations.
    #[arg(long, global = true, allow_negative_numbers = true)]
    precision: Option<i64>,
    /// Read the input from a file instead of the command line.
    #[arg(long, global = true)]
    input: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Sub {
    /// μ, τ, δ and branch count of a germ f(x, y) at the origin.
    Invariants {
        #[arg(long)]
        poly: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Characteristic data, semigroup and δ of one branch.
    Branch {
        #[arg(long = "branch")]
        branches: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Root valuation datum of a matrix or of explicit branches.
    Rootval {
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long = "branch")]
        branches: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the equisingularity data of two germs, matrices or branch lists.
    Equising {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Intersection number of two branches.
    Intersect {
        #[arg(long = "branch")]
        branches: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Check that equal root valuation data give equal equisingularity data.
    GkmCheck {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Discriminant of the miniversal deformation of y^2 - x^n.
    DiscDemo {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        samples: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut inputs = Inputs::default();
    let (command, common) = match cli.command {
        Sub::Invariants { poly, common } => {
            inputs.poly = poly;
            (Command::Invariants, common)
        }
        Sub::Branch { branches, common } => {
            inputs.branches = branches;
            (Command::Branch, common)
        }
        Sub::Rootval { matrix, branches, common } => {
            inputs.matrix = matrix;
            inputs.branches = branches;
            (Command::Rootval, common)
        }
        Sub::Equising { a, b, common } => {
            inputs.a = a;
            inputs.b = b;
            (Command::Equising, common)
        }
        Sub::Intersect { branches, common } => {
            inputs.branches = branches;
            (Command::Intersect, common)
        }
        Sub::GkmCheck { a, b, common } => {
            inputs.a = a;
            inputs.b = b;
            (Command::GkmCheck, common)
        }
        Sub::DiscDemo { n, samples, common } => {
            inputs.n = n;
            inputs.samples = samples;
            (Command::DiscDemo, common)
        }
    };
    let format = match common.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Text => Format::Text,
    };
    if let Some(path) = &common.input {
        match std::fs::read_to_string(path) {
            Ok(s) => inputs.file = Some(s),
            Err(e) => {
                let err = Error::InvalidInput(format!("cannot read {}: {e}", path.display()));
                print!("{}", render(&error_value(&err), format));
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
    }
    let response = run(&Request { command, inputs, format, precision: common.precision });
    print!("{}", response.output);
    ExitCode::from(response.exit_code as u8)
}
