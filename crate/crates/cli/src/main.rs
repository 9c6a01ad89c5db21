mod cache;
mod commands;

use std::io::Read;
use std::process::ExitCode;

use bsroots_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bsroots", version, about = "ν-invariants and Bernstein-Sato roots of monomial ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Number of variables, if more than the highest index used.
    #[arg(long, global = true)]
    pub vars: Option<usize>,

    /// Worker threads for grid sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    /// Append-only result cache (JSON lines).
    #[arg(long, global = true, env = "BSROOTS_CACHE")]
    pub cache: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Grid,
    Chain,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// ν^J_a(q).
    Nu {
        /// The ideal a, or `-` for stdin.
        #[arg(long)]
        ideal: String,
        #[arg(long = "J")]
        j: String,
        #[arg(long)]
        q: String,
    },
    /// Level set of ν-invariants below r·p^e.
    NuSet {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        #[arg(long, value_enum, default_value_t = Method::Grid)]
        method: Method,
        #[arg(long, default_value_t = 1)]
        grid_scale: u64,
    },
    /// Bernstein-Sato roots in characteristic p.
    BsRoots {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        p: u64,
        /// Branch depth E (default: p^E ≥ 10^6 and room for period detection).
        #[arg(long)]
        levels: Option<u32>,
        #[arg(long, default_value_t = 4)]
        lookahead: u32,
        /// Certify roots against affine ν patterns.
        #[arg(long, num_args = 0..=1, default_value_t = true, default_missing_value = "true", action = clap::ArgAction::Set)]
        certify: bool,
        #[arg(long, default_value_t = 3)]
        samples: u32,
        #[arg(long, default_value_t = 1)]
        grid_scale: u64,
    },
    /// Roots of the characteristic-zero Bernstein-Sato polynomial.
    Char0Roots {
        #[arg(long)]
        ideal: String,
        #[command(flatten)]
        opts: Char0Opts,
    },
    /// Characteristic-p roots against the characteristic-zero roots.
    Compare {
        #[arg(long)]
        ideal: String,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[command(flatten)]
        opts: Char0Opts,
    },
    /// Cartier image C^e·I.
    Cartier {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
    },
    /// Bracket power J^[q].
    Bracket {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        q: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Char0Opts {
    #[arg(long, default_value_t = 1)]
    pub grid_scale: u64,
    #[arg(long, default_value_t = 60)]
    pub m_max: u64,
    #[arg(long, default_value_t = 50)]
    pub q_min: u64,
    #[arg(long, default_value_t = 5)]
    pub samples: u32,
    /// Rerun on a larger grid and flag the answer if it changes.
    #[arg(long)]
    pub check_grid: bool,
}

/// Reads `-` from stdin, anything else verbatim.
pub fn ideal_text(arg: &str) -> Result<String, Error> {
    if arg != "-" {
        return Ok(arg.to_owned());
    }
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| Error::Precondition(format!("reading stdin: {e}")))?;
    Ok(buf)
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Resource { .. } => 3,
        Error::Internal(_) => 1,
        Error::Dimension { .. } | Error::Precondition(_) | Error::Domain(_) | Error::Parse { .. } => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, &cli.common) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
