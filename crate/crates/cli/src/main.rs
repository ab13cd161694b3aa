use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cymod_cli::commands;
use cymod_cli::formmatch_default;
use cymod_cli::{CliError, Format, Outcome};

#[derive(Parser)]
#[command(name = "cymod", version, about = "Rigid Calabi-Yau fibre products: defects, searches, traces and modularity checks")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Cmd {
    /// Defect, h12, L-series shape and modularity gate of a product.
    Analyze {
        /// e.g. "abg(1,1,1) x abg(1,1,1)@[[0,1],[1,0]]"
        product: String,
    },
    /// Enumerate rigid candidates.
    Search {
        /// A, B, C or iso.
        #[arg(long)]
        case: String,
        /// Left family for case C (default gamma1_6).
        #[arg(long)]
        left: Option<String>,
        /// Right family for case C (default: same as left).
        #[arg(long)]
        right: Option<String>,
        /// Print in table layout.
        #[arg(long)]
        table: bool,
    },
    /// Trace ledger of a_p(U) over primes.
    Count {
        product: String,
        /// A bound B (all primes ≤ B) or a comma-separated list.
        #[arg(long, default_value = "100")]
        primes: String,
        /// Trace cache file, read and updated.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Match a ledger against a newform table.
    Match {
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        db: Option<PathBuf>,
        /// Compare against one entry only, e.g. 90a.
        #[arg(long)]
        level: Option<String>,
        #[arg(long, default_value_t = 4)]
        weight: u32,
        #[arg(long, default_value_t = formmatch_default())]
        min_primes: usize,
    },
    /// Check a bundled table: 1, 2, 3, 4 or iso.
    Verify {
        #[arg(long)]
        table: String,
        #[arg(long, default_value = "100")]
        primes: String,
        #[arg(long)]
        db: Option<PathBuf>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// List catalogued fibrations with their singular fibres.
    Catalog {
        /// Extra `name = spec` lines.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let fmt = match cli.output {
        OutputArg::Text => Format::Text,
        OutputArg::Records => Format::Records,
    };
    match cli.cmd {
        Cmd::Analyze { product } => commands::analyze_cmd(&product, fmt),
        Cmd::Search { case, left, right, table } => {
            commands::search_cmd(&case, left.as_deref(), right.as_deref(), table, fmt)
        }
        Cmd::Count { product, primes, cache } => commands::count_cmd(&product, &primes, cache.as_deref(), fmt),
        Cmd::Match { traces, db, level, weight, min_primes } => {
            commands::match_cmd(&traces, db.as_deref(), level.as_deref(), weight, min_primes, fmt)
        }
        Cmd::Verify { table, primes, db, cache } => {
            commands::verify_cmd(&table, &primes, db.as_deref(), cache.as_deref(), fmt)
        }
        Cmd::Catalog { file } => commands::catalog_cmd(file.as_deref(), fmt),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(o) => {
            print!("{}", o.out);
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
