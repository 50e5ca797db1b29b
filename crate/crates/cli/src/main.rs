use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use killer_core::coset_enum::SearchSpace;
use killer_toolkit::commands::{self, parse_range, CheckRequest, CliError, DiagramRequest};
use killer_toolkit::CertificateReport;

#[derive(Parser)]
#[command(
    name = "killer-toolkit",
    version,
    about = "Killer and nonconjugacy certificates for knot groups"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Two-bridge knot p/q: symbolic collapse, coset enumeration, Riley roots and traces.
    TwoBridge {
        p: i64,
        q: i64,
        #[arg(long, default_value_t = 8)]
        max_n: i64,
        /// Last n of the distinct-trace certificate.
        #[arg(long, default_value_t = 50)]
        trace_n: usize,
    },
    /// Torus knot T(p, q): free-product transcripts and syllable counts.
    Torus {
        p: i64,
        q: i64,
        /// Inclusive range A..B.
        #[arg(long = "n", default_value = "0..8", allow_hyphen_values = true)]
        range: String,
    },
    /// Unknotting-number-one branch on a PD code file.
    Diagram {
        file: PathBuf,
        /// Pick a diagram by name from a file of `name: PD` lines.
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        crossing: Option<usize>,
        #[arg(long = "n", default_value = "0..8", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twists: i64,
    },
    /// Decide whether a word normally generates a presented group.
    CheckKiller {
        /// Presentation file, or a PD file read as its Wirtinger presentation.
        file: PathBuf,
        word: Option<String>,
        #[arg(long)]
        search_non_killer: bool,
        #[arg(long = "n", default_value_t = 2, allow_hyphen_values = true)]
        n: i64,
    },
}

fn run(cli: &Cli) -> Result<CertificateReport, CliError> {
    let limits = commands::limits_from_env()?;
    let space = SearchSpace::default();
    match &cli.command {
        Command::TwoBridge { p, q, max_n, trace_n } => commands::two_bridge(*p, *q, *max_n, *trace_n, &limits, &space),
        Command::Torus { p, q, range } => commands::torus(*p, *q, parse_range(range)?, &limits, &space),
        Command::Diagram {
            file,
            name,
            crossing,
            range,
            twists,
        } => commands::diagram(
            &DiagramRequest {
                file,
                name: name.as_deref(),
                crossing: *crossing,
                range: parse_range(range)?,
                twists: *twists,
            },
            &limits,
            &space,
        ),
        Command::CheckKiller {
            file,
            word,
            search_non_killer,
            n,
        } => commands::check_killer(
            &CheckRequest {
                file,
                word: word.as_deref(),
                search_non_killer: search_non_killer.then_some(*n),
            },
            &limits,
            &space,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
            };
            // A closed pipe (e.g. `| head`) is not an error worth a panic.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
