use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod table;

use commands::{CliError, Output};

#[derive(Parser, Debug)]
#[command(
    name = "bsclass",
    version,
    about = "Invariants of 4-manifolds with fundamental group B(k) = <a, b | a b a^-1 = b^k>"
)]
struct Cli {
    /// Print a table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal forms of words in B(k), their inverses and their product.
    Group {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        /// Words over a, A, b, B (A = a^-1, B = b^-1).
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Group-ring elements: normal form, involution, augmentation, product.
    Ring {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        /// Expressions such as "1 - a + 2*b*A"; put `--` before one that
        /// starts with a minus sign.
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Fox derivatives of the relator (or of a word) and the boundary maps.
    Fox {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long)]
        word: Option<String>,
    },
    /// Homology of B(k) from closed formulas and from the chain complex.
    Homology {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
    /// L-groups, Whitehead group and assembly-map comparison.
    Lgroups {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
    /// Stable bordism group of the normal 1-type.
    Bordism {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        /// w2-type: II or III.
        #[arg(long)]
        w2: String,
    },
    /// Validates a form document and reports its invariants.
    Form {
        /// Form JSON file, or - for stdin.
        file: String,
    },
    /// Compares two manifold descriptors.
    Classify {
        left: String,
        right: String,
        /// Isometry JSON file with U^T · A_right · involute(U) = A_left.
        #[arg(long)]
        isometry: Option<String>,
    },
    /// Lists the manifolds realizing a nonsingular form.
    Realize {
        /// Form JSON file, or - for stdin.
        file: String,
    },
    /// Per-k table of homology, L-groups and bordism with oracle checks.
    Report {
        /// Inclusive range a..b; empty when a > b.
        #[arg(long, allow_hyphen_values = true)]
        k_range: String,
    },
}

const EXIT_USAGE: u8 = 64;

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Group { k, words } => commands::group(k, &words),
        Command::Ring { k, exprs } => commands::ring(k, &exprs),
        Command::Fox { k, word } => commands::fox(k, word.as_deref()),
        Command::Homology { k } => commands::homology(k),
        Command::Lgroups { k } => commands::lgroups(k),
        Command::Bordism { k, w2 } => commands::bordism(k, &w2),
        Command::Form { file } => commands::form(&file),
        Command::Classify { left, right, isometry } => commands::classify(&left, &right, isometry.as_deref()),
        Command::Realize { file } => commands::realize(&file),
        Command::Report { k_range } => commands::report(&k_range),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let pretty = cli.pretty;
    match run(cli) {
        Ok(out) => {
            let text = if pretty {
                out.table
            } else {
                serde_json::to_string_pretty(&out.json).expect("JSON values always serialize")
            };
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
