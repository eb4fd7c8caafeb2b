//! `k3kummer`: command-line front end to the lattice verifications.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit status: 0 all checks passed, 1 discrepancies found, 2 usage or input error.
pub const EXIT_OK: u8 = 0;
pub const EXIT_DISCREPANCY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "k3kummer", version, about = "Exact lattice checks for K3 double covers of a general Kummer surface")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct FormatArg {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the subspaces of T_A/2T_A and match them to the table.
    Classify(FormatArg),
    /// List the O(q)-orbits of nonzero subspaces of F_2^5.
    Orbits(FormatArg),
    /// Discriminant form of a lattice given as a JSON Gram file.
    Discform {
        path: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Primitive embedding criterion for a lattice or a finite form.
    EmbedCheck {
        /// Lattice JSON file; its signature and discriminant form are used.
        path: Option<PathBuf>,
        /// Finite quadratic form JSON file instead of a lattice.
        #[arg(long, conflicts_with = "path", requires = "signature")]
        form: Option<PathBuf>,
        /// Signature `p,q` of the lattice with the given form.
        #[arg(long, value_parser = parse_signature)]
        signature: Option<(usize, usize)>,
        /// Signature `p,q` of the unimodular target.
        #[arg(long, value_parser = parse_signature, default_value = "3,19")]
        target: (usize, usize),
        #[command(flatten)]
        format: FormatArg,
    },
    /// Even-eight checks on the Kummer Néron–Severi lattice.
    EvenEight {
        #[command(subcommand)]
        action: EvenEightAction,
    },
    /// Divisor class arithmetic on the Kummer Néron–Severi lattice.
    Divisor {
        #[command(subcommand)]
        action: DivisorAction,
    },
    /// Elliptic fibration consistency checks.
    Fibration {
        #[command(subcommand)]
        action: FibrationAction,
    },
    /// Run every reference check and list the known discrepancies.
    Selftest(FormatArg),
}

#[derive(Subcommand, Debug)]
enum EvenEightAction {
    /// Verify one of the families e, a, b.
    Verify {
        #[arg(value_parser = ["e", "a", "b"])]
        family: String,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Subcommand, Debug)]
enum DivisorAction {
    /// Evaluate a linear expression in L, E0, Eij, C0, Cij and the named classes.
    Eval {
        expr: String,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Subcommand, Debug)]
enum FibrationAction {
    /// Euler number, Shioda–Tate rank and discriminant checks.
    Audit {
        /// Comma-separated fiber list, e.g. `6I2,I5*,I1`.
        #[arg(long)]
        fibers: String,
        /// Picard number.
        #[arg(long, default_value_t = 17)]
        rho: u32,
        /// The fibration has a section.
        #[arg(long)]
        section: bool,
        /// Order of the (finite) Mordell–Weil group.
        #[arg(long, requires = "section")]
        mw_order: Option<u64>,
        /// Expected Mordell–Weil rank.
        #[arg(long, requires = "section")]
        mw_rank: Option<i64>,
        /// Expected discriminant of the Néron–Severi lattice.
        #[arg(long, requires = "mw_order")]
        disc: Option<u64>,
        #[command(flatten)]
        format: FormatArg,
    },
}

fn parse_signature(s: &str) -> Result<(usize, usize), String> {
    let (p, q) = s.split_once(',').ok_or_else(|| format!("expected p,q, got {s:?}"))?;
    let n = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((n(p)?, n(q)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(f) => commands::classify(f.format),
        Command::Orbits(f) => commands::orbits(f.format),
        Command::Discform { path, format } => commands::discform(&path, format.format),
        Command::EmbedCheck { path, form, signature, target, format } => {
            commands::embed_check(path.as_deref(), form.as_deref(), signature, target, format.format)
        }
        Command::EvenEight { action: EvenEightAction::Verify { family, format } } => {
            commands::even_eight(&family, format.format)
        }
        Command::Divisor { action: DivisorAction::Eval { expr, format } } => commands::divisor_eval(&expr, format.format),
        Command::Fibration {
            action: FibrationAction::Audit { fibers, rho, section, mw_order, mw_rank, disc, format },
        } => commands::fibration_audit(&fibers, rho, section, mw_order, mw_rank, disc, format.format),
        Command::Selftest(f) => commands::selftest(f.format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
