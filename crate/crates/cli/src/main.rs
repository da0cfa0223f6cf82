mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use output::{Emitter, Failure};

/// Majority-agreed key distribution over stabilizer states.
///
/// Graph files hold "n <N>" then "e <i> <j>" lines; tableau files hold
/// "n <N>" then one signed Pauli per line. Vertices and parties are 1-based.
#[derive(Parser, Debug)]
#[command(name = "makd", version)]
pub struct Cli {
    /// Seed for every random choice; a fresh one is drawn and printed if
    /// absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output format: plain lines or one JSON record per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// AME check and local-stabilizer counts on every majority subset.
    CertifyAme {
        /// Graph or tableau file.
        file: PathBuf,
    },
    /// Key plan with security verdicts for every connected pair.
    PairTable {
        /// Graph file.
        file: PathBuf,
    },
    /// Key plan and leak report for one pair.
    Plan {
        /// Graph file.
        file: PathBuf,
        /// Communicants, e.g. 1,3.
        #[arg(long, value_parser = parse_pair)]
        pair: (usize, usize),
        /// Product of every generator on the shortest path.
        #[arg(long, conflicts_with = "odd_label")]
        full_path: bool,
        /// Product of the generators at odd path positions only.
        #[arg(long)]
        odd_label: bool,
    },
    /// Check that several plans can share one copy of the state.
    ValidateMulti {
        /// Graph or tableau file.
        file: PathBuf,
        /// Plan file with "pair <i> <j> sigma <pauli>" lines.
        plans: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Conference)]
        mode: ModeArg,
    },
    /// Run seeded key sessions and report agreement statistics.
    Simulate {
        /// Graph or tableau file.
        file: PathBuf,
        /// Plan file; several plans run as one multi-key session.
        plans: PathBuf,
        /// Number of copies (sessions); copy c uses seed + c.
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Combination mode when the plan file has several plans.
        #[arg(long, value_enum, default_value_t = ModeArg::Conference)]
        mode: ModeArg,
        /// Print every transcript, not just the summary.
        #[arg(long)]
        transcripts: bool,
    },
    /// Split copies between self-testing and key generation by die rolls.
    Partition {
        /// Number of parties rolling.
        #[arg(long)]
        parties: usize,
        /// Faces of the die.
        #[arg(long)]
        d: u32,
        /// Totals below this value select self-testing.
        #[arg(long)]
        k: u32,
        /// Number of copies.
        #[arg(long)]
        copies: usize,
    },
    /// Quantum value and classical bound of a Bell expression.
    Bell {
        /// Built-in state (ring5, psi5, bell, ghz<N>) or a graph or tableau
        /// file.
        state: String,
        /// Bell expression file.
        bell: PathBuf,
        /// Also search X-Z plane observables on a grid of this many angles.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// AME check and local-stabilizer report for a prime-dimension tableau.
    QuditCertify {
        /// Qudit tableau file.
        file: PathBuf,
    },
    /// Dense statevector cross-checks of the stabilizer engine (n <= 6).
    Oracle {
        /// Graph or tableau file.
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Conference,
    Parallel,
}

impl From<ModeArg> for makd::planner::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Conference => makd::planner::Mode::Conference,
            ModeArg::Parallel => makd::planner::Mode::Parallel,
        }
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected i,j, got {s:?}"))?;
    let v = |t: &str| -> Result<usize, String> {
        t.trim()
            .parse::<usize>()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| format!("bad party {t:?}; parties are 1-based"))
    };
    Ok((v(a)?, v(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.seed.unwrap_or_else(rand::random);
    let mut out = Emitter::new(cli.format);
    out.seed(seed);
    let result = commands::run(&cli.command, seed, &mut out);
    let code = match result {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("{msg}");
            1
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            2
        }
    };
    if let Err(e) = out.finish(cli.output.as_deref()) {
        eprintln!("{e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
