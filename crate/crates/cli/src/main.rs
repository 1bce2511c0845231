use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use normsym::allornothing::{ScanMode, DEFAULT_BUDGET};
use normsym::galois::PrimeCase;
use normsym::heuristics::{ChevalleyInput, IwasawaSequence, RamificationProfile};

use normsym_cli::args;
use normsym_cli::commands::{self, CliError, CmdResult, Format};

// Aliases keep clap from treating these as repeated flags; each is parsed
// from a single `a,b,c` or `a..b` argument.
type Primes = Vec<u64>;
type Levels = Vec<u32>;
type Exponents = Vec<u64>;

#[derive(Parser)]
#[command(
    name = "normsym",
    version,
    about = "Norm residue symbol ranks and class group rank heuristics"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Fixed,
    Shifted,
    Both,
}

impl CaseArg {
    fn cases(self) -> Vec<PrimeCase> {
        match self {
            CaseArg::Fixed => vec![PrimeCase::Fixed],
            CaseArg::Shifted => vec![PrimeCase::Shifted],
            CaseArg::Both => PrimeCase::BOTH.to_vec(),
        }
    }
}

#[derive(Args)]
struct ProfileArgs {
    /// Odd prime ℓ.
    #[arg(long)]
    ell: u64,
    /// Number of ramified primes.
    #[arg(long, default_value_t = 1)]
    t: u32,
    /// How many of them are 7 mod 8.
    #[arg(long, default_value_t = 1)]
    s: u32,
}

impl ProfileArgs {
    fn profile(&self) -> Result<RamificationProfile, CliError> {
        RamificationProfile::new(self.ell, self.t, self.s)
            .map_err(|e| CliError::usage(e.to_string()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the factorization of x^{2^{n-1}} + 1 and nonsingularity of B.
    Lemmas {
        /// Primes: `3`, `3,5,11` or `3..997`.
        #[arg(long, value_parser = args::parse_primes)]
        ell: Primes,
        /// Level `k` or range `a..b`.
        #[arg(long, value_parser = args::parse_levels)]
        n: Levels,
    },
    /// Rank census of symbol matrices over F_ℓ.
    AllOrNothing {
        #[arg(long, value_parser = args::parse_primes)]
        ell: Primes,
        #[arg(long, value_parser = args::parse_levels)]
        n: Levels,
        #[arg(long, value_enum, default_value_t = CaseArg::Both)]
        case: CaseArg,
        /// Enumerate every assignment (default).
        #[arg(long, conflicts_with = "sampled")]
        exhaustive: bool,
        /// Draw this many uniform assignments instead.
        #[arg(long, value_name = "N")]
        sampled: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum number of rank computations in exhaustive mode.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Exact distribution of rank A_n^Δ.
    Predict {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, value_parser = args::parse_levels)]
        n: Levels,
    },
    /// Predicted A_n^Δ ranks against observed A_n ranks from a reference table.
    Compare {
        /// Observed table, 3 or 4.
        #[arg(long)]
        table: u32,
    },
    /// Monte Carlo rank distribution from random symbol matrices.
    Simulate {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Partial sum and remainder bound for the stabilization tail.
    Tail {
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        t: u32,
        /// First level of the sum.
        #[arg(long = "N", value_name = "N")]
        start: u32,
        #[arg(long, default_value_t = 3)]
        terms: u32,
    },
    /// Ambiguous class number from Chevalley's formula (ℓ-parts).
    Chevalley {
        #[arg(long)]
        ell: u64,
        /// ℓ-part of h_K.
        #[arg(long = "h", default_value_t = 1)]
        h: u64,
        /// Exponent of ℓ in the product of ramification indices.
        #[arg(long = "e-exp")]
        e_exp: u32,
        /// Exponent of ℓ in the unit norm index.
        #[arg(long = "E-exp", default_value_t = 0)]
        unit_exp: u32,
    },
    /// Check class number exponents against the μ-invariant bounds.
    Iwasawa {
        /// Exponents e_0,e_1,...
        #[arg(long, value_parser = args::parse_u64_list)]
        e: Exponents,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        s: u64,
    },
}

fn run(cli: Cli) -> CmdResult {
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    match cli.command {
        Command::Lemmas { ell, n } => commands::lemmas(&ell, &n, format),
        Command::AllOrNothing {
            ell,
            n,
            case,
            exhaustive: _,
            sampled,
            seed,
            budget,
        } => {
            let mode = match sampled {
                Some(0) => return Err(CliError::usage("--sampled: need at least one sample")),
                Some(count) => ScanMode::Sampled { count, seed },
                None => ScanMode::Exhaustive,
            };
            commands::all_or_nothing(&ell, &n, &case.cases(), mode, budget, format)
        }
        Command::Predict { profile, n } => commands::predict(profile.profile()?, &n, format),
        Command::Compare { table } => commands::compare(table, format),
        Command::Simulate {
            profile,
            n,
            samples,
            seed,
        } => commands::simulate(profile.profile()?, n, samples, seed, format),
        Command::Tail {
            ell,
            t,
            start,
            terms,
        } => commands::tail(ell, t, start, terms, format),
        Command::Chevalley {
            ell,
            h,
            e_exp,
            unit_exp,
        } => commands::chevalley(
            ChevalleyInput::from_exponents(ell, h, e_exp, unit_exp),
            format,
        ),
        Command::Iwasawa { e, ell, s } => commands::iwasawa(IwasawaSequence { e, ell, s }, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth a panic.
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
