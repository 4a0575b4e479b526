use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use monoidal::cache::Cache;
use monoidal::network::MultiactionKind;
use monoidal::report::{run, Command, Format, RunConfig};

#[derive(Parser)]
#[command(
    name = "monoidal",
    version,
    about = "Exhaustive checks of monoidal networks over finite commutative rings"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Size cap in the verb's unit; never exceeds the built-in limit.
    #[arg(long, global = true)]
    cap: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
    /// Enumeration cache directory (defaults to $MONOIDAL_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Human,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Symmetric,
    Automorphic,
    SymmetricTop,
}

#[derive(Subcommand)]
enum Verb {
    /// Certify every intersection-closed family on n points.
    Ucsc {
        #[arg(long)]
        n: u32,
    },
    /// Decide whether a multiaction is a monoidal network.
    NetworkCheck {
        #[arg(long)]
        ring: String,
        #[arg(long, value_enum, default_value_t = Kind::Symmetric)]
        multiaction: Kind,
    },
    /// Proper association sweep over 𝔽₂ⁿ.
    #[command(name = "conj2")]
    ProperAssociation {
        #[arg(long)]
        n: u32,
    },
    /// Unique maximal covering ideal sweep over 𝔽₂ⁿ.
    #[command(name = "conj3")]
    UniqueMaximal {
        #[arg(long)]
        n: u32,
    },
    /// Automorphic networks over the dual-number rings R_{n,p}.
    #[command(name = "theorem2")]
    DualTable {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        nmax: u32,
    },
    /// Totient bound scan over primes up to pmax.
    PhiScan {
        #[arg(long)]
        pmax: u64,
    },
    /// Maximal-ideal certificates on a finite local ring.
    #[command(name = "prop9")]
    LocalRing {
        #[arg(long)]
        ring: String,
    },
    /// Validate a family file and certify a rare point.
    FamilyCheck {
        #[arg(long)]
        input: PathBuf,
    },
    /// Build a pseudocomplement for a family file.
    PseudoSolve {
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.verb {
        Verb::Ucsc { n } => Command::Ucsc { n },
        Verb::NetworkCheck { ring, multiaction } => Command::NetworkCheck {
            ring,
            multiaction: match multiaction {
                Kind::Symmetric => MultiactionKind::Symmetric,
                Kind::Automorphic => MultiactionKind::Automorphic,
                Kind::SymmetricTop => MultiactionKind::SymmetricTop,
            },
        },
        Verb::ProperAssociation { n } => Command::ProperAssociation { n },
        Verb::UniqueMaximal { n } => Command::UniqueMaximal { n },
        Verb::DualTable { p, nmax } => Command::DualTable { p, nmax },
        Verb::PhiScan { pmax } => Command::PhiScan { pmax },
        Verb::LocalRing { ring } => Command::LocalRing { ring },
        Verb::FamilyCheck { input } => Command::FamilyCheck { input },
        Verb::PseudoSolve { input } => Command::PseudoSolve { input },
    };
    let format = match cli.format {
        OutputFormat::Human => Format::Human,
        OutputFormat::Json => Format::Json,
    };
    let config = RunConfig {
        command,
        cap: cli.cap,
        jobs: cli.jobs,
        format,
        cache: cli.cache_dir.map_or_else(Cache::from_env, Cache::at),
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match report.render(format) {
        Ok(text) => println!("{text}"),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    if report.exit_code() == 2 && format == Format::Human {
        eprintln!("surprise: full witness data follows");
        eprintln!("{}", serde_json::to_string_pretty(&report.data).unwrap_or_default());
    }
    ExitCode::from(report.exit_code() as u8)
}
