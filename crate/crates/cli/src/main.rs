use std::process::ExitCode;

use chainfact::chain::ChainPolynomial;
use chainfact::verify::{
    emit_report, verify_euler, verify_invariants, verify_main_theorem, verify_monodromy, verify_triangles, Cache,
    Format, VerificationReport, VerifyOptions,
};
use clap::{Args, Parser, Subcommand};

/// Exact checks for maximally-graded matrix factorizations of chain polynomials.
#[derive(Parser)]
#[command(name = "chainfact", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Exponents a1,..,an of x1^a1 x2 + x2^a2 x3 + .. + xn^an.
    #[arg(long, value_parser = parse_chain)]
    chain: ChainPolynomial,
    /// Output format: json, csv or md.
    #[arg(long, default_value = "json", value_parser = parse_format)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Grading group, phi, chi, Serre matrix, zeta factorization and lattice checks.
    Invariants(Common),
    /// Builds the exceptional collection and runs every check.
    Verify {
        #[command(flatten)]
        common: Common,
        /// First index of the collection.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        offset: i64,
        /// Extra translation degrees scanned beyond each window.
        #[arg(long, default_value_t = 3)]
        margin: i64,
        /// Recompute the Hom table instead of reading the cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Euler matrix of the collection against chi.
    Euler {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        offset: i64,
    },
    /// Monodromy: M = M1^mu, det(1 - tM) and the exponent oracle.
    Monodromy(Common),
    /// K-theory identities and cone checks for the exact triangles.
    Triangles {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        offset: i64,
    },
}

fn parse_chain(s: &str) -> Result<ChainPolynomial, String> {
    s.parse().map_err(|e: chainfact::Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: chainfact::Error| e.to_string())
}

fn run(cli: Cli) -> chainfact::Result<(VerificationReport, Format)> {
    let cache;
    Ok(match cli.command {
        Command::Invariants(c) => (verify_invariants(&c.chain), c.format),
        Command::Monodromy(c) => (verify_monodromy(&c.chain), c.format),
        Command::Verify { common, offset, margin, no_cache } => {
            cache = (!no_cache).then(Cache::from_env);
            let opts = VerifyOptions { margin, cache: cache.as_ref(), ..VerifyOptions::default() };
            (verify_main_theorem(&common.chain, offset, &opts)?, common.format)
        }
        Command::Euler { common, offset } => {
            (verify_euler(&common.chain, offset, &VerifyOptions::default())?, common.format)
        }
        Command::Triangles { common, offset } => (verify_triangles(&common.chain, offset, true)?, common.format),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, format) = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match emit_report(&report, format) {
        Ok(text) => println!("{text}"),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
