mod cache;
mod commands;
mod render;
mod verify;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use commands::{Ctx, Operator};
use render::Format;
use verify::Suite;

/// Dieudonné modules of Suzuki curves over F_2.
#[derive(Parser, Debug)]
#[command(name = "suzuki", version)]
struct Cli {
    /// Curve index: q0 = 2^m, q = 2^(2m+1).
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4))]
    m: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Directory for cached operator matrices.
    #[arg(long, global = true, env = "SUZUKI_CACHE_DIR")]
    cache: Option<PathBuf>,

    /// Initial truncation order for local series expansions.
    #[arg(long, global = true)]
    order: Option<i64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Index set with the matching H1(O) functions and differentials.
    Basis,
    /// Matrices of F, V and tau on H1_dR.
    Matrices {
        #[arg(long, value_enum, default_value_t = Operator::All)]
        operator: Operator,
    },
    /// Recompute the Cartier operator table.
    CartierTable,
    /// Decomposition into indecomposable E-modules.
    Decompose {
        /// Only the tau-invariant part.
        #[arg(long)]
        trivial: bool,
    },
    /// Ekedahl-Oort type.
    Eo {
        #[arg(long)]
        trivial: bool,
    },
    /// a-number and p-rank.
    Anumber {
        #[arg(long)]
        trivial: bool,
    },
    /// Closed-form model of the tau-invariant part.
    Trivial,
    /// Good subsets of Z/(2m+1) and their multiplicities.
    GoodSubsets,
    /// Multiplicity of E/E(F^(2m+1) + V^(2m+1)) against 4^m.
    Conjecture,
    /// Run check suites; exits nonzero on any failure.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let ctx = Ctx {
        m: cli.m,
        cache: cache::Cache::new(cli.cache),
        order: cli.order,
    };
    let (out, ok) = match cli.command {
        Command::Basis => (commands::basis(&ctx)?, true),
        Command::Matrices { operator } => (commands::matrices(&ctx, operator)?, true),
        Command::CartierTable => (commands::cartier_table(&ctx)?, true),
        Command::Decompose { trivial } => (commands::decompose(&ctx, trivial)?, true),
        Command::Eo { trivial } => (commands::eo(&ctx, trivial)?, true),
        Command::Anumber { trivial } => (commands::anumber(&ctx, trivial)?, true),
        Command::Trivial => (commands::trivial(&ctx)?, true),
        Command::GoodSubsets => (commands::good_subsets(&ctx)?, true),
        Command::Conjecture => (commands::conjecture(&ctx)?, true),
        Command::Verify { suite } => verify::run(&ctx, suite)?,
    };
    print!("{}", out.render(cli.format));
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
