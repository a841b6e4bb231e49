use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use entassist::commands::{self, EoaArgs, ExportTarget, ScanArgs};
use entassist::files::{CATALOG_NAMES, PROTOCOL_NAMES};
use entassist::report::ReproduceConfig;

/// Entanglement of assistance and collaboration for tripartite states.
///
/// STATE arguments take a JSON state file or `catalog:NAME`.
#[derive(Parser)]
#[command(name = "entassist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute every headline result and write a JSON report.
    Reproduce {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        restarts: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
    },
    /// Entanglement of a pure state (or a pure reduction) across a cut.
    Measure {
        #[arg(long)]
        state: String,
        /// Parties on each side, e.g. `A:B`, `AB:C`, `A,B:C`.
        #[arg(long, default_value = "A:B")]
        cut: String,
        #[arg(long, default_value = "entropy")]
        measure: String,
        #[arg(long)]
        renormalize: bool,
    },
    /// Best decomposition found for the first party against the others,
    /// with the last party assisting.
    Eoa {
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        restarts: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ensemble size; defaults to rank squared.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_ensemble: Option<u64>,
        #[arg(long, default_value = "entropy")]
        measure: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
        #[arg(long)]
        renormalize: bool,
    },
    /// Run an LOCC protocol and report every leaf.
    Simulate {
        #[arg(long)]
        state: String,
        /// Protocol file, or a built-in name (`phi`, `mixed`).
        #[arg(long)]
        protocol: String,
        #[arg(long, default_value = "A:B")]
        cut: String,
        #[arg(long, default_value = "entropy")]
        measure: String,
        #[arg(long)]
        renormalize: bool,
    },
    /// Minimum maximal-entanglement deficit over the span of u0, u1, or over
    /// two-copy combinations with `--ncopy 2`.
    Scan {
        #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u64).range(64..))]
        grid: u64,
        #[arg(long, default_value_t = 200)]
        refine: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=2))]
        ncopy: Option<u64>,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
    },
    /// Write a catalog state or built-in protocol to a file.
    Export {
        #[arg(long, conflicts_with = "protocol", required_unless_present = "protocol",
              value_parser = clap::builder::PossibleValuesParser::new(CATALOG_NAMES))]
        state: Option<String>,
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PROTOCOL_NAMES))]
        protocol: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn n(x: u64) -> usize {
    usize::try_from(x).unwrap_or(usize::MAX)
}

fn run(cmd: Command) -> anyhow::Result<(String, bool)> {
    let text = match cmd {
        Command::Reproduce {
            out,
            seed,
            restarts,
            threads,
        } => {
            let cfg = ReproduceConfig {
                seed,
                restarts: n(restarts),
                threads: n(threads),
            };
            let (text, doc) = commands::reproduce_to(out.as_deref(), &cfg)?;
            return Ok((text, doc.all_pass));
        }
        Command::Measure {
            state,
            cut,
            measure,
            renormalize,
        } => commands::measure(&state, &cut, &measure, renormalize)?,
        Command::Eoa {
            state,
            restarts,
            seed,
            max_ensemble,
            measure,
            threads,
            renormalize,
        } => commands::eoa(&EoaArgs {
            state: &state,
            restarts: n(restarts),
            seed,
            max_ensemble: max_ensemble.map(n),
            measure: &measure,
            threads: n(threads),
            renormalize,
        })?,
        Command::Simulate {
            state,
            protocol,
            cut,
            measure,
            renormalize,
        } => commands::simulate(&state, &protocol, &cut, &measure, renormalize)?,
        Command::Scan {
            grid,
            refine,
            ncopy,
            samples,
            seed,
            threads,
        } => commands::scan(&match ncopy {
            Some(copies) => ScanArgs::NCopy {
                copies: n(copies),
                samples: n(samples),
                seed,
            },
            None => ScanArgs::Span {
                grid: n(grid),
                refine: n(refine),
                threads: n(threads),
            },
        })?,
        Command::Export { state, protocol, out } => {
            let target = match (&state, &protocol) {
                (Some(s), _) => ExportTarget::State(s),
                (None, Some(p)) => ExportTarget::Protocol(p),
                (None, None) => unreachable!("clap requires one of --state, --protocol"),
            };
            commands::export(&target, &out)?
        }
    };
    Ok((text, true))
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
