//! `obstree`: checks on metric trees, observers' limits, boundary maps and
//! blended metrics.
//!
//! Exit status: 0 all checks passed, 1 violation (witness printed), 2
//! inconclusive at the given depth, 64 unparsable input, 65 invalid
//! parameters, 66 unreadable input file.

mod cmd;
mod input;
mod report;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use cmd::blend::BlendCmd;
use cmd::observers::ObsCmd;
use cmd::qmap::QmapCmd;
use cmd::replay::ReplayCmd;
use cmd::tree::{CenterArgs, CertifyArgs, SegmentArgs};
use input::CliError;
use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "obstree", version, about = "Computational R-tree geometry and free-group boundary dynamics")]
struct Cli {
    /// Report layout.
    #[arg(long, value_enum, default_value = "human", global = true)]
    format: Format,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Four-point check and reconstruction of a tree or metric table.
    Certify(CertifyArgs),
    /// Center of three points of a tree.
    Center(CenterArgs),
    /// Geodesic segment between two points of a tree.
    Segment(SegmentArgs),
    /// Inferior limits and convergence in the observers' topology.
    #[command(subcommand)]
    Observers(ObsCmd),
    /// The map Q, small translation lengths and dual laminations of a line action.
    #[command(subcommand)]
    Qmap(QmapCmd),
    /// Convex combinations of tree metrics and length functions.
    #[command(subcommand)]
    Blend(BlendCmd),
    /// Re-derives a witness printed by another subcommand.
    #[command(subcommand)]
    Replay(ReplayCmd),
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Certify(a) => cmd::tree::certify(a, cli.seed),
        Command::Center(a) => cmd::tree::center(a),
        Command::Segment(a) => cmd::tree::segment(a),
        Command::Observers(c) => cmd::observers::run(c),
        Command::Qmap(c) => cmd::qmap::run(c),
        Command::Blend(c) => cmd::blend::run(c),
        Command::Replay(c) => cmd::replay::run(c, cli.seed),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 65,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(&cli) {
        Ok(r) => {
            print!("{}", r.render(cli.format));
            std::process::exit(r.status.code());
        }
        Err(e) => {
            eprintln!("obstree: {e}");
            std::process::exit(e.code());
        }
    }
}
