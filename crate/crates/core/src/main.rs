use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hou_focus::focus::PorMode;
use hou_focus::scenario::{run_file, RunOptions};

#[derive(Parser)]
#[command(name = "hou-focus", version, about = "Focus semantic values by higher-order unification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a scenario file.
    Run {
        file: PathBuf,
        /// Maximum number of counted search steps [default: 8]
        #[arg(long, value_name = "N")]
        max_depth: Option<usize>,
        /// Maximum number of solutions per problem [default: 50]
        #[arg(long, value_name = "N")]
        max_solutions: Option<usize>,
        /// Maximum number of search nodes per problem [default: 100000]
        #[arg(long, value_name = "N")]
        max_nodes: Option<usize>,
        /// Primary occurrence restriction: dsp, strict or off [default: dsp]
        #[arg(long, value_name = "MODE")]
        por: Option<PorMode>,
        /// Show the equations solved and timings.
        #[arg(long)]
        verbose: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run { file, max_depth, max_solutions, max_nodes, por, verbose } = cli.command;
    let opts = RunOptions { max_depth, max_solutions, max_nodes, por, verbose };
    match run_file(&file, &opts) {
        Ok(report) => {
            print!("{}", report.render(verbose));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
