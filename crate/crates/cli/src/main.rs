use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use projlab_cli::{scenarios, CliError, RunOutcome};

#[derive(Parser)]
#[command(name = "projlab", version, about = "Power iterations of products of projections in lp spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks listed in a JSON config.
    Run { config: PathBuf },
    /// Run a builtin scenario.
    Scenario {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory (default: projlab-out/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the scenario's config as JSON instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// List builtin scenarios.
    Scenarios,
}

#[cfg(not(feature = "parallel"))]
fn init_threads() {}

#[cfg(feature = "parallel")]
fn init_threads() {
    let Ok(v) = std::env::var("PROJLAB_THREADS") else { return };
    match v.parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("ignoring PROJLAB_THREADS={v:?}: expected a positive integer"),
    }
}

fn print_outcome(outcome: &RunOutcome) {
    for (r, ms) in outcome.results.iter().zip(&outcome.runtimes_ms) {
        println!("{:<8} {:<20} {:<24} {ms:>9.1} ms", r.verdict.as_str(), r.check, r.instance);
    }
    println!("reports written to {}", outcome.output.display());
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    let result: Result<RunOutcome, CliError> = match cli.command {
        Command::Run { config } => projlab_cli::run_file(&config),
        Command::Scenario { name, seed, out, print_config } => {
            let out = out.unwrap_or_else(|| PathBuf::from("projlab-out").join(&name));
            match scenarios::scenario_config(&name, seed, out) {
                Ok(cfg) if print_config => {
                    println!("{}", serde_json::to_string_pretty(&cfg).expect("configs serialize"));
                    return ExitCode::SUCCESS;
                }
                other => other.and_then(|cfg| projlab_cli::run(&cfg)),
            }
        }
        Command::Scenarios => {
            for s in scenarios::SCENARIOS {
                println!("{s}");
            }
            return ExitCode::SUCCESS;
        }
    };
    match result {
        Ok(outcome) => {
            print_outcome(&outcome);
            if outcome.failed() {
                eprintln!("some checks failed; see {}", outcome.output.join("summary.csv").display());
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("projlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
