use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cohdistill::analyze::{analyze, load_state, render_json, render_text};
use cohdistill::config::optimizer_config;
use cohdistill::sweep::{cmd_sweep, SweepSpec};
use cohdistill::verify::{cmd_verify, render_table, Suite};
use cohdistill::{init_threads, CliError, CliResult};
use cohdistill_core::Family;

#[derive(Parser, Debug)]
#[command(name = "cohdistill", version, about = "Assisted coherence distillation: sweeps, state analysis, property checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct OptimizerArgs {
    /// Coarse search grid over (theta, phi), as NxM.
    #[arg(long, value_name = "NxM")]
    grid: Option<String>,
    /// Pattern-search refinement iterations.
    #[arg(long, value_name = "K")]
    refine: Option<usize>,
    /// Optimizer tolerance.
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep a tripartite family over p and write CSV.
    Sweep {
        /// State family: w or ghz.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0.0)]
        p_start: f64,
        #[arg(long, default_value_t = 1.0)]
        p_end: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        /// Output CSV path (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "A")]
        ancilla: String,
        #[command(flatten)]
        opt: OptimizerArgs,
    },
    /// Report assisted distillable coherence for a state stored as JSON.
    Analyze {
        /// Density-matrix JSON file.
        state: PathBuf,
        /// Ancilla subsystem (first label when omitted).
        #[arg(long)]
        ancilla: Option<String>,
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        opt: OptimizerArgs,
    },
    /// Run a property-verification suite.
    Verify {
        /// entropy, measurement, monogamy, correlations, oracle or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        opt: OptimizerArgs,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads()?;
    match cli.command {
        Command::Sweep {
            family,
            p_start,
            p_end,
            steps,
            out,
            ancilla,
            opt,
        } => {
            let family: Family = family.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
            let cfg = optimizer_config(opt.grid.as_deref(), opt.refine, opt.tol)?;
            let spec = SweepSpec {
                family,
                p_start,
                p_end,
                steps,
                ancilla,
            };
            cmd_sweep(&spec, &cfg, out.as_deref())?;
        }
        Command::Analyze { state, ancilla, json, opt } => {
            let cfg = optimizer_config(opt.grid.as_deref(), opt.refine, opt.tol)?;
            let rho = load_state(&state)?;
            let report = analyze(&rho, ancilla.as_deref(), &cfg)?;
            if json {
                println!("{}", render_json(&report));
            } else {
                print!("{}", render_text(&report));
            }
        }
        Command::Verify {
            suite,
            trials,
            seed,
            json,
            opt,
        } => {
            let suite: Suite = suite.parse()?;
            let cfg = optimizer_config(opt.grid.as_deref(), opt.refine, opt.tol)?;
            let outcomes = cmd_verify(suite, trials, seed, &cfg)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&outcomes).expect("outcomes serialize"));
            } else {
                print!("{}", render_table(&outcomes));
            }
            let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.property.as_str()).collect();
            if !failed.is_empty() {
                return Err(CliError::CheckFailed(failed.join(", ")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cohdistill: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
