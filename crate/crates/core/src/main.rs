//! Command-line front end for the RIS-UAV sweeps.
//!
//! Exit codes: 0 success, 1 configuration error, 2 runtime or numeric error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use risuav::harness::{
    oracle_check, parse_methods, run_single, run_sweep, write_results, Execution, ExperimentConfig, Method,
    SweepResult, SweepVariable,
};
use risuav::Error;

#[derive(Parser, Debug)]
#[command(name = "risuav", version, about = "RIS-on-UAV OFDM downlink simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment configuration; missing fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed for every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte-Carlo trials per sweep point.
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// CSV output path; the resolved config goes to <out>.config.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Comma-separated subset of sdr,unconfigured.
    #[arg(long, global = true)]
    methods: Option<String>,

    /// Worker threads (default: all cores; 1 runs serially).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rate versus number of subcarriers.
    SweepSubcarriers,
    /// Rate versus number of RIS elements.
    SweepElements,
    /// Rate versus direct-link SNR.
    SweepSnr,
    /// All trials at the base configuration.
    Single,
    /// SDR pipeline versus exhaustive 16-level search on small instances.
    OracleCheck {
        #[arg(long, default_value_t = 100)]
        instances: usize,
    },
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    if let Some(trials) = cli.trials {
        config.trials = trials;
    }
    if let Some(methods) = &cli.methods {
        config.methods = parse_methods(methods)?;
    }
    config.validate()?;
    Ok(config)
}

fn print_table(result: &SweepResult) {
    println!("{:>12} {:>14} {:>16} {:>12}", result.sweep_var, "method", "rate [Mbps]", "ci95");
    for row in &result.rows {
        println!(
            "{:>12} {:>14} {:>16.6} {:>12.6}",
            row.value, row.method, row.rate_mbps_mean, row.rate_mbps_ci95
        );
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let config = load_config(cli)?;
    let execution = match cli.threads {
        Some(1) => Execution::Serial,
        Some(n) => Execution::Threads(n),
        None => Execution::Parallel,
    };
    let variable = match cli.command {
        Command::SweepSubcarriers => Some(SweepVariable::Subcarriers),
        Command::SweepElements => Some(SweepVariable::Elements),
        Command::SweepSnr => Some(SweepVariable::Snr),
        Command::Single => None,
        Command::OracleCheck { instances } => {
            let report = oracle_check(instances, config.master_seed, &config.solver)?;
            let bound_failures = report.instances.iter().filter(|i| !i.bound_ok()).count();
            let ratio_failures = report.instances.iter().filter(|i| !i.ratio_ok()).count();
            println!(
                "{} instances: worst pipeline/optimum ratio {:.4}, {} below 0.95, {} relaxation-bound violations",
                report.instances.len(),
                report.worst_ratio(),
                ratio_failures,
                bound_failures
            );
            if !report.passed() {
                return Err(Error::Domain("oracle check failed".into()));
            }
            return Ok(());
        }
    };

    let result = match variable {
        Some(v) => run_sweep(&config, v, execution)?,
        None => run_single(&config, execution)?,
    };
    print_table(&result);
    if config.methods.contains(&Method::Sdr) && config.methods.contains(&Method::Unconfigured) {
        let dominated = result
            .outcomes
            .iter()
            .filter(|t| t.get(Method::Sdr).unwrap().rate_mbps >= t.get(Method::Unconfigured).unwrap().rate_mbps)
            .count();
        let fallbacks = result
            .outcomes
            .iter()
            .filter(|t| t.get(Method::Sdr).unwrap().fell_back)
            .count();
        println!(
            "sdr >= unconfigured in {dominated}/{} trials ({fallbacks} kept the unconfigured phases)",
            result.outcomes.len()
        );
    }
    if let Some(out) = &cli.out {
        let used = match variable {
            Some(v) => config.clone().for_sweep(v),
            None => config.clone(),
        };
        write_results(&result, &used, out)?;
        eprintln!("wrote {}", out.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
