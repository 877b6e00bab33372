use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use evoclust::config::ScenarioConfig;
use evoclust::experiment::{cli_run, cli_sweep, cli_validate, CommandSummary};

#[derive(Parser)]
#[command(name = "evoclust", version, about = "Stable cluster-size distributions for dense device networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and write its trace, metrics and stability report.
    Run(Common),
    /// Run the Cartesian grid of the sweep axes.
    Sweep(Common),
    /// Compare every closed form against its numerical oracle.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario configuration file.
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = "EVOCLUST_OUT")]
    out: Option<PathBuf>,
    /// Also write SVG charts.
    #[arg(long)]
    plots: bool,
    /// Monte Carlo trials per validation point.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    quiet: bool,
}

impl Common {
    fn load(&self) -> evoclust::Result<(ScenarioConfig, PathBuf)> {
        let mut cfg = ScenarioConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(trials) = self.trials {
            if trials < 100 {
                return Err(evoclust::Error::Domain(format!("--trials must be at least 100, got {trials}")));
            }
            cfg.trials = trials;
        }
        let out = self
            .out
            .clone()
            .or_else(|| cfg.out_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        Ok((cfg, out))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match &cli.command {
        Command::Run(c) => (c, c.load().and_then(|(cfg, out)| cli_run(&cfg, &out, c.plots))),
        Command::Sweep(c) => (c, c.load().and_then(|(cfg, out)| cli_sweep(&cfg, &out, c.plots))),
        Command::Validate(c) => (c, c.load().and_then(|(cfg, out)| cli_validate(&cfg, &out))),
    };
    match result {
        Ok(CommandSummary { ok, lines, .. }) => {
            if !common.quiet {
                for line in lines {
                    println!("{line}");
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
