use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use nsp_waves::{parse_config, run_command, Command};

/// Experiments on viscous shocks and rarefactions of the Navier-Stokes-Poisson system.
#[derive(Debug, Parser)]
#[command(name = "nsp-waves", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// TOML experiment file.
    #[arg(long)]
    config: PathBuf,
    /// Output root; overrides `output_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Multiply the cell count (and divide the profile spacing) by this factor.
    #[arg(long, default_value_t = 1)]
    refine: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = parse_config(&cli.config)
        .and_then(|cfg| if cli.refine == 1 { Ok(cfg) } else { cfg.refined(cli.refine) })
        .and_then(|cfg| {
            let out = cli.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
            run_command(cli.command, &cfg, &out)
        });
    match result {
        Ok(o) => {
            let status = if o.passed { "passed" } else { "FAILED" };
            println!("{}: {status}; artifacts in {}", cli.command.name(), o.dir.display());
            if o.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
