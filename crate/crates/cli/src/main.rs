//! `pqchan`: batch driver for protocol verification, bound audits and
//! entropy-inequality sweeps. Reports are JSON.
//!
//! Exit status: 0 pass, 1 property failure, 2 usage or input error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use report::{Report, RunConfig};

#[derive(Parser)]
#[command(
    name = "pqchan",
    version,
    about = "Private quantum channel verification workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check security and correctness and report resource usage.
    Verify {
        /// Builtin protocol name or path to a JSON descriptor.
        protocol: String,
        #[command(flatten)]
        common: Common,
    },
    /// Verify, then audit resources against the lower bounds.
    Audit {
        protocol: String,
        #[command(flatten)]
        common: Common,
    },
    /// Sample random states and report the worst slack per inequality.
    Inequalities {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Input size in qubits (bits for classical-input protocols).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random states for the inequality sweep.
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol_algebra: f64,
    #[arg(long, default_value_t = 1e-7)]
    tol_entropy: f64,
    /// Haar-random probes added to the quantum input ensemble.
    #[arg(long, default_value_t = 50)]
    probes: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

impl Common {
    fn run_config(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            tol_algebra: self.tol_algebra,
            tol_entropy: self.tol_entropy,
            random_probes: self.probes,
            samples: self.samples,
        }
    }
}

fn run(cli: Cli) -> Result<(Report, Option<PathBuf>)> {
    let (report, common) = match &cli.command {
        Command::Verify { protocol, common } => (
            commands::verify(protocol, common.n, common.run_config())?,
            common,
        ),
        Command::Audit { protocol, common } => (
            commands::audit(protocol, common.n, common.run_config())?,
            common,
        ),
        Command::Inequalities { common } => {
            if common.n.is_some() {
                bail!("--n does not apply to `inequalities`");
            }
            (commands::inequalities(common.run_config())?, common)
        }
    };
    if let Some(x) = report.numbers().into_iter().find(|x| !x.is_finite()) {
        bail!("report contains a non-finite value ({x})");
    }
    Ok((report, common.json.clone()))
}

fn emit(report: &Report, path: Option<PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    match path {
        Some(p) => {
            std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
            println!(
                "{}: {}",
                report.command,
                if report.pass { "pass" } else { "fail" }
            );
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli).and_then(|(report, path)| {
        emit(&report, path)?;
        Ok(report.pass)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
