//! `dualrlpn`: command-line harness for the experiments of the `dualrlpn` library.
//!
//! Exit codes: 0 on success, 2 for usage and configuration errors, 1 for
//! anything that fails while computing (budgets, I/O).

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::ConfigError;

#[derive(Parser, Debug)]
#[command(name = "dualrlpn", version = concat!(env!("CARGO_PKG_VERSION"), " (", env!("DUALRLPN_GIT_DESCRIBE"), ")"))]
#[command(about = "Double-RLPN decoding experiments", propagate_version = true)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Global {
    /// Master seed; overrides the `seed` key of a config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 0 or absent lets the pool decide. Outputs do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact Krawtchouk values K_w(t) for t = 0..=n as CSV (t,value).
    Krawtchouk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        /// CSV path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a planted instance described by a TOML config; prints a JSON record.
    Decode {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Experimental, Poisson and independence survival curves of one planted run.
    Survival {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Asymptotic complexity exponents over a grid of rates.
    Exponent {
        /// Comma-separated: prange, dumer, bjmm-eq, double-rlpn.
        #[arg(long, value_delimiter = ',', required = true)]
        algs: Vec<String>,
        #[arg(long)]
        rmin: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
        /// Random restarts of the double-RLPN optimizer per rate.
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 1)]
        n_aux: usize,
    },
    /// Lattice score survival models: refined, floor, crude, independence and Monte Carlo.
    LatticeScore {
        /// fig3-left, fig3-right, or custom (requires --config).
        #[arg(long)]
        preset: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        mc_trials: Option<u64>,
        /// Number of thresholds between 0 and max-sds waterfall deviations.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        max_sds: Option<f64>,
    },
    /// Checks the duality identity exactly on random small instances.
    DualityCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        kaux: usize,
        #[arg(long, default_value_t = 1)]
        taux: usize,
        #[arg(long, default_value_t = 3)]
        w: usize,
        #[arg(long, default_value_t = 3)]
        t: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = cli.global;
    match cli.command {
        Command::Krawtchouk { n, w, out } => commands::krawtchouk(g, n, w, out.as_deref()),
        Command::Decode { config, out } => commands::decode(g, &config, out.as_deref()),
        Command::Survival { config, out } => commands::survival(g, &config, &out),
        Command::Exponent {
            algs,
            rmin,
            rmax,
            step,
            out,
            restarts,
            n_aux,
        } => commands::exponent(g, &algs, (rmin, rmax, step), &out, restarts, n_aux),
        Command::LatticeScore {
            preset,
            config,
            out,
            mc_trials,
            points,
            max_sds,
        } => commands::lattice_score(
            g,
            &preset,
            config.as_deref(),
            &out,
            commands::CurveOverrides {
                mc_trials,
                points,
                max_sds,
            },
        ),
        Command::DualityCheck {
            n,
            k,
            s,
            kaux,
            taux,
            w,
            t,
            trials,
        } => commands::duality_check(
            g,
            commands::CheckShape {
                n,
                k,
                s,
                k_aux: kaux,
                t_aux: taux,
                w,
                t,
            },
            trials,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
