//! Command-line surface for the renormalization toolkit.
//!
//! Exit codes: 0 when the command's checks pass (data dumps always pass),
//! 1 when any verification record fails, 2 on usage or configuration errors.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use renormlab_core::Side;

use config::{default_eps_list, parse_eps_list, Format, RunConfig};

fn parse_side(s: &str) -> Result<Side> {
    match s {
        "l" | "left" => Ok(Side::Left),
        "r" | "right" => Ok(Side::Right),
        other => bail!("unknown side {other:?} (expected l or r)"),
    }
}

fn parse_format(s: &str) -> Result<Format> {
    s.parse()
}

#[derive(Parser)]
#[command(
    name = "renormlab",
    version,
    about = "Renormalization toolkit for symmetric cubic bimodal maps"
)]
struct Cli {
    /// key=value config file; the RENORMLAB_CONFIG env var is the fallback
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// write output to this path instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// output format
    #[arg(long, global = true, value_name = "csv|json", value_parser = parse_format)]
    format: Option<Format>,
    /// root-solving tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// PRNG seed for the shift-check sequences
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Scaling and gap ratios over a parameter range
    Ratios {
        #[arg(long, value_parser = parse_side, default_value = "l")]
        side: Side,
        /// range start (defaults to a side-specific window)
        #[arg(long)]
        lo: Option<f64>,
        /// range end
        #[arg(long)]
        hi: Option<f64>,
        /// number of rows
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Feasible parameter components and their fixed-point outcomes
    Feasible {
        #[arg(long, value_parser = parse_side, default_value = "l")]
        side: Side,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Verify the two unstable fixed points and the mirror identity
    FixedPoints,
    /// Interval tower frame at the stationary fixed point
    Tower {
        #[arg(long, value_parser = parse_side, default_value = "l")]
        side: Side,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Verify the renormalization operator against assembled maps
    RenormCheck {
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Dump the extension graph: cubic pieces, junctions, ledgers
    Extend {
        #[arg(long, value_parser = parse_side, default_value = "l")]
        side: Side,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Verify the shift conjugacy on seeded random symbol sequences
    ShiftCheck {
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        length: Option<usize>,
    },
    /// Perturbed fixed-point sweep over epsilon factors
    Perturb {
        /// restrict to one side (default: both)
        #[arg(long, value_parser = parse_side)]
        side: Option<Side>,
        /// comma-separated factors, default 0.98,0.99,1.00,1.01,1.02
        #[arg(long)]
        eps: Option<String>,
    },
    /// Run the full verification suite
    All,
}

fn default_ratio_range(side: Side) -> (f64, f64) {
    match side {
        Side::Left => (0.15, 0.21),
        Side::Right => (0.79, 0.85),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(t) = cli.tol {
        cfg.root_tol = t;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    let doc = match &cli.cmd {
        Cmd::Ratios { side, lo, hi, grid } => {
            if let Some(g) = grid {
                cfg.grid_ratios = *g;
            }
            cfg.validate()?;
            let (dlo, dhi) = default_ratio_range(*side);
            commands::cmd_ratios(&cfg, *side, lo.unwrap_or(dlo), hi.unwrap_or(dhi))?
        }
        Cmd::Feasible { side, grid } => {
            if let Some(g) = grid {
                cfg.grid_feasible = *g;
            }
            cfg.validate()?;
            commands::cmd_feasible(&cfg, *side)?
        }
        Cmd::FixedPoints => {
            cfg.validate()?;
            commands::cmd_fixed_points(&cfg)?
        }
        Cmd::Tower { side, depth } => {
            if let Some(d) = depth {
                cfg.tower_depth = *d;
            }
            cfg.validate()?;
            commands::cmd_tower(&cfg, *side)?
        }
        Cmd::RenormCheck { depth } => {
            if let Some(d) = depth {
                cfg.fs_depth = *d;
            }
            cfg.validate()?;
            commands::cmd_renorm_check(&cfg)?
        }
        Cmd::Extend { side, depth } => {
            if let Some(d) = depth {
                cfg.extension_depth = *d;
            }
            cfg.validate()?;
            commands::cmd_extend(&cfg, *side)?
        }
        Cmd::ShiftCheck { count, length } => {
            if let Some(n) = count {
                cfg.shift_count = *n;
            }
            if let Some(n) = length {
                cfg.shift_length = *n;
            }
            cfg.validate()?;
            commands::cmd_shift_check(&cfg)?
        }
        Cmd::Perturb { side, eps } => {
            cfg.validate()?;
            let list = match eps {
                Some(s) => parse_eps_list(s, cfg.eps_window())?,
                None => default_eps_list(),
            };
            let sides: Vec<Side> = match side {
                Some(s) => vec![*s],
                None => vec![Side::Left, Side::Right],
            };
            commands::cmd_perturb(&cfg, &sides, &list)?
        }
        Cmd::All => {
            cfg.validate()?;
            commands::cmd_all(&cfg)?
        }
    };
    output::emit(&doc, cfg.format, cli.out.as_deref())?;
    Ok(doc.pass.unwrap_or(true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
