//! Run configuration: built-in defaults, overlaid by an optional key=value
//! file (`--config` or the `RENORMLAB_CONFIG` env var), overlaid by flags.
//! Flags always win.

use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Hard cap on the fs-map depth: 3^8 branch compositions is already the
/// iteration budget of the core library.
pub const FS_DEPTH_BUDGET: usize = renormlab_core::tower::ITERATION_BUDGET;
pub const TOWER_DEPTH_BUDGET: usize = 32;
pub const EXTENSION_DEPTH_BUDGET: usize = 24;
pub const SHIFT_LENGTH_BUDGET: usize = 12;
pub const SHIFT_COUNT_BUDGET: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format {other:?} (expected csv or json)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// bisection tolerance for parameter roots
    pub root_tol: f64,
    /// allowed |R(c*) - c*| after solving
    pub residual_tol: f64,
    /// allowed junction slope mismatch in extension graphs
    pub slope_tol: f64,
    pub tower_depth: usize,
    /// depth of assembled piecewise-affine maps (2 branches per level)
    pub fs_depth: usize,
    pub extension_depth: usize,
    pub shift_length: usize,
    pub shift_count: usize,
    pub grid_ratios: usize,
    pub grid_feasible: usize,
    /// sample points per piece for sup-distance and shape scans
    pub grid_shape: usize,
    pub eps_lo: f64,
    pub eps_hi: f64,
    /// half-width of the root bracket around the unperturbed fixed point
    pub bracket_radius: f64,
    pub seed: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            root_tol: 1e-12,
            residual_tol: 1e-10,
            slope_tol: 1e-8,
            tower_depth: 10,
            fs_depth: 8,
            extension_depth: 12,
            shift_length: 7,
            shift_count: 50,
            grid_ratios: 200,
            grid_feasible: 100_000,
            grid_shape: 1000,
            eps_lo: 0.98,
            eps_hi: 1.02,
            bracket_radius: 0.004,
            seed: 20260816,
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    /// Defaults, then the config file if one is named by flag or env var.
    /// The caller layers flag overrides on top and calls `validate`.
    pub fn load(config_flag: Option<&Path>) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let env_path = std::env::var_os("RENORMLAB_CONFIG").map(std::path::PathBuf::from);
        let path = config_flag.or(env_path.as_deref());
        if let Some(p) = path {
            let text = fs::read_to_string(p)
                .with_context(|| format!("reading config file {}", p.display()))?;
            cfg.apply_file(&text)
                .with_context(|| format!("parsing config file {}", p.display()))?;
        }
        Ok(cfg)
    }

    fn apply_file(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("line {}: expected key=value", lineno + 1))?;
            self.set(key.trim(), value.trim())
                .with_context(|| format!("line {}", lineno + 1))?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
        where
            T::Err: std::error::Error + Send + Sync + 'static,
        {
            value
                .parse()
                .with_context(|| format!("{key}: bad value {value:?}"))
        }
        match key {
            "root_tol" => self.root_tol = num(key, value)?,
            "residual_tol" => self.residual_tol = num(key, value)?,
            "slope_tol" => self.slope_tol = num(key, value)?,
            "tower_depth" => self.tower_depth = num(key, value)?,
            "fs_depth" => self.fs_depth = num(key, value)?,
            "extension_depth" => self.extension_depth = num(key, value)?,
            "shift_length" => self.shift_length = num(key, value)?,
            "shift_count" => self.shift_count = num(key, value)?,
            "grid_ratios" => self.grid_ratios = num(key, value)?,
            "grid_feasible" => self.grid_feasible = num(key, value)?,
            "grid_shape" => self.grid_shape = num(key, value)?,
            "eps_lo" => self.eps_lo = num(key, value)?,
            "eps_hi" => self.eps_hi = num(key, value)?,
            "bracket_radius" => self.bracket_radius = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "format" => self.format = value.parse()?,
            other => bail!("unknown config key {other:?}"),
        }
        Ok(())
    }

    pub fn eps_window(&self) -> (f64, f64) {
        (self.eps_lo, self.eps_hi)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("root_tol", self.root_tol),
            ("residual_tol", self.residual_tol),
            ("slope_tol", self.slope_tol),
            ("bracket_radius", self.bracket_radius),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                bail!("{name} must be positive and finite, got {v}");
            }
        }
        if self.bracket_radius > 0.05 {
            bail!(
                "bracket_radius {} leaves the admissible parameter interval",
                self.bracket_radius
            );
        }
        if !(self.eps_lo.is_finite() && self.eps_hi.is_finite() && self.eps_lo < self.eps_hi) {
            bail!(
                "epsilon window [{}, {}] is not an interval",
                self.eps_lo,
                self.eps_hi
            );
        }
        if self.eps_lo <= 0.0 {
            bail!("epsilon window must stay positive, got lo = {}", self.eps_lo);
        }
        for (name, v, lo, hi) in [
            ("tower_depth", self.tower_depth, 1, TOWER_DEPTH_BUDGET),
            ("fs_depth", self.fs_depth, 1, FS_DEPTH_BUDGET),
            (
                "extension_depth",
                self.extension_depth,
                1,
                EXTENSION_DEPTH_BUDGET,
            ),
            ("shift_length", self.shift_length, 2, SHIFT_LENGTH_BUDGET),
            ("shift_count", self.shift_count, 1, SHIFT_COUNT_BUDGET),
        ] {
            if v < lo || v > hi {
                bail!("{name} = {v} outside budget [{lo}, {hi}]");
            }
        }
        if self.grid_shape < 2 {
            bail!("grid_shape must be at least 2, got {}", self.grid_shape);
        }
        Ok(())
    }
}

/// Comma-separated epsilon list; every entry must sit in the window.
pub fn parse_eps_list(list: &str, window: (f64, f64)) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for tok in list.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let eps: f64 = tok
            .parse()
            .with_context(|| format!("bad epsilon {tok:?}"))?;
        if !(eps >= window.0 && eps <= window.1) {
            bail!(
                "epsilon {eps} outside configured window [{}, {}]",
                window.0,
                window.1
            );
        }
        out.push(eps);
    }
    if out.is_empty() {
        bail!("empty epsilon list");
    }
    Ok(out)
}

/// The canonical sweep: five factors from 0.98 to 1.02.
pub fn default_eps_list() -> Vec<f64> {
    vec![0.98, 0.99, 1.00, 1.01, 1.02]
}
