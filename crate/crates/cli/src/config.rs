//! Command-line flags, the optional JSON config file, and their merge into a
//! validated [`RunConfig`]. Flags override the file, which overrides defaults.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use sphmult_core::groups::GroupFamily;

use crate::Failure;

#[derive(Debug, Parser)]
#[command(name = "sphmult", version, about = "Spherical functions and their multiplier norms on rank-one groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Tabulate the multiplier norm of φ_s over a grid of s (SO0 only).
    NormTable,
    /// Evaluate φ_s(a_r) by every available method.
    Eval,
    /// Run the identity verification suite and emit a JSON report.
    Verify,
    /// Sphere sizes, radial convolution and pair-count constancy on a free-product tree.
    Tree,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Self::NormTable => "norm-table",
            Self::Eval => "eval",
            Self::Verify => "verify",
            Self::Tree => "tree",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.start + (self.end - self.start) * i as f64 / last)
            .collect()
    }

    fn validate(&self, name: &str) -> Result<(), Failure> {
        if self.steps < 1 {
            return Err(Failure::config(format!("{name}: step count must be at least 1")));
        }
        if !(self.start.is_finite() && self.end.is_finite()) {
            return Err(Failure::config(format!("{name}: range must be finite")));
        }
        Ok(())
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected start:end:steps, got '{s}'"));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}"));
        Ok(Self {
            start: num(a)?,
            end: num(b)?,
            steps: n.trim().parse().map_err(|e| format!("'{n}': {e}"))?,
        })
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.steps)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON file with any of the settings below.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Group family: so0, su, sp or f4.
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Rank parameter n of the group.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Grid of Re s as start:end:steps.
    #[arg(long, global = true)]
    pub sigma_range: Option<Range>,
    /// Grid of Im s as start:end:steps.
    #[arg(long, global = true)]
    pub t_range: Option<Range>,
    /// Comma-separated radii.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub r: Option<Vec<f64>>,
    /// Spectral parameter for eval, e.g. 0.5+1i.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s: Option<Complex64>,
    /// Quadrature tolerance (eval) or a tolerance override for every check (verify).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Comma-separated check ids for verify.
    #[arg(long, global = true, value_delimiter = ',', num_args = 0..)]
    pub checks: Option<Vec<String>>,
    /// Number of Z/2Z factors for tree.
    #[arg(long, global = true)]
    pub involutions: Option<u16>,
    /// Number of Z factors for tree.
    #[arg(long, global = true)]
    pub free: Option<u16>,
    /// Ball radius for tree.
    #[arg(long, global = true)]
    pub radius: Option<u32>,
    /// Multiplies the Gamma function seen by verify by 1 + eps.
    #[arg(long, global = true, hide = true, allow_hyphen_values = true)]
    pub perturb_gamma: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: Option<Command>,
    family: Option<String>,
    n: Option<u32>,
    sigma_range: Option<Range>,
    t_range: Option<Range>,
    r: Option<Vec<f64>>,
    s: Option<[f64; 2]>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    checks: Option<Vec<String>>,
    involutions: Option<u16>,
    free: Option<u16>,
    radius: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub family: GroupFamily,
    pub n: u32,
    pub sigma: Range,
    pub t: Range,
    pub r: Vec<f64>,
    pub s: Complex64,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub checks: Option<Vec<String>>,
    pub involutions: u16,
    pub free: u16,
    pub radius: u32,
    pub perturb_gamma: f64,
}

impl RunConfig {
    pub fn resolve(command: Command, flags: Flags) -> Result<Self, Failure> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
                serde_json::from_str::<FileConfig>(&text)
                    .map_err(|e| Failure::config(format!("{}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        if let Some(c) = file.command {
            if c != command {
                return Err(Failure::config(format!(
                    "config file is for '{}', not '{}'",
                    c.name(),
                    command.name()
                )));
            }
        }
        let family: GroupFamily = flags
            .family
            .or(file.family)
            .unwrap_or_else(|| "so0".into())
            .parse()
            .map_err(|e| Failure::config(format!("{e}")))?;
        let cfg = Self {
            command,
            family,
            n: flags.n.or(file.n).unwrap_or(2),
            sigma: flags.sigma_range.or(file.sigma_range).unwrap_or(Range {
                start: 0.0,
                end: 0.5,
                steps: 6,
            }),
            t: flags.t_range.or(file.t_range).unwrap_or(Range {
                start: 0.0,
                end: 2.0,
                steps: 5,
            }),
            r: flags.r.or(file.r).unwrap_or_else(|| vec![0.5, 1.0, 2.0]),
            s: flags
                .s
                .or(file.s.map(|[re, im]| Complex64::new(re, im)))
                .unwrap_or(Complex64::new(0.25, 1.0)),
            tol: flags.tol.or(file.tol),
            out: flags.out.or(file.out),
            format: flags.format.or(file.format).unwrap_or(Format::Csv),
            checks: flags.checks.or(file.checks),
            involutions: flags.involutions.or(file.involutions).unwrap_or(3),
            free: flags.free.or(file.free).unwrap_or(0),
            radius: flags.radius.or(file.radius).unwrap_or(4),
            perturb_gamma: flags.perturb_gamma.unwrap_or(0.0),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Failure> {
        self.sigma.validate("--sigma-range")?;
        self.t.validate("--t-range")?;
        if self.r.is_empty() || self.r.iter().any(|r| !r.is_finite()) {
            return Err(Failure::config("--r needs at least one finite radius"));
        }
        if !(self.s.re.is_finite() && self.s.im.is_finite()) {
            return Err(Failure::config("--s must be finite"));
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Failure::config("--tol must be positive"));
            }
        }
        if !self.perturb_gamma.is_finite() {
            return Err(Failure::config("--perturb-gamma must be finite"));
        }
        Ok(())
    }
}
