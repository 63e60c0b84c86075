use std::path::PathBuf;

use serde::Serialize;
use spectral_gamma::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Caps {
    pub ball: usize,
    pub support: usize,
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Radius { element: PathBuf, group: Option<String> },
    Norm { element: PathBuf, group: Option<String> },
    Sigma1 { element: PathBuf, group: Option<String> },
    Kesten { group: String, element: Option<PathBuf> },
    Calc { matrix: PathBuf, func: String, region: Option<String>, fixed: bool },
    Kcount { region: String, matrix: PathBuf, resolution: usize },
    Ranks { space: String, k: String },
    Weights { group: String, weight: String, element: Option<PathBuf>, control: usize },
    Report { files: Vec<PathBuf> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Radius { .. } => "radius",
            Command::Norm { .. } => "norm",
            Command::Sigma1 { .. } => "sigma1",
            Command::Kesten { .. } => "kesten",
            Command::Calc { .. } => "calc",
            Command::Kcount { .. } => "kcount",
            Command::Ranks { .. } => "ranks",
            Command::Weights { .. } => "weights",
            Command::Report { .. } => "report",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n_max: Option<u64>,
    pub tol: Option<f64>,
    pub nodes: Option<usize>,
    pub seed: u64,
    pub format: Format,
    pub strict: bool,
    pub caps: Caps,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.n_max {
            if n < 2 || !n.is_power_of_two() {
                return Err(Error::Domain(format!("--n-max must be a power of two >= 2, got {n}")));
            }
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Domain(format!("--tol must be positive, got {t}")));
            }
        }
        if let Some(n) = self.nodes {
            if n < 4 {
                return Err(Error::Domain(format!("--nodes must be at least 4, got {n}")));
            }
        }
        if self.caps.ball == 0 || self.caps.support == 0 || self.caps.nodes == 0 {
            return Err(Error::Domain("resource caps must be positive".into()));
        }
        let tabular = matches!(self.command, Command::Ranks { .. } | Command::Weights { .. });
        if self.format == Format::Csv && !tabular {
            return Err(Error::Domain(format!(
                "CSV output is only available for tables, not '{}'",
                self.command.name()
            )));
        }
        Ok(())
    }
}

/// `a..b` (inclusive), `a..=b`, or a single `k`.
pub fn parse_k_range(text: &str) -> Result<Vec<u32>> {
    let bad = || Error::Parse(format!("--k: expected 'k', 'a..b' or 'a..=b', got {text:?}"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    let t = text.trim();
    let (a, b) = match t.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let k = num(t)?;
            (k, k)
        }
    };
    if a > b {
        return Err(Error::Domain(format!("--k: empty range {t}")));
    }
    if b > 1024 {
        return Err(Error::Domain(format!("--k: upper end {b} is larger than 1024")));
    }
    Ok((a..=b).collect())
}
