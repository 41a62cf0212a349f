//! Shared run configuration: the knobs the command-line surface exposes,
//! their validation, and the echo every report embeds so a result can be
//! reproduced from its own header.

use clap::ValueEnum;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coeff::QQ;
use crate::fock::{Convention, Sector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorChoice {
    Ns,
    R,
    Both,
}

impl SectorChoice {
    pub fn sectors(self) -> Vec<Sector> {
        match self {
            SectorChoice::Ns => vec![Sector::NS],
            SectorChoice::R => vec![Sector::R],
            SectorChoice::Both => vec![Sector::NS, Sector::R],
        }
    }
}

/// Cross-family slot sign for the paired currents: `plus` tries only the
/// commuting convention, `minus` only the anticommuting one, `both` runs
/// the discrimination experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignChoice {
    Both,
    Plus,
    Minus,
}

impl SignChoice {
    pub fn conventions(self) -> Vec<Convention> {
        match self {
            SignChoice::Both => vec![Convention::Commuting, Convention::Anticommuting],
            SignChoice::Plus => vec![Convention::Commuting],
            SignChoice::Minus => vec![Convention::Anticommuting],
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("--{flag} is only meaningful with --backend float")]
    FloatOnly { flag: &'static str },
    #[error("--backend float requires --{flag}")]
    MissingFloat { flag: &'static str },
    #[error("invalid rational `{got}`: {detail}")]
    BadRational { got: String, detail: String },
    #[error("x0 must lie strictly between 0 and 1, got {got}")]
    BadX0 { got: String },
    #[error("window must satisfy lo < 0 < hi, got ({lo}, {hi})")]
    BadWindow { lo: i64, hi: i64 },
    #[error("{0}")]
    Invalid(String),
}

pub fn parse_rational(s: &str) -> Result<QQ, ConfigError> {
    crate::coeff::parse_rational(s)
        .map_err(|detail| ConfigError::BadRational { got: s.to_string(), detail })
}

/// `"LO,HI"` with a sign check: the window must straddle zero, since every
/// residual is measured on both sides of x⁰.
pub fn parse_window(s: &str) -> Result<(i64, i64), ConfigError> {
    let bad = || ConfigError::Invalid(format!("invalid window `{s}`: expected LO,HI"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo < 0 && 0 < hi) {
        return Err(ConfigError::BadWindow { lo, hi });
    }
    Ok((lo, hi))
}

/// Default residual window for a run touching modes up to `max_mode`:
/// contraction factors push exponents down to about −4·max_mode, with slack;
/// the positive side is a flat certification depth.
pub fn default_window(max_mode: i64) -> (i64, i64) {
    (-(4 * max_mode.max(1) + 8), 24)
}

/// Validated numeric-backend parameters.
#[derive(Clone, Debug)]
pub struct FloatParams {
    pub x0: QQ,
    pub prec: u32,
}

/// Enforces "float-only fields present iff the backend is float" and bounds
/// checks the evaluation point.
pub fn resolve_backend(
    backend: Backend,
    x0: Option<&str>,
    prec: Option<u32>,
) -> Result<Option<FloatParams>, ConfigError> {
    match backend {
        Backend::Exact => {
            if x0.is_some() {
                return Err(ConfigError::FloatOnly { flag: "x0" });
            }
            if prec.is_some() {
                return Err(ConfigError::FloatOnly { flag: "prec" });
            }
            Ok(None)
        }
        Backend::Float => {
            let raw = x0.ok_or(ConfigError::MissingFloat { flag: "x0" })?;
            let x0 = parse_rational(raw)?;
            if x0 <= QQ::zero() || x0 >= QQ::one() {
                return Err(ConfigError::BadX0 { got: raw.to_string() });
            }
            let prec = prec.unwrap_or(128);
            if prec < 16 {
                return Err(ConfigError::Invalid(format!(
                    "--prec {prec} is below the 16-bit minimum"
                )));
            }
            Ok(Some(FloatParams { x0, prec }))
        }
    }
}

/// The configuration echo carried by every report. Field values are kept in
/// their surface form (strings as typed) so the echo doubles as a replay
/// recipe.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
    pub backend: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prec: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmax: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector: Option<SectorChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<SignChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturb: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.to_string(),
            backend: Backend::Exact.to_string(),
            format: "text".to_string(),
            ..Default::default()
        }
    }
}
