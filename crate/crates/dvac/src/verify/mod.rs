//! Coefficient-level verification of the current's commutation relations.
//!
//! Everything here reduces an operator identity to a finite, certified
//! check: build both sides as sparse graded matrices over a coefficient
//! ring, subtract, restrict to the columns where the truncated space is
//! provably faithful, and demand that every remaining entry is zero on the
//! configured x-window (exact backend) or below tolerance (numeric
//! backend). Negative controls run the same pipeline with a single
//! deliberately corrupted coefficient and must come out nonzero.

pub mod fermion;
pub mod relation;

use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::coeff::{Coeff, CoeffError, ZeroCheck, EXP_SENTINEL};
use crate::fock::{Convention, GradedOperator, HalfInt, Sector};

pub use fermion::{anticommutator_suite, FermionReport};
pub use relation::{
    dva_residual, elliptic_residual, elliptic_suite, f_coeffs, kappa_delta, trig_suite,
    EllipticGrid, EllipticOutcome, FCoeffs, TrigGrid, KAPPA_DELTA_NOTE,
};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RelationKind {
    Trig,
    Elliptic,
}

/// Single-coefficient fault injection for the negative controls.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Perturb {
    #[default]
    None,
    /// Add a monomial to the structure coefficient f_l.
    F(usize),
    /// Add a monomial to the overall normalization (κ, or the elliptic
    /// prefactor).
    Kappa,
    /// Add a monomial to the contraction factor of one mode pair.
    Contraction(HalfInt),
}

impl FromStr for Perturb {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "none" {
            return Ok(Perturb::None);
        }
        if s == "kappa" {
            return Ok(Perturb::Kappa);
        }
        if let Some(l) = s.strip_prefix("f:") {
            return l
                .parse::<usize>()
                .map(Perturb::F)
                .map_err(|_| format!("bad f index in perturbation `{s}`"));
        }
        if let Some(p) = s.strip_prefix("contraction:") {
            return HalfInt::parse(p)
                .map(Perturb::Contraction)
                .map_err(|e| format!("bad mode in perturbation `{s}`: {e}"));
        }
        Err(format!("unknown perturbation `{s}` (want none, f:<l>, kappa, contraction:<mode>)"))
    }
}

impl fmt::Display for Perturb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Perturb::None => write!(f, "none"),
            Perturb::F(l) => write!(f, "f:{l}"),
            Perturb::Kappa => write!(f, "kappa"),
            Perturb::Contraction(p) => write!(f, "contraction:{p}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ResidualSummary {
    /// Exact backend: all entries empty on their windows, certified through
    /// the stated power.
    Exact {
        zero: bool,
        certified_through: i64,
        offenders: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        worst: Option<String>,
    },
    /// Numeric backend: largest entry magnitude relative to the operator
    /// scale, against the tolerance.
    Float { norm: f64, tol: f64 },
}

/// One mode pair's verdict. `m2`/`n2` are the doubled mode indices (the
/// sort keys); `m`/`n` carry the human-readable values.
#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub kind: RelationKind,
    pub backend: String,
    pub r: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector: Option<Sector>,
    pub m: String,
    pub n: String,
    pub m2: i64,
    pub n2: i64,
    pub lambda: i64,
    pub window: (i64, i64),
    pub l_used: i64,
    pub reliable_dim: usize,
    pub residual: ResidualSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_coeff: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<Convention>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub pass: bool,
}

/// Canonical report order: kind, convention, sector, then the mode pair.
pub fn sort_reports(reports: &mut [RelationReport]) {
    reports.sort_by_key(|r| {
        (
            r.kind,
            match r.convention {
                None => 0u8,
                Some(Convention::Commuting) => 1,
                Some(Convention::Anticommuting) => 2,
            },
            match r.sector {
                None => 0u8,
                Some(Sector::NS) => 1,
                Some(Sector::R) => 2,
            },
            r.m2,
            r.n2,
        )
    });
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("reliable subspace is empty for modes ({m}, {n}) at cutoff {lambda}")]
    EmptyReliable { m: String, n: String, lambda: i64 },
    #[error("window exhausted: entries certified only through x^{certified}, need x^{needed}")]
    WindowExhausted { certified: i64, needed: i64 },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Mode(#[from] crate::dva::DvaError),
    #[error(transparent)]
    Cache(#[from] crate::cache::CacheError),
}

/// Scan of an operator restricted to a set of columns: exact-zero
/// bookkeeping and float magnitudes in one pass.
#[derive(Clone, Debug)]
pub(crate) struct Measured {
    pub entries: usize,
    pub all_zero: bool,
    pub certified_hi: i64,
    pub offenders: usize,
    pub worst: Option<String>,
    pub max_abs: f64,
    pub float_seen: bool,
}

pub(crate) fn measure_columns<C: Coeff>(
    op: &GradedOperator<C>,
    cols: impl Iterator<Item = usize>,
) -> Measured {
    let mut m = Measured {
        entries: 0,
        all_zero: true,
        certified_hi: EXP_SENTINEL,
        offenders: 0,
        worst: None,
        max_abs: 0.0,
        float_seen: false,
    };
    for j in cols {
        for (_i, c) in op.column(j) {
            m.entries += 1;
            match c.check_zero() {
                ZeroCheck::Exact { zero_on_window, lo: _, known_hi } => {
                    m.certified_hi = m.certified_hi.min(known_hi);
                    if !zero_on_window {
                        m.all_zero = false;
                        m.offenders += 1;
                        if m.worst.is_none() {
                            m.worst = Some(c.to_string());
                        }
                    }
                }
                ZeroCheck::Approx { abs_bound } => {
                    m.float_seen = true;
                    if abs_bound > m.max_abs {
                        m.max_abs = abs_bound;
                        m.worst = Some(c.to_string());
                    }
                }
            }
        }
    }
    m
}

/// Turn a residual scan into a summary and verdict. `scale` is the
/// magnitude of the operators being compared (numeric backend only); `whi`
/// the window power a pass must be certified through; `cap` the expansion
/// bound of the run, which bounds the certification claim for entries that
/// vanish structurally (true through every power we can see).
pub(crate) fn summarize(
    res: &Measured,
    scale: f64,
    whi: i64,
    tol: f64,
    cap: i64,
) -> Result<(ResidualSummary, bool), VerifyError> {
    if res.float_seen {
        let norm = res.max_abs / scale.max(1.0);
        return Ok((ResidualSummary::Float { norm, tol }, norm <= tol));
    }
    if res.all_zero && res.certified_hi < whi {
        return Err(VerifyError::WindowExhausted { certified: res.certified_hi, needed: whi });
    }
    let summary = ResidualSummary::Exact {
        zero: res.all_zero,
        certified_through: res.certified_hi.min(cap),
        offenders: res.offenders,
        worst: res.worst.clone(),
    };
    Ok((summary, res.all_zero))
}
