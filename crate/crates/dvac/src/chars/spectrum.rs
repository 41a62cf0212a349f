//! The spectrum of T₀ on one level block at a numeric point.
//!
//! The zero mode is special: its wedge sum pairs every mode with its own
//! negative, and each such pair removes and restores the *same* mode, so the
//! wedge part of T₀ is diagonal in the occupation basis. Eigenvalues at a
//! rational x₀ are therefore exact rationals,
//!
//! ```text
//! eig(T₀) = κ(x₀) · (w_S(x₀) + s(x₀)),
//! ```
//!
//! with w_S the diagonal wedge entry of the basis state S, s the anomaly
//! (a geometric sum with rational closed form), and κ = (1−x⁶)/(x²(1+x²)).
//! No iterative eigensolver is needed; the requested precision only selects
//! how many decimal digits of the exact values are printed. The code still
//! verifies the diagonality instead of assuming it.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::coeff::{rat_to_f64, QQ};
use crate::coeff::xlaurent::pow_q;
use crate::dva::{t0_scalar, CurrentBank};
use crate::fock::{FockSpace, HalfInt, Sector};

use super::CharsError;

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumLine {
    /// Decimal rendering of the exact eigenvalue, to the digit budget the
    /// requested precision buys.
    pub value: String,
    /// The same value as a double, for quick reading; the exact string is
    /// authoritative.
    pub approx: f64,
    /// Absolute error of `value` as printed (decimal rounding only — the
    /// eigenvalue itself is exact).
    pub err: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceCheck {
    pub exact: String,
    pub eig_sum: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub sector: Sector,
    pub level: String,
    pub level2: i64,
    pub lambda: i64,
    pub x0: String,
    pub prec: u32,
    pub dim: usize,
    pub lines: Vec<SpectrumLine>,
    pub trace: TraceCheck,
}

/// κ at a rational point, from its closed form (1 − x⁶)/(x²(1 + x²)).
pub fn kappa_at(x0: &QQ) -> QQ {
    let one = QQ::from(BigInt::from(1));
    (one.clone() - pow_q(x0, 6)) / (pow_q(x0, 2) * (one + pow_q(x0, 2)))
}

pub fn t0_block_spectrum(
    sector: Sector,
    lambda: i64,
    level: HalfInt,
    x0: &QQ,
    prec: u32,
) -> Result<SpectrumReport, CharsError> {
    if x0 <= &QQ::zero() || x0 >= &QQ::from(BigInt::from(1)) {
        return Err(CharsError::BadPoint { x0: x0.to_string() });
    }
    if level.doubled() < 0 || level.doubled() > 2 * lambda {
        return Err(CharsError::LevelOutOfRange { level: level.to_string(), lambda });
    }
    let space = Arc::new(FockSpace::enumerate(sector, lambda));
    let bank = CurrentBank::<crate::coeff::XLaurent>::new((), space.clone(), 8);
    let wedge = bank.wedge(0);
    let block: Vec<usize> = (0..space.dim())
        .filter(|&j| space.state(j).level() == level)
        .collect();
    let kappa = kappa_at(x0);
    let anomaly = t0_scalar(sector).eval(x0);

    let mut eigs: BTreeMap<QQ, usize> = BTreeMap::new();
    let mut trace = QQ::zero();
    for &j in &block {
        let mut diag = QQ::zero();
        for (i, c) in wedge.column(j) {
            assert_eq!(*i, j, "the zero-mode wedge must be diagonal");
            diag += c.eval_q(x0).expect("wedge entries are exact polynomials");
        }
        let v = &kappa * (diag + &anomaly);
        trace += &v;
        *eigs.entry(v).or_insert(0) += 1;
    }

    let digits = decimal_digits(prec);
    let lines: Vec<SpectrumLine> = eigs
        .iter()
        .map(|(v, &mult)| SpectrumLine {
            value: decimal_string(v, digits),
            approx: rat_to_f64(v),
            err: 10f64.powi(-(digits as i32)),
            multiplicity: mult,
        })
        .collect();
    let eig_sum: QQ = eigs
        .iter()
        .map(|(v, &mult)| v * QQ::from(BigInt::from(mult as i64)))
        .sum();
    let pass = eig_sum == trace;
    Ok(SpectrumReport {
        sector,
        level: level.to_string(),
        level2: level.doubled(),
        lambda,
        x0: x0.to_string(),
        prec,
        dim: block.len(),
        lines,
        trace: TraceCheck {
            exact: decimal_string(&trace, digits),
            eig_sum: decimal_string(&eig_sum, digits),
            pass,
        },
    })
}

fn decimal_digits(prec: u32) -> usize {
    // prec bits of binary precision buy about prec·log10(2) decimal digits
    ((prec as f64 * 0.30103) as usize).max(17) + 2
}

/// Round-half-up decimal rendering of an exact rational.
pub(crate) fn decimal_string(q: &QQ, digits: usize) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let scale = BigInt::from(10).pow(digits as u32);
    let num = a.numer() * &scale;
    let (fl, rem) = num.div_rem(a.denom());
    let scaled = if &(rem * BigInt::from(2)) >= a.denom() {
        fl + BigInt::from(1)
    } else {
        fl
    };
    let s = scaled.to_string();
    let (int_part, frac_part) = if s.len() > digits {
        let (i, f) = s.split_at(s.len() - digits);
        (i.to_string(), f.to_string())
    } else {
        ("0".to_string(), format!("{:0>width$}", s, width = digits))
    };
    let frac_trimmed = frac_part.trim_end_matches('0');
    let sign = if neg && (int_part != "0" || !frac_trimmed.is_empty()) {
        "-"
    } else {
        ""
    };
    if frac_trimmed.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_trimmed}")
    }
}
