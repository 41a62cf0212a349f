//! Truncated Laurent series in the deformation parameter `x`, with exact
//! rational coefficients and a tracked reliability window.
//!
//! Every value represents a (possibly infinite) formal Laurent series with
//! finitely many negative-exponent terms.  The representation stores a finite
//! slice of coefficients together with two bounds:
//!
//! * `lo` — a support bound: the true series has no terms below `x^lo`;
//! * `hi` — a knowledge bound: coefficients are exactly known for all
//!   exponents `<= hi` (terms above `hi` may exist but are not tracked).
//!
//! `hi == EXP_SENTINEL` marks a value that is known completely (an exact
//! Laurent polynomial).  Addition takes the minimum of both bounds;
//! multiplication shifts each factor's knowledge bound by the other's lowest
//! degree.  Both rules are exact, not heuristic: everything the window claims
//! is bit-for-bit a coefficient of the true series.
//!
//! # Examples
//!
//! ```
//! use dvac::coeff::XLaurent;
//! let a = XLaurent::monomial_i(1, 2);          // x^2, exact
//! let b = XLaurent::monomial_i(1, -2);         // x^-2, exact
//! assert_eq!(a.mul(&b), XLaurent::one());
//! let g = XLaurent::one().sub(&a).inv_to(10).unwrap(); // 1/(1-x^2) to x^10
//! assert!(g.coeff_at(8) == Some(XLaurent::q_one()));
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use super::CoeffError;

/// Exact rational scalar used throughout the exact backend.
pub type QQ = BigRational;

/// Saturation bound for window arithmetic; exponents this large mean
/// "unbounded" (exact knowledge, or empty support for the exact zero).
pub const EXP_SENTINEL: i64 = i64::MAX / 4;

/// Saturating exponent addition that clamps at the sentinel bounds.
#[inline]
pub(crate) fn wadd(a: i64, b: i64) -> i64 {
    a.saturating_add(b).clamp(-EXP_SENTINEL, EXP_SENTINEL)
}

/// A reliability window: exponents in `[lo, hi]` are exactly known, and the
/// true series is supported in `[lo, +inf)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn is_exact(&self) -> bool {
        self.hi >= EXP_SENTINEL
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XLaurent {
    /// Support bound: true coefficients vanish below this exponent.
    lo: i64,
    /// Knowledge bound: coefficients are exact through this exponent.
    hi: i64,
    /// Exponent of `coeffs[0]`; equals `lo` whenever `coeffs` is nonempty.
    min_exp: i64,
    /// Stored coefficients, trimmed so the first and last entries are nonzero.
    coeffs: Vec<QQ>,
}

impl XLaurent {
    pub fn q(n: i64, d: i64) -> QQ {
        QQ::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn q_int(n: i64) -> QQ {
        QQ::from(BigInt::from(n))
    }

    pub fn q_one() -> QQ {
        QQ::one()
    }

    /// The exact zero: empty support, complete knowledge.
    pub fn zero() -> Self {
        XLaurent { lo: EXP_SENTINEL, hi: EXP_SENTINEL, min_exp: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(QQ::one(), 0)
    }

    /// `c * x^e`, known exactly.
    pub fn monomial(c: QQ, e: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        XLaurent { lo: e, hi: EXP_SENTINEL, min_exp: e, coeffs: vec![c] }
    }

    pub fn monomial_i(c: i64, e: i64) -> Self {
        Self::monomial(Self::q_int(c), e)
    }

    /// Exact Laurent polynomial from consecutive coefficients starting at `x^lo`.
    pub fn poly(lo: i64, coeffs: Vec<QQ>) -> Self {
        let mut v = XLaurent { lo, hi: EXP_SENTINEL, min_exp: lo, coeffs };
        v.normalize();
        v
    }

    /// A value known only through `hi`: coefficients of `x^{lo+j}` given by
    /// `coeffs`, everything above `hi` unknown.
    pub fn series(lo: i64, coeffs: Vec<QQ>, hi: i64) -> Self {
        let mut v = XLaurent { lo, hi, min_exp: lo, coeffs };
        v.truncate_stored();
        v.normalize();
        v
    }

    fn truncate_stored(&mut self) {
        if self.hi < EXP_SENTINEL {
            let keep = wadd(self.hi, 1).saturating_sub(self.min_exp).max(0) as usize;
            self.coeffs.truncate(keep);
        }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i64;
        }
        if self.coeffs.is_empty() {
            // Everything known is zero; support starts above the knowledge bound.
            self.lo = wadd(self.hi, 1);
            self.min_exp = 0;
        } else {
            // Stored zeros below the first nonzero entry are known, so the
            // support bound may be tightened up to it.
            self.lo = self.min_exp;
            debug_assert!(self.min_exp + self.coeffs.len() as i64 - 1 <= self.hi);
        }
    }

    pub fn window(&self) -> Window {
        Window { lo: self.lo, hi: self.hi }
    }

    pub fn is_exact(&self) -> bool {
        self.hi >= EXP_SENTINEL
    }

    /// True when the value is structurally the exact zero series.
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.is_exact()
    }

    /// True when every known coefficient vanishes (the value is `O(x^{hi+1})`).
    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Zero through `h`: all coefficients with exponent `<= h` are known and zero.
    pub fn is_zero_through(&self, h: i64) -> bool {
        self.coeffs.is_empty() && self.hi >= h
    }

    /// Coefficient of `x^e`, or `None` if it lies beyond the knowledge bound.
    pub fn coeff_at(&self, e: i64) -> Option<QQ> {
        if e < self.lo {
            return Some(QQ::zero());
        }
        if e > self.hi {
            return None;
        }
        let idx = e - self.min_exp;
        if self.coeffs.is_empty() || idx < 0 || idx as usize >= self.coeffs.len() {
            Some(QQ::zero())
        } else {
            Some(self.coeffs[idx as usize].clone())
        }
    }

    /// Exact rational value at a rational point. Only an exact value (no
    /// `O(x^h)` tail) can be evaluated soundly; a truncated series returns
    /// `None`.
    pub fn eval_q(&self, x0: &QQ) -> Option<QQ> {
        if !self.is_exact() {
            return None;
        }
        let mut acc = QQ::zero();
        for (e, c) in self.terms() {
            acc += c * pow_q(x0, e);
        }
        Some(acc)
    }

    /// Iterator over stored nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &QQ)> {
        let base = self.min_exp;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(j, c)| (base + j as i64, c))
    }

    pub fn first_term(&self) -> Option<(i64, QQ)> {
        self.coeffs.first().map(|c| (self.min_exp, c.clone()))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_exact_zero() {
            return rhs.clone();
        }
        if rhs.is_exact_zero() {
            return self.clone();
        }
        let hi = self.hi.min(rhs.hi);
        let lo_store = self.min_exp.min(rhs.min_exp).min(wadd(hi, 1));
        let top = self
            .stored_top()
            .max(rhs.stored_top())
            .min(hi);
        let len = (top - lo_store + 1).max(0) as usize;
        let mut coeffs = vec![QQ::zero(); len];
        for (e, c) in self.terms().chain(rhs.terms()) {
            if e <= hi {
                coeffs[(e - lo_store) as usize] += c;
            }
        }
        let mut v = XLaurent { lo: self.lo.min(rhs.lo), hi, min_exp: lo_store, coeffs };
        v.normalize();
        v
    }

    fn stored_top(&self) -> i64 {
        if self.coeffs.is_empty() {
            -EXP_SENTINEL
        } else {
            self.min_exp + self.coeffs.len() as i64 - 1
        }
    }

    pub fn neg(&self) -> Self {
        let mut v = self.clone();
        for c in &mut v.coeffs {
            *c = -c.clone();
        }
        v
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return Self::zero();
        }
        let lo = wadd(self.lo, rhs.lo);
        let hi = if self.is_exact() && rhs.is_exact() {
            EXP_SENTINEL
        } else {
            wadd(self.hi, rhs.lo).min(wadd(rhs.hi, self.lo))
        };
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            let mut v = XLaurent { lo, hi, min_exp: 0, coeffs: Vec::new() };
            v.normalize();
            return v;
        }
        let base = self.min_exp + rhs.min_exp;
        let len_full = self.coeffs.len() + rhs.coeffs.len() - 1;
        let keep = if hi >= EXP_SENTINEL {
            len_full
        } else {
            ((hi - base + 1).max(0) as usize).min(len_full)
        };
        let mut coeffs = vec![QQ::zero(); keep];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= keep {
                continue;
            }
            let jmax = (keep - i).min(rhs.coeffs.len());
            for (j, b) in rhs.coeffs[..jmax].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        let mut v = XLaurent { lo, hi, min_exp: base, coeffs };
        v.normalize();
        v
    }

    pub fn mul_scalar(&self, q: &QQ) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let mut v = self.clone();
        for c in &mut v.coeffs {
            *c = &*c * q;
        }
        v
    }

    /// Multiply by `x^d`.
    pub fn shift(&self, d: i64) -> Self {
        let mut v = self.clone();
        v.lo = wadd(v.lo, d);
        v.hi = if v.is_exact() { EXP_SENTINEL } else { wadd(v.hi, d) };
        v.min_exp += d;
        v
    }

    /// Forget knowledge above `hi_new` (no-op if already narrower).
    pub fn truncate_to(&self, hi_new: i64) -> Self {
        if hi_new >= self.hi {
            return self.clone();
        }
        let mut v = self.clone();
        v.hi = hi_new;
        v.truncate_stored();
        v.normalize();
        v
    }

    /// Multiplicative inverse, computed through exponent `cap` when the input
    /// is exact (an inverse of a polynomial is an infinite series).  For a
    /// single monomial the result is again exact.
    pub fn inv_to(&self, cap: i64) -> Result<Self, CoeffError> {
        let (d, lead) = match self.first_term() {
            Some(t) => t,
            None => {
                return Err(if self.is_exact() {
                    CoeffError::NotInvertible
                } else {
                    CoeffError::DegeneratePrecision {
                        detail: format!(
                            "cannot invert a value known only to be O(x^{})",
                            wadd(self.hi, 1)
                        ),
                    }
                })
            }
        };
        let lead_inv = lead.recip();
        if self.coeffs.len() == 1 {
            return Ok(Self::monomial(lead_inv, -d));
        }
        // Work with the unit-leading-term series u = self / (lead * x^d).
        let hi_r = wadd(self.hi, -2 * d).min(cap);
        let n_terms = (hi_r - (-d) + 1).max(0) as usize;
        if n_terms == 0 {
            return Err(CoeffError::DegeneratePrecision {
                detail: "inverse has an empty window".into(),
            });
        }
        let mut out = vec![QQ::zero(); n_terms];
        out[0] = QQ::one();
        for n in 1..n_terms {
            let mut acc = QQ::zero();
            for k in 1..=n.min(self.coeffs.len() - 1) {
                if !self.coeffs[k].is_zero() && !out[n - k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k] * &lead_inv;
                }
            }
            out[n] = -acc;
        }
        for c in &mut out {
            *c = &*c * &lead_inv;
        }
        Ok(Self::series(-d, out, hi_r))
    }

    /// Exact polynomial division; `None` if the divisor does not divide exactly.
    /// Both operands must be exact.
    pub fn div_exact(&self, den: &Self) -> Option<Self> {
        if !self.is_exact() || !den.is_exact() {
            return None;
        }
        if self.is_exact_zero() {
            return Some(Self::zero());
        }
        let (d, lead) = den.first_term()?;
        let lead_inv = lead.recip();
        let mut rem = self.coeffs.clone();
        let rem_base = self.min_exp;
        let qlen = rem.len().checked_sub(den.coeffs.len() - 1)?;
        let mut quot = vec![QQ::zero(); qlen];
        for i in 0..qlen {
            if rem[i].is_zero() {
                continue;
            }
            let qc = &rem[i] * &lead_inv;
            for (j, b) in den.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    rem[i + j] -= &qc * b;
                }
            }
            quot[i] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::poly(rem_base - d, quot))
    }

    /// Exact value of the stored truncation at a rational point (partial sum
    /// over the known coefficients; no tail estimate).
    pub fn eval_partial(&self, x0: &QQ) -> QQ {
        let mut acc = QQ::zero();
        // Horner over the stored slice, then scale by x0^min_exp.
        for c in self.coeffs.iter().rev() {
            acc = acc * x0 + c;
        }
        acc * pow_q(x0, self.min_exp)
    }

    /// Largest absolute value among stored coefficients, as f64 (for reports).
    pub fn max_abs_coeff_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| rat_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    /// Equal through exponent `h` (both must know through `h`).
    pub fn eq_through(&self, rhs: &Self, h: i64) -> bool {
        self.hi >= h && rhs.hi >= h && self.sub(rhs).is_zero_through(h)
    }

    pub(crate) fn from_raw_parts(lo: i64, hi: i64, min_exp: i64, coeffs: Vec<QQ>) -> Self {
        let mut v = XLaurent { lo, hi, min_exp, coeffs };
        v.truncate_stored();
        v.normalize();
        v
    }
}

pub(crate) fn pow_q(x: &QQ, e: i64) -> QQ {
    if e == 0 {
        return QQ::one();
    }
    let p = {
        let mut acc = QQ::one();
        let mut base = x.clone();
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc *= &base;
            }
            let b2 = &base * &base;
            base = b2;
            n >>= 1;
        }
        acc
    };
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

pub(crate) fn rat_to_f64(q: &QQ) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::INFINITY)
}

fn fmt_coeff(c: &QQ) -> (bool, String) {
    let neg = c.is_negative();
    let a = c.abs();
    let s = if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("({})", a)
    };
    (neg, s)
}

impl fmt::Display for XLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            if self.is_exact() {
                return write!(f, "0");
            }
            return write!(f, "O(x^{})", wadd(self.hi, 1));
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let (neg, mag) = fmt_coeff(c);
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{}", mag)?,
                1 if mag == "1" => write!(f, "x")?,
                1 => write!(f, "{}*x", mag)?,
                _ if mag == "1" => write!(f, "x^{}", e)?,
                _ => write!(f, "{}*x^{}", mag, e)?,
            }
        }
        if !self.is_exact() {
            write!(f, " + O(x^{})", wadd(self.hi, 1))?;
        }
        Ok(())
    }
}

// Serialized form keeps rationals as strings to stay exact and readable.
#[derive(Serialize, Deserialize)]
struct XLaurentSer {
    lo: i64,
    hi: Option<i64>,
    min_exp: i64,
    coeffs: Vec<String>,
}

impl Serialize for XLaurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        XLaurentSer {
            lo: self.lo,
            hi: if self.is_exact() { None } else { Some(self.hi) },
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for XLaurent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = XLaurentSer::deserialize(d)?;
        let mut coeffs = Vec::with_capacity(raw.coeffs.len());
        for s in &raw.coeffs {
            coeffs.push(parse_rational(s).map_err(D::Error::custom)?);
        }
        Ok(XLaurent::from_raw_parts(
            raw.lo,
            raw.hi.unwrap_or(EXP_SENTINEL),
            raw.min_exp,
            coeffs,
        ))
    }
}

/// Parse `"p"`, `"p/q"`, or a plain decimal like `"0.7"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<QQ, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|e| format!("bad numerator {n:?}: {e}"))?;
        let den: BigInt = d.trim().parse().map_err(|e| format!("bad denominator {d:?}: {e}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(QQ::new(num, den));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let sign = if ip.trim_start().starts_with('-') { -1 } else { 1 };
        let ipart: BigInt = if ip.is_empty() || ip == "-" {
            BigInt::zero()
        } else {
            ip.parse().map_err(|e| format!("bad number {s:?}: {e}"))?
        };
        let fdigits: BigInt = if fp.is_empty() {
            BigInt::zero()
        } else {
            fp.parse().map_err(|e| format!("bad number {s:?}: {e}"))?
        };
        let den = BigInt::from(10u32).pow(fp.len() as u32);
        let num = ipart.abs() * &den + fdigits;
        return Ok(QQ::new(num * BigInt::from(sign), den));
    }
    let n: BigInt = s.parse().map_err(|e| format!("bad number {s:?}: {e}"))?;
    Ok(QQ::from(n))
}
