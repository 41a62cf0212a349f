//! Arbitrary-precision dyadic floats with certified error bounds.
//!
//! A value is `m * 2^e` with `m` an arbitrary-precision integer kept to a
//! fixed number of significant bits, plus an upward-rounded `err` bound on
//! `|true - stored|`.  This is the numeric backend: the same pipelines that
//! run over exact truncated series run over these at a fixed rational `x0`,
//! and every result carries an interval certificate instead of a window.
//!
//! The error accounting is deliberately simple and conservative: bounds
//! combine sub-additively under addition and by the product rule under
//! multiplication, with a rounding ulp added after every operation.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use super::xlaurent::{pow_q, XLaurent, QQ};
use super::CoeffError;

/// Evaluation context for the numeric backend: the sample point and the
/// working precision in bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatCtx {
    pub x0: QQ,
    pub prec: u32,
}

impl FloatCtx {
    pub fn new(x0: QQ, prec: u32) -> Self {
        FloatCtx { x0, prec }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct XFloat {
    /// Mantissa; the stored value is `m * 2^e`.
    #[serde(with = "bigint_str")]
    m: BigInt,
    e: i64,
    prec: u32,
    /// Certified bound on the absolute difference from the true value.
    err: f64,
}

mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// 2^k as f64, saturating instead of overflowing.
fn pow2(k: i64) -> f64 {
    if k < -1070 {
        f64::MIN_POSITIVE
    } else if k > 1020 {
        f64::MAX
    } else {
        (2.0f64).powi(k as i32)
    }
}

/// Nudge an error bound upward so f64 rounding in the bookkeeping itself can
/// never understate it.
fn up(x: f64) -> f64 {
    x * (1.0 + 1e-9) + f64::MIN_POSITIVE
}

impl PartialEq for XFloat {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.e == other.e && self.err == other.err
    }
}

impl XFloat {
    pub fn zero(prec: u32) -> Self {
        XFloat { m: BigInt::zero(), e: 0, prec, err: 0.0 }
    }

    fn rounded(mut m: BigInt, mut e: i64, prec: u32, mut err: f64) -> Self {
        let bits = m.bits();
        if bits > prec as u64 {
            let drop = (bits - prec as u64) as i64;
            // Round to nearest by adding half the dropped ulp before shifting.
            let half = BigInt::from(1) << (drop - 1) as u64;
            if m.is_negative() {
                m -= half;
            } else {
                m += half;
            }
            m >>= drop as u64;
            e += drop;
            err = up(err + pow2(e));
        }
        if m.is_zero() {
            e = 0;
        }
        XFloat { m, e, prec, err }
    }

    pub fn from_rational(q: &QQ, prec: u32) -> Self {
        if q.is_zero() {
            return Self::zero(prec);
        }
        let num = q.numer();
        let den = q.denom();
        // Scale so the quotient carries prec+2 significant bits.
        let shift = (prec as i64 + 2) + den.bits() as i64 - num.bits() as i64 + 1;
        let shift = shift.max(0) as u64;
        let scaled = num << shift;
        let (quot, rem) = num_integer::Integer::div_rem(&scaled, den);
        let mut err = 0.0;
        if !rem.is_zero() {
            err = pow2(-(shift as i64) + 1);
        }
        Self::rounded(quot, -(shift as i64), prec, err)
    }

    /// The value `x0^e`, certified.
    pub fn x_pow(ctx: &FloatCtx, e: i64) -> Self {
        Self::from_rational(&pow_q(&ctx.x0, e), ctx.prec)
    }

    pub fn monomial(ctx: &FloatCtx, q: &QQ, e: i64) -> Self {
        Self::from_rational(&(q * pow_q(&ctx.x0, e)), ctx.prec)
    }

    /// Evaluate a windowed exact series at `x0`.  The stored part is summed
    /// exactly and rounded once; for a non-exact input the unknown tail above
    /// the window is bounded geometrically, assuming tail coefficients no
    /// larger than the largest stored one (adequate for the bounded-coefficient
    /// series this engine produces, and stated in the certificate).
    pub fn eval_series(ctx: &FloatCtx, a: &XLaurent) -> Self {
        let exact = a.eval_partial(&ctx.x0);
        let mut v = Self::from_rational(&exact, ctx.prec);
        if !a.is_exact() {
            let x0f = rat_f64(&ctx.x0);
            let m = a.max_abs_coeff_f64().max(1.0);
            let hi = a.window().hi;
            let tail = m * x0f.powi((hi + 1).clamp(-60000, 60000) as i32) / (1.0 - x0f);
            v.err = up(v.err + tail);
        }
        v
    }

    pub fn is_zero_value(&self) -> bool {
        self.m.is_zero() && self.err == 0.0
    }

    pub fn value_f64(&self) -> f64 {
        big_to_f64(&self.m) * pow2(self.e)
    }

    pub fn err_bound(&self) -> f64 {
        self.err
    }

    /// Upper bound on |true value|.
    pub fn abs_bound(&self) -> f64 {
        up(self.value_f64().abs() + self.err)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        let (a, b) = (self, rhs);
        let e = a.e.min(b.e);
        let ma = &a.m << (a.e - e) as u64;
        let mb = &b.m << (b.e - e) as u64;
        Self::rounded(ma + mb, e, prec, up(a.err + b.err))
    }

    pub fn neg(&self) -> Self {
        XFloat { m: -self.m.clone(), e: self.e, prec: self.prec, err: self.err }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        let err = up(self.abs_raw() * rhs.err + rhs.abs_raw() * self.err + self.err * rhs.err);
        Self::rounded(&self.m * &rhs.m, self.e + rhs.e, prec, err)
    }

    fn abs_raw(&self) -> f64 {
        self.value_f64().abs()
    }

    /// Reciprocal.  The window cap of the exact backend has no meaning here;
    /// the bound must merely certify the value away from zero.
    pub fn inv(&self) -> Result<Self, CoeffError> {
        let v = self.abs_raw();
        if self.m.is_zero() || v <= self.err {
            return Err(CoeffError::DegeneratePrecision {
                detail: format!("reciprocal of a value not certified nonzero (|v|={v:.3e}, err={:.3e})", self.err),
            });
        }
        let bits = self.m.bits() as i64;
        let shift = bits + self.prec as i64 + 2;
        let num = BigInt::from(1) << shift as u64;
        let (quot, _rem) = num_integer::Integer::div_rem(&num, &self.m);
        let e = -self.e - shift;
        let err_prop = self.err / (v * (v - self.err));
        let err = up(err_prop + pow2(e + quot.bits() as i64 - self.prec as i64));
        Ok(Self::rounded(quot, e, self.prec, err))
    }
}

fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(if v.is_negative() { f64::MIN } else { f64::MAX })
}

fn rat_f64(q: &QQ) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for XFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.*e} (±{:.2e})", 20, self.value_f64(), self.err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::XLaurent;

    fn ctx() -> FloatCtx {
        FloatCtx::new(XLaurent::q(1, 2), 128)
    }

    #[test]
    fn rational_roundtrip_is_tight() {
        let c = ctx();
        let v = XFloat::from_rational(&XLaurent::q(1, 3), c.prec);
        assert!((v.value_f64() - 1.0 / 3.0).abs() < 1e-15);
        assert!(v.err_bound() < 1e-37);
    }

    #[test]
    fn geometric_series_evaluates_to_two_within_bound() {
        let c = ctx();
        let g = XLaurent::one()
            .sub(&XLaurent::monomial_i(1, 1))
            .inv_to(40)
            .unwrap();
        let v = XFloat::eval_series(&c, &g);
        let diff = (v.value_f64() - 2.0).abs();
        assert!(diff <= v.err_bound(), "diff {diff:e} > bound {:e}", v.err_bound());
        assert!(v.err_bound() < 1e-10);
    }

    #[test]
    fn eval_matches_exact_partial_sum_within_bound() {
        let c = ctx();
        let s = XLaurent::series(
            -3,
            (0..12).map(|k| XLaurent::q(2 * k - 7, 3)).collect(),
            8,
        );
        let exact = s.eval_partial(&c.x0);
        let v = XFloat::eval_series(&c, &s);
        let diff = (v.value_f64() - exact.to_f64().unwrap()).abs();
        assert!(diff <= v.err_bound() + 1e-12 * exact.to_f64().unwrap().abs());
    }

    #[test]
    fn product_rule_brackets_truth() {
        let c = ctx();
        let a = XFloat::from_rational(&XLaurent::q(22, 7), c.prec);
        let b = XFloat::from_rational(&XLaurent::q(-355, 113), c.prec);
        let p = a.mul(&b);
        let truth = 22.0 / 7.0 * (-355.0 / 113.0);
        assert!((p.value_f64() - truth).abs() <= p.err_bound() + 1e-12);
    }

    #[test]
    fn reciprocal_certifies_against_zero() {
        let c = ctx();
        let tiny = XFloat::from_rational(&XLaurent::q(1, 1_000_000), c.prec);
        let inv = tiny.inv().unwrap();
        assert!((inv.value_f64() - 1e6).abs() < 1e-3);
        assert!(XFloat::zero(c.prec).inv().is_err());
    }
}
