//! Truncated series in a formal variable `z` with [`XLaurent`] coefficients.
//!
//! A [`ZSeries`] stores coefficients for consecutive powers of `z` starting at
//! `z_lo` (which may be negative for bilateral objects). Two kinds of
//! truncation are tracked independently:
//!
//! * **In `z`**: `z_hi = None` marks a genuine polynomial — every coefficient
//!   above the stored range is exactly zero. `z_hi = Some(h)` means the
//!   coefficients are known only through `z^h`; nothing is claimed beyond.
//! * **In `x`**: each coefficient carries its own reliability window (see
//!   [`XLaurent`]); window arithmetic happens inside the coefficient ops.
//!
//! A symbolic prefactor `z^frac_exp` with rational exponent is carried along
//! unexpanded; it only participates by adding under multiplication and by
//! being required equal under addition.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::coeff::{pow_q, CoeffError, Window, XLaurent, EXP_SENTINEL, QQ};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZSeries {
    /// Exponent α of the symbolic prefactor z^α (0 for ordinary series).
    pub frac_exp: QQ,
    z_lo: i64,
    coeffs: Vec<XLaurent>,
    /// `None`: polynomial in z. `Some(h)`: known through z^h only.
    z_hi: Option<i64>,
}

impl ZSeries {
    pub fn zero() -> Self {
        ZSeries { frac_exp: QQ::zero(), z_lo: 0, coeffs: Vec::new(), z_hi: None }
    }

    pub fn one() -> Self {
        ZSeries::poly(0, vec![XLaurent::one()])
    }

    /// Exact polynomial: coefficients of z^{z_lo}, z^{z_lo+1}, …; everything
    /// above is exactly zero.
    pub fn poly(z_lo: i64, coeffs: Vec<XLaurent>) -> Self {
        let mut s = ZSeries { frac_exp: QQ::zero(), z_lo, coeffs, z_hi: None };
        s.normalize();
        s
    }

    /// Truncated series: coefficients known through z^{z_hi} only.
    pub fn truncated(z_lo: i64, coeffs: Vec<XLaurent>, z_hi: i64) -> Self {
        assert!(z_lo + coeffs.len() as i64 - 1 <= z_hi, "stored terms exceed the stated bound");
        let mut s = ZSeries { frac_exp: QQ::zero(), z_lo, coeffs, z_hi: Some(z_hi) };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        while let Some(c) = self.coeffs.first() {
            if c.is_exact_zero() {
                self.coeffs.remove(0);
                self.z_lo += 1;
            } else {
                break;
            }
        }
        while matches!(self.coeffs.last(), Some(c) if c.is_exact_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.z_lo = 0;
        }
    }

    pub fn z_lo(&self) -> i64 {
        self.z_lo
    }

    /// Highest z-power with a known coefficient; `None` means all of them
    /// (polynomial).
    pub fn known_z_hi(&self) -> Option<i64> {
        self.z_hi
    }

    pub fn is_poly(&self) -> bool {
        self.z_hi.is_none()
    }

    /// Largest stored z-exponent (ignores trailing known zeros).
    pub fn z_top(&self) -> i64 {
        self.z_lo + self.coeffs.len() as i64 - 1
    }

    /// Coefficient of z^n. `Some(0)` below the support or in a trimmed known
    /// region, `None` beyond the knowledge bound.
    pub fn coeff(&self, n: i64) -> Option<XLaurent> {
        if let Some(h) = self.z_hi {
            if n > h {
                return None;
            }
        }
        if n < self.z_lo || n > self.z_top() {
            return Some(XLaurent::zero());
        }
        Some(self.coeffs[(n - self.z_lo) as usize].clone())
    }

    /// Iterate stored (exponent, coefficient) pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &XLaurent)> {
        let lo = self.z_lo;
        self.coeffs.iter().enumerate().map(move |(i, c)| (lo + i as i64, c))
    }

    fn knowledge(&self) -> i64 {
        self.z_hi.unwrap_or(EXP_SENTINEL)
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in &mut s.coeffs {
            *c = c.neg();
        }
        s
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.frac_exp, rhs.frac_exp, "prefactor exponents must agree under addition");
        let know = self.knowledge().min(rhs.knowledge());
        let lo = self.z_lo.min(rhs.z_lo);
        let top = self.z_top().max(rhs.z_top()).min(know);
        let mut coeffs = Vec::new();
        for n in lo..=top {
            let a = self.coeff(n).unwrap_or_else(XLaurent::zero);
            let b = rhs.coeff(n).unwrap_or_else(XLaurent::zero);
            coeffs.push(a.add(&b));
        }
        let mut s = ZSeries {
            frac_exp: self.frac_exp.clone(),
            z_lo: lo,
            coeffs,
            z_hi: if know >= EXP_SENTINEL { None } else { Some(know) },
        };
        s.normalize();
        s
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Product truncated at z^{z_cap}. The knowledge bound of the result is
    /// the tight one for truncated operands: a coefficient of z^n is fully
    /// known only when every split n = i + j draws on known coefficients.
    pub fn mul(&self, rhs: &Self, z_cap: i64) -> Self {
        let frac = &self.frac_exp + &rhs.frac_exp;
        let exact_zero = |s: &Self| s.coeffs.is_empty() && s.z_hi.is_none();
        if exact_zero(self) || exact_zero(rhs) {
            return ZSeries { frac_exp: frac, ..ZSeries::zero() };
        }
        let lo = self.z_lo + rhs.z_lo;
        let know_pairs = [
            self.knowledge().saturating_add(rhs.z_lo),
            rhs.knowledge().saturating_add(self.z_lo),
        ];
        let know = know_pairs.iter().copied().min().unwrap().min(EXP_SENTINEL);
        let natural_top = self.z_top() + rhs.z_top();
        let top = natural_top.min(know).min(z_cap);
        let mut coeffs = vec![XLaurent::zero(); (top - lo + 1).max(0) as usize];
        for (i, a) in self.terms() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in rhs.terms() {
                let n = i + j;
                if n > top {
                    break;
                }
                let slot = &mut coeffs[(n - lo) as usize];
                *slot = slot.add(&a.mul(b));
            }
        }
        let z_hi = if know >= EXP_SENTINEL && natural_top <= z_cap { None } else { Some(top.max(z_cap.min(know))) };
        let mut s = ZSeries { frac_exp: frac, z_lo: lo, coeffs, z_hi };
        s.normalize();
        s
    }

    /// Scale every coefficient by a fixed x-series.
    pub fn mul_coeff(&self, k: &XLaurent) -> Self {
        let mut s = self.clone();
        for c in &mut s.coeffs {
            *c = c.mul(k);
        }
        s.normalize();
        s
    }

    /// Substitute z → q·x^d·z: the coefficient of z^n picks up q^n·x^{dn}.
    pub fn substitute(&self, q: &QQ, d: i64) -> Self {
        assert!(!q.is_zero(), "substitution scale must be a unit");
        let mut s = self.clone();
        for (idx, c) in s.coeffs.iter_mut().enumerate() {
            let n = self.z_lo + idx as i64;
            *c = c.mul_scalar(&pow_q(q, n)).shift(d * n);
        }
        s
    }

    /// Multiplicative inverse through z^{z_cap}. Requires the series to start
    /// at z^0 with constant coefficient equal to 1 on its window (the only
    /// case the callers need; it keeps the recursion free of x-side
    /// inversions). When the constant coefficient is merely 1-on-window
    /// rather than exactly 1, its unknown tail ε = O(x^{h+1}) perturbs the
    /// true inverse coefficient β_n by ε·β_n = O(x^{h+1+val(β_n)}), so each
    /// result coefficient's knowledge bound is capped at its own support
    /// bound plus h.
    pub fn invert(&self, z_cap: i64) -> Result<Self, CoeffError> {
        if self.z_lo != 0 || self.coeffs.is_empty() {
            return Err(CoeffError::NotInvertible);
        }
        let c0 = &self.coeffs[0];
        if !c0.sub(&XLaurent::one()).is_zero_on_window() {
            return Err(CoeffError::DegeneratePrecision {
                detail: "inversion requires a constant coefficient equal to 1 on its window".into(),
            });
        }
        let a0_hi = c0.window().hi;
        let cap = |b: XLaurent| -> XLaurent {
            if a0_hi >= EXP_SENTINEL || b.is_zero_on_window() {
                return b;
            }
            let lo = b.window().lo;
            b.truncate_to(lo.saturating_add(a0_hi))
        };
        let know = self.knowledge().min(z_cap);
        let mut inv: Vec<XLaurent> = vec![cap(XLaurent::one())];
        for n in 1..=know {
            let mut acc = XLaurent::zero();
            for k in 1..=n {
                let a = self.coeff(k).expect("within knowledge bound");
                if a.is_exact_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&inv[(n - k) as usize]));
            }
            inv.push(cap(acc.neg()));
        }
        let z_hi = if self.is_poly() && self.coeffs.len() == 1 { None } else { Some(know) };
        let mut s = ZSeries { frac_exp: -self.frac_exp.clone(), z_lo: 0, coeffs: inv, z_hi };
        s.normalize();
        Ok(s)
    }

    /// Multiply by the geometric series 1/(1−z) = 1 + z + z² + …, i.e. take
    /// running prefix sums of the coefficients, through z^{z_cap}.
    pub fn divide_one_minus_z(&self, z_cap: i64) -> Self {
        if self.coeffs.is_empty() && self.z_hi.is_none() {
            return ZSeries { frac_exp: self.frac_exp.clone(), ..ZSeries::zero() };
        }
        let know = self.knowledge().min(z_cap);
        let lo = self.z_lo.min(know);
        let mut coeffs = Vec::new();
        let mut run = XLaurent::zero();
        for n in lo..=know {
            let c = self.coeff(n).unwrap_or_else(XLaurent::zero);
            run = run.add(&c);
            coeffs.push(run.clone());
        }
        let mut s = ZSeries { frac_exp: self.frac_exp.clone(), z_lo: lo, coeffs, z_hi: Some(know) };
        s.normalize();
        s
    }

    /// Add `delta` to the coefficient of z^n — the hook for injecting a
    /// controlled fault into an otherwise correct series. `n` must lie
    /// inside the knowledge bound.
    pub fn bump_coeff(&self, n: i64, delta: &XLaurent) -> Self {
        assert!(n <= self.knowledge(), "cannot perturb an unknown coefficient");
        let mut s = self.clone();
        if s.coeffs.is_empty() {
            s.z_lo = n;
            s.coeffs.push(XLaurent::zero());
        }
        while n < s.z_lo {
            s.coeffs.insert(0, XLaurent::zero());
            s.z_lo -= 1;
        }
        while n > s.z_top() {
            s.coeffs.push(XLaurent::zero());
        }
        let idx = (n - s.z_lo) as usize;
        s.coeffs[idx] = s.coeffs[idx].add(delta);
        s.normalize();
        s
    }

    /// Forget z-coefficients above `cap` (marks the series as truncated).
    pub fn truncate_z(&self, cap: i64) -> Self {
        let mut s = self.clone();
        let keep = ((cap - s.z_lo + 1).max(0) as usize).min(s.coeffs.len());
        s.coeffs.truncate(keep);
        s.z_hi = Some(match s.z_hi {
            Some(h) => h.min(cap),
            None => cap,
        });
        s.normalize();
        s
    }

    /// Clamp every coefficient's knowledge bound in x to `x_hi`.
    pub fn clamp_x(&self, x_hi: i64) -> Self {
        let mut s = self.clone();
        for c in &mut s.coeffs {
            *c = c.truncate_to(x_hi);
        }
        s.normalize();
        s
    }

    /// The window shared by every stored coefficient: the smallest support
    /// bound and the smallest knowledge bound.
    pub fn common_window(&self) -> Window {
        let mut lo = EXP_SENTINEL;
        let mut hi = EXP_SENTINEL;
        for c in &self.coeffs {
            let w = c.window();
            lo = lo.min(w.lo);
            hi = hi.min(w.hi);
        }
        Window { lo: lo.min(hi), hi }
    }

    /// True when every stored coefficient vanishes on its own window.
    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_on_window())
    }

    /// True when every coefficient is known through x^{x_hi} and vanishes
    /// there — a zero claim with certified coverage.
    pub fn is_zero_through(&self, x_hi: i64) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_through(x_hi))
    }

    /// Fails with a descriptive error unless every coefficient of z^0..z^{z_need}
    /// is known through x^{x_hi}.
    pub fn require_coverage(&self, z_need: i64, x_hi: i64) -> Result<(), CoeffError> {
        for n in self.z_lo.min(0)..=z_need {
            let c = self.coeff(n).ok_or_else(|| CoeffError::DegeneratePrecision {
                detail: format!("coefficient of z^{n} is beyond the computed order"),
            })?;
            if c.window().hi < x_hi {
                return Err(CoeffError::DegeneratePrecision {
                    detail: format!(
                        "coefficient of z^{n} is known only through x^{}, need x^{x_hi}",
                        c.window().hi
                    ),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for ZSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.frac_exp.is_zero() {
            write!(f, "z^({}) * [", self.frac_exp)?;
        }
        let mut first = true;
        for (n, c) in self.terms() {
            if c.is_exact_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*z^{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(h) = self.z_hi {
            write!(f, " + O(z^{})", h + 1)?;
        }
        if !self.frac_exp.is_zero() {
            write!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::brute;

    fn xm(q: i64, e: i64) -> XLaurent {
        XLaurent::monomial_i(q, e)
    }

    #[test]
    fn product_matches_naive_convolution() {
        // (1 + x²z + 3z²)(2 - z) against the dense oracle.
        let a = ZSeries::poly(0, vec![XLaurent::one(), xm(1, 2), xm(3, 0)]);
        let b = ZSeries::poly(0, vec![xm(2, 0), xm(-1, 0)]);
        let p = a.mul(&b, 10);
        let mut oa = brute::Poly2::new();
        brute::bump(&mut oa, 0, 0, 1);
        brute::bump(&mut oa, 1, 2, 1);
        brute::bump(&mut oa, 2, 0, 3);
        let mut ob = brute::Poly2::new();
        brute::bump(&mut ob, 0, 0, 2);
        brute::bump(&mut ob, 1, 0, -1);
        let op = brute::mul(&oa, &ob);
        assert!(brute::agrees(&op, &p));
        assert!(p.is_poly());
    }

    #[test]
    fn truncated_product_tracks_knowledge() {
        // ends at the right bound: (known to z^2) * (z-shifted poly)
        let a = ZSeries::truncated(0, vec![XLaurent::one(), xm(1, 0), xm(1, 0)], 2);
        let b = ZSeries::poly(1, vec![XLaurent::one()]);
        let p = a.mul(&b, 10);
        assert_eq!(p.known_z_hi(), Some(3));
        assert_eq!(p.coeff(3), Some(xm(1, 0)));
        assert_eq!(p.coeff(4), None);
    }

    #[test]
    fn substitution_scales_and_shifts() {
        // z -> (1/2) x^3 z applied to 1 + z + z^2
        let s = ZSeries::poly(0, vec![XLaurent::one(), XLaurent::one(), XLaurent::one()]);
        let t = s.substitute(&XLaurent::q(1, 2), 3);
        assert_eq!(t.coeff(1), Some(XLaurent::monomial(XLaurent::q(1, 2), 3)));
        assert_eq!(t.coeff(2), Some(XLaurent::monomial(XLaurent::q(1, 4), 6)));
    }

    #[test]
    fn inverse_multiplies_back_to_one() {
        let s = ZSeries::poly(0, vec![XLaurent::one(), xm(-1, 2), xm(2, -1)]);
        let inv = s.invert(8).unwrap();
        let p = s.mul(&inv, 8);
        assert_eq!(p.coeff(0), Some(XLaurent::one()));
        for n in 1..=8 {
            assert!(p.coeff(n).unwrap().is_exact_zero(), "z^{n} fails to cancel");
        }
    }

    #[test]
    fn inversion_requires_unit_constant_term() {
        let s = ZSeries::poly(1, vec![XLaurent::one()]);
        assert!(s.invert(4).is_err());
        let s2 = ZSeries::poly(0, vec![xm(2, 0)]);
        assert!(s2.invert(4).is_err());
    }

    #[test]
    fn geometric_division_is_prefix_summation() {
        // (1 - z) * 1/(1-z) = 1
        let s = ZSeries::poly(0, vec![XLaurent::one(), xm(-1, 0)]);
        let g = s.divide_one_minus_z(6);
        assert_eq!(g.coeff(0), Some(XLaurent::one()));
        for n in 1..=6 {
            assert!(g.coeff(n).unwrap().is_exact_zero());
        }
        // and on a generic input it agrees with multiplying by sum(z^k)
        let t = ZSeries::poly(0, vec![xm(1, -1), xm(3, 0), xm(1, 2)]);
        let geom = ZSeries::truncated(0, vec![XLaurent::one(); 7], 6);
        assert_eq!(t.divide_one_minus_z(6), t.mul(&geom, 6));
    }

    #[test]
    fn bilateral_storage_round_trips() {
        let s = ZSeries::poly(-2, vec![xm(1, 0), XLaurent::zero(), xm(5, 1)]);
        assert_eq!(s.z_lo(), -2);
        assert_eq!(s.coeff(-2), Some(xm(1, 0)));
        assert_eq!(s.coeff(-1), Some(XLaurent::zero()));
        assert_eq!(s.coeff(0), Some(xm(5, 1)));
        assert_eq!(s.coeff(5), Some(XLaurent::zero()));
    }

    #[test]
    fn addition_respects_weakest_knowledge() {
        let a = ZSeries::truncated(0, vec![XLaurent::one()], 3);
        let b = ZSeries::poly(0, vec![XLaurent::one(), xm(1, 0), xm(1, 0), xm(1, 0), xm(1, 0)]);
        let s = a.add(&b);
        assert_eq!(s.known_z_hi(), Some(3));
        assert_eq!(s.coeff(0), Some(xm(2, 0)));
        assert_eq!(s.coeff(4), None);
    }
}
