//! q-series kernel: truncated Pochhammer products, the structure function
//! f(z), the η/ρ family, theta values, conformal weights, and the central
//! constant.

pub mod pochhammer;
pub mod structure;
pub mod zseries;

pub use pochhammer::{poch_x, qpoch, theta, Mono};
pub use structure::{
    central_const, conformal_weight, eta_family, eta_quotient_route, f_series, identity_213,
    identity_213_with_f, identity_eta_product, identity_eta_product_with_eta, rho_parts,
    rho_series, EtaFamily, RhoParts,
};
pub use zseries::ZSeries;

/// Test support: dense bivariate polynomials in (z, x) over the rationals,
/// written as naively as possible. Everything here recomputes from first
/// principles what the production types track incrementally, so the two
/// implementations can only agree by being right.
#[cfg(test)]
pub(crate) mod brute {
    use crate::coeff::{XLaurent, QQ};
    use crate::qseries::ZSeries;
    use num_traits::Zero;
    use std::collections::BTreeMap;

    /// (z-exponent, x-exponent) -> coefficient.
    pub type Poly2 = BTreeMap<(i64, i64), QQ>;

    pub fn bump(p: &mut Poly2, ze: i64, xe: i64, q: i64) {
        bump_q(p, ze, xe, QQ::from_integer(q.into()));
    }

    pub fn bump_q(p: &mut Poly2, ze: i64, xe: i64, q: QQ) {
        let e = p.entry((ze, xe)).or_insert_with(QQ::zero);
        *e += q;
        if e.is_zero() {
            p.remove(&(ze, xe));
        }
    }

    pub fn one() -> Poly2 {
        let mut p = Poly2::new();
        bump(&mut p, 0, 0, 1);
        p
    }

    pub fn mul(a: &Poly2, b: &Poly2) -> Poly2 {
        let mut out = Poly2::new();
        for ((za, xa), qa) in a {
            for ((zb, xb), qb) in b {
                bump_q(&mut out, za + zb, xa + xb, qa * qb);
            }
        }
        out
    }

    /// Product dropping all z-exponents above `z_cap` (exact polynomial
    /// truncation, no window subtleties).
    pub fn mul_trunc(a: &Poly2, b: &Poly2, z_cap: i64) -> Poly2 {
        let mut out = mul(a, b);
        out.retain(|(z, _), _| *z <= z_cap);
        out
    }

    /// Π over the listed monomials m of (1 − m·z), z-truncated.
    pub fn product_of_binomials(monos: &[(QQ, i64)], z_cap: i64) -> Poly2 {
        let mut acc = one();
        for (q, d) in monos {
            let mut f = one();
            bump_q(&mut f, 1, *d, -q.clone());
            acc = mul_trunc(&acc, &f, z_cap);
        }
        acc
    }

    /// All factor monomials c·x^{c_deg}·Π base_i^{n_i} of a one- or two-base
    /// Pochhammer symbol, expanded by plain nested loops up to `n_per_dim`
    /// factors along each base.
    pub fn poch_factors(
        c: &QQ,
        c_deg: i64,
        base_degs: &[i64],
        n_per_dim: usize,
    ) -> Vec<(QQ, i64)> {
        let mut out = Vec::new();
        match base_degs {
            [d1] => {
                for i in 0..n_per_dim {
                    out.push((c.clone(), c_deg + d1 * i as i64));
                }
            }
            [d1, d2] => {
                for i in 0..n_per_dim {
                    for j in 0..n_per_dim {
                        out.push((c.clone(), c_deg + d1 * i as i64 + d2 * j as i64));
                    }
                }
            }
            _ => panic!("oracle handles one or two bases"),
        }
        out
    }

    pub fn coeff(p: &Poly2, ze: i64, xe: i64) -> QQ {
        p.get(&(ze, xe)).cloned().unwrap_or_else(QQ::zero)
    }

    /// Compare a dense polynomial with a ZSeries everywhere the latter makes
    /// a claim: every stored coefficient, over its own x-window.
    pub fn agrees(p: &Poly2, s: &ZSeries) -> bool {
        agrees_detail(p, s).is_none()
    }

    pub fn agrees_detail(p: &Poly2, s: &ZSeries) -> Option<String> {
        // every claim the series makes must hold in the polynomial
        for (n, c) in s.terms() {
            let w = c.window();
            for xe in w.lo..=w.hi.min(w.lo + 4000) {
                let claimed = c.coeff_at(xe).expect("inside window");
                if claimed != coeff(p, n, xe) {
                    return Some(format!(
                        "z^{n} x^{xe}: series has {claimed}, oracle has {}",
                        coeff(p, n, xe)
                    ));
                }
            }
            // below the support bound the polynomial must vanish too
            if let Some(((_, first_xe), _)) = p.iter().find(|((z, _), _)| *z == n) {
                if *first_xe < w.lo {
                    return Some(format!("z^{n}: oracle has support at x^{first_xe} below lo={}", w.lo));
                }
            }
        }
        None
    }

    /// Evaluate an XLaurent claim against a univariate slice of the oracle.
    pub fn x_agrees(p: &Poly2, ze: i64, c: &XLaurent) -> bool {
        let w = c.window();
        (w.lo..=w.hi.min(w.lo + 4000))
            .all(|xe| c.coeff_at(xe).expect("inside window") == coeff(p, ze, xe))
    }
}
