//! The structure function f(z), the η/ρ series family built from multi-base
//! Pochhammer symbols, the central constant, conformal weights, and the two
//! product identities that tie them together.
//!
//! Everything is computed on certified x-windows. Functions that chain
//! several products and inversions work internally on an inflated window (the
//! chaining erodes knowledge bounds when negative x-powers are present) and
//! then check that the advertised window survived, so a too-small margin
//! fails loudly instead of silently narrowing the result.

use num_traits::One;

use crate::coeff::{CoeffError, XLaurent, QQ};
use crate::qseries::pochhammer::{qpoch, Mono};
use crate::qseries::zseries::ZSeries;

/// The exact Laurent polynomial (x^{r−1} − x^{−r+1})(x^r − x^{−r})/(x − x^{−1});
/// the division is exact.
pub fn central_const(r: i64) -> XLaurent {
    assert!(r >= 2, "the family is defined for r >= 2");
    let a = XLaurent::monomial_i(1, r - 1).sub(&XLaurent::monomial_i(1, -(r - 1)));
    let b = XLaurent::monomial_i(1, r).sub(&XLaurent::monomial_i(1, -r));
    let den = XLaurent::monomial_i(1, 1).sub(&XLaurent::monomial_i(1, -1));
    a.mul(&b)
        .div_exact(&den)
        .expect("x - x^{-1} divides x^r - x^{-r} exactly")
}

/// Δ_l = (l² − 1)/(4(k+2)) for the label l at level k.
pub fn conformal_weight(l: i64, k: i64) -> QQ {
    assert!(k >= -1, "level must be at least -1");
    assert!((1..=k + 2).contains(&l), "label l = {l} out of range at level {k}");
    XLaurent::q(l * l - 1, 4 * (k + 2))
}

fn check_room(x_hi: i64, infl: i64) -> Result<i64, CoeffError> {
    let xh = x_hi
        .checked_add(infl)
        .ok_or_else(|| CoeffError::DegeneratePrecision { detail: "window overflow".into() })?;
    Ok(xh)
}

/// The structure function
///
/// ```text
/// f(z) = 1/(1−z) · (x^{2r}z; x⁴)_∞ (x^{2−2r}z; x⁴)_∞
///                / ((x^{2r+2}z; x⁴)_∞ (x^{4−2r}z; x⁴)_∞)
/// ```
///
/// expanded through z^{z_cap} with every coefficient certified on
/// (…, x_hi]. The constant coefficient is exactly 1.
pub fn f_series(r: i64, z_cap: i64, x_hi: i64) -> Result<ZSeries, CoeffError> {
    assert!(r >= 2, "the family is defined for r >= 2");
    // chaining margin: each of the two negative-shift factors can pull a
    // z^m coefficient down by about (2r−2)m, and the inversion mixes them
    let xh = check_room(x_hi, 4 * r * z_cap + 32)?;
    let x4 = [Mono::x(4)];
    let n1 = qpoch(&Mono::x(2 * r), &x4, z_cap, xh)?;
    let n2 = qpoch(&Mono::x(2 - 2 * r), &x4, z_cap, xh)?;
    let d1 = qpoch(&Mono::x(2 * r + 2), &x4, z_cap, xh)?;
    let d2 = qpoch(&Mono::x(4 - 2 * r), &x4, z_cap, xh)?;
    let den_inv = d1.mul(&d2, z_cap).invert(z_cap)?;
    let f = n1
        .mul(&n2, z_cap)
        .mul(&den_inv, z_cap)
        .divide_one_minus_z(z_cap);
    f.require_coverage(z_cap, x_hi)?;
    let f = f.clamp_x(x_hi);
    debug_assert!(f.coeff(0).unwrap().sub(&XLaurent::one()).is_zero_on_window());
    Ok(f)
}

/// {c·x^deg z} = (c·x^deg z; x⁴, x^{2(r−1)})_∞.
fn brace(c: Mono, r: i64, z_cap: i64, x_hi: i64) -> Result<ZSeries, CoeffError> {
    qpoch(&c, &[Mono::x(4), Mono::x(2 * (r - 1))], z_cap, x_hi)
}

/// η(z) through the product form {x²z}{p*x²z}/({z}{p*x⁴z}), p* = x^{2(r−1)}.
/// All four brace arguments have nonnegative degree, so the window passes
/// through the quotient undamaged.
pub fn eta_series(r: i64, z_cap: i64, x_hi: i64) -> Result<ZSeries, CoeffError> {
    assert!(r >= 2, "the family is defined for r >= 2");
    let xh = check_room(x_hi, 8)?;
    let num = brace(Mono::x(2), r, z_cap, xh)?.mul(&brace(Mono::x(2 * r), r, z_cap, xh)?, z_cap);
    let den = brace(Mono::x(0), r, z_cap, xh)?.mul(&brace(Mono::x(2 * r + 2), r, z_cap, xh)?, z_cap);
    let eta = num.mul(&den.invert(z_cap)?, z_cap);
    eta.require_coverage(z_cap, x_hi)?;
    Ok(eta.clamp_x(x_hi))
}

/// η as η_I·η_II, the factored route.
pub fn eta_quotient_route(r: i64, z_cap: i64, x_hi: i64) -> Result<ZSeries, CoeffError> {
    let fam = eta_pieces(r, z_cap, x_hi)?;
    Ok(fam.eta_i.mul(&fam.eta_ii, z_cap).clamp_x(x_hi))
}

pub struct EtaFamily {
    /// η_I = {p*x²z}²/({p*x⁴z}{p*z})
    pub eta_i: ZSeries,
    /// η_II = (x²z; x⁴)_∞/(z; x⁴)_∞
    pub eta_ii: ZSeries,
    /// η = η_I·η_II, cross-checked against the closed quotient form
    pub eta: ZSeries,
}

fn eta_pieces(r: i64, z_cap: i64, x_hi: i64) -> Result<EtaFamily, CoeffError> {
    assert!(r >= 2, "the family is defined for r >= 2");
    let xh = check_room(x_hi, 8)?;
    let ps = 2 * (r - 1);
    let i_num = brace(Mono::x(ps + 2), r, z_cap, xh)?;
    let i_num = i_num.mul(&i_num, z_cap);
    let i_den = brace(Mono::x(ps + 4), r, z_cap, xh)?.mul(&brace(Mono::x(ps), r, z_cap, xh)?, z_cap);
    let eta_i = i_num.mul(&i_den.invert(z_cap)?, z_cap).clamp_x(x_hi);
    let x4 = [Mono::x(4)];
    let ii_num = qpoch(&Mono::x(2), &x4, z_cap, xh)?;
    let ii_den = qpoch(&Mono::x(0), &x4, z_cap, xh)?;
    let eta_ii = ii_num.mul(&ii_den.invert(z_cap)?, z_cap).clamp_x(x_hi);
    let eta = eta_i.mul(&eta_ii, z_cap).clamp_x(x_hi);
    Ok(EtaFamily { eta_i, eta_ii, eta })
}

/// The η triple (η_I, η_II, η), with η computed both as η_I·η_II and through
/// the closed quotient form; disagreement is reported as an error rather
/// than silently picking one.
pub fn eta_family(r: i64, z_cap: i64, x_hi: i64) -> Result<EtaFamily, CoeffError> {
    let fam = eta_pieces(r, z_cap, x_hi)?;
    let quotient = eta_series(r, z_cap, x_hi)?;
    if fam.eta != quotient {
        return Err(CoeffError::DegeneratePrecision {
            detail: "the two computations of η disagree on the shared window".into(),
        });
    }
    Ok(fam)
}

/// The factored content of ρ(z) = z^{r/(2r−2)}·η(z)/η(z^{−1}): the series
/// part of the numerator in z and the inverted denominator in w = z^{−1}.
/// The fractional prefactor stays symbolic.
pub struct RhoParts {
    pub frac_exp: QQ,
    /// η(z), a series in z.
    pub fwd: ZSeries,
    /// 1/η(w) with w = z^{−1}; same coefficient data as 1/η(z) read in the
    /// mirrored variable.
    pub rev_inv: ZSeries,
}

pub fn rho_parts(r: i64, z_cap: i64, x_hi: i64) -> Result<RhoParts, CoeffError> {
    let eta = eta_series(r, z_cap, x_hi)?;
    let rev_inv = eta.invert(z_cap)?;
    Ok(RhoParts {
        frac_exp: XLaurent::q(r, 2 * r - 2),
        fwd: eta,
        rev_inv,
    })
}

/// Bilateral truncated view of ρ: coefficient of z^k (−l_neg ≤ k ≤ l_pos) is
/// the finite double sum Σ a_m·b_n over m − n = k with m, n ≤ l_pos + l_neg,
/// where a comes from η(z) and b from 1/η(z^{−1}). The true bilateral object
/// is analytic rather than formal — each coefficient is an infinite sum that
/// converges only for |x| < 1 — so this view is tied to the stated inner
/// truncation order and is meant for display and plumbing checks; identity
/// statements go through the factored form in [`RhoParts`].
pub fn rho_series(r: i64, l_pos: i64, l_neg: i64, x_hi: i64) -> Result<ZSeries, CoeffError> {
    assert!(l_pos >= 0 && l_neg >= 0);
    let inner = l_pos + l_neg;
    let parts = rho_parts(r, inner, x_hi)?;
    let mut coeffs = Vec::new();
    for k in -l_neg..=l_pos {
        let mut acc = XLaurent::zero();
        for m in 0..=inner {
            let n = m - k;
            if !(0..=inner).contains(&n) {
                continue;
            }
            let a = parts.fwd.coeff(m).expect("within truncation order");
            let b = parts.rev_inv.coeff(n).expect("within truncation order");
            acc = acc.add(&a.mul(&b));
        }
        coeffs.push(acc);
    }
    let mut s = ZSeries::truncated(-l_neg, coeffs, l_pos);
    s.frac_exp = parts.frac_exp;
    Ok(s.clamp_x(x_hi))
}

/// Residual of the quotient identity relating shifted η products to f:
///
/// ```text
/// η(p*x^{−2}z)·η(p*^{−1}x²z)     (1 − x^{−2}z)(1 − x²z)
/// ───────────────────────────  −  ──────────────────────── · f(z)
///    η(x^{−2}z)·η(x²z)           (1 − p*^{−1}z)(1 − p*z)
/// ```
///
/// with p* = x^{2(r−1)}; identically zero on the window for every r ≥ 2.
pub fn identity_213(r: i64, z_cap: i64, x_hi: i64) -> Result<ZSeries, CoeffError> {
    let xh = check_room(x_hi, (4 * r + 4) * z_cap + 48)?;
    let f = f_series(r, z_cap, xh)?;
    identity_213_with_f(r, z_cap, x_hi, &f)
}

/// Same residual with the caller supplying f — the hook used by the
/// perturbation (negative-control) checks.
pub fn identity_213_with_f(
    r: i64,
    z_cap: i64,
    x_hi: i64,
    f: &ZSeries,
) -> Result<ZSeries, CoeffError> {
    assert!(r >= 2, "the family is defined for r >= 2");
    let xh = check_room(x_hi, (4 * r + 4) * z_cap + 48)?;
    let eta = eta_series(r, z_cap, xh)?;
    let one = QQ::one();
    let ps = 2 * (r - 1);
    let a = eta.substitute(&one, ps - 2);
    let b = eta.substitute(&one, 2 - ps);
    let c = eta.substitute(&one, -2);
    let d = eta.substitute(&one, 2);
    let lhs = a
        .mul(&b, z_cap)
        .mul(&c.mul(&d, z_cap).invert(z_cap)?, z_cap);
    let lin = |deg: i64| ZSeries::poly(0, vec![XLaurent::one(), XLaurent::monomial_i(-1, deg)]);
    let rhs_num = lin(-2).mul(&lin(2), z_cap);
    let rhs_den = lin(-ps).mul(&lin(ps), z_cap);
    let rhs = rhs_num
        .mul(&rhs_den.invert(z_cap)?, z_cap)
        .mul(f, z_cap);
    let resid = lhs.sub(&rhs);
    resid.require_coverage(z_cap, x_hi)?;
    Ok(resid.clamp_x(x_hi))
}

/// Residual of the product identity η(z)·η(x²z) = (p*x²z; p*)_∞/(z; p*)_∞;
/// identically zero on the window for every r ≥ 2.
pub fn identity_eta_product(r: i64, z_cap: i64, x_hi: i64) -> Result<ZSeries, CoeffError> {
    let xh = check_room(x_hi, 2 * z_cap + 16)?;
    let eta = eta_series(r, z_cap, xh)?;
    identity_eta_product_with_eta(r, z_cap, x_hi, &eta)
}

/// Same residual with the caller supplying η (perturbation hook).
pub fn identity_eta_product_with_eta(
    r: i64,
    z_cap: i64,
    x_hi: i64,
    eta: &ZSeries,
) -> Result<ZSeries, CoeffError> {
    assert!(r >= 2, "the family is defined for r >= 2");
    let xh = check_room(x_hi, 2 * z_cap + 16)?;
    let ps = 2 * (r - 1);
    let lhs = eta.mul(&eta.substitute(&QQ::one(), 2), z_cap);
    let base = [Mono::x(ps)];
    let rhs_num = qpoch(&Mono::x(ps + 2), &base, z_cap, xh)?;
    let rhs_den = qpoch(&Mono::x(0), &base, z_cap, xh)?;
    let rhs = rhs_num.mul(&rhs_den.invert(z_cap)?, z_cap);
    let resid = lhs.sub(&rhs);
    resid.require_coverage(z_cap, x_hi)?;
    Ok(resid.clamp_x(x_hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat_to_f64;
    use crate::qseries::brute;
    use num_traits::Zero;

    #[test]
    fn central_const_small_cases() {
        // r=2 collapses to x² − x^{−2}
        let c2 = central_const(2);
        let expect = XLaurent::monomial_i(1, 2).sub(&XLaurent::monomial_i(1, -2));
        assert_eq!(c2, expect);
        // r=4: multiply back and compare against the undivided product
        let c4 = central_const(4);
        let den = XLaurent::monomial_i(1, 1).sub(&XLaurent::monomial_i(1, -1));
        let num = XLaurent::monomial_i(1, 3)
            .sub(&XLaurent::monomial_i(1, -3))
            .mul(&XLaurent::monomial_i(1, 4).sub(&XLaurent::monomial_i(1, -4)));
        assert_eq!(c4.mul(&den), num);
    }

    #[test]
    fn central_const_vanishes_toward_x_equals_one() {
        let c = central_const(4);
        let at = |n: i64, d: i64| rat_to_f64(&c.eval_partial(&XLaurent::q(n, d))).abs();
        let v1 = at(9, 10);
        let v2 = at(99, 100);
        let v3 = at(999, 1000);
        // the zero at x = 1 is simple, so the decay is linear in 1 − x
        assert!(v1 > v2 && v2 > v3);
        assert!(v3 < 0.05);
        assert!(v1 / v3 > 50.0);
    }

    #[test]
    fn conformal_weight_closed_forms() {
        assert_eq!(conformal_weight(1, 5), QQ::zero());
        assert_eq!(conformal_weight(2, 1), XLaurent::q(1, 4));
        assert_eq!(conformal_weight(2, 2), XLaurent::q(3, 16));
    }

    #[test]
    fn f_has_unit_constant_term_for_every_r() {
        for r in 2..=6 {
            let f = f_series(r, 3, 12).unwrap();
            let c0 = f.coeff(0).unwrap();
            assert!(c0.sub(&XLaurent::one()).is_zero_on_window(), "r={r}");
            assert_eq!(c0.first_term(), Some((0, XLaurent::q_one())), "r={r}");
        }
    }

    /// Independent check of f: expand the four Pochhammer factors with plain
    /// dense polynomials, invert the denominator by the naive recursion, and
    /// compare every claimed coefficient.
    fn f_oracle(r: i64, z_cap: i64, n_factors: usize) -> brute::Poly2 {
        let one = XLaurent::q_int(1);
        let num = [2 * r, 2 - 2 * r]
            .iter()
            .flat_map(|&d| brute::poch_factors(&one, d, &[4], n_factors))
            .collect::<Vec<_>>();
        let den = [2 * r + 2, 4 - 2 * r]
            .iter()
            .flat_map(|&d| brute::poch_factors(&one, d, &[4], n_factors))
            .collect::<Vec<_>>();
        let num = brute::product_of_binomials(&num, z_cap);
        let den = brute::product_of_binomials(&den, z_cap);
        // invert den as a power series in z: b_0 = 1, b_n = −Σ a_k b_{n−k}
        let mut inv_slices: Vec<brute::Poly2> = vec![brute::one()];
        for n in 1..=z_cap {
            let mut acc = brute::Poly2::new();
            for k in 1..=n {
                let a_k: brute::Poly2 = den
                    .iter()
                    .filter(|((z, _), _)| *z == k)
                    .map(|((_, x), q)| ((0, *x), q.clone()))
                    .collect();
                for (key, q) in brute::mul(&a_k, &inv_slices[(n - k) as usize]) {
                    brute::bump_q(&mut acc, key.0, key.1, -q);
                }
            }
            inv_slices.push(acc);
        }
        let mut den_inv = brute::Poly2::new();
        for (n, slice) in inv_slices.iter().enumerate() {
            for ((z, x), q) in slice {
                brute::bump_q(&mut den_inv, z + n as i64, *x, q.clone());
            }
        }
        let quotient = brute::mul_trunc(&num, &den_inv, z_cap);
        // multiply by the geometric series 1/(1−z)
        let mut geom = brute::Poly2::new();
        for k in 0..=z_cap {
            brute::bump(&mut geom, k, 0, 1);
        }
        brute::mul_trunc(&quotient, &geom, z_cap)
    }

    #[test]
    fn f_matches_dense_oracle_at_r4() {
        let f = f_series(4, 4, 24).unwrap();
        let oracle = f_oracle(4, 4, 40);
        if let Some(msg) = brute::agrees_detail(&oracle, &f) {
            panic!("mismatch: {msg}");
        }
    }

    #[test]
    fn f_at_r2_has_negative_powers_and_matches_oracle() {
        let f = f_series(2, 4, 16).unwrap();
        let oracle = f_oracle(2, 4, 30);
        if let Some(msg) = brute::agrees_detail(&oracle, &f) {
            panic!("mismatch: {msg}");
        }
        let has_negative = (1..=4).any(|l| {
            f.coeff(l)
                .unwrap()
                .first_term()
                .map(|(e, _)| e < 0)
                .unwrap_or(false)
        });
        assert!(has_negative, "the x^{{-2}}z factor must inject negative powers");
    }

    #[test]
    fn f1_satisfies_its_linear_relation() {
        // (1 − x⁴)·f_1 = (1 − x⁴) − (x^{2r} + x^{2−2r} − x^{2r+2} − x^{4−2r})
        for r in [2, 3, 4, 5] {
            let f = f_series(r, 1, 20).unwrap();
            let f1 = f.coeff(1).unwrap();
            let one_m_x4 = XLaurent::one().sub(&XLaurent::monomial_i(1, 4));
            let lhs = f1.mul(&one_m_x4);
            let rhs = one_m_x4
                .sub(&XLaurent::monomial_i(1, 2 * r))
                .sub(&XLaurent::monomial_i(1, 2 - 2 * r))
                .add(&XLaurent::monomial_i(1, 2 * r + 2))
                .add(&XLaurent::monomial_i(1, 4 - 2 * r));
            assert!(lhs.sub(&rhs).is_zero_through(16), "r={r}");
        }
    }

    #[test]
    fn eta_ii_first_coefficient() {
        // z¹ coefficient of η_II is (1 − x²)/(1 − x⁴) = 1 − x² + x⁴ − x⁶ + …
        let fam = eta_family(3, 2, 18).unwrap();
        let c1 = fam.eta_ii.coeff(1).unwrap();
        let mut expect = XLaurent::zero();
        let mut sign = 1;
        let mut e = 0;
        while e <= 18 {
            expect = expect.add(&XLaurent::monomial_i(sign, e));
            sign = -sign;
            e += 2;
        }
        assert!(c1.eq_through(&expect.truncate_to(18), 18));
    }

    #[test]
    fn eta_routes_agree_for_each_r() {
        for r in [2, 3, 4] {
            let fam = eta_family(r, 4, 14).unwrap();
            let quot = eta_quotient_route(r, 4, 14).unwrap();
            assert_eq!(fam.eta.clamp_x(14), quot.clamp_x(14), "r={r}");
            let c0 = fam.eta.coeff(0).unwrap();
            assert!(c0.sub(&XLaurent::one()).is_zero_on_window());
        }
    }

    #[test]
    fn rho_prefactor_and_mirror_cancellation() {
        let parts = rho_parts(4, 6, 14).unwrap();
        assert_eq!(parts.frac_exp, XLaurent::q(2, 3));
        // the mirror of ρ's series part is the same data in w = 1/z, so the
        // product collapses variable by variable: η·η^{-1} ≡ 1 in z, and the
        // identical cancellation read in w
        let p = parts.fwd.mul(&parts.fwd.invert(6).unwrap(), 6);
        let c0 = p.coeff(0).unwrap();
        assert!(c0.sub(&XLaurent::one()).is_zero_on_window());
        assert_eq!(c0.first_term(), Some((0, XLaurent::q_one())));
        for n in 1..=6 {
            assert!(p.coeff(n).unwrap().is_zero_on_window(), "z^{n}");
        }
    }

    #[test]
    fn rho_bilateral_view_matches_double_sum() {
        let r = 3;
        let (l_pos, l_neg, x_hi) = (3, 2, 12);
        let rho = rho_series(r, l_pos, l_neg, x_hi).unwrap();
        assert_eq!(rho.frac_exp, XLaurent::q(3, 4));
        let parts = rho_parts(r, l_pos + l_neg, x_hi + 8).unwrap();
        for k in -l_neg..=l_pos {
            let mut acc = XLaurent::zero();
            for m in 0..=(l_pos + l_neg) {
                let n = m - k;
                if n < 0 || n > l_pos + l_neg {
                    continue;
                }
                acc = acc.add(
                    &parts
                        .fwd
                        .coeff(m)
                        .unwrap()
                        .mul(&parts.rev_inv.coeff(n).unwrap()),
                );
            }
            let got = rho.coeff(k).unwrap();
            let w = got.window();
            assert!(got.eq_through(&acc.truncate_to(w.hi), w.hi), "z^{k}");
        }
    }

    #[test]
    fn quotient_identity_holds_for_small_r() {
        for r in [2, 3] {
            let resid = identity_213(r, 5, 12).unwrap();
            assert!(resid.is_zero_through(12), "r={r}: {resid}");
        }
    }

    #[test]
    fn product_identity_holds_for_small_r() {
        for r in [2, 4] {
            let resid = identity_eta_product(r, 6, 14).unwrap();
            assert!(resid.is_zero_through(14), "r={r}: {resid}");
        }
    }

    #[test]
    fn perturbed_f_breaks_the_quotient_identity() {
        let r = 3;
        let xh = 10;
        let f = f_series(r, 4, 300).unwrap();
        let bad = f.bump_coeff(1, &XLaurent::monomial_i(1, xh / 2));
        let resid = identity_213_with_f(r, 4, xh, &bad).unwrap();
        assert!(!resid.is_zero_on_window());
    }

    #[test]
    fn perturbed_eta_breaks_the_product_identity() {
        let r = 4;
        let xh = 12;
        let eta = eta_series(r, 4, 300).unwrap();
        let bad = eta.bump_coeff(2, &XLaurent::monomial_i(1, xh / 2));
        let resid = identity_eta_product_with_eta(r, 4, xh, &bad).unwrap();
        assert!(!resid.is_zero_on_window());
    }

    #[test]
    fn recomputation_extends_previous_coefficients() {
        let small = f_series(3, 6, 20).unwrap();
        let large = f_series(3, 10, 40).unwrap();
        for n in 0..=6 {
            let a = small.coeff(n).unwrap();
            let b = large.coeff(n).unwrap();
            assert!(a.eq_through(&b, 20), "z^{n} changed under extension");
        }
        let se = eta_series(2, 4, 16).unwrap();
        let le = eta_series(2, 7, 30).unwrap();
        for n in 0..=4 {
            assert!(se.coeff(n).unwrap().eq_through(&le.coeff(n).unwrap(), 16));
        }
    }
}
