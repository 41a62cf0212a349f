//! Truncated q-Pochhammer products.
//!
//! The basic object is the (possibly multi-base) infinite product
//!
//! ```text
//! (c z; p_1, …, p_k)_∞ = Π_{n_1,…,n_k ≥ 0} (1 − c p_1^{n_1} ⋯ p_k^{n_k} z)
//! ```
//!
//! where `c` and the bases `p_i` are monomials in x and every base has
//! strictly positive x-degree. Only finitely many factors can touch a given
//! x-window, so the truncated expansion keeps exactly the factors below a
//! degree cap and treats the rest as 1.
//!
//! Picking that cap needs one piece of care: when `c` has negative degree,
//! low-degree factors contribute negative x-powers, and a high-degree factor
//! multiplied by those can still land inside the window. The cap is therefore
//! the window top minus the worst negative contribution the kept factors can
//! make (the sum of the most negative factor degrees, one per z-power in
//! play). With that adjustment, every omitted factor provably affects only
//! exponents above the window.

use num_traits::{One, Zero};

use crate::coeff::{CoeffError, XLaurent, QQ};
use crate::qseries::zseries::ZSeries;

/// A monomial q·x^deg.
#[derive(Clone, Debug, PartialEq)]
pub struct Mono {
    pub q: QQ,
    pub deg: i64,
}

impl Mono {
    pub fn new(q: QQ, deg: i64) -> Self {
        Mono { q, deg }
    }

    /// x^deg with unit coefficient.
    pub fn x(deg: i64) -> Self {
        Mono { q: QQ::one(), deg }
    }
}

/// Hard ceiling on enumerated factors; hitting it means the requested window
/// is far outside anything this crate is meant for.
const FACTOR_LIMIT: usize = 20_000_000;

/// Enumerate the factor monomials c·Π p_i^{n_i} with degree ≤ `deg_cap`,
/// sorted by (degree, coefficient) for deterministic assembly.
fn factors(c: &Mono, bases: &[Mono], deg_cap: i64) -> Result<Vec<(QQ, i64)>, CoeffError> {
    let mut out: Vec<(QQ, i64)> = Vec::new();
    let mut stack = vec![(0usize, c.q.clone(), c.deg)];
    while let Some((i, q, d)) = stack.pop() {
        if d > deg_cap {
            continue;
        }
        if i == bases.len() {
            out.push((q, d));
            if out.len() > FACTOR_LIMIT {
                return Err(CoeffError::DegeneratePrecision {
                    detail: "pochhammer factor enumeration exceeds the sanity limit".into(),
                });
            }
            continue;
        }
        let b = &bases[i];
        let mut qq = q;
        let mut dd = d;
        loop {
            // powers of base i, descending into the remaining bases each time
            stack.push((i + 1, qq.clone(), dd));
            dd += b.deg;
            if dd > deg_cap {
                break;
            }
            qq *= &b.q;
        }
    }
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

fn validate_bases(bases: &[Mono]) -> Result<(), CoeffError> {
    for b in bases {
        if b.deg <= 0 {
            return Err(CoeffError::DivergentProduct {
                detail: format!("pochhammer base x^{} has nonpositive degree", b.deg),
            });
        }
        if b.q.is_zero() {
            return Err(CoeffError::DivergentProduct {
                detail: "pochhammer base has zero coefficient".into(),
            });
        }
    }
    Ok(())
}

/// Sum of the (up to `take`) most negative degrees among the factors, or 0 if
/// none are negative. This is how far below its nominal degree a product of
/// `take` kept factors can reach.
fn negative_budget(c: &Mono, bases: &[Mono], take: i64) -> Result<i64, CoeffError> {
    if c.deg >= 0 || take <= 0 {
        return Ok(0);
    }
    let mut negs: Vec<i64> = factors(c, bases, -1)?.into_iter().map(|(_, d)| d).collect();
    negs.sort_unstable();
    Ok(negs.iter().take(take as usize).sum())
}

/// Truncated expansion of (cz; p_1,…,p_k)_∞ through z^{z_cap}, with every
/// z-coefficient certified on the x-window (…, x_hi]. The constant term is
/// exactly 1.
pub fn qpoch(c: &Mono, bases: &[Mono], z_cap: i64, x_hi: i64) -> Result<ZSeries, CoeffError> {
    validate_bases(bases)?;
    assert!(z_cap >= 0, "z truncation order must be nonnegative");
    if c.q.is_zero() {
        // every factor is 1
        return Ok(ZSeries::one());
    }
    let deg_cap = x_hi - negative_budget(c, bases, z_cap)?;
    let mut coeffs = vec![XLaurent::zero(); (z_cap + 1) as usize];
    coeffs[0] = XLaurent::one();
    for (q, d) in factors(c, bases, deg_cap)? {
        // multiply by (1 − q·x^d·z)
        for n in (1..=z_cap as usize).rev() {
            let shifted = coeffs[n - 1].mul_scalar(&q).shift(d);
            coeffs[n] = coeffs[n].sub(&shifted);
        }
    }
    for item in coeffs.iter_mut().skip(1) {
        *item = item.truncate_to(x_hi);
    }
    Ok(ZSeries::truncated(0, coeffs, z_cap))
}

/// Pure-x single-base product (a; p)_∞ = Π_{k≥0} (1 − a·p^k), truncated to
/// the window (…, x_hi]. If some factor is literally 1−1 the product is
/// exactly zero.
pub fn poch_x(a: &Mono, p: &Mono, x_hi: i64) -> Result<XLaurent, CoeffError> {
    validate_bases(std::slice::from_ref(p))?;
    if a.q.is_zero() {
        return Ok(XLaurent::one());
    }
    // all negative factor degrees drag the valuation down; account for the
    // full sum since every factor participates in the single product
    let mut neg_sum = 0i64;
    if a.deg < 0 {
        let mut d = a.deg;
        while d < 0 {
            neg_sum += d;
            d += p.deg;
        }
    }
    let deg_cap = x_hi - neg_sum;
    let mut acc = XLaurent::one();
    let mut q = a.q.clone();
    let mut d = a.deg;
    while d <= deg_cap {
        if d == 0 && q.is_one() {
            return Ok(XLaurent::zero());
        }
        let shifted = acc.mul_scalar(&q).shift(d);
        acc = acc.sub(&shifted).truncate_to(deg_cap);
        q *= &p.q;
        d += p.deg;
    }
    Ok(acc.truncate_to(x_hi))
}

/// Triple product Θ_p(c) = (p;p)_∞ (c;p)_∞ (p·c^{−1};p)_∞ as a pure x-series
/// on the window (…, x_hi].
pub fn theta(c: &Mono, p: &Mono, x_hi: i64) -> Result<XLaurent, CoeffError> {
    if c.q.is_zero() {
        return Err(CoeffError::NotInvertible);
    }
    let args = [
        p.clone(),
        c.clone(),
        Mono::new(&p.q / &c.q, p.deg - c.deg),
    ];
    // first pass at the nominal window just to learn each part's valuation,
    // then recompute so the three-way product still covers x_hi
    let mut lows = [0i64; 3];
    for (i, a) in args.iter().enumerate() {
        let part = poch_x(a, p, x_hi)?;
        if part.is_exact_zero() {
            return Ok(XLaurent::zero());
        }
        lows[i] = part.window().lo;
    }
    let lo_total: i64 = lows.iter().sum();
    let mut acc = XLaurent::one();
    for (i, a) in args.iter().enumerate() {
        let part = poch_x(a, p, x_hi - lo_total + lows[i])?;
        acc = acc.mul(&part);
    }
    Ok(acc.truncate_to(x_hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::brute;

    #[test]
    fn constant_term_is_always_one() {
        for (cd, bases) in [
            (0, vec![Mono::x(4)]),
            (8, vec![Mono::x(4)]),
            (-6, vec![Mono::x(4)]),
            (2, vec![Mono::x(4), Mono::x(6)]),
        ] {
            let s = qpoch(&Mono::x(cd), &bases, 5, 30).unwrap();
            assert_eq!(s.coeff(0).unwrap(), XLaurent::one());
        }
    }

    #[test]
    fn first_coefficient_of_single_base_product() {
        // (z; x^4): z-coefficient is −(1 + x^4 + x^8 + …)
        let s = qpoch(&Mono::x(0), &[Mono::x(4)], 2, 21).unwrap();
        let c1 = s.coeff(1).unwrap();
        let mut expect = XLaurent::zero();
        let mut e = 0;
        while e <= 21 {
            expect = expect.add(&XLaurent::monomial_i(-1, e));
            e += 4;
        }
        assert!(c1.eq_through(&expect.truncate_to(21), 21));
        // (x^8 z; x^4): z-coefficient is −x^8(1 + x^4 + …)
        let s8 = qpoch(&Mono::x(8), &[Mono::x(4)], 2, 25).unwrap();
        let c1 = s8.coeff(1).unwrap();
        let mut expect = XLaurent::zero();
        let mut e = 8;
        while e <= 25 {
            expect = expect.add(&XLaurent::monomial_i(-1, e));
            e += 4;
        }
        assert!(c1.eq_through(&expect.truncate_to(25), 25));
    }

    #[test]
    fn negative_argument_product_matches_oracle() {
        // (x^{-6} z; x^4) exercises the negative-degree budget
        let s = qpoch(&Mono::x(-6), &[Mono::x(4)], 4, 16).unwrap();
        let monos = brute::poch_factors(&XLaurent::q_int(1), -6, &[4], 30);
        let oracle = brute::product_of_binomials(&monos, 4);
        if let Some(msg) = brute::agrees_detail(&oracle, &s) {
            panic!("mismatch: {msg}");
        }
        // the z¹ coefficient really does carry negative powers
        let (e, _) = s.coeff(1).unwrap().first_term().unwrap();
        assert_eq!(e, -6);
    }

    #[test]
    fn two_base_product_matches_oracle() {
        let s = qpoch(&Mono::x(2), &[Mono::x(4), Mono::x(6)], 3, 20).unwrap();
        let monos = brute::poch_factors(&XLaurent::q_int(1), 2, &[4, 6], 12);
        let oracle = brute::product_of_binomials(&monos, 3);
        if let Some(msg) = brute::agrees_detail(&oracle, &s) {
            panic!("mismatch: {msg}");
        }
    }

    #[test]
    fn repeated_base_gets_multiplicity() {
        // (z; x^4, x^4): the factor 1 − x^4 z appears twice (indices (1,0), (0,1)),
        // so the z¹ coefficient is −(1 + 2x^4 + 3x^8 + …)
        let s = qpoch(&Mono::x(0), &[Mono::x(4), Mono::x(4)], 1, 17).unwrap();
        let c1 = s.coeff(1).unwrap();
        let mut expect = XLaurent::zero();
        for k in 0..=4 {
            expect = expect.add(&XLaurent::monomial(XLaurent::q_int(-(k + 1)), 4 * k));
        }
        assert!(c1.eq_through(&expect.truncate_to(17), 17));
    }

    #[test]
    fn nonpositive_base_degree_is_rejected() {
        assert!(matches!(
            qpoch(&Mono::x(0), &[Mono::x(0)], 2, 10),
            Err(CoeffError::DivergentProduct { .. })
        ));
        assert!(matches!(
            poch_x(&Mono::x(2), &Mono::x(-4), 10),
            Err(CoeffError::DivergentProduct { .. })
        ));
    }

    #[test]
    fn pure_x_product_matches_oracle() {
        // (x^2; x^6) = Π (1 − x^{2+6k})
        let got = poch_x(&Mono::x(2), &Mono::x(6), 24).unwrap();
        let mut oracle = brute::one();
        for k in 0..8 {
            let mut f = brute::one();
            brute::bump(&mut f, 0, 2 + 6 * k, -1);
            oracle = brute::mul(&oracle, &f);
        }
        assert!(brute::x_agrees(&oracle, 0, &got));
    }

    #[test]
    fn theta_vanishes_on_the_lattice() {
        let p = Mono::x(6);
        assert!(theta(&p, &p, 30).unwrap().is_exact_zero());
        // c = p² vanishes too: (p·c^{-1}; p) contains the factor 1 − p^{-1}·p
        assert!(theta(&Mono::x(12), &p, 30).unwrap().is_exact_zero());
    }

    #[test]
    fn theta_matches_triple_product_oracle() {
        let got = theta(&Mono::x(2), &Mono::x(6), 20).unwrap();
        let mut oracle = brute::one();
        for (a, step) in [(6, 6), (2, 6), (4, 6)] {
            for k in 0..8 {
                let mut f = brute::one();
                brute::bump(&mut f, 0, a + step * k, -1);
                oracle = brute::mul(&oracle, &f);
            }
        }
        assert!(brute::x_agrees(&oracle, 0, &got));
    }

    #[test]
    fn theta_is_symmetric_under_argument_reflection() {
        // Θ_p(c) = Θ_p(p/c): the factor multiset is the same
        let p = Mono::x(10);
        let a = theta(&Mono::x(4), &p, 25).unwrap();
        let b = theta(&Mono::x(6), &p, 25).unwrap();
        assert_eq!(a, b);
        // and with a negative-degree argument on one side
        let c = theta(&Mono::x(-4), &p, 25).unwrap();
        let d = theta(&Mono::x(14), &p, 25).unwrap();
        assert_eq!(c, d);
    }
}
