//! The quadratic relations of the fermion modes themselves:
//!
//! ```text
//! {ψ_h, ψ_{h'}} = (x^{2h} + x^{−2h}) · δ_{h+h',0} · Id,
//! ```
//!
//! which at h = h' = 0 reads ψ₀² = Id (so the anticommutator is 2·Id). For
//! h + h' ≠ 0 the right-hand side is empty and the check doubles as the
//! antisymmetry statement ψ_h ψ_{h'} = −ψ_{h'} ψ_h. Everything runs on the
//! same reliable-band logic as the current relation: a column is kept only
//! when both orderings stay under the cutoff.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{CoeffBuild, XLaurent};
use crate::dva::CurrentBank;
use crate::fock::{scalar_op, FockSpace, GradedOperator, HalfInt, Sector};

use super::{measure_columns, summarize, ResidualSummary, VerifyError};

#[derive(Clone, Debug, Serialize)]
pub struct FermionReport {
    pub backend: String,
    pub sector: Sector,
    pub h: String,
    pub hp: String,
    pub h2: i64,
    pub hp2: i64,
    pub lambda: i64,
    pub reliable_dim: usize,
    pub residual: ResidualSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_coeff: Option<String>,
    pub pass: bool,
}

/// Check {ψ_h, ψ_{h'}} for every pair with |h|, |h'| ≤ mmax on the given
/// space. Pairs with an empty reliable band are skipped (they can only
/// occur when mmax is pushed past the cutoff).
pub fn anticommutator_suite<C: CoeffBuild>(
    ctx: &C::Ctx,
    space: Arc<FockSpace>,
    mmax: HalfInt,
    window: (i64, i64),
    tol: f64,
) -> Result<Vec<FermionReport>, VerifyError> {
    let lambda = space.lambda;
    let x_cap = window.1 + 8 * lambda + 8;
    let bank = CurrentBank::<C>::new(ctx.clone(), space.clone(), x_cap);
    let modes = space.sector.modes_through(mmax);
    let pairs: Vec<(HalfInt, HalfInt)> = modes
        .iter()
        .flat_map(|&h| modes.iter().map(move |&hp| (h, hp)))
        .collect();
    let mut reports = pairs
        .par_iter()
        .filter_map(|&(h, hp)| check_pair(&bank, h, hp, window, tol).transpose())
        .collect::<Result<Vec<_>, _>>()?;
    reports.sort_by_key(|r| (r.h2, r.hp2));
    Ok(reports)
}

fn check_pair<C: CoeffBuild>(
    bank: &CurrentBank<C>,
    h: HalfInt,
    hp: HalfInt,
    window: (i64, i64),
    tol: f64,
) -> Result<Option<FermionReport>, VerifyError> {
    let space = &bank.space;
    let lambda = space.lambda;
    let dim = space.dim();
    let (h2, hp2) = (h.doubled(), hp.doubled());
    let cols: Vec<usize> = (0..dim)
        .filter(|&j| {
            let e2 = space.state(j).level().doubled();
            let reach = h2.abs().max(hp2.abs());
            e2 + reach <= 2 * lambda && e2 - (h2 + hp2) + reach <= 2 * lambda
        })
        .collect();
    if cols.is_empty() {
        return Ok(None);
    }
    let acc = bank
        .psi(h)
        .compose(&bank.psi(hp))
        .add(&bank.psi(hp).compose(&bank.psi(h)));
    let (rhs_op, rhs_str) = if h2 + hp2 == 0 {
        let poly = XLaurent::monomial_i(1, h2).add(&XLaurent::monomial_i(1, -h2));
        let c = C::from_exact(&bank.ctx, &poly);
        (scalar_op(&bank.ctx, dim, &c), Some(poly.to_string()))
    } else {
        (GradedOperator::zero(dim, dim, -(h2 + hp2)), None)
    };
    let acc_m = measure_columns(&acc, cols.iter().copied());
    let rhs_m = measure_columns(&rhs_op, cols.iter().copied());
    let residual = acc.sub(&rhs_op);
    let res_m = measure_columns(&residual, cols.iter().copied());
    let scale = acc_m.max_abs.max(rhs_m.max_abs);
    let (summary, pass) = summarize(&res_m, scale, window.1, tol, bank.x_cap)?;
    Ok(Some(FermionReport {
        backend: C::backend_tag(&bank.ctx),
        sector: bank.sector(),
        h: h.to_string(),
        hp: hp.to_string(),
        h2,
        hp2,
        lambda,
        reliable_dim: cols.len(),
        residual: summary,
        rhs_coeff: rhs_str,
        pass,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_mode_algebra_closes_on_the_reliable_band() {
        for sector in [Sector::NS, Sector::R] {
            let space = Arc::new(FockSpace::enumerate(sector, 4));
            let reports = anticommutator_suite::<XLaurent>(
                &(),
                space,
                HalfInt::int(3),
                (-12, 10),
                0.0,
            )
            .unwrap();
            assert!(!reports.is_empty());
            for rep in &reports {
                assert!(rep.pass, "{sector} {{ψ_{}, ψ_{}}}: {:?}", rep.h, rep.hp, rep.residual);
                assert_eq!(rep.rhs_coeff.is_some(), rep.h2 + rep.hp2 == 0);
            }
        }
    }

    #[test]
    fn zero_mode_squares_to_the_identity() {
        let space = Arc::new(FockSpace::enumerate(Sector::R, 3));
        let reports =
            anticommutator_suite::<XLaurent>(&(), space, HalfInt::int(0), (-8, 8), 0.0).unwrap();
        assert_eq!(reports.len(), 1);
        let rep = &reports[0];
        assert!(rep.pass);
        // {ψ₀, ψ₀} = 2·Id: the report's right-hand side is x⁰ + x⁰
        assert_eq!(rep.rhs_coeff.as_deref(), Some("2"));
    }

    #[test]
    fn a_corrupted_contraction_fails_the_suite() {
        let space = Arc::new(FockSpace::enumerate(Sector::NS, 4));
        let bank = CurrentBank::<XLaurent>::new((), space, 60)
            .with_contraction_bump(HalfInt::from_doubled(1), 5);
        let rep = check_pair(&bank, HalfInt::from_doubled(1), HalfInt::from_doubled(-1), (-12, 10), 0.0)
            .unwrap()
            .expect("band nonempty");
        assert!(!rep.pass);
    }
}
