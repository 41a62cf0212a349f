//! Check the deformed fermion anticommutators {ψ_h, ψ_{h'}} on truncated
//! Fock spaces in both sectors: the bracket must vanish unless h' = −h,
//! where it equals the deformed contraction scalar times the identity.
//!
//!     cargo run --example fermion_algebra

use std::sync::Arc;

use dvac::coeff::XLaurent;
use dvac::fock::{FockSpace, HalfInt, Sector};
use dvac::verify::{anticommutator_suite, ResidualSummary};

fn main() {
    let lambda = 4;
    let window = (-16, 16);

    for sector in [Sector::NS, Sector::R] {
        let mmax = match sector {
            Sector::NS => HalfInt::from_doubled(5), // 5/2
            Sector::R => HalfInt::int(2),
        };
        let space = Arc::new(FockSpace::enumerate(sector, lambda));
        let reports = anticommutator_suite::<XLaurent>(&(), space, mmax, window, 0.0)
            .expect("suite runs on the exact backend");

        println!("sector {sector}, cutoff Λ = {lambda}, modes |h| ≤ {mmax}:");
        let mut failures = 0;
        for rep in &reports {
            if !rep.pass {
                failures += 1;
            }
            // print the nontrivial diagonal pairs; off-diagonal brackets are
            // zero and there are many of them
            if rep.h2 + rep.hp2 == 0 && rep.h2 >= 0 {
                let zero = match &rep.residual {
                    ResidualSummary::Exact { zero, certified_through, .. } => {
                        format!("residual 0 through x^{certified_through} ({zero})")
                    }
                    ResidualSummary::Float { norm, .. } => format!("|res| = {norm:.2e}"),
                };
                println!(
                    "  {{ψ_{}, ψ_{}}} = ({}) · Id   [{zero}]",
                    rep.h,
                    rep.hp,
                    rep.rhs_coeff.as_deref().unwrap_or("0"),
                );
            }
        }
        let off = reports.iter().filter(|r| r.h2 + r.hp2 != 0).count();
        println!("  {off} off-diagonal brackets vanish identically");
        assert_eq!(failures, 0, "every pair must pass in sector {sector}");
        println!("  all {} pairs PASS\n", reports.len());
    }
}
