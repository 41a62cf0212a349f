//! Scan each level of the truncated space for joint kernels of the lowering
//! modes T_1, …, T_kmax — candidate highest-weight vectors.  Ranks are
//! computed fraction-free over exact Laurent coefficients, so kernel
//! dimensions are exact integers, not numerical estimates.
//!
//!     cargo run --example highest_weight_scan

use dvac::chars::highest_weight_scan;
use dvac::fock::Sector;

fn main() {
    let lambda = 8;
    let kmax = 3;
    let nmax = 4;

    println!(
        "joint kernel of T_1 … T_{kmax} per level, Λ = {lambda}, levels ≤ {nmax}:\n"
    );
    for sector in [Sector::NS, Sector::R] {
        let rep = highest_weight_scan(sector, lambda, kmax, nmax)
            .expect("kmax + nmax stays inside the cutoff");
        println!("  sector {sector}:");
        println!("    {:<7} {:>6} {:>8}", "level", "dim", "kernel");
        for line in &rep.lines {
            println!(
                "    {:<7} {:>6} {:>8}",
                line.level, line.space_dim, line.kernel_dim
            );
        }
        let vacuum = &rep.lines[0];
        assert_eq!(
            vacuum.kernel_dim, vacuum.space_dim,
            "every level-0 state is annihilated by all lowering modes"
        );
        println!();
    }
    println!("level-0 states are annihilated by every lowering mode ✓");
}
