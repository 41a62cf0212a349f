//! Graded dimensions of the truncated Fock spaces against their Euler
//! products: Π(1 + q^{n+1/2}) for the antiperiodic sector and 2·Π(1 + q^n)
//! for the periodic one.  The state count at every level must equal the
//! product's coefficient.
//!
//!     cargo run --example characters

use dvac::chars::{euler_dims, graded_dimension};
use dvac::fock::Sector;

fn main() {
    let nmax = 8;
    for sector in [Sector::NS, Sector::R] {
        let counted = graded_dimension(sector, nmax);
        let product = euler_dims(sector, nmax);
        assert_eq!(counted.len(), product.len());

        println!("sector {sector}, graded dimensions through level {nmax}:");
        println!("  {:<7} {:>10} {:>10}", "level", "states", "product");
        for (c, p) in counted.iter().zip(&product) {
            assert_eq!(c.level2, p.level2);
            assert_eq!(
                c.dim, p.dim,
                "state count must match the Euler product at level {}",
                c.level
            );
            println!("  {:<7} {:>10} {:>10}", c.level, c.dim, p.dim);
        }
        println!("  all levels agree ✓\n");
    }
    println!("both characters match their infinite products on the truncation range ✓");
}
