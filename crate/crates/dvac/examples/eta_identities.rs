//! Verify the two product identities obeyed by the companion q-series η(z):
//! the quotient identity that pins down f(z)·η-ratios, and the two-factor
//! product identity η(z)·η(x²z).  Both residuals must vanish identically,
//! coefficient by coefficient, on the certified window.
//!
//!     cargo run --example eta_identities

use dvac::qseries::{identity_213, identity_eta_product};

fn main() {
    let z_cap = 8;
    let x_hi = 40;

    println!("q-series identity residuals through z^{z_cap}, x-window certified to x^{x_hi}:\n");
    for r in 2..=5 {
        let quot = identity_213(r, z_cap, x_hi).expect("enough x-room for the quotient route");
        let prod =
            identity_eta_product(r, z_cap, x_hi).expect("enough x-room for the product route");

        let quot_zero = quot.is_zero_through(x_hi);
        let prod_zero = prod.is_zero_through(x_hi);

        println!(
            "  r = {r}:  quotient identity {}   product identity {}",
            if quot_zero { "0 ✓" } else { "NONZERO ✗" },
            if prod_zero { "0 ✓" } else { "NONZERO ✗" },
        );
        assert!(quot_zero && prod_zero, "identity residual must vanish for r = {r}");
    }

    println!("\nevery residual coefficient is the exact zero polynomial on its window ✓");
}
