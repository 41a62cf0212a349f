//! Deformation parameters and the derived constants attached to them.

use serde::{Deserialize, Serialize};

use super::xlaurent::QQ;
use num_bigint::BigInt;

/// Parameter bundle for the level-`k` theory: `r = k + 3`, highest weights
/// indexed by `l = 1..=k+1`, and the pair `(l_0, l_1) = (l, r - 1 - l)` that
/// controls vacuum eigenvalues `x^{l_i} + x^{-l_i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub r: i64,
    pub l: i64,
}

impl Params {
    pub fn new(r: i64, l: i64) -> Self {
        assert!(r >= 2, "r must be at least 2");
        Params { r, l }
    }

    pub fn level(&self) -> i64 {
        self.r - 3
    }

    pub fn l_pair(&self) -> (i64, i64) {
        (self.l, self.r - 1 - self.l)
    }

    /// Classical central charge `1 - 6/(r(r-1))` of the undeformed limit.
    pub fn classical_central_charge(r: i64) -> QQ {
        let one = QQ::from(BigInt::from(1));
        one - QQ::new(BigInt::from(6), BigInt::from(r * (r - 1)))
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::XLaurent;

    #[test]
    fn central_charges_at_the_two_distinguished_points() {
        // r = 4: the free-fermion value 1/2; r = 2: the symplectic-fermion value -2.
        assert_eq!(Params::classical_central_charge(4), XLaurent::q(1, 2));
        assert_eq!(Params::classical_central_charge(2), XLaurent::q_int(-2));
        assert_eq!(Params::classical_central_charge(3), XLaurent::q_int(0));
    }

    #[test]
    fn l_pair_is_symmetric_about_the_midpoint() {
        let p = Params::new(4, 1);
        assert_eq!(p.l_pair(), (1, 2));
        assert_eq!(p.level(), 1);
    }
}
