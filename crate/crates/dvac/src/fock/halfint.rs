//! Half-integers stored exactly as their doubles.
//!
//! Mode indices live in ℤ (one sector) or ℤ + ½ (the other), and levels are
//! sums of modes, so everything fits in a single `i64` holding twice the
//! value. Keeping the doubling internal means ordering, hashing and
//! arithmetic are plain integer operations and no parity information is ever
//! lost to rounding.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    /// The half-integer d/2.
    pub fn from_doubled(d: i64) -> Self {
        HalfInt(d)
    }

    /// The integer n.
    pub fn int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    /// Twice the value — always exact.
    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// Parse "3", "-2", "5/2", "-7/2". Only halves are accepted as
    /// denominators, and n/2 must be in lowest terms.
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                return Err(format!("`{s}`: only halves are supported"));
            }
            let n: i64 = num
                .trim()
                .parse()
                .map_err(|_| format!("`{s}` is not a half-integer"))?;
            if n % 2 == 0 {
                return Err(format!("`{s}` should be written as the integer {}", n / 2));
            }
            Ok(HalfInt(n))
        } else {
            let n: i64 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
            Ok(HalfInt::int(n))
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_uses_reduced_form() {
        assert_eq!(HalfInt::int(3).to_string(), "3");
        assert_eq!(HalfInt::from_doubled(5).to_string(), "5/2");
        assert_eq!(HalfInt::from_doubled(-1).to_string(), "-1/2");
        assert_eq!(HalfInt::ZERO.to_string(), "0");
    }

    #[test]
    fn parse_round_trips() {
        for s in ["0", "4", "-3", "1/2", "-7/2", "11/2"] {
            let h = HalfInt::parse(s).unwrap();
            assert_eq!(h.to_string(), s);
        }
        assert!(HalfInt::parse("1/3").is_err());
        assert!(HalfInt::parse("4/2").is_err());
        assert!(HalfInt::parse("x").is_err());
    }

    #[test]
    fn arithmetic_and_order() {
        let a = HalfInt::from_doubled(3); // 3/2
        let b = HalfInt::int(1);
        assert_eq!((a + b).to_string(), "5/2");
        assert_eq!((a - b).to_string(), "1/2");
        assert_eq!((-a).doubled(), -3);
        assert!(b < a);
        assert!(a.abs() == a && (-a).abs() == a);
        assert!(!a.is_integer() && b.is_integer());
    }
}
