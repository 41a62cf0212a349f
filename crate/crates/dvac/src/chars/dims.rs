//! Graded dimensions of the truncated spaces, two independent ways: direct
//! state enumeration, and the Euler products
//!
//! ```text
//! NS:  Π_{j≥0} (1 + q^{j+1/2})        R:  2 · Π_{n≥1} (1 + q^n)
//! ```
//!
//! expanded with integer arithmetic. The two must agree level by level for
//! every level at or below the cutoff; `graded_dimension` checks that before
//! returning.

use serde::Serialize;

use crate::fock::{FockSpace, HalfInt, Sector};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LevelDim {
    pub level: String,
    pub level2: i64,
    pub dim: u64,
}

/// Coefficients of the sector's Euler product on the sector's level grid
/// (half-integer steps for NS, integer steps for R), through level `nmax`.
pub fn euler_dims(sector: Sector, nmax: i64) -> Vec<LevelDim> {
    assert!(nmax >= 0);
    let cap2 = 2 * nmax;
    // coefficient array indexed by doubled level
    let mut poly = vec![0u64; cap2 as usize + 1];
    poly[0] = 1;
    match sector {
        Sector::NS => {
            // factors (1 + q^{j + 1/2}), doubled exponent 2j + 1
            let mut e2 = 1;
            while e2 <= cap2 {
                mul_one_plus(&mut poly, e2 as usize);
                e2 += 2;
            }
        }
        Sector::R => {
            let mut e2 = 2;
            while e2 <= cap2 {
                mul_one_plus(&mut poly, e2 as usize);
                e2 += 2;
            }
            for c in poly.iter_mut() {
                *c *= 2;
            }
        }
    }
    grid(sector, nmax)
        .into_iter()
        .map(|l| LevelDim {
            level: l.to_string(),
            level2: l.doubled(),
            dim: poly[l.doubled() as usize],
        })
        .collect()
}

fn mul_one_plus(poly: &mut [u64], e2: usize) {
    for i in (e2..poly.len()).rev() {
        poly[i] += poly[i - e2];
    }
}

fn grid(sector: Sector, nmax: i64) -> Vec<HalfInt> {
    let step = match sector {
        Sector::NS => 1,
        Sector::R => 2,
    };
    (0..=2 * nmax)
        .step_by(step)
        .map(HalfInt::from_doubled)
        .collect()
}

/// Dimensions by direct enumeration of the cutoff space, on the same grid as
/// [`euler_dims`] (levels with no states report 0). Panics if the two
/// disagree — that would mean the state enumeration itself is broken.
pub fn graded_dimension(sector: Sector, nmax: i64) -> Vec<LevelDim> {
    assert!(nmax >= 0);
    let space = FockSpace::enumerate(sector, nmax);
    let by_level = space.dims_by_level();
    let out: Vec<LevelDim> = grid(sector, nmax)
        .into_iter()
        .map(|l| LevelDim {
            level: l.to_string(),
            level2: l.doubled(),
            dim: by_level.get(&l.doubled()).copied().unwrap_or(0) as u64,
        })
        .collect();
    let oracle = euler_dims(sector, nmax);
    assert_eq!(out, oracle, "enumeration disagrees with the Euler product");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(v: &[LevelDim]) -> Vec<u64> {
        v.iter().map(|l| l.dim).collect()
    }

    #[test]
    fn ns_small_levels_match_the_quoted_prefix() {
        // levels 0, 1/2, 1, 3/2, 2 → 1, 1, 0, 1, 1 (nothing sums to 1)
        let d = graded_dimension(Sector::NS, 2);
        assert_eq!(dims(&d), vec![1, 1, 0, 1, 1]);
    }

    #[test]
    fn r_small_levels_double_the_distinct_partitions() {
        // distinct-part counts 1, 1, 1, 2, 2, 3, with the zero mode doubling
        let d = graded_dimension(Sector::R, 5);
        assert_eq!(dims(&d), vec![2, 2, 2, 4, 4, 6]);
    }

    #[test]
    fn enumeration_equals_product_through_level_twelve() {
        for sector in [Sector::NS, Sector::R] {
            let d = graded_dimension(sector, 12);
            let e = euler_dims(sector, 12);
            assert_eq!(d, e, "{sector}");
        }
    }

    #[test]
    fn grid_is_half_integer_for_ns_and_integer_for_r() {
        let ns = euler_dims(Sector::NS, 1);
        assert_eq!(ns.iter().map(|l| l.level2).collect::<Vec<_>>(), vec![0, 1, 2]);
        let r = euler_dims(Sector::R, 2);
        assert_eq!(r.iter().map(|l| l.level2).collect::<Vec<_>>(), vec![0, 2, 4]);
    }
}
