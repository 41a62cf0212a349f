//! Candidate-primary counting: dimensions of the joint kernel of the
//! lowering modes T_1, …, T_Kmax on each level, with x left symbolic.
//!
//! A state killed by every positive mode is a highest-weight vector for the
//! algebra, so these dimensions are the level-by-level census of where new
//! modules can start inside the fermionic realization. The kernel is
//! computed over the field ℚ(x): the lowering blocks (κ stripped — a unit
//! never changes a kernel) are stacked per level and their rank is found by
//! fraction-free Bareiss elimination, so every division is exact and the
//! result is the generic rank, not a rank at some special point.
//!
//! The counts are reported as evidence, not checked against asserted
//! values: no expected multiplicity table is part of the contract here.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::XLaurent;
use crate::dva::CurrentBank;
use crate::fock::{FockSpace, HalfInt, Sector};

use super::CharsError;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ScanLine {
    pub level: String,
    pub level2: i64,
    pub space_dim: usize,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub sector: Sector,
    pub lambda: i64,
    pub kmax: i64,
    pub nmax: i64,
    pub lines: Vec<ScanLine>,
}

pub fn highest_weight_scan(
    sector: Sector,
    lambda: i64,
    kmax: i64,
    nmax: i64,
) -> Result<ScanReport, CharsError> {
    assert!(kmax >= 0 && nmax >= 0);
    if kmax + nmax > lambda {
        return Err(CharsError::ScanBound { got: kmax + nmax, lambda });
    }
    let space = Arc::new(FockSpace::enumerate(sector, lambda));
    let bank = CurrentBank::<XLaurent>::new((), space.clone(), 8);
    let step = match sector {
        Sector::NS => 1,
        Sector::R => 2,
    };
    let levels: Vec<HalfInt> = (0..=2 * nmax)
        .step_by(step)
        .map(HalfInt::from_doubled)
        .collect();
    let lines: Vec<ScanLine> = levels
        .par_iter()
        .map(|&level| {
            let cols: Vec<usize> = (0..space.dim())
                .filter(|&j| space.state(j).level() == level)
                .collect();
            let kernel_dim = if cols.is_empty() {
                0
            } else {
                let mut stacked: Vec<Vec<XLaurent>> = Vec::new();
                for k in 1..=kmax {
                    let target = level - HalfInt::int(k);
                    let rows: Vec<usize> = (0..space.dim())
                        .filter(|&i| space.state(i).level() == target)
                        .collect();
                    if rows.is_empty() {
                        continue;
                    }
                    let w = bank.wedge(k);
                    let mut dense =
                        vec![vec![XLaurent::zero(); cols.len()]; rows.len()];
                    for (cj, &j) in cols.iter().enumerate() {
                        for (i, c) in w.column(j) {
                            if let Some(ri) = rows.iter().position(|&r| r == *i) {
                                dense[ri][cj] = c.clone();
                            }
                        }
                    }
                    stacked.extend(dense);
                }
                cols.len() - rank_bareiss(stacked)
            };
            ScanLine {
                level: level.to_string(),
                level2: level.doubled(),
                space_dim: cols.len(),
                kernel_dim,
            }
        })
        .collect();
    Ok(ScanReport { sector, lambda, kmax, nmax, lines })
}

/// Rank over the fraction field by two-term fraction-free elimination: the
/// update (pivot·a_ij − a_ik·a_kj)/previous_pivot stays polynomial at every
/// step, so no rational functions ever materialize.
fn rank_bareiss(mut a: Vec<Vec<XLaurent>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = XLaurent::one();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_exact_zero()) else {
            continue;
        };
        a.swap(row, p);
        for i in (row + 1)..rows {
            for j in (col + 1)..cols {
                let num = a[row][col]
                    .mul(&a[i][j])
                    .sub(&a[i][col].mul(&a[row][j]));
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("fraction-free update divides exactly");
            }
            a[i][col] = XLaurent::zero();
        }
        prev = a[row][col].clone();
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}
