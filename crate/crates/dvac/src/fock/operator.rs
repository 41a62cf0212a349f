//! Sparse level-graded operators over a generic coefficient ring.
//!
//! A [`GradedOperator`] is a matrix between two (possibly equal) ordered
//! bases, tagged with the level shift it performs; the tag is doubled like
//! everything else touching half-integers. Storage is column-major sparse:
//! one sorted `(row, coeff)` list per column. The matrix itself knows
//! nothing about Fock states — builders in this module translate mode
//! operators into matrices, and structural truncation (an image state above
//! Λ having no row) happens there.

use crate::coeff::{Coeff, CoeffBuild, QQ};

use super::halfint::HalfInt;
use super::space::{Convention, FockSpace, PairedFockSpace, PsiImage};

#[derive(Clone, Debug, PartialEq)]
pub struct GradedOperator<C: Coeff> {
    pub rows: usize,
    pub cols: usize,
    /// Doubled level shift: a nonzero entry at (i, j) relates basis states
    /// with level(i) = level(j) + degree2/2.
    pub degree2: i64,
    columns: Vec<Vec<(usize, C)>>,
}

impl<C: Coeff> GradedOperator<C> {
    pub fn zero(rows: usize, cols: usize, degree2: i64) -> Self {
        GradedOperator { rows, cols, degree2, columns: vec![Vec::new(); cols] }
    }

    pub fn degree(&self) -> HalfInt {
        HalfInt::from_doubled(self.degree2)
    }

    /// Accumulate `c` into entry (row, col).
    pub fn accumulate(&mut self, row: usize, col: usize, c: C) {
        assert!(row < self.rows && col < self.cols);
        let column = &mut self.columns[col];
        match column.binary_search_by_key(&row, |e| e.0) {
            Ok(k) => {
                let sum = column[k].1.add(&c);
                if sum.is_zero() {
                    column.remove(k);
                } else {
                    column[k].1 = sum;
                }
            }
            Err(k) => {
                if !c.is_zero() {
                    column.insert(k, (row, c));
                }
            }
        }
    }

    pub fn column(&self, j: usize) -> &[(usize, C)] {
        &self.columns[j]
    }

    pub fn entry(&self, row: usize, col: usize) -> Option<&C> {
        let column = &self.columns[col];
        column.binary_search_by_key(&row, |e| e.0).ok().map(|k| &column[k].1)
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        assert_eq!(self.degree2, rhs.degree2, "cannot add operators of different degree");
        let mut out = self.clone();
        for (j, col) in rhs.columns.iter().enumerate() {
            for (i, c) in col {
                out.accumulate(*i, j, c.clone());
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale_neg())
    }

    fn scale_neg(&self) -> Self {
        let mut out = self.clone();
        for col in &mut out.columns {
            for (_, c) in col.iter_mut() {
                *c = c.neg();
            }
        }
        out
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = GradedOperator::zero(self.rows, self.cols, self.degree2);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                out.accumulate(*i, j, c.mul(k));
            }
        }
        out
    }

    /// self ∘ rhs  (rhs applied first).
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = GradedOperator::zero(self.rows, rhs.cols, self.degree2 + rhs.degree2);
        for j in 0..rhs.cols {
            for (k, b) in rhs.column(j) {
                for (i, a) in self.column(*k) {
                    out.accumulate(*i, j, a.mul(b));
                }
            }
        }
        out
    }

    /// Apply to a dense vector, with `zero` supplied for the output fill.
    pub fn apply_with(&self, zero: C, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![zero; self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, a) in self.column(j) {
                out[*i] = out[*i].add(&a.mul(x));
            }
        }
        out
    }

    /// Map every stored coefficient (degree and sparsity pattern kept).
    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> GradedOperator<D> {
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(i, c)| (*i, f(c))).collect())
            .collect();
        GradedOperator { rows: self.rows, cols: self.cols, degree2: self.degree2, columns }
    }
}

pub fn identity_op<C: CoeffBuild>(ctx: &C::Ctx, n: usize) -> GradedOperator<C> {
    scalar_op(ctx, n, &C::one(ctx))
}

/// k · Id as a degree-0 operator.
pub fn scalar_op<C: CoeffBuild>(_ctx: &C::Ctx, n: usize, k: &C) -> GradedOperator<C> {
    let mut out = GradedOperator::zero(n, n, 0);
    for i in 0..n {
        out.accumulate(i, i, k.clone());
    }
    out
}

fn psi_coeff<C: CoeffBuild>(ctx: &C::Ctx, img: &PsiImage) -> C {
    let sign = QQ::from(num_bigint::BigInt::from(img.sign));
    match img.contraction {
        None => C::monomial(ctx, &sign, 0),
        Some(p) => {
            let d = p.doubled();
            C::monomial(ctx, &sign, d).add(&C::monomial(ctx, &sign, -d))
        }
    }
}

/// Matrix of ψ_m on a truncated single-sector space. Image states above the
/// level cutoff are structurally dropped.
pub fn psi_matrix<C: CoeffBuild>(ctx: &C::Ctx, space: &FockSpace, m: HalfInt) -> GradedOperator<C> {
    assert!(
        space.sector.contains_mode(m),
        "mode {m} does not belong to the {} sector",
        space.sector
    );
    let n = space.dim();
    let mut out = GradedOperator::zero(n, n, m.doubled());
    for j in 0..n {
        if let Some(img) = space.state(j).apply_psi(m) {
            if let Some(i) = space.index_of(&img.state) {
                out.accumulate(i, j, psi_coeff(ctx, &img));
            }
        }
    }
    out
}

/// ψ_m acting on the left (antiperiodic) slot of a paired space. The left
/// slot never sees the right one, in either convention.
pub fn embed_ns<C: CoeffBuild>(
    ctx: &C::Ctx,
    paired: &PairedFockSpace,
    m: HalfInt,
    _convention: Convention,
) -> GradedOperator<C> {
    assert!(!m.is_integer(), "left slot uses half-odd modes, got {m}");
    let n = paired.dim();
    let mut out = GradedOperator::zero(n, n, m.doubled());
    for k in 0..n {
        let (i, j) = paired.pair(k);
        if let Some(img) = paired.ns.state(i).apply_psi(m) {
            if let Some(i2) = paired.ns.index_of(&img.state) {
                if let Some(row) = paired.index_of(i2, j) {
                    out.accumulate(row, k, psi_coeff(ctx, &img));
                }
            }
        }
    }
    out
}

/// ψ_m acting on the right (periodic) slot. Under the anticommuting
/// convention it picks up (−1)^{occupation of the left factor} so that the
/// two slots anticommute as operators; under the commuting convention the
/// slots commute and no sign appears.
pub fn embed_r<C: CoeffBuild>(
    ctx: &C::Ctx,
    paired: &PairedFockSpace,
    m: HalfInt,
    convention: Convention,
) -> GradedOperator<C> {
    assert!(m.is_integer(), "right slot uses integer modes, got {m}");
    let n = paired.dim();
    let mut out = GradedOperator::zero(n, n, m.doubled());
    for k in 0..n {
        let (i, j) = paired.pair(k);
        if let Some(img) = paired.r.state(j).apply_psi(m) {
            if let Some(j2) = paired.r.index_of(&img.state) {
                if let Some(row) = paired.index_of(i, j2) {
                    let mut c = psi_coeff::<C>(ctx, &img);
                    if convention == Convention::Anticommuting
                        && paired.ns.state(i).occupation() % 2 == 1
                    {
                        c = c.neg();
                    }
                    out.accumulate(row, k, c);
                }
            }
        }
    }
    out
}
