//! The current at the elliptic point, where the structure series collapses
//! and the algebra closes with central charge −2. The realization lives on
//! the tensor product of an antiperiodic and a periodic fermion:
//!
//! ```text
//! T_s = (x − x⁻¹) Σ_a ψ^{A}_a ψ^{P}_{s−a},        s ∈ ℤ + 1/2,
//! ```
//!
//! with the antiperiodic factor acting on the left slot and the periodic one
//! on the right. Whether the two slots commute or anticommute as embedded
//! operators is a genuine convention choice; both are constructed here and
//! the relation checker decides which one closes the algebra. The same
//! annihilation convention applies as in the single-sector current: ψ_a with
//! a > 0 annihilates, so T_s lowers the total level by s.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::coeff::{CoeffBuild, XLaurent, QQ};
use crate::fock::{Convention, GradedOperator, HalfInt, PairedFockSpace, PsiImage, Sector};

use super::DvaError;

/// Builder and cache for the paired-fermion modes, with the same
/// fault-injection hooks as the single-sector bank.
pub struct EllipticBank<C: CoeffBuild> {
    pub ctx: C::Ctx,
    pub paired: Arc<PairedFockSpace>,
    pub convention: Convention,
    /// Expansion bound of the run; certification claims never exceed it.
    pub x_cap: i64,
    prefactor_bump: Option<i64>,
    contraction_bump: Option<(i64, i64)>,
    embeds: Mutex<HashMap<(Sector, i64), Arc<GradedOperator<C>>>>,
    hats: Mutex<HashMap<i64, Arc<GradedOperator<C>>>>,
    hat_products: Mutex<HashMap<(i64, i64), Arc<GradedOperator<C>>>>,
    currents: Mutex<HashMap<i64, Arc<GradedOperator<C>>>>,
}

impl<C: CoeffBuild> EllipticBank<C> {
    pub fn new(ctx: C::Ctx, paired: Arc<PairedFockSpace>, convention: Convention, x_cap: i64) -> Self {
        EllipticBank {
            ctx,
            paired,
            convention,
            x_cap,
            prefactor_bump: None,
            contraction_bump: None,
            embeds: Mutex::new(HashMap::new()),
            hats: Mutex::new(HashMap::new()),
            hat_products: Mutex::new(HashMap::new()),
            currents: Mutex::new(HashMap::new()),
        }
    }

    /// Add x^e to the prefactor x − x⁻¹.
    pub fn with_prefactor_bump(mut self, e: i64) -> Self {
        self.prefactor_bump = Some(e);
        self
    }

    /// Add x^e to the contraction factor of the mode pair ±p (the parity of
    /// p selects the slot it can hit).
    pub fn with_contraction_bump(mut self, p: HalfInt, e: i64) -> Self {
        self.contraction_bump = Some((p.abs().doubled(), e));
        self
    }

    pub fn prefactor(&self) -> C {
        let mut p = XLaurent::monomial_i(1, 1).sub(&XLaurent::monomial_i(1, -1));
        if let Some(e) = self.prefactor_bump {
            p = p.add(&XLaurent::monomial_i(1, e));
        }
        C::from_exact(&self.ctx, &p)
    }

    fn mode_coeff(&self, img: &PsiImage, extra_sign: i32) -> C {
        let sign = QQ::from(num_bigint::BigInt::from(img.sign * extra_sign));
        match img.contraction {
            None => C::monomial(&self.ctx, &sign, 0),
            Some(p) => {
                let d = p.doubled();
                let mut c = C::monomial(&self.ctx, &sign, d).add(&C::monomial(&self.ctx, &sign, -d));
                if let Some((bump_d, e)) = self.contraction_bump {
                    if bump_d == d {
                        c = c.add(&C::monomial(&self.ctx, &sign, e));
                    }
                }
                c
            }
        }
    }

    /// Embedded matrix of the abstract slot mode ψ_a (positive a
    /// annihilates): the antiperiodic factor acts on the left slot, the
    /// periodic one on the right with the convention's crossing sign.
    pub fn embed(&self, slot: Sector, a: HalfInt) -> Arc<GradedOperator<C>> {
        let key = (slot, a.doubled());
        if let Some(hit) = self.embeds.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let n = self.paired.dim();
        let mut out = GradedOperator::zero(n, n, -a.doubled());
        for col in 0..n {
            let (ns_i, r_i) = self.paired.pair(col);
            match slot {
                Sector::NS => {
                    let Some(img) = self.paired.ns.state(ns_i).apply_psi(-a) else { continue };
                    let Some(i2) = self.paired.ns.index_of(&img.state) else { continue };
                    if let Some(row) = self.paired.index_of(i2, r_i) {
                        out.accumulate(row, col, self.mode_coeff(&img, 1));
                    }
                }
                Sector::R => {
                    let Some(img) = self.paired.r.state(r_i).apply_psi(-a) else { continue };
                    let crossing = if self.convention == Convention::Anticommuting
                        && self.paired.ns.state(ns_i).occupation() % 2 == 1
                    {
                        -1
                    } else {
                        1
                    };
                    let Some(j2) = self.paired.r.index_of(&img.state) else { continue };
                    if let Some(row) = self.paired.index_of(ns_i, j2) {
                        out.accumulate(row, col, self.mode_coeff(&img, crossing));
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.embeds.lock().unwrap().insert(key, out.clone());
        out
    }

    /// The prefactor-stripped mode sum Σ_a ψ^{A}_a ψ^{P}_{s−a} — exact
    /// polynomial entries. Only half-odd s pair an antiperiodic index with a
    /// periodic one; an integer s is a caller error.
    pub fn hat(&self, s: HalfInt) -> Result<Arc<GradedOperator<C>>, DvaError> {
        if s.is_integer() {
            return Err(DvaError::ParityMismatch { mode: s.to_string() });
        }
        if let Some(hit) = self.hats.lock().unwrap().get(&s.doubled()) {
            return Ok(hit.clone());
        }
        let n = self.paired.dim();
        let lambda = HalfInt::int(self.paired.lambda);
        let mut acc = GradedOperator::<C>::zero(n, n, -s.doubled());
        for a in Sector::NS.modes_through(lambda) {
            let b = s - a;
            if b.abs() > lambda {
                continue;
            }
            // apply the right factor first; if that would make a creator act
            // before an annihilator, swap — the slots' crossing relation
            // contributes σ, and the trailing annihilator then acts first
            let term = if a.doubled() > 0 && b.doubled() < 0 {
                let sigma = match self.convention {
                    Convention::Commuting => 1,
                    Convention::Anticommuting => -1,
                };
                let m = self.embed(Sector::R, b).compose(&self.embed(Sector::NS, a));
                let sigma = C::monomial(&self.ctx, &QQ::from(num_bigint::BigInt::from(sigma)), 0);
                m.scale(&sigma)
            } else {
                self.embed(Sector::NS, a).compose(&self.embed(Sector::R, b))
            };
            acc = acc.add(&term);
        }
        let acc = Arc::new(acc);
        self.hats.lock().unwrap().insert(s.doubled(), acc.clone());
        Ok(acc)
    }

    /// Cached composition hat(a)∘hat(b), shared across the relation grid.
    pub fn hat_product(
        &self,
        a: HalfInt,
        b: HalfInt,
    ) -> Result<Arc<GradedOperator<C>>, DvaError> {
        let key = (a.doubled(), b.doubled());
        if let Some(hit) = self.hat_products.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let out = Arc::new(self.hat(a)?.compose(&*self.hat(b)?));
        self.hat_products.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// (x − x⁻¹)² in the bank's coefficient type (any prefactor bump
    /// included).
    pub fn prefactor_sq(&self) -> C {
        let p = self.prefactor();
        p.mul(&p)
    }

    /// The mode T_s.
    pub fn t(&self, s: HalfInt) -> Result<Arc<GradedOperator<C>>, DvaError> {
        let hat = self.hat(s)?;
        if let Some(hit) = self.currents.lock().unwrap().get(&s.doubled()) {
            return Ok(hit.clone());
        }
        let out = Arc::new(hat.scale(&self.prefactor()));
        self.currents.lock().unwrap().insert(s.doubled(), out.clone());
        Ok(out)
    }
}
