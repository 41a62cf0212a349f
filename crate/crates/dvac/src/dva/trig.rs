//! The deformed current at the free-fermion point, realized on a truncated
//! single-sector Fock space.
//!
//! Mode operators follow the annihilation convention: ψ_m with m > 0 empties
//! the occupied mode m (so T_k lowers the level by k, and positive modes
//! kill the vacuum). The current is
//!
//! ```text
//! T_k = κ · [ Σ_m x^{4m−2k} :ψ_m ψ_{k−m}:  +  δ_{k,0} (C₀ + [periodic] 1) ],
//! κ = (1 − x⁶) / (x²(1 + x²)),   C₀ = Σ_{m>0} (x^{6m} + x^{2m}),
//! ```
//!
//! with normal ordering moving annihilators right and the reordering
//! contractions of the k = 0 sum collected once and for all into the
//! convergent constant C₀. Keeping that constant in closed form — geometric
//! sums, never a truncated tail — is what makes the truncated T_0 exact on
//! every level of the space: the wedge part is manifestly safe (annihilators
//! act first, so intermediates never climb), and the scalar part carries no
//! truncation at all.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::cache::{CacheError, CacheKey, OperatorCache};
use crate::coeff::{CoeffBuild, XLaurent, QQ};
use crate::fock::{scalar_op, FockSpace, GradedOperator, HalfInt, PsiImage, Sector};

/// A value of the form Σᵢ x^{aᵢ}/(1 − x^{bᵢ}) + constant, kept symbolic so
/// it can be expanded to any window or evaluated exactly at rational points.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarPart {
    /// (a, b) pairs for x^a/(1 − x^b), with b > 0.
    pub geometric: Vec<(i64, i64)>,
    pub constant: i64,
}

impl ScalarPart {
    /// Series expansion certified through x^cap.
    pub fn series(&self, cap: i64) -> XLaurent {
        let mut acc = XLaurent::monomial_i(self.constant, 0);
        for &(a, b) in &self.geometric {
            let den = XLaurent::one().sub(&XLaurent::monomial_i(1, b));
            let g = den.inv_to(cap).expect("1 - x^b is invertible").shift(a);
            acc = acc.add(&g);
        }
        acc.truncate_to(cap)
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x0: &QQ) -> QQ {
        use crate::coeff::xlaurent::pow_q;
        let mut acc = QQ::from(num_bigint::BigInt::from(self.constant));
        for &(a, b) in &self.geometric {
            let one = QQ::from(num_bigint::BigInt::from(1));
            acc += pow_q(x0, a) / (one - pow_q(x0, b));
        }
        acc
    }
}

/// The normal-ordering anomaly of T_0, including the extra +1 contributed by
/// the periodic sector's ψ₀² = Id.
pub fn t0_scalar(sector: Sector) -> ScalarPart {
    match sector {
        Sector::NS => ScalarPart { geometric: vec![(3, 6), (1, 2)], constant: 0 },
        Sector::R => ScalarPart { geometric: vec![(6, 6), (2, 2)], constant: 1 },
    }
}

/// κ expanded through x^cap (the value has a simple pole pattern starting at
/// x^{−2}).
pub fn kappa_series(cap: i64) -> XLaurent {
    let num = XLaurent::one().sub(&XLaurent::monomial_i(1, 6));
    let den_inv = XLaurent::one()
        .add(&XLaurent::monomial_i(1, 2))
        .inv_to(cap + 2)
        .expect("1 + x² is invertible");
    num.mul(&den_inv).shift(-2).truncate_to(cap)
}

/// Closed form of the vacuum eigenvalue of T_0: κ·(C₀ + [periodic] 1).
pub fn vacuum_eigenvalue(sector: Sector) -> XLaurent {
    match sector {
        Sector::NS => XLaurent::monomial_i(1, 1).add(&XLaurent::monomial_i(1, -1)),
        Sector::R => XLaurent::monomial_i(1, 2).add(&XLaurent::monomial_i(1, -2)),
    }
}

/// Builder and cache for the current's modes on one truncated space, with
/// optional fault-injection hooks used by the negative controls: a monomial
/// added to κ, or to the contraction factor of one mode pair.
pub struct CurrentBank<C: CoeffBuild> {
    pub ctx: C::Ctx,
    pub space: Arc<FockSpace>,
    /// Window bound through which κ and C₀ are expanded (the exact backend's
    /// knowledge bound; the numeric backend extends internally to its own
    /// truncation depth).
    pub x_cap: i64,
    kappa_bump: Option<i64>,
    contraction_bump: Option<(i64, i64)>,
    psis: Mutex<HashMap<i64, Arc<GradedOperator<C>>>>,
    wedges: Mutex<HashMap<i64, Arc<GradedOperator<C>>>>,
    wedge_products: Mutex<HashMap<(i64, i64), Arc<GradedOperator<C>>>>,
    currents: Mutex<HashMap<i64, Arc<GradedOperator<C>>>>,
}

impl<C: CoeffBuild> CurrentBank<C> {
    pub fn new(ctx: C::Ctx, space: Arc<FockSpace>, x_cap: i64) -> Self {
        CurrentBank {
            ctx,
            space,
            x_cap,
            kappa_bump: None,
            contraction_bump: None,
            psis: Mutex::new(HashMap::new()),
            wedges: Mutex::new(HashMap::new()),
            wedge_products: Mutex::new(HashMap::new()),
            currents: Mutex::new(HashMap::new()),
        }
    }

    /// Add x^e to κ.
    pub fn with_kappa_bump(mut self, e: i64) -> Self {
        self.kappa_bump = Some(e);
        self
    }

    /// Add x^e to the contraction factor of the mode pair ±p.
    pub fn with_contraction_bump(mut self, p: HalfInt, e: i64) -> Self {
        self.contraction_bump = Some((p.abs().doubled(), e));
        self
    }

    pub fn sector(&self) -> Sector {
        self.space.sector
    }

    fn series_cap(&self) -> i64 {
        C::truncation_degree(&self.ctx, self.x_cap)
    }

    pub fn kappa(&self) -> C {
        let mut k = kappa_series(self.series_cap());
        if let Some(e) = self.kappa_bump {
            k = k.add(&XLaurent::monomial_i(1, e));
        }
        C::from_exact(&self.ctx, &k)
    }

    fn psi_coeff(&self, img: &PsiImage) -> C {
        let sign = QQ::from(num_bigint::BigInt::from(img.sign));
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

    /// Matrix of the abstract mode ψ_m (positive m annihilates), i.e. the
    /// wedge action that shifts the level by −m.
    pub fn psi(&self, m: HalfInt) -> Arc<GradedOperator<C>> {
        if let Some(hit) = self.psis.lock().unwrap().get(&m.doubled()) {
            return hit.clone();
        }
        let n = self.space.dim();
        let mut out = GradedOperator::zero(n, n, -m.doubled());
        for j in 0..n {
            if let Some(img) = self.space.state(j).apply_psi(-m) {
                if let Some(i) = self.space.index_of(&img.state) {
                    out.accumulate(i, j, self.psi_coeff(&img));
                }
            }
        }
        let out = Arc::new(out);
        self.psis.lock().unwrap().insert(m.doubled(), out.clone());
        out
    }

    /// The normal-ordered wedge sum Σ_m x^{4m−2k} :ψ_m ψ_{k−m}: — exact
    /// polynomial entries, no scalar part, no κ.
    pub fn wedge(&self, k: i64) -> Arc<GradedOperator<C>> {
        if let Some(hit) = self.wedges.lock().unwrap().get(&k) {
            return hit.clone();
        }
        let n = self.space.dim();
        let lambda = HalfInt::int(self.space.lambda);
        let mut acc = GradedOperator::<C>::zero(n, n, -2 * k);
        for m in self.space.sector.modes_through(lambda) {
            let nn = HalfInt::int(k) - m;
            if nn.abs() > lambda {
                continue;
            }
            if m.doubled() == 0 && nn.doubled() == 0 {
                // :ψ₀ψ₀: vanishes; its contraction is the +1 in the scalar part
                continue;
            }
            let coeff = C::monomial(&self.ctx, &QQ::from(num_bigint::BigInt::from(1)), 2 * m.doubled() - 2 * k);
            // normal order: an annihilator trailing a creator is swapped
            // (no contraction survives in the k-sum; the sign is the cost)
            let term = if m.doubled() > 0 && nn.doubled() < 0 {
                self.psi(nn).compose(&self.psi(m)).scale(&coeff.neg())
            } else {
                self.psi(m).compose(&self.psi(nn)).scale(&coeff)
            };
            acc = acc.add(&term);
        }
        let acc = Arc::new(acc);
        self.wedges.lock().unwrap().insert(k, acc.clone());
        acc
    }

    /// κ-stripped mode: wedge part plus, for k = 0, the anomaly scalar
    /// expanded through the bank's window.
    pub fn t_hat(&self, k: i64) -> Arc<GradedOperator<C>> {
        let w = self.wedge(k);
        if k != 0 {
            return w;
        }
        let scalar = t0_scalar(self.sector()).series(self.series_cap());
        let s = scalar_op(&self.ctx, self.space.dim(), &C::from_exact(&self.ctx, &scalar));
        Arc::new(w.add(&s))
    }

    /// The full mode T_k.
    pub fn t(&self, k: i64) -> Arc<GradedOperator<C>> {
        if let Some(hit) = self.currents.lock().unwrap().get(&k) {
            return hit.clone();
        }
        let out = Arc::new(self.t_hat(k).scale(&self.kappa()));
        self.currents.lock().unwrap().insert(k, out.clone());
        out
    }

    /// Cached composition wedge(a)∘wedge(b).  Quadratic sums over the mode
    /// grid reuse these across every (m, n) pair, and because wedge entries
    /// are exact polynomials the products stay cheap; the long series (κ²,
    /// structure coefficients, anomaly) are multiplied in only once per term
    /// by the caller.
    pub fn wedge_product(&self, a: i64, b: i64) -> Arc<GradedOperator<C>> {
        if let Some(hit) = self.wedge_products.lock().unwrap().get(&(a, b)) {
            return hit.clone();
        }
        let out = Arc::new(self.wedge(a).compose(&self.wedge(b)));
        self.wedge_products.lock().unwrap().insert((a, b), out.clone());
        out
    }

    /// κ² in the bank's coefficient type (any κ perturbation included).
    pub fn kappa_sq(&self) -> C {
        let k = self.kappa();
        k.mul(&k)
    }

    /// The anomaly series s in the bank's coefficient type, so that
    /// T̂₀ = wedge(0) + s·Id.
    pub fn scalar_c(&self) -> C {
        C::from_exact(&self.ctx, &t0_scalar(self.sector()).series(self.series_cap()))
    }

    /// Store key identifying mode k's bilinear part under this bank's full
    /// build configuration.
    pub fn disk_key(&self, k: i64) -> CacheKey {
        CacheKey {
            kind: "wedge".into(),
            sector: self.sector().to_string(),
            lambda: self.space.lambda,
            mode2: 2 * k,
            backend: C::backend_tag(&self.ctx),
            x_cap: self.x_cap,
        }
    }

    /// Whether this bank may exchange wedges with a disk cache: exact
    /// coefficients only (numeric values don't round-trip losslessly, and a
    /// warm numeric run must not differ from a cold one in the last bit),
    /// and never with a fault injected into the contraction.
    fn disk_eligible(&self) -> bool {
        self.contraction_bump.is_none() && C::one(&self.ctx).as_exact().is_some()
    }

    /// Seed the in-memory wedge table from a disk cache. Returns how many
    /// modes were loaded; quietly loads nothing when the bank is not
    /// disk-eligible, but version mismatches and corrupt files are errors.
    pub fn preload_wedges(
        &self,
        cache: &OperatorCache,
        ks: impl IntoIterator<Item = i64>,
    ) -> Result<usize, CacheError> {
        if !self.disk_eligible() {
            return Ok(0);
        }
        let mut loaded = 0;
        for k in ks {
            if self.wedges.lock().unwrap().contains_key(&k) {
                continue;
            }
            if let Some(stored) = cache.load(&self.disk_key(k))? {
                let op = stored.map(|v| C::from_exact(&self.ctx, v));
                self.wedges.lock().unwrap().insert(k, Arc::new(op));
                loaded += 1;
            }
        }
        Ok(loaded)
    }

    /// Store every wedge currently held in memory. Returns how many files
    /// were written (no-op for banks that are not disk-eligible).
    pub fn persist_wedges(&self, cache: &OperatorCache) -> Result<usize, CacheError> {
        if !self.disk_eligible() {
            return Ok(0);
        }
        let snapshot: Vec<(i64, Arc<GradedOperator<C>>)> = self
            .wedges
            .lock()
            .unwrap()
            .iter()
            .map(|(k, op)| (*k, op.clone()))
            .collect();
        let mut written = 0;
        for (k, op) in snapshot {
            let exact = op.map(|v| {
                v.as_exact()
                    .expect("disk-eligible banks hold exact coefficients")
                    .clone()
            });
            cache.store(&self.disk_key(k), &exact)?;
            written += 1;
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockState;

    fn hm(d: i64) -> HalfInt {
        HalfInt::from_doubled(d)
    }

    fn bank(sector: Sector, lambda: i64, x_cap: i64) -> CurrentBank<XLaurent> {
        CurrentBank::new((), Arc::new(FockSpace::enumerate(sector, lambda)), x_cap)
    }

    #[test]
    fn kappa_inverts_its_defining_product() {
        // κ · x²(1+x²) = 1 − x⁶
        let k = kappa_series(40);
        let lhs = k.mul(&XLaurent::monomial_i(1, 2).add(&XLaurent::monomial_i(1, 4)));
        let rhs = XLaurent::one().sub(&XLaurent::monomial_i(1, 6));
        assert!(lhs.sub(&rhs).is_zero_through(38));
    }

    #[test]
    fn anomaly_times_kappa_gives_the_closed_eigenvalues() {
        for sector in [Sector::NS, Sector::R] {
            let prod = kappa_series(60).mul(&t0_scalar(sector).series(60));
            let resid = prod.sub(&vacuum_eigenvalue(sector));
            assert!(resid.is_zero_through(50), "{sector}: {resid}");
        }
    }

    #[test]
    fn anomaly_evaluates_exactly_at_rational_points() {
        // C₀ at x=1/2, antiperiodic: (1/8)/(1−1/64) + (1/2)/(1−1/4) = 8/63 + 2/3
        let v = t0_scalar(Sector::NS).eval(&XLaurent::q(1, 2));
        assert_eq!(v, XLaurent::q(8, 63) + XLaurent::q(2, 3));
        // and κ·C₀ equals the eigenvalue closed form at the same point
        let kappa_at = XLaurent::q(1, 2); // x0
        let k_num = XLaurent::q_one() - crate::coeff::xlaurent::pow_q(&kappa_at, 6);
        let k_den = crate::coeff::xlaurent::pow_q(&kappa_at, 2)
            * (XLaurent::q_one() + crate::coeff::xlaurent::pow_q(&kappa_at, 2));
        assert_eq!(k_num / k_den * v, XLaurent::q(5, 2)); // 1/2 + 2
    }

    #[test]
    fn vacuum_is_annihilated_by_positive_modes() {
        for sector in [Sector::NS, Sector::R] {
            let b = bank(sector, 5, 30);
            let vac = b.space.index_of(&FockState::vacuum()).unwrap();
            for k in 1..=4 {
                assert!(b.t(k).column(vac).is_empty(), "{sector} k={k}");
            }
        }
    }

    #[test]
    fn vacuum_eigenvalue_appears_on_the_diagonal() {
        for sector in [Sector::NS, Sector::R] {
            let b = bank(sector, 4, 40);
            let vac = b.space.index_of(&FockState::vacuum()).unwrap();
            let col = b.t(0).column(vac).to_vec();
            assert_eq!(col.len(), 1, "{sector}: T₀|vac⟩ must be a multiple of |vac⟩");
            let (row, val) = &col[0];
            assert_eq!(*row, vac);
            assert!(val.eq_through(&vacuum_eigenvalue(sector), 30), "{sector}: {val}");
        }
    }

    #[test]
    fn wedge_entry_matches_a_hand_computation() {
        // T̂₁ on |3/2⟩: only the contractions through the vacuum survive,
        // leaving (x⁻⁴ − x⁴)(x³ + x⁻³) |1/2⟩
        let b = bank(Sector::NS, 3, 20);
        let from = b.space.index_of(&FockState::from_modes(vec![hm(3)])).unwrap();
        let to = b.space.index_of(&FockState::from_modes(vec![hm(1)])).unwrap();
        let w = b.wedge(1);
        let expect = XLaurent::monomial_i(1, -4)
            .sub(&XLaurent::monomial_i(1, 4))
            .mul(&XLaurent::monomial_i(1, 3).add(&XLaurent::monomial_i(1, -3)));
        assert_eq!(w.entry(to, from), Some(&expect));
        assert_eq!(w.column(from).len(), 1);
    }

    #[test]
    fn modes_are_level_homogeneous() {
        let b = bank(Sector::R, 4, 20);
        for k in [-2i64, -1, 0, 1, 3] {
            let t = b.t(k);
            assert_eq!(t.degree2, -2 * k);
            for j in 0..b.space.dim() {
                for (i, _) in t.column(j) {
                    let li = b.space.state(*i).level().doubled();
                    let lj = b.space.state(j).level().doubled();
                    assert_eq!(li, lj - 2 * k, "entry ({i},{j}) of T_{k}");
                }
            }
        }
    }

    #[test]
    fn protected_columns_are_stable_under_cutoff_growth() {
        for sector in [Sector::NS, Sector::R] {
            for k in [-2i64, -1, 0, 1, 2] {
                let small = bank(sector, 4, 24);
                let large = bank(sector, 6, 24);
                let ts = small.t(k);
                let tl = large.t(k);
                for j in 0..small.space.dim() {
                    let state = small.space.state(j);
                    if state.level().doubled() + 2 * (-k).max(0) > 2 * small.space.lambda {
                        continue;
                    }
                    let jl = large.space.index_of(state).unwrap();
                    let col_small: Vec<(FockState, XLaurent)> = ts
                        .column(j)
                        .iter()
                        .map(|(i, c)| (small.space.state(*i).clone(), c.clone()))
                        .collect();
                    let col_large: Vec<(FockState, XLaurent)> = tl
                        .column(jl)
                        .iter()
                        .map(|(i, c)| (large.space.state(*i).clone(), c.clone()))
                        .collect();
                    assert_eq!(col_small, col_large, "{sector} k={k} column {state}");
                }
            }
        }
    }

    #[test]
    fn fault_injection_changes_the_matrices() {
        let clean = bank(Sector::NS, 3, 20);
        let bumped = bank(Sector::NS, 3, 20).with_kappa_bump(10);
        assert_ne!(clean.t(0).as_ref(), bumped.t(0).as_ref());
        assert_eq!(clean.t_hat(2).as_ref(), bumped.t_hat(2).as_ref());

        let contr = bank(Sector::NS, 3, 20).with_contraction_bump(hm(3), 10);
        assert_ne!(clean.wedge(1).as_ref(), contr.wedge(1).as_ref());
        // the pair 1/2 never contracts inside the k = 1 sum, so bumping it
        // must leave that mode alone while changing T̂₀
        let near_miss = bank(Sector::NS, 3, 20).with_contraction_bump(hm(1), 10);
        assert_eq!(clean.wedge(1).as_ref(), near_miss.wedge(1).as_ref());
        assert_ne!(clean.wedge(0).as_ref(), near_miss.wedge(0).as_ref());
    }
}
