//! Coefficient backends.
//!
//! Everything above this module — q-series, Fock operators, relation
//! verifiers — is generic over a coefficient ring [`Coeff`].  Two backends
//! implement it:
//!
//! * [`XLaurent`]: exact truncated Laurent series in `x` over the rationals,
//!   with sound reliability windows.  All identity assertions run here.
//! * [`XFloat`]: dyadic arbitrary-precision values at a fixed rational
//!   `x0 ∈ (0,1)`, with certified error bounds.  Used for spectra and for
//!   cross-checking the exact pipeline numerically.

pub mod params;
pub mod xfloat;
pub mod xlaurent;

pub use params::Params;
pub use xfloat::{FloatCtx, XFloat};
pub use xlaurent::{parse_rational, Window, XLaurent, EXP_SENTINEL, QQ};
pub(crate) use xlaurent::{pow_q, rat_to_f64};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoeffError {
    #[error("value is not invertible")]
    NotInvertible,
    #[error("degenerate precision: {detail}")]
    DegeneratePrecision { detail: String },
    #[error("divergent product: {detail}")]
    DivergentProduct { detail: String },
}

/// Outcome of asking a coefficient "are you zero?" — exact values answer with
/// a window, numeric values with an interval bound.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroCheck {
    Exact { zero_on_window: bool, lo: i64, known_hi: i64 },
    Approx { abs_bound: f64 },
}

/// The coefficient-ring contract shared by both backends.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static {
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Structural zero test: safe to prune from sparse storage.
    fn is_zero(&self) -> bool;

    /// Reciprocal; `cap` bounds the knowledge window for the exact backend
    /// (an inverted polynomial is an infinite series) and is ignored by the
    /// numeric one.
    fn inv_to(&self, cap: i64) -> Result<Self, CoeffError>;

    fn check_zero(&self) -> ZeroCheck;

    /// The exact series behind this value, when there is one. The disk
    /// cache uses this to decide what may be persisted: only coefficients
    /// that round-trip losslessly qualify, so the numeric backend reports
    /// `None` and stays out of the cache entirely.
    fn as_exact(&self) -> Option<&XLaurent> {
        None
    }
}

/// Construction half of the contract: how to materialize monomials `q·x^e`
/// and embed exact series, given backend context.
pub trait CoeffBuild: Coeff {
    type Ctx: Clone + Send + Sync + std::fmt::Debug;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn monomial(ctx: &Self::Ctx, q: &QQ, e: i64) -> Self;
    fn from_exact(ctx: &Self::Ctx, v: &XLaurent) -> Self;

    /// How far infinite-product expansions should extend in `x`-degree so that
    /// truncation cannot pollute results below the requested bound `x_cap`.
    fn truncation_degree(ctx: &Self::Ctx, x_cap: i64) -> i64;

    /// Short tag identifying the backend + context in cache keys and reports.
    fn backend_tag(ctx: &Self::Ctx) -> String;
}

impl Coeff for XLaurent {
    fn add(&self, rhs: &Self) -> Self {
        XLaurent::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        XLaurent::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        XLaurent::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        XLaurent::neg(self)
    }
    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn inv_to(&self, cap: i64) -> Result<Self, CoeffError> {
        XLaurent::inv_to(self, cap)
    }
    fn check_zero(&self) -> ZeroCheck {
        let w = self.window();
        ZeroCheck::Exact { zero_on_window: self.is_zero_on_window(), lo: w.lo, known_hi: w.hi }
    }
    fn as_exact(&self) -> Option<&XLaurent> {
        Some(self)
    }
}

impl CoeffBuild for XLaurent {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        XLaurent::zero()
    }
    fn one(_: &()) -> Self {
        XLaurent::one()
    }
    fn monomial(_: &(), q: &QQ, e: i64) -> Self {
        XLaurent::monomial(q.clone(), e)
    }
    fn from_exact(_: &(), v: &XLaurent) -> Self {
        v.clone()
    }
    fn truncation_degree(_: &(), x_cap: i64) -> i64 {
        x_cap
    }
    fn backend_tag(_: &()) -> String {
        "exact".into()
    }
}

impl Coeff for XFloat {
    fn add(&self, rhs: &Self) -> Self {
        XFloat::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        XFloat::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        XFloat::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        XFloat::neg(self)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_value()
    }
    fn inv_to(&self, _cap: i64) -> Result<Self, CoeffError> {
        self.inv()
    }
    fn check_zero(&self) -> ZeroCheck {
        ZeroCheck::Approx { abs_bound: self.abs_bound() }
    }
}

impl CoeffBuild for XFloat {
    type Ctx = FloatCtx;

    fn zero(ctx: &FloatCtx) -> Self {
        XFloat::zero(ctx.prec)
    }
    fn one(ctx: &FloatCtx) -> Self {
        XFloat::from_rational(&QQ::from(num_bigint::BigInt::from(1)), ctx.prec)
    }
    fn monomial(ctx: &FloatCtx, q: &QQ, e: i64) -> Self {
        XFloat::monomial(ctx, q, e)
    }
    fn from_exact(ctx: &FloatCtx, v: &XLaurent) -> Self {
        XFloat::eval_series(ctx, v)
    }
    fn truncation_degree(ctx: &FloatCtx, x_cap: i64) -> i64 {
        // Extend products until dropped monomials are far below the working
        // precision at x0, rather than stopping at the symbolic window.
        use num_traits::ToPrimitive;
        let x0 = ctx.x0.to_f64().unwrap_or(0.5).clamp(1e-6, 1.0 - 1e-9);
        let need = ((ctx.prec as f64 + 64.0) * std::f64::consts::LN_2 / -x0.ln()).ceil() as i64;
        need.max(x_cap)
    }
    fn backend_tag(ctx: &FloatCtx) -> String {
        format!("float(x0={},prec={})", ctx.x0, ctx.prec)
    }
}
