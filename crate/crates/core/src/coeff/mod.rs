//! Exact arithmetic in ℚ(ζ)(v), ζ a primitive `2N`-th root of unity and
//! `q = v²`.

mod cyclo;
mod elem;
mod laurent;
mod qnum;
mod rat;

pub use cyclo::{cyclotomic_poly, CycloCtx, CycloField, CycloNum};
pub use elem::CoeffElem;
pub use laurent::Laurent;
pub use qnum::{gauss_binom, gauss_binom_v, q_integer, qint, qint_v};
pub use rat::Rat;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("binomial index out of range: n={n}, r={r}")]
    IndexOutOfRange { n: i64, r: i64 },
}

/// Arithmetic shared by the coefficient types that series and polynomials
/// are generic over.
pub trait Coeff: Clone + PartialEq + std::fmt::Display {
    fn ctx(&self) -> &CycloCtx;
    fn zero_in(ctx: &CycloCtx) -> Self;
    fn one_in(ctx: &CycloCtx) -> Self;
    fn from_laurent(p: Laurent) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn scale_rat(&self, r: &Rat) -> Self;
    /// Multiplicative inverse if it exists in this ring.
    fn try_inv(&self) -> Option<Self>;
    /// Serialized in the `z`/`v` string form.
    fn to_elem(&self) -> CoeffElem;
}

impl Coeff for Laurent {
    fn ctx(&self) -> &CycloCtx {
        Laurent::ctx(self)
    }
    fn zero_in(ctx: &CycloCtx) -> Self {
        Laurent::zero(ctx)
    }
    fn one_in(ctx: &CycloCtx) -> Self {
        Laurent::one(ctx)
    }
    fn from_laurent(p: Laurent) -> Self {
        p
    }
    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Laurent::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Laurent::sub(self, rhs)
    }
    fn neg(&self) -> Self {
        Laurent::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Laurent::mul(self, rhs)
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        Laurent::scale_rat(self, r)
    }
    fn try_inv(&self) -> Option<Self> {
        self.unit_inverse()
    }
    fn to_elem(&self) -> CoeffElem {
        CoeffElem::from_laurent(self.clone())
    }
}

impl Coeff for CoeffElem {
    fn ctx(&self) -> &CycloCtx {
        CoeffElem::ctx(self)
    }
    fn zero_in(ctx: &CycloCtx) -> Self {
        CoeffElem::zero(ctx)
    }
    fn one_in(ctx: &CycloCtx) -> Self {
        CoeffElem::one(ctx)
    }
    fn from_laurent(p: Laurent) -> Self {
        CoeffElem::from_laurent(p)
    }
    fn is_zero(&self) -> bool {
        CoeffElem::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        CoeffElem::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        CoeffElem::sub(self, rhs)
    }
    fn neg(&self) -> Self {
        CoeffElem::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        CoeffElem::mul(self, rhs)
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        CoeffElem::scale_rat(self, r)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn to_elem(&self) -> CoeffElem {
        self.clone()
    }
}
