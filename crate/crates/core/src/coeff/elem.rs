//! Elements of ℚ(ζ)(v) as reduced fractions.

use std::fmt;

use super::cyclo::{Cyc, CycloCtx, CycloField, CycloNum};
use super::laurent::{poly_divmod, Laurent};
use super::rat::Rat;
use super::CoeffError;

/// A rational function `num / den` in `v` over ℚ(ζ).
///
/// Canonical form: `num` and `den` are polynomials in `v` (no negative
/// powers) without common factor, and `den` is monic. Two elements are equal
/// iff their canonical forms are identical.
#[derive(Clone, PartialEq, Eq)]
pub struct CoeffElem {
    num: Laurent,
    den: Laurent,
}

fn trim(ctx: &CycloCtx, mut p: Vec<Cyc>) -> Vec<Cyc> {
    while p.len() > 1 && CycloField::is_zero(p.last().unwrap()) {
        p.pop();
    }
    if p.is_empty() {
        p.push(ctx.zero());
    }
    p
}

fn is_zero_poly(p: &[Cyc]) -> bool {
    p.iter().all(CycloField::is_zero)
}

fn make_monic(ctx: &CycloCtx, p: &[Cyc]) -> Vec<Cyc> {
    let inv = ctx.inv(p.last().unwrap()).expect("nonzero polynomial");
    p.iter().map(|c| ctx.mul(c, &inv)).collect()
}

/// Monic gcd over ℚ(ζ)[v].
fn poly_gcd(ctx: &CycloCtx, a: &[Cyc], b: &[Cyc]) -> Vec<Cyc> {
    let mut a = trim(ctx, a.to_vec());
    let mut b = trim(ctx, b.to_vec());
    while !is_zero_poly(&b) {
        let (_, r) = poly_divmod(ctx, &a, &b);
        a = b;
        b = trim(ctx, r);
    }
    make_monic(ctx, &a)
}

impl CoeffElem {
    pub fn zero(ctx: &CycloCtx) -> Self {
        CoeffElem {
            num: Laurent::zero(ctx),
            den: Laurent::one(ctx),
        }
    }

    pub fn one(ctx: &CycloCtx) -> Self {
        Self::from_rat(ctx, Rat::ONE)
    }

    pub fn from_rat(ctx: &CycloCtx, r: Rat) -> Self {
        CoeffElem {
            num: Laurent::from_rat(ctx, r),
            den: Laurent::one(ctx),
        }
    }

    pub fn from_int(ctx: &CycloCtx, n: i64) -> Self {
        Self::from_rat(ctx, Rat::from_int(n))
    }

    pub fn from_cyclo(c: &CycloNum) -> Self {
        Self::from_laurent(Laurent::from_cyclo(c))
    }

    /// `v^e`
    pub fn v_pow(ctx: &CycloCtx, e: i32) -> Self {
        Self::from_laurent(Laurent::v_pow(ctx, e))
    }

    /// `q^e = v^{2e}`
    pub fn q_pow(ctx: &CycloCtx, e: i32) -> Self {
        Self::v_pow(ctx, 2 * e)
    }

    /// `ζ^k`
    pub fn zeta(ctx: &CycloCtx, k: i64) -> Self {
        Self::from_cyclo(&CycloNum::zeta(ctx, k))
    }

    pub fn from_laurent(p: Laurent) -> Self {
        let ctx = p.ctx().clone();
        match p.min_exp() {
            None => Self::zero(&ctx),
            Some(lo) if lo >= 0 => CoeffElem {
                num: p,
                den: Laurent::one(&ctx),
            },
            Some(lo) => CoeffElem {
                num: p.shift(-lo),
                den: Laurent::v_pow(&ctx, -lo),
            },
        }
    }

    /// Canonical form of `num / den`.
    pub fn from_fraction(num: Laurent, den: Laurent) -> Result<Self, CoeffError> {
        let ctx = num.ctx().clone();
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(&ctx));
        }
        let (sa, pa) = num.to_poly();
        let (sb, pb) = den.to_poly();
        let (mut pa, mut pb) = (pa, pb);
        if pb.len() > 1 && pa.len() > 1 {
            let g = poly_gcd(&ctx, &pa, &pb);
            if g.len() > 1 {
                pa = poly_divmod(&ctx, &pa, &g).0;
                pb = poly_divmod(&ctx, &pb, &g).0;
            }
        }
        let pb = trim(&ctx, pb);
        let lead_inv = ctx.inv(pb.last().unwrap()).expect("nonzero denominator");
        let pa: Vec<Cyc> = pa.iter().map(|c| ctx.mul(c, &lead_inv)).collect();
        let pb: Vec<Cyc> = pb.iter().map(|c| ctx.mul(c, &lead_inv)).collect();
        let e = sa - sb;
        let (ns, ds) = if e >= 0 { (e, 0) } else { (0, -e) };
        Ok(CoeffElem {
            num: Laurent::from_poly(&ctx, &pa, ns),
            den: Laurent::from_poly(&ctx, &pb, ds),
        })
    }

    pub fn ctx(&self) -> &CycloCtx {
        self.num.ctx()
    }

    pub fn num(&self) -> &Laurent {
        &self.num
    }

    pub fn den(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a Laurent polynomial, when the denominator is a power of `v`.
    pub fn as_laurent(&self) -> Option<Laurent> {
        if self.den.len() == 1 {
            let e = self.den.min_exp().unwrap();
            Some(self.num.shift(-e))
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::from_fraction(self.num.add(&rhs.num), self.den.clone()).unwrap();
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Self::from_fraction(num, self.den.mul(&rhs.den)).unwrap()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        CoeffElem {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.ctx());
        }
        Self::from_fraction(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).unwrap()
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        Self::from_fraction(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, CoeffError> {
        if rhs.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Self::from_fraction(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn pow(&self, e: i32) -> Result<Self, CoeffError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(CoeffElem {
            num: base.num.pow(e.unsigned_abs()),
            den: base.den.pow(e.unsigned_abs()),
        })
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero(self.ctx());
        }
        CoeffElem {
            num: self.num.scale_rat(r),
            den: self.den.clone(),
        }
    }

    /// Substitutes `v → v^k` (k ≠ 0).
    pub fn subs_v_pow(&self, k: i32) -> Self {
        Self::from_fraction(self.num.subs_v_pow(k), self.den.subs_v_pow(k)).unwrap()
    }
}

impl fmt::Display for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn string_form() {
        let ctx = CycloField::new(2);
        let x = CoeffElem::from_laurent(Laurent::v_pow(&ctx, 1).add(&Laurent::v_pow(&ctx, -1)));
        assert_eq!(x.to_string(), "(v^2+1)/(v)");
        let q = CoeffElem::q_pow(&ctx, 1);
        let one = CoeffElem::one(&ctx);
        let r = q.mul(&q).sub(&one).div(&q.sub(&one)).unwrap();
        assert_eq!(r.to_string(), "v^2+1");
    }

    #[test]
    fn zeta_order() {
        let ctx = CycloField::new(2);
        let z2 = CoeffElem::zeta(&ctx, 2);
        assert!(z2.pow(2).unwrap().is_one());
        assert!(!z2.is_one());
    }

    #[test]
    fn division_by_zero() {
        let ctx = CycloField::new(1);
        let one = CoeffElem::one(&ctx);
        assert_eq!(
            one.div(&CoeffElem::zero(&ctx)),
            Err(CoeffError::DivisionByZero)
        );
        assert_eq!(CoeffElem::zero(&ctx).inv(), Err(CoeffError::DivisionByZero));
    }

    #[test]
    fn gcd_cancellation_with_cyclotomic_roots() {
        // (v^2 - ζ^2) / (v - ζ) = v + ζ over ℚ(ζ_6)
        let ctx = CycloField::new(3);
        let v = Laurent::v_pow(&ctx, 1);
        let z = Laurent::zeta_v(&ctx, 1, 0);
        let num = v.mul(&v).sub(&z.mul(&z));
        let den = v.sub(&z);
        let r = CoeffElem::from_fraction(num, den).unwrap();
        assert_eq!(r, CoeffElem::from_laurent(v.add(&z)));
    }

    fn arb_laurent(ctx: CycloCtx) -> impl Strategy<Value = Laurent> {
        let phi = ctx.phi();
        proptest::collection::vec((-3i32..4, -4i64..5, 0..phi as i64), 1..4).prop_map(move |ts| {
            let mut acc = Laurent::zero(&ctx);
            for (e, c, k) in ts {
                acc.add_assign(&Laurent::zeta_v(&ctx, k, e).scale_rat(&Rat::from_int(c)));
            }
            acc
        })
    }

    fn arb_elem() -> impl Strategy<Value = CoeffElem> {
        let ctx = CycloField::new(3);
        (arb_laurent(ctx.clone()), arb_laurent(ctx.clone()))
            .prop_filter_map("zero den", |(a, b)| CoeffElem::from_fraction(a, b).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn canonical_self_cancel(a in arb_elem()) {
            prop_assert!(a.sub(&a).is_zero());
            if !a.is_zero() {
                prop_assert!(a.div(&a).unwrap().is_one());
            }
        }
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_elem(), b in arb_elem(), c in arb_elem()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            if !b.is_zero() {
                prop_assert_eq!(a.div(&b).unwrap().mul(&b), a.clone());
            }
        }
    }
}
