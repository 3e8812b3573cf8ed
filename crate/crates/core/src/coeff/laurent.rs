//! Laurent polynomials in `v` with coefficients in ℚ(ζ).
//!
//! This ring is where all vertex-operator matrix elements live, so the
//! representation is tuned for many small products: terms are kept sorted by
//! exponent in a flat vector.

use std::fmt;

use super::cyclo::{write_cyc, Cyc, CycloCtx, CycloField, CycloNum};
use super::rat::Rat;

#[derive(Clone)]
pub struct Laurent {
    ctx: CycloCtx,
    /// Strictly increasing exponents, nonzero coefficients.
    terms: Vec<(i32, Cyc)>,
}

impl Laurent {
    pub fn zero(ctx: &CycloCtx) -> Self {
        Laurent {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ctx: &CycloCtx) -> Self {
        Self::from_rat(ctx, Rat::ONE)
    }

    pub fn from_rat(ctx: &CycloCtx, r: Rat) -> Self {
        Self::monomial_rat(ctx, r, 0)
    }

    pub fn from_int(ctx: &CycloCtx, n: i64) -> Self {
        Self::from_rat(ctx, Rat::from_int(n))
    }

    /// `r · v^e`
    pub fn monomial_rat(ctx: &CycloCtx, r: Rat, e: i32) -> Self {
        if r.is_zero() {
            return Self::zero(ctx);
        }
        Laurent {
            ctx: ctx.clone(),
            terms: vec![(e, ctx.from_rat(r))],
        }
    }

    /// `c · v^e`
    pub fn monomial(c: &CycloNum, e: i32) -> Self {
        let ctx = c.ctx();
        if c.is_zero() {
            return Self::zero(ctx);
        }
        Laurent {
            ctx: ctx.clone(),
            terms: vec![(e, c.raw().clone())],
        }
    }

    /// `v^e`
    pub fn v_pow(ctx: &CycloCtx, e: i32) -> Self {
        Self::monomial_rat(ctx, Rat::ONE, e)
    }

    /// `q^e = v^{2e}`
    pub fn q_pow(ctx: &CycloCtx, e: i32) -> Self {
        Self::v_pow(ctx, 2 * e)
    }

    /// `ζ^k v^e`
    pub fn zeta_v(ctx: &CycloCtx, k: i64, e: i32) -> Self {
        Laurent {
            ctx: ctx.clone(),
            terms: vec![(e, ctx.zeta_pow(k))],
        }
    }

    pub fn from_cyclo(c: &CycloNum) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from `(exponent, coefficient)` pairs in any order.
    pub fn from_terms(ctx: &CycloCtx, terms: impl IntoIterator<Item = (i32, CycloNum)>) -> Self {
        let mut acc = Self::zero(ctx);
        for (e, c) in terms {
            acc.add_assign(&Self::monomial(&c, e));
        }
        acc
    }

    pub fn ctx(&self) -> &CycloCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].0 == 0
            && CycloField::as_rat(&self.terms[0].1).is_some_and(Rat::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, CycloNum)> + '_ {
        self.terms
            .iter()
            .map(|(e, c)| (*e, CycloNum::from_raw(&self.ctx, c.clone())))
    }

    pub fn coeff(&self, e: i32) -> CycloNum {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => CycloNum::from_raw(&self.ctx, self.terms[i].1.clone()),
            Err(_) => CycloNum::zero(&self.ctx),
        }
    }

    /// Leading (highest exponent) coefficient.
    pub fn lead(&self) -> Option<CycloNum> {
        self.terms
            .last()
            .map(|(_, c)| CycloNum::from_raw(&self.ctx, c.clone()))
    }

    fn merge(&self, rhs: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                let c = if negate {
                    CycloField::neg(&b[j].1)
                } else {
                    b[j].1.clone()
                };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let mut c = a[i].1.clone();
                if negate {
                    CycloField::sub_assign(&mut c, &b[j].1);
                } else {
                    CycloField::add_assign(&mut c, &b[j].1);
                }
                if !CycloField::is_zero(&c) {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Laurent {
            ctx: self.ctx.clone(),
            terms: out,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        self.merge(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        self.merge(rhs, true)
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        if rhs.is_zero() {
            return;
        }
        *self = self.add(rhs);
    }

    pub fn sub_assign(&mut self, rhs: &Self) {
        if rhs.is_zero() {
            return;
        }
        *self = self.sub(rhs);
    }

    pub fn neg(&self) -> Self {
        Laurent {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, CycloField::neg(c)))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.ctx);
        }
        if rhs.terms.len() == 1 {
            return self.mul_term(rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_term(self.terms[0].0, &self.terms[0].1);
        }
        let lo = self.terms[0].0 + rhs.terms[0].0;
        let hi = self.terms.last().unwrap().0 + rhs.terms.last().unwrap().0;
        let mut dense: Vec<Option<Cyc>> = vec![None; (hi - lo + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let p = self.ctx.mul(ca, cb);
                let slot = &mut dense[(ea + eb - lo) as usize];
                match slot {
                    Some(acc) => CycloField::add_assign(acc, &p),
                    None => *slot = Some(p),
                }
            }
        }
        let terms = dense
            .into_iter()
            .enumerate()
            .filter_map(|(k, c)| {
                c.filter(|c| !CycloField::is_zero(c))
                    .map(|c| (lo + k as i32, c))
            })
            .collect();
        Laurent {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    fn mul_term(&self, e: i32, c: &Cyc) -> Self {
        let rational = CycloField::as_rat(c).cloned();
        let terms = self
            .terms
            .iter()
            .map(|(ea, ca)| {
                let p = match &rational {
                    Some(r) if r.is_one() => ca.clone(),
                    Some(r) => CycloField::scale(ca, r),
                    None => self.ctx.mul(ca, c),
                };
                (ea + e, p)
            })
            .collect();
        Laurent {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// `self · ζ^k v^e`, cheaper than a general product.
    pub fn mul_zeta_v(&self, k: i64, e: i32) -> Self {
        Laurent {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(ea, ca)| (ea + e, self.ctx.mul_zeta(ca, k)))
                .collect(),
        }
    }

    pub fn shift(&self, e: i32) -> Self {
        Laurent {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(ea, c)| (ea + e, c.clone()))
                .collect(),
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero(&self.ctx);
        }
        Laurent {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, CycloField::scale(c, r)))
                .collect(),
        }
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        self.mul_term(0, c.raw())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `v → v^k` for a nonzero integer `k`.
    pub fn subs_v_pow(&self, k: i32) -> Self {
        assert!(k != 0);
        let mut terms: Vec<(i32, Cyc)> =
            self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect();
        if k < 0 {
            terms.reverse();
        }
        Laurent {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// If `self = c · v^e` with `c ≠ 0`, returns its inverse.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = &self.terms[0];
        let inv = self.ctx.inv(c)?;
        Some(Laurent {
            ctx: self.ctx.clone(),
            terms: vec![(-e, inv)],
        })
    }

    /// Exact quotient `self / rhs` in the Laurent ring, if it exists.
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        if let Some(u) = rhs.unit_inverse() {
            return Some(self.mul(&u));
        }
        // long division on normalized polynomials
        let (shift_a, pa) = self.to_poly();
        let (shift_b, pb) = rhs.to_poly();
        let (q, r) = poly_divmod(&self.ctx, &pa, &pb);
        if r.iter().any(|c| !CycloField::is_zero(c)) {
            return None;
        }
        Some(Self::from_poly(&self.ctx, &q, shift_a - shift_b))
    }

    /// `(shift, coefficients)` with `self = v^shift · Σ c_k v^k`, `c_0 ≠ 0`.
    pub(crate) fn to_poly(&self) -> (i32, Vec<Cyc>) {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let mut out = vec![self.ctx.zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            out[(e - lo) as usize] = c.clone();
        }
        (lo, out)
    }

    pub(crate) fn from_poly(ctx: &CycloCtx, p: &[Cyc], shift: i32) -> Self {
        let terms = p
            .iter()
            .enumerate()
            .filter(|(_, c)| !CycloField::is_zero(c))
            .map(|(k, c)| (k as i32 + shift, c.clone()))
            .collect();
        Laurent {
            ctx: ctx.clone(),
            terms,
        }
    }
}

/// Polynomial division over ℚ(ζ): returns `(quotient, remainder)`.
pub(crate) fn poly_divmod(ctx: &CycloCtx, a: &[Cyc], b: &[Cyc]) -> (Vec<Cyc>, Vec<Cyc>) {
    let mut b = b.to_vec();
    while b.len() > 1 && CycloField::is_zero(b.last().unwrap()) {
        b.pop();
    }
    let mut rem = a.to_vec();
    while rem.len() > 1 && CycloField::is_zero(rem.last().unwrap()) {
        rem.pop();
    }
    let db = b.len();
    if rem.len() < db {
        return (vec![ctx.zero()], rem);
    }
    let lead_inv = ctx.inv(b.last().unwrap()).expect("nonzero divisor");
    let mut quo = vec![ctx.zero(); rem.len() - db + 1];
    for i in (0..quo.len()).rev() {
        let top = &rem[i + db - 1];
        if CycloField::is_zero(top) {
            continue;
        }
        let c = ctx.mul(top, &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            let p = ctx.mul(&c, bj);
            CycloField::sub_assign(&mut rem[i + j], &p);
        }
        quo[i] = c;
    }
    rem.truncate(db - 1);
    if rem.is_empty() {
        rem.push(ctx.zero());
    }
    (quo, rem)
}

impl PartialEq for Laurent {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Laurent {}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_laurent(f, &self.terms)
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Writes terms in descending `v` power, e.g. `v^2+(z+1)*v-3/2*v^-1`.
pub(crate) fn write_laurent(f: &mut impl fmt::Write, terms: &[(i32, Cyc)]) -> fmt::Result {
    if terms.is_empty() {
        return f.write_char('0');
    }
    for (idx, (e, c)) in terms.iter().rev().enumerate() {
        let rat = CycloField::as_rat(c);
        let mut body = String::new();
        let neg;
        match rat {
            Some(r) => {
                neg = r.is_negative();
                let abs = if neg { -r } else { r.clone() };
                if *e == 0 || !abs.is_one() {
                    body.push_str(&abs.to_string());
                }
            }
            None if c.iter().filter(|r| !r.is_zero()).count() == 1 => {
                // single ζ-power: sign pulled out, no parentheses
                neg = c.iter().any(Rat::is_negative);
                let abs: Cyc = c
                    .iter()
                    .map(|r| if r.is_negative() { -r } else { r.clone() })
                    .collect();
                write_cyc(&mut body, &abs)?;
            }
            None => {
                neg = false;
                body.push('(');
                write_cyc(&mut body, c)?;
                body.push(')');
            }
        }
        if idx == 0 {
            if neg {
                f.write_char('-')?;
            }
        } else {
            f.write_char(if neg { '-' } else { '+' })?;
        }
        f.write_str(&body)?;
        if *e != 0 {
            if !body.is_empty() {
                f.write_char('*')?;
            }
            if *e == 1 {
                f.write_char('v')?;
            } else {
                write!(f, "v^{e}")?;
            }
        }
    }
    Ok(())
}
