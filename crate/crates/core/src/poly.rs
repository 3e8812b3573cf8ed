//! Sparse multivariate polynomials over a [`Coeff`] ring.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::coeff::{Coeff, CycloCtx, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("inexact polynomial division")]
    InexactDivision,
}

/// A polynomial in `nvars` commuting variables; exponents are integers so
/// Laurent monomials are representable, but division expects genuine
/// polynomials.
#[derive(Clone)]
pub struct MPoly<C: Coeff> {
    ctx: CycloCtx,
    nvars: usize,
    terms: BTreeMap<Vec<i32>, C>,
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(ctx: &CycloCtx, nvars: usize) -> Self {
        MPoly {
            ctx: ctx.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &CycloCtx, nvars: usize, c: C) -> Self {
        Self::monomial(ctx, vec![0; nvars], c)
    }

    pub fn one(ctx: &CycloCtx, nvars: usize) -> Self {
        Self::constant(ctx, nvars, C::one_in(ctx))
    }

    pub fn monomial(ctx: &CycloCtx, exps: Vec<i32>, c: C) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(ctx, nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// `c · x_k^e`
    pub fn var_term(ctx: &CycloCtx, nvars: usize, k: usize, e: i32, c: C) -> Self {
        let mut exps = vec![0; nvars];
        exps[k] = e;
        Self::monomial(ctx, exps, c)
    }

    pub fn ctx(&self) -> &CycloCtx {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i32]) -> C {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| C::zero_in(&self.ctx))
    }

    pub fn add_term(&mut self, exps: Vec<i32>, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(x) => {
                let s = x.add(c);
                if s.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(exps, c.clone());
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(&self.ctx, self.nvars);
        }
        self.map_coeffs(|c| c.mul(k))
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero(&self.ctx, self.nvars);
        }
        self.map_coeffs(|c| c.scale_rat(r))
    }

    fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        MPoly {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f(c))).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(&self.ctx, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, &ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(&self.ctx, self.nvars), |acc, _| acc.mul(self))
    }

    /// Renames variables: variable `k` of `self` becomes variable `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(&self.ctx, self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; self.nvars];
            for (k, &x) in e.iter().enumerate() {
                ne[perm[k]] = x;
            }
            out.add_term(ne, c);
        }
        out
    }

    /// Substitutes `x_k → 1`, keeping the variable slot.
    pub fn set_var_one(&self, k: usize) -> Self {
        let mut out = Self::zero(&self.ctx, self.nvars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[k] = 0;
            out.add_term(ne, c);
        }
        out
    }

    /// Substitutes `x_k → s · x_k` where `s` is a coefficient given per power.
    pub fn scale_var(&self, k: usize, s: impl Fn(i32) -> C) -> Self {
        MPoly {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.mul(&s(e[k]))))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Total degree in variable `k` (maximum exponent).
    pub fn degree_in(&self, k: usize) -> i32 {
        self.terms.keys().map(|e| e[k]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, k: usize) -> i32 {
        self.terms.keys().map(|e| e[k]).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> i32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn lead(&self) -> Option<(&Vec<i32>, &C)> {
        self.terms.iter().next_back()
    }

    /// Exact division by a polynomial whose lex-leading coefficient is a unit.
    pub fn div_exact(&self, d: &Self) -> Result<Self, PolyError> {
        let (de, dc) = d.lead().ok_or(PolyError::InexactDivision)?;
        let dinv = dc.try_inv().ok_or(PolyError::InexactDivision)?;
        let mut rem = self.clone();
        let mut quo = Self::zero(&self.ctx, self.nvars);
        while let Some((re, rc)) = rem.lead() {
            let qe: Vec<i32> = re.iter().zip(de).map(|(a, b)| a - b).collect();
            if qe.iter().any(|&x| x < 0) {
                return Err(PolyError::InexactDivision);
            }
            let qc = rc.mul(&dinv);
            let term = Self::monomial(&self.ctx, qe, qc);
            rem = rem.sub(&term.mul(d));
            quo = quo.add(&term);
        }
        Ok(quo)
    }
}

impl<C: Coeff> PartialEq for MPoly<C> {
    fn eq(&self, o: &Self) -> bool {
        self.nvars == o.nvars && self.terms == o.terms
    }
}

impl<C: Coeff> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "[{c}]")?;
            for (v, x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => write!(f, "*x{}", v + 1)?,
                    _ => write!(f, "*x{}^{}", v + 1, x)?,
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{CycloField, Laurent};

    #[test]
    fn division_round_trip() {
        let ctx = CycloField::new(1);
        let x = MPoly::var_term(&ctx, 2, 0, 1, Laurent::one(&ctx));
        let y = MPoly::var_term(&ctx, 2, 1, 1, Laurent::one(&ctx));
        let q2 = MPoly::constant(&ctx, 2, Laurent::q_pow(&ctx, 2));
        // (q^4 x^2 − y^2) / (q^2 x − y) = q^2 x + y
        let num = q2.mul(&q2).mul(&x).mul(&x).sub(&y.mul(&y));
        let den = q2.mul(&x).sub(&y);
        assert_eq!(num.div_exact(&den).unwrap(), q2.mul(&x).add(&y));
        assert_eq!(den.div_exact(&num), Err(PolyError::InexactDivision));
        assert_eq!(x.add(&y).div_exact(&x), Err(PolyError::InexactDivision));
    }

    #[test]
    fn permute_swaps_variables() {
        let ctx = CycloField::new(1);
        let p = MPoly::monomial(&ctx, vec![2, 1, 0], Laurent::one(&ctx));
        let s = p.permute(&[1, 0, 2]);
        assert_eq!(s.coeff(&[1, 2, 0]), Laurent::one(&ctx));
    }
}
