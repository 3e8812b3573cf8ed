//! Truncated multivariate formal series with half-integer exponents.
//!
//! Exponents are stored doubled. Every series carries a window (inclusive
//! doubled bounds per variable) and a region tag: the variables ordered from
//! "largest" to "smallest", which records the direction in which rational
//! functions were expanded. Terms outside the window are dropped on
//! construction and by every operation.

use std::collections::BTreeMap;
use std::fmt;

use super::DistError;
use crate::coeff::{Coeff, CycloCtx, Rat};

#[derive(Clone)]
pub struct TruncSeries<C: Coeff> {
    ctx: CycloCtx,
    vars: Vec<String>,
    region: Vec<String>,
    window: Vec<(i32, i32)>,
    terms: BTreeMap<Vec<i32>, C>,
}

impl<C: Coeff> TruncSeries<C> {
    pub fn new(ctx: &CycloCtx, vars: &[&str], window: Vec<(i32, i32)>, region: &[&str]) -> Self {
        assert_eq!(vars.len(), window.len());
        TruncSeries {
            ctx: ctx.clone(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            region: region.iter().map(|s| s.to_string()).collect(),
            window,
            terms: BTreeMap::new(),
        }
    }

    /// Same variables, window and region, no terms.
    pub fn empty_like(&self) -> Self {
        TruncSeries {
            ctx: self.ctx.clone(),
            vars: self.vars.clone(),
            region: self.region.clone(),
            window: self.window.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn ctx(&self) -> &CycloCtx {
        &self.ctx
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn region(&self) -> &[String] {
        &self.region
    }

    pub fn window(&self) -> &[(i32, i32)] {
        &self.window
    }

    pub fn in_window(&self, exps: &[i32]) -> bool {
        exps.iter()
            .zip(&self.window)
            .all(|(e, (lo, hi))| lo <= e && e <= hi)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at doubled exponents `exps`.
    pub fn coeff(&self, exps: &[i32]) -> C {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| C::zero_in(&self.ctx))
    }

    /// Coefficient at the integer exponent `n` of a one-variable series.
    pub fn coeff_at(&self, n: i32) -> C {
        self.coeff(&[2 * n])
    }

    /// Adds `c` at doubled exponents `exps`; silently absorbed outside the window.
    pub fn add_term(&mut self, exps: Vec<i32>, c: &C) {
        if c.is_zero() || !self.in_window(&exps) {
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

    fn compatible(&self, rhs: &Self) -> Result<(), DistError> {
        if self.vars != rhs.vars || self.window != rhs.window {
            return Err(DistError::WindowMismatch);
        }
        if self.region != rhs.region {
            return Err(DistError::RegionMismatch {
                left: self.region.join(">"),
                right: rhs.region.join(">"),
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, DistError> {
        self.compatible(rhs)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, DistError> {
        self.compatible(rhs)?;
        Ok(self.sub_unchecked(rhs))
    }

    /// Difference of two expansions of the same function in different
    /// regions; reserved for the identity checks.
    pub(crate) fn sub_across_regions(&self, rhs: &Self) -> Result<Self, DistError> {
        if self.vars != rhs.vars || self.window != rhs.window {
            return Err(DistError::WindowMismatch);
        }
        Ok(self.sub_unchecked(rhs))
    }

    fn sub_unchecked(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), &c.neg());
        }
        out
    }

    /// Product, truncated to the common window. Exact on the window when both
    /// factors are bounded on the same side in every variable.
    pub fn mul(&self, rhs: &Self) -> Result<Self, DistError> {
        self.compatible(rhs)?;
        let mut out = self.empty_like();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if out.in_window(&e) {
                    out.add_term(e, &ca.mul(cb));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.mul(k));
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.scale_rat(r));
        }
        out
    }

    /// Restricts to a smaller window.
    pub fn restrict(&self, window: Vec<(i32, i32)>) -> Self {
        let mut out = self.empty_like();
        out.window = window;
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl<C: Coeff> PartialEq for TruncSeries<C> {
    fn eq(&self, o: &Self) -> bool {
        self.vars == o.vars
            && self.region == o.region
            && self.window == o.window
            && self.terms == o.terms
    }
}

impl<C: Coeff> fmt::Display for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "[{c}]")?;
            for (v, x) in self.vars.iter().zip(e) {
                if *x == 0 {
                    continue;
                }
                if x % 2 == 0 {
                    write!(f, "*{v}^{}", x / 2)?;
                } else {
                    write!(f, "*{v}^({x}/2)")?;
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
