//! The generalized Fock space: polynomials in the twisted Heisenberg creation
//! operators tensored with the group algebra of the root lattice.
//!
//! Creation variables are stored rescaled, `β_{ǐ,n} = α_{ǐ,−n}/[n]_q`, one per
//! orbit representative `ǐ` and level `n` divisible by `d_ǐ`. In this basis
//! every matrix element of the vertex operators lies in `ℚ(ζ)[v^{±1}]`.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::cartan::{CartanError, Cocycle, OrbitData, RootVec};
use crate::coeff::{qint, CycloCtx, CycloNum, Laurent, Rat};
use crate::relcat::kappa;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("Heisenberg mode 0 has no bracket constant")]
    ZeroMode,
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// A monomial `∏ β_{ǐ,n}^p`, kept as sorted `(rep, level, power)` triples
/// with 0-based representative indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HMonomial(SmallVec<[(u16, u32, u32); 4]>);

impl HMonomial {
    pub fn one() -> Self {
        HMonomial(SmallVec::new())
    }

    pub fn var(rep: usize, level: u32) -> Self {
        let mut m = SmallVec::new();
        m.push((rep as u16, level, 1));
        HMonomial(m)
    }

    pub fn factors(&self) -> impl Iterator<Item = (usize, u32, u32)> + '_ {
        self.0.iter().map(|&(r, l, p)| (r as usize, l, p))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Energy `Σ n·p`.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, l, p)| l * p).sum()
    }

    pub fn power(&self, rep: usize, level: u32) -> u32 {
        self.0
            .iter()
            .find(|&&(r, l, _)| r as usize == rep && l == level)
            .map_or(0, |&(_, _, p)| p)
    }

    /// Multiplies in `β_{rep,level}^p` (`p` may be negative as long as the
    /// result stays a monomial).
    pub fn with_power_delta(&self, rep: usize, level: u32, delta: i64) -> Self {
        let key = (rep as u16, level);
        let mut out = self.0.clone();
        match out.binary_search_by(|&(r, l, _)| (r, l).cmp(&key)) {
            Ok(pos) => {
                let p = out[pos].2 as i64 + delta;
                assert!(p >= 0, "negative power in monomial");
                if p == 0 {
                    out.remove(pos);
                } else {
                    out[pos].2 = p as u32;
                }
            }
            Err(pos) => {
                assert!(delta >= 0, "negative power in monomial");
                if delta > 0 {
                    out.insert(pos, (key.0, key.1, delta as u32));
                }
            }
        }
        HMonomial(out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (r, l, p) in rhs.factors() {
            out = out.with_power_delta(r, l, p as i64);
        }
        out
    }
}

impl fmt::Display for HMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (r, l, p)) in self.factors().enumerate() {
            if k > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "a[{},-{}]", r + 1, l)?;
            if p > 1 {
                write!(f, "^{p}")?;
            }
        }
        Ok(())
    }
}

/// A basis element `M ⊗ t_β`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElem {
    pub mono: HMonomial,
    pub lattice: RootVec,
}

impl BasisElem {
    pub fn new(mono: HMonomial, lattice: RootVec) -> Self {
        BasisElem { mono, lattice }
    }

    pub fn vacuum(nu: usize) -> Self {
        BasisElem::new(HMonomial::one(), RootVec::zero(nu))
    }
}

impl fmt::Display for BasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            write!(f, "{}", self.lattice)
        } else {
            write!(f, "{} * {}", self.mono, self.lattice)
        }
    }
}

/// A finite linear combination of basis elements with Laurent coefficients.
#[derive(Clone)]
pub struct FockVector {
    ctx: CycloCtx,
    terms: BTreeMap<BasisElem, Laurent>,
}

impl FockVector {
    pub fn zero(ctx: &CycloCtx) -> Self {
        FockVector {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(ctx: &CycloCtx, e: BasisElem) -> Self {
        let mut v = FockVector::zero(ctx);
        v.terms.insert(e, Laurent::one(ctx));
        v
    }

    pub fn ctx(&self) -> &CycloCtx {
        &self.ctx
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

    pub fn terms(&self) -> impl Iterator<Item = (&BasisElem, &Laurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &BasisElem) -> Laurent {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| Laurent::zero(&self.ctx))
    }

    pub fn add_term(&mut self, e: BasisElem, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                x.add_assign(c);
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, rhs: &FockVector, k: &Laurent) {
        if k.is_zero() {
            return;
        }
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), &c.mul(k));
        }
    }

    pub fn add(&self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), &c.neg());
        }
        out
    }

    pub fn scale(&self, k: &Laurent) -> FockVector {
        let mut out = FockVector::zero(&self.ctx);
        out.add_scaled(self, k);
        out
    }
}

impl PartialEq for FockVector {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c}) {e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Orbit data, coefficient field and cocycle bundled for the Fock-space
/// operators.
#[derive(Debug, Clone)]
pub struct FockSpace {
    od: OrbitData,
    ctx: CycloCtx,
    cocycle: Cocycle,
}

impl FockSpace {
    pub fn new(od: &OrbitData, ctx: &CycloCtx) -> Result<Self, FockError> {
        Ok(FockSpace {
            od: od.clone(),
            ctx: ctx.clone(),
            cocycle: Cocycle::new(od)?,
        })
    }

    pub fn od(&self) -> &OrbitData {
        &self.od
    }

    pub fn ctx(&self) -> &CycloCtx {
        &self.ctx
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    /// Whether `α_{i,±n}` survives the level constraint `d_i | n`.
    pub fn level_allowed(&self, i: usize, n: u32) -> bool {
        n % self.od.d_plus(i) == 0
    }

    /// `[α_{i,m}, α_{j,−m}] = (1/m) Σ_k ξ^{mk} [m a_{iμ^k(j)}]_q [m]_q` at level 1.
    pub fn heis_bracket_constant(&self, i: usize, j: usize, m: i64) -> Result<Laurent, FockError> {
        if m == 0 {
            return Err(FockError::ZeroMode);
        }
        Ok(kappa(&self.od, &self.ctx, i, j, m).mul(&qint(&self.ctx, m)))
    }

    /// `α_{i,m}` on `v`, for any index `i`; `α_{μ^r(ǐ),m} = ξ^{rm} α_{ǐ,m}`.
    pub fn apply_alpha(&self, i: usize, m: i64, v: &FockVector) -> FockVector {
        assert!(m != 0, "apply_alpha needs a nonzero mode");
        let (rep, r) = self.od.rep_of(i);
        let n = m.unsigned_abs() as u32;
        let mut out = FockVector::zero(&self.ctx);
        if !self.level_allowed(rep, n) {
            return out;
        }
        let phase = Laurent::from_cyclo(&CycloNum::xi(&self.ctx, r as i64 * m));
        if m < 0 {
            let k = qint(&self.ctx, n as i64).mul(&phase);
            for (e, c) in v.terms() {
                let mono = e.mono.with_power_delta(rep, n, 1);
                out.add_term(BasisElem::new(mono, e.lattice.clone()), &c.mul(&k));
            }
            return out;
        }
        // derivation: α_{ǐ,m} β_{j,m} = κ_{ǐj}(m)
        let mut kap: BTreeMap<usize, Laurent> = BTreeMap::new();
        for (e, c) in v.terms() {
            for (j, l, p) in e.mono.factors() {
                if l != n {
                    continue;
                }
                let k = kap
                    .entry(j)
                    .or_insert_with(|| kappa(&self.od, &self.ctx, rep, j, m).mul(&phase));
                if k.is_zero() {
                    continue;
                }
                let mono = e.mono.with_power_delta(j, l, -1);
                out.add_term(
                    BasisElem::new(mono, e.lattice.clone()),
                    &c.mul(k).scale_rat(&Rat::from_int(p as i64)),
                );
            }
        }
        out
    }

    /// `e_α t_β = ε(α,β) t_{α+β}`, extended linearly.
    pub fn apply_lattice(&self, alpha: &RootVec, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero(&self.ctx);
        for (e, c) in v.terms() {
            let eps = self.cocycle.value(&self.ctx, alpha, &e.lattice);
            out.add_term(
                BasisElem::new(e.mono.clone(), alpha.add(&e.lattice)),
                &c.scale(&eps),
            );
        }
        out
    }

    /// `⟨α_(0)|β⟩`, the power of `z` by which `z^{α_(0)}` acts on `t_β`.
    pub fn grading_exponent(&self, alpha: &RootVec, beta: &RootVec) -> i64 {
        self.od.form0(alpha, beta)
    }

    /// `⟨α_(0)|α⟩`, twice the extra shift in the exponent of the `X` operator.
    pub fn shift_doubled(&self, alpha: &RootVec) -> i64 {
        self.od.form0(alpha, alpha)
    }

    /// All monomials of energy at most `bound`, in increasing order.
    pub fn monomials(&self, bound: u32) -> Vec<HMonomial> {
        let mut vars = Vec::new();
        for &rep in self.od.reps() {
            let d = self.od.d_plus(rep);
            let mut n = d;
            while n <= bound {
                vars.push((rep, n));
                n += d;
            }
        }
        let mut out = Vec::new();
        fn rec(
            vars: &[(usize, u32)],
            k: usize,
            budget: u32,
            cur: HMonomial,
            out: &mut Vec<HMonomial>,
        ) {
            if k == vars.len() {
                out.push(cur);
                return;
            }
            let (rep, n) = vars[k];
            let mut p = 0;
            while p * n <= budget {
                rec(
                    vars,
                    k + 1,
                    budget - p * n,
                    cur.with_power_delta(rep, n, p as i64),
                    out,
                );
                p += 1;
            }
        }
        rec(&vars, 0, bound, HMonomial::one(), &mut out);
        out.sort();
        out
    }

    /// All `M ⊗ t_β` with `deg M ≤ bound` and `β ∈ support`.
    pub fn fock_basis(&self, bound: u32, support: &[RootVec]) -> Vec<BasisElem> {
        let monos = self.monomials(bound);
        let mut out = Vec::new();
        for beta in support {
            for m in &monos {
                out.push(BasisElem::new(m.clone(), beta.clone()));
            }
        }
        out
    }

    /// Lattice points up to the given height: `0`, then `±α_ǐ` for each
    /// representative, then `α_ǐ + α_j` for `j > ǐ`.
    pub fn lattice_support(&self, height: u32) -> Vec<RootVec> {
        let nu = self.od.nu();
        let mut out = vec![RootVec::zero(nu)];
        if height >= 1 {
            for &i in self.od.reps() {
                out.push(RootVec::simple(nu, i));
                out.push(RootVec::simple(nu, i).scale(-1));
            }
        }
        if height >= 2 {
            for &i in self.od.reps() {
                for j in i + 1..nu {
                    out.push(RootVec::simple(nu, i).add(&RootVec::simple(nu, j)));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests;
