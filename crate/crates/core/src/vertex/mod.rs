//! Vertex operators on the Fock space as exact coefficient extractors.
//!
//! Every current is applied to one basis element at a time and returns the
//! terms of its formal series in `z` up to a requested (doubled) exponent.
//! Annihilation parts act by a Taylor shift of the creation variables, so
//! each coefficient is a finite sum.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use thiserror::Error;

use crate::cartan::{OrbitData, RootVec};
use crate::coeff::{qint, qint_v, CoeffElem, CycloCtx, Laurent, Rat};
use crate::distcalc::Unit;
use crate::fock::{BasisElem, FockError, FockSpace, FockVector, HMonomial};
use crate::relcat::{kappa, lambda};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VertexError {
    #[error("normal ordering supports at most 3 currents, got {0}")]
    UnsupportedArity(usize),
    #[error("Φ modes are non-negative, got {0}")]
    NegativeMode(i64),
    #[error(transparent)]
    Fock(#[from] FockError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurrentKind {
    EMinus,
    EPlus,
    Phi,
    X,
}

/// A current `H_ǐ^±(c·ξ^{−r} z)`: the operator of the given kind for the
/// representative `rep`, with its variable rotated by `ξ^{−rotation}` and
/// scaled by `scale`. Rotation realizes non-representative indices through
/// `H_{μ^r(ǐ)}(z) = H_ǐ(ξ^{−r} z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurrentHandle {
    pub kind: CurrentKind,
    pub rep: usize,
    pub sign: i8,
    pub rotation: u32,
    pub scale: Unit,
}

impl CurrentHandle {
    pub fn new(od: &OrbitData, kind: CurrentKind, i: usize, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1);
        let (rep, r) = od.rep_of(i);
        CurrentHandle {
            kind,
            rep,
            sign,
            rotation: r,
            scale: Unit::ONE,
        }
    }

    pub fn x(od: &OrbitData, i: usize, sign: i8) -> Self {
        Self::new(od, CurrentKind::X, i, sign)
    }

    pub fn phi(od: &OrbitData, i: usize, sign: i8) -> Self {
        Self::new(od, CurrentKind::Phi, i, sign)
    }

    /// The same current with its variable multiplied by `c`.
    pub fn scaled(mut self, c: Unit) -> Self {
        self.scale = self.scale.mul(c);
        self
    }

    /// The total multiplier `c·ξ^{−r}` of the variable.
    fn multiplier(&self, n: u32) -> Unit {
        let u = self.scale.mul(Unit::xi_q(-(self.rotation as i64), 0));
        Unit::new(u.zeta.rem_euclid(4 * n as i64), u.v)
    }
}

/// Terms of a formal series in one variable: doubled exponent → vector.
pub type Series = BTreeMap<i32, FockVector>;

/// Coefficients of a multivariate series: doubled exponents → vector.
pub type MultiSeries = BTreeMap<Vec<i32>, FockVector>;

/// The creation exponentials `exp(Σ_m b_m β_{i,m} z^m)` that occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ExpTag {
    /// `E_−(σα_i, z)`: `b_m = σ`
    EMinus(i8),
    /// `Φ^−_i(z)` without its zero mode: `b_m = −(q^m − q^{−m})`
    PhiMinus,
    /// `E_−(σα_i, q^{−σ/2} z)` inside `X`: `b_m = σ q^{−σm/2}`
    X(i8),
}

/// The annihilation shifts `β_{j,m} ↦ β_{j,m} + s_{ij}(m) z^{−m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ShiftTag {
    /// `E_+(σα_i, z)`: `s = −σ λ_ij(m)`
    EPlus(i8),
    /// `Φ^+_i(z)`: `s = (q − q^{−1}) κ_ij(m)`
    PhiPlus,
    /// `E_+(σα_i, q^{σ/2} z)` inside `X`: `s = −σ q^{−σm/2} λ_ij(m)`
    X(i8),
}

type Poly = BTreeMap<HMonomial, Laurent>;

/// The operator engine for one Cartan datum. Memo tables live inside, so a
/// `Vertex` is meant to be owned by one worker.
pub struct Vertex {
    fs: FockSpace,
    exp_polys: RefCell<HashMap<(usize, ExpTag), Rc<Vec<Poly>>>>,
    shifts: RefCell<HashMap<(usize, ShiftTag, usize, u32), Laurent>>,
    series_cache: RefCell<HashMap<(CurrentHandle, BasisElem), (i32, Rc<Series>)>>,
}

impl Vertex {
    pub fn new(od: &OrbitData, ctx: &CycloCtx) -> Result<Self, VertexError> {
        Ok(Vertex {
            fs: FockSpace::new(od, ctx)?,
            exp_polys: RefCell::new(HashMap::new()),
            shifts: RefCell::new(HashMap::new()),
            series_cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn fock(&self) -> &FockSpace {
        &self.fs
    }

    pub fn od(&self) -> &OrbitData {
        self.fs.od()
    }

    pub fn ctx(&self) -> &CycloCtx {
        self.fs.ctx()
    }

    /// `ε_i² = d_i[d_i]_q / [2]_{q^{d_ii/2}}` if `d_ii > 0`, else `d_i[d_i]_q`.
    pub fn epsilon_sq(&self, i: usize) -> CoeffElem {
        epsilon_sq(self.od(), self.ctx(), i)
    }

    fn exp_coeff(&self, i: usize, tag: ExpTag, m: u32) -> Laurent {
        let ctx = self.ctx();
        let (_, r) = self.od().rep_of(i);
        let m = m as i32;
        let b = match tag {
            ExpTag::EMinus(s) => Laurent::from_int(ctx, s as i64),
            ExpTag::PhiMinus => Laurent::v_pow(ctx, -2 * m).sub(&Laurent::v_pow(ctx, 2 * m)),
            ExpTag::X(s) => {
                Laurent::v_pow(ctx, -(s as i32) * m).scale_rat(&Rat::from_int(s as i64))
            }
        };
        // β_{μ^r(ǐ),m} = ξ^{−rm} β_{ǐ,m}
        b.mul_zeta_v(-2 * r as i64 * m as i64, 0)
    }

    /// `P_0..=P_n` with `exp(Σ_m b_m β_{i,m} z^m) = Σ_n P_n z^n`.
    fn exp_polys(&self, i: usize, tag: ExpTag, n: usize) -> Rc<Vec<Poly>> {
        if let Some(p) = self.exp_polys.borrow().get(&(i, tag)) {
            if p.len() > n {
                return p.clone();
            }
        }
        let ctx = self.ctx().clone();
        let (rep, _) = self.od().rep_of(i);
        let d = self.od().d_plus(rep) as usize;
        let mut polys: Vec<Poly> = self
            .exp_polys
            .borrow()
            .get(&(i, tag))
            .map(|p| (**p).clone())
            .unwrap_or_else(|| {
                let mut one = Poly::new();
                one.insert(HMonomial::one(), Laurent::one(&ctx));
                vec![one]
            });
        // n P_n = Σ_m m b_m β_m P_{n−m}
        for k in polys.len()..=n {
            let mut acc = Poly::new();
            for m in (d..=k).step_by(d) {
                let b = self
                    .exp_coeff(i, tag, m as u32)
                    .scale_rat(&Rat::new(m as i64, k as i64));
                for (mono, c) in &polys[k - m] {
                    let key = mono.with_power_delta(rep, m as u32, 1);
                    let t = c.mul(&b);
                    let slot = acc.entry(key).or_insert_with(|| Laurent::zero(&ctx));
                    slot.add_assign(&t);
                }
            }
            acc.retain(|_, c| !c.is_zero());
            polys.push(acc);
        }
        let rc = Rc::new(polys);
        self.exp_polys.borrow_mut().insert((i, tag), rc.clone());
        rc
    }

    fn shift(&self, i: usize, tag: ShiftTag, j: usize, m: u32) -> Laurent {
        let key = (i, tag, j, m);
        if let Some(s) = self.shifts.borrow().get(&key) {
            return s.clone();
        }
        let ctx = self.ctx();
        let od = self.od();
        let mi = m as i64;
        let s = match tag {
            ShiftTag::EPlus(s) => lambda(od, ctx, i, j, mi).scale_rat(&Rat::from_int(-s as i64)),
            ShiftTag::PhiPlus => {
                kappa(od, ctx, i, j, mi).mul(&Laurent::v_pow(ctx, 2).sub(&Laurent::v_pow(ctx, -2)))
            }
            ShiftTag::X(s) => lambda(od, ctx, i, j, mi)
                .mul(&Laurent::v_pow(ctx, -(s as i32) * m as i32))
                .scale_rat(&Rat::from_int(-s as i64)),
        };
        self.shifts.borrow_mut().insert(key, s.clone());
        s
    }

    /// Taylor shift of the monomial: terms `(M', e, c)` meaning `c M' z^e`
    /// with `e ≤ 0` a natural exponent.
    fn taylor(&self, i: usize, tag: ShiftTag, mono: &HMonomial) -> Vec<(HMonomial, i32, Laurent)> {
        let ctx = self.ctx();
        let mut acc: Vec<(HMonomial, i32, Laurent)> =
            vec![(HMonomial::one(), 0, Laurent::one(ctx))];
        for (j, l, p) in mono.factors() {
            let s = self.shift(i, tag, j, l);
            let mut next = Vec::new();
            let mut spow = Laurent::one(ctx);
            for r in 0..=p {
                if r > 0 {
                    spow = spow.mul(&s);
                }
                if spow.is_zero() {
                    break;
                }
                let k = spow.scale_rat(&binom(p, r));
                for (m, e, c) in &acc {
                    next.push((
                        m.with_power_delta(j, l, (p - r) as i64),
                        e - (l * r) as i32,
                        c.mul(&k),
                    ));
                }
            }
            acc = next;
        }
        acc
    }

    /// The unrotated, unscaled current for index `i` on `e`, all terms with
    /// doubled exponent at most `hi`. Φ and E accept any index (built from
    /// `α_{i,m}` directly); X needs a representative.
    fn base_series(&self, kind: CurrentKind, i: usize, sign: i8, e: &BasisElem, hi: i32) -> Series {
        let ctx = self.ctx();
        let od = self.od();
        let fs = &self.fs;
        let alpha = od.simple_root(i);
        let gamma = &e.lattice;
        let (pre, s2, lattice, shift, exp) = match (kind, sign) {
            (CurrentKind::EMinus, s) => (
                Laurent::one(ctx),
                0,
                gamma.clone(),
                None,
                Some(ExpTag::EMinus(s)),
            ),
            (CurrentKind::EPlus, s) => (
                Laurent::one(ctx),
                0,
                gamma.clone(),
                Some(ShiftTag::EPlus(s)),
                None,
            ),
            (CurrentKind::Phi, 1) => (
                Laurent::v_pow(ctx, 2 * fs.grading_exponent(&alpha, gamma) as i32),
                0,
                gamma.clone(),
                Some(ShiftTag::PhiPlus),
                None,
            ),
            (CurrentKind::Phi, _) => (
                Laurent::v_pow(ctx, -2 * fs.grading_exponent(&alpha, gamma) as i32),
                0,
                gamma.clone(),
                None,
                Some(ExpTag::PhiMinus),
            ),
            (CurrentKind::X, s) => {
                assert!(od.is_rep(i), "X currents are built for representatives");
                let sa = alpha.scale(s as i64);
                let eps = fs.cocycle().exp(&sa, gamma);
                let s2 =
                    2 * s as i64 * fs.grading_exponent(&alpha, gamma) + fs.shift_doubled(&alpha);
                (
                    Laurent::zeta_v(ctx, eps, 0),
                    s2 as i32,
                    gamma.add(&sa),
                    Some(ShiftTag::X(s)),
                    Some(ExpTag::X(s)),
                )
            }
        };
        let shifted = match shift {
            Some(tag) => self.taylor(i, tag, &e.mono),
            None => vec![(e.mono.clone(), 0, Laurent::one(ctx))],
        };
        let mut out = Series::new();
        let lowest = shifted.iter().map(|t| t.1).min().unwrap_or(0);
        let nmax = if exp.is_some() {
            ((hi - s2) / 2 - lowest).max(0) as usize + 1
        } else {
            0
        };
        let polys = exp.map(|tag| self.exp_polys(i, tag, nmax));
        for (mono, ez, c) in shifted {
            let c = c.mul(&pre);
            if c.is_zero() {
                continue;
            }
            let mut n = 0usize;
            loop {
                let s = s2 + 2 * (ez + n as i32);
                if s > hi {
                    break;
                }
                let slot = out.entry(s).or_insert_with(|| FockVector::zero(ctx));
                match &polys {
                    None => {
                        slot.add_term(BasisElem::new(mono.clone(), lattice.clone()), &c);
                        break;
                    }
                    Some(p) => {
                        for (pm, pc) in &p[n] {
                            slot.add_term(
                                BasisElem::new(mono.mul(pm), lattice.clone()),
                                &pc.mul(&c),
                            );
                        }
                    }
                }
                n += 1;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Terms of `h` applied to `e` with doubled exponent at most `hi` (the
    /// returned map may hold further terms above `hi`).
    pub fn series(&self, h: &CurrentHandle, e: &BasisElem, hi: i32) -> Rc<Series> {
        let key = (*h, e.clone());
        if let Some((h0, s)) = self.series_cache.borrow().get(&key) {
            if *h0 >= hi {
                return s.clone();
            }
        }
        let base = self.base_series(h.kind, h.rep, h.sign, e, hi);
        let c = h.multiplier(self.od().n());
        let out: Series = if c == Unit::ONE {
            base
        } else {
            base.into_iter()
                .map(|(s, v)| (s, v.scale(&scale_power(self.ctx(), c, s))))
                .collect()
        };
        let rc = Rc::new(out);
        self.series_cache.borrow_mut().insert(key, (hi, rc.clone()));
        rc
    }

    /// `h` applied to a vector, terms with doubled exponent at most `hi`.
    pub fn apply(&self, h: &CurrentHandle, v: &FockVector, hi: i32) -> Series {
        let mut out = Series::new();
        for (e, c) in v.terms() {
            for (s, w) in self.series(h, e, hi).range(..=hi) {
                out.entry(*s)
                    .or_insert_with(|| FockVector::zero(self.ctx()))
                    .add_scaled(w, c);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// `E_±(σα_i, c z)` on `v` up to doubled exponent `hi`.
    pub fn apply_e(
        &self,
        plus: bool,
        i: usize,
        sign: i8,
        c: Unit,
        v: &FockVector,
        hi: i32,
    ) -> Series {
        let kind = if plus {
            CurrentKind::EPlus
        } else {
            CurrentKind::EMinus
        };
        let h = CurrentHandle::new(self.od(), kind, i, sign).scaled(c);
        self.apply(&h, v, hi)
    }

    /// The mode `Φ^+_{i,m}` (coefficient of `z^{−m}`) or `Φ^−_{i,−m}`
    /// (coefficient of `z^m`) on `v`, `m ≥ 0`.
    pub fn apply_phi(
        &self,
        i: usize,
        sign: i8,
        m: i64,
        v: &FockVector,
    ) -> Result<FockVector, VertexError> {
        if m < 0 {
            return Err(VertexError::NegativeMode(m));
        }
        let h = CurrentHandle::phi(self.od(), i, sign);
        let s = if sign > 0 {
            -2 * m as i32
        } else {
            2 * m as i32
        };
        Ok(self
            .apply(&h, v, s)
            .remove(&s)
            .unwrap_or_else(|| FockVector::zero(self.ctx())))
    }

    /// `Φ^±_i(z)` built from `α_{i,m}` for any index `i`, without rotation.
    pub fn phi_direct(&self, i: usize, sign: i8, e: &BasisElem, hi: i32) -> Series {
        self.base_series(CurrentKind::Phi, i, sign, e, hi)
    }

    /// The mode `X^±_{i,m}` (coefficient of `z^{−m}`), `m` given doubled.
    pub fn apply_x(&self, i: usize, sign: i8, mode2: i32, v: &FockVector) -> FockVector {
        let h = CurrentHandle::x(self.od(), i, sign);
        self.apply(&h, v, -mode2)
            .remove(&-mode2)
            .unwrap_or_else(|| FockVector::zero(self.ctx()))
    }

    /// `H_1(z_1) ⋯ H_n(z_n) e`: coefficients with `lo[k] ≤ exp_k ≤ hi[k]`
    /// (doubled), variables in handle order.
    pub fn chain(
        &self,
        handles: &[CurrentHandle],
        e: &BasisElem,
        lo: &[i32],
        hi: &[i32],
    ) -> MultiSeries {
        let n = handles.len();
        let ctx = self.ctx();
        let mut state: MultiSeries = BTreeMap::new();
        state.insert(vec![0; n], FockVector::basis(ctx, e.clone()));
        for k in (0..n).rev() {
            let mut next: MultiSeries = BTreeMap::new();
            for (exps, v) in &state {
                for (b, c) in v.terms() {
                    let s = self.series(&handles[k], b, hi[k]);
                    for (x, w) in s.range(lo[k]..=hi[k]) {
                        let mut key = exps.clone();
                        key[k] = *x;
                        next.entry(key)
                            .or_insert_with(|| FockVector::zero(ctx))
                            .add_scaled(w, c);
                    }
                }
            }
            next.retain(|_, v| !v.is_zero());
            state = next;
        }
        state
    }

    /// The normal-ordered product `:X_1(c_1 z_{v_1}) ⋯ X_n(c_n z_{v_n}):`
    /// on `e`: all creation parts, then all annihilation parts, then the
    /// lattice operators, then the `z`-monomials acting on the original
    /// sector. Currents of equal sign share the pairing shift
    /// symmetrically; for opposite signs the whole shift goes to the left
    /// current, as in the mixed-sign definition.
    pub fn normal_ordered_apply(
        &self,
        currents: &[(CurrentHandle, usize)],
        nvars: usize,
        e: &BasisElem,
        hi: &[i32],
    ) -> Result<MultiSeries, VertexError> {
        let n = currents.len();
        if n == 0 || n > 3 {
            return Err(VertexError::UnsupportedArity(n));
        }
        assert!(currents.iter().all(|(h, _)| h.kind == CurrentKind::X));
        let od = self.od();
        let fs = &self.fs;
        let ctx = self.ctx();
        let roots: Vec<RootVec> = currents
            .iter()
            .map(|(h, _)| od.simple_root(h.rep))
            .collect();
        let sg: Vec<i64> = currents.iter().map(|(h, _)| h.sign as i64).collect();
        // doubled z-monomial exponents
        let mut zexp = vec![0i64; n];
        for k in 0..n {
            zexp[k] = 2 * sg[k] * fs.grading_exponent(&roots[k], &e.lattice)
                + fs.shift_doubled(&roots[k]);
            for l in 0..n {
                if l == k {
                    continue;
                }
                let a = sg[k] * sg[l] * fs.grading_exponent(&roots[k], &roots[l]);
                if sg[k] == sg[l] {
                    zexp[k] += a;
                } else if l > k {
                    zexp[k] += 2 * a;
                }
            }
        }
        // lattice part
        let mut gamma = e.lattice.clone();
        let mut eps = 0i64;
        for k in (0..n).rev() {
            let sa = roots[k].scale(sg[k]);
            eps += fs.cocycle().exp(&sa, &gamma);
            gamma = gamma.add(&sa);
        }
        // annihilation parts, one internal variable per current
        let mut state: Vec<(HMonomial, Vec<i32>, Laurent)> =
            vec![(e.mono.clone(), vec![0; n], Laurent::zeta_v(ctx, eps, 0))];
        for (k, (h, _)) in currents.iter().enumerate() {
            let mut next = Vec::new();
            for (m, ex, c) in &state {
                for (m2, ez, c2) in self.taylor(h.rep, ShiftTag::X(h.sign), m) {
                    let mut ex2 = ex.clone();
                    ex2[k] = ez;
                    next.push((m2, ex2, c.mul(&c2)));
                }
            }
            state = next;
        }
        let deg = e.mono.degree() as i32;
        let lo_k: Vec<i32> = zexp.iter().map(|&z| z as i32 - 2 * deg).collect();
        let mut hi_k = vec![0i32; n];
        for k in 0..n {
            let var = currents[k].1;
            let others: i32 = (0..n)
                .filter(|&l| l != k && currents[l].1 == var)
                .map(|l| lo_k[l])
                .sum();
            hi_k[k] = hi[var] - others;
        }
        // creation parts
        let mut terms: BTreeMap<(HMonomial, Vec<i32>), Laurent> = BTreeMap::new();
        for (m, ex, c) in state {
            terms.insert((m, ex.iter().map(|x| 2 * x).collect()), c);
        }
        for (k, (h, _)) in currents.iter().enumerate() {
            let nmax = ((hi_k[k] - zexp[k] as i32) / 2 + deg).max(0) as usize;
            let polys = self.exp_polys(h.rep, ExpTag::X(h.sign), nmax);
            let mut next: BTreeMap<(HMonomial, Vec<i32>), Laurent> = BTreeMap::new();
            for ((m, ex), c) in &terms {
                for (p, poly) in polys.iter().enumerate() {
                    let x = ex[k] + 2 * p as i32;
                    if zexp[k] as i32 + x > hi_k[k] {
                        break;
                    }
                    for (pm, pc) in poly {
                        let mut ex2 = ex.clone();
                        ex2[k] = x;
                        let slot = next
                            .entry((m.mul(pm), ex2))
                            .or_insert_with(|| Laurent::zero(ctx));
                        slot.add_assign(&c.mul(pc));
                    }
                }
            }
            terms = next;
        }
        let mut out: MultiSeries = BTreeMap::new();
        for ((m, ex), c) in terms {
            if c.is_zero() {
                continue;
            }
            let mut key = vec![0i32; nvars];
            let mut coeff = c;
            for (k, (h, var)) in currents.iter().enumerate() {
                let s = ex[k] + zexp[k] as i32;
                key[*var] += s;
                let u = h.multiplier(od.n());
                if u != Unit::ONE {
                    coeff = coeff.mul(&scale_power(ctx, u, s));
                }
            }
            if key.iter().zip(hi).any(|(x, h)| x > h) {
                continue;
            }
            out.entry(key)
                .or_insert_with(|| FockVector::zero(ctx))
                .add_term(BasisElem::new(m, gamma.clone()), &coeff);
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

/// `c^{s/2}` for a doubled exponent `s`; odd `s` needs the square root
/// `ζ^{c.zeta/2} v^{c.v/2}`, which is the branch fixed throughout.
pub fn scale_power(ctx: &CycloCtx, c: Unit, s: i32) -> Laurent {
    if s % 2 == 0 {
        return c.pow((s / 2) as i64).laurent(ctx);
    }
    assert!(
        c.zeta % 2 == 0 && c.v % 2 == 0,
        "half-integer power of {c:?} is outside the coefficient field"
    );
    Unit::new(c.zeta / 2 * s as i64, c.v / 2 * s).laurent(ctx)
}

pub fn epsilon_sq(od: &OrbitData, ctx: &CycloCtx, i: usize) -> CoeffElem {
    let di = od.d_plus(i) as i64;
    let dii = od.d(i, i) as i32;
    let num = qint(ctx, di).scale_rat(&Rat::from_int(di));
    if dii > 0 {
        CoeffElem::from_fraction(num, qint_v(ctx, 2, dii)).expect("nonzero denominator")
    } else {
        CoeffElem::from_laurent(num)
    }
}

fn binom(n: u32, r: u32) -> Rat {
    let mut acc: i64 = 1;
    for k in 0..r as i64 {
        acc = acc * (n as i64 - k) / (k + 1);
    }
    Rat::from_int(acc)
}

#[cfg(test)]
mod tests;
