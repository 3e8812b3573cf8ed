//! The cyclotomic field ℚ(ζ) with ζ a primitive `2N`-th root of unity.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use super::rat::Rat;
use super::CoeffError;

/// Raw coefficient vector in the power basis `1, ζ, …, ζ^{φ-1}`.
pub(crate) type Cyc = SmallVec<[Rat; 4]>;

/// Reduction data for ℚ(ζ_{2N}).
#[derive(Debug)]
pub struct CycloField {
    n: u32,
    order: u32,
    phi: usize,
    /// Monic cyclotomic polynomial Φ_{2N}, low degree first, length φ+1.
    modulus: Vec<i64>,
    /// ζ^k reduced, for k in 0..2N.
    zeta_pows: Vec<Cyc>,
}

pub type CycloCtx = Arc<CycloField>;

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let lead = *den.last().unwrap();
    let mut quo = vec![0i64; num.len() + 1 - dl];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dl - 1] / lead;
        quo[i] = c;
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quo
}

/// Integer coefficients of the `m`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_poly(m: u32) -> Vec<i64> {
    let mut p = vec![0i64; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

impl CycloField {
    /// Field for an automorphism of order `n`; ζ has order `2n`.
    pub fn new(n: u32) -> CycloCtx {
        assert!(n >= 1, "automorphism order must be positive");
        let order = 2 * n;
        let modulus = cyclotomic_poly(order);
        let phi = modulus.len() - 1;
        let mut field = CycloField {
            n,
            order,
            phi,
            modulus,
            zeta_pows: Vec::with_capacity(order as usize),
        };
        let mut cur: Cyc = SmallVec::from_elem(Rat::ZERO, phi);
        cur[0] = Rat::ONE;
        for _ in 0..order {
            field.zeta_pows.push(cur.clone());
            // multiply by ζ
            let mut next: Vec<Rat> = vec![Rat::ZERO; phi + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            field.reduce_in_place(&mut next);
            cur = next.into_iter().take(phi).collect();
        }
        Arc::new(field)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Order of ζ, i.e. `2N`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// Reduce a coefficient vector of any length modulo Φ_{2N}; the result
    /// occupies the first φ slots.
    fn reduce_in_place(&self, p: &mut Vec<Rat>) {
        let phi = self.phi;
        while p.len() > phi {
            let top = p.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = p.len() - phi;
            for (j, m) in self.modulus[..phi].iter().enumerate() {
                if *m != 0 {
                    p[shift + j] -= &(&top * &Rat::from_int(*m));
                }
            }
        }
        while p.len() < phi {
            p.push(Rat::ZERO);
        }
    }

    pub(crate) fn zero(&self) -> Cyc {
        SmallVec::from_elem(Rat::ZERO, self.phi)
    }

    pub(crate) fn from_rat(&self, r: Rat) -> Cyc {
        let mut c = self.zero();
        c[0] = r;
        c
    }

    pub(crate) fn zeta_pow(&self, k: i64) -> Cyc {
        let k = k.rem_euclid(self.order as i64) as usize;
        self.zeta_pows[k].clone()
    }

    pub(crate) fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        if self.phi == 1 {
            let mut c = Cyc::new();
            c.push(&a[0] * &b[0]);
            return c;
        }
        let mut prod = vec![Rat::ZERO; 2 * self.phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += &(x * y);
                }
            }
        }
        self.reduce_in_place(&mut prod);
        prod.into_iter().collect()
    }

    /// `a · ζ^k`
    pub(crate) fn mul_zeta(&self, a: &Cyc, k: i64) -> Cyc {
        let k = k.rem_euclid(self.order as i64);
        if k == 0 {
            return a.clone();
        }
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let zp = &self.zeta_pows[((i as i64 + k) % self.order as i64) as usize];
            for (o, z) in out.iter_mut().zip(zp.iter()) {
                if !z.is_zero() {
                    *o += &(x * z);
                }
            }
        }
        out
    }

    pub(crate) fn add_assign(a: &mut Cyc, b: &Cyc) {
        for (x, y) in a.iter_mut().zip(b.iter()) {
            if !y.is_zero() {
                *x += y;
            }
        }
    }

    pub(crate) fn sub_assign(a: &mut Cyc, b: &Cyc) {
        for (x, y) in a.iter_mut().zip(b.iter()) {
            if !y.is_zero() {
                *x -= y;
            }
        }
    }

    pub(crate) fn scale(a: &Cyc, r: &Rat) -> Cyc {
        a.iter().map(|x| x * r).collect()
    }

    pub(crate) fn neg(a: &Cyc) -> Cyc {
        a.iter().map(|x| -x).collect()
    }

    pub(crate) fn is_zero(a: &Cyc) -> bool {
        a.iter().all(Rat::is_zero)
    }

    /// Rational value if `a` lies in ℚ.
    pub(crate) fn as_rat(a: &Cyc) -> Option<&Rat> {
        if a[1..].iter().all(Rat::is_zero) {
            Some(&a[0])
        } else {
            None
        }
    }

    /// Inverse through the extended Euclidean algorithm in ℚ[x] against Φ_{2N}.
    pub(crate) fn inv(&self, a: &Cyc) -> Option<Cyc> {
        if Self::is_zero(a) {
            return None;
        }
        if let Some(r) = Self::as_rat(a) {
            return Some(self.from_rat(r.recip()));
        }
        // r0 = modulus, r1 = a ; track s with s*a ≡ r (mod modulus)
        let trim = |mut v: Vec<Rat>| {
            while v.len() > 1 && v.last().unwrap().is_zero() {
                v.pop();
            }
            v
        };
        let mut r0: Vec<Rat> = self.modulus.iter().map(|&m| Rat::from_int(m)).collect();
        let mut r1: Vec<Rat> = trim(a.to_vec());
        let mut s0: Vec<Rat> = vec![Rat::ZERO];
        let mut s1: Vec<Rat> = vec![Rat::ONE];
        while !(r1.len() == 1 && r1[0].is_zero()) {
            // polynomial division r0 = q*r1 + rem
            let mut rem = r0.clone();
            let dl = r1.len();
            let lead_inv = r1[dl - 1].recip();
            let mut q = vec![Rat::ZERO; rem.len().saturating_sub(dl) + 1];
            if rem.len() >= dl {
                for i in (0..=rem.len() - dl).rev() {
                    let c = &rem[i + dl - 1] * &lead_inv;
                    if c.is_zero() {
                        continue;
                    }
                    for (j, d) in r1.iter().enumerate() {
                        rem[i + j] -= &(&c * d);
                    }
                    q[i] = c;
                }
            }
            let rem = trim(rem);
            // s_new = s0 - q*s1
            let mut qs = vec![Rat::ZERO; q.len() + s1.len()];
            for (i, x) in q.iter().enumerate() {
                for (j, y) in s1.iter().enumerate() {
                    qs[i + j] += &(x * y);
                }
            }
            let mut s_new = vec![Rat::ZERO; qs.len().max(s0.len())];
            for (i, x) in s0.iter().enumerate() {
                s_new[i] += x;
            }
            for (i, x) in qs.iter().enumerate() {
                s_new[i] -= x;
            }
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, trim(s_new));
        }
        // r0 is a nonzero constant gcd
        if r0.len() != 1 {
            return None;
        }
        let c = r0[0].recip();
        let mut s: Vec<Rat> = s0.iter().map(|x| x * &c).collect();
        self.reduce_in_place(&mut s);
        Some(s.into_iter().take(self.phi).collect())
    }
}

/// An element of ℚ(ζ), ζ a primitive `2N`-th root of unity.
#[derive(Clone)]
pub struct CycloNum {
    ctx: CycloCtx,
    coeffs: Cyc,
}

impl CycloNum {
    pub(crate) fn from_raw(ctx: &CycloCtx, coeffs: Cyc) -> Self {
        debug_assert_eq!(coeffs.len(), ctx.phi);
        CycloNum {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn zero(ctx: &CycloCtx) -> Self {
        Self::from_raw(ctx, ctx.zero())
    }

    pub fn one(ctx: &CycloCtx) -> Self {
        Self::from_rat(ctx, Rat::ONE)
    }

    pub fn from_rat(ctx: &CycloCtx, r: Rat) -> Self {
        Self::from_raw(ctx, ctx.from_rat(r))
    }

    /// ζ^k.
    pub fn zeta(ctx: &CycloCtx, k: i64) -> Self {
        Self::from_raw(ctx, ctx.zeta_pow(k))
    }

    /// ξ^k where ξ = ζ² is a primitive `N`-th root of unity.
    pub fn xi(ctx: &CycloCtx, k: i64) -> Self {
        Self::zeta(ctx, 2 * k)
    }

    pub fn ctx(&self) -> &CycloCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub(crate) fn raw(&self) -> &Cyc {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        CycloField::is_zero(&self.coeffs)
    }

    pub fn is_one(&self) -> bool {
        CycloField::as_rat(&self.coeffs).is_some_and(Rat::is_one)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut c = self.coeffs.clone();
        CycloField::add_assign(&mut c, &rhs.coeffs);
        Self::from_raw(&self.ctx, c)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut c = self.coeffs.clone();
        CycloField::sub_assign(&mut c, &rhs.coeffs);
        Self::from_raw(&self.ctx, c)
    }

    pub fn neg(&self) -> Self {
        Self::from_raw(&self.ctx, CycloField::neg(&self.coeffs))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::from_raw(&self.ctx, self.ctx.mul(&self.coeffs, &rhs.coeffs))
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        self.ctx
            .inv(&self.coeffs)
            .map(|c| Self::from_raw(&self.ctx, c))
            .ok_or(CoeffError::DivisionByZero)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, CoeffError> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self, CoeffError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.order == other.ctx.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycloNum {}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Writes a power-basis vector as a polynomial in `z`, highest power first.
pub(crate) fn write_cyc(f: &mut impl fmt::Write, c: &[Rat]) -> fmt::Result {
    let mut first = true;
    for (k, r) in c.iter().enumerate().rev() {
        if r.is_zero() {
            continue;
        }
        let neg = r.is_negative();
        let abs = if neg { -r } else { r.clone() };
        if first {
            if neg {
                f.write_char('-')?;
            }
        } else {
            f.write_str(if neg { "-" } else { "+" })?;
        }
        first = false;
        match (k, abs.is_one()) {
            (0, _) => write!(f, "{abs}")?,
            (_, true) => {}
            (_, false) => write!(f, "{abs}*")?,
        }
        match k {
            0 => {}
            1 => f.write_char('z')?,
            _ => write!(f, "z^{k}")?,
        }
    }
    if first {
        f.write_char('0')?;
    }
    Ok(())
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cyc(f, &self.coeffs)
    }
}
