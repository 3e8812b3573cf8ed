//! The q-deformed binomial `(1 − z)^a_{q²}` and products of such factors,
//! expanded in either direction.

use super::series::TruncSeries;
use crate::cartan::OrbitData;
use crate::coeff::{qint_v, CycloCtx, Laurent, Rat};

/// A constant `ζ^zeta · v^v`; all shifts occurring in the relations have
/// this shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unit {
    pub zeta: i64,
    pub v: i32,
}

impl Unit {
    pub const ONE: Unit = Unit { zeta: 0, v: 0 };

    pub fn new(zeta: i64, v: i32) -> Self {
        Unit { zeta, v }
    }

    /// `ξ^k q^e = ζ^{2k} v^{2e}`
    pub fn xi_q(k: i64, e: i32) -> Self {
        Unit {
            zeta: 2 * k,
            v: 2 * e,
        }
    }

    pub fn mul(self, o: Unit) -> Unit {
        Unit {
            zeta: self.zeta + o.zeta,
            v: self.v + o.v,
        }
    }

    pub fn inv(self) -> Unit {
        Unit {
            zeta: -self.zeta,
            v: -self.v,
        }
    }

    pub fn pow(self, n: i64) -> Unit {
        Unit {
            zeta: self.zeta * n,
            v: self.v * n as i32,
        }
    }

    pub fn laurent(self, ctx: &CycloCtx) -> Laurent {
        Laurent::zeta_v(ctx, self.zeta, self.v)
    }
}

/// Coefficients `E_0..=E_order` of `∏_k (1 − c_k t)^{a_k}_{q²}` as a power
/// series in `t`, computed from the logarithm
/// `−Σ_m (1/m) Σ_k [a_k]_{q^m} c_k^m t^m`.
pub fn qdef_product_coeffs(ctx: &CycloCtx, factors: &[(Unit, i64)], order: usize) -> Vec<Laurent> {
    // m·L_m for the log-series L
    let ml: Vec<Laurent> = (0..=order)
        .map(|m| {
            if m == 0 {
                return Laurent::zero(ctx);
            }
            let mut s = Laurent::zero(ctx);
            for &(c, a) in factors {
                let qa = qint_v(ctx, a, 2 * m as i32);
                s.sub_assign(&qa.mul(&c.pow(m as i64).laurent(ctx)));
            }
            s
        })
        .collect();
    let mut e = vec![Laurent::one(ctx)];
    for n in 1..=order {
        let mut acc = Laurent::zero(ctx);
        for m in 1..=n {
            if !ml[m].is_zero() && !e[n - m].is_zero() {
                acc.add_assign(&ml[m].mul(&e[n - m]));
            }
        }
        e.push(acc.scale_rat(&Rat::new(1, n as i64)));
    }
    e
}

/// `(1 − z)^a_{q²}` to order `D` in the region `|z| < 1`.
pub fn qdef_binom_expand(ctx: &CycloCtx, a: i64, order: usize) -> TruncSeries<Laurent> {
    let coeffs = qdef_product_coeffs(ctx, &[(Unit::ONE, a)], order);
    let mut s = TruncSeries::new(ctx, &["z"], vec![(0, 2 * order as i32)], &["1", "z"]);
    for (n, c) in coeffs.iter().enumerate() {
        s.add_term(vec![2 * n as i32], c);
    }
    s
}

/// Which way a function of the ratio `x = w/z` is expanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `|w| < |z|`: power series in `x`.
    WSmall,
    /// `|z| < |w|`: power series in `x^{-1}`.
    ZSmall,
}

impl Region {
    pub fn tag(self) -> [&'static str; 2] {
        match self {
            Region::WSmall => ["z", "w"],
            Region::ZSmall => ["w", "z"],
        }
    }
}

/// Expansion of `∏_k (1 − c_k x)^{a_k}_{q²}` in the ratio variable `x = w/z`
/// on the window `[−D, D]`.
///
/// For `|z| < |w|` each factor is rewritten as
/// `(−c x)^a (1 − (c x)^{-1})^a_{q²}` and expanded in `x^{-1}`.
pub fn qdef_product(
    ctx: &CycloCtx,
    factors: &[(Unit, i64)],
    region: Region,
    order: usize,
) -> TruncSeries<Laurent> {
    let d = order as i32;
    let mut s = TruncSeries::new(ctx, &["x"], vec![(-2 * d, 2 * d)], &region.tag());
    match region {
        Region::WSmall => {
            for (n, c) in qdef_product_coeffs(ctx, factors, order).iter().enumerate() {
                s.add_term(vec![2 * n as i32], c);
            }
        }
        Region::ZSmall => {
            let b: i64 = factors.iter().map(|f| f.1).sum();
            let mut pref = Unit::ONE;
            let mut sign = 1i64;
            for &(c, a) in factors {
                pref = pref.mul(c.pow(a));
                if a % 2 != 0 {
                    sign = -sign;
                }
            }
            let pref = pref.laurent(ctx).scale_rat(&Rat::from_int(sign));
            let inv: Vec<(Unit, i64)> = factors.iter().map(|&(c, a)| (c.inv(), a)).collect();
            // terms x^{b-n} inside the window need n ≤ b + D
            let depth = (b + order as i64).max(0) as usize;
            for (n, c) in qdef_product_coeffs(ctx, &inv, depth).iter().enumerate() {
                s.add_term(vec![2 * (b as i32 - n as i32)], &pref.mul(c));
            }
        }
    }
    s
}

/// The factors `(ξ^k, −⟨α_i|μ^k α_j⟩)` of `∏_k (1 − ξ^k x)^{−⟨α_i|μ^kα_j⟩}_{q²}`.
pub fn pair_factors(od: &OrbitData, i: usize, j: usize) -> Vec<(Unit, i64)> {
    (0..od.n() as i64)
        .map(|k| (Unit::xi_q(k, 0), -od.a_twisted(i, j, k)))
        .filter(|f| f.1 != 0)
        .collect()
}

/// `∏_k (1 − ξ^k q^{s} x)^{−⟨α_i|μ^kα_j⟩}_{q²}` for `|w| < |z|`, using the
/// rational closed form when `i` and `j` share an orbit and the factorwise
/// expansion otherwise. `q_shift` is the power `s` of `q` multiplying `x`.
pub fn closed_form_product(
    od: &OrbitData,
    ctx: &CycloCtx,
    i: usize,
    j: usize,
    q_shift: i32,
    order: usize,
) -> TruncSeries<Laurent> {
    let twists = od.twists_to(j, i);
    let Some(&r) = twists.first() else {
        let factors: Vec<_> = pair_factors(od, i, j)
            .into_iter()
            .map(|(c, a)| (c.mul(Unit::xi_q(0, q_shift)), a))
            .collect();
        return qdef_product(ctx, &factors, Region::WSmall, order);
    };
    // j = μ^r(i): the product is R_ii(ξ^{-r} q^s x) with
    // R_ii(x) = (1 + x^{d_ii}) / ((1 − q^{d_i} x^{d_i})(1 − q^{−d_i} x^{d_i}))
    // (numerator 1 when d_ii = 0).
    let di = od.d_plus(i) as usize;
    let dii = od.d(i, i) as usize;
    let scale = Unit::xi_q(-(r as i64), q_shift);
    let mut base = vec![Laurent::zero(ctx); order + 1];
    // 1/((1 − q^{d} y)(1 − q^{−d} y)) = Σ_m [m+1]_{q^d} y^m, y = x^{d_i}
    for m in 0..=order / di {
        base[m * di] = qint_v(ctx, m as i64 + 1, 2 * di as i32);
    }
    let mut coeffs = base.clone();
    if dii > 0 {
        for n in dii..=order {
            let t = base[n - dii].clone();
            coeffs[n].add_assign(&t);
        }
    }
    let d = order as i32;
    let mut s = TruncSeries::new(ctx, &["x"], vec![(-2 * d, 2 * d)], &Region::WSmall.tag());
    for (n, c) in coeffs.iter().enumerate() {
        s.add_term(
            vec![2 * n as i32],
            &c.mul(&scale.pow(n as i64).laurent(ctx)),
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::catalog;
    use crate::coeff::{qint, CycloField};

    /// The defining infinite product telescopes for `a ≥ 0` to
    /// `∏_{k=0}^{a−1} (1 − q^{a−1−2k} z)`.
    fn product_oracle(ctx: &CycloCtx, a: i64, order: usize) -> Vec<Laurent> {
        let mut p = vec![Laurent::one(ctx)];
        for k in 0..a {
            let c = Laurent::q_pow(ctx, (a - 1 - 2 * k) as i32);
            let mut np = vec![Laurent::zero(ctx); p.len() + 1];
            for (n, x) in p.iter().enumerate() {
                np[n].add_assign(x);
                np[n + 1].sub_assign(&x.mul(&c));
            }
            p = np;
        }
        p.resize(order + 1, Laurent::zero(ctx));
        p.truncate(order + 1);
        p
    }

    #[test]
    fn binom_small_cases() {
        let ctx = CycloField::new(1);
        let one = qdef_binom_expand(&ctx, 1, 10);
        assert_eq!(one.coeff_at(0), Laurent::one(&ctx));
        assert_eq!(one.coeff_at(1), Laurent::from_int(&ctx, -1));
        assert_eq!(one.terms().count(), 2);
        let zero = qdef_binom_expand(&ctx, 0, 10);
        assert_eq!(zero.terms().count(), 1);
        let two = qdef_binom_expand(&ctx, 2, 10);
        assert_eq!(two.coeff_at(1), qint(&ctx, 2).neg());
        for a in 0..5 {
            let s = qdef_binom_expand(&ctx, a, 8);
            for (n, c) in product_oracle(&ctx, a, 8).iter().enumerate() {
                assert_eq!(&s.coeff_at(n as i32), c, "a={a} n={n}");
            }
        }
    }

    #[test]
    fn negative_exponent_is_inverse() {
        let ctx = CycloField::new(1);
        for a in 1..4 {
            let p = qdef_binom_expand(&ctx, a, 12);
            let m = qdef_binom_expand(&ctx, -a, 12);
            let prod = p.mul(&m).unwrap();
            assert_eq!(prod.coeff_at(0), Laurent::one(&ctx));
            assert_eq!(prod.terms().count(), 1);
        }
    }

    #[test]
    fn region_two_single_factor() {
        let ctx = CycloField::new(1);
        // (1 − x)^{-1} for |x| > 1 is −Σ_{n≥1} x^{−n}
        let s = qdef_product(&ctx, &[(Unit::ONE, -1)], Region::ZSmall, 6);
        for n in -6..=6 {
            let want = if n < 0 { -1 } else { 0 };
            assert_eq!(s.coeff_at(n), Laurent::from_int(&ctx, want), "n={n}");
        }
    }

    #[test]
    fn closed_form_examples() {
        let od = catalog::a2_flip();
        let ctx = CycloField::new(od.n());
        let s = closed_form_product(&od, &ctx, 0, 0, 0, 10);
        let q = Laurent::q_pow(&ctx, 1);
        let want = Laurent::one(&ctx).add(&q).add(&Laurent::q_pow(&ctx, -1));
        assert_eq!(s.coeff_at(1), want);

        let od = catalog::a3_flip();
        let ctx = CycloField::new(od.n());
        let s = closed_form_product(&od, &ctx, 0, 0, 0, 10);
        for n in 0..=10 {
            assert_eq!(s.coeff_at(n), qint(&ctx, n as i64 + 1));
        }
    }

    #[test]
    fn closed_form_matches_factor_route() {
        let fixtures = [
            catalog::a2_flip(),
            catalog::a3_flip(),
            catalog::a4_flip(),
            catalog::d4_triality(),
            catalog::untwisted(catalog::type_a(3)),
        ];
        for od in fixtures {
            let ctx = CycloField::new(od.n());
            for i in 0..od.nu() {
                for j in 0..od.nu() {
                    for shift in [-1, 0, 1] {
                        let closed = closed_form_product(&od, &ctx, i, j, shift, 20);
                        let factors: Vec<_> = pair_factors(&od, i, j)
                            .into_iter()
                            .map(|(c, a)| (c.mul(Unit::xi_q(0, shift)), a))
                            .collect();
                        let direct = qdef_product(&ctx, &factors, Region::WSmall, 20);
                        assert_eq!(closed, direct, "i={i} j={j} shift={shift}");
                    }
                }
            }
        }
    }
}
