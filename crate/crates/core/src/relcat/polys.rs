//! The structure polynomials F±, G±, g_ij, p_ij^± and p_i, and the
//! Heisenberg structure constants.

use super::RelError;
use crate::cartan::OrbitData;
use crate::coeff::{qint, qint_v, CycloCtx, Laurent, Rat};
use crate::distcalc::{TruncSeries, Unit};
use crate::poly::MPoly;

/// Polynomial in `(z, w)`.
pub type BivarPoly = MPoly<Laurent>;
/// Polynomial in `(z₁, z₂, z₃)`.
pub type TrivarPoly = MPoly<Laurent>;

fn term(ctx: &CycloCtx, nvars: usize, k: usize, e: i32, c: Laurent) -> MPoly<Laurent> {
    MPoly::var_term(ctx, nvars, k, e, c)
}

/// `(F±_ij, G±_ij)` with
/// `F = ∏_{k∈Γ_ij} (z − ξ^k q^{±a_{iμ^k(j)}} w)` and
/// `G = ∏_{k∈Γ_ij} (q^{±a_{iμ^k(j)}} z − ξ^k w)`.
pub fn build_fg(
    od: &OrbitData,
    ctx: &CycloCtx,
    i: usize,
    j: usize,
    sign: i32,
) -> (BivarPoly, BivarPoly) {
    let one = Laurent::one(ctx);
    let mut f = BivarPoly::one(ctx, 2);
    let mut g = BivarPoly::one(ctx, 2);
    for &k in od.gamma(i, j) {
        let a = od.a_twisted(i, j, k as i64) as i32;
        let xi = Unit::xi_q(k as i64, 0).laurent(ctx);
        let qa = Laurent::q_pow(ctx, sign * a);
        f = f.mul(&term(ctx, 2, 0, 1, one.clone()).sub(&term(ctx, 2, 1, 1, xi.mul(&qa))));
        g = g.mul(&term(ctx, 2, 0, 1, qa).sub(&term(ctx, 2, 1, 1, xi)));
    }
    (f, g)
}

/// Coefficients `0..=order` of `g_ij(c·z)^{power}` expanded for `|z| < 1`,
/// where `g_ij(z) = ∏_{k∈Γ_ij} (q^{a_k} − ξ^k z)/(1 − ξ^k q^{a_k} z)`.
pub fn g_coeffs(
    od: &OrbitData,
    ctx: &CycloCtx,
    i: usize,
    j: usize,
    power: i32,
    c: Unit,
    order: usize,
) -> Vec<Laurent> {
    assert!(power == 1 || power == -1);
    let mut acc = vec![Laurent::zero(ctx); order + 1];
    acc[0] = Laurent::one(ctx);
    for &k in od.gamma(i, j) {
        let a = od.a_twisted(i, j, k as i64) as i32;
        let xi = Unit::xi_q(k as i64, 0);
        // factor (n0 + n1 z)/(d0 − d1 z) with d0 a unit
        let (n0, n1, d0, d1) = if power == 1 {
            (
                Unit::xi_q(0, a),
                (xi, -1),
                Unit::ONE,
                xi.mul(Unit::xi_q(0, a)),
            )
        } else {
            (
                Unit::ONE,
                (xi.mul(Unit::xi_q(0, a)), -1),
                Unit::xi_q(0, a),
                xi,
            )
        };
        // 1/(d0 − d1 z) = d0^{-1} Σ (d1/d0)^n z^n
        let ratio = d1.mul(d0.inv());
        let mut fac = vec![Laurent::zero(ctx); order + 1];
        for (n, slot) in fac.iter_mut().enumerate() {
            let geo = d0.inv().mul(ratio.pow(n as i64)).laurent(ctx);
            let mut v = n0.laurent(ctx).mul(&geo);
            if n > 0 {
                let prev = d0.inv().mul(ratio.pow(n as i64 - 1)).laurent(ctx);
                let t = n1.0.laurent(ctx).mul(&prev).scale_rat(&Rat::from_int(n1.1));
                v.add_assign(&t);
            }
            *slot = v;
        }
        let mut next = vec![Laurent::zero(ctx); order + 1];
        for (p, x) in acc.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, y) in fac.iter().enumerate().take(order + 1 - p) {
                next[p + r].add_assign(&x.mul(y));
            }
        }
        acc = next;
    }
    for (n, x) in acc.iter_mut().enumerate() {
        *x = x.mul(&c.pow(n as i64).laurent(ctx));
    }
    acc
}

/// `g_ij(z)` to order `D` as a one-variable series.
pub fn expand_g(
    od: &OrbitData,
    ctx: &CycloCtx,
    i: usize,
    j: usize,
    order: usize,
) -> TruncSeries<Laurent> {
    let mut s = TruncSeries::new(ctx, &["z"], vec![(0, 2 * order as i32)], &["1", "z"]);
    for (n, c) in g_coeffs(od, ctx, i, j, 1, Unit::ONE, order)
        .iter()
        .enumerate()
    {
        s.add_term(vec![2 * n as i32], c);
    }
    s
}

/// `p±_ij(z, w) = (z^{d_ii} + q^{∓d_ii} w^{d_ii}) (q^{±2d_ij} z^{d_ij} − w^{d_ij}) / (q^{±2d_i} z^{d_i} − w^{d_i})`.
pub fn build_p_ij(
    od: &OrbitData,
    ctx: &CycloCtx,
    i: usize,
    j: usize,
    sign: i32,
) -> Result<BivarPoly, RelError> {
    if od.a(i, j) >= 0 || od.same_orbit(i, j) {
        return Err(RelError::Inapplicable(format!(
            "p_ij needs a_ij < 0 and i outside the orbit of j (i={}, j={})",
            i + 1,
            j + 1
        )));
    }
    let (dii, dij, di) = (od.d(i, i) as i32, od.d(i, j) as i32, od.d_plus(i) as i32);
    let one = Laurent::one(ctx);
    let first = term(ctx, 2, 0, dii, one.clone()).add(&term(
        ctx,
        2,
        1,
        dii,
        Laurent::q_pow(ctx, -sign * dii),
    ));
    let num = term(ctx, 2, 0, dij, Laurent::q_pow(ctx, 2 * sign * dij)).sub(&term(
        ctx,
        2,
        1,
        dij,
        one.clone(),
    ));
    let den =
        term(ctx, 2, 0, di, Laurent::q_pow(ctx, 2 * sign * di)).sub(&term(ctx, 2, 1, di, one));
    let quo = num.div_exact(&den).map_err(|_| RelError::InexactDivision)?;
    Ok(first.mul(&quo))
}

/// `p_i(z₁, z₂, z₃)` on the branch paired with `x^{sign}`: the upper signs of
/// the displayed `∓`/`±` for `sign = +1`.
pub fn build_p_i(
    od: &OrbitData,
    ctx: &CycloCtx,
    i: usize,
    sign: i32,
) -> Result<TrivarPoly, RelError> {
    let (dii, di) = (od.d(i, i) as i32, od.d_plus(i) as i32);
    if dii == 0 {
        return Err(RelError::Inapplicable(format!(
            "p_i needs d_ii > 0 (i={})",
            i + 1
        )));
    }
    let one = Laurent::one(ctx);
    let lead = term(ctx, 3, 0, dii, Laurent::v_pow(ctx, -3 * sign * dii))
        .sub(&term(
            ctx,
            3,
            1,
            dii,
            Laurent::v_pow(ctx, dii).add(&Laurent::v_pow(ctx, -dii)),
        ))
        .add(&term(ctx, 3, 2, dii, Laurent::v_pow(ctx, 3 * sign * dii)));
    let pair = |a: usize, b: usize, d: i32| {
        term(ctx, 3, a, d, one.clone())
            .sub(&term(ctx, 3, b, d, one.clone()))
            .mul(&term(ctx, 3, a, d, one.clone()).sub(&term(
                ctx,
                3,
                b,
                d,
                Laurent::q_pow(ctx, -2 * sign * d),
            )))
    };
    let mut out = lead;
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let ratio = pair(a, b, dii)
            .div_exact(&pair(a, b, di))
            .map_err(|_| RelError::InexactDivision)?;
        out = out.mul(&ratio);
    }
    Ok(out)
}

/// `κ_ij(m) = (1/m) Σ_k ξ^{mk} [m a_{iμ^k(j)}]_q`, the constant in
/// `[h_{i,m}, h_{j,−m}] = κ_ij(m) [m]_{q^c}`.
pub fn kappa(od: &OrbitData, ctx: &CycloCtx, i: usize, j: usize, m: i64) -> Laurent {
    assert!(m != 0);
    let mut s = Laurent::zero(ctx);
    for k in 0..od.n() as i64 {
        let a = od.a_twisted(i, j, k);
        if a != 0 {
            s.add_assign(&qint(ctx, m * a).mul(&Unit::xi_q(m * k, 0).laurent(ctx)));
        }
    }
    s.scale_rat(&Rat::new(1, m))
}

/// `κ_ij(m)/[m]_q = (1/m) Σ_k ξ^{mk} [a_{iμ^k(j)}]_{q^m}`.
pub fn lambda(od: &OrbitData, ctx: &CycloCtx, i: usize, j: usize, m: i64) -> Laurent {
    assert!(m != 0);
    let mut s = Laurent::zero(ctx);
    for k in 0..od.n() as i64 {
        let a = od.a_twisted(i, j, k);
        if a != 0 {
            s.add_assign(&qint_v(ctx, a, 2 * m as i32).mul(&Unit::xi_q(m * k, 0).laurent(ctx)));
        }
    }
    s.scale_rat(&Rat::new(1, m))
}
