//! Standalone checks of the formal-distribution identities used by the
//! relation proofs.

use serde::Serialize;

use super::qbinom::{closed_form_product, pair_factors, qdef_product, Region};
use super::series::TruncSeries;
use super::DistError;
use crate::cartan::OrbitData;
use crate::coeff::{Coeff, CoeffElem, CycloCtx, Laurent, Rat};
use crate::poly::MPoly;

/// Result of one identity check. `witness` describes the first mismatching
/// coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub coefficients_checked: usize,
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn new(name: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: true,
            coefficients_checked: 0,
            witness: None,
        }
    }

    fn record(&mut self, at: impl FnOnce() -> String, got: &CoeffElem, want: &CoeffElem) {
        self.coefficients_checked += 1;
        if self.passed && got != want {
            self.passed = false;
            self.witness = Some(format!("{}: got {got}, expected {want}", at()));
        }
    }
}

/// `prefactor · δ(scale · w/z)`
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaTerm {
    pub scale: CoeffElem,
    pub prefactor: CoeffElem,
}

impl DeltaTerm {
    /// Coefficient of `(w/z)^n`, namely `prefactor · scale^n`.
    pub fn coeff_at(&self, n: i32) -> CoeffElem {
        let p = self.scale.pow(n).expect("delta scale is nonzero");
        self.prefactor.mul(&p)
    }

    pub fn expand(&self, order: usize) -> TruncSeries<CoeffElem> {
        let d = order as i32;
        let mut s = TruncSeries::new(self.scale.ctx(), &["x"], vec![(-2 * d, 2 * d)], &["z", "w"]);
        for n in -d..=d {
            s.add_term(vec![2 * n], &self.coeff_at(n));
        }
        s
    }
}

fn q_elem(ctx: &CycloCtx, e: i32) -> CoeffElem {
    CoeffElem::q_pow(ctx, e)
}

/// The delta terms on the right of the delta-function proposition for the
/// pair `(i, j)`: empty unless `i` lies in the orbit of `j`.
pub fn delta_prop_terms(od: &OrbitData, ctx: &CycloCtx, i: usize, j: usize) -> Vec<DeltaTerm> {
    let di = od.d_plus(i) as i32;
    let dii = od.d(i, i) as i32;
    let one = CoeffElem::one(ctx);
    let num = |s: i32| {
        if dii > 0 {
            one.add(&q_elem(ctx, s * dii))
        } else {
            one.clone()
        }
    };
    let den = |s: i32| {
        one.sub(&q_elem(ctx, 2 * s * di))
            .scale_rat(&Rat::from_int(di as i64))
    };
    let p_plus = num(-1).div(&den(-1)).expect("nonzero");
    let p_minus = num(1).div(&den(1)).expect("nonzero");
    let mut out = Vec::new();
    for k in od.twists_to(i, j) {
        let xi = CoeffElem::zeta(ctx, 2 * k as i64);
        out.push(DeltaTerm {
            scale: xi.mul(&q_elem(ctx, 1)),
            prefactor: p_plus.clone(),
        });
        out.push(DeltaTerm {
            scale: xi.mul(&q_elem(ctx, -1)),
            prefactor: p_minus.clone(),
        });
    }
    out
}

/// Difference of the two expansions of
/// `∏_k (1 − ξ^k w/z)^{−⟨α_i|μ^kα_j⟩}_{q²}` against the delta terms, on
/// `(w/z)^n` for `|n| ≤ D`.
pub fn check_delta_prop(
    od: &OrbitData,
    ctx: &CycloCtx,
    i: usize,
    j: usize,
    order: usize,
) -> CheckOutcome {
    let large = closed_form_product(od, ctx, i, j, 0, order);
    let small = qdef_product(ctx, &pair_factors(od, i, j), Region::ZSmall, order);
    let diff = large
        .sub_across_regions(&small)
        .expect("both expansions share the window");
    let rhs = delta_prop_terms(od, ctx, i, j);
    let mut out = CheckOutcome::new(format!("delta_prop({},{})", i + 1, j + 1));
    let d = order as i32;
    for n in -d..=d {
        let got = diff.coeff_at(n).to_elem();
        let want = rhs
            .iter()
            .fold(CoeffElem::zero(ctx), |acc, t| acc.add(&t.coeff_at(n)));
        out.record(|| format!("(w/z)^{n}"), &got, &want);
    }
    out
}

/// `∏(1 − c x)^a` with `a ≥ −1`, expanded in one region on the given window.
fn cgjt_product(
    ctx: &CycloCtx,
    consts: &[CoeffElem],
    exps: &[i64],
    region: Region,
    lo: i32,
    hi: i32,
) -> TruncSeries<CoeffElem> {
    let one = CoeffElem::one(ctx);
    let mut acc = TruncSeries::new(ctx, &["x"], vec![(2 * lo, 2 * hi)], &region.tag());
    acc.add_term(vec![0], &one);
    for (c, &a) in consts.iter().zip(exps) {
        let mut f = acc.empty_like();
        if a >= 0 {
            // binomial expansion of (1 − c x)^a
            let mut binom = one.clone();
            for k in 0..=a {
                let coeff = binom.mul(&c.neg().pow(k as i32).expect("nonzero"));
                f.add_term(vec![2 * k as i32], &coeff);
                binom = binom.scale_rat(&Rat::new(a - k, k + 1));
            }
        } else {
            match region {
                Region::WSmall => {
                    for n in 0..=hi {
                        f.add_term(vec![2 * n], &c.pow(n).expect("nonzero"));
                    }
                }
                Region::ZSmall => {
                    for n in 1..=-lo {
                        f.add_term(vec![-2 * n], &c.pow(-n).expect("nonzero").neg());
                    }
                }
            }
        }
        acc = acc.mul(&f).expect("same window");
    }
    acc
}

/// The partial-fraction lemma for distinct nonzero constants:
/// `∏(1 − c_i x)^{a_i}` expanded both ways differs by
/// `Σ_{a_i = −1} ∏_{j≠i} (1 − c_j c_i^{-1})^{a_j} δ(c_i x)`.
pub fn check_cgjt(
    consts: &[CoeffElem],
    exps: &[i64],
    order: usize,
) -> Result<CheckOutcome, DistError> {
    if consts.is_empty() || consts.len() != exps.len() || exps.iter().any(|&a| a < -1) {
        return Err(DistError::DegenerateConstants);
    }
    let ctx = consts[0].ctx().clone();
    for (k, c) in consts.iter().enumerate() {
        if c.is_zero() || consts[..k].contains(c) {
            return Err(DistError::DegenerateConstants);
        }
    }
    let d = order as i32;
    let b: i32 = exps.iter().filter(|&&a| a > 0).sum::<i64>() as i32;
    let w = d + b;
    let large = cgjt_product(&ctx, consts, exps, Region::WSmall, -w, w);
    let small = cgjt_product(&ctx, consts, exps, Region::ZSmall, -w, w);
    let diff = large.sub_across_regions(&small)?;
    let mut terms = Vec::new();
    for (i, (ci, &ai)) in consts.iter().zip(exps).enumerate() {
        if ai != -1 {
            continue;
        }
        let inv = ci.inv().expect("nonzero");
        let mut pref = CoeffElem::one(&ctx);
        for (j, (cj, &aj)) in consts.iter().zip(exps).enumerate() {
            if j != i {
                let f = CoeffElem::one(&ctx).sub(&cj.mul(&inv));
                pref = pref.mul(
                    &f.pow(aj as i32)
                        .map_err(|_| DistError::DegenerateConstants)?,
                );
            }
        }
        terms.push(DeltaTerm {
            scale: ci.clone(),
            prefactor: pref,
        });
    }
    let mut out = CheckOutcome::new("cgjt");
    for n in -d..=d {
        let got = diff.coeff_at(n);
        let want = terms
            .iter()
            .fold(CoeffElem::zero(&ctx), |acc, t| acc.add(&t.coeff_at(n)));
        out.record(|| format!("x^{n}"), &got, &want);
    }
    Ok(out)
}

type P3 = MPoly<Laurent>;

fn var(ctx: &CycloCtx, k: usize, e: i32, c: Laurent) -> P3 {
    P3::var_term(ctx, 3, k, e, c)
}

/// The ps0 expression with denominators cleared by
/// `(z₁ − q⁻¹w)(z₂ − q⁻¹w)(w − q⁻¹z₁)(w − q⁻¹z₂)`, as a polynomial in
/// `(z_a, z_b, w)` with `(a, b)` the given variable slots.
fn ps0_cleared(ctx: &CycloCtx, a: usize, b: usize) -> P3 {
    let one = Laurent::one(ctx);
    let qi = Laurent::q_pow(ctx, -1);
    let za = var(ctx, a, 1, one.clone());
    let zb = var(ctx, b, 1, one.clone());
    let w = var(ctx, 2, 1, one.clone());
    let za_q = var(ctx, a, 1, qi.clone());
    let zb_q = var(ctx, b, 1, qi.clone());
    let w_q = var(ctx, 2, 1, qi.clone());
    let two = P3::constant(ctx, 3, Laurent::q_pow(ctx, 1).add(&qi));
    let t1 = w.sub(&za_q).mul(&w.sub(&zb_q));
    let t2 = two.mul(&zb.sub(&w_q)).mul(&w.sub(&za_q));
    let t3 = za.sub(&w_q).mul(&zb.sub(&w_q));
    let lead = za.sub(&var(ctx, b, 1, Laurent::q_pow(ctx, -2)));
    lead.mul(&t1.add(&t2).add(&t3))
}

/// `Σ_n c^n w^n s^{−n−1}`: the expansion of `1/(s − c w)` in powers of `w`.
fn inv_series(
    ctx: &CycloCtx,
    window: &[(i32, i32)],
    s_slot: usize,
    c: &Laurent,
    scale: &Laurent,
    wmax: i32,
) -> TruncSeries<Laurent> {
    let mut out = TruncSeries::new(ctx, &["z1", "z2", "w"], window.to_vec(), &["z", "w"]);
    let mut cn = scale.clone();
    for n in 0..=wmax {
        let mut e = vec![0; 3];
        e[s_slot] = -2 * (n + 1);
        e[2] = 2 * n;
        out.add_term(e, &cn);
        cn = cn.mul(c);
    }
    out
}

/// Region-expanded ps0 expression `P(z_a, z_b, w)` in `ℂ((z₁,z₂))((w))`.
fn ps0_series(
    ctx: &CycloCtx,
    a: usize,
    b: usize,
    window: &[(i32, i32)],
    wmax: i32,
) -> TruncSeries<Laurent> {
    let one = Laurent::one(ctx);
    let q = Laurent::q_pow(ctx, 1);
    let qi = Laurent::q_pow(ctx, -1);
    let neg_q = q.neg();
    // 1/(s − w/q) and 1/(w − s/q) = −q/(s − q w)
    let small = |s: usize| inv_series(ctx, window, s, &qi, &one, wmax);
    let big = |s: usize| inv_series(ctx, window, s, &q, &neg_q, wmax);
    let two = q.add(&qi);
    let t1 = small(a).mul(&small(b)).unwrap();
    let t2 = small(a).mul(&big(b)).unwrap().scale(&two);
    let t3 = big(a).mul(&big(b)).unwrap();
    let sum = t1.add(&t2).unwrap().add(&t3).unwrap();
    let mut lead = sum.empty_like();
    let mut ea = vec![0; 3];
    ea[a] = 2;
    lead.add_term(ea, &one);
    let mut eb = vec![0; 3];
    eb[b] = 2;
    lead.add_term(eb, &Laurent::q_pow(ctx, -2).neg());
    lead.mul(&sum).unwrap()
}

/// The ps0 lemma: `P(z₁, z₂, w) − P(z₂, z₁, w) = 0`, checked once as a
/// polynomial identity after clearing denominators and once on the expansion
/// in `ℂ((z₁,z₂))((w))` truncated to order 8 in every variable.
pub fn check_ps0(ctx: &CycloCtx) -> CheckOutcome {
    let mut out = CheckOutcome::new("ps0");
    let poly = ps0_cleared(ctx, 0, 1).sub(&ps0_cleared(ctx, 1, 0));
    out.coefficients_checked += 1;
    if !poly.is_zero() {
        out.passed = false;
        out.witness = Some(format!("cleared numerator {poly}"));
        return out;
    }
    let trunc = 8;
    let inner = [
        (-2 * (trunc + 4), 2 * (trunc + 4)),
        (-2 * (trunc + 4), 2 * (trunc + 4)),
        (0, 2 * trunc),
    ];
    let diff = ps0_series(ctx, 0, 1, &inner, trunc)
        .sub(&ps0_series(ctx, 1, 0, &inner, trunc))
        .expect("same region");
    let diff = diff.restrict(vec![
        (-2 * trunc, 2 * trunc),
        (-2 * trunc, 2 * trunc),
        (0, 2 * trunc),
    ]);
    let zero = CoeffElem::zero(ctx);
    for z1 in -trunc..=trunc {
        for z2 in -trunc..=trunc {
            for w in 0..=trunc {
                let got = diff.coeff(&[2 * z1, 2 * z2, 2 * w]).to_elem();
                out.record(|| format!("z1^{z1} z2^{z2} w^{w}"), &got, &zero);
            }
        }
    }
    out
}

/// The cleared `S₃`-symmetrization for the scalar Serre identity, with the
/// sign of the leading bracket and of the product factors given separately.
fn serre_scalar_sum(ctx: &CycloCtx, dii: i32, lead_sign: i32, prod_sign: i32) -> P3 {
    let one = Laurent::one(ctx);
    let zp = |k: usize, c: Laurent| var(ctx, k, dii, c);
    let lead = |s: [usize; 3]| {
        zp(s[0], Laurent::v_pow(ctx, -3 * lead_sign * dii))
            .sub(&zp(
                s[1],
                Laurent::v_pow(ctx, dii).add(&Laurent::v_pow(ctx, -dii)),
            ))
            .add(&zp(s[2], Laurent::v_pow(ctx, 3 * lead_sign * dii)))
    };
    let num = |a: usize, b: usize| {
        zp(a, one.clone())
            .sub(&zp(b, one.clone()))
            .mul(&zp(a, one.clone()).sub(&zp(b, Laurent::q_pow(ctx, -2 * prod_sign * dii))))
    };
    let den =
        |a: usize, b: usize| zp(a, one.clone()).add(&zp(b, Laurent::q_pow(ctx, -prod_sign * dii)));
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut total = P3::zero(ctx, 3);
    for s in perms {
        let mut t = lead(s);
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            // the complementary denominator factor clears Den(z_σa, z_σb)
            t = t.mul(&num(s[a], s[b])).mul(&den(s[b], s[a]));
        }
        total = total.add(&t);
    }
    total
}

/// The scalar identity behind the Serre relation: the `S₃`-symmetrization of
/// the `p_i`-shaped rational function vanishes. `sign = +1` pairs with `x⁺`.
pub fn check_serre_scalar(
    ctx: &CycloCtx,
    d_i: u32,
    d_ii: u32,
    sign: i32,
) -> Result<CheckOutcome, DistError> {
    if d_ii == 0 || d_i == 0 || d_ii % d_i != 0 || sign.abs() != 1 {
        return Err(DistError::Inapplicable(format!(
            "serre scalar needs d_i | d_ii > 0 (d_i={d_i}, d_ii={d_ii})"
        )));
    }
    let total = serre_scalar_sum(ctx, d_ii as i32, sign, sign);
    let mut out = CheckOutcome::new(format!(
        "serre_scalar(d_i={d_i},d_ii={d_ii},{})",
        if sign > 0 { "+" } else { "-" }
    ));
    out.coefficients_checked = 1;
    if !total.is_zero() {
        out.passed = false;
        out.witness = Some(format!("{} nonzero terms, e.g. {}", total.len(), total));
    }
    Ok(out)
}
