//! Truncated formal-distribution calculus: q-deformed binomials,
//! region-tagged expansions, delta functions and the identities built on them.

mod identities;
mod qbinom;
mod series;

pub use identities::{
    check_cgjt, check_delta_prop, check_ps0, check_serre_scalar, delta_prop_terms, CheckOutcome,
    DeltaTerm,
};
pub use qbinom::{
    closed_form_product, pair_factors, qdef_binom_expand, qdef_product, qdef_product_coeffs,
    Region, Unit,
};
pub use series::TruncSeries;

use thiserror::Error;

use crate::cartan::OrbitData;
use crate::coeff::{CoeffElem, CycloCtx};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistError {
    #[error("series expanded in different regions ({left} vs {right})")]
    RegionMismatch { left: String, right: String },
    #[error("series have different variables or windows")]
    WindowMismatch,
    #[error("constants must be distinct and nonzero with exponents ≥ −1")]
    DegenerateConstants,
    #[error("inapplicable: {0}")]
    Inapplicable(String),
}

/// Every identity check for one Cartan datum: the dual-route product
/// expansion and delta proposition for all pairs, the partial-fraction lemma
/// on the shifted constants of each pair, ps0, and the Serre scalar identity
/// for each representative with `d_ii > 0`.
pub fn identity_scorecard(od: &OrbitData, ctx: &CycloCtx, order: usize) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for i in 0..od.nu() {
        for j in 0..od.nu() {
            let closed = closed_form_product(od, ctx, i, j, 0, order);
            let direct = qdef_product(ctx, &pair_factors(od, i, j), Region::WSmall, order);
            out.push(CheckOutcome {
                name: format!("dual_route({},{})", i + 1, j + 1),
                passed: closed == direct,
                coefficients_checked: 2 * order + 1,
                witness: (closed != direct)
                    .then(|| "closed form differs from factorwise product".to_string()),
            });
            out.push(check_delta_prop(od, ctx, i, j, order));
        }
    }
    // distinct poles ξ^k q^{±1} of the i = j product, as in the delta proposition
    for &i in od.reps() {
        let mut consts = Vec::new();
        for k in od.twists_to(i, i) {
            for s in [1, -1] {
                consts.push(CoeffElem::zeta(ctx, 2 * k as i64).mul(&CoeffElem::q_pow(ctx, s)));
            }
        }
        let exps = vec![-1; consts.len()];
        let mut r = check_cgjt(&consts, &exps, order.min(10)).expect("poles are distinct");
        r.name = format!("cgjt({})", i + 1);
        out.push(r);
    }
    out.push(check_ps0(ctx));
    for &i in od.reps() {
        if od.d(i, i) > 0 {
            for sign in [1, -1] {
                let r = check_serre_scalar(ctx, od.d_plus(i), od.d(i, i), sign)
                    .expect("d_i | d_ii holds after validation");
                out.push(r);
            }
        }
    }
    out
}
