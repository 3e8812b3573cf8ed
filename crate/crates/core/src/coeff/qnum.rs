//! q-integers and Gaussian binomials.

use super::cyclo::CycloCtx;
use super::elem::CoeffElem;
use super::laurent::Laurent;
use super::rat::Rat;
use super::CoeffError;

/// `v`-exponent step of the base `q^b`, i.e. `2b`. Panics unless `2b ∈ ℤ`.
fn v_step(b: &Rat) -> i32 {
    let two_b = b * &Rat::from_int(2);
    assert!(two_b.is_integer(), "q-base exponent {b} must lie in ½ℤ");
    two_b.to_string().parse().expect("small exponent")
}

/// `[n]_{q^b}` as a Laurent polynomial, where `q^b = v^{step}`.
pub fn qint_v(ctx: &CycloCtx, n: i64, step: i32) -> Laurent {
    if n < 0 {
        return qint_v(ctx, -n, step).neg();
    }
    if step == 0 {
        return Laurent::from_int(ctx, n);
    }
    let mut acc = Laurent::zero(ctx);
    for j in 0..n {
        let e = step * (n as i32 - 1 - 2 * j as i32);
        acc.add_assign(&Laurent::v_pow(ctx, e));
    }
    acc
}

/// `[n]_q`
pub fn qint(ctx: &CycloCtx, n: i64) -> Laurent {
    qint_v(ctx, n, 2)
}

/// `[n]_{q^b} = (q^{bn} − q^{−bn})/(q^b − q^{−b})` for `b ∈ ½ℤ`.
pub fn q_integer(ctx: &CycloCtx, n: i64, b: &Rat) -> CoeffElem {
    CoeffElem::from_laurent(qint_v(ctx, n, v_step(b)))
}

/// Gaussian binomial in `v`-step form, via the q-Pascal rule
/// `[n r] = q^{-r}[n-1 r] + q^{n-r}[n-1 r-1]`.
pub fn gauss_binom_v(ctx: &CycloCtx, n: u32, r: u32, step: i32) -> Laurent {
    if r > n {
        return Laurent::zero(ctx);
    }
    // row[k] = [m k]
    let mut row = vec![Laurent::one(ctx)];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m as usize + 1);
        for k in 0..=m {
            let mut acc = Laurent::zero(ctx);
            if k < m {
                acc.add_assign(&row[k as usize].shift(-step * k as i32));
            }
            if k > 0 {
                acc.add_assign(&row[k as usize - 1].shift(step * (m - k) as i32));
            }
            next.push(acc);
        }
        row = next;
    }
    row.swap_remove(r as usize)
}

/// Gaussian binomial `[n r]_{q^b}`.
pub fn gauss_binom(ctx: &CycloCtx, n: i64, r: i64, b: &Rat) -> Result<CoeffElem, CoeffError> {
    if n < 0 || r < 0 || r > n {
        return Err(CoeffError::IndexOutOfRange { n, r });
    }
    Ok(CoeffElem::from_laurent(gauss_binom_v(
        ctx,
        n as u32,
        r as u32,
        v_step(b),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CycloField;

    fn qint_by_ratio(ctx: &CycloCtx, n: i64) -> CoeffElem {
        let num = Laurent::q_pow(ctx, n as i32).sub(&Laurent::q_pow(ctx, -n as i32));
        let den = Laurent::q_pow(ctx, 1).sub(&Laurent::q_pow(ctx, -1));
        CoeffElem::from_fraction(num, den).unwrap()
    }

    #[test]
    fn q_integer_examples() {
        let ctx = CycloField::new(1);
        assert_eq!(q_integer(&ctx, 2, &Rat::ONE).to_string(), "(v^4+1)/(v^2)");
        assert!(q_integer(&ctx, 0, &Rat::new(1, 2)).is_zero());
        assert!(q_integer(&ctx, 0, &Rat::from_int(3)).is_zero());
        let half = q_integer(&ctx, 2, &Rat::new(1, 2));
        assert_eq!(
            half,
            CoeffElem::from_laurent(Laurent::v_pow(&ctx, 1).add(&Laurent::v_pow(&ctx, -1)))
        );
    }

    #[test]
    fn q_integer_matches_ratio_and_is_odd() {
        let ctx = CycloField::new(1);
        for n in -8..=8 {
            assert_eq!(q_integer(&ctx, n, &Rat::ONE), qint_by_ratio(&ctx, n));
            assert_eq!(qint(&ctx, -n), qint(&ctx, n).neg());
        }
    }

    #[test]
    fn gauss_binom_examples() {
        let ctx = CycloField::new(1);
        let b = Rat::ONE;
        assert_eq!(gauss_binom(&ctx, 2, 1, &b).unwrap(), q_integer(&ctx, 2, &b));
        assert!(gauss_binom(&ctx, 3, 0, &b).unwrap().is_one());
        let want = [8, 4, 0, -4, -8]
            .iter()
            .fold(Laurent::zero(&ctx), |acc, e| {
                acc.add(&Laurent::v_pow(&ctx, *e))
            })
            .add(&Laurent::one(&ctx));
        assert_eq!(
            gauss_binom(&ctx, 4, 2, &b).unwrap(),
            CoeffElem::from_laurent(want)
        );
        assert_eq!(
            gauss_binom(&ctx, 2, 3, &b),
            Err(CoeffError::IndexOutOfRange { n: 2, r: 3 })
        );
    }

    #[test]
    fn gauss_binom_product_formula_and_symmetry() {
        let ctx = CycloField::new(1);
        for step in [1, 2, 4] {
            for n in 0..7u32 {
                for r in 0..=n {
                    let mut num = Laurent::one(&ctx);
                    let mut den = Laurent::one(&ctx);
                    for k in 0..r {
                        num = num.mul(&qint_v(&ctx, (n - k) as i64, step));
                        den = den.mul(&qint_v(&ctx, (k + 1) as i64, step));
                    }
                    let g = gauss_binom_v(&ctx, n, r, step);
                    assert_eq!(num.div_exact(&den).unwrap(), g);
                    assert_eq!(gauss_binom_v(&ctx, n, n - r, step), g);
                }
            }
        }
    }
}
