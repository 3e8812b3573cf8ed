//! The root lattice with its bilinear form, the μ-action, the commutator map
//! and an ordered-basis bimultiplicative cocycle realizing it.
//!
//! Roots of unity are handled as exponents of ζ modulo `2N`.

use std::fmt;

use super::{CartanError, OrbitData};
use crate::coeff::{CycloCtx, CycloNum};

/// An element `Σ c_i α_i` of the root lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVec(pub Vec<i64>);

impl RootVec {
    pub fn zero(nu: usize) -> Self {
        RootVec(vec![0; nu])
    }

    pub fn simple(nu: usize, i: usize) -> Self {
        let mut v = vec![0; nu];
        v[i] = 1;
        RootVec(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RootVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        RootVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        RootVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn height(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }
}

impl fmt::Display for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("t[")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl OrbitData {
    /// `⟨α|β⟩`
    pub fn form(&self, alpha: &RootVec, beta: &RootVec) -> i64 {
        let nu = self.nu();
        let mut acc = 0;
        for i in 0..nu {
            if alpha.0[i] == 0 {
                continue;
            }
            for j in 0..nu {
                acc += alpha.0[i] * beta.0[j] * self.a(i, j);
            }
        }
        acc
    }

    /// `μ^k(α)`
    pub fn mu_pow_root(&self, k: i64, alpha: &RootVec) -> RootVec {
        let mut out = vec![0; self.nu()];
        for (i, &c) in alpha.0.iter().enumerate() {
            out[self.mu().apply_pow(k, i)] += c;
        }
        RootVec(out)
    }

    /// `α_(0) = Σ_{k∈ℤ_N} μ^k(α)`
    pub fn fixed_part(&self, alpha: &RootVec) -> RootVec {
        (0..self.n() as i64).fold(RootVec::zero(self.nu()), |acc, k| {
            acc.add(&self.mu_pow_root(k, alpha))
        })
    }

    /// `⟨α_(0)|β⟩`
    pub fn form0(&self, alpha: &RootVec, beta: &RootVec) -> i64 {
        self.form(&self.fixed_part(alpha), beta)
    }

    pub fn simple_root(&self, i: usize) -> RootVec {
        RootVec::simple(self.nu(), i)
    }

    /// ζ-exponent (mod 2N) of `C(α,β) = ∏_k (−ξ^{−k})^{⟨α|μ^kβ⟩}`.
    pub fn commutator_exp(&self, alpha: &RootVec, beta: &RootVec) -> i64 {
        let n = self.n() as i64;
        let mut e = 0i64;
        for k in 0..n {
            let m = self.form(alpha, &self.mu_pow_root(k, beta));
            // −ξ^{−k} = ζ^{N − 2k}
            e += (n - 2 * k) * m;
        }
        e.rem_euclid(2 * n)
    }

    pub fn commutator_map(&self, ctx: &CycloCtx, alpha: &RootVec, beta: &RootVec) -> CycloNum {
        CycloNum::zeta(ctx, self.commutator_exp(alpha, beta))
    }
}

/// Bimultiplicative ε with `ε(α_i,α_j) = C(α_i,α_j)` for `i > j` and 1
/// otherwise.
#[derive(Debug, Clone)]
pub struct Cocycle {
    modulus: i64,
    /// ζ-exponents of `ε(α_i, α_j)`.
    table: Vec<Vec<i64>>,
}

impl Cocycle {
    pub fn new(od: &OrbitData) -> Result<Self, CartanError> {
        let nu = od.nu();
        for i in 0..nu {
            let ai = od.simple_root(i);
            if od.commutator_exp(&ai, &ai) != 0 {
                return Err(CartanError::CocycleObstruction(i + 1));
            }
        }
        let table = (0..nu)
            .map(|i| {
                (0..nu)
                    .map(|j| {
                        if i > j {
                            od.commutator_exp(&od.simple_root(i), &od.simple_root(j))
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Cocycle {
            modulus: 2 * od.n() as i64,
            table,
        })
    }

    /// ζ-exponent (mod 2N) of `ε(α, β)`.
    pub fn exp(&self, alpha: &RootVec, beta: &RootVec) -> i64 {
        let mut e = 0i64;
        for (i, &a) in alpha.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in beta.0.iter().enumerate() {
                e += a * b * self.table[i][j];
            }
        }
        e.rem_euclid(self.modulus)
    }

    pub fn value(&self, ctx: &CycloCtx, alpha: &RootVec, beta: &RootVec) -> CycloNum {
        CycloNum::zeta(ctx, self.exp(alpha, beta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::catalog;
    use crate::coeff::CycloField;
    use rand::{Rng, SeedableRng};

    fn random_root(rng: &mut impl Rng, nu: usize) -> RootVec {
        RootVec((0..nu).map(|_| rng.gen_range(-3..=3)).collect())
    }

    fn fixtures() -> Vec<OrbitData> {
        vec![
            catalog::a2_flip(),
            catalog::a3_flip(),
            catalog::untwisted(catalog::type_a(2)),
            catalog::d4_triality(),
        ]
    }

    #[test]
    fn isometry_and_fixed_part() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for od in fixtures() {
            for _ in 0..200 {
                let a = random_root(&mut rng, od.nu());
                let b = random_root(&mut rng, od.nu());
                let (ma, mb) = (od.mu_pow_root(1, &a), od.mu_pow_root(1, &b));
                assert_eq!(od.form(&ma, &mb), od.form(&a, &b));
                let a0 = od.fixed_part(&a);
                assert_eq!(od.mu_pow_root(1, &a0), a0);
                assert_eq!(od.form(&a0, &b), od.form(&a, &od.fixed_part(&b)));
            }
        }
    }

    #[test]
    fn commutator_examples() {
        let od = catalog::untwisted(catalog::type_a(3));
        let ctx = CycloField::new(1);
        for i in 0..3 {
            for j in 0..3 {
                let c = od.commutator_map(&ctx, &od.simple_root(i), &od.simple_root(j));
                let want = if od.a(i, j) % 2 == 0 { 1 } else { -1 };
                assert_eq!(c, CycloNum::from_rat(&ctx, want.into()));
            }
        }
        let od = catalog::a2_flip();
        let a1 = od.simple_root(0);
        assert_eq!(od.commutator_exp(&a1, &a1), 0);
    }

    #[test]
    fn commutator_antisymmetry() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for od in fixtures() {
            let m = 2 * od.n() as i64;
            for _ in 0..100 {
                let a = random_root(&mut rng, od.nu());
                let b = random_root(&mut rng, od.nu());
                let s = od.commutator_exp(&a, &b) + od.commutator_exp(&b, &a);
                assert_eq!(s.rem_euclid(m), 0);
            }
        }
    }

    #[test]
    fn cocycle_realizes_commutator() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for od in fixtures() {
            let eps = Cocycle::new(&od).unwrap();
            let m = 2 * od.n() as i64;
            let z = RootVec::zero(od.nu());
            for _ in 0..100 {
                let a = random_root(&mut rng, od.nu());
                let b = random_root(&mut rng, od.nu());
                let c = random_root(&mut rng, od.nu());
                assert_eq!(
                    (eps.exp(&a, &b) - eps.exp(&b, &a)).rem_euclid(m),
                    od.commutator_exp(&a, &b)
                );
                assert_eq!(eps.exp(&a, &z), 0);
                assert_eq!(eps.exp(&z, &a), 0);
                // 2-cocycle condition
                let lhs = eps.exp(&a, &b) + eps.exp(&a.add(&b), &c);
                let rhs = eps.exp(&b, &c) + eps.exp(&a, &b.add(&c));
                assert_eq!((lhs - rhs).rem_euclid(m), 0);
            }
        }
    }

    #[test]
    fn no_obstruction_on_linking_fixtures() {
        for fx in catalog::all_fixtures() {
            for mu in catalog::automorphisms(&fx.gcm) {
                let od = crate::cartan::validate(&fx.gcm, &mu).unwrap();
                if od.check_linking().holds {
                    assert!(Cocycle::new(&od).is_ok(), "{} {:?}", fx.name, mu.images());
                }
            }
        }
    }
}
