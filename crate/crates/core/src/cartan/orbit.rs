//! Γ-sets, d-invariants and orbit representatives of an (A, μ) pair.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{CartanError, DiagramAut, Gcm};
use crate::coeff::{CycloField, CycloNum, Rat};

/// All orbit invariants of a validated (A, μ) pair. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitData {
    gcm: Gcm,
    mu: DiagramAut,
    gamma: BTreeMap<(usize, usize), Vec<u32>>,
    gamma_plus: BTreeMap<(usize, usize), Vec<u32>>,
    gamma_minus: BTreeMap<(usize, usize), Vec<u32>>,
    orbit_len: Vec<u32>,
    reps: Vec<usize>,
    /// `i = μ^r(rep)` as `(rep, r)`, with `r` minimal.
    rep_of: Vec<(usize, u32)>,
}

/// Result of the linking-condition test; offending pairs are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingReport {
    pub holds: bool,
    pub offending: Vec<(usize, usize)>,
}

/// The μ-folded matrix over the orbit representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedMatrix {
    pub reps: Vec<usize>,
    pub s: Vec<Rat>,
    pub a: Vec<Vec<Rat>>,
}

/// Validates `mu` against `a` and computes all orbit invariants.
pub fn validate(a: &Gcm, mu: &DiagramAut) -> Result<OrbitData, CartanError> {
    let nu = a.nu();
    if mu.len() != nu {
        return Err(CartanError::DimensionMismatch);
    }
    for i in 0..nu {
        for j in 0..nu {
            if a.get(i, j) != a.get(mu.apply(i), mu.apply(j)) {
                return Err(CartanError::NotAutomorphism(i + 1, j + 1));
            }
        }
    }
    let n = mu.order();
    let mut gamma = BTreeMap::new();
    let mut gamma_plus = BTreeMap::new();
    let mut gamma_minus = BTreeMap::new();
    for i in 0..nu {
        for j in 0..nu {
            let (mut g, mut gp, mut gm) = (Vec::new(), Vec::new(), Vec::new());
            for k in 0..n {
                let x = a.get(i, mu.apply_pow(k as i64, j));
                if x != 0 {
                    g.push(k);
                }
                if x > 0 {
                    gp.push(k);
                }
                if x < 0 {
                    gm.push(k);
                }
            }
            gamma.insert((i, j), g);
            gamma_plus.insert((i, j), gp);
            gamma_minus.insert((i, j), gm);
        }
    }
    let mut orbit_len = vec![0u32; nu];
    let mut rep_of = vec![(usize::MAX, 0u32); nu];
    let mut reps = Vec::new();
    for i in 0..nu {
        if rep_of[i].0 != usize::MAX {
            continue;
        }
        reps.push(i);
        let mut j = i;
        let mut r = 0;
        loop {
            rep_of[j] = (i, r);
            j = mu.apply(j);
            r += 1;
            if j == i {
                break;
            }
        }
        let mut j = i;
        loop {
            orbit_len[j] = r;
            j = mu.apply(j);
            if j == i {
                break;
            }
        }
    }
    Ok(OrbitData {
        gcm: a.clone(),
        mu: mu.clone(),
        gamma,
        gamma_plus,
        gamma_minus,
        orbit_len,
        reps,
        rep_of,
    })
}

impl OrbitData {
    pub fn gcm(&self) -> &Gcm {
        &self.gcm
    }

    pub fn mu(&self) -> &DiagramAut {
        &self.mu
    }

    pub fn nu(&self) -> usize {
        self.gcm.nu()
    }

    /// Order `N` of μ.
    pub fn n(&self) -> u32 {
        self.mu.order()
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.gcm.get(i, j)
    }

    /// `a_{i, μ^k(j)}`
    pub fn a_twisted(&self, i: usize, j: usize, k: i64) -> i64 {
        self.gcm.get(i, self.mu.apply_pow(k, j))
    }

    pub fn gamma(&self, i: usize, j: usize) -> &[u32] {
        &self.gamma[&(i, j)]
    }

    pub fn gamma_plus(&self, i: usize, j: usize) -> &[u32] {
        &self.gamma_plus[&(i, j)]
    }

    pub fn gamma_minus(&self, i: usize, j: usize) -> &[u32] {
        &self.gamma_minus[&(i, j)]
    }

    /// `d_ij = |Γ_ij^−|`
    pub fn d(&self, i: usize, j: usize) -> u32 {
        self.gamma_minus(i, j).len() as u32
    }

    /// `d_i = |Γ_ii^+|`
    pub fn d_plus(&self, i: usize) -> u32 {
        self.gamma_plus(i, i).len() as u32
    }

    pub fn orbit_len(&self, i: usize) -> u32 {
        self.orbit_len[i]
    }

    /// Orbit representatives (smallest index of each orbit).
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    /// `(rep, r)` with `i = μ^r(rep)`.
    pub fn rep_of(&self, i: usize) -> (usize, u32) {
        self.rep_of[i]
    }

    pub fn is_rep(&self, i: usize) -> bool {
        self.rep_of[i].0 == i
    }

    pub fn same_orbit(&self, i: usize, j: usize) -> bool {
        self.rep_of[i].0 == self.rep_of[j].0
    }

    /// All `k ∈ ℤ_N` with `μ^k(j) = i`.
    pub fn twists_to(&self, i: usize, j: usize) -> Vec<u32> {
        (0..self.n())
            .filter(|&k| self.mu.apply_pow(k as i64, j) == i)
            .collect()
    }

    /// The linking condition: each Γ_ij^− with `a_ij < 0` is a subgroup of ℤ_N.
    pub fn check_linking(&self) -> LinkingReport {
        let n = self.n();
        let mut offending = Vec::new();
        for i in 0..self.nu() {
            for j in 0..self.nu() {
                if self.a(i, j) >= 0 {
                    continue;
                }
                let g = self.gamma_minus(i, j);
                let closed = g
                    .iter()
                    .all(|&x| g.iter().all(|&y| g.contains(&((x + y) % n))));
                if !(g.contains(&0) && closed) {
                    offending.push((i, j));
                }
            }
        }
        LinkingReport {
            holds: offending.is_empty(),
            offending,
        }
    }

    /// `d_i | d_ij` for every pair with `a_ij < 0`; meaningful once the
    /// linking condition holds.
    pub fn check_divisibility(&self) -> Result<(), CartanError> {
        for i in 0..self.nu() {
            for j in 0..self.nu() {
                let dij = self.d(i, j);
                if self.a(i, j) < 0 && (dij % self.d_plus(i) != 0 || dij % self.d_plus(j) != 0) {
                    return Err(CartanError::InvariantViolation(format!(
                        "d_{}={} or d_{}={} does not divide d_({},{})={}",
                        i + 1,
                        self.d_plus(i),
                        j + 1,
                        self.d_plus(j),
                        i + 1,
                        j + 1,
                        dij
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether `∏_{k∈Γ_ii^−} ξ^k = −1`; only meaningful when `d_ii > 0`.
    pub fn check_lemma_product(&self, i: usize) -> Result<bool, CartanError> {
        if self.d(i, i) == 0 {
            return Err(CartanError::Inapplicable(format!("d_({0},{0}) = 0", i + 1)));
        }
        let ctx = CycloField::new(self.n());
        let mut prod = CycloNum::one(&ctx);
        for &k in self.gamma_minus(i, i) {
            prod = prod.mul(&CycloNum::xi(&ctx, k as i64));
        }
        Ok(prod == CycloNum::one(&ctx).neg())
    }

    pub fn folded_matrix(&self) -> FoldedMatrix {
        let reps = self.reps.clone();
        let n = self.n() as i64;
        let orbit_sum = |i: usize, j: usize| -> i64 {
            (0..n).map(|k| self.a(self.mu.apply_pow(k, i), j)).sum()
        };
        let s: Vec<Rat> = reps
            .iter()
            .map(|&i| {
                let di = Rat::from_int(self.d_plus(i) as i64);
                &Rat::from_int(3) - &(&Rat::from_int(orbit_sum(i, i)) / &di)
            })
            .collect();
        let a = reps
            .iter()
            .zip(&s)
            .map(|(&i, si)| {
                let di = Rat::from_int(self.d_plus(i) as i64);
                reps.iter()
                    .map(|&j| &(si / &di) * &Rat::from_int(orbit_sum(i, j)))
                    .collect()
            })
            .collect();
        FoldedMatrix { reps, s, a }
    }
}

fn pair_key(i: usize, j: usize) -> String {
    format!("({},{})", i + 1, j + 1)
}

fn parse_pair_key(s: &str) -> Option<(usize, usize)> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    let (a, b): (usize, usize) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    (a >= 1 && b >= 1).then(|| (a - 1, b - 1))
}

/// JSON shape of [`OrbitData`]: 1-based indices, pairs keyed as `"(i,j)"`.
#[derive(Serialize, Deserialize)]
struct OrbitDataRepr {
    cartan: Vec<Vec<i64>>,
    mu: Vec<usize>,
    n: u32,
    gamma: BTreeMap<String, Vec<u32>>,
    gamma_plus: BTreeMap<String, Vec<u32>>,
    gamma_minus: BTreeMap<String, Vec<u32>>,
    d: BTreeMap<String, u32>,
    d_plus: BTreeMap<String, u32>,
    orbit_len: BTreeMap<String, u32>,
    reps: Vec<usize>,
}

impl Serialize for OrbitData {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs = |m: &BTreeMap<(usize, usize), Vec<u32>>| {
            m.iter()
                .map(|(&(i, j), v)| (pair_key(i, j), v.clone()))
                .collect()
        };
        let nu = self.nu();
        let repr = OrbitDataRepr {
            cartan: self.gcm.rows().to_vec(),
            mu: self.mu.images().iter().map(|p| p + 1).collect(),
            n: self.n(),
            gamma: pairs(&self.gamma),
            gamma_plus: pairs(&self.gamma_plus),
            gamma_minus: pairs(&self.gamma_minus),
            d: (0..nu)
                .flat_map(|i| (0..nu).map(move |j| (i, j)))
                .map(|(i, j)| (pair_key(i, j), self.d(i, j)))
                .collect(),
            d_plus: (0..nu)
                .map(|i| ((i + 1).to_string(), self.d_plus(i)))
                .collect(),
            orbit_len: (0..nu)
                .map(|i| ((i + 1).to_string(), self.orbit_len(i)))
                .collect(),
            reps: self.reps.iter().map(|r| r + 1).collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrbitData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = OrbitDataRepr::deserialize(d)?;
        let gcm = Gcm::new(repr.cartan).map_err(D::Error::custom)?;
        let mu = DiagramAut::from_one_based(&repr.mu).map_err(D::Error::custom)?;
        let od = validate(&gcm, &mu).map_err(D::Error::custom)?;
        // the derived tables must agree with the stored ones
        let stored: BTreeMap<(usize, usize), Vec<u32>> = repr
            .gamma
            .iter()
            .map(|(k, v)| {
                parse_pair_key(k)
                    .map(|p| (p, v.clone()))
                    .ok_or_else(|| D::Error::custom(format!("bad pair key {k}")))
            })
            .collect::<Result<_, _>>()?;
        if stored != od.gamma || repr.n != od.n() {
            return Err(D::Error::custom("orbit tables inconsistent with cartan/mu"));
        }
        Ok(od)
    }
}
