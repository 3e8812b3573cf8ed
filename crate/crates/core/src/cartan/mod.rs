//! Cartan data: simply-laced GCMs, diagram automorphisms, orbit invariants,
//! the linking condition and the folded matrix.

pub mod catalog;
mod lattice;
mod orbit;

pub use lattice::{Cocycle, RootVec};
pub use orbit::{validate, FoldedMatrix, LinkingReport, OrbitData};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("matrix is not square or does not match the permutation size")]
    DimensionMismatch,
    #[error("not a simply-laced GCM: {0}")]
    NotSimplyLaced(String),
    #[error("not a permutation of 1..{0}")]
    NotPermutation(usize),
    #[error("permutation does not preserve the matrix at ({0},{1})")]
    NotAutomorphism(usize, usize),
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("cocycle obstruction: C(alpha_{0}, alpha_{0}) != 1")]
    CocycleObstruction(usize),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

/// A simply-laced generalized Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gcm {
    a: Vec<Vec<i64>>,
}

impl Gcm {
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let n = a.len();
        if n == 0 || a.iter().any(|row| row.len() != n) {
            return Err(CartanError::DimensionMismatch);
        }
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(CartanError::NotSimplyLaced(format!(
                    "diagonal entry ({},{}) is {}",
                    i + 1,
                    i + 1,
                    a[i][i]
                )));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if a[i][j] != 0 && a[i][j] != -1 {
                    return Err(CartanError::NotSimplyLaced(format!(
                        "entry ({},{}) is {}",
                        i + 1,
                        j + 1,
                        a[i][j]
                    )));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return Err(CartanError::NotSimplyLaced(format!(
                        "zero pattern not symmetric at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Gcm { a })
    }

    pub fn nu(&self) -> usize {
        self.a.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.a
    }
}

/// A permutation of the index set (0-based internally).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramAut {
    perm: Vec<usize>,
    order: u32,
}

impl DiagramAut {
    pub fn new(perm: Vec<usize>) -> Result<Self, CartanError> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(CartanError::NotPermutation(n));
            }
            seen[p] = true;
        }
        let mut order = 1u32;
        let mut cur = perm.clone();
        while cur.iter().enumerate().any(|(i, &p)| i != p) {
            cur = cur.iter().map(|&p| perm[p]).collect();
            order += 1;
        }
        Ok(DiagramAut { perm, order })
    }

    /// From the 1-based image list used in configuration files.
    pub fn from_one_based(images: &[usize]) -> Result<Self, CartanError> {
        let n = images.len();
        if images.iter().any(|&p| p == 0 || p > n) {
            return Err(CartanError::NotPermutation(n));
        }
        Self::new(images.iter().map(|p| p - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        DiagramAut {
            perm: (0..n).collect(),
            order: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// `μ^k(i)` for any integer `k`.
    pub fn apply_pow(&self, k: i64, i: usize) -> usize {
        let k = k.rem_euclid(self.order as i64);
        let mut j = i;
        for _ in 0..k {
            j = self.perm[j];
        }
        j
    }

    pub fn images(&self) -> &[usize] {
        &self.perm
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcm_validation() {
        assert!(Gcm::new(vec![vec![2, -1], vec![-1, 2]]).is_ok());
        assert!(matches!(
            Gcm::new(vec![vec![2, -2], vec![-2, 2]]),
            Err(CartanError::NotSimplyLaced(_))
        ));
        assert!(matches!(
            Gcm::new(vec![vec![2, -1], vec![0, 2]]),
            Err(CartanError::NotSimplyLaced(_))
        ));
        assert_eq!(
            Gcm::new(vec![vec![2, -1]]),
            Err(CartanError::DimensionMismatch)
        );
    }

    #[test]
    fn permutation_order() {
        let mu = DiagramAut::from_one_based(&[2, 3, 1, 4]).unwrap();
        assert_eq!(mu.order(), 3);
        assert_eq!(mu.apply_pow(-1, 0), 2);
        assert_eq!(
            DiagramAut::from_one_based(&[1, 1]),
            Err(CartanError::NotPermutation(2))
        );
    }
}
