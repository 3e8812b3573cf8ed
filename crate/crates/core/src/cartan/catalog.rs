//! Standard Cartan matrices, named fixtures and brute-force automorphism
//! enumeration.

use super::{validate, DiagramAut, Gcm, OrbitData};

fn from_edges(nu: usize, edges: &[(usize, usize)]) -> Gcm {
    let mut a = vec![vec![0i64; nu]; nu];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j) in edges {
        a[i - 1][j - 1] = -1;
        a[j - 1][i - 1] = -1;
    }
    Gcm::new(a).expect("catalog matrices are simply laced")
}

/// `A_n`, path `1 - 2 - … - n`.
pub fn type_a(n: usize) -> Gcm {
    let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
    from_edges(n, &edges)
}

/// `D_n` (n ≥ 4): path `1 - … - (n-2)` with `n-1` and `n` attached to `n-2`.
pub fn type_d(n: usize) -> Gcm {
    let mut edges: Vec<_> = (1..n - 2).map(|i| (i, i + 1)).collect();
    edges.push((n - 2, n - 1));
    edges.push((n - 2, n));
    from_edges(n, &edges)
}

/// `E_6` in Bourbaki labelling: path `1-3-4-5-6`, node 2 attached to 4.
pub fn type_e6() -> Gcm {
    from_edges(6, &[(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)])
}

/// `A_ℓ^(1)`: the cycle on `ℓ+1` nodes (ℓ ≥ 2).
pub fn affine_a(l: usize) -> Gcm {
    let n = l + 1;
    let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
    edges.push((n, 1));
    from_edges(n, &edges)
}

/// `D_4^(1)`: center 3 with leaves 1, 2, 4, 5.
pub fn affine_d4() -> Gcm {
    from_edges(5, &[(1, 3), (2, 3), (3, 4), (3, 5)])
}

pub fn untwisted(g: Gcm) -> OrbitData {
    let n = g.nu();
    validate(&g, &DiagramAut::identity(n)).unwrap()
}

fn with_mu(g: Gcm, images: &[usize]) -> OrbitData {
    validate(&g, &DiagramAut::from_one_based(images).unwrap()).unwrap()
}

/// `A_2` with the flip `1 ↔ 2`.
pub fn a2_flip() -> OrbitData {
    with_mu(type_a(2), &[2, 1])
}

/// `A_3` with the flip `1 ↔ 3`.
pub fn a3_flip() -> OrbitData {
    with_mu(type_a(3), &[3, 2, 1])
}

/// `A_4` with the flip `i ↔ 5 − i`.
pub fn a4_flip() -> OrbitData {
    with_mu(type_a(4), &[4, 3, 2, 1])
}

/// `D_4` with the order-3 rotation of the three leaves.
pub fn d4_triality() -> OrbitData {
    with_mu(type_d(4), &[3, 2, 4, 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureKind {
    Finite,
    /// The cycle `A_ℓ^(1)` with nodes labelled cyclically.
    AffineCycle(usize),
    AffineOther,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub gcm: Gcm,
    pub kind: FixtureKind,
}

/// Finite types A1–A5, D4, D5, E6 and affine types A2^(1), A3^(1), A4^(1), D4^(1).
pub fn all_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push(Fixture {
            name: format!("A{n}"),
            gcm: type_a(n),
            kind: FixtureKind::Finite,
        });
    }
    for n in [4, 5] {
        out.push(Fixture {
            name: format!("D{n}"),
            gcm: type_d(n),
            kind: FixtureKind::Finite,
        });
    }
    out.push(Fixture {
        name: "E6".into(),
        gcm: type_e6(),
        kind: FixtureKind::Finite,
    });
    for l in [2, 3, 4] {
        out.push(Fixture {
            name: format!("A{l}^(1)"),
            gcm: affine_a(l),
            kind: FixtureKind::AffineCycle(l),
        });
    }
    out.push(Fixture {
        name: "D4^(1)".into(),
        gcm: affine_d4(),
        kind: FixtureKind::AffineOther,
    });
    out
}

/// Every permutation preserving `g`, in lexicographic order of images.
pub fn automorphisms(g: &Gcm) -> Vec<DiagramAut> {
    fn extend(g: &Gcm, partial: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<DiagramAut>) {
        let nu = g.nu();
        let i = partial.len();
        if i == nu {
            out.push(DiagramAut::new(partial.clone()).unwrap());
            return;
        }
        for p in 0..nu {
            if used[p] {
                continue;
            }
            let ok = (0..i).all(|j| {
                g.get(i, j) == g.get(p, partial[j]) && g.get(j, i) == g.get(partial[j], p)
            });
            if ok {
                used[p] = true;
                partial.push(p);
                extend(g, partial, used, out);
                partial.pop();
                used[p] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; g.nu()];
    extend(g, &mut Vec::new(), &mut used, &mut out);
    out
}

/// Whether μ is a full-order rotation `i ↦ i + r` of the cycle `A_ℓ^(1)`.
pub fn is_full_rotation(kind: FixtureKind, mu: &DiagramAut) -> bool {
    let FixtureKind::AffineCycle(l) = kind else {
        return false;
    };
    let n = l + 1;
    let r = mu.apply(0);
    (0..n).all(|i| mu.apply(i) == (i + r) % n) && mu.order() as usize == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automorphism_counts() {
        let count = |g: &Gcm| automorphisms(g).len();
        assert_eq!(count(&type_a(1)), 1);
        assert_eq!(count(&type_a(4)), 2);
        assert_eq!(count(&type_d(4)), 6);
        assert_eq!(count(&type_d(5)), 2);
        assert_eq!(count(&type_e6()), 2);
        assert_eq!(count(&affine_a(2)), 6);
        assert_eq!(count(&affine_a(3)), 8);
        assert_eq!(count(&affine_a(4)), 10);
        assert_eq!(count(&affine_d4()), 24);
    }

    #[test]
    fn rotation_detection() {
        let g = affine_a(4);
        let rot = automorphisms(&g)
            .into_iter()
            .filter(|m| is_full_rotation(FixtureKind::AffineCycle(4), m))
            .count();
        assert_eq!(rot, 4);
    }
}
