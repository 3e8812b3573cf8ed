use super::*;
use crate::cartan::catalog;
use crate::coeff::{qint, CycloField};
use rand::{Rng, SeedableRng};

fn space(od: &OrbitData) -> FockSpace {
    FockSpace::new(od, &CycloField::new(od.n())).unwrap()
}

fn vac(fs: &FockSpace) -> FockVector {
    FockVector::basis(fs.ctx(), BasisElem::vacuum(fs.od().nu()))
}

fn fixtures() -> Vec<OrbitData> {
    vec![
        catalog::a2_flip(),
        catalog::a3_flip(),
        catalog::a4_flip(),
        catalog::d4_triality(),
        catalog::untwisted(catalog::type_a(2)),
    ]
}

#[test]
fn bracket_constant_examples() {
    let fs = space(&catalog::a2_flip());
    let ctx = fs.ctx();
    let want = Laurent::q_pow(ctx, 1)
        .add(&Laurent::q_pow(ctx, -1))
        .add(&Laurent::one(ctx));
    assert_eq!(fs.heis_bracket_constant(0, 0, 1).unwrap(), want);
    assert_eq!(fs.heis_bracket_constant(0, 0, 0), Err(FockError::ZeroMode));

    let fs = space(&catalog::a3_flip());
    for m in [-9i64, -7, -5, -3, -1, 1, 3, 5, 7, 9] {
        assert!(fs.heis_bracket_constant(1, 1, m).unwrap().is_zero());
    }
    assert!(!fs.heis_bracket_constant(1, 1, 2).unwrap().is_zero());

    let od = catalog::untwisted(catalog::type_a(3));
    let fs = space(&od);
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(
                fs.heis_bracket_constant(i, j, 1).unwrap(),
                qint(fs.ctx(), od.a(i, j))
            );
        }
    }
}

#[test]
fn alpha_examples() {
    let fs = space(&catalog::a2_flip());
    let ctx = fs.ctx().clone();
    let v = fs.apply_alpha(0, -1, &vac(&fs));
    let back = fs.apply_alpha(0, 1, &v);
    let k = fs.heis_bracket_constant(0, 0, 1).unwrap();
    assert_eq!(back, vac(&fs).scale(&k));
    for m in 1..4 {
        assert!(fs.apply_alpha(0, m, &vac(&fs)).is_zero());
        assert!(fs.apply_alpha(1, m, &vac(&fs)).is_zero());
    }
    // α_{2,−1} = ξ^{−1} α_{1,−1} with ξ = −1
    let w = fs.apply_alpha(1, -1, &vac(&fs));
    assert_eq!(w, v.scale(&Laurent::from_int(&ctx, -1)));

    let fs = space(&catalog::a3_flip());
    assert!(fs.apply_alpha(1, -1, &vac(&fs)).is_zero());
    let v = fs.apply_alpha(0, -1, &vac(&fs));
    assert!(fs.apply_alpha(1, -1, &v).is_zero());
    assert!(!fs.apply_alpha(1, -2, &v).is_zero());
}

#[test]
fn bracket_antisymmetry() {
    for od in fixtures() {
        let fs = space(&od);
        for i in 0..od.nu() {
            for j in 0..od.nu() {
                for m in 1..5 {
                    let a = fs.heis_bracket_constant(i, j, m).unwrap();
                    let b = fs.heis_bracket_constant(j, i, -m).unwrap();
                    assert_eq!(a, b.neg(), "{i} {j} {m}");
                }
            }
        }
    }
}

#[test]
fn degenerate_levels_have_zero_brackets() {
    for od in fixtures() {
        let fs = space(&od);
        for i in 0..od.nu() {
            let (rep, _) = od.rep_of(i);
            for m in (-9i64..=9).filter(|&m| m != 0) {
                if fs.level_allowed(rep, m.unsigned_abs() as u32) {
                    continue;
                }
                for j in 0..od.nu() {
                    assert!(fs.heis_bracket_constant(i, j, m).unwrap().is_zero());
                }
                let v = FockVector::basis(
                    fs.ctx(),
                    BasisElem::new(HMonomial::var(0, 1), RootVec::zero(od.nu())),
                );
                assert!(fs.apply_alpha(i, m, &v).is_zero());
            }
        }
    }
}

#[test]
fn commutators_act_as_scalars() {
    for od in [
        catalog::a2_flip(),
        catalog::a3_flip(),
        catalog::d4_triality(),
    ] {
        let fs = space(&od);
        let nu = od.nu();
        let support = [RootVec::zero(nu), RootVec::simple(nu, 0)];
        let basis = fs.fock_basis(3, &support);
        for i in 0..nu {
            for j in 0..nu {
                for m in [-3i64, -2, -1, 1, 2, 3] {
                    for n in [-3i64, -2, -1, 1, 2, 3] {
                        for e in &basis {
                            let v = FockVector::basis(fs.ctx(), e.clone());
                            let lhs = fs
                                .apply_alpha(i, m, &fs.apply_alpha(j, n, &v))
                                .sub(&fs.apply_alpha(j, n, &fs.apply_alpha(i, m, &v)));
                            let want = if m + n == 0 {
                                v.scale(&fs.heis_bracket_constant(i, j, m).unwrap())
                            } else {
                                FockVector::zero(fs.ctx())
                            };
                            assert_eq!(lhs, want, "[α_{i},{m}, α_{j},{n}] on {e}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn lattice_action() {
    let fs = space(&catalog::a2_flip());
    let ctx = fs.ctx().clone();
    let od = fs.od().clone();
    let (a1, a2) = (od.simple_root(0), od.simple_root(1));
    let v = vac(&fs);
    assert_eq!(fs.apply_lattice(&RootVec::zero(2), &v), v);
    let x = fs.apply_lattice(&a1, &fs.apply_lattice(&a2, &v));
    let y = fs.apply_lattice(&a2, &fs.apply_lattice(&a1, &v));
    let c = Laurent::from_cyclo(&od.commutator_map(&ctx, &a1, &a2));
    assert_eq!(x, y.scale(&c));
    let t = FockVector::basis(&ctx, BasisElem::new(HMonomial::one(), a1.clone()));
    assert_eq!(
        fs.apply_lattice(&a1, &t),
        FockVector::basis(&ctx, BasisElem::new(HMonomial::one(), a1.scale(2)))
    );

    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for od in fixtures() {
        let fs = space(&od);
        let ctx = fs.ctx().clone();
        let nu = od.nu();
        let mut root = || RootVec((0..nu).map(|_| rng.gen_range(-2..=2)).collect());
        for _ in 0..50 {
            let (a, b, g) = (root(), root(), root());
            let t = FockVector::basis(&ctx, BasisElem::new(HMonomial::one(), g));
            let lhs = fs.apply_lattice(&a, &fs.apply_lattice(&b, &t));
            let eps = Laurent::from_cyclo(&fs.cocycle().value(&ctx, &a, &b));
            let rhs = fs.apply_lattice(&a.add(&b), &t).scale(&eps);
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn grading_examples() {
    let fs = space(&catalog::a2_flip());
    let a1 = fs.od().simple_root(0);
    assert_eq!(fs.grading_exponent(&a1, &a1), 1);
    assert_eq!(fs.shift_doubled(&a1), 1);
    assert_eq!(fs.grading_exponent(&a1, &RootVec::zero(2)), 0);
    let fs = space(&catalog::a3_flip());
    let a2 = fs.od().simple_root(1);
    assert_eq!(fs.grading_exponent(&a2, &a2), 4);
}

#[test]
fn basis_enumeration() {
    let fs = space(&catalog::a2_flip());
    assert_eq!(
        fs.fock_basis(0, &[RootVec::zero(2)]),
        vec![BasisElem::vacuum(2)]
    );
    let b = fs.fock_basis(2, &[RootVec::zero(2)]);
    assert_eq!(b.len(), 4);
    let fs = space(&catalog::a3_flip());
    let b = fs.fock_basis(2, &[RootVec::zero(3)]);
    assert_eq!(b.len(), 5);
    assert!(b.contains(&BasisElem::new(HMonomial::var(1, 2), RootVec::zero(3))));
    assert!(!b.contains(&BasisElem::new(HMonomial::var(1, 1), RootVec::zero(3))));
    assert_eq!(fs.lattice_support(2).len(), 1 + 4 + 3);
}

#[test]
fn display_form() {
    let m = HMonomial::var(0, 1)
        .with_power_delta(0, 1, 1)
        .mul(&HMonomial::var(1, 2));
    let e = BasisElem::new(m, RootVec(vec![1, 0, -1]));
    assert_eq!(e.to_string(), "a[1,-1]^2 * a[2,-2] * t[1,0,-1]");
    assert_eq!(BasisElem::vacuum(2).to_string(), "t[0,0]");
}
