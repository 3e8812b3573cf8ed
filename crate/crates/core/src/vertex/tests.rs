use super::*;
use crate::cartan::catalog;
use crate::coeff::CycloField;
use crate::distcalc::qdef_product_coeffs;
use crate::relcat::build_fg;

fn vertex(od: &OrbitData) -> Vertex {
    Vertex::new(od, &CycloField::new(od.n())).unwrap()
}

fn vac(vx: &Vertex) -> FockVector {
    FockVector::basis(vx.ctx(), BasisElem::vacuum(vx.od().nu()))
}

fn lat(vx: &Vertex, beta: RootVec) -> FockVector {
    FockVector::basis(vx.ctx(), BasisElem::new(HMonomial::one(), beta))
}

fn small_basis(vx: &Vertex, b: u32) -> Vec<BasisElem> {
    let support = vx.fock().lattice_support(2);
    vx.fock().fock_basis(b, &support)
}

#[test]
fn epsilon_examples() {
    let od = catalog::a2_flip();
    let ctx = CycloField::new(2);
    assert_eq!(epsilon_sq(&od, &ctx, 0).to_string(), "(v)/(v^2+1)");
    let od = catalog::untwisted(catalog::type_a(3));
    let ctx = CycloField::new(1);
    for i in 0..3 {
        assert!(epsilon_sq(&od, &ctx, i).is_one());
    }
    let od = catalog::a3_flip();
    let ctx = CycloField::new(2);
    let want = CoeffElem::from_laurent(qint(&ctx, 2).scale_rat(&Rat::from_int(2)));
    assert_eq!(epsilon_sq(&od, &ctx, 1), want);
}

#[test]
fn exponential_examples() {
    let vx = vertex(&catalog::a2_flip());
    let v = vac(&vx);
    let plus = vx.apply_e(true, 0, 1, Unit::ONE, &v, 10);
    assert_eq!(plus.len(), 1);
    assert_eq!(plus[&0], v);
    let minus = vx.apply_e(false, 0, 1, Unit::ONE, &v, 2);
    let want = FockVector::basis(
        vx.ctx(),
        BasisElem::new(HMonomial::var(0, 1), RootVec::zero(2)),
    );
    assert_eq!(minus[&2], want);

    let vx = vertex(&catalog::a3_flip());
    let minus = vx.apply_e(false, 1, 1, Unit::ONE, &vac(&vx), 4);
    assert!(!minus.contains_key(&2));
    assert!(minus.contains_key(&4));
}

#[test]
fn phi_examples() {
    let vx = vertex(&catalog::a2_flip());
    let ctx = vx.ctx().clone();
    let t1 = lat(&vx, RootVec::simple(2, 0));
    assert_eq!(
        vx.apply_phi(0, 1, 0, &t1).unwrap(),
        t1.scale(&Laurent::q_pow(&ctx, 1))
    );
    assert_eq!(vx.apply_phi(0, 1, 0, &vac(&vx)).unwrap(), vac(&vx));
    assert!(vx.apply_phi(0, 1, 1, &vac(&vx)).unwrap().is_zero());
    assert_eq!(
        vx.apply_phi(0, 1, -1, &vac(&vx)),
        Err(VertexError::NegativeMode(-1))
    );
}

#[test]
fn x_examples() {
    let vx = vertex(&catalog::a2_flip());
    let t1 = lat(&vx, RootVec::simple(2, 0));
    assert_eq!(vx.apply_x(0, 1, -1, &vac(&vx)), t1);
    for m in -4..4 {
        assert!(vx.apply_x(0, 1, 2 * m, &vac(&vx)).is_zero());
    }
    let od = catalog::untwisted(catalog::type_a(1));
    let vx = vertex(&od);
    assert_eq!(
        vx.apply_x(0, 1, -2, &vac(&vx)),
        lat(&vx, RootVec::simple(1, 0))
    );
}

#[test]
fn sector_moding() {
    for od in [catalog::a2_flip(), catalog::a3_flip(), catalog::a4_flip()] {
        let vx = vertex(&od);
        for e in small_basis(&vx, 2) {
            for i in 0..od.nu() {
                for sign in [1i8, -1] {
                    let h = CurrentHandle::x(&od, i, sign);
                    let alpha = od.simple_root(h.rep);
                    let s2 = 2 * sign as i64 * vx.fock().grading_exponent(&alpha, &e.lattice)
                        + vx.fock().shift_doubled(&alpha);
                    for (s, _) in vx.series(&h, &e, 6).iter() {
                        assert_eq!((*s as i64 - s2).rem_euclid(2), 0);
                    }
                }
            }
        }
    }
}

#[test]
fn rotated_currents() {
    let od = catalog::a2_flip();
    let vx = vertex(&od);
    let ctx = vx.ctx().clone();
    for e in small_basis(&vx, 2) {
        for sign in [1i8, -1] {
            let h0 = CurrentHandle::x(&od, 0, sign);
            let h1 = CurrentHandle::x(&od, 1, sign);
            assert_eq!((h1.rep, h1.rotation), (0, 1));
            let a = vx.series(&h0, &e, 6);
            let b = vx.series(&h1, &e, 6);
            for (s, v) in a.range(..=6) {
                let want = v.scale(&Laurent::zeta_v(&ctx, -(*s as i64), 0));
                assert_eq!(b[s], want);
            }
        }
    }
    // Φ built from α_{μ(i),m} directly agrees with the rotated current
    for od in [
        catalog::a2_flip(),
        catalog::a3_flip(),
        catalog::d4_triality(),
    ] {
        let vx = vertex(&od);
        for e in small_basis(&vx, 3) {
            for i in 0..od.nu() {
                for sign in [1i8, -1] {
                    let direct = vx.phi_direct(i, sign, &e, 8);
                    let rotated = vx.series(&CurrentHandle::phi(&od, i, sign), &e, 8);
                    let rotated: Series =
                        rotated.range(..=8).map(|(s, v)| (*s, v.clone())).collect();
                    assert_eq!(direct, rotated, "Φ_{i} sign {sign} on {e}");
                }
            }
        }
    }
}

#[test]
fn alpha_past_creation_exponential() {
    // α_{i,m} E_−(α_j,w) = E_−(α_j,w) (α_{i,m} + κ_ij(m) w^m)
    for od in [catalog::a2_flip(), catalog::a3_flip()] {
        let vx = vertex(&od);
        let fs = vx.fock();
        let ctx = vx.ctx().clone();
        for e in small_basis(&vx, 3) {
            let v = FockVector::basis(&ctx, e.clone());
            for i in 0..od.nu() {
                for j in 0..od.nu() {
                    for m in 1..=3i64 {
                        let k = kappa(&od, &ctx, i, j, m);
                        let left = vx.apply_e(false, j, 1, Unit::ONE, &v, 8);
                        let right =
                            vx.apply_e(false, j, 1, Unit::ONE, &fs.apply_alpha(i, m, &v), 8);
                        for s in (0..=8).step_by(2) {
                            let lhs = left
                                .get(&s)
                                .map(|w| fs.apply_alpha(i, m, w))
                                .unwrap_or_else(|| FockVector::zero(&ctx));
                            let mut rhs = right
                                .get(&s)
                                .cloned()
                                .unwrap_or_else(|| FockVector::zero(&ctx));
                            if let Some(w) = left.get(&(s - 2 * m as i32)) {
                                rhs.add_scaled(w, &k);
                            }
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }
}

/// Coefficients of `P(z_0, z_1) · S` on `window` (doubled), `P` in natural
/// exponents.
fn poly_times(
    ctx: &CycloCtx,
    p: &crate::relcat::BivarPoly,
    s: &MultiSeries,
    window: &[(i32, i32)],
) -> MultiSeries {
    let mut out = MultiSeries::new();
    for (pe, pc) in p.terms() {
        for (se, v) in s {
            let key: Vec<i32> = se.iter().zip(pe).map(|(a, b)| a + 2 * b).collect();
            if key
                .iter()
                .zip(window)
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
            {
                out.entry(key)
                    .or_insert_with(|| FockVector::zero(ctx))
                    .add_scaled(v, pc);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[test]
fn locality() {
    for od in [catalog::a2_flip(), catalog::a3_flip()] {
        let vx = vertex(&od);
        let ctx = vx.ctx().clone();
        let d = 4;
        for &i in od.reps() {
            for j in 0..od.nu() {
                let (f, g) = build_fg(&od, &ctx, i, j, 1);
                let deg = f.total_degree() as i32;
                let xi = CurrentHandle::x(&od, i, 1);
                let xj = CurrentHandle::x(&od, j, 1);
                let lo = -d - 2 * deg;
                for e in small_basis(&vx, 1) {
                    let ij = vx.chain(&[xi, xj], &e, &[lo, lo], &[d, d]);
                    let ji = vx.chain(&[xj, xi], &e, &[lo, lo], &[d, d]);
                    let ji: MultiSeries =
                        ji.into_iter().map(|(k, v)| (vec![k[1], k[0]], v)).collect();
                    let win = [(-d, d), (-d, d)];
                    let a = poly_times(&ctx, &f, &ij, &win);
                    let b = poly_times(&ctx, &g, &ji, &win);
                    assert_eq!(a, b, "locality ({},{}) on {e}", i + 1, j + 1);
                }
            }
        }
    }
}

#[test]
fn ope_matches_normal_ordering() {
    for od in [
        catalog::a2_flip(),
        catalog::a3_flip(),
        catalog::untwisted(catalog::type_a(2)),
    ] {
        let vx = vertex(&od);
        let ctx = vx.ctx().clone();
        let d = 6;
        for &i in od.reps() {
            for j in 0..od.nu() {
                for sign in [1i8, -1] {
                    let xi = CurrentHandle::x(&od, i, sign);
                    let xj = CurrentHandle::x(&od, j, sign);
                    let ai = od.simple_root(i);
                    let aj = od.simple_root(j);
                    let a = vx.fock().grading_exponent(&ai, &aj) as i32;
                    let factors: Vec<(Unit, i64)> = (0..od.n() as i64)
                        .map(|k| (Unit::xi_q(k, -(sign as i32)), od.a_twisted(i, j, k)))
                        .filter(|f| f.1 != 0)
                        .collect();
                    let mut f = qdef_product_coeffs(&ctx, &factors, 12);
                    // (ξ^{−r} w)^{−A/2} with the fixed square-root branch
                    let branch = Laurent::zeta_v(&ctx, xj.rotation as i64 * a as i64, 0);
                    for c in f.iter_mut() {
                        *c = c.mul(&branch);
                    }
                    for e in small_basis(&vx, 1) {
                        let lhs = vx.chain(&[xi, xj], &e, &[-3 * d, -3 * d], &[d, d]);
                        let no = vx
                            .normal_ordered_apply(&[(xi, 0), (xj, 1)], 2, &e, &[3 * d, 3 * d])
                            .unwrap();
                        // :XX: · (z/w)^{A/2} · Σ_n f_n (w/z)^n
                        let mut rhs = MultiSeries::new();
                        for (k, v) in &no {
                            for (n, c) in f.iter().enumerate() {
                                let n = n as i32;
                                let key = vec![k[0] + a - 2 * n, k[1] - a + 2 * n];
                                if key[0] < -d || key[0] > d || key[1] < -d || key[1] > d {
                                    continue;
                                }
                                rhs.entry(key)
                                    .or_insert_with(|| FockVector::zero(&ctx))
                                    .add_scaled(v, c);
                            }
                        }
                        rhs.retain(|_, v| !v.is_zero());
                        let lhs: MultiSeries = lhs
                            .into_iter()
                            .filter(|(k, _)| k.iter().all(|x| (-d..=d).contains(x)))
                            .collect();
                        assert_eq!(lhs, rhs, "OPE ({},{}) sign {sign} on {e}", i + 1, j + 1);
                    }
                }
            }
        }
    }
}

#[test]
fn normal_ordered_pair_gives_phi() {
    // :X⁺_i(z) X⁻_i(ξ^{−k} q^{∓1} z): = q^{∓d_i ± d_ii/2} Φ^±_i(q^{∓1/2} z)
    for od in [
        catalog::a2_flip(),
        catalog::a3_flip(),
        catalog::untwisted(catalog::type_a(1)),
    ] {
        let vx = vertex(&od);
        let ctx = vx.ctx().clone();
        let hi = 8;
        for &i in od.reps() {
            let di = od.d_plus(i) as i32;
            let dii = od.d(i, i) as i32;
            for k in od.twists_to(i, i) {
                for s in [1i32, -1] {
                    let xp = CurrentHandle::x(&od, i, 1);
                    let xm = CurrentHandle::x(&od, i, -1).scaled(Unit::xi_q(-(k as i64), -s));
                    let phi_sign = s as i8;
                    let phi = CurrentHandle::phi(&od, i, phi_sign).scaled(Unit::new(0, -s));
                    // q^{∓d_i ± d_ii/2} = v^{∓(2d_i − d_ii)}
                    let pre = Laurent::v_pow(&ctx, -s * (2 * di - dii));
                    for e in small_basis(&vx, 2) {
                        let no = vx
                            .normal_ordered_apply(&[(xp, 0), (xm, 0)], 1, &e, &[hi])
                            .unwrap();
                        let ph = vx.series(&phi, &e, hi);
                        for x in -hi..=hi {
                            let lhs = no
                                .get(&vec![x])
                                .cloned()
                                .unwrap_or_else(|| FockVector::zero(&ctx));
                            let rhs = ph
                                .get(&x)
                                .map(|v| v.scale(&pre))
                                .unwrap_or_else(|| FockVector::zero(&ctx));
                            assert_eq!(lhs, rhs, "i={} k={k} s={s} on {e} at {x}", i + 1);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn arity_guard() {
    let od = catalog::a2_flip();
    let vx = vertex(&od);
    let h = CurrentHandle::x(&od, 0, 1);
    let e = BasisElem::vacuum(2);
    assert_eq!(
        vx.normal_ordered_apply(&[(h, 0); 4], 4, &e, &[0; 4])
            .unwrap_err(),
        VertexError::UnsupportedArity(4)
    );
    let single = vx.normal_ordered_apply(&[(h, 0)], 1, &e, &[5]).unwrap();
    let direct = vx.series(&h, &e, 5);
    for (k, v) in single {
        assert_eq!(&direct[&k[0]], &v);
    }
}
