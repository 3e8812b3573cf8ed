use super::*;
use crate::cartan::catalog;

fn plan(d: u32, b: u32, rels: &[RelId]) -> VerifyPlan {
    VerifyPlan::new(d, b).with_relations(rels)
}

fn run(od: &OrbitData, p: &VerifyPlan, rel: RelId) -> Vec<RelationReport> {
    Verifier::new(od, p).unwrap().verify_all(rel)
}

fn all_pass(r: &[RelationReport]) -> bool {
    r.iter().all(|x| x.status == Status::Pass)
}

#[test]
fn q7_untwisted_a1() {
    let od = catalog::untwisted(catalog::type_a(1));
    let p = plan(2, 2, &[RelId::Q7]);
    let r = run(&od, &p, RelId::Q7);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].instance, vec![1, 1]);
    assert_eq!(r[0].status, Status::Pass);
    assert!(r[0].coefficients_checked > 0);
    assert!(r[0].first_failure.is_none());
}

#[test]
fn q3_conjugation() {
    for od in [catalog::a2_flip(), catalog::a3_flip()] {
        let r = run(&od, &plan(2, 2, &[RelId::Q3]), RelId::Q3);
        assert!(all_pass(&r));
        assert_eq!(r.len(), 2 * od.reps().len());
    }
}

#[test]
fn q8_a3_flip_pair() {
    let od = catalog::a3_flip();
    let p = plan(2, 2, &[RelId::Q8]);
    let v = Verifier::new(&od, &p).unwrap();
    for s in [1, -1] {
        let r = v.verify_relation(RelId::Q8, &[0, 1], Some(s));
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert_eq!(r.instance, vec![1, 2]);
    }
}

#[test]
fn serre_examples() {
    let mut p = plan(1, 1, &[RelId::Q9, RelId::Q10]);
    p.serre_window = 1;
    let od = catalog::a3_flip();
    let v = Verifier::new(&od, &p).unwrap();
    for s in [1, -1] {
        let r = v.verify_relation(RelId::Q9, &[0, 1], Some(s));
        assert_eq!(r.status, Status::Pass, "{r:?}");
    }
    let q10 = v.verify_all(RelId::Q10);
    assert_eq!(q10.len(), 1);
    assert_eq!(q10[0].status, Status::Vacuous);

    let od = catalog::a2_flip();
    let r = run(&od, &p, RelId::Q10);
    assert_eq!(r.len(), 2);
    assert!(all_pass(&r), "{r:?}");
    assert!(r.iter().all(|x| x.coefficients_checked > 0));
}

#[test]
fn fixed_statuses() {
    let od = catalog::a2_flip();
    let p = plan(1, 1, &[]);
    let q0 = run(&od, &p, RelId::Q0);
    assert_eq!(q0[0].status, Status::Pass);
    assert!(q0[0].coefficients_checked > 0);
    assert_eq!(q0[1].status, Status::ByConstruction);
    assert_eq!(run(&od, &p, RelId::Q1)[0].status, Status::ByConstruction);
    assert_eq!(run(&od, &p, RelId::Q9p)[0].status, Status::Skipped);
    assert_eq!(run(&od, &p, RelId::Q9)[0].status, Status::Vacuous);
}

#[test]
fn mutations_are_caught_on_a2_flip() {
    let od = catalog::a2_flip();
    for d in [1, 2] {
        let mut p = plan(d, 2, &[RelId::Q7]);
        p.mutation = Some(Mutation::Q7DeltaQPower);
        let r = run(&od, &p, RelId::Q7);
        assert!(r.iter().any(|x| x.status == Status::Fail), "D={d}");
        let w = r.iter().find_map(|x| x.first_failure.clone()).unwrap();
        assert_ne!(w.lhs, w.rhs);

        let mut p = plan(d, 2, &[RelId::Q8]);
        p.mutation = Some(Mutation::FPlusFactor);
        let r = run(&od, &p, RelId::Q8);
        assert!(r
            .iter()
            .any(|x| x.status == Status::Fail && x.sign == Some(1)));
        // the mutation touches F⁺ only
        assert!(r
            .iter()
            .filter(|x| x.sign == Some(-1))
            .all(|x| x.status == Status::Pass));
    }
}

#[test]
fn alternative_qi_fails_where_degree_differs() {
    let od = catalog::a3_flip();
    let mut p = plan(1, 1, &[RelId::Q7]);
    p.qi = QiInterpretation::QDi;
    let r = run(&od, &p, RelId::Q7);
    for x in &r {
        let di = od.d_plus(x.instance[0] - 1);
        let related = od.same_orbit(x.instance[0] - 1, x.instance[1] - 1);
        let expect = if di > 1 && related {
            Status::Fail
        } else {
            Status::Pass
        };
        assert_eq!(x.status, expect, "{x:?}");
    }
}

#[test]
fn reports_are_deterministic() {
    let od = catalog::a2_flip();
    let mut p = plan(1, 2, &[RelId::Q7, RelId::Q8, RelId::Q5]);
    p.mutation = Some(Mutation::Q7DeltaQPower);
    let a = serde_json::to_string(&verify_theorem(&od, &p).unwrap()).unwrap();
    let b = serde_json::to_string(&verify_theorem(&od, &p).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"first_failure\":{"));
}

#[test]
fn enlarging_the_window_keeps_coefficients() {
    let od = catalog::a2_flip();
    let p = plan(1, 2, &[]);
    let v = Verifier::new(&od, &p).unwrap();
    let x = v.x(0, 1);
    let y = v.x(1, -1);
    for e in v.basis().iter().step_by(3) {
        let small = v.chain(&[x, y], e, &[-2, -2], &[2, 2]);
        let large = v.chain(&[x, y], e, &[-6, -6], &[6, 6]);
        for (k, c) in &small {
            assert_eq!(large.get(k), Some(c), "{e} {k:?}");
        }
        for (k, c) in &large {
            if k.iter().all(|x| (-2..=2).contains(x)) {
                assert_eq!(small.get(k), Some(c));
            }
        }
    }
}

#[test]
fn common_rescaling_of_x() {
    let od = catalog::a2_flip();
    let rels = [RelId::Q7, RelId::Q8, RelId::Q10];
    let mut base = plan(1, 2, &rels);
    base.serre_window = 1;
    let ctx = CycloField::new(od.n());
    let lam = Laurent::v_pow(&ctx, 1).scale_rat(&crate::coeff::Rat::from_int(2));

    let mut scaled = base.clone();
    scaled.x_scale = Some(lam.clone());
    let r0 = verify_theorem(&od, &base).unwrap();
    let r1 = verify_theorem(&od, &scaled).unwrap();
    for (a, b) in r0.reports.iter().zip(&r1.reports) {
        if a.relation == RelId::Q7 {
            assert_eq!(a.status, Status::Pass);
            assert_eq!(b.status, Status::Fail);
        } else {
            assert_eq!(a, b);
        }
    }

    // compensating ε_i² by the squared scalar restores (Q7)
    let v = Verifier::new(&od, &base).unwrap();
    let eps = v.vertex().epsilon_sq(0);
    let lam2 = CoeffElem::from_laurent(lam.mul(&lam));
    scaled.epsilon_sq_override = Some(eps.div(&lam2).unwrap());
    let r2 = verify_theorem(&od, &scaled).unwrap();
    assert!(r2.passed, "{:?}", r2.reports);
}

#[test]
fn theorem_on_small_windows() {
    for od in [
        catalog::untwisted(catalog::type_a(1)),
        catalog::a2_flip(),
        catalog::a3_flip(),
    ] {
        let mut p = VerifyPlan::new(1, 1);
        p.serre_window = 1;
        let r = verify_theorem(&od, &p).unwrap();
        assert!(
            r.passed,
            "{:?}",
            r.reports.iter().filter(|x| !x.passed()).collect::<Vec<_>>()
        );
        let s = summarize(&r.reports);
        assert!(s.contains_key(&RelId::Q7) && s.contains_key(&RelId::H1));
    }
}

#[test]
fn half_renders_doubled_exponents() {
    assert_eq!(half(-3), "-3/2");
    assert_eq!(half(4), "2");
    assert_eq!(half(0), "0");
}

/// The symmetrized Serre sum with the wrong-branch polynomial does not
/// vanish, so the passing (Q10) check is not an artifact of the window.
#[test]
fn serre_sum_with_wrong_branch_is_nonzero() {
    use super::checks::{add_into, poly_times, reorder, PERMS3};
    let od = catalog::a2_flip();
    let p = plan(1, 1, &[]);
    let v = Verifier::new(&od, &p).unwrap();
    let ctx = v.ctx().clone();
    let one = Laurent::one(&ctx);
    let win = vec![(-2, 2); 3];
    let total_for = |sign: i8, poly_sign: i32| {
        let poly = crate::relcat::build_p_i(&od, &ctx, 0, poly_sign).unwrap();
        let x = v.x(0, sign);
        let mut nonzero = 0;
        for e in v.basis() {
            let t = v.chain(&[x, x, x], e, &[-2 - 2 * 6; 3], &[2; 3]);
            let s = poly_times(&poly, &[0, 1, 2], &t, &win);
            let mut total = MultiSeries::new();
            for perm in PERMS3 {
                add_into(&mut total, &reorder(s.clone(), &perm), &one, &win);
            }
            nonzero += total.values().filter(|v| !v.is_zero()).count();
        }
        nonzero
    };
    assert_eq!(total_for(1, 1), 0);
    assert_eq!(total_for(-1, -1), 0);
    assert!(total_for(1, -1) > 0);
    assert!(total_for(-1, 1) > 0);
}
