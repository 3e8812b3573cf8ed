//! One check per relation family.

use std::collections::BTreeSet;

use super::{Acc, Mutation, RelationReport, Status, Verifier};
use crate::cartan::OrbitData;
use crate::coeff::{qint, qint_v, CycloCtx, Laurent};
use crate::distcalc::Unit;
use crate::fock::{BasisElem, FockVector};
use crate::poly::MPoly;
use crate::relcat::{build_fg, build_p_i, build_p_ij, g_coeffs, kappa, pair_instances, RelId};
use crate::vertex::{scale_power, CurrentHandle, MultiSeries};

type Window = Vec<(i32, i32)>;

pub(super) fn instances(
    od: &OrbitData,
    _ctx: &CycloCtx,
    rel: RelId,
) -> Vec<(Vec<usize>, Option<i8>)> {
    let pairs = pair_instances(od);
    let signed = |v: Vec<Vec<usize>>| -> Vec<(Vec<usize>, Option<i8>)> {
        v.into_iter()
            .flat_map(|x| [(x.clone(), Some(1)), (x, Some(-1))])
            .collect()
    };
    let unsigned = |v: Vec<Vec<usize>>| -> Vec<(Vec<usize>, Option<i8>)> {
        v.into_iter().map(|x| (x, None)).collect()
    };
    let pv = || pairs.iter().map(|&(i, j)| vec![i, j]).collect::<Vec<_>>();
    match rel {
        RelId::Q2 | RelId::Q5 | RelId::Q6 | RelId::Q8 | RelId::Q5p | RelId::Q6p => signed(pv()),
        RelId::Q4 | RelId::Q7 | RelId::Q4p => unsigned(pv()),
        RelId::Q3 => signed(od.reps().iter().map(|&i| vec![i]).collect()),
        RelId::Q9 => signed(
            pairs
                .iter()
                .filter(|&&(i, j)| od.a(i, j) < 0 && !od.same_orbit(i, j))
                .map(|&(i, j)| vec![i, j])
                .collect(),
        ),
        RelId::Q10 => signed(
            od.reps()
                .iter()
                .filter(|&&i| od.d(i, i) > 0)
                .map(|&i| vec![i])
                .collect(),
        ),
        RelId::H1 => unsigned(
            (0..od.nu())
                .flat_map(|i| (0..od.nu()).map(move |j| vec![i, j]))
                .collect(),
        ),
        RelId::Q0 | RelId::Q1 | RelId::Q9p => vec![],
    }
}

/// `out[perm[k]] = key[k]` on every key.
pub(super) fn reorder(s: MultiSeries, perm: &[usize]) -> MultiSeries {
    s.into_iter()
        .map(|(k, v)| {
            let mut n = vec![0; k.len()];
            for (a, &p) in perm.iter().enumerate() {
                n[p] = k[a];
            }
            (n, v)
        })
        .collect()
}

fn in_window(key: &[i32], w: &[(i32, i32)]) -> bool {
    key.iter().zip(w).all(|(x, (lo, hi))| lo <= x && x <= hi)
}

pub(super) fn add_into(acc: &mut MultiSeries, s: &MultiSeries, k: &Laurent, w: &[(i32, i32)]) {
    for (key, v) in s {
        if !in_window(key, w) {
            continue;
        }
        let slot = acc
            .entry(key.clone())
            .or_insert_with(|| FockVector::zero(v.ctx()));
        slot.add_scaled(v, k);
    }
}

fn scale_series(s: &MultiSeries, k: &Laurent) -> MultiSeries {
    s.iter().map(|(key, v)| (key.clone(), v.scale(k))).collect()
}

/// `p · s`, where variable `t` of `p` is series variable `vars[t]`.
pub(super) fn poly_times(
    p: &MPoly<Laurent>,
    vars: &[usize],
    s: &MultiSeries,
    w: &[(i32, i32)],
) -> MultiSeries {
    let mut out = MultiSeries::new();
    for (key, v) in s {
        for (exps, c) in p.terms() {
            let mut k = key.clone();
            for (t, &e) in exps.iter().enumerate() {
                k[vars[t]] += 2 * e;
            }
            if !in_window(&k, w) {
                continue;
            }
            out.entry(k)
                .or_insert_with(|| FockVector::zero(v.ctx()))
                .add_scaled(v, c);
        }
    }
    out
}

/// `Σ_n g_n s(key)` placed at `key + n·step`.
fn shift_times(g: &[Laurent], step: &[i32], s: &MultiSeries, w: &[(i32, i32)]) -> MultiSeries {
    let mut out = MultiSeries::new();
    for (key, v) in s {
        for (n, c) in g.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k: Vec<i32> = key
                .iter()
                .zip(step)
                .map(|(x, d)| x + n as i32 * d)
                .collect();
            if !in_window(&k, w) {
                continue;
            }
            out.entry(k)
                .or_insert_with(|| FockVector::zero(v.ctx()))
                .add_scaled(v, c);
        }
    }
    out
}

fn convolve(a: &[Laurent], b: &[Laurent]) -> Vec<Laurent> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| {
            (0..=k).fold(Laurent::zero(a[0].ctx()), |acc, l| {
                acc.add(&a[l].mul(&b[k - l]))
            })
        })
        .collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

impl Acc {
    /// Compares the coefficients present off the parity grid against zero.
    fn off_grid(
        &mut self,
        e: &BasisElem,
        lhs: &MultiSeries,
        rhs: &MultiSeries,
        window: &[(i32, i32)],
        parity: &[i32],
    ) {
        let keys: BTreeSet<&Vec<i32>> = lhs.keys().chain(rhs.keys()).collect();
        for key in keys {
            if !in_window(key, window)
                || key
                    .iter()
                    .zip(parity)
                    .all(|(x, p)| (x - p).rem_euclid(2) == 0)
            {
                continue;
            }
            let zero = FockVector::zero(e_ctx(lhs, rhs));
            let l = lhs.get(key).unwrap_or(&zero);
            let r = rhs.get(key).unwrap_or(&zero);
            let exps: Vec<String> = key.iter().map(|&x| super::half(x)).collect();
            self.vectors(e, &exps, l, r);
            if self.failed() {
                return;
            }
        }
    }
}

fn e_ctx<'a>(a: &'a MultiSeries, b: &'a MultiSeries) -> &'a CycloCtx {
    a.values().chain(b.values()).next().expect("nonempty").ctx()
}

impl<'a> Verifier<'a> {
    fn xpar(&self, i: usize) -> i32 {
        let (rep, _) = self.od().rep_of(i);
        (self.vx.fock().shift_doubled(&self.od().simple_root(rep)) as i32).rem_euclid(2)
    }

    fn compare(
        &self,
        acc: &mut Acc,
        e: &BasisElem,
        lhs: &MultiSeries,
        rhs: &MultiSeries,
        window: &[(i32, i32)],
        parity: &[i32],
    ) {
        acc.off_grid(e, lhs, rhs, window, parity);
        if !acc.failed() {
            acc.series(self.ctx(), e, lhs, rhs, window, parity);
        }
    }

    /// Relations whose report does not come from an instance loop.
    pub(super) fn special(&self, rel: RelId) -> Option<Vec<RelationReport>> {
        let fixed = |status, note: &str| RelationReport {
            relation: rel,
            instance: vec![],
            sign: None,
            status,
            coefficients_checked: 0,
            first_failure: None,
            note: Some(note.to_string()),
        };
        match rel {
            RelId::Q0 => {
                let mut r = self.check_q0();
                r.note = Some("phi and k".into());
                Some(vec![
                    r,
                    fixed(
                        Status::ByConstruction,
                        "x: non-representative currents are defined by rotation",
                    ),
                ])
            }
            RelId::Q1 => Some(vec![fixed(
                Status::ByConstruction,
                "the central element acts by q on the level-one module",
            )]),
            RelId::Q9p => Some(vec![fixed(
                Status::Skipped,
                "the variant Serre relation is catalogued but not verified",
            )]),
            _ => None,
        }
    }

    pub(super) fn verify_instance(
        &self,
        rel: RelId,
        inst: &[usize],
        sign: Option<i8>,
    ) -> RelationReport {
        let s = sign.unwrap_or(1);
        let mut acc = Acc::default();
        let mut note = None;
        match rel {
            RelId::Q2 => self.check_q2(&mut acc, inst[0], inst[1], s),
            RelId::Q3 => self.check_q3(&mut acc, inst[0], s),
            RelId::Q4 => self.check_q4(&mut acc, inst[0], inst[1]),
            RelId::Q5 => self.check_q5(&mut acc, inst[0], inst[1], s),
            RelId::Q6 => self.check_q6(&mut acc, inst[0], inst[1], s),
            RelId::Q7 => note = self.check_q7(&mut acc, inst[0], inst[1]),
            RelId::Q8 => self.check_q8(&mut acc, inst[0], inst[1], s),
            RelId::Q9 => note = self.check_q9(&mut acc, inst[0], inst[1], s),
            RelId::Q10 => note = self.check_q10(&mut acc, inst[0], s),
            RelId::H1 => self.check_heis(&mut acc, inst[0], inst[1], false),
            RelId::Q4p => self.check_heis(&mut acc, inst[0], inst[1], true),
            RelId::Q5p => self.check_hx(&mut acc, inst[0], inst[1], s, true),
            RelId::Q6p => self.check_hx(&mut acc, inst[0], inst[1], s, false),
            RelId::Q0 | RelId::Q1 | RelId::Q9p => unreachable!("handled separately"),
        }
        let mut r = acc.report(rel, one_based(inst), sign);
        if let Some(n) = note {
            if r.status == Status::Pass || n.starts_with("fail:") {
                r.note = Some(n.trim_start_matches("fail:").trim().to_string());
            }
            if n.starts_with("fail:") {
                r.status = Status::Fail;
            }
        }
        r
    }

    fn check_q0(&self) -> RelationReport {
        let od = self.od();
        let d2 = self.d2();
        let w = vec![(-d2, d2)];
        let mut acc = Acc::default();
        'outer: for i in (0..od.nu()).filter(|&i| !od.is_rep(i)) {
            for sign in [1i8, -1] {
                let h = CurrentHandle::phi(od, i, sign);
                for e in &self.basis {
                    let direct: MultiSeries = self
                        .vx
                        .phi_direct(i, sign, e, d2)
                        .iter()
                        .map(|(k, v)| (vec![*k], v.clone()))
                        .collect();
                    let rotated: MultiSeries = self
                        .vx
                        .series(&h, e, d2)
                        .iter()
                        .map(|(k, v)| (vec![*k], v.clone()))
                        .collect();
                    self.compare(&mut acc, e, &direct, &rotated, &w, &[0]);
                    if acc.failed() {
                        break 'outer;
                    }
                }
            }
        }
        // k_{μ(α)} = k_α on every lattice sector
        if !acc.failed() {
            for a in 0..od.nu() {
                let alpha = od.simple_root(a);
                let moved = od.mu_pow_root(1, &alpha);
                for e in &self.basis {
                    let l = Laurent::q_pow(self.ctx(), od.form0(&moved, &e.lattice) as i32);
                    let r = Laurent::q_pow(self.ctx(), od.form0(&alpha, &e.lattice) as i32);
                    let v = FockVector::basis(self.ctx(), e.clone());
                    acc.vectors(e, &[format!("k[{}]", a + 1)], &v.scale(&l), &v.scale(&r));
                    if acc.failed() {
                        break;
                    }
                }
            }
        }
        acc.report(RelId::Q0, vec![], None)
    }

    fn check_q2(&self, acc: &mut Acc, i: usize, j: usize, sign: i8) {
        let d2 = self.d2();
        let od = self.od();
        let w = if sign > 0 { (-d2, 0) } else { (0, d2) };
        let win = vec![w, w];
        let (hi, hj) = (
            CurrentHandle::phi(od, i, sign),
            CurrentHandle::phi(od, j, sign),
        );
        for e in &self.basis {
            let lhs = self.chain(&[hi, hj], e, &[w.0, w.0], &[w.1, w.1]);
            let rhs = reorder(self.chain(&[hj, hi], e, &[w.0, w.0], &[w.1, w.1]), &[1, 0]);
            self.compare(acc, e, &lhs, &rhs, &win, &[0, 0]);
            if acc.failed() {
                return;
            }
            // [k_α, φ] = 0: φ preserves the lattice sector
            let same = FockVector::basis(self.ctx(), e.clone());
            for v in lhs.values() {
                for (b, _) in v.terms() {
                    let got = FockVector::basis(
                        self.ctx(),
                        BasisElem::new(e.mono.clone(), b.lattice.clone()),
                    );
                    acc.vectors(e, &["k".into()], &got, &same);
                    if acc.failed() {
                        return;
                    }
                }
            }
        }
    }

    fn check_q3(&self, acc: &mut Acc, i: usize, sign: i8) {
        let od = self.od();
        let ctx = self.ctx();
        let d2 = self.d2();
        let h = self.x(i, sign);
        for a in 0..od.nu() {
            let alpha = od.simple_root(a);
            let want: i64 = (0..od.n() as i64)
                .map(|k| od.form(&alpha, &od.mu_pow_root(k, &od.simple_root(i))))
                .sum();
            let rq = Laurent::q_pow(ctx, sign as i32 * want as i32);
            for e in &self.basis {
                let k0 = od.form0(&alpha, &e.lattice);
                let s = self.vx.series(&h, e, d2);
                for (x, v) in s.range(-d2..=d2) {
                    let mut lhs = FockVector::zero(ctx);
                    for (b, c) in v.terms() {
                        let q = Laurent::q_pow(ctx, (od.form0(&alpha, &b.lattice) - k0) as i32);
                        lhs.add_term(b.clone(), &c.mul(&q));
                    }
                    let exps = [format!("k[{}]", a + 1), super::half(*x)];
                    acc.vectors(e, &exps, &lhs, &v.scale(&rq));
                    if acc.failed() {
                        return;
                    }
                }
            }
        }
    }

    fn check_q4(&self, acc: &mut Acc, i: usize, j: usize) {
        let od = self.od();
        let ctx = self.ctx();
        let d = self.plan.mode_window as usize;
        let d2 = self.d2();
        let h = convolve(
            &g_coeffs(od, ctx, i, j, -1, Unit::new(0, 2), d),
            &g_coeffs(od, ctx, i, j, 1, Unit::new(0, -2), d),
        );
        let (pi, mj) = (CurrentHandle::phi(od, i, 1), CurrentHandle::phi(od, j, -1));
        let win = vec![(-d2, 0), (0, d2)];
        for e in &self.basis {
            let lhs = self.chain(&[pi, mj], e, &[-d2, 0], &[0, d2]);
            let s = reorder(self.chain(&[mj, pi], e, &[0, -d2], &[d2, 0]), &[1, 0]);
            let rhs = shift_times(&h, &[-2, 2], &s, &win);
            self.compare(acc, e, &lhs, &rhs, &win, &[0, 0]);
            if acc.failed() {
                return;
            }
        }
    }

    fn check_q5(&self, acc: &mut Acc, i: usize, j: usize, sign: i8) {
        let od = self.od();
        let ctx = self.ctx();
        let d = self.plan.mode_window as usize;
        let d2 = self.d2();
        let s = sign as i32;
        let g = g_coeffs(od, ctx, i, j, s, Unit::new(0, -s), d);
        let (p, x) = (CurrentHandle::phi(od, i, 1), self.x(j, sign));
        let win = vec![(-d2, 0), (-d2, d2)];
        let par = [0, self.xpar(j)];
        for e in &self.basis {
            let lhs = self.chain(&[p, x], e, &[-d2, -d2], &[0, d2]);
            let sr = reorder(self.chain(&[x, p], e, &[-2 * d2, -d2], &[d2, 0]), &[1, 0]);
            let rhs = shift_times(&g, &[-2, 2], &sr, &win);
            self.compare(acc, e, &lhs, &rhs, &win, &par);
            if acc.failed() {
                return;
            }
        }
    }

    fn check_q6(&self, acc: &mut Acc, i: usize, j: usize, sign: i8) {
        let od = self.od();
        let ctx = self.ctx();
        let d = self.plan.mode_window as usize;
        let d2 = self.d2();
        let s = sign as i32;
        let g = g_coeffs(od, ctx, j, i, -s, Unit::new(0, -s), d);
        let (p, x) = (CurrentHandle::phi(od, i, -1), self.x(j, sign));
        let win = vec![(0, d2), (-d2, d2)];
        let par = [0, self.xpar(j)];
        for e in &self.basis {
            let lhs = self.chain(&[p, x], e, &[0, -d2], &[d2, d2]);
            let sr = reorder(self.chain(&[x, p], e, &[-d2, 0], &[2 * d2, d2]), &[1, 0]);
            let rhs = shift_times(&g, &[2, -2], &sr, &win);
            self.compare(acc, e, &lhs, &rhs, &win, &par);
            if acc.failed() {
                return;
            }
        }
    }

    /// `ε_i² (q_i − q_i^{-1}) [X⁺_i(z), X⁻_j(w)]` against the δ-function side.
    fn check_q7(&self, acc: &mut Acc, i: usize, j: usize) -> Option<String> {
        let od = self.od();
        let ctx = self.ctx();
        let d2 = self.d2();
        let Some(pref) = self.plan.qi.prefactor(od, ctx, i) else {
            return Some(format!(
                "fail: q_i = q^({}) gives no usable 1/(q_i - q_i^-1)",
                self.plan.qi.exponent(od, i)
            ));
        };
        let eps = self
            .plan
            .epsilon_sq_override
            .clone()
            .unwrap_or_else(|| self.vx.epsilon_sq(i));
        let lk = eps.num().mul(pref.den());
        let rk = eps.den().mul(pref.num());

        let (xp, xm) = (self.x(i, 1), self.x(j, -1));
        let win = vec![(-d2, d2), (-d2, d2)];
        let (pa, pb) = (self.xpar(i), self.xpar(j));
        let branches: Vec<i64> = if od.same_orbit(i, j) {
            let r = od.rep_of(j).1 as i64;
            od.twists_to(i, i).iter().map(|&s| s as i64 - r).collect()
        } else {
            vec![]
        };
        let dq = if self.plan.mutation == Some(Mutation::Q7DeltaQPower) {
            4
        } else {
            2
        };
        let plus = CurrentHandle::phi(od, i, 1).scaled(Unit::new(0, -1));
        let minus = CurrentHandle::phi(od, i, -1).scaled(Unit::new(0, 1));
        let bs: Vec<i32> = (-d2..=d2).filter(|b| (b - pb).rem_euclid(2) == 0).collect();
        for e in &self.basis {
            let a = self.chain(&[xp, xm], e, &[-d2, -d2], &[d2, d2]);
            let b = reorder(self.chain(&[xm, xp], e, &[-d2, -d2], &[d2, d2]), &[1, 0]);
            let mut comm = a;
            add_into(&mut comm, &b, &Laurent::from_int(ctx, -1), &win);
            comm.retain(|_, v| !v.is_zero());
            let lhs = scale_series(&comm, &lk);

            let mut rhs = MultiSeries::new();
            for &k in &branches {
                let cp = Unit::new(2 * k, dq);
                let cm = Unit::new(2 * k, -2);
                let sp = self.vx.series(&plus, e, 0);
                let sm = self.vx.series(&minus, e, 2 * d2);
                for (terms, c, sgn) in [(&sp, cp, 1), (&sm, cm, -1)] {
                    for (&s, v) in terms.range(-2 * d2..=2 * d2) {
                        if (sgn > 0 && s > 0) || (sgn < 0 && s < 0) {
                            continue;
                        }
                        for &bb in &bs {
                            let aa = s - bb;
                            if aa < -d2 || aa > d2 {
                                continue;
                            }
                            let mut f = scale_power(ctx, c, bb).mul(&rk);
                            if sgn < 0 {
                                f = f.neg();
                            }
                            rhs.entry(vec![aa, bb])
                                .or_insert_with(|| FockVector::zero(ctx))
                                .add_scaled(v, &f);
                        }
                    }
                }
            }
            rhs.retain(|_, v| !v.is_zero());
            self.compare(acc, e, &lhs, &rhs, &win, &[pa, pb]);
            if acc.failed() {
                return None;
            }
        }
        if self.plan.epsilon_sq_override.is_some() {
            return Some("epsilon_i^2 overridden".into());
        }
        None
    }

    fn check_q8(&self, acc: &mut Acc, i: usize, j: usize, sign: i8) {
        let od = self.od();
        let ctx = self.ctx();
        let d2 = self.d2();
        let (mut f, g) = build_fg(od, ctx, i, j, sign as i32);
        if sign > 0 && self.plan.mutation == Some(Mutation::FPlusFactor) {
            f = corrupt_f(od, ctx, i, j, &f);
        }
        let degs = |p: &MPoly<Laurent>| (p.degree_in(0).max(0), p.degree_in(1).max(0));
        let (fz, fw) = degs(&f);
        let (gz, gw) = degs(&g);
        let (xi, xj) = (self.x(i, sign), self.x(j, sign));
        let win = vec![(-d2, d2), (-d2, d2)];
        let par = [self.xpar(i), self.xpar(j)];
        for e in &self.basis {
            let t = self.chain(&[xi, xj], e, &[-d2 - 2 * fz, -d2 - 2 * fw], &[d2, d2]);
            let u = reorder(
                self.chain(&[xj, xi], e, &[-d2 - 2 * gw, -d2 - 2 * gz], &[d2, d2]),
                &[1, 0],
            );
            let lhs = poly_times(&f, &[0, 1], &t, &win);
            let rhs = poly_times(&g, &[0, 1], &u, &win);
            self.compare(acc, e, &lhs, &rhs, &win, &par);
            if acc.failed() {
                return;
            }
        }
    }

    fn serre_window(&self) -> i32 {
        2 * self.plan.serre_window as i32
    }

    fn check_q9(&self, acc: &mut Acc, i: usize, j: usize, sign: i8) -> Option<String> {
        let od = self.od();
        let ctx = self.ctx();
        let ds = self.serre_window();
        let p = match build_p_ij(od, ctx, i, j, sign as i32) {
            Ok(p) => p,
            Err(e) => return Some(format!("fail: {e}")),
        };
        let dp = p.degree_in(0).max(p.degree_in(1)).max(0);
        let lo = -ds - 2 * dp;
        let two = qint_v(ctx, 2, 2 * od.d(i, j) as i32).neg();
        let (xi, xj) = (self.x(i, sign), self.x(j, sign));
        // variables (z1, z2, w)
        let win = vec![(-ds, ds); 3];
        let par = [self.xpar(i), self.xpar(i), self.xpar(j)];
        let one = Laurent::one(ctx);
        for e in &self.basis {
            let mut t = MultiSeries::new();
            let wide = vec![(lo, ds), (lo, ds), (-ds, ds)];
            let a = self.chain(&[xi, xi, xj], e, &[lo, lo, -ds], &[ds, ds, ds]);
            add_into(&mut t, &a, &one, &wide);
            let b = reorder(
                self.chain(&[xi, xj, xi], e, &[lo, -ds, lo], &[ds, ds, ds]),
                &[0, 2, 1],
            );
            add_into(&mut t, &b, &two, &wide);
            let c = reorder(
                self.chain(&[xj, xi, xi], e, &[-ds, lo, lo], &[ds, ds, ds]),
                &[2, 0, 1],
            );
            add_into(&mut t, &c, &one, &wide);
            let s = poly_times(&p, &[0, 1], &t, &win);
            let mut total = s.clone();
            add_into(&mut total, &reorder(s, &[1, 0, 2]), &one, &win);
            total.retain(|_, v| !v.is_zero());
            self.compare(acc, e, &total, &MultiSeries::new(), &win, &par);
            if acc.failed() {
                return None;
            }
        }
        Some(format!(
            "window [-{0}, {0}] in each variable",
            self.plan.serre_window
        ))
    }

    fn check_q10(&self, acc: &mut Acc, i: usize, sign: i8) -> Option<String> {
        let od = self.od();
        let ctx = self.ctx();
        let ds = self.serre_window();
        let p = match build_p_i(od, ctx, i, sign as i32) {
            Ok(p) => p,
            Err(e) => return Some(format!("fail: {e}")),
        };
        let dp = (0..3).map(|k| p.degree_in(k)).max().unwrap_or(0).max(0);
        let lo = -ds - 2 * dp;
        let x = self.x(i, sign);
        let win = vec![(-ds, ds); 3];
        let pa = self.xpar(i);
        let one = Laurent::one(ctx);
        for e in &self.basis {
            let t = self.chain(&[x, x, x], e, &[lo; 3], &[ds; 3]);
            let s = poly_times(&p, &[0, 1, 2], &t, &win);
            let mut total = MultiSeries::new();
            for perm in PERMS3 {
                add_into(&mut total, &reorder(s.clone(), &perm), &one, &win);
            }
            total.retain(|_, v| !v.is_zero());
            self.compare(acc, e, &total, &MultiSeries::new(), &win, &[pa; 3]);
            if acc.failed() {
                return None;
            }
        }
        Some(format!(
            "window [-{0}, {0}] in each variable",
            self.plan.serre_window
        ))
    }

    /// Heisenberg brackets on the basis: against the Fock-space constant
    /// (`structure`) or against `κ_ij(m)[m]_q` from the catalog.
    fn check_heis(&self, acc: &mut Acc, i: usize, j: usize, from_catalog: bool) {
        let fs = self.vx.fock();
        let ctx = self.ctx();
        let d = self.plan.mode_window as i64;
        let modes: Vec<i64> = (-d..=d).filter(|&m| m != 0).collect();
        for e in &self.basis {
            let v = FockVector::basis(ctx, e.clone());
            for &m in &modes {
                for &n in &modes {
                    let lhs = fs
                        .apply_alpha(i, m, &fs.apply_alpha(j, n, &v))
                        .sub(&fs.apply_alpha(j, n, &fs.apply_alpha(i, m, &v)));
                    let rhs = if m + n != 0 {
                        FockVector::zero(ctx)
                    } else if from_catalog {
                        v.scale(&kappa(self.od(), ctx, i, j, m).mul(&qint(ctx, m)))
                    } else {
                        v.scale(&fs.heis_bracket_constant(i, j, m).expect("nonzero mode"))
                    };
                    acc.vectors(e, &[m.to_string(), n.to_string()], &lhs, &rhs);
                    if acc.failed() {
                        return;
                    }
                }
            }
            if !from_catalog {
                for &m in &modes {
                    let a = fs.heis_bracket_constant(i, j, m).expect("nonzero mode");
                    let b = fs.heis_bracket_constant(j, i, -m).expect("nonzero mode");
                    acc.vectors(e, &[m.to_string()], &v.scale(&a), &v.scale(&b.neg()));
                    if acc.failed() {
                        return;
                    }
                }
            }
        }
    }

    /// `[h_{i,m}, X^±_j(z)] = ±κ_ij(m) q^{∓m/2} z^m X^±_j(z)` for `m > 0`
    /// (`positive`), and with `q^{±m/2}` for `m < 0`.
    fn check_hx(&self, acc: &mut Acc, i: usize, j: usize, sign: i8, positive: bool) {
        let fs = self.vx.fock();
        let ctx = self.ctx();
        let od = self.od();
        let d = self.plan.mode_window as i64;
        let d2 = self.d2();
        let x = self.x(j, sign);
        let par = self.xpar(j);
        let ms: Vec<i64> = if positive {
            (1..=d).collect()
        } else {
            (-d..=-1).collect()
        };
        let win: Window = vec![(-d2, d2)];
        for e in &self.basis {
            let v = FockVector::basis(ctx, e.clone());
            let xs = self.vx.apply(&x, &v, d2 + 2 * d as i32);
            for &m in &ms {
                let av = fs.apply_alpha(i, m, &v);
                let xa = self.vx.apply(&x, &av, d2);
                let vq = if positive {
                    -(sign as i32) * m as i32
                } else {
                    sign as i32 * m as i32
                };
                let k = kappa(od, ctx, i, j, m)
                    .mul(&Laurent::v_pow(ctx, vq))
                    .mul(&Laurent::from_int(ctx, sign as i64));
                let mut lhs = MultiSeries::new();
                let mut rhs = MultiSeries::new();
                for (s, w) in xs.iter() {
                    let target = s + 2 * m as i32;
                    if target < -d2 || target > d2 {
                        continue;
                    }
                    rhs.insert(vec![target], w.scale(&k));
                }
                for (s, w) in xs.range(-d2..=d2) {
                    let aw = fs.apply_alpha(i, m, w);
                    if !aw.is_zero() {
                        lhs.insert(vec![*s], aw);
                    }
                }
                let xa: MultiSeries = xa
                    .range(-d2..=d2)
                    .map(|(s, w)| (vec![*s], w.clone()))
                    .collect();
                add_into(&mut lhs, &xa, &Laurent::from_int(ctx, -1), &win);
                lhs.retain(|_, w| !w.is_zero());
                rhs.retain(|_, w| !w.is_zero());
                self.compare(acc, e, &lhs, &rhs, &win, &[par]);
                if acc.failed() {
                    return;
                }
            }
        }
    }
}

pub(super) const PERMS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// `F⁺_ij` with one factor's `q`-power raised by one.
fn corrupt_f(
    od: &OrbitData,
    ctx: &CycloCtx,
    i: usize,
    j: usize,
    f: &MPoly<Laurent>,
) -> MPoly<Laurent> {
    let one = Laurent::one(ctx);
    let z = MPoly::var_term(ctx, 2, 0, 1, one.clone());
    let factor = |k: i64, a: i32| {
        let c = Unit::xi_q(k, 0).laurent(ctx).mul(&Laurent::q_pow(ctx, a));
        z.sub(&MPoly::var_term(ctx, 2, 1, 1, c))
    };
    match od.gamma(i, j).first() {
        Some(&k) => {
            let a = od.a_twisted(i, j, k as i64) as i32;
            f.div_exact(&factor(k as i64, a))
                .expect("factor of F")
                .mul(&factor(k as i64, a + 1))
        }
        None => f.mul(&factor(0, 1)),
    }
}
