//! Structure polynomials of the twisted quantum affinization and the catalog
//! of its defining relations.

mod polys;

pub use polys::{
    build_fg, build_p_i, build_p_ij, expand_g, g_coeffs, kappa, lambda, BivarPoly, TrivarPoly,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::OrbitData;
use crate::coeff::{gauss_binom_v, qint_v, Coeff, CoeffElem, CycloCtx, Laurent, Rat};
use crate::distcalc::Unit;
use crate::poly::MPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("inexact polynomial division")]
    InexactDivision,
    #[error("inapplicable: {0}")]
    Inapplicable(String),
}

/// Relation identifiers. `Q4p`–`Q6p` are the mode forms of (Q4)–(Q6) and
/// `H1` the Heisenberg commutator on the Fock side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelId {
    Q0,
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
    Q6,
    Q7,
    Q8,
    Q9,
    Q10,
    H1,
    Q4p,
    Q5p,
    Q6p,
    Q9p,
}

impl RelId {
    pub const ALL: [RelId; 16] = [
        RelId::Q0,
        RelId::Q1,
        RelId::Q2,
        RelId::Q3,
        RelId::Q4,
        RelId::Q5,
        RelId::Q6,
        RelId::Q7,
        RelId::Q8,
        RelId::Q9,
        RelId::Q10,
        RelId::H1,
        RelId::Q4p,
        RelId::Q5p,
        RelId::Q6p,
        RelId::Q9p,
    ];

    pub fn parse(s: &str) -> Option<RelId> {
        let t = s.trim().replace('\'', "p");
        RelId::ALL
            .into_iter()
            .find(|r| r.to_string().eq_ignore_ascii_case(&t))
    }
}

impl fmt::Display for RelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// How the undefined `q_i` in (Q7) is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum QiInterpretation {
    #[default]
    #[serde(rename = "q")]
    Q,
    #[serde(rename = "q^d_i")]
    QDi,
    #[serde(rename = "q^(d_i/s_i)")]
    QDiOverSi,
}

impl QiInterpretation {
    pub fn as_str(self) -> &'static str {
        match self {
            QiInterpretation::Q => "q",
            QiInterpretation::QDi => "q^d_i",
            QiInterpretation::QDiOverSi => "q^(d_i/s_i)",
        }
    }

    /// The exponent `b` with `q_i = q^b`.
    pub fn exponent(self, od: &OrbitData, i: usize) -> Rat {
        match self {
            QiInterpretation::Q => Rat::ONE,
            QiInterpretation::QDi => Rat::from_int(od.d_plus(i) as i64),
            QiInterpretation::QDiOverSi => {
                let fm = od.folded_matrix();
                let (rep, _) = od.rep_of(i);
                let pos = fm.reps.iter().position(|&r| r == rep).expect("rep listed");
                &Rat::from_int(od.d_plus(i) as i64) / &fm.s[pos]
            }
        }
    }

    /// `1/(q_i − q_i^{-1})`, or `None` when `q_i` is not a half-integer power
    /// of `q` (or is 1).
    pub fn prefactor(self, od: &OrbitData, ctx: &CycloCtx, i: usize) -> Option<CoeffElem> {
        let step = v_step(&self.exponent(od, i))?;
        if step == 0 {
            return None;
        }
        let d = Laurent::v_pow(ctx, step).sub(&Laurent::v_pow(ctx, -step));
        CoeffElem::from_laurent(d).inv().ok()
    }
}

/// `2b` when it is an integer.
fn v_step(b: &Rat) -> Option<i32> {
    let two = b * &Rat::from_int(2);
    if !two.is_integer() {
        return None;
    }
    two.to_string().parse().ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyTerm {
    pub exps: Vec<i32>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModeValue {
    pub m: i64,
    pub value: String,
}

/// Data carried by a relation descriptor; coefficients use the canonical
/// `z`/`v` string form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Poly {
        vars: Vec<String>,
        terms: Vec<PolyTerm>,
    },
    Series {
        var: String,
        terms: Vec<ModeValue>,
    },
    Constants {
        values: Vec<ModeValue>,
    },
    Scalar {
        value: String,
    },
    Integers {
        values: Vec<i64>,
    },
    Text {
        value: String,
    },
}

impl Payload {
    pub fn poly<C: Coeff>(p: &MPoly<C>, vars: &[&str]) -> Self {
        let mut terms: Vec<PolyTerm> = p
            .terms()
            .map(|(e, c)| PolyTerm {
                exps: e.clone(),
                coeff: c.to_elem().to_string(),
            })
            .collect();
        terms.reverse();
        Payload::Poly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms,
        }
    }

    fn series(var: &str, coeffs: &[Laurent]) -> Self {
        Payload::Series {
            var: var.into(),
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(n, c)| ModeValue {
                    m: n as i64,
                    value: c.to_elem().to_string(),
                })
                .collect(),
        }
    }

    fn scalar<C: Coeff>(c: &C) -> Self {
        Payload::Scalar {
            value: c.to_elem().to_string(),
        }
    }
}

/// One instance of a defining relation. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationDescriptor {
    pub id: RelId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    pub statement: String,
    pub payload: BTreeMap<String, Payload>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl RelationDescriptor {
    fn new(id: RelId, statement: &str) -> Self {
        RelationDescriptor {
            id,
            i: None,
            j: None,
            sign: None,
            statement: statement.into(),
            payload: BTreeMap::new(),
            flags: Vec::new(),
        }
    }

    fn at(mut self, i: usize, j: Option<usize>, sign: Option<i32>) -> Self {
        self.i = Some(i + 1);
        self.j = j.map(|j| j + 1);
        self.sign = sign.map(|s| s as i8);
        self
    }

    fn with(mut self, key: &str, p: Payload) -> Self {
        self.payload.insert(key.into(), p);
        self
    }
}

impl fmt::Display for RelationDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        if let Some(i) = self.i {
            write!(f, " i={i}")?;
        }
        if let Some(j) = self.j {
            write!(f, " j={j}")?;
        }
        if let Some(s) = self.sign {
            write!(f, " sign={}", if s > 0 { "+" } else { "-" })?;
        }
        write!(f, ": {}", self.statement)?;
        for flag in &self.flags {
            write!(f, " [{flag}]")?;
        }
        for (k, p) in &self.payload {
            write!(f, "\n    {k} = ")?;
            match p {
                Payload::Poly { vars, terms } => {
                    let parts: Vec<String> = terms
                        .iter()
                        .map(|t| {
                            let mono: Vec<String> = vars
                                .iter()
                                .zip(&t.exps)
                                .filter(|(_, &e)| e != 0)
                                .map(|(v, e)| {
                                    if *e == 1 {
                                        v.clone()
                                    } else {
                                        format!("{v}^{e}")
                                    }
                                })
                                .collect();
                            if mono.is_empty() {
                                format!("({})", t.coeff)
                            } else {
                                format!("({})*{}", t.coeff, mono.join("*"))
                            }
                        })
                        .collect();
                    write!(
                        f,
                        "{}",
                        if parts.is_empty() {
                            "0".into()
                        } else {
                            parts.join(" + ")
                        }
                    )?;
                }
                Payload::Series { var, terms } => {
                    let parts: Vec<String> = terms
                        .iter()
                        .map(|t| format!("({})*{var}^{}", t.value, t.m))
                        .collect();
                    write!(f, "{} + ...", parts.join(" + "))?;
                }
                Payload::Constants { values } => {
                    let parts: Vec<String> = values
                        .iter()
                        .map(|t| format!("m={}: {}", t.m, t.value))
                        .collect();
                    write!(f, "{}", parts.join("; "))?;
                }
                Payload::Scalar { value } | Payload::Text { value } => write!(f, "{value}")?,
                Payload::Integers { values } => write!(f, "{values:?}")?,
            }
        }
        Ok(())
    }
}

/// Options for [`emit_catalog`].
#[derive(Debug, Clone)]
pub struct CatalogOptions {
    pub include_q9p: bool,
    /// Number of series coefficients and mode constants listed.
    pub order: usize,
    pub qi: QiInterpretation,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions {
            include_q9p: false,
            order: 4,
            qi: QiInterpretation::Q,
        }
    }
}

/// Index pairs `(i, j)` with `i` an orbit representative and `j` the
/// smallest index in its orbit under the stabilizer of `i`. Every relation
/// for another pair follows from one of these by (Q0).
pub fn pair_instances(od: &OrbitData) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &i in od.reps() {
        let stab = od.twists_to(i, i);
        for j in 0..od.nu() {
            if stab.iter().all(|&k| od.mu().apply_pow(k as i64, j) >= j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Every relation instance over [`pair_instances`] (or over representatives
/// for single-index relations).
pub fn emit_catalog(
    od: &OrbitData,
    ctx: &CycloCtx,
    opts: &CatalogOptions,
) -> Vec<RelationDescriptor> {
    let nu = od.nu();
    let n = od.n() as i64;
    let d = opts.order;
    let mut out = Vec::new();
    for i in 0..nu {
        let mut r = RelationDescriptor::new(
            RelId::Q0,
            "x_{mu(i)}(z) = x_i(xi^-1 z), phi_{mu(i)}(z) = phi_i(xi^-1 z), k_{mu(a)} = k_a",
        );
        r.i = Some(i + 1);
        r = r.with(
            "mu_i",
            Payload::Integers {
                values: vec![od.mu().apply(i) as i64 + 1],
            },
        );
        out.push(r);
    }
    out.push(RelationDescriptor::new(
        RelId::Q1,
        "q^{c/2} q^{-c/2} = 1, central",
    ));
    for (i, j) in pair_instances(od) {
        out.push(
            RelationDescriptor::new(
                RelId::Q2,
                "[phi_i^+-(z), phi_j^+-(w)] = 0 = [k_a, phi_i^+-(z)]",
            )
            .at(i, Some(j), None),
        );
    }
    for &i in od.reps() {
        // exponent for a = alpha_l is Σ_k a_{l, μ^k(i)}
        let exps: Vec<i64> = (0..nu)
            .map(|l| (0..n).map(|k| od.a_twisted(l, i, k)).sum())
            .collect();
        for s in [1, -1] {
            out.push(
                RelationDescriptor::new(
                    RelId::Q3,
                    "k_a x_i(z) k_-a = q^{+-sum_k <a|alpha_{mu^k i}>} x_i(z)",
                )
                .at(i, None, Some(s))
                .with(
                    "exponent_per_simple_root",
                    Payload::Integers {
                        values: exps.clone(),
                    },
                ),
            );
        }
    }
    for (i, j) in pair_instances(od) {
        let g = g_coeffs(od, ctx, i, j, 1, Unit::ONE, d);
        out.push(
            RelationDescriptor::new(
                RelId::Q4,
                "phi_i^+(z) phi_j^-(w) = phi_j^-(w) phi_i^+(z) g_ij(q w/z)^-1 g_ij(q^-1 w/z)",
            )
            .at(i, Some(j), None)
            .with("g_ij", Payload::series("z", &g)),
        );
    }
    for (i, j) in pair_instances(od) {
        for s in [1, -1] {
            let g = g_coeffs(od, ctx, i, j, 1, Unit::ONE, d);
            out.push(
                RelationDescriptor::new(
                    RelId::Q5,
                    "phi_i^+(z) x_j(w) = x_j(w) phi_i^+(z) g_ij(q^{-+1/2} w/z)^{+-1}",
                )
                .at(i, Some(j), Some(s))
                .with("g_ij", Payload::series("z", &g)),
            );
            let g = g_coeffs(od, ctx, j, i, 1, Unit::ONE, d);
            out.push(
                RelationDescriptor::new(
                    RelId::Q6,
                    "phi_i^-(z) x_j(w) = x_j(w) phi_i^-(z) g_ji(q^{-+1/2} z/w)^{-+1}",
                )
                .at(i, Some(j), Some(s))
                .with("g_ji", Payload::series("z", &g)),
            );
        }
    }
    for (i, j) in pair_instances(od) {
        let mut r = RelationDescriptor::new(
            RelId::Q7,
            "[x_i^+(z), x_j^-(w)] = 1/(q_i-q_i^-1) sum_k delta_{i,mu^k j} (phi_i^+(q^-1/2 z) delta(q xi^k w/z) - phi_i^-(q^1/2 z) delta(q^-1 xi^k w/z))",
        )
        .at(i, Some(j), None);
        let ks: Vec<i64> = od.twists_to(i, j).into_iter().map(|k| k as i64).collect();
        r = r.with("k_values", Payload::Integers { values: ks });
        match opts.qi.prefactor(od, ctx, i) {
            Some(p) => r = r.with("prefactor", Payload::scalar(&p)),
            None => r.flags.push("q_i-not-representable".into()),
        }
        r.flags.push(format!("q_i={}", opts.qi.as_str()));
        out.push(r);
    }
    for (i, j) in pair_instances(od) {
        for s in [1, -1] {
            let (f, g) = build_fg(od, ctx, i, j, s);
            out.push(
                RelationDescriptor::new(
                    RelId::Q8,
                    "F_ij(z,w) x_i(z) x_j(w) = G_ij(z,w) x_j(w) x_i(z)",
                )
                .at(i, Some(j), Some(s))
                .with("F", Payload::poly(&f, &["z", "w"]))
                .with("G", Payload::poly(&g, &["z", "w"])),
            );
        }
    }
    for (i, j) in pair_instances(od) {
        if od.a(i, j) >= 0 || od.same_orbit(i, j) {
            continue;
        }
        for s in [1, -1] {
            let p =
                build_p_ij(od, ctx, i, j, s).expect("divisibility holds after the linking check");
            let b = qint_v(ctx, 2, 2 * od.d(i, j) as i32);
            out.push(
                RelationDescriptor::new(
                    RelId::Q9,
                    "sum_{S2} p_ij(z1,z2) (x_i x_i x_j - [2]_{q^d_ij} x_i x_j x_i + x_j x_i x_i) = 0",
                )
                .at(i, Some(j), Some(s))
                .with("p_ij", Payload::poly(&p, &["z1", "z2"]))
                .with("q_binomial", Payload::scalar(&b)),
            );
        }
    }
    for &i in od.reps() {
        if od.d(i, i) == 0 {
            continue;
        }
        for s in [1, -1] {
            let p = build_p_i(od, ctx, i, s).expect("divisibility holds after the linking check");
            out.push(
                RelationDescriptor::new(
                    RelId::Q10,
                    "sum_{S3} p_i(z1,z2,z3) x_i(z1) x_i(z2) x_i(z3) = 0",
                )
                .at(i, None, Some(s))
                .with("p_i", Payload::poly(&p, &["z1", "z2", "z3"])),
            );
        }
    }
    for (i, j) in pair_instances(od) {
        out.push(
            RelationDescriptor::new(
                RelId::H1,
                "[alpha_{i,m}, alpha_{j,n}] = delta_{m+n,0} kappa_ij(m) [m]_{q^c}",
            )
            .at(i, Some(j), None),
        );
    }
    let modes = |pos: bool, neg: bool| -> Vec<i64> {
        let mut v = Vec::new();
        if neg {
            v.extend((1..=d as i64).rev().map(|m| -m));
        }
        if pos {
            v.extend(1..=d as i64);
        }
        v
    };
    for (i, j) in pair_instances(od) {
        let values = modes(true, true)
            .into_iter()
            .map(|m| ModeValue {
                m,
                value: kappa(od, ctx, i, j, m)
                    .mul(&crate::coeff::qint(ctx, m))
                    .to_elem()
                    .to_string(),
            })
            .collect();
        out.push(
            RelationDescriptor::new(RelId::Q4p, "[h_{i,m}, h_{j,n}] = delta_{m+n,0} (1/m) sum_k xi^{mk} [m a_{i mu^k j}]_q [m]_{q^c}")
                .at(i, Some(j), None)
                .with("constants", Payload::Constants { values }),
        );
        for s in [1, -1] {
            for (id, pos) in [(RelId::Q5p, true), (RelId::Q6p, false)] {
                let values = modes(pos, !pos)
                    .into_iter()
                    .map(|m| {
                        // ± κ q^{∓m/2} for m > 0, ± κ q^{±m/2} for m < 0
                        let e = if pos { -s * m as i32 } else { s * m as i32 };
                        let c = kappa(od, ctx, i, j, m).mul(&Laurent::v_pow(ctx, e));
                        let c = if s > 0 { c } else { c.neg() };
                        ModeValue {
                            m,
                            value: c.to_elem().to_string(),
                        }
                    })
                    .collect();
                let st = if pos {
                    "[h_{i,m}, x_{j,n}] = +-(1/m) sum_k xi^{mk} [m a_{i mu^k j}]_q q^{-+mc/2} x_{j,m+n}, m > 0"
                } else {
                    "[h_{i,m}, x_{j,n}] = +-(1/m) sum_k xi^{mk} [m a_{i mu^k j}]_q q^{+-mc/2} x_{j,m+n}, m < 0"
                };
                out.push(
                    RelationDescriptor::new(id, st)
                        .at(i, Some(j), Some(s))
                        .with("constants", Payload::Constants { values }),
                );
            }
        }
    }
    if opts.include_q9p {
        out.extend(q9p_descriptors(od, ctx));
    }
    out
}

/// The folded Serre relation over representatives with `ǎ_ij < 0`.
fn q9p_descriptors(od: &OrbitData, ctx: &CycloCtx) -> Vec<RelationDescriptor> {
    let fm = od.folded_matrix();
    let mut out = Vec::new();
    for (pi, &i) in fm.reps.iter().enumerate() {
        for (pj, &j) in fm.reps.iter().enumerate() {
            let a = &fm.a[pi][pj];
            if pi == pj || !a.is_negative() {
                continue;
            }
            for s in [1, -1] {
                let mut r = RelationDescriptor::new(
                    RelId::Q9p,
                    "sum_{S_{1-a}} sum_r [1-a r]_{q^{d_i/s_i}} (-1)^r x_i..x_i x_j x_i..x_i = 0",
                )
                .at(i, Some(j), Some(s));
                r.flags.push("unverified-equivalence".into());
                r = r.with(
                    "folded_entry",
                    Payload::Text {
                        value: a.to_string(),
                    },
                );
                let base = &Rat::from_int(od.d_plus(i) as i64) / &fm.s[pi];
                let n = &Rat::ONE - a;
                match (n.is_integer(), v_step(&base)) {
                    (true, Some(step)) => {
                        let n: u32 = n.to_string().parse().expect("small");
                        let values = (0..=n)
                            .map(|r| ModeValue {
                                m: r as i64,
                                value: gauss_binom_v(ctx, n, r, step).to_elem().to_string(),
                            })
                            .collect();
                        r = r.with("binomials", Payload::Constants { values });
                    }
                    _ => r.flags.push("folded-matrix-not-representable".into()),
                }
                out.push(r);
            }
        }
    }
    out
}
