//! The relation verifier: every defining relation is instantiated over orbit
//! representatives, both sides are applied to a truncated Fock basis, and
//! the coefficients are compared exactly on a finite window.

mod checks;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cartan::OrbitData;
use crate::coeff::{CoeffElem, CycloCtx, CycloField, Laurent};
use crate::fock::{BasisElem, FockVector};
use crate::relcat::{QiInterpretation, RelId};
use crate::vertex::{CurrentHandle, MultiSeries, Vertex, VertexError};

/// Deliberate corruptions used to show that a window is not vacuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// `δ(qξ^k w/z)` in (Q7) replaced by `δ(q²ξ^k w/z)`.
    Q7DeltaQPower,
    /// One factor `z − ξ^k q^{a} w` of `F⁺_ij` replaced by `z − ξ^k q^{a+1} w`.
    FPlusFactor,
}

#[derive(Debug, Clone)]
pub struct VerifyPlan {
    pub relations: Vec<RelId>,
    /// Window bound `D` in natural units: compared exponents lie in `[−D, D]`.
    pub mode_window: u32,
    /// Window bound for the three-variable Serre relations.
    pub serre_window: u32,
    pub basis_degree: u32,
    pub lattice_height: u32,
    pub qi: QiInterpretation,
    pub mutation: Option<Mutation>,
    /// Every `X^±_i` multiplied by this scalar.
    pub x_scale: Option<Laurent>,
    /// Replaces every `ε_i²` in (Q7).
    pub epsilon_sq_override: Option<CoeffElem>,
}

impl VerifyPlan {
    /// All verifiable relations with the given windows and defaults
    /// elsewhere.
    pub fn new(mode_window: u32, basis_degree: u32) -> Self {
        VerifyPlan {
            relations: RelId::ALL
                .into_iter()
                .filter(|r| *r != RelId::Q9p)
                .collect(),
            mode_window,
            serre_window: mode_window.min(2),
            basis_degree,
            lattice_height: 2,
            qi: QiInterpretation::Q,
            mutation: None,
            x_scale: None,
            epsilon_sq_override: None,
        }
    }

    pub fn with_relations(mut self, relations: &[RelId]) -> Self {
        self.relations = relations.to_vec();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ByConstruction,
    Vacuous,
    Skipped,
}

/// The first coefficient where the two sides differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Input basis vector.
    pub basis: String,
    /// Exponents (or Heisenberg modes) of the compared coefficient.
    pub exponents: Vec<String>,
    /// Output basis vector whose coefficients differ.
    pub component: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub relation: RelId,
    /// 1-based indices of the instance.
    pub instance: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    pub status: Status,
    pub coefficients_checked: u64,
    pub first_failure: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub passed: bool,
    pub qi_interpretation: String,
    pub mode_window: u32,
    pub serre_window: u32,
    pub basis_degree: u32,
    pub basis_size: usize,
    pub reports: Vec<RelationReport>,
}

/// Running comparison state for one relation instance.
#[derive(Debug, Default)]
pub(crate) struct Acc {
    checked: u64,
    failure: Option<Witness>,
}

impl Acc {
    fn failed(&self) -> bool {
        self.failure.is_some()
    }

    /// Compares two vectors for one coefficient; records the first mismatch.
    fn vectors(&mut self, e: &BasisElem, exps: &[String], lhs: &FockVector, rhs: &FockVector) {
        self.checked += 1;
        if self.failure.is_some() || lhs == rhs {
            return;
        }
        let diff = lhs.sub(rhs);
        let (comp, _) = diff.terms().next().expect("vectors differ");
        self.failure = Some(Witness {
            basis: e.to_string(),
            exponents: exps.to_vec(),
            component: comp.to_string(),
            lhs: CoeffElem::from_laurent(lhs.coeff(comp)).to_string(),
            rhs: CoeffElem::from_laurent(rhs.coeff(comp)).to_string(),
        });
    }

    /// Compares two multivariate series on every grid point of `window`
    /// whose parities match `parity` (doubled exponents).
    fn series(
        &mut self,
        ctx: &CycloCtx,
        e: &BasisElem,
        lhs: &MultiSeries,
        rhs: &MultiSeries,
        window: &[(i32, i32)],
        parity: &[i32],
    ) {
        let zero = FockVector::zero(ctx);
        let mut key: Vec<i32> = window
            .iter()
            .zip(parity)
            .map(|((lo, _), p)| lo + (lo - p).rem_euclid(2))
            .collect();
        if key.iter().zip(window).any(|(k, (_, hi))| k > hi) {
            return;
        }
        loop {
            let l = lhs.get(&key).unwrap_or(&zero);
            let r = rhs.get(&key).unwrap_or(&zero);
            let exps: Vec<String> = key.iter().map(|&x| half(x)).collect();
            self.vectors(e, &exps, l, r);
            if self.failed() {
                return;
            }
            // odometer over the grid
            let mut k = key.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                key[k] += 2;
                if key[k] <= window[k].1 {
                    break;
                }
                let (lo, _) = window[k];
                key[k] = lo + (lo - parity[k]).rem_euclid(2);
            }
        }
    }

    fn report(self, relation: RelId, instance: Vec<usize>, sign: Option<i8>) -> RelationReport {
        RelationReport {
            relation,
            instance,
            sign,
            status: if self.failure.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            coefficients_checked: self.checked,
            first_failure: self.failure,
            note: None,
        }
    }
}

/// A doubled exponent rendered as an element of ½ℤ.
pub fn half(x: i32) -> String {
    if x % 2 == 0 {
        (x / 2).to_string()
    } else {
        format!("{x}/2")
    }
}

/// Verifier state for one Cartan datum and plan: the operator engine and
/// the truncated basis.
pub struct Verifier<'a> {
    plan: &'a VerifyPlan,
    vx: Vertex,
    basis: Vec<BasisElem>,
}

impl<'a> Verifier<'a> {
    pub fn new(od: &OrbitData, plan: &'a VerifyPlan) -> Result<Self, VertexError> {
        let ctx = CycloField::new(od.n());
        let vx = Vertex::new(od, &ctx)?;
        let support = vx.fock().lattice_support(plan.lattice_height);
        let basis = vx.fock().fock_basis(plan.basis_degree, &support);
        Ok(Verifier { plan, vx, basis })
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn vertex(&self) -> &Vertex {
        &self.vx
    }

    fn od(&self) -> &OrbitData {
        self.vx.od()
    }

    fn ctx(&self) -> &CycloCtx {
        self.vx.ctx()
    }

    fn d2(&self) -> i32 {
        2 * self.plan.mode_window as i32
    }

    fn x(&self, i: usize, sign: i8) -> CurrentHandle {
        CurrentHandle::x(self.od(), i, sign)
    }

    /// A product of currents on `e`, with the plan's `X` rescaling applied.
    fn chain(&self, hs: &[CurrentHandle], e: &BasisElem, lo: &[i32], hi: &[i32]) -> MultiSeries {
        let mut s = self.vx.chain(hs, e, lo, hi);
        if let Some(l) = &self.plan.x_scale {
            let n = hs
                .iter()
                .filter(|h| h.kind == crate::vertex::CurrentKind::X)
                .count();
            let k = l.pow(n as u32);
            for v in s.values_mut() {
                *v = v.scale(&k);
            }
        }
        s
    }

    /// Instances of a relation as `(i, j, sign)` with 0-based indices.
    pub fn instances(&self, rel: RelId) -> Vec<(Vec<usize>, Option<i8>)> {
        checks::instances(self.od(), self.ctx(), rel)
    }

    /// Verifies one instance.
    pub fn verify_relation(&self, rel: RelId, inst: &[usize], sign: Option<i8>) -> RelationReport {
        self.verify_instance(rel, inst, sign)
    }

    /// All instances of one relation; a relation without instances yields a
    /// single vacuous report.
    pub fn verify_all(&self, rel: RelId) -> Vec<RelationReport> {
        if let Some(r) = self.special(rel) {
            return r;
        }
        let inst = self.instances(rel);
        if inst.is_empty() {
            return vec![RelationReport {
                relation: rel,
                instance: vec![],
                sign: None,
                status: Status::Vacuous,
                coefficients_checked: 0,
                first_failure: None,
                note: Some("no applicable instances".into()),
            }];
        }
        inst.iter()
            .map(|(ij, s)| self.verify_instance(rel, ij, *s))
            .collect()
    }
}

/// Runs every relation of the plan. Overall pass iff no report fails.
pub fn verify_theorem(od: &OrbitData, plan: &VerifyPlan) -> Result<TheoremReport, VertexError> {
    let v = Verifier::new(od, plan)?;
    let mut reports = Vec::new();
    let mut rels = plan.relations.clone();
    rels.sort();
    rels.dedup();
    for rel in rels {
        reports.extend(v.verify_all(rel));
    }
    Ok(TheoremReport {
        passed: reports.iter().all(|r| r.passed()),
        qi_interpretation: plan.qi.as_str().to_string(),
        mode_window: plan.mode_window,
        serre_window: plan.serre_window,
        basis_degree: plan.basis_degree,
        basis_size: v.basis.len(),
        reports,
    })
}

/// Groups reports by relation for summaries.
pub fn summarize(reports: &[RelationReport]) -> BTreeMap<RelId, (usize, usize)> {
    let mut out: BTreeMap<RelId, (usize, usize)> = BTreeMap::new();
    for r in reports {
        let e = out.entry(r.relation).or_default();
        e.0 += 1;
        if r.passed() {
            e.1 += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests;
