//! Re-checks a graph against its certificate.
//!
//! Every certificate gets the polynomial checks: the graph is rebuilt from
//! the plan, the cutset is re-measured, and the nonhamiltonicity argument
//! named by the certificate is re-run. When the graph is small enough the
//! exact oracles run on top of that, and the report says which tier was
//! reached.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{block, complete_bipartite, g_construct, BlockKind, Case3Layout};
use crate::graph::Graph;
use crate::oracles::{
    has_hamilton_path, independence_number, is_hamiltonian, toughness_exact, CutsetWitness,
    HamiltonLimits, OracleError, Toughness, Verdict,
};
use crate::rational::Rational;
use crate::synth::{self, formulas, predicted_toughness, CaseId, Certificate, NonHamiltonicity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyLimits {
    /// Largest order for the exact toughness oracle.
    pub toughness_max_n: usize,
    /// Largest order for running the Hamiltonicity oracle next to a
    /// structural argument.
    pub hamilton_cross_check_n: usize,
    pub alpha_max_n: usize,
    pub hamilton: HamiltonLimits,
}

impl Default for VerifyLimits {
    fn default() -> Self {
        VerifyLimits {
            toughness_max_n: 24,
            hamilton_cross_check_n: 24,
            alpha_max_n: 64,
            hamilton: HamiltonLimits::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ToughnessStatus {
    /// The exact oracle returned the predicted value.
    OracleExact,
    /// Only the cutset bound `τ <= t` was checked.
    WitnessUpperBoundOnly,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NonHamStatus {
    OracleExhaustive,
    Structural,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Error)]
#[serde(tag = "reason", content = "detail", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rejection {
    #[error("plan invalid: {0}")]
    PlanInvalid(String),
    #[error("graph differs from the one the plan builds")]
    RebuildMismatch,
    #[error("cutset invalid: {0}")]
    WitnessInvalid(String),
    #[error("witness ratio mismatch: {0}")]
    WitnessRatioMismatch(String),
    #[error("structural nonhamiltonicity check failed: {0}")]
    StructuralFailed(String),
    #[error("oracle contradicts certificate: {0}")]
    OracleContradiction(String),
    #[error("oracle could not decide: {0}")]
    OracleUndecided(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub accepted: bool,
    pub n: usize,
    pub toughness_status: ToughnessStatus,
    pub nonhamiltonicity_status: NonHamStatus,
    pub alpha: Option<usize>,
    pub oracle_tau: Option<Toughness>,
    pub details: Vec<CheckOutcome>,
    pub rejections: Vec<Rejection>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}

struct Recorder {
    details: Vec<CheckOutcome>,
    rejections: Vec<Rejection>,
}

impl Recorder {
    fn run<T>(&mut self, name: &str, f: impl FnOnce() -> Result<(T, String), Rejection>) -> Option<T> {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        match out {
            Ok((v, detail)) => {
                self.details.push(CheckOutcome {
                    name: name.into(),
                    passed: true,
                    detail,
                    elapsed,
                });
                Some(v)
            }
            Err(r) => {
                self.details.push(CheckOutcome {
                    name: name.into(),
                    passed: false,
                    detail: r.to_string(),
                    elapsed,
                });
                self.rejections.push(r);
                None
            }
        }
    }
}

fn expected_tag(case: CaseId) -> &'static str {
    match case {
        CaseId::Bipartite => "BIPARTITE_IMBALANCE",
        CaseId::UnitToughness | CaseId::InflatedPetersen => "EXHAUSTIVE",
        CaseId::ThreePart => "EDGE_COUNT",
        _ => "BLOCK_COUNT",
    }
}

fn tag_of(nh: &NonHamiltonicity) -> &'static str {
    match nh {
        NonHamiltonicity::BipartiteImbalance { .. } => "BIPARTITE_IMBALANCE",
        NonHamiltonicity::Exhaustive => "EXHAUSTIVE",
        NonHamiltonicity::EdgeCount { .. } => "EDGE_COUNT",
        NonHamiltonicity::BlockCount { .. } => "BLOCK_COUNT",
    }
}

fn structural(msg: String) -> Rejection {
    Rejection::StructuralFailed(msg)
}

/// `K_{small,large}` on parts `0..small`, `small..small+large`, with the
/// larger part above half the vertices.
fn check_bipartite(g: &Graph, small: u64, large: u64) -> Result<String, Rejection> {
    let (s, l) = (small as usize, large as usize);
    if s + l != g.n() {
        return Err(structural(format!("parts {s} + {l} do not cover {} vertices", g.n())));
    }
    if *g != complete_bipartite(s, l) {
        return Err(structural("graph is not the complete bipartite graph on the stated parts".into()));
    }
    if 2 * l <= g.n() {
        return Err(structural(format!("part of size {l} is not more than half of {}", g.n())));
    }
    Ok(format!("independent part of {l} > n/2 = {}/2", g.n()))
}

/// A Hamilton cycle uses exactly `2|I|` edges at an independent set `I`,
/// while each outside vertex can supply at most `min(2, |N(v) ∩ I|)`.
fn check_edge_count(g: &Graph, c: &Certificate, lhs: u64, rhs: u64) -> Result<String, Rejection> {
    if c.a_scaled <= c.b_scaled || c.b_scaled < 2 {
        return Err(structural("three-part layout needs a > b >= 2".into()));
    }
    let lay = Case3Layout::new(c.a_scaled, c.b_scaled);
    if lay.n() != g.n() {
        return Err(structural(format!("layout has {} vertices, graph {}", lay.n(), g.n())));
    }
    let independent: Vec<usize> = (1..=lay.b).map(|i| lay.y(i)).collect();
    let inside = |v: usize| independent.contains(&v);
    for &u in &independent {
        if g.neighbors(u).any(inside) {
            return Err(structural(format!("vertex {u} of the independent part has a neighbour inside it")));
        }
    }
    let need = 2 * independent.len() as u64;
    let supply: u64 = (0..g.n())
        .filter(|&v| !inside(v))
        .map(|v| g.neighbors(v).filter(|&w| inside(w)).count().min(2) as u64)
        .sum();
    if (need, supply) != (lhs, rhs) {
        return Err(structural(format!(
            "certificate counts {lhs} > {rhs} but the graph gives {need} and {supply}"
        )));
    }
    if need <= supply {
        return Err(structural(format!("{need} needed edges fit into {supply} available")));
    }
    Ok(format!("cycle needs {need} edges at the independent part, at most {supply} exist"))
}

/// Each distinct block kind is searched exhaustively once, then the
/// path-free blocks are counted against `2l + 1`.
fn check_block_count(
    c: &Certificate,
    path_free: u64,
    required: u64,
    limits: &HamiltonLimits,
) -> Result<String, Rejection> {
    if required != 2 * c.l + 1 {
        return Err(structural(format!("required count {required} is not 2l + 1 = {}", 2 * c.l + 1)));
    }
    let mut verdicts: BTreeMap<BlockKind, bool> = BTreeMap::new();
    for &kind in &c.blocks {
        if verdicts.contains_key(&kind) {
            continue;
        }
        let b = block(kind);
        let r = has_hamilton_path(&b.graph, b.x, b.y, limits)
            .map_err(|e| Rejection::OracleUndecided(e.to_string()))?;
        let free = match r.verdict {
            Verdict::Refuted => true,
            Verdict::Found(_) => false,
            Verdict::Unknown => {
                return Err(Rejection::OracleUndecided(format!("terminal path in {kind}")))
            }
        };
        verdicts.insert(kind, free);
    }
    let counted = c.blocks.iter().filter(|k| verdicts[k]).count() as u64;
    if counted != path_free {
        return Err(structural(format!("certificate claims {path_free} path-free blocks, found {counted}")));
    }
    if counted < required {
        return Err(structural(format!("{counted} path-free blocks < 2l + 1 = {required}")));
    }
    let kinds: Vec<String> = verdicts
        .iter()
        .map(|(k, free)| format!("{k}:{}", if *free { "no-path" } else { "path" }))
        .collect();
    Ok(format!("{counted} path-free blocks >= {required} ({})", kinds.join(", ")))
}

fn hamilton_oracle(g: &Graph, limits: &HamiltonLimits) -> Result<String, Rejection> {
    let r = is_hamiltonian(g, limits);
    match r.verdict {
        Verdict::Refuted => Ok(format!("no Hamilton cycle ({:?})", r.method)),
        Verdict::Found(c) => Err(Rejection::OracleContradiction(format!("Hamilton cycle {c:?}"))),
        Verdict::Unknown => Err(Rejection::OracleUndecided("Hamiltonicity search hit its limits".into())),
    }
}

/// Checks `g` against `c`. Any failed check rejects the pair.
pub fn check_certificate(g: &Graph, c: &Certificate, limits: &VerifyLimits) -> VerificationReport {
    let mut rec = Recorder {
        details: Vec::new(),
        rejections: Vec::new(),
    };
    let n = g.n();
    let p = c.plan();

    let plan_ok = rec
        .run("plan", || {
            synth::check_plan(&p).map_err(|e| Rejection::PlanInvalid(e.to_string()))?;
            let canonical = synth::plan(c.t).map_err(|e| Rejection::PlanInvalid(e.to_string()))?;
            if canonical != p {
                return Err(Rejection::PlanInvalid("parameters differ from the canonical plan for t".into()));
            }
            Ok(((), format!("case {} q={} l={} m={}", p.case, p.q, p.l, p.m)))
        })
        .is_some();

    if plan_ok {
        rec.run("rebuild", || {
            if p.graph() == *g {
                Ok(((), format!("{n} vertices, {} edges", g.edge_count())))
            } else {
                Err(Rejection::RebuildMismatch)
            }
        });
    }

    rec.run("witness", || {
        if let Some(&bad) = c.cutset.iter().find(|&&v| v >= n) {
            return Err(Rejection::WitnessInvalid(format!("vertex {bad} out of range")));
        }
        let w = CutsetWitness::evaluate(g, &c.cutset)
            .ok_or_else(|| Rejection::WitnessInvalid("cutset leaves fewer than two components".into()))?;
        if w.component_count != c.components {
            return Err(Rejection::WitnessInvalid(format!(
                "certificate says {} components, graph has {}",
                c.components, w.component_count
            )));
        }
        if w.ratio != c.predicted_tau || c.predicted_tau != c.t {
            return Err(Rejection::WitnessRatioMismatch(format!(
                "|S|/ω = {}, predicted {}, target {}",
                w.ratio, c.predicted_tau, c.t
            )));
        }
        let formula = predicted_toughness(&p);
        if formula != c.predicted_tau {
            return Err(Rejection::WitnessRatioMismatch(format!(
                "formula gives {formula}, certificate {}",
                c.predicted_tau
            )));
        }
        Ok(((), format!("{}/{} = {}", w.cutset.len(), w.component_count, w.ratio)))
    });

    let mut nonham = NonHamStatus::Failed;
    let tag_ok = rec
        .run("nonhamiltonicity tag", || {
            let (want, got) = (expected_tag(c.case), tag_of(&c.nonhamiltonicity));
            if want == got {
                Ok(((), got.to_string()))
            } else {
                Err(structural(format!("case {} needs {want}, certificate has {got}", c.case)))
            }
        })
        .is_some();
    if tag_ok {
        let structural_ok = match c.nonhamiltonicity {
            NonHamiltonicity::BipartiteImbalance { small, large } => rec
                .run("bipartite imbalance", || {
                    if (small, large) != (c.a_scaled, c.b_scaled) {
                        return Err(structural("part sizes differ from a and b".into()));
                    }
                    check_bipartite(g, small, large).map(|d| ((), d))
                })
                .is_some(),
            NonHamiltonicity::EdgeCount { lhs, rhs } => rec
                .run("edge count", || check_edge_count(g, c, lhs, rhs).map(|d| ((), d)))
                .is_some(),
            NonHamiltonicity::BlockCount { path_free, required } => rec
                .run("block count", || {
                    check_block_count(c, path_free, required, &limits.hamilton).map(|d| ((), d))
                })
                .is_some(),
            NonHamiltonicity::Exhaustive => false,
        };
        let exhaustive = c.nonhamiltonicity == NonHamiltonicity::Exhaustive;
        if exhaustive || (structural_ok && n <= limits.hamilton_cross_check_n) {
            let ok = rec
                .run("hamiltonicity oracle", || hamilton_oracle(g, &limits.hamilton).map(|d| ((), d)))
                .is_some();
            nonham = if ok {
                NonHamStatus::OracleExhaustive
            } else {
                NonHamStatus::Failed
            };
        } else if structural_ok {
            nonham = NonHamStatus::Structural;
        }
    }

    let mut alpha = None;
    if matches!(c.nonhamiltonicity, NonHamiltonicity::BipartiteImbalance { .. }) && n <= limits.alpha_max_n {
        alpha = rec.run("independence number", || {
            let a = independence_number(g, limits.alpha_max_n)
                .map_err(|e| Rejection::OracleUndecided(e.to_string()))?;
            if 2 * a <= n {
                return Err(Rejection::OracleContradiction(format!("α = {a} is not above n/2")));
            }
            Ok((a, format!("α = {a} > {n}/2")))
        });
    }

    let mut oracle_tau = None;
    let mut tough = ToughnessStatus::WitnessUpperBoundOnly;
    if n <= limits.toughness_max_n {
        tough = ToughnessStatus::Failed;
        let res = rec.run("toughness oracle", || {
            let r = toughness_exact(g, limits.toughness_max_n)
                .map_err(|e| Rejection::OracleUndecided(e.to_string()))?;
            if r.value != Toughness::Finite(c.predicted_tau) {
                return Err(Rejection::OracleContradiction(format!(
                    "exact toughness {} but certificate predicts {}",
                    r.value, c.predicted_tau
                )));
            }
            Ok((r.value, format!("τ = {}", r.value)))
        });
        if let Some(v) = res {
            oracle_tau = Some(v);
            tough = ToughnessStatus::OracleExact;
        }
    }

    let accepted = rec.rejections.is_empty()
        && nonham != NonHamStatus::Failed
        && tough != ToughnessStatus::Failed;
    VerificationReport {
        accepted,
        n,
        toughness_status: tough,
        nonhamiltonicity_status: nonham,
        alpha,
        oracle_tau,
        details: rec.details,
        rejections: rec.rejections,
    }
}

/// The join constructions whose toughness has a closed form, with their
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimGraph {
    /// `K_l` joined to `m` L2 blocks.
    L2Join { l: u64, m: u64 },
    /// `m - 1` L2 blocks and one L3.
    L2JoinWithL3 { l: u64, m: u64 },
    /// `m1` L1 blocks then `m2` L2 blocks.
    Mixed { l: u64, m1: u64, m2: u64 },
    /// `m1` L1 blocks, `m2 - 1` L2 blocks and one L3.
    MixedWithL3 { l: u64, m1: u64, m2: u64 },
    /// `m - 1` L1 blocks and one L4.
    L1JoinWithL4 { l: u64, m: u64 },
    /// `m` L1 blocks.
    L1Join { l: u64, m: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClaimError {
    #[error("parameters outside the formula's hypotheses: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimCheck {
    pub n: usize,
    pub formula: Rational,
    pub oracle: Toughness,
    pub witness: Option<CutsetWitness>,
}

impl ClaimCheck {
    pub fn passed(&self) -> bool {
        self.oracle == Toughness::Finite(self.formula)
    }
}

impl ClaimGraph {
    pub fn clique(&self) -> u64 {
        match *self {
            ClaimGraph::L2Join { l, .. }
            | ClaimGraph::L2JoinWithL3 { l, .. }
            | ClaimGraph::Mixed { l, .. }
            | ClaimGraph::MixedWithL3 { l, .. }
            | ClaimGraph::L1JoinWithL4 { l, .. }
            | ClaimGraph::L1Join { l, .. } => l,
        }
    }

    pub fn blocks(&self) -> Vec<BlockKind> {
        use BlockKind::*;
        let rep = |k, c: u64| std::iter::repeat_n(k, c as usize);
        match *self {
            ClaimGraph::L2Join { m, .. } => rep(L2, m).collect(),
            ClaimGraph::L2JoinWithL3 { m, .. } => rep(L2, m - 1).chain([L3]).collect(),
            ClaimGraph::Mixed { m1, m2, .. } => rep(L1, m1).chain(rep(L2, m2)).collect(),
            ClaimGraph::MixedWithL3 { m1, m2, .. } => {
                rep(L1, m1).chain(rep(L2, m2 - 1)).chain([L3]).collect()
            }
            ClaimGraph::L1JoinWithL4 { m, .. } => rep(L1, m - 1).chain([L4]).collect(),
            ClaimGraph::L1Join { m, .. } => rep(L1, m).collect(),
        }
    }

    pub fn formula(&self) -> Rational {
        match *self {
            ClaimGraph::L2Join { l, m } => formulas::l2_join(l, m),
            ClaimGraph::L2JoinWithL3 { l, m } => formulas::l2_join_with_l3(l, m),
            ClaimGraph::Mixed { l, m2, .. } => formulas::mixed_join(l, m2),
            ClaimGraph::MixedWithL3 { l, m2, .. } => formulas::mixed_join_with_l3(l, m2),
            ClaimGraph::L1JoinWithL4 { l, m } => formulas::l1_join_with_l4(l, m),
            ClaimGraph::L1Join { l, m } => formulas::l1_join(l, m),
        }
    }

    fn check_hypotheses(&self) -> Result<(), ClaimError> {
        let bad = |s: &str| Err(ClaimError::Hypothesis(s.into()));
        let l = self.clique();
        if l < 2 {
            return bad("l >= 2");
        }
        match *self {
            ClaimGraph::L2Join { m, .. }
            | ClaimGraph::L2JoinWithL3 { m, .. }
            | ClaimGraph::L1JoinWithL4 { m, .. }
            | ClaimGraph::L1Join { m, .. }
                if m < 1 =>
            {
                bad("m >= 1")
            }
            ClaimGraph::Mixed { m1, m2, .. } if m1 + m2 < 1 || m2 + 2 < l => bad("m >= 1 and m2 >= l - 2"),
            ClaimGraph::MixedWithL3 { m2, .. } if m2 < 1 || m2 + 2 < l => bad("m2 >= 1 and m2 >= l - 2"),
            _ => Ok(()),
        }
    }

    pub fn graph(&self) -> Graph {
        g_construct(self.clique() as usize, &self.blocks()).expect("l >= 2")
    }
}

/// Builds the construction and compares its exact toughness with the
/// closed form.
pub fn verify_claim_formula(claim: ClaimGraph, max_n: usize) -> Result<ClaimCheck, ClaimError> {
    claim.check_hypotheses()?;
    let g = claim.graph();
    let r = toughness_exact(&g, max_n)?;
    Ok(ClaimCheck {
        n: g.n(),
        formula: claim.formula(),
        oracle: r.value,
        witness: r.witness,
    })
}
