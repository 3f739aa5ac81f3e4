//! Chooses a construction for a target toughness `t = a/b`, builds it and
//! records a certificate that can be re-checked independently.
//!
//! | range            | construction                                   |
//! |------------------|------------------------------------------------|
//! | `t < 1`          | `K_{a,b}`                                      |
//! | `t = 1`          | fixed 7-vertex graph                           |
//! | `1 < t < 3/2`    | universal / independent / clique three-part graph |
//! | `t = 3/2`        | Petersen graph with every vertex inflated to a triangle |
//! | `3/2 < t < 7/4`  | `K_l` joined to L2 blocks (last one L3 for even `b`) |
//! | `7/4 <= t <= 2`  | `K_l` joined to L1 blocks then L2 blocks (last one L3 for even `b`) |
//! | `2 < t < 9/4`    | `K_l` joined to L1 blocks (last one L4 for even `b`) |
//!
//! Where a construction needs side inequalities in `a` and `b` the fraction
//! is rescaled to `aq/bq` with the smallest admissible `q`, odd when the
//! construction depends on `b` staying odd.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{
    block_offsets, case2_graph, case3_h, complete_bipartite, g_construct, inflate_triangles,
    inflated_port, petersen, BlockKind, Case3Layout,
};
use crate::graph::Graph;
use crate::oracles::CutsetWitness;
use crate::rational::Rational;

const Q_SEARCH_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("t must satisfy 0 < t < 9/4, got {0}")]
    OutOfRange(Rational),
    #[error("internal consistency check failed for t = {t}: {what}")]
    Assertion { t: Rational, what: String },
    #[error("unknown case {0:?}")]
    UnknownCase(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    #[serde(rename = "1")]
    Bipartite,
    #[serde(rename = "2")]
    UnitToughness,
    #[serde(rename = "3")]
    ThreePart,
    #[serde(rename = "4")]
    InflatedPetersen,
    #[serde(rename = "5.1")]
    L2Odd,
    #[serde(rename = "5.2")]
    L2Even,
    #[serde(rename = "6.1")]
    MixedOdd,
    #[serde(rename = "6.2")]
    MixedEven,
    #[serde(rename = "7.1")]
    L1Odd,
    #[serde(rename = "7.2")]
    L1Even,
}

impl CaseId {
    pub const ALL: [CaseId; 10] = [
        CaseId::Bipartite,
        CaseId::UnitToughness,
        CaseId::ThreePart,
        CaseId::InflatedPetersen,
        CaseId::L2Odd,
        CaseId::L2Even,
        CaseId::MixedOdd,
        CaseId::MixedEven,
        CaseId::L1Odd,
        CaseId::L1Even,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CaseId::Bipartite => "1",
            CaseId::UnitToughness => "2",
            CaseId::ThreePart => "3",
            CaseId::InflatedPetersen => "4",
            CaseId::L2Odd => "5.1",
            CaseId::L2Even => "5.2",
            CaseId::MixedOdd => "6.1",
            CaseId::MixedEven => "6.2",
            CaseId::L1Odd => "7.1",
            CaseId::L1Even => "7.2",
        }
    }

    /// Cases built as a clique joined to blocks.
    pub fn is_join(self) -> bool {
        matches!(
            self,
            CaseId::L2Odd
                | CaseId::L2Even
                | CaseId::MixedOdd
                | CaseId::MixedEven
                | CaseId::L1Odd
                | CaseId::L1Even
        )
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CaseId {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| PlanError::UnknownCase(s.to_string()))
    }
}

/// Toughness formulas of the join constructions, as functions of the clique
/// size and block counts.
pub mod formulas {
    use crate::rational::Rational;

    /// `K_l` joined to `m` L2 blocks: `(l + 3m) / (1 + 2m)`.
    pub fn l2_join(l: u64, m: u64) -> Rational {
        Rational::of(l + 3 * m, 1 + 2 * m)
    }

    /// `m - 1` L2 blocks and one L3: `(l + 3m + 1) / (2(m + 1))`.
    pub fn l2_join_with_l3(l: u64, m: u64) -> Rational {
        Rational::of(l + 3 * m + 1, 2 * (m + 1))
    }

    /// L1 blocks followed by `m2` L2 blocks: `(l + 3 m2) / (2 m2 + 1)`.
    pub fn mixed_join(l: u64, m2: u64) -> Rational {
        Rational::of(l + 3 * m2, 2 * m2 + 1)
    }

    /// L1 blocks, `m2 - 1` L2 blocks and one L3: `(l + 3 m2 + 1) / (2(m2 + 1))`.
    pub fn mixed_join_with_l3(l: u64, m2: u64) -> Rational {
        Rational::of(l + 3 * m2 + 1, 2 * (m2 + 1))
    }

    /// `m` L1 blocks: `(l + 4m) / (2m + 1)`.
    pub fn l1_join(l: u64, m: u64) -> Rational {
        Rational::of(l + 4 * m, 2 * m + 1)
    }

    /// `m - 1` L1 blocks and one L4: `(l + 4m - 2) / (2m)`.
    pub fn l1_join_with_l4(l: u64, m: u64) -> Rational {
        Rational::of(l + 4 * m - 2, 2 * m)
    }

    /// Three-part graph on `a`, `b`: the minimum over `1 <= k <= b - 1` of
    /// `(k + a - b + 1) / (k + 1)`.
    pub fn three_part(a: u64, b: u64) -> Rational {
        (1..b)
            .map(|k| Rational::of(k + a - b + 1, k + 1))
            .min()
            .expect("b >= 2")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisPlan {
    pub target: Rational,
    pub case: CaseId,
    pub q: u64,
    pub a_scaled: u64,
    pub b_scaled: u64,
    /// Clique size; 0 outside the join cases.
    pub l: u64,
    /// Block count; 0 outside the join cases.
    pub m: u64,
    pub m1: Option<u64>,
    pub m2: Option<u64>,
    pub blocks: Vec<BlockKind>,
}

impl SynthesisPlan {
    /// Vertex count of the graph [`build`] produces.
    pub fn order(&self) -> usize {
        match self.case {
            CaseId::Bipartite => (self.a_scaled + self.b_scaled) as usize,
            CaseId::UnitToughness => 7,
            CaseId::ThreePart => (self.a_scaled + self.b_scaled + 1) as usize,
            CaseId::InflatedPetersen => 30,
            _ => self.l as usize + self.blocks.iter().map(|k| k.order()).sum::<usize>(),
        }
    }

    /// Blocks whose terminals are not joined by a Hamilton path.
    pub fn path_free_blocks(&self) -> usize {
        self.blocks
            .iter()
            .filter(|k| !k.has_terminal_hamilton_path())
            .count()
    }

    pub fn graph(&self) -> Graph {
        let (a, b) = (self.a_scaled, self.b_scaled);
        match self.case {
            CaseId::Bipartite => complete_bipartite(a as usize, b as usize),
            CaseId::UnitToughness => case2_graph(),
            CaseId::ThreePart => case3_h(a, b).expect("plan checked a > b >= 2"),
            CaseId::InflatedPetersen => inflate_triangles(&petersen()).expect("cubic"),
            _ => g_construct(self.l as usize, &self.blocks).expect("join plans have blocks"),
        }
    }
}

fn ratio_in_range(t: Rational) -> bool {
    t > Rational::integer(0) && t < Rational::of(9, 4)
}

/// Smallest `q` (restricted to odd values when `odd`) with `ok(a q, b q)`.
fn min_scale(
    t: Rational,
    odd: bool,
    ok: impl Fn(i128, i128) -> bool,
) -> Result<u64, PlanError> {
    let (a, b) = (t.numer() as i128, t.denom() as i128);
    let step = if odd { 2 } else { 1 };
    (1..=Q_SEARCH_LIMIT)
        .step_by(step)
        .find(|&q| ok(a * q as i128, b * q as i128))
        .ok_or_else(|| PlanError::Assertion {
            t,
            what: format!("no scale q <= {Q_SEARCH_LIMIT} satisfies the side conditions"),
        })
}

fn to_u64(t: Rational, v: i128, what: &str) -> Result<u64, PlanError> {
    u64::try_from(v).map_err(|_| PlanError::Assertion {
        t,
        what: format!("{what} = {v} is negative"),
    })
}

/// Picks the construction for `t` and all of its integer parameters. The
/// returned plan has passed every consistency check in [`check_plan`].
pub fn plan(t: Rational) -> Result<SynthesisPlan, PlanError> {
    if !ratio_in_range(t) {
        return Err(PlanError::OutOfRange(t));
    }
    let (a, b) = (t.numer(), t.denom());
    let one = Rational::integer(1);
    let three_halves = Rational::of(3, 2);
    let seven_quarters = Rational::of(7, 4);
    let two = Rational::integer(2);

    let simple = |case, q: u64| SynthesisPlan {
        target: t,
        case,
        q,
        a_scaled: a * q,
        b_scaled: b * q,
        l: 0,
        m: 0,
        m1: None,
        m2: None,
        blocks: Vec::new(),
    };

    let p = if t < one {
        simple(CaseId::Bipartite, 1)
    } else if t == one {
        simple(CaseId::UnitToughness, 1)
    } else if t < three_halves {
        // 2b > 2(a - b + 1) + b, i.e. t < 3/2 - 1/b
        let q = min_scale(t, false, |a, b| 2 * a < 3 * b - 2)?;
        simple(CaseId::ThreePart, q)
    } else if t == three_halves {
        simple(CaseId::InflatedPetersen, 1)
    } else if t < seven_quarters {
        if b % 2 == 1 {
            // l >= 2 and m >= 2l + 1
            let q = min_scale(t, true, |a, b| 2 * a > 3 * b && 4 * a <= 7 * b - 9)?;
            let (a_s, b_s) = ((a * q) as i128, (b * q) as i128);
            let l = to_u64(t, a_s - 3 * (b_s - 1) / 2, "l")?;
            let m = to_u64(t, (b_s - 1) / 2, "m")?;
            join_plan(t, CaseId::L2Odd, q, l, vec![BlockKind::L2; m as usize], None, None)
        } else {
            let q = min_scale(t, false, |a, b| 4 * a <= 7 * b - 12)?;
            let (a_s, b_s) = ((a * q) as i128, (b * q) as i128);
            let l = to_u64(t, a_s - 3 * b_s / 2 + 2, "l")?;
            let m = to_u64(t, b_s / 2 - 1, "m")?;
            let mut blocks = vec![BlockKind::L2; m.saturating_sub(1) as usize];
            blocks.push(BlockKind::L3);
            join_plan(t, CaseId::L2Even, q, l, blocks, None, None)
        }
    } else if t <= two {
        if b % 2 == 1 {
            let q = min_scale(t, true, |a, b| 2 * a > 3 * b)?;
            let (a_s, b_s) = ((a * q) as i128, (b * q) as i128);
            let l = to_u64(t, a_s - 3 * (b_s - 1) / 2, "l")?;
            let m2 = to_u64(t, (b_s - 1) / 2, "m2")?;
            let m1 = (2 * l + 1).saturating_sub(m2).max(1);
            let mut blocks = vec![BlockKind::L1; m1 as usize];
            blocks.extend(vec![BlockKind::L2; m2 as usize]);
            join_plan(t, CaseId::MixedOdd, q, l, blocks, Some(m1), Some(m2))
        } else {
            let q = min_scale(t, false, |a, b| a < 2 * b)?;
            let (a_s, b_s) = ((a * q) as i128, (b * q) as i128);
            let l = to_u64(t, a_s - 3 * b_s / 2 + 2, "l")?;
            let m2 = to_u64(t, b_s / 2 - 1, "m2")?;
            if m2 == 0 {
                return Err(PlanError::Assertion {
                    t,
                    what: "an L3 block needs m2 >= 1".into(),
                });
            }
            let m1 = (2 * l + 1).saturating_sub(m2).max(1);
            let mut blocks = vec![BlockKind::L1; m1 as usize];
            blocks.extend(vec![BlockKind::L2; (m2 - 1) as usize]);
            blocks.push(BlockKind::L3);
            join_plan(t, CaseId::MixedEven, q, l, blocks, Some(m1), Some(m2))
        }
    } else if b % 2 == 1 {
        let q = min_scale(t, true, |a, b| 4 * a <= 9 * b - 11)?;
        let (a_s, b_s) = ((a * q) as i128, (b * q) as i128);
        let l = to_u64(t, a_s - 2 * b_s + 2, "l")?;
        let m = to_u64(t, (b_s - 1) / 2, "m")?;
        join_plan(t, CaseId::L1Odd, q, l, vec![BlockKind::L1; m as usize], None, None)
    } else {
        let q = min_scale(t, false, |a, b| 4 * a <= 9 * b - 12)?;
        let (a_s, b_s) = ((a * q) as i128, (b * q) as i128);
        let l = to_u64(t, a_s - 2 * b_s + 2, "l")?;
        let m = to_u64(t, b_s / 2, "m")?;
        let mut blocks = vec![BlockKind::L1; m.saturating_sub(1) as usize];
        blocks.push(BlockKind::L4);
        join_plan(t, CaseId::L1Even, q, l, blocks, None, None)
    };
    check_plan(&p)?;
    Ok(p)
}

fn join_plan(
    t: Rational,
    case: CaseId,
    q: u64,
    l: u64,
    blocks: Vec<BlockKind>,
    m1: Option<u64>,
    m2: Option<u64>,
) -> SynthesisPlan {
    SynthesisPlan {
        target: t,
        case,
        q,
        a_scaled: t.numer() * q,
        b_scaled: t.denom() * q,
        l,
        m: blocks.len() as u64,
        m1,
        m2,
        blocks,
    }
}

/// Toughness the plan's construction is known to have.
pub fn predicted_toughness(p: &SynthesisPlan) -> Rational {
    let (l, m) = (p.l, p.m);
    let m2 = p.m2.unwrap_or(0);
    match p.case {
        CaseId::Bipartite => Rational::of(p.a_scaled, p.b_scaled),
        CaseId::UnitToughness => Rational::integer(1),
        CaseId::ThreePart => formulas::three_part(p.a_scaled, p.b_scaled),
        CaseId::InflatedPetersen => Rational::of(3, 2),
        CaseId::L2Odd => formulas::l2_join(l, m),
        CaseId::L2Even => formulas::l2_join_with_l3(l, m),
        CaseId::MixedOdd => formulas::mixed_join(l, m2),
        CaseId::MixedEven => formulas::mixed_join_with_l3(l, m2),
        CaseId::L1Odd => formulas::l1_join(l, m),
        CaseId::L1Even => formulas::l1_join_with_l4(l, m),
    }
}

fn expected_blocks(p: &SynthesisPlan) -> Vec<BlockKind> {
    use BlockKind::*;
    let m = p.m as usize;
    let (m1, m2) = (p.m1.unwrap_or(0) as usize, p.m2.unwrap_or(0) as usize);
    let mut v = Vec::new();
    match p.case {
        CaseId::L2Odd => v.resize(m, L2),
        CaseId::L2Even if m >= 1 => {
            v.resize(m - 1, L2);
            v.push(L3);
        }
        CaseId::MixedOdd => {
            v.resize(m1, L1);
            v.resize(m1 + m2, L2);
        }
        CaseId::MixedEven if m2 >= 1 => {
            v.resize(m1, L1);
            v.resize(m1 + m2 - 1, L2);
            v.push(L3);
        }
        CaseId::L1Odd => v.resize(m, L1),
        CaseId::L1Even if m >= 1 => {
            v.resize(m - 1, L1);
            v.push(L4);
        }
        _ => {}
    }
    v
}

/// Consistency checks every plan must pass before anything is built:
/// exact scaling, the shape of the block list, the hypotheses under which
/// the toughness formula holds, the nonhamiltonicity count and equality of
/// the predicted toughness with the target.
pub fn check_plan(p: &SynthesisPlan) -> Result<(), PlanError> {
    let t = p.target;
    let fail = |what: String| Err(PlanError::Assertion { t, what });
    if !ratio_in_range(t) {
        return Err(PlanError::OutOfRange(t));
    }
    if p.q == 0 || p.a_scaled != t.numer() * p.q || p.b_scaled != t.denom() * p.q {
        return fail(format!(
            "scaled fraction {}/{} is not {t} times q = {}",
            p.a_scaled, p.b_scaled, p.q
        ));
    }
    let (a, b) = (p.a_scaled, p.b_scaled);
    match p.case {
        CaseId::Bipartite if !(b > a && a >= 1) => return fail("needs 1 <= a < b".into()),
        CaseId::ThreePart => {
            if !(a > b && b >= 2) {
                return fail("needs a > b >= 2".into());
            }
            if 2 * b <= 2 * a - b + 2 {
                return fail(format!("edge count 2b = {} must exceed 2a - b + 2 = {}", 2 * b, 2 * a - b + 2));
            }
        }
        _ => {}
    }
    if p.case.is_join() {
        if p.blocks != expected_blocks(p) {
            return fail(format!("block list {:?} does not match case {}", p.blocks, p.case));
        }
        if p.m as usize != p.blocks.len() {
            return fail(format!("m = {} but {} blocks", p.m, p.blocks.len()));
        }
        if let (Some(m1), Some(m2)) = (p.m1, p.m2) {
            if m1 + m2 != p.m {
                return fail(format!("m1 + m2 = {} but m = {}", m1 + m2, p.m));
            }
            if m2 + 2 < p.l {
                return fail(format!("m2 = {m2} < l - 2 = {}", p.l - 2));
            }
        } else if p.m1.is_some() || p.m2.is_some() {
            return fail("m1 and m2 must be set together".into());
        }
        if matches!(p.case, CaseId::MixedOdd | CaseId::MixedEven) != p.m1.is_some() {
            return fail("m1, m2 belong to exactly the mixed cases".into());
        }
        if p.l < 2 || p.m < 1 {
            return fail(format!("needs l >= 2 and m >= 1, got l = {}, m = {}", p.l, p.m));
        }
        let free = p.path_free_blocks() as u64;
        if free < 2 * p.l + 1 {
            return fail(format!(
                "{free} path-free blocks, fewer than 2l + 1 = {}",
                2 * p.l + 1
            ));
        }
    } else if p.l != 0 || p.m != 0 || !p.blocks.is_empty() || p.m1.is_some() || p.m2.is_some() {
        return fail(format!("case {} takes no clique or blocks", p.case));
    }
    let fixed = match p.case {
        CaseId::UnitToughness => Some(Rational::integer(1)),
        CaseId::InflatedPetersen => Some(Rational::of(3, 2)),
        _ => None,
    };
    if fixed.is_some_and(|f| f != t) || (fixed.is_some() && p.q != 1) {
        return fail(format!("case {} only realizes one value", p.case));
    }
    let predicted = predicted_toughness(p);
    if predicted != t {
        return fail(format!("predicted toughness {predicted} differs from target"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NonHamiltonicity {
    /// Complete bipartite with parts `small < large`: a cycle alternates
    /// sides, so it cannot cover the larger part.
    BipartiteImbalance { small: u64, large: u64 },
    /// Refuted by exhaustive search.
    Exhaustive,
    /// A cycle must use `2|independent| = lhs` edges at the independent part
    /// but at most `rhs = 2|universal| + |clique|` are available.
    EdgeCount { lhs: u64, rhs: u64 },
    /// At least `required = 2l + 1` blocks admit no terminal-to-terminal
    /// Hamilton path, so a Hamilton cycle would have to cross one of them
    /// end to end.
    BlockCount { path_free: u64, required: u64 },
}

/// Serialized certificate. Field names are the interchange format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub t: Rational,
    pub case: CaseId,
    pub q: u64,
    pub a_scaled: u64,
    pub b_scaled: u64,
    pub l: u64,
    pub m: u64,
    pub m1: Option<u64>,
    pub m2: Option<u64>,
    pub blocks: Vec<BlockKind>,
    pub nonhamiltonicity: NonHamiltonicity,
    pub cutset: Vec<usize>,
    pub components: usize,
    pub predicted_tau: Rational,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn plan(&self) -> SynthesisPlan {
        SynthesisPlan {
            target: self.t,
            case: self.case,
            q: self.q,
            a_scaled: self.a_scaled,
            b_scaled: self.b_scaled,
            l: self.l,
            m: self.m,
            m1: self.m1,
            m2: self.m2,
            blocks: self.blocks.clone(),
        }
    }

    pub fn witness(&self) -> CutsetWitness {
        CutsetWitness {
            cutset: self.cutset.clone(),
            component_count: self.components,
            ratio: Rational::new(self.cutset.len() as u64, self.components as u64)
                .unwrap_or(Rational::integer(0)),
        }
    }

    pub fn to_json(&self) -> String {
        // Value maps are BTreeMaps, so keys come out sorted.
        let v = serde_json::to_value(self).expect("certificate serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Orientation of a graph with every in-degree at most 2, by backtracking
/// over the sorted edge list. Returned as `(tail, head)` pairs.
fn low_indegree_orientation(g: &Graph) -> Option<Vec<(usize, usize)>> {
    fn go(edges: &[(usize, usize)], i: usize, indeg: &mut [u8], out: &mut Vec<(usize, usize)>) -> bool {
        let Some(&(u, v)) = edges.get(i) else {
            return true;
        };
        for (tail, head) in [(u, v), (v, u)] {
            if indeg[head] < 2 {
                indeg[head] += 1;
                out.push((tail, head));
                if go(edges, i + 1, indeg, out) {
                    return true;
                }
                out.pop();
                indeg[head] -= 1;
            }
        }
        false
    }
    let edges = g.edges();
    let mut indeg = vec![0u8; g.n()];
    let mut out = Vec::with_capacity(edges.len());
    go(&edges, 0, &mut indeg, &mut out).then_some(out)
}

/// The cut that realizes the target ratio on the plan's graph.
pub fn witness_cutset(p: &SynthesisPlan) -> Vec<usize> {
    let (a, b) = (p.a_scaled as usize, p.b_scaled as usize);
    let mut cut: Vec<usize> = match p.case {
        CaseId::Bipartite => (0..a).collect(),
        // x1 and x4
        CaseId::UnitToughness => vec![0, 3],
        CaseId::ThreePart => {
            let lay = Case3Layout::new(p.a_scaled, p.b_scaled);
            (0..lay.universal).chain((1..b).map(|i| lay.z(i))).collect()
        }
        CaseId::InflatedPetersen => {
            // Drop the head end of every edge; each triangle keeps a vertex
            // because no head has in-degree 3.
            let pg = petersen();
            low_indegree_orientation(&pg)
                .expect("cubic graphs have such an orientation")
                .into_iter()
                .map(|(tail, head)| inflated_port(&pg, head, tail))
                .collect()
        }
        _ => {
            let l = p.l as usize;
            let offsets = block_offsets(l, &p.blocks);
            let mixed = matches!(p.case, CaseId::MixedOdd | CaseId::MixedEven);
            let any_non_l1 = p.blocks.iter().any(|&k| k != BlockKind::L1);
            let mut cut: Vec<usize> = (0..l).collect();
            for (&kind, &off) in p.blocks.iter().zip(&offsets) {
                // Mixed constructions leave their L1 blocks whole unless
                // there is nothing else to cut.
                if mixed && kind == BlockKind::L1 && any_non_l1 {
                    continue;
                }
                cut.extend(kind.cutset_vertices().iter().map(|&v| off + v));
            }
            cut
        }
    };
    cut.sort_unstable();
    cut
}

fn nonhamiltonicity(p: &SynthesisPlan) -> NonHamiltonicity {
    let (a, b) = (p.a_scaled, p.b_scaled);
    match p.case {
        CaseId::Bipartite => NonHamiltonicity::BipartiteImbalance { small: a, large: b },
        CaseId::UnitToughness | CaseId::InflatedPetersen => NonHamiltonicity::Exhaustive,
        CaseId::ThreePart => NonHamiltonicity::EdgeCount {
            lhs: 2 * b,
            rhs: 2 * (a - b + 1) + b,
        },
        _ => NonHamiltonicity::BlockCount {
            path_free: p.path_free_blocks() as u64,
            required: 2 * p.l + 1,
        },
    }
}

fn notes(p: &SynthesisPlan) -> Vec<String> {
    let mut notes = Vec::new();
    if p.q > 1 {
        notes.push(format!(
            "fraction rescaled by q = {} to {}/{} to meet the construction's side conditions",
            p.q, p.a_scaled, p.b_scaled
        ));
    }
    match p.case {
        CaseId::MixedOdd | CaseId::MixedEven => {
            notes.push("targets 7/4 <= t <= 2 use the L1/L2 mixed construction; t < 7/4 uses L2 blocks only".into());
            notes.push(format!(
                "m1 = max(1, 2l + 1 - m2) = {} L1 blocks pad the nonhamiltonicity count",
                p.m1.unwrap_or(0)
            ));
            if p.case == CaseId::MixedEven {
                notes.push("clique size for even denominators read as l = a - 3b/2 + 2".into());
            }
            if p.m2 == Some(0) {
                notes.push("no L2/L3 blocks: the cutset takes the degree-4 vertices of every L1 block".into());
            }
        }
        CaseId::L1Even => {
            notes.push("scaling condition for even denominators read as t <= 9/4 - 3/(bq)".into());
            notes.push("the L4 block has a terminal Hamilton path and is not counted as path-free".into());
        }
        CaseId::InflatedPetersen => {
            notes.push("toughness >= 3/2 is not checked by exhaustive search at this order".into());
        }
        _ => {}
    }
    notes
}

/// Builds the plan's graph and certificate. The cutset is measured on the
/// built graph and must realize the target exactly.
pub fn build(p: &SynthesisPlan) -> Result<(Graph, Certificate), PlanError> {
    check_plan(p)?;
    let g = p.graph();
    let cut = witness_cutset(p);
    let witness = CutsetWitness::evaluate(&g, &cut);
    let Some(w) = witness.filter(|w| w.ratio == p.target) else {
        return Err(PlanError::Assertion {
            t: p.target,
            what: "witness cutset does not realize the target ratio".into(),
        });
    };
    let cert = Certificate {
        t: p.target,
        case: p.case,
        q: p.q,
        a_scaled: p.a_scaled,
        b_scaled: p.b_scaled,
        l: p.l,
        m: p.m,
        m1: p.m1,
        m2: p.m2,
        blocks: p.blocks.clone(),
        nonhamiltonicity: nonhamiltonicity(p),
        cutset: w.cutset,
        components: w.component_count,
        predicted_tau: predicted_toughness(p),
        notes: notes(p),
    };
    Ok((g, cert))
}

/// `plan` followed by `build`.
pub fn synthesize(t: Rational) -> Result<(Graph, Certificate), PlanError> {
    build(&plan(t)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: u64, b: u64) -> Rational {
        Rational::of(a, b)
    }

    #[test]
    fn case_dispatch() {
        let cases = [
            (r(2, 3), CaseId::Bipartite),
            (r(1, 1), CaseId::UnitToughness),
            (r(6, 5), CaseId::ThreePart),
            (r(3, 2), CaseId::InflatedPetersen),
            (r(5, 3), CaseId::L2Odd),
            (r(13, 8), CaseId::L2Even),
            (r(7, 4), CaseId::MixedEven),
            (r(9, 5), CaseId::MixedOdd),
            (r(2, 1), CaseId::MixedOdd),
            (r(11, 5), CaseId::L1Odd),
            (r(17, 8), CaseId::L1Even),
        ];
        for (t, case) in cases {
            assert_eq!(plan(t).unwrap().case, case, "{t}");
        }
    }

    #[test]
    fn out_of_range() {
        for t in [r(9, 4), r(0, 1), r(5, 2)] {
            assert_eq!(plan(t), Err(PlanError::OutOfRange(t)));
        }
        assert_eq!(
            PlanError::OutOfRange(r(9, 4)).to_string(),
            "t must satisfy 0 < t < 9/4, got 9/4"
        );
    }

    #[test]
    fn five_thirds_plan() {
        let p = plan(r(5, 3)).unwrap();
        assert_eq!((p.q, p.a_scaled, p.b_scaled, p.l, p.m), (9, 45, 27, 6, 13));
        assert_eq!(p.m, 2 * p.l + 1);
        assert_eq!(p.order(), 97);
    }

    #[test]
    fn scaled_three_part() {
        let p = plan(r(4, 3)).unwrap();
        assert_eq!((p.q, p.a_scaled, p.b_scaled, p.order()), (3, 12, 9, 22));
        assert_eq!(plan(r(6, 5)).unwrap().q, 1);
    }

    #[test]
    fn eleven_fifths_plan() {
        let p = plan(r(11, 5)).unwrap();
        assert_eq!((p.case, p.q, p.l, p.m), (CaseId::L1Odd, 11, 13, 27));
        assert_eq!(p.order(), 229);
        assert_eq!(formulas::l1_join(13, 27), r(11, 5));
    }

    #[test]
    fn boundary_values() {
        let p = plan(r(2, 1)).unwrap();
        assert_eq!((p.l, p.m1, p.m2, p.order()), (2, Some(5), Some(0), 42));
        let p = plan(r(7, 4)).unwrap();
        assert_eq!((p.l, p.m1, p.m2), (3, Some(6), Some(1)));
        assert_eq!(*p.blocks.last().unwrap(), BlockKind::L3);
    }

    #[test]
    fn formula_examples() {
        assert_eq!(formulas::l2_join(2, 1), r(5, 3));
        assert_eq!(formulas::l1_join_with_l4(2, 1), r(2, 1));
        assert_eq!(formulas::l2_join_with_l3(2, 1), r(3, 2));
        assert_eq!(formulas::three_part(6, 5), r(6, 5));
    }

    #[test]
    fn check_plan_rejects_tampering() {
        let good = plan(r(5, 3)).unwrap();
        let mut p = good.clone();
        p.l += 1;
        assert!(check_plan(&p).is_err());
        let mut p = good.clone();
        p.blocks.pop();
        assert!(check_plan(&p).is_err());
        let mut p = good.clone();
        p.q = 3;
        assert!(check_plan(&p).is_err());
        let mut p = good;
        p.blocks[0] = BlockKind::L4;
        assert!(check_plan(&p).is_err());
    }

    #[test]
    fn witnesses_realize_targets() {
        for t in [r(2, 3), r(1, 1), r(6, 5), r(4, 3), r(3, 2), r(5, 3), r(13, 8), r(7, 4), r(2, 1), r(11, 5), r(17, 8)] {
            let (g, c) = synthesize(t).unwrap();
            assert_eq!(g.n(), c.plan().order());
            assert!(c.witness().is_valid_for(&g), "{t}");
            assert_eq!(c.witness().ratio, t);
        }
    }

    #[test]
    fn petersen_witness_shape() {
        let (_, c) = synthesize(r(3, 2)).unwrap();
        assert_eq!((c.cutset.len(), c.components), (15, 10));
    }

    #[test]
    fn certificate_json_keys() {
        let (_, c) = synthesize(r(7, 4)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(
            keys,
            [
                "a_scaled", "b_scaled", "blocks", "case", "components", "cutset", "l", "m", "m1",
                "m2", "nonhamiltonicity", "notes", "predicted_tau", "q", "t"
            ]
        );
        assert_eq!(v["t"], "7/4");
        assert_eq!(v["case"], "6.2");
        assert_eq!(v["nonhamiltonicity"]["kind"], "BLOCK_COUNT");
        assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c);
        let (_, c1) = synthesize(r(2, 3)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&c1.to_json()).unwrap();
        assert_eq!(v["m1"], serde_json::Value::Null);
        assert_eq!(v["nonhamiltonicity"]["kind"], "BIPARTITE_IMBALANCE");
    }
}
