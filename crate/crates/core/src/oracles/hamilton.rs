//! Hamilton cycles and Hamilton paths with prescribed ends.
//!
//! Two independent deciders: a pruned depth-first search and a subset
//! dynamic program. [`is_hamiltonian`] and [`has_hamilton_path`] pick
//! between them; the raw deciders are public so they can be cross-checked.

use serde::{Deserialize, Serialize};

use super::{full_mask, reach, OracleError, MASK_LIMIT};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Vertex sequence of the cycle (closing edge implied) or the path.
    Found(Vec<usize>),
    Refuted,
    /// The search hit its limits before deciding.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Trivial,
    Backtracking,
    SubsetDp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonResult {
    pub verdict: Verdict,
    pub method: Method,
}

impl HamiltonResult {
    fn new(verdict: Verdict, method: Method) -> Self {
        HamiltonResult { verdict, method }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HamiltonLimits {
    pub max_n: usize,
    /// Largest order handed to the subset DP (memory is `4 * 2^(n-1)` bytes).
    pub dp_max_n: usize,
    /// Search nodes before backtracking gives up.
    pub node_budget: u64,
}

impl Default for HamiltonLimits {
    fn default() -> Self {
        HamiltonLimits {
            max_n: MASK_LIMIT,
            dp_max_n: 24,
            node_budget: 20_000_000,
        }
    }
}

struct Search<'a> {
    adj: &'a [u64],
    all: u64,
    target: usize,
    nodes: u64,
    budget: u64,
    path: Vec<usize>,
}

fn bit(v: usize) -> u64 {
    1u64 << v
}

fn iter_bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

impl Search<'_> {
    /// Extends the path ending at `v`; the rest must run through every
    /// unvisited vertex and finish at `target`. `None` means out of budget.
    fn extend(&mut self, v: usize, visited: u64) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let adj = self.adj;
        let t = self.target;
        let open = self.all & !visited & !bit(t);
        if open == 0 {
            return Some(v != t && adj[v] & bit(t) != 0);
        }
        let at_root = v == t;
        let ends = bit(v) | bit(t);
        let live = open | ends;

        // Every open vertex needs two neighbours in the remaining segment.
        let mut forced = None;
        let mut forced_v = 0;
        let mut forced_t = 0;
        for u in iter_bits(open) {
            let avail = adj[u] & live;
            let d = avail.count_ones();
            if d < 2 {
                return Some(false);
            }
            if d == 2 && !at_root {
                if avail & bit(v) != 0 {
                    forced_v += 1;
                    forced = Some(u);
                }
                if avail & bit(t) != 0 {
                    forced_t += 1;
                }
            }
        }
        if forced_v > 1 || forced_t > 1 {
            return Some(false);
        }
        if !at_root && adj[t] & (open | bit(v)) == 0 {
            return Some(false);
        }
        if reach(adj, open & open.wrapping_neg(), open) != open {
            return Some(false);
        }
        if !at_root && !self.cut_vertices_ok(v, live, open) {
            return Some(false);
        }

        let choices = match forced {
            Some(u) if adj[v] & bit(u) != 0 => bit(u),
            Some(_) => 0,
            None => adj[v] & open,
        };
        let mut order: Vec<usize> = iter_bits(choices).collect();
        order.sort_by_key(|&u| ((adj[u] & live).count_ones(), u));
        for u in order {
            self.path.push(u);
            match self.extend(u, visited | bit(u)) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {
                    self.path.pop();
                }
            }
        }
        Some(false)
    }

    /// The remaining segment is a spanning `v`-`t` path of `live`, so no
    /// open vertex may split `live` into three pieces, or into two with `v`
    /// and `t` on the same side.
    fn cut_vertices_ok(&self, v: usize, live: u64, open: u64) -> bool {
        for u in iter_bits(open) {
            let rest = live & !bit(u);
            let from_v = reach(self.adj, bit(v), rest);
            if from_v == rest {
                continue;
            }
            if from_v & bit(self.target) != 0 {
                return false;
            }
            let from_t = reach(self.adj, bit(self.target), rest);
            if from_v | from_t != rest {
                return false;
            }
        }
        true
    }
}

fn masks_or_limit(g: &Graph) -> Result<Vec<u64>, OracleError> {
    g.masks().ok_or(OracleError::SizeLimit {
        n: g.n(),
        max: MASK_LIMIT,
    })
}

fn run_search(adj: &[u64], n: usize, start: usize, target: usize, budget: u64) -> Verdict {
    let mut s = Search {
        adj,
        all: full_mask(n),
        target,
        nodes: 0,
        budget,
        path: vec![start],
    };
    match s.extend(start, bit(start)) {
        Some(true) => {
            if start != target {
                s.path.push(target);
            }
            Verdict::Found(s.path)
        }
        Some(false) => Verdict::Refuted,
        None => Verdict::Unknown,
    }
}

/// Backtracking Hamilton-cycle search from vertex 0.
pub fn hamiltonian_backtrack(g: &Graph, node_budget: u64) -> Result<Verdict, OracleError> {
    let adj = masks_or_limit(g)?;
    if g.n() < 3 {
        return Ok(Verdict::Refuted);
    }
    Ok(run_search(&adj, g.n(), 0, 0, node_budget))
}

/// Backtracking Hamilton-path search from `x` to `y`.
pub fn hamilton_path_backtrack(
    g: &Graph,
    x: usize,
    y: usize,
    node_budget: u64,
) -> Result<Verdict, OracleError> {
    check_ends(g, x, y)?;
    let adj = masks_or_limit(g)?;
    Ok(run_search(&adj, g.n(), x, y, node_budget))
}

fn check_ends(g: &Graph, x: usize, y: usize) -> Result<(), OracleError> {
    for v in [x, y] {
        if v >= g.n() {
            return Err(OracleError::BadVertex(v));
        }
    }
    if x == y {
        return Err(OracleError::BadVertex(y));
    }
    Ok(())
}

/// Paths starting at `root`: `table[mask]` holds the possible last vertices
/// of a path visiting `root` plus exactly the vertices in `mask`, where
/// `mask` is over the other `n - 1` vertices (compressed past `root`).
fn dp_table(adj: &[u64], n: usize, root: usize) -> Vec<u32> {
    let pos = |v: usize| if v < root { v } else { v - 1 };
    let size = 1usize << (n - 1);
    let mut table = vec![0u32; size];
    for w in iter_bits(adj[root]) {
        table[1 << pos(w)] |= 1 << w;
    }
    for mask in 1..size {
        let ends = table[mask];
        if ends == 0 {
            continue;
        }
        for e in iter_bits(ends as u64) {
            for w in iter_bits(adj[e] & !bit(root)) {
                let pw = 1usize << pos(w);
                if mask & pw == 0 {
                    table[mask | pw] |= 1 << w;
                }
            }
        }
    }
    table
}

/// Walks the table back from `(mask, end)` to recover the path.
fn dp_path(adj: &[u64], table: &[u32], root: usize, mut mask: usize, mut end: usize) -> Vec<usize> {
    let pos = |v: usize| if v < root { v } else { v - 1 };
    let mut rev = vec![end];
    loop {
        let prev_mask = mask & !(1 << pos(end));
        if prev_mask == 0 {
            break;
        }
        let prev = iter_bits(table[prev_mask] as u64)
            .find(|&p| adj[p] & bit(end) != 0)
            .expect("table entries have predecessors");
        rev.push(prev);
        mask = prev_mask;
        end = prev;
    }
    rev.push(root);
    rev.reverse();
    rev
}

fn dp_guard(g: &Graph, dp_max_n: usize) -> Result<Vec<u64>, OracleError> {
    let max = dp_max_n.min(32);
    if g.n() > max {
        return Err(OracleError::SizeLimit { n: g.n(), max });
    }
    masks_or_limit(g)
}

/// Hamilton-cycle decision by subset DP over paths from vertex 0.
pub fn hamiltonian_dp(g: &Graph, dp_max_n: usize) -> Result<Verdict, OracleError> {
    let adj = dp_guard(g, dp_max_n)?;
    let n = g.n();
    if n < 3 {
        return Ok(Verdict::Refuted);
    }
    let table = dp_table(&adj, n, 0);
    let full = (1usize << (n - 1)) - 1;
    let closing = iter_bits(table[full] as u64).find(|&e| adj[e] & 1 != 0);
    Ok(match closing {
        Some(e) => Verdict::Found(dp_path(&adj, &table, 0, full, e)),
        None => Verdict::Refuted,
    })
}

/// Hamilton `x`-`y` path decision by subset DP.
pub fn hamilton_path_dp(g: &Graph, x: usize, y: usize, dp_max_n: usize) -> Result<Verdict, OracleError> {
    check_ends(g, x, y)?;
    let adj = dp_guard(g, dp_max_n)?;
    let n = g.n();
    let table = dp_table(&adj, n, x);
    let full = (1usize << (n - 1)) - 1;
    Ok(if table[full] & (1 << y) != 0 {
        Verdict::Found(dp_path(&adj, &table, x, full, y))
    } else {
        Verdict::Refuted
    })
}

fn dense(g: &Graph) -> bool {
    let n = g.n();
    4 * g.edge_count() >= n * n.saturating_sub(1)
}

/// Hamilton-cycle decision. Sparse graphs go to backtracking; dense graphs
/// (half the possible edges or more) and backtracking runs that exhaust the
/// node budget go to the subset DP when `n <= dp_max_n`.
pub fn is_hamiltonian(g: &Graph, limits: &HamiltonLimits) -> HamiltonResult {
    let n = g.n();
    if n < 3 || g.degrees().iter().any(|&d| d < 2) || !g.is_connected() {
        return HamiltonResult::new(Verdict::Refuted, Method::Trivial);
    }
    if n > limits.max_n.min(MASK_LIMIT) {
        return HamiltonResult::new(Verdict::Unknown, Method::Trivial);
    }
    let dp_ok = n <= limits.dp_max_n.min(32);
    if dp_ok && dense(g) {
        let v = hamiltonian_dp(g, limits.dp_max_n).expect("within limits");
        return HamiltonResult::new(v, Method::SubsetDp);
    }
    match hamiltonian_backtrack(g, limits.node_budget).expect("within limits") {
        Verdict::Unknown if dp_ok => {
            let v = hamiltonian_dp(g, limits.dp_max_n).expect("within limits");
            HamiltonResult::new(v, Method::SubsetDp)
        }
        v => HamiltonResult::new(v, Method::Backtracking),
    }
}

/// Hamilton `x`-`y` path decision with the same strategy as
/// [`is_hamiltonian`].
pub fn has_hamilton_path(
    g: &Graph,
    x: usize,
    y: usize,
    limits: &HamiltonLimits,
) -> Result<HamiltonResult, OracleError> {
    check_ends(g, x, y)?;
    let n = g.n();
    if !g.is_connected() {
        return Ok(HamiltonResult::new(Verdict::Refuted, Method::Trivial));
    }
    if n == 2 {
        let v = if g.has_edge(x, y) {
            Verdict::Found(vec![x, y])
        } else {
            Verdict::Refuted
        };
        return Ok(HamiltonResult::new(v, Method::Trivial));
    }
    if n > limits.max_n.min(MASK_LIMIT) {
        return Ok(HamiltonResult::new(Verdict::Unknown, Method::Trivial));
    }
    let dp_ok = n <= limits.dp_max_n.min(32);
    if dp_ok && dense(g) {
        return Ok(HamiltonResult::new(hamilton_path_dp(g, x, y, limits.dp_max_n)?, Method::SubsetDp));
    }
    Ok(match hamilton_path_backtrack(g, x, y, limits.node_budget)? {
        Verdict::Unknown if dp_ok => {
            HamiltonResult::new(hamilton_path_dp(g, x, y, limits.dp_max_n)?, Method::SubsetDp)
        }
        v => HamiltonResult::new(v, Method::Backtracking),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{block, complete_bipartite, petersen, BlockKind};

    fn is_cycle(g: &Graph, seq: &[usize]) -> bool {
        let mut seen = vec![false; g.n()];
        seq.len() == g.n()
            && seq.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
            && (0..seq.len()).all(|i| g.has_edge(seq[i], seq[(i + 1) % seq.len()]))
    }

    #[test]
    fn cycle_found_on_c5() {
        let g = Graph::cycle(5);
        let r = is_hamiltonian(&g, &HamiltonLimits::default());
        match r.verdict {
            Verdict::Found(c) => assert!(is_cycle(&g, &c)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn petersen_and_bipartite_refuted() {
        let lim = HamiltonLimits::default();
        assert_eq!(is_hamiltonian(&petersen(), &lim).verdict, Verdict::Refuted);
        assert_eq!(hamiltonian_dp(&petersen(), 24).unwrap(), Verdict::Refuted);
        assert_eq!(is_hamiltonian(&complete_bipartite(2, 3), &lim).verdict, Verdict::Refuted);
        assert_eq!(is_hamiltonian(&Graph::complete(2), &lim).verdict, Verdict::Refuted);
    }

    #[test]
    fn dp_finds_witness() {
        let g = Graph::complete(6);
        match hamiltonian_dp(&g, 24).unwrap() {
            Verdict::Found(c) => assert!(is_cycle(&g, &c)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn block_paths() {
        let lim = HamiltonLimits::default();
        for kind in [BlockKind::L1, BlockKind::L2, BlockKind::L3] {
            let b = block(kind);
            let r = has_hamilton_path(&b.graph, b.x, b.y, &lim).unwrap();
            assert_eq!(r.verdict, Verdict::Refuted, "{kind}");
            assert_eq!(hamilton_path_dp(&b.graph, b.x, b.y, 24).unwrap(), Verdict::Refuted);
        }
        let b = block(BlockKind::L4);
        let r = has_hamilton_path(&b.graph, b.x, b.y, &lim).unwrap();
        assert_eq!(r.verdict, Verdict::Found(vec![3, 0, 1, 2, 4]));
    }

    #[test]
    fn c4_adjacent_ends() {
        let g = Graph::cycle(4);
        let r = has_hamilton_path(&g, 0, 1, &HamiltonLimits::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Found(vec![0, 3, 2, 1]));
        assert_eq!(hamilton_path_dp(&g, 0, 1, 24).unwrap(), Verdict::Found(vec![0, 3, 2, 1]));
        assert!(has_hamilton_path(&g, 1, 1, &HamiltonLimits::default()).is_err());
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        assert_eq!(hamiltonian_backtrack(&petersen(), 3).unwrap(), Verdict::Unknown);
        let lim = HamiltonLimits {
            max_n: 64,
            dp_max_n: 0,
            node_budget: 3,
        };
        assert_eq!(is_hamiltonian(&petersen(), &lim).verdict, Verdict::Unknown);
    }
}
