//! Immutable simple undirected graphs stored as bitset adjacency rows.
//!
//! Vertices are always `0..n`. Every constructor in this crate documents the
//! numbering it produces so that outputs are byte-reproducible.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("vertex {0} outside 0..{1}")]
    VertexOutOfRange(usize, usize),
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("edge list: {0}")]
    EdgeList(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD).max(1)
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate pairs collapse to one edge.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        if n >= 3 {
            for i in 0..n {
                g.set_edge(i, (i + 1) % n);
            }
        }
        g
    }

    // Crate-internal mutation used only while a constructor assembles a graph.
    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u * self.words + v / WORD] |= 1 << (v % WORD);
        self.rows[v * self.words + u / WORD] |= 1 << (u % WORD);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u * self.words + v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(v))
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n;
        n < 2 || self.edge_count() == n * (n - 1) / 2
    }

    /// Adjacency as one `u64` mask per vertex; `None` when `n > 64`.
    pub fn masks(&self) -> Option<Vec<u64>> {
        (self.n <= WORD).then(|| (0..self.n).map(|v| self.rows[v * self.words]).collect())
    }

    pub fn is_connected(&self) -> bool {
        components(self, &VertexSet::empty(self.n)).count() <= 1
    }
}

fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * WORD + b)
        })
    })
}

/// A subset of the vertices of a graph with `universe` vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            universe,
            words: vec![0; words_for(universe)],
        }
    }

    pub fn from_vertices<I>(universe: usize, vertices: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = Self::empty(universe);
        for v in vertices {
            if v >= universe {
                return Err(GraphError::VertexOutOfRange(v, universe));
            }
            s.words[v / WORD] |= 1 << (v % WORD);
        }
        Ok(s)
    }

    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe >= 64 || mask >> universe == 0);
        let mut s = Self::empty(universe);
        s.words[0] = mask;
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        bits(&self.words)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Connected components of `g` minus a removed vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    parts: Vec<Vec<usize>>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.parts.len()
    }

    /// Each part is sorted; parts are ordered by their smallest vertex.
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }
}

/// ω(g − removed), with membership. Vertices of `removed` outside `g` are
/// ignored.
pub fn components(g: &Graph, removed: &VertexSet) -> Components {
    let n = g.n();
    let mut seen: Vec<bool> = (0..n).map(|v| removed.contains(v)).collect();
    let mut parts = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut part = Vec::new();
        while let Some(u) = queue.pop_front() {
            part.push(u);
            for w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    Components { parts }
}

/// Disjoint union; graph `i` occupies the contiguous range starting at the
/// total order of graphs `0..i`.
pub fn disjoint_union(gs: &[Graph]) -> Graph {
    let n = gs.iter().map(Graph::n).sum();
    let mut out = Graph::empty(n);
    let mut offset = 0;
    for g in gs {
        for (u, v) in g.edges() {
            out.set_edge(offset + u, offset + v);
        }
        offset += g.n();
    }
    out
}

/// `g ∨ h`: vertices of `g` first, then `h` shifted by `g.n()`, with every
/// cross pair joined.
pub fn join(g: &Graph, h: &Graph) -> Graph {
    let mut out = disjoint_union(&[g.clone(), h.clone()]);
    let off = g.n();
    for u in 0..g.n() {
        for v in 0..h.n() {
            out.set_edge(u, off + v);
        }
    }
    out
}

const G6_MAX_N: u64 = 68_719_476_735;

/// Encodes `g` in graph6 (no `>>graph6<<` header, no trailing newline).
pub fn encode_graph6(g: &Graph) -> Vec<u8> {
    let n = g.n() as u64;
    assert!(n <= G6_MAX_N, "graph6 supports at most 2^36 - 1 vertices");
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..g.n() {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    out
}

/// Decodes one graph6 record. An optional `>>graph6<<` header and
/// surrounding whitespace are accepted.
pub fn decode_graph6(bytes: &[u8]) -> Result<Graph, GraphError> {
    let err = |m: &str| GraphError::Graph6(m.to_string());
    let mut data = bytes.trim_ascii();
    if let Some(rest) = data.strip_prefix(b">>graph6<<") {
        data = rest;
    }
    if data.is_empty() {
        return Err(err("empty input"));
    }
    if let Some(&bad) = data.iter().find(|&&c| !(63..=126).contains(&c)) {
        return Err(GraphError::Graph6(format!("invalid byte 0x{bad:02x}")));
    }
    let sixes = |s: &[u8]| s.iter().fold(0u64, |acc, &c| (acc << 6) | (c - 63) as u64);
    let (n, body) = if data[0] != 126 {
        (data[0] as u64 - 63, &data[1..])
    } else if data.len() >= 2 && data[1] == 126 {
        if data.len() < 8 {
            return Err(err("truncated size header"));
        }
        (sixes(&data[2..8]), &data[8..])
    } else {
        if data.len() < 4 {
            return Err(err("truncated size header"));
        }
        (sixes(&data[1..4]), &data[4..])
    };
    let n = usize::try_from(n).map_err(|_| err("vertex count too large"))?;
    let pairs = n * n.saturating_sub(1) / 2;
    let need = pairs.div_ceil(6);
    if body.len() < need {
        return Err(err("truncated adjacency bits"));
    }
    if body.len() > need {
        return Err(err("trailing bytes after adjacency bits"));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.set_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Graphviz source for `g`; vertices in `highlight` are filled red.
pub fn to_dot(g: &Graph, highlight: &VertexSet) -> String {
    let mut s = String::from("graph G {\n");
    for v in 0..g.n() {
        if highlight.contains(v) {
            s.push_str(&format!("  {v} [style=filled, fillcolor=red];\n"));
        } else {
            s.push_str(&format!("  {v};\n"));
        }
    }
    for (u, v) in g.edges() {
        s.push_str(&format!("  {u} -- {v};\n"));
    }
    s.push_str("}\n");
    s
}

/// JSON edge-list form `{"n": .., "edges": [[u, v], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for EdgeList {
    fn from(g: &Graph) -> Self {
        EdgeList {
            n: g.n(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<EdgeList> for Graph {
    type Error = GraphError;

    fn try_from(e: EdgeList) -> Result<Self, Self::Error> {
        let pairs: Vec<_> = e.edges.iter().map(|&[u, v]| (u, v)).collect();
        Graph::new(e.n, &pairs)
    }
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string(&EdgeList::from(g)).expect("edge list serializes")
}

pub fn from_json(text: &str) -> Result<Graph, GraphError> {
    let e: EdgeList =
        serde_json::from_str(text).map_err(|e| GraphError::EdgeList(e.to_string()))?;
    Graph::try_from(e)
}

/// Plain text: first line `n m`, then one `u v` line per edge.
pub fn to_edge_text(g: &Graph) -> String {
    let edges = g.edges();
    let mut s = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn from_edge_text(text: &str) -> Result<Graph, GraphError> {
    let err = |m: String| GraphError::EdgeList(m);
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| err("empty input".into()))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| err(format!("bad header {header:?}"))))
        .collect::<Result<_, _>>()?;
    let [n, m] = nums[..] else {
        return Err(err(format!("bad header {header:?}")));
    };
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => return Err(err(format!("bad edge line {line:?}"))),
        }
    }
    if edges.len() != m {
        return Err(err(format!("expected {m} edges, found {}", edges.len())));
    }
    Graph::new(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn make_graph_rejects_bad_edges() {
        assert_eq!(
            Graph::new(3, &[(0, 3)]),
            Err(GraphError::EndpointOutOfRange(0, 3, 3))
        );
        assert_eq!(Graph::new(3, &[(1, 1)]), Err(GraphError::LoopEdge(1)));
    }

    #[test]
    fn make_graph_deduplicates() {
        let g = Graph::new(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(triangle().edge_count(), 3);
        assert!(triangle().is_complete());
    }

    #[test]
    fn edgeless_pair_has_two_components() {
        let g = Graph::empty(2);
        assert_eq!(components(&g, &VertexSet::empty(2)).count(), 2);
    }

    #[test]
    fn cycle_minus_antipodes() {
        let c8 = Graph::cycle(8);
        let s = VertexSet::from_vertices(8, [0, 4]).unwrap();
        let comps = components(&c8, &s);
        assert_eq!(comps.parts(), &[vec![1, 2, 3], vec![5, 6, 7]]);
    }

    #[test]
    fn everything_removed_gives_zero_components() {
        let s = VertexSet::from_vertices(3, 0..3).unwrap();
        assert_eq!(components(&triangle(), &s).count(), 0);
    }

    #[test]
    fn union_and_join_counts() {
        let two = disjoint_union(&[triangle(), triangle()]);
        assert_eq!((two.n(), two.edge_count()), (6, 6));
        assert_eq!(components(&two, &VertexSet::empty(6)).count(), 2);
        assert!(!two.has_edge(2, 3));
        assert_eq!(disjoint_union(&[Graph::empty(1)]), Graph::empty(1));

        let k2 = join(&Graph::empty(1), &Graph::empty(1));
        assert_eq!(k2, Graph::complete(2));
        let g = join(&Graph::complete(2), &Graph::empty(3));
        assert_eq!((g.n(), g.edge_count()), (5, 7));
    }

    #[test]
    fn graph6_triangle() {
        assert_eq!(encode_graph6(&triangle()), b"Bw");
        assert_eq!(decode_graph6(b"Bw").unwrap(), triangle());
        assert_eq!(decode_graph6(b">>graph6<<Bw\n").unwrap(), triangle());
    }

    #[test]
    fn graph6_rejects_malformed() {
        assert!(matches!(decode_graph6(b"B"), Err(GraphError::Graph6(m)) if m.contains("truncated")));
        assert!(decode_graph6(b"").is_err());
        assert!(decode_graph6(b"~").is_err());
        assert!(decode_graph6(b"Bww").is_err());
        assert!(decode_graph6(b"B\x01").is_err());
    }

    #[test]
    fn graph6_long_header() {
        let g = Graph::cycle(100);
        let enc = encode_graph6(&g);
        assert_eq!(&enc[..4], &[126, 63, 64, 63 + 36]);
        assert_eq!(decode_graph6(&enc).unwrap(), g);
    }

    #[test]
    fn dot_output() {
        let k2 = Graph::complete(2);
        assert!(to_dot(&k2, &VertexSet::empty(2)).contains("0 -- 1"));
        let dot = to_dot(&triangle(), &VertexSet::from_vertices(3, [0]).unwrap());
        assert!(dot.contains("0 [style=filled"));
        assert!(!dot.contains("1 [style=filled"));
        let c5 = to_dot(&Graph::cycle(5), &VertexSet::empty(5));
        assert_eq!(c5.matches(" -- ").count(), 5);
    }

    #[test]
    fn json_and_edge_text() {
        let g = Graph::new(4, &[(2, 3), (0, 1), (1, 3)]).unwrap();
        assert_eq!(to_json(&g), r#"{"n":4,"edges":[[0,1],[1,3],[2,3]]}"#);
        assert_eq!(from_json(&to_json(&g)).unwrap(), g);
        assert_eq!(from_edge_text(&to_edge_text(&g)).unwrap(), g);
        assert!(from_json(r#"{"n":2,"edges":[[0,2]]}"#).is_err());
        assert!(from_edge_text("3 2\n0 1\n").is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for v in 1..n {
                    for u in 0..v {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::new(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn graph6_round_trip(g in arb_graph(80)) {
            prop_assert_eq!(decode_graph6(&encode_graph6(&g)).unwrap(), g);
        }

        #[test]
        fn component_sizes_sum(g in arb_graph(20), mask in any::<u32>()) {
            let n = g.n();
            let s = VertexSet::from_vertices(n, (0..n).filter(|v| mask >> v & 1 == 1)).unwrap();
            let comps = components(&g, &s);
            let total: usize = comps.parts().iter().map(Vec::len).sum();
            prop_assert_eq!(total, n - s.len());
            for part in comps.parts() {
                for &v in part {
                    for w in g.neighbors(v).filter(|&w| !s.contains(w)) {
                        prop_assert!(part.contains(&w));
                    }
                }
            }
        }

        #[test]
        fn adding_an_edge_never_adds_components(g in arb_graph(14), mask in any::<u16>(), u in 0usize..14, v in 0usize..14) {
            let n = g.n();
            prop_assume!(u < n && v < n && u != v);
            let s = VertexSet::from_vertices(n, (0..n).filter(|x| mask >> x & 1 == 1)).unwrap();
            let mut edges = g.edges();
            edges.push((u, v));
            let h = Graph::new(n, &edges).unwrap();
            prop_assert!(components(&h, &s).count() <= components(&g, &s).count());
        }

        #[test]
        fn join_edge_formula(g in arb_graph(9), h in arb_graph(9)) {
            let j = join(&g, &h);
            prop_assert_eq!(j.n(), g.n() + h.n());
            prop_assert_eq!(j.edge_count(), g.edge_count() + h.edge_count() + g.n() * h.n());
        }
    }
}
