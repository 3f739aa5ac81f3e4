//! The building blocks, the terminal-clique join construction and the
//! special graphs used for small toughness values.
//!
//! Block vertices are numbered in `w`-index order starting from 0, so `w1`
//! is vertex 0. In L2 the merged vertex `u` takes `w2`'s slot (index 1) and
//! the later vertices keep their order, giving `w1, u, w3, .., w7`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{disjoint_union, join, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("join construction needs a nonempty clique or at least one block")]
    EmptyConstruction,
    #[error("triangle inflation needs a cubic graph, vertex {vertex} has degree {degree}")]
    NotCubic { vertex: usize, degree: usize },
    #[error("case-3 graph needs a > b >= 2, got a={0}, b={1}")]
    Case3Params(u64, u64),
    #[error("unknown block kind {0:?}")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockKind {
    L1,
    L2,
    L3,
    L4,
}

impl BlockKind {
    pub const ALL: [BlockKind; 4] = [BlockKind::L1, BlockKind::L2, BlockKind::L3, BlockKind::L4];

    /// Vertex count of the block graph.
    pub fn order(self) -> usize {
        match self {
            BlockKind::L1 => 8,
            BlockKind::L2 => 7,
            BlockKind::L3 => 9,
            BlockKind::L4 => 5,
        }
    }

    /// Block-local vertices this kind contributes to the toughness cutset:
    /// the degree-4+ vertices for L1, L2 and L3, and the two triangle
    /// vertices carrying the pendant edges for L4.
    pub fn cutset_vertices(self) -> &'static [usize] {
        match self {
            BlockKind::L1 | BlockKind::L3 => &[1, 3, 5, 7],
            BlockKind::L2 => &[1, 3, 5],
            BlockKind::L4 => &[0, 2],
        }
    }

    /// Components that contain no terminal once the cutset vertices are gone.
    pub fn isolated_after_cut(self) -> usize {
        match self {
            BlockKind::L1 | BlockKind::L2 => 2,
            BlockKind::L3 => 3,
            BlockKind::L4 => 1,
        }
    }

    /// Whether the terminals are joined by a Hamilton path of the block.
    /// This is the known answer; the verifier recomputes it exhaustively.
    pub fn has_terminal_hamilton_path(self) -> bool {
        self == BlockKind::L4
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for BlockKind {
    type Err = BlockError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "L1" => Ok(BlockKind::L1),
            "L2" => Ok(BlockKind::L2),
            "L3" => Ok(BlockKind::L3),
            "L4" => Ok(BlockKind::L4),
            _ => Err(BlockError::UnknownKind(s.to_string())),
        }
    }
}

/// A block graph with its two terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub graph: Graph,
    pub x: usize,
    pub y: usize,
    pub kind: BlockKind,
}

// w_i -> index i - 1
fn w(i: usize) -> usize {
    i - 1
}

fn l1_edges() -> Vec<(usize, usize)> {
    let mut edges: Vec<_> = (1..=8).map(|i| (w(i), w(i % 8 + 1))).collect();
    edges.extend([(w(2), w(4)), (w(4), w(6)), (w(6), w(8)), (w(2), w(8))]);
    edges
}

pub fn block(kind: BlockKind) -> Block {
    let (n, edges, x, y) = match kind {
        BlockKind::L1 => (8, l1_edges(), w(1), w(5)),
        BlockKind::L2 => {
            // Drop w1w2 and w2w8, then fold w8 onto w2.
            let relabel = |v: usize| match v {
                7 => 1,
                v => v,
            };
            let edges = l1_edges()
                .into_iter()
                .filter(|&e| e != (w(1), w(2)) && e != (w(2), w(8)))
                .map(|(a, b)| (relabel(a), relabel(b)))
                .collect();
            (7, edges, w(1), w(5))
        }
        BlockKind::L3 => {
            let mut edges = l1_edges();
            edges.extend([(w(4), w(9)), (w(6), w(9))]);
            (9, edges, w(1), w(5))
        }
        BlockKind::L4 => {
            let edges = vec![
                (w(1), w(2)),
                (w(2), w(3)),
                (w(3), w(1)),
                (w(1), w(4)),
                (w(3), w(5)),
            ];
            (5, edges, w(4), w(5))
        }
    };
    Block {
        graph: Graph::new(n, &edges).expect("block edges are valid"),
        x,
        y,
        kind,
    }
}

/// Disjoint blocks with a clique on all terminals. Returns the graph and the
/// global `(x_i, y_i)` of every block.
pub fn f_m(blocks: &[Block]) -> (Graph, Vec<(usize, usize)>) {
    let graphs: Vec<Graph> = blocks.iter().map(|b| b.graph.clone()).collect();
    let mut g = disjoint_union(&graphs);
    let mut terminals = Vec::with_capacity(blocks.len());
    let mut offset = 0;
    for b in blocks {
        terminals.push((offset + b.x, offset + b.y));
        offset += b.graph.n();
    }
    let flat: Vec<usize> = terminals.iter().flat_map(|&(x, y)| [x, y]).collect();
    for (i, &u) in flat.iter().enumerate() {
        for &v in &flat[i + 1..] {
            g.set_edge(u, v);
        }
    }
    (g, terminals)
}

/// `K_l ∨ F_m` over the given block kinds. Clique vertices are `0..l`, then
/// the blocks follow in list order.
pub fn g_construct(l: usize, kinds: &[BlockKind]) -> Result<Graph, BlockError> {
    if l == 0 && kinds.is_empty() {
        return Err(BlockError::EmptyConstruction);
    }
    let blocks: Vec<Block> = kinds.iter().map(|&k| block(k)).collect();
    let (fm, _) = f_m(&blocks);
    Ok(join(&Graph::complete(l), &fm))
}

/// Offset of every block inside the graph returned by [`g_construct`].
pub fn block_offsets(l: usize, kinds: &[BlockKind]) -> Vec<usize> {
    kinds
        .iter()
        .scan(l, |off, k| {
            let start = *off;
            *off += k.order();
            Some(start)
        })
        .collect()
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut g = Graph::empty(a + b);
    for u in 0..a {
        for v in a..a + b {
            g.set_edge(u, v);
        }
    }
    g
}

/// `C6` on `x1..x6` plus `x7` adjacent to `x1, x4` and the chord `x2x6`;
/// `x_i` is vertex `i - 1`.
pub fn case2_graph() -> Graph {
    let mut edges: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    edges.extend([(0, 6), (3, 6), (1, 5)]);
    Graph::new(7, &edges).expect("valid")
}

/// Vertex ranges of [`case3_h`]: universal part, independent part, clique
/// part. `y_i` and `z_i` share their index within their parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Case3Layout {
    pub universal: usize,
    pub b: usize,
}

impl Case3Layout {
    pub fn new(a: u64, b: u64) -> Self {
        Case3Layout {
            universal: (a - b + 1) as usize,
            b: b as usize,
        }
    }

    pub fn n(&self) -> usize {
        self.universal + 2 * self.b
    }

    /// Vertex of `y_i`, 1-based `i`.
    pub fn y(&self, i: usize) -> usize {
        self.universal + i - 1
    }

    /// Vertex of `z_i`, 1-based `i`.
    pub fn z(&self, i: usize) -> usize {
        self.universal + self.b + i - 1
    }
}

/// Universal vertices `x_1..x_{a-b+1}`, then independent `y_1..y_b`, then the
/// clique `z_1..z_b`, with `y_i z_i` matched.
pub fn case3_h(a: u64, b: u64) -> Result<Graph, BlockError> {
    if !(a > b && b >= 2) {
        return Err(BlockError::Case3Params(a, b));
    }
    let lay = Case3Layout::new(a, b);
    let mut g = Graph::empty(lay.n());
    for x in 0..lay.universal {
        for v in 0..lay.n() {
            if v != x {
                g.set_edge(x, v);
            }
        }
    }
    for i in 1..=lay.b {
        g.set_edge(lay.y(i), lay.z(i));
        for j in i + 1..=lay.b {
            g.set_edge(lay.z(i), lay.z(j));
        }
    }
    Ok(g)
}

/// Petersen graph: outer cycle `0..5`, spokes `i -- i+5`, inner pentagram
/// `5+i -- 5+(i+2)%5`.
pub fn petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, &edges).expect("valid")
}

/// Replaces every vertex `v` of a cubic graph by the triangle
/// `3v, 3v+1, 3v+2`. Vertex `3v+i` carries the `i`-th edge incident to `v`
/// in sorted edge order.
pub fn inflate_triangles(g: &Graph) -> Result<Graph, BlockError> {
    if let Some((vertex, degree)) = g.degrees().into_iter().enumerate().find(|&(_, d)| d != 3) {
        return Err(BlockError::NotCubic { vertex, degree });
    }
    let mut out = Graph::empty(3 * g.n());
    for v in 0..g.n() {
        out.set_edge(3 * v, 3 * v + 1);
        out.set_edge(3 * v + 1, 3 * v + 2);
        out.set_edge(3 * v, 3 * v + 2);
    }
    for (u, v) in g.edges() {
        out.set_edge(inflated_port(g, u, v), inflated_port(g, v, u));
    }
    Ok(out)
}

/// The triangle vertex of `v` that carries the original edge `v -- other`.
pub fn inflated_port(g: &Graph, v: usize, other: usize) -> usize {
    let slot = g
        .neighbors(v)
        .position(|w| w == other)
        .expect("edge exists in the original graph");
    3 * v + slot
}
