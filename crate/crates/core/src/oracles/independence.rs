use super::{check_size, full_mask, OracleError};
use crate::graph::Graph;

fn branch(adj: &[u64], cand: u64, size: u32, best: &mut u32) {
    if size + cand.count_ones() <= *best {
        return;
    }
    if cand == 0 {
        *best = size;
        return;
    }
    // Vertices of degree <= 1 in the candidate set can always be taken.
    let mut pick = None;
    let mut max_deg = (0, 0);
    let mut c = cand;
    while c != 0 {
        let v = c.trailing_zeros() as usize;
        c &= c - 1;
        let d = (adj[v] & cand).count_ones();
        if d <= 1 {
            pick = Some(v);
            break;
        }
        if d > max_deg.0 {
            max_deg = (d, v);
        }
    }
    if let Some(v) = pick {
        branch(adj, cand & !adj[v] & !(1 << v), size + 1, best);
        return;
    }
    let v = max_deg.1;
    branch(adj, cand & !adj[v] & !(1 << v), size + 1, best);
    branch(adj, cand & !(1 << v), size, best);
}

/// Exact independence number by branch and bound.
pub fn independence_number(g: &Graph, max_n: usize) -> Result<usize, OracleError> {
    check_size(g.n(), max_n)?;
    let adj = g.masks().expect("checked size");
    let mut best = 0;
    branch(&adj, full_mask(g.n()), 0, &mut best);
    Ok(best as usize)
}
