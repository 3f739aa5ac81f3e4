use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_size, count_components, full_mask, CutsetWitness, OracleError};
use crate::graph::{components, Graph, VertexSet};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Toughness {
    Finite(Rational),
    Infinite,
}

impl fmt::Display for Toughness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Toughness::Finite(r) => write!(f, "{r}"),
            Toughness::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToughnessResult {
    pub value: Toughness,
    pub witness: Option<CutsetWitness>,
}

/// Candidate cut ordered by ratio, then size, then mask value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cut {
    size: u32,
    comps: u32,
    mask: u64,
}

impl Cut {
    fn cmp_key(&self, other: &Self) -> Ordering {
        let lhs = self.size as u64 * other.comps as u64;
        let rhs = other.size as u64 * self.comps as u64;
        lhs.cmp(&rhs)
            .then(self.size.cmp(&other.size))
            .then(self.mask.cmp(&other.mask))
    }
}

fn better(a: Option<Cut>, b: Option<Cut>) -> Option<Cut> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.cmp_key(&x) == Ordering::Less { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Next integer with the same popcount (Gosper's hack).
fn next_combination(c: u64) -> u64 {
    let low = c & c.wrapping_neg();
    let ripple = c + low;
    (((ripple ^ c) >> 2) / low) | ripple
}

/// Best cut of exactly `k` vertices whose lowest member is `lowest`.
fn best_with_lowest(adj: &[u64], n: usize, k: usize, lowest: usize) -> Option<Cut> {
    let all = full_mask(n);
    let free = n - lowest - 1;
    let rest = k - 1;
    if rest > free {
        return None;
    }
    let mut best = None;
    let mut combo: u64 = if rest == 0 { 0 } else { (1u64 << rest) - 1 };
    let stop = if free == 64 { 0 } else { 1u64 << free };
    loop {
        let mask = (1u64 << lowest) | combo.checked_shl(lowest as u32 + 1).unwrap_or(0);
        let comps = count_components(adj, all & !mask);
        if comps >= 2 {
            best = better(best, Some(Cut { size: k as u32, comps, mask }));
        }
        if rest == 0 {
            break;
        }
        combo = next_combination(combo);
        if combo >= stop {
            break;
        }
    }
    best
}

/// Exact toughness by enumerating cutsets in order of increasing size.
///
/// Sizes stop once `k / (n - k)` reaches the best ratio so far, since a cut
/// of `k` vertices leaves at most `n - k` components. Work for one size is
/// split across rayon workers by the cut's lowest vertex; the reduction is
/// order independent, so any thread count returns the same witness.
pub fn toughness_exact(g: &Graph, max_n: usize) -> Result<ToughnessResult, OracleError> {
    let n = g.n();
    check_size(n, max_n)?;
    if g.is_complete() {
        return Ok(ToughnessResult {
            value: Toughness::Infinite,
            witness: None,
        });
    }
    let adj = g.masks().expect("checked size");
    let mut best: Option<Cut> = None;
    if count_components(&adj, full_mask(n)) >= 2 {
        best = Some(Cut {
            size: 0,
            comps: count_components(&adj, full_mask(n)),
            mask: 0,
        });
    }
    for k in 1..n.saturating_sub(1) {
        if let Some(b) = best {
            // k / (n - k) >= b.size / b.comps
            if k as u64 * b.comps as u64 >= b.size as u64 * (n - k) as u64 {
                break;
            }
        }
        let round = (0..n)
            .into_par_iter()
            .map(|lowest| best_with_lowest(&adj, n, k, lowest))
            .reduce(|| None, better);
        best = better(best, round);
    }
    let cut = best.expect("a non-complete graph has a cutset");
    let set = VertexSet::from_mask(n, cut.mask);
    let ratio = Rational::of(cut.size as u64, cut.comps as u64);
    Ok(ToughnessResult {
        value: Toughness::Finite(ratio),
        witness: Some(CutsetWitness {
            cutset: set.to_vec(),
            component_count: cut.comps as usize,
            ratio,
        }),
    })
}

fn count_without(g: &Graph, removed: &[bool]) -> usize {
    let set = VertexSet::from_vertices(g.n(), (0..g.n()).filter(|&v| removed[v]))
        .expect("in range");
    components(g, &set).count()
}

fn ratio_less(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 * b.1 < b.0 * a.1
}

type Found = Option<(usize, usize, Vec<bool>)>;

fn consider(best: &mut Found, removed: &[bool], size: usize, comps: usize) {
    let wins = match best {
        Some((s, c, _)) => ratio_less((size, comps), (*s, *c)),
        None => true,
    };
    if comps >= 2 && wins {
        *best = Some((size, comps, removed.to_vec()));
    }
}

/// Local search for a cut with small `|S| / ω`. Only an upper bound on the
/// toughness; the returned witness is re-measured before it is returned.
///
/// Seeds are vertex neighbourhoods and complements of random maximal
/// independent sets. Each seed is improved by single-vertex toggles that
/// strictly lower the ratio. `budget` caps the number of component counts.
pub fn toughness_upper_search(g: &Graph, budget: u64) -> Option<CutsetWitness> {
    let n = g.n();
    if g.is_complete() {
        return None;
    }
    let mut spent = 0u64;
    let mut best: Found = None;
    let nothing = vec![false; n];
    consider(&mut best, &nothing, 0, count_without(g, &nothing));
    for v in 0..n {
        if spent >= budget {
            break;
        }
        let mut removed = vec![false; n];
        for w in g.neighbors(v) {
            removed[w] = true;
        }
        let size = removed.iter().filter(|&&r| r).count();
        spent += 1;
        let comps = count_without(g, &removed);
        consider(&mut best, &removed, size, comps);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x7011_6a11);
    let mut order: Vec<usize> = (0..n).collect();
    while spent < budget {
        order.shuffle(&mut rng);
        let mut removed = vec![true; n];
        for &v in &order {
            if g.neighbors(v).all(|w| removed[w]) {
                removed[v] = false;
            }
        }
        let mut size = removed.iter().filter(|&&r| r).count();
        let mut comps = count_without(g, &removed);
        spent += 1;
        let mut improved = true;
        while improved && spent < budget {
            improved = false;
            order.shuffle(&mut rng);
            for &v in &order {
                if spent >= budget {
                    break;
                }
                removed[v] = !removed[v];
                let new_size = if removed[v] { size + 1 } else { size - 1 };
                let new_comps = count_without(g, &removed);
                spent += 1;
                if new_comps >= 2 && (comps < 2 || ratio_less((new_size, new_comps), (size, comps)))
                {
                    size = new_size;
                    comps = new_comps;
                    improved = true;
                } else {
                    removed[v] = !removed[v];
                }
            }
        }
        consider(&mut best, &removed, size, comps);
    }

    let (_, _, removed) = best?;
    let cut: Vec<usize> = (0..n).filter(|&v| removed[v]).collect();
    CutsetWitness::evaluate(g, &cut)
}
