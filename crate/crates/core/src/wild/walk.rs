//! Friezes from walks in the successor graph.

use super::graph::{GammaSubgraph, GammaVertex};
use super::WildError;
use crate::pattern::FriezePattern;

/// Stacks the vertices of a walk: the first vertex contributes its k−1
/// rows, each later vertex its last row. Rows are numbered from 1.
pub fn walk_frieze(g: &GammaSubgraph, walk: &[GammaVertex]) -> Result<FriezePattern, WildError> {
    let first = walk.first().ok_or(WildError::EmptyWalk)?;
    for (step, pair) in walk.windows(2).enumerate() {
        if !g.has_edge(&pair[0], &pair[1]) {
            return Err(WildError::NotAWalk { step });
        }
    }
    let mut rows = first.rational_rows();
    for v in &walk[1..] {
        rows.push(v.rational_rows().pop().expect("k >= 2"));
    }
    Ok(FriezePattern::window_mode(first.k(), first.n(), 1, rows)?)
}

/// The first `len` letters of the Fibonacci word (fixed point of
/// `0 -> 01`, `1 -> 0`).
pub fn fibonacci_word(len: usize) -> Vec<bool> {
    let mut w = vec![false];
    while w.len() < len {
        w = w.iter().flat_map(|&b| if b { vec![false] } else { vec![false, true] }).collect();
    }
    w.truncate(len);
    w
}

/// Follows `loops[0]` or `loops[1]` for each letter of `word`. Both loops
/// must be closed walks starting at the same vertex, given without the
/// repeated endpoint. The result ends back at the shared vertex.
pub fn loop_walk(loops: [&[GammaVertex]; 2], word: &[bool]) -> Result<Vec<GammaVertex>, WildError> {
    let start = match (loops[0].first(), loops[1].first()) {
        (Some(a), Some(b)) if a == b => a.clone(),
        _ => return Err(WildError::LoopsDoNotShareStart),
    };
    let mut walk = Vec::new();
    for &b in word {
        walk.extend_from_slice(loops[usize::from(b)]);
    }
    walk.push(start);
    Ok(walk)
}

/// Walk that repeats `cycle` `times` times and closes it.
pub fn repeat_cycle(cycle: &[GammaVertex], times: usize) -> Vec<GammaVertex> {
    let mut walk: Vec<GammaVertex> = cycle.iter().cycle().take(cycle.len() * times).cloned().collect();
    if let Some(s) = cycle.first() {
        walk.push(s.clone());
    }
    walk
}
