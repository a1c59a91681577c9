//! Row continuation, the successor graph and walks through it.

mod continuation;
mod graph;
mod walk;

pub use continuation::{continue_row, Constraint, Continuation};
pub use graph::{
    analyze, build_subgraph, induced_subgraph, prune_dead_ends, successors, Analysis, AnalysisCaps, GammaSubgraph,
    GammaVertex, Limits,
};
pub use walk::{fibonacci_word, loop_walk, repeat_cycle, walk_frieze};

use crate::pattern::PatternError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WildError {
    #[error("a vertex for k = {k}, n = {n} needs k-1 rows of length n (got {rows} rows)")]
    VertexShape { k: usize, n: usize, rows: usize },
    #[error("step {step} of the walk is not an edge of the graph")]
    NotAWalk { step: usize },
    #[error("the walk is empty")]
    EmptyWalk,
    #[error("the two loops must start at the same vertex")]
    LoopsDoNotShareStart,
    #[error(transparent)]
    Pattern(#[from] PatternError),
}
