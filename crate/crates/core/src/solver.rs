//! Shared solver outcome types and algorithm auto-selection.

use crate::graph::{Embedding, Instance};

/// A certified decision: `Yes` always carries an embedding that passes
/// verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Yes(Embedding),
    No,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        match self {
            Decision::Yes(e) => Some(e),
            Decision::No => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    /// The instance violates the solver's preconditions.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A resource guard tripped; the answer is unknown.
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    /// An internal invariant failed; the answer is unknown.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Check whether an exact instance is trivially infeasible: covering every
/// edge exactly once forces the total requested length to equal the edge
/// count. Conversely, when the totals match, any full packing covers every
/// edge, so exact instances reduce to non-exact ones.
pub fn exact_total_mismatch(instance: &Instance) -> bool {
    instance.exact && instance.total_length() != instance.graph.edge_count()
}
