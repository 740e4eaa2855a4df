//! Concavity and convexity of set functions via pairwise marginals.

use serde::{Deserialize, Serialize};

use crate::games::GameTable;
use crate::model::Coalition;
use crate::scalar::Scalar;

/// Agent `agent` contributes differently to `smaller ⊂ larger` than the
/// property requires.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginalViolation {
    pub agent: usize,
    pub smaller: Coalition,
    pub larger: Coalition,
}

fn marginal(game: &GameTable, s: Coalition, i: usize) -> Scalar {
    game.worth(s.with(i)) - game.worth(s)
}

/// Checks `marginal(i, S ∪ {j}) ≤ marginal(i, S)` (concave) or `≥` (convex)
/// for every `i ≠ j` and `S ⊆ N \ {i, j}`, which is equivalent to the
/// condition over all nested pairs.
fn violation(game: &GameTable, concave: bool) -> Option<MarginalViolation> {
    let n = game.n();
    let grand = game.grand();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for s in grand.without(i).without(j).subsets() {
                let small = marginal(game, s, i);
                let large = marginal(game, s.with(j), i);
                let ok = if concave { large <= small } else { large >= small };
                if !ok {
                    return Some(MarginalViolation { agent: i, smaller: s, larger: s.with(j) });
                }
            }
        }
    }
    None
}

pub fn concavity_violation(game: &GameTable) -> Option<MarginalViolation> {
    violation(game, true)
}

pub fn convexity_violation(game: &GameTable) -> Option<MarginalViolation> {
    violation(game, false)
}

pub fn is_concave(game: &GameTable) -> bool {
    concavity_violation(game).is_none()
}

pub fn is_convex(game: &GameTable) -> bool {
    convexity_violation(game).is_none()
}
