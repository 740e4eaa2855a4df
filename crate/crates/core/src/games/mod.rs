//! Characteristic functions of the queueing and requeueing games.

use std::fmt;

use serde::{Deserialize, Serialize};

pub mod private;
pub mod public;
pub mod queueing;
pub(crate) mod scaled;
pub mod table;

pub use private::{
    is_admissible_private, private_optimum_with_cap, private_plan_value, private_requeueing_game,
    private_requeueing_game_with_cap, private_requeueing_optimum, private_requeueing_value, PrivateOptimum,
    REQUEUEING_CAP,
};
pub use public::{
    grid_start, is_optimal_order, priority_order, public_requeue_grid, public_requeueing_game,
    public_requeueing_value, public_value_fixed, public_value_profile, relaxed_machine_count, relaxed_public_game,
    relaxed_public_optimum, relaxed_public_value, PriorityOrder,
};
pub use queueing::{queueing_cost_game, reduced_cost_game, ReducedCostGame, QUEUEING_TABLE_CAP};
pub use table::{GameKind, GameTable};

/// Whether coalition members may overtake outsiders when rearranging.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RearrangementVariant {
    /// Outsiders' start times may not increase.
    Swaps,
    /// Outsiders may not gain predecessors.
    NoSwaps,
}

impl fmt::Display for RearrangementVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RearrangementVariant::Swaps => "swaps",
            RearrangementVariant::NoSwaps => "no-swaps",
        })
    }
}
