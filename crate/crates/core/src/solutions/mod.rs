//! Core analysis, closed-form allocations and machine-cost regimes.

pub mod balance;
pub mod convexity;
pub mod regimes;
pub mod theorems;

pub use balance::{
    check_balanced_collection, core_bounds, core_nonempty, core_violation, is_in_core, unique_core_point,
    BalancedCollection, CoreCertificate, WeightedCoalition, CORE_SOLVER_CAP,
};
pub use convexity::{concavity_violation, convexity_violation, is_concave, is_convex, MarginalViolation};
pub use regimes::{analyze_machine_cost, breakpoints, classify_regimes, Guarantee, Regime, RegimeReport, RegimeSample, Verdict};
pub use theorems::{
    half_rank, private_single_machine_bound, requeueing_theorem_bounds, single_machine_bound, theorem1_allocation,
    theorem1_uniqueness_check, theorem3_allocation, theorem_bounds, uniqueness_rank, RequeueingReport, TheoremReport,
};
