//! Benchmark fixtures for the game builders.

use endoq_core::{QueueingProblem, RequeueingProblem, Scalar};

/// Weights `3n+1, 3n-2, ..., 4` with machine cost `b`.
pub fn problem(n: usize, b: i64) -> QueueingProblem {
    let w: Vec<Scalar> = (0..n).map(|i| Scalar::from_int(3 * (n - i) as i64 + 1)).collect();
    QueueingProblem::new(w, Scalar::from_int(b)).expect("positive weights")
}

/// `problem(n, b)` queued lightest first on `machines` machines.
pub fn reversed_queue(n: usize, b: i64, machines: usize) -> RequeueingProblem {
    let order: Vec<usize> = (0..n).rev().collect();
    RequeueingProblem::from_order(problem(n, b), machines, &order).expect("valid schedule")
}
