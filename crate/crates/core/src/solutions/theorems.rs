//! Closed-form core allocations and the machine-cost ranges where they apply.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::is_optimal_order;
use crate::model::{QueueingProblem, RequeueingProblem};
use crate::scalar::{ceil_div, Scalar};
use crate::scheduling::threshold;

/// `⌈n/2⌉`
pub fn half_rank(n: usize) -> usize {
    ceil_div(n, 2)
}

/// `⌈(2n+1)/4⌉`
pub fn uniqueness_rank(n: usize) -> usize {
    ceil_div(2 * n + 1, 4)
}

/// `Σ (i - 1) w_i`: from here on the reduced game describes the core.
pub fn single_machine_bound(problem: &QueueingProblem) -> Scalar {
    problem.weights().iter().enumerate().map(|(i, w)| w * i as i64).sum()
}

/// `Σ_{j=1}^{⌈n/2⌉} (n - j) w_j`: machine cost above which the private
/// single-machine requeueing game has a non-empty core.
pub fn private_single_machine_bound(problem: &QueueingProblem) -> Scalar {
    let n = problem.n();
    (1..=half_rank(n)).map(|j| problem.weight(j - 1) * (n - j) as i64).sum()
}

fn cheap_machine_allocation(problem: &QueueingProblem) -> Vec<Scalar> {
    let b = problem.machine_cost();
    problem.weights().iter().map(|w| (b + w).min(w * 2)).collect()
}

/// `y_i = min(b + w_i, 2 w_i)`, in the core whenever `b <= w_{⌈n/2⌉}`.
pub fn theorem1_allocation(problem: &QueueingProblem) -> Result<Vec<Scalar>> {
    let mu = half_rank(problem.n());
    let bound = problem.weight(mu - 1);
    if problem.machine_cost() > bound {
        return Err(Error::Hypothesis(format!("b = {} exceeds w_{mu} = {bound}", problem.machine_cost())));
    }
    Ok(cheap_machine_allocation(problem))
}

/// The same allocation as the only core point, whenever `b <= w_{⌈(2n+1)/4⌉}`.
pub fn theorem1_uniqueness_check(problem: &QueueingProblem) -> Result<Vec<Scalar>> {
    let k = uniqueness_rank(problem.n()).min(problem.n());
    let bound = problem.weight(k - 1);
    if problem.machine_cost() > bound {
        return Err(Error::Hypothesis(format!("b = {} exceeds w_{k} = {bound}", problem.machine_cost())));
    }
    Ok(cheap_machine_allocation(problem))
}

/// `y_i = s0(i) w_i - b` for agents not served first, 0 otherwise, when `b <= w_n`.
pub fn theorem3_allocation(rq: &RequeueingProblem) -> Result<Vec<Scalar>> {
    let p = rq.base();
    let n = p.n();
    let b = p.machine_cost();
    if b > p.weight(n - 1) {
        return Err(Error::Hypothesis(format!("b = {b} exceeds w_{n} = {}", p.weight(n - 1))));
    }
    Ok((0..n)
        .map(|i| match rq.initial_start(i) {
            0 => Scalar::zero(),
            s => p.weight(i) * s as i64 - b,
        })
        .collect())
}

/// Hypotheses of the closed-form results on one instance, with the bound values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub n: usize,
    pub machine_cost: Scalar,
    pub half_rank: usize,
    /// `w_{⌈n/2⌉}`
    pub membership_bound: Scalar,
    pub uniqueness_rank: usize,
    /// `w_{⌈(2n+1)/4⌉}`
    pub uniqueness_bound: Scalar,
    /// `r(2)`, absent for a single agent
    pub two_machine_threshold: Option<Scalar>,
    /// `Σ (i - 1) w_i`
    pub single_machine_bound: Scalar,
    /// `b <= w_{⌈n/2⌉}`: the cheap-machine allocation is in the core.
    pub cheap_allocation_in_core: bool,
    /// `b <= w_{⌈(2n+1)/4⌉}`: it is the whole core.
    pub cheap_allocation_unique: bool,
    /// `b >= Σ (i - 1) w_i`: the reduced game is concave and shares the core.
    pub reduced_game_applies: bool,
    /// `r(2) <= b < Σ (i - 1) w_i`: the core is empty.
    pub empty_band: bool,
    pub requeueing: Option<RequeueingReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequeueingReport {
    pub initial_machines: usize,
    /// `w_n`
    pub last_weight: Scalar,
    /// `b <= w_n`: private games share one core point.
    pub cheap_private_core: bool,
    /// `Σ_{j=1}^{⌈n/2⌉} (n - j) w_j`
    pub private_single_machine_bound: Scalar,
    /// `m0 = 1` and `b` at or above that bound: private cores are non-empty.
    pub expensive_private_core: bool,
    /// The initial priority order serves heavier agents first.
    pub optimal_order: bool,
    /// Optimal order with every agent on her own machine.
    pub all_served_first: bool,
}

pub fn theorem_bounds(problem: &QueueingProblem) -> TheoremReport {
    let n = problem.n();
    let b = problem.machine_cost();
    let mu = half_rank(n);
    let uq = uniqueness_rank(n).min(n);
    let membership_bound = problem.weight(mu - 1).clone();
    let uniqueness_bound = problem.weight(uq - 1).clone();
    let two_machine_threshold = (n >= 2).then(|| threshold(problem, problem.grand(), 2).expect("n >= 2"));
    let single = single_machine_bound(problem);
    TheoremReport {
        n,
        machine_cost: b.clone(),
        half_rank: mu,
        cheap_allocation_in_core: *b <= membership_bound,
        cheap_allocation_unique: *b <= uniqueness_bound,
        membership_bound,
        uniqueness_rank: uq,
        uniqueness_bound,
        reduced_game_applies: *b >= single,
        empty_band: two_machine_threshold.as_ref().is_some_and(|r2| b >= r2 && *b < single),
        two_machine_threshold,
        single_machine_bound: single,
        requeueing: None,
    }
}

pub fn requeueing_theorem_bounds(rq: &RequeueingProblem) -> TheoremReport {
    let p = rq.base();
    let n = p.n();
    let b = p.machine_cost();
    let m0 = rq.initial_machines();
    let last_weight = p.weight(n - 1).clone();
    let private_bound = private_single_machine_bound(p);
    let optimal_order = is_optimal_order(rq);
    TheoremReport {
        requeueing: Some(RequeueingReport {
            initial_machines: m0,
            cheap_private_core: *b <= last_weight,
            last_weight,
            expensive_private_core: m0 == 1 && *b >= private_bound,
            private_single_machine_bound: private_bound,
            optimal_order,
            all_served_first: optimal_order && m0 == n,
        }),
        ..theorem_bounds(p)
    }
}
