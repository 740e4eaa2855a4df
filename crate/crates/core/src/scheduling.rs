//! Schedule costs, the fixed-machine-count cost `C(S, k)`, the machine price
//! thresholds `r^w_S(k)`, the optimal machine count `m(S)`, and an exhaustive
//! oracle over semi-active schedules.

use crate::error::{Error, Result};
use crate::model::{Coalition, QueueingProblem, SchedulingPlan};
use crate::scalar::{ceil_div, Scalar};

/// Largest coalition the exhaustive schedule enumerator accepts.
pub const BRUTE_FORCE_CAP: usize = 8;

/// Waiting cost of the members of `coalition` under `plan`, plus `b * m` if
/// `charge_machines` (m = the plan's machine count).
pub fn plan_cost(
    problem: &QueueingProblem,
    coalition: Coalition,
    plan: &SchedulingPlan,
    charge_machines: bool,
) -> Result<Scalar> {
    if plan.covered() != coalition {
        return Err(Error::InvalidPlan(format!(
            "plan covers {{{}}} but the coalition is {{{}}}",
            plan.covered(),
            coalition
        )));
    }
    let mut total: Scalar = plan
        .assignment()
        .iter()
        .map(|(&agent, slot)| problem.weight(agent) * (slot.start as i64 + 1))
        .sum();
    if charge_machines {
        total += problem.machine_cost() * plan.machines() as i64;
    }
    Ok(total)
}

/// Waiting cost of serving `weights` (non-increasing) greedily on `k` machines.
fn greedy_waiting(weights: &[&Scalar], k: usize) -> Scalar {
    weights
        .iter()
        .enumerate()
        .map(|(i, w)| *w * ceil_div(i + 1, k) as i64)
        .sum()
}

fn member_weights(problem: &QueueingProblem, coalition: Coalition) -> Vec<&Scalar> {
    coalition.members().map(|i| problem.weight(i)).collect()
}

/// `C(S, k) = k b + sum_i ceil(i / k) w^S_i`: cost of `coalition` on exactly `k`
/// machines, heaviest agents first. `k > |S|` pays for idle machines.
pub fn fixed_machine_cost(problem: &QueueingProblem, coalition: Coalition, k: usize) -> Scalar {
    assert!(k >= 1, "at least one machine");
    problem.machine_cost() * k as i64 + greedy_waiting(&member_weights(problem, coalition), k)
}

/// `r^w_S(k) = w^S_k + sum_{i>k} (ceil(i/(k-1)) - ceil(i/k)) w^S_i` for `2 <= k <= |S|`:
/// the machine price below which `k` machines beat `k - 1`.
pub fn threshold(problem: &QueueingProblem, coalition: Coalition, k: usize) -> Result<Scalar> {
    let weights = member_weights(problem, coalition);
    threshold_of(&weights, k)
}

fn threshold_of(weights: &[&Scalar], k: usize) -> Result<Scalar> {
    let len = weights.len();
    if k < 2 || k > len {
        return Err(Error::IndexOutOfRange { index: k, len });
    }
    let tail: Scalar = (k + 1..=len)
        .map(|i| weights[i - 1] * (ceil_div(i, k - 1) - ceil_div(i, k)) as i64)
        .sum();
    Ok(weights[k - 1] + tail)
}

/// `r^w_S(k)` for `k = 2..=|S|` (entry 0 is `k = 2`).
pub fn thresholds(problem: &QueueingProblem, coalition: Coalition) -> Vec<Scalar> {
    let weights = member_weights(problem, coalition);
    (2..=weights.len()).map(|k| threshold_of(&weights, k).expect("k in range")).collect()
}

/// `m(S)`: the largest `k` with `r^w_S(k) > b`, or 1 if there is none. Ties
/// between machine counts resolve to the smallest.
pub fn optimal_machine_count(problem: &QueueingProblem, coalition: Coalition) -> Result<usize> {
    if coalition.is_empty() {
        return Err(Error::EmptyCoalition);
    }
    let weights = member_weights(problem, coalition);
    let b = problem.machine_cost();
    // r is non-increasing in k, so scan from the top.
    Ok((2..=weights.len())
        .rev()
        .find(|&k| threshold_of(&weights, k).expect("k in range") > *b)
        .unwrap_or(1))
}

/// `C(S) = min_k C(S, k)`; zero for the empty coalition.
pub fn coalition_cost(problem: &QueueingProblem, coalition: Coalition) -> Scalar {
    if coalition.is_empty() {
        return Scalar::zero();
    }
    let m = optimal_machine_count(problem, coalition).expect("non-empty");
    fixed_machine_cost(problem, coalition, m)
}

/// No job can start earlier: every machine is busy from period 0 without gaps
/// and machine loads differ by at most one.
pub fn is_semi_active(plan: &SchedulingPlan) -> bool {
    plan.is_gap_free() && plan.is_balanced()
}

/// Minimal waiting cost (no machine charge) over all semi-active schedules of
/// `coalition` on exactly `m` machines, for `m = 1..=max_machines`, each with one
/// optimal plan. Entry `m - 1` is for `m` machines.
pub fn brute_force_waiting_costs(
    problem: &QueueingProblem,
    coalition: Coalition,
    max_machines: usize,
) -> Result<Vec<(Scalar, SchedulingPlan)>> {
    if coalition.is_empty() {
        return Err(Error::EmptyCoalition);
    }
    if coalition.len() > BRUTE_FORCE_CAP {
        return Err(Error::CapExceeded { what: "exhaustive schedule enumeration", n: coalition.len(), cap: BRUTE_FORCE_CAP });
    }
    if max_machines == 0 {
        return Err(Error::InvalidPlan("max_machines must be at least 1".into()));
    }
    let members: Vec<usize> = coalition.members().collect();
    let mut best: Vec<Option<(Scalar, Vec<Vec<usize>>)>> = vec![None; max_machines];
    let mut perm = members.clone();
    for_each_permutation(&mut perm, &mut |order| {
        for m in 1..=max_machines {
            let Some(seqs) = split_balanced(order, m) else { continue };
            let cost: Scalar = seqs
                .iter()
                .flat_map(|seq| seq.iter().enumerate())
                .map(|(start, &agent)| problem.weight(agent) * (start as i64 + 1))
                .sum();
            let slot = &mut best[m - 1];
            if slot.as_ref().is_none_or(|(c, _)| cost < *c) {
                *slot = Some((cost, seqs));
            }
        }
    });
    best.into_iter()
        .map(|entry| {
            let (cost, seqs) = entry.expect("every machine count admits a semi-active plan");
            Ok((cost, SchedulingPlan::from_sequences(&seqs)?))
        })
        .collect()
}

/// Exhaustive minimum of `m b + waiting` over `m = 1..=max_machines` and all
/// semi-active schedules; ties resolve to the smallest `m`.
pub fn brute_force_min_cost(
    problem: &QueueingProblem,
    coalition: Coalition,
    max_machines: usize,
) -> Result<(Scalar, SchedulingPlan)> {
    let per_m = brute_force_waiting_costs(problem, coalition, max_machines)?;
    let mut best: Option<(Scalar, SchedulingPlan)> = None;
    for (i, (waiting, plan)) in per_m.into_iter().enumerate() {
        let total = waiting + problem.machine_cost() * (i as i64 + 1);
        if best.as_ref().is_none_or(|(c, _)| total < *c) {
            best = Some((total, plan));
        }
    }
    Ok(best.expect("max_machines >= 1"))
}

/// Cuts `order` into `m` consecutive machine sequences with balanced loads
/// (the first `len % m` machines get one extra job). Machines with equal loads
/// are identical, so only splits whose first jobs increase across equal-load
/// machines are produced.
fn split_balanced(order: &[usize], m: usize) -> Option<Vec<Vec<usize>>> {
    let len = order.len();
    let (q, r) = (len / m, len % m);
    let mut seqs = Vec::with_capacity(m);
    let mut pos = 0;
    for k in 0..m {
        let load = q + usize::from(k < r);
        seqs.push(order[pos..pos + load].to_vec());
        pos += load;
    }
    let canonical = seqs.windows(2).all(|p| match (p[0].first(), p[1].first()) {
        (Some(a), Some(b)) if p[0].len() == p[1].len() => a < b,
        _ => true,
    });
    canonical.then_some(seqs)
}

/// Heap's algorithm.
pub(crate) fn for_each_permutation<T, F: FnMut(&[T])>(items: &mut [T], f: &mut F) {
    let n = items.len();
    let mut c = vec![0usize; n];
    f(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
