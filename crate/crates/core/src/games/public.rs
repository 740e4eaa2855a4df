//! Public requeueing: machines serve the whole queue in priority order, and a
//! coalition selling machines receives a share `|T|/n` of the proceeds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::queueing::QUEUEING_TABLE_CAP;
use crate::games::table::{GameKind, GameTable};
use crate::games::RearrangementVariant;
use crate::model::{Coalition, RequeueingProblem, SchedulingPlan, Slot};
use crate::scalar::{ceil_div, Scalar};

/// Serving priority induced by the initial schedule: earlier start first,
/// lower machine index first among simultaneous starts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorityOrder {
    // agents by rank, 0-based on both sides
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl PriorityOrder {
    /// From 0-based agents listed by decreasing priority.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (p, &a) in order.iter().enumerate() {
            if a >= n || rank[a] != usize::MAX {
                return Err(Error::InvalidProblem("priority order must be a permutation".into()));
            }
            rank[a] = p;
        }
        Ok(PriorityOrder { order, rank })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// `π(i)`, 1-based.
    pub fn rank(&self, agent: usize) -> usize {
        self.rank[agent] + 1
    }

    /// Agent holding 1-based rank `p`.
    pub fn agent_at(&self, p: usize) -> usize {
        self.order[p - 1]
    }

    /// Agents from highest to lowest priority.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Whether agent `i` precedes agent `j` exactly when `i < j`, i.e. the queue
    /// serves heavier agents first.
    pub fn is_identity(&self) -> bool {
        self.order.iter().enumerate().all(|(p, &a)| p == a)
    }
}

pub fn priority_order(rq: &RequeueingProblem) -> PriorityOrder {
    let mut agents: Vec<usize> = (0..rq.n()).collect();
    agents.sort_by_key(|&a| {
        let s = rq.initial_slot(a);
        (s.start, s.machine)
    });
    PriorityOrder::from_order(agents).expect("sorted permutation")
}

/// Whether serving in priority order is optimal for the waiting costs:
/// weights are non-increasing along the priority order.
pub fn is_optimal_order(rq: &RequeueingProblem) -> bool {
    let pi = priority_order(rq);
    let w = rq.base().weights();
    pi.order().windows(2).all(|p| w[p[0]] >= w[p[1]])
}

/// Start period of 1-based rank `p` on `k` public machines.
pub fn grid_start(p: usize, k: usize) -> usize {
    ceil_div(p, k) - 1
}

/// The queue in priority order spread over `k` machines: rank `p` starts at
/// `⌈p/k⌉ - 1` on machine `(p - 1) mod k`.
pub fn public_requeue_grid(pi: &PriorityOrder, k: usize) -> SchedulingPlan {
    assert!(k >= 1);
    let assignment = pi
        .order()
        .iter()
        .enumerate()
        .map(|(i, &a)| (a, Slot::new(i % k, grid_start(i + 1, k))))
        .collect();
    SchedulingPlan::new(k, assignment).expect("grid slots are distinct")
}

/// Ranks held by `coalition`, with their new occupants, after the best
/// admissible reordering of the coalition among its own ranks.
///
/// `Swaps`: members take their ranks heaviest first. `NoSwaps`: a member may not
/// overtake an outsider of higher priority, so each member keeps at least as
/// many outsiders ahead of her as before.
fn reordered_ranks(pi: &PriorityOrder, coalition: Coalition, variant: RearrangementVariant) -> Vec<(usize, usize)> {
    // member ranks ascending, each tagged with its count of outsiders ahead
    let mut slots = Vec::new();
    let mut ahead = 0;
    for (i, &a) in pi.order().iter().enumerate() {
        if coalition.contains(a) {
            slots.push((i + 1, ahead));
        } else {
            ahead += 1;
        }
    }
    match variant {
        RearrangementVariant::Swaps => {
            // members iterate heaviest first (lowest index)
            coalition.members().zip(slots).map(|(a, (p, _))| (p, a)).collect()
        }
        RearrangementVariant::NoSwaps => {
            let seg: Vec<(usize, usize)> = slots.iter().map(|&(p, s)| (pi.agent_at(p), s)).collect();
            let mut taken = vec![false; seg.len()];
            let mut out = Vec::with_capacity(seg.len());
            for &(p, slot_seg) in &slots {
                // heaviest (lowest index) available member not ahead of this slot's outsiders
                let pick = (0..seg.len())
                    .filter(|&j| !taken[j] && seg[j].1 <= slot_seg)
                    .min_by_key(|&j| seg[j].0)
                    .expect("a member always fits");
                taken[pick] = true;
                out.push((p, seg[pick].0));
            }
            out
        }
    }
}

fn grid_savings(rq: &RequeueingProblem, placed: &[(usize, usize)], k: usize) -> Scalar {
    placed
        .iter()
        .map(|&(p, a)| rq.base().weight(a) * (rq.initial_start(a) as i64 - grid_start(p, k) as i64))
        .sum()
}

/// `V̂(T, k)`: savings of `coalition` when the queue is forced onto `k` public machines.
///
/// Returns 0 when `k < m0` and the coalition does not fully own `m0 - k`
/// initial machines.
pub fn public_value_fixed(
    rq: &RequeueingProblem,
    coalition: Coalition,
    k: usize,
    variant: RearrangementVariant,
) -> Scalar {
    let pi = priority_order(rq);
    public_value_fixed_with(rq, &pi, coalition, k, variant)
}

fn public_value_fixed_with(
    rq: &RequeueingProblem,
    pi: &PriorityOrder,
    coalition: Coalition,
    k: usize,
    variant: RearrangementVariant,
) -> Scalar {
    assert!(k >= 1);
    let n = rq.n() as i64;
    let m0 = rq.initial_machines();
    let b = rq.base().machine_cost();
    let machines = if k >= m0 {
        -(b * (k - m0) as i64)
    } else {
        if rq.owned_machines(coalition).len() < m0 - k {
            return Scalar::zero();
        }
        b * Scalar::ratio(coalition.len() as i64 * (m0 - k) as i64, n)
    };
    let placed = reordered_ranks(pi, coalition, variant);
    grid_savings(rq, &placed, k) + machines
}

/// `(V̂(T,1), …, V̂(T,n))`.
pub fn public_value_profile(rq: &RequeueingProblem, coalition: Coalition, variant: RearrangementVariant) -> Vec<Scalar> {
    let pi = priority_order(rq);
    (1..=rq.n()).map(|k| public_value_fixed_with(rq, &pi, coalition, k, variant)).collect()
}

/// `V̂(T) = max_k V̂(T, k)`.
pub fn public_requeueing_value(rq: &RequeueingProblem, coalition: Coalition, variant: RearrangementVariant) -> Scalar {
    public_value_profile(rq, coalition, variant).into_iter().max().expect("n >= 1")
}

pub fn public_requeueing_game(rq: &RequeueingProblem, variant: RearrangementVariant) -> Result<GameTable> {
    let n = rq.n();
    if n > QUEUEING_TABLE_CAP {
        return Err(Error::CapExceeded { what: "public requeueing game table", n, cap: QUEUEING_TABLE_CAP });
    }
    let pi = priority_order(rq);
    Ok(GameTable::build(GameKind::Value, n, |t| {
        (1..=n).map(|k| public_value_fixed_with(rq, &pi, t, k, variant)).max().expect("n >= 1")
    }))
}

/// `V̄(S, k) = b(m0 - k) + Σ_{l∈S} (s0(l) - (⌈π(l)/k⌉ - 1)) w_l`: the public game
/// without reordering, with every sale paid in full.
pub fn relaxed_public_value(rq: &RequeueingProblem, coalition: Coalition, k: usize) -> Scalar {
    let pi = priority_order(rq);
    relaxed_with(rq, &pi, coalition, k)
}

fn relaxed_with(rq: &RequeueingProblem, pi: &PriorityOrder, coalition: Coalition, k: usize) -> Scalar {
    assert!(k >= 1);
    let delta = rq.initial_machines() as i64 - k as i64;
    let savings: Scalar = coalition
        .members()
        .map(|l| rq.base().weight(l) * (rq.initial_start(l) as i64 - grid_start(pi.rank(l), k) as i64))
        .sum();
    rq.base().machine_cost() * delta + savings
}

/// `V̄(S)` with its lowest maximizing machine count.
pub fn relaxed_public_optimum(rq: &RequeueingProblem, coalition: Coalition) -> (Scalar, usize) {
    let pi = priority_order(rq);
    relaxed_optimum_with(rq, &pi, coalition)
}

fn relaxed_optimum_with(rq: &RequeueingProblem, pi: &PriorityOrder, coalition: Coalition) -> (Scalar, usize) {
    let mut best: Option<(Scalar, usize)> = None;
    for k in 1..=rq.n() {
        let v = relaxed_with(rq, pi, coalition, k);
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, k));
        }
    }
    best.expect("n >= 1")
}

pub fn relaxed_machine_count(rq: &RequeueingProblem, coalition: Coalition) -> usize {
    relaxed_public_optimum(rq, coalition).1
}

/// Table of `V̄(S) = max_k V̄(S, k)`.
pub fn relaxed_public_game(rq: &RequeueingProblem) -> Result<GameTable> {
    let n = rq.n();
    if n > QUEUEING_TABLE_CAP {
        return Err(Error::CapExceeded { what: "relaxed public game table", n, cap: QUEUEING_TABLE_CAP });
    }
    let pi = priority_order(rq);
    Ok(GameTable::build(GameKind::Value, n, |s| relaxed_optimum_with(rq, &pi, s).0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::QueueingProblem;
    use RearrangementVariant::{NoSwaps, Swaps};

    fn example3() -> RequeueingProblem {
        let base = QueueingProblem::from_ints(&[13, 7, 6, 1], 15).unwrap();
        RequeueingProblem::from_order_1based(base, 1, &[4, 3, 2, 1]).unwrap()
    }

    #[test]
    fn priority_from_single_queue() {
        let pi = priority_order(&example3());
        assert_eq!([1, 2, 3, 4].map(|a| pi.rank(a - 1)), [4, 3, 2, 1]);
        assert!(!pi.is_identity());
    }

    #[test]
    fn priority_breaks_ties_by_machine() {
        let base = QueueingProblem::from_ints(&[5, 4, 3, 2, 1], 1).unwrap();
        let initial = SchedulingPlan::from_sequences_1based(&[vec![1, 3, 5], vec![2, 4]]).unwrap();
        let rq = RequeueingProblem::new(base, initial).unwrap();
        let pi = priority_order(&rq);
        assert!(pi.is_identity());
        assert_eq!(public_requeue_grid(&pi, 2).render(), "[m1: 1,3,5 | m2: 2,4]");
        assert!(is_optimal_order(&rq));
    }

    #[test]
    fn grid_examples() {
        let pi = priority_order(&example3());
        assert_eq!(public_requeue_grid(&pi, 2).render(), "[m1: 4,2 | m2: 3,1]");
        assert_eq!(public_requeue_grid(&pi, 1).render(), "[m1: 4,3,2,1]");
    }

    #[test]
    fn example_values_per_machine_count() {
        let rq = example3();
        let t = Coalition::of(&[1, 4]);
        let profile = public_value_profile(&rq, t, Swaps);
        assert_eq!(profile, [36, 23, 8, -6].map(Scalar::from_int));
        assert_eq!(public_requeueing_value(&rq, t, Swaps), 36);
    }

    #[test]
    fn example_game() {
        let g = public_requeueing_game(&example3(), Swaps).unwrap();
        for (members, v) in [(&[2, 4][..], 12), (&[3, 4], 5), (&[1, 2, 3], 31), (&[1, 2, 3, 4], 37)] {
            assert_eq!(*g.worth(Coalition::of(members)), v, "{members:?}");
        }
    }

    #[test]
    fn no_swaps_never_exceeds_swaps() {
        let rq = example3();
        let s = public_requeueing_game(&rq, Swaps).unwrap();
        let ns = public_requeueing_game(&rq, NoSwaps).unwrap();
        for (t, v) in ns.iter() {
            assert!(v <= s.worth(t));
            assert!(!v.is_negative());
        }
        assert_eq!(s.grand_worth(), ns.grand_worth());
        // agent 1 cannot overtake outsiders 2 and 3 without swaps; a second machine still pays off
        assert_eq!(*ns.worth(Coalition::of(&[1, 4])), 13 * 2 - 15);
    }

    #[test]
    fn sale_requires_owned_machines() {
        let base = QueueingProblem::from_ints(&[4, 3, 2], 6).unwrap();
        let rq = RequeueingProblem::from_order_1based(base, 3, &[1, 2, 3]).unwrap();
        // agent 3 owns her machine; selling it (k = 2) gets her 1/3 of 6 and delays her by one period
        assert_eq!(public_value_fixed(&rq, Coalition::of(&[3]), 2, Swaps), 2 - 2);
        // two machines must go for k = 1, but she owns only one
        assert_eq!(public_value_fixed(&rq, Coalition::of(&[3]), 1, Swaps), 0);
        assert_eq!(public_value_fixed(&rq, Coalition::of(&[2, 3]), 1, Swaps), 8 - 3 - 4);
    }

    #[test]
    fn relaxed_formula() {
        let base = QueueingProblem::from_ints(&[5, 4, 3], 1).unwrap();
        let rq = RequeueingProblem::from_order_1based(base, 1, &[1, 2, 3]).unwrap();
        assert_eq!(relaxed_public_value(&rq, Coalition::of(&[3]), 3), 4);
        for s in Coalition::all_nonempty(3) {
            assert_eq!(relaxed_public_value(&rq, s, 1), 0);
        }
        // V̄ equals V̂ on the grand coalition
        let g = relaxed_public_game(&rq).unwrap();
        assert_eq!(g.grand_worth(), &public_requeueing_value(&rq, rq.base().grand(), Swaps));
    }
}
