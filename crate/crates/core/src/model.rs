//! Problems, schedules and coalitions.
//!
//! Agents are identified by their rank in the non-increasing weight order and
//! are 0-based internally (`0` is the agent with the largest weight). Every
//! user-facing rendering is 1-based.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest agent count representable by a [`Coalition`] bitmask.
pub const MAX_AGENTS: usize = 30;

/// A set of agents stored as a bitmask (bit `i` = agent `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coalition(u32);

impl Coalition {
    pub const fn empty() -> Self {
        Coalition(0)
    }

    pub const fn from_bits(bits: u32) -> Self {
        Coalition(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// The grand coalition on `n` agents.
    pub fn grand(n: usize) -> Self {
        assert!(n <= MAX_AGENTS);
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Self {
        Coalition(1 << i)
    }

    /// Builds a coalition from 0-based agent indices.
    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Self {
        Coalition(members.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    /// Builds a coalition from 1-based agent numbers, as written in examples and files.
    pub fn of(members: &[usize]) -> Self {
        Coalition::from_members(members.iter().map(|&i| i - 1))
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub const fn with(self, i: usize) -> Self {
        Coalition(self.0 | (1 << i))
    }

    pub const fn without(self, i: usize) -> Self {
        Coalition(self.0 & !(1 << i))
    }

    pub const fn union(self, other: Self) -> Self {
        Coalition(self.0 | other.0)
    }

    pub const fn intersection(self, other: Self) -> Self {
        Coalition(self.0 & other.0)
    }

    pub const fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement within the grand coalition on `n` agents.
    pub fn complement(self, n: usize) -> Self {
        Coalition(Coalition::grand(n).0 & !self.0)
    }

    /// Members in increasing index order (non-increasing weight order).
    pub fn members(self) -> Members {
        Members(self.0)
    }

    /// All non-empty coalitions on `n` agents, in increasing bitmask order.
    pub fn all_nonempty(n: usize) -> impl Iterator<Item = Coalition> {
        (1..=Coalition::grand(n).0).map(Coalition)
    }

    /// All subsets (including the empty one) of `self`.
    pub fn subsets(self) -> impl Iterator<Item = Coalition> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(Coalition(cur))
        })
    }
}

pub struct Members(u32);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Renders as a comma-separated list of 1-based agents, e.g. `2,4,5`.
impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.members() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for Coalition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Coalition {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for Coalition {
    type Err = Error;

    /// Accepts `2,4,5` (1-based members), `{2,4,5}`, or `0b11010` (bitmask).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if let Some(bits) = t.strip_prefix("0b") {
            return u32::from_str_radix(bits, 2)
                .map(Coalition)
                .map_err(|_| Error::Parse(format!("bad coalition bitmask `{s}`")));
        }
        if t.is_empty() {
            return Ok(Coalition::empty());
        }
        let mut c = Coalition::empty();
        for part in t.split(',') {
            let k: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coalition member `{part}` in `{s}`")))?;
            if k == 0 || k > MAX_AGENTS {
                return Err(Error::Parse(format!("coalition member {k} out of range")));
            }
            c = c.with(k - 1);
        }
        Ok(c)
    }
}

/// `(N, w, b)`: agents with unit jobs, linear waiting weights, and a per-machine price.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueueingProblem {
    weights: Vec<Scalar>,
    machine_cost: Scalar,
    labels: Vec<String>,
}

impl QueueingProblem {
    /// Weights must already be sorted non-increasingly and strictly positive.
    pub fn new(weights: Vec<Scalar>, machine_cost: Scalar) -> Result<Self> {
        let labels = (1..=weights.len()).map(|i| i.to_string()).collect();
        Self::with_labels(weights, machine_cost, labels)
    }

    /// Convenience constructor for integer data.
    pub fn from_ints(weights: &[i64], machine_cost: i64) -> Result<Self> {
        Self::new(weights.iter().map(|&w| Scalar::from_int(w)).collect(), Scalar::from_int(machine_cost))
    }

    pub fn with_labels(weights: Vec<Scalar>, machine_cost: Scalar, labels: Vec<String>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidProblem("at least one agent is required".into()));
        }
        if weights.len() > MAX_AGENTS {
            return Err(Error::CapExceeded { what: "agent count", n: weights.len(), cap: MAX_AGENTS });
        }
        if labels.len() != weights.len() {
            return Err(Error::InvalidProblem("one label per agent is required".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidProblem(format!("waiting weights must be positive, got {w}")));
        }
        if weights.windows(2).any(|p| p[0] < p[1]) {
            return Err(Error::InvalidProblem("waiting weights must be sorted non-increasingly".into()));
        }
        if machine_cost.is_negative() {
            return Err(Error::InvalidProblem(format!("machine cost must be non-negative, got {machine_cost}")));
        }
        Ok(QueueingProblem { weights, machine_cost, labels })
    }

    /// Sorts labelled agents by non-increasing weight; ties keep input order.
    pub fn from_unsorted(agents: Vec<(String, Scalar)>, machine_cost: Scalar) -> Result<Self> {
        let mut agents = agents;
        agents.sort_by(|a, b| b.1.cmp(&a.1));
        let (labels, weights) = agents.into_iter().unzip();
        Self::with_labels(weights, machine_cost, labels)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Scalar {
        &self.weights[i]
    }

    pub fn machine_cost(&self) -> &Scalar {
        &self.machine_cost
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n())
    }

    /// Same agents, different machine price.
    pub fn with_machine_cost(&self, machine_cost: Scalar) -> Result<Self> {
        Self::with_labels(self.weights.clone(), machine_cost, self.labels.clone())
    }
}

/// `w^S_k`: weight of the `k`-th (1-based) member of `coalition`.
pub fn restricted_weight(problem: &QueueingProblem, coalition: Coalition, k: usize) -> Result<&Scalar> {
    let len = coalition.len();
    if k == 0 || k > len {
        return Err(Error::IndexOutOfRange { index: k, len });
    }
    let i = coalition.members().nth(k - 1).expect("k within coalition size");
    Ok(problem.weight(i))
}

/// `w^{-T}_k`: weight of the `k`-th (1-based) agent outside `coalition`.
pub fn complement_weight(problem: &QueueingProblem, coalition: Coalition, k: usize) -> Result<&Scalar> {
    restricted_weight(problem, coalition.complement(problem.n()), k)
}

/// Machine and start period of one job; both 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub machine: usize,
    pub start: usize,
}

impl Slot {
    pub const fn new(machine: usize, start: usize) -> Self {
        Slot { machine, start }
    }
}

/// A machine count together with a (machine, start time) per scheduled agent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchedulingPlan {
    machines: usize,
    assignment: BTreeMap<usize, Slot>,
}

impl SchedulingPlan {
    /// Rejects out-of-range machines and two jobs sharing a machine and period.
    pub fn new(machines: usize, assignment: BTreeMap<usize, Slot>) -> Result<Self> {
        if machines == 0 {
            return Err(Error::InvalidPlan("at least one machine is required".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for (&agent, slot) in &assignment {
            if slot.machine >= machines {
                return Err(Error::InvalidPlan(format!(
                    "agent {} assigned to machine {} of {machines}",
                    agent + 1,
                    slot.machine + 1
                )));
            }
            if !seen.insert(*slot) {
                return Err(Error::InvalidPlan(format!(
                    "two agents share machine {} at period {}",
                    slot.machine + 1,
                    slot.start
                )));
            }
        }
        Ok(SchedulingPlan { machines, assignment })
    }

    /// One sequence of agents per machine, served back to back from period 0.
    pub fn from_sequences(sequences: &[Vec<usize>]) -> Result<Self> {
        let mut assignment = BTreeMap::new();
        for (machine, seq) in sequences.iter().enumerate() {
            for (start, &agent) in seq.iter().enumerate() {
                if assignment.insert(agent, Slot::new(machine, start)).is_some() {
                    return Err(Error::InvalidPlan(format!("agent {} scheduled twice", agent + 1)));
                }
            }
        }
        Self::new(sequences.len(), assignment)
    }

    /// Like [`from_sequences`](Self::from_sequences) but with 1-based agent numbers.
    pub fn from_sequences_1based(sequences: &[Vec<usize>]) -> Result<Self> {
        let seqs: Vec<Vec<usize>> = sequences.iter().map(|s| s.iter().map(|&a| a - 1).collect()).collect();
        Self::from_sequences(&seqs)
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn assignment(&self) -> &BTreeMap<usize, Slot> {
        &self.assignment
    }

    pub fn slot(&self, agent: usize) -> Option<Slot> {
        self.assignment.get(&agent).copied()
    }

    pub fn start(&self, agent: usize) -> Option<usize> {
        self.slot(agent).map(|s| s.start)
    }

    pub fn covered(&self) -> Coalition {
        Coalition::from_members(self.assignment.keys().copied())
    }

    /// Number of machines that serve at least one job.
    pub fn used_machines(&self) -> usize {
        self.loads().iter().filter(|&&l| l > 0).count()
    }

    pub fn loads(&self) -> Vec<usize> {
        let mut loads = vec![0; self.machines];
        for slot in self.assignment.values() {
            loads[slot.machine] += 1;
        }
        loads
    }

    /// Agents per machine ordered by start time.
    pub fn sequences(&self) -> Vec<Vec<usize>> {
        let mut seqs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.machines];
        for (&agent, slot) in &self.assignment {
            seqs[slot.machine].push((slot.start, agent));
        }
        seqs.into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.into_iter().map(|(_, a)| a).collect()
            })
            .collect()
    }

    /// No machine is idle before its last job.
    pub fn is_gap_free(&self) -> bool {
        let mut starts: Vec<Vec<usize>> = vec![Vec::new(); self.machines];
        for slot in self.assignment.values() {
            starts[slot.machine].push(slot.start);
        }
        starts.into_iter().all(|mut s| {
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &t)| i == t)
        })
    }

    /// Machine loads differ by at most one.
    pub fn is_balanced(&self) -> bool {
        let loads = self.loads();
        match (loads.iter().min(), loads.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo < 2,
            _ => true,
        }
    }

    /// Renders as `[m1: 1,4,3 | m2: 2,5]` with 1-based agents.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .sequences()
            .iter()
            .enumerate()
            .map(|(k, seq)| {
                let agents: Vec<String> = seq.iter().map(|a| (a + 1).to_string()).collect();
                format!("m{}: {}", k + 1, agents.join(","))
            })
            .collect();
        format!("[{}]", parts.join(" | "))
    }
}

/// `(N, m0, sigma0, w, b)`: a queueing problem with an existing schedule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequeueingProblem {
    base: QueueingProblem,
    initial: SchedulingPlan,
}

impl RequeueingProblem {
    pub fn new(base: QueueingProblem, initial: SchedulingPlan) -> Result<Self> {
        let n = base.n();
        let m0 = initial.machines();
        if m0 > n {
            return Err(Error::InvalidProblem(format!("initial machine count {m0} exceeds agent count {n}")));
        }
        if initial.covered() != base.grand() {
            return Err(Error::InvalidProblem("initial schedule must cover every agent exactly once".into()));
        }
        if !crate::scheduling::is_semi_active(&initial) {
            return Err(Error::InvalidProblem(format!(
                "initial schedule {} is not semi-active",
                initial.render()
            )));
        }
        Ok(RequeueingProblem { base, initial })
    }

    /// Fills `machines` machines round-robin from a priority order of 0-based
    /// agents: the first `machines` agents start at period 0 on machines 1..m, etc.
    pub fn from_order(base: QueueingProblem, machines: usize, order: &[usize]) -> Result<Self> {
        if machines == 0 {
            return Err(Error::InvalidProblem("initial machine count must be at least 1".into()));
        }
        let n = base.n();
        let mut seen = vec![false; n];
        for &a in order {
            if a >= n || std::mem::replace(&mut seen[a], true) {
                return Err(Error::InvalidProblem("initial order must be a permutation of the agents".into()));
            }
        }
        if order.len() != n {
            return Err(Error::InvalidProblem("initial order must list every agent".into()));
        }
        let assignment = order
            .iter()
            .enumerate()
            .map(|(p, &a)| (a, Slot::new(p % machines, p / machines)))
            .collect();
        let initial = SchedulingPlan::new(machines, assignment)?;
        Self::new(base, initial)
    }

    /// [`from_order`](Self::from_order) with 1-based agents.
    pub fn from_order_1based(base: QueueingProblem, machines: usize, order: &[usize]) -> Result<Self> {
        if order.contains(&0) {
            return Err(Error::InvalidProblem("agents are numbered from 1".into()));
        }
        let order: Vec<usize> = order.iter().map(|&a| a - 1).collect();
        Self::from_order(base, machines, &order)
    }

    pub fn base(&self) -> &QueueingProblem {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn initial(&self) -> &SchedulingPlan {
        &self.initial
    }

    pub fn initial_machines(&self) -> usize {
        self.initial.machines()
    }

    pub fn initial_slot(&self, agent: usize) -> Slot {
        self.initial.slot(agent).expect("initial schedule covers every agent")
    }

    pub fn initial_start(&self, agent: usize) -> usize {
        self.initial_slot(agent).start
    }

    /// Same initial schedule with a different machine price.
    pub fn with_machine_cost(&self, machine_cost: Scalar) -> Result<Self> {
        Ok(RequeueingProblem { base: self.base.with_machine_cost(machine_cost)?, initial: self.initial.clone() })
    }

    /// Initial machines all of whose users belong to `coalition`.
    pub fn owned_machines(&self, coalition: Coalition) -> Vec<usize> {
        let mut owned = vec![true; self.initial_machines()];
        for (&agent, slot) in self.initial.assignment() {
            if !coalition.contains(agent) {
                owned[slot.machine] = false;
            }
        }
        owned.iter().enumerate().filter(|(_, &o)| o).map(|(k, _)| k).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> QueueingProblem {
        QueueingProblem::from_ints(&[20, 15, 10, 5], 30).unwrap()
    }

    #[test]
    fn restricted_weight_selects_by_rank() {
        let p = QueueingProblem::from_ints(&[20, 15, 13, 13, 5], 18).unwrap();
        assert_eq!(*restricted_weight(&p, Coalition::of(&[2, 4, 5]), 2).unwrap(), 13);
        assert_eq!(*restricted_weight(&p, Coalition::of(&[3]), 1).unwrap(), 13);
        assert_eq!(*restricted_weight(&example1(), Coalition::of(&[1, 3]), 2).unwrap(), 10);
    }

    #[test]
    fn restricted_weight_rejects_out_of_range() {
        let p = example1();
        assert_eq!(
            restricted_weight(&p, Coalition::of(&[1, 3]), 3),
            Err(Error::IndexOutOfRange { index: 3, len: 2 })
        );
        assert!(restricted_weight(&p, Coalition::of(&[1]), 0).is_err());
    }

    #[test]
    fn complement_weight_examples() {
        let p = example1();
        assert_eq!(*complement_weight(&p, Coalition::of(&[2, 3]), 1).unwrap(), 20);
        assert_eq!(*complement_weight(&p, Coalition::of(&[1]), 3).unwrap(), 5);
        let p3 = QueueingProblem::from_ints(&[13, 7, 6, 1], 15).unwrap();
        assert_eq!(*complement_weight(&p3, Coalition::of(&[1, 4]), 2).unwrap(), 6);
        assert!(complement_weight(&p3, Coalition::of(&[1, 4]), 3).is_err());
    }

    #[test]
    fn rejects_unsorted_or_nonpositive_weights() {
        assert!(QueueingProblem::from_ints(&[1, 2], 1).is_err());
        assert!(QueueingProblem::from_ints(&[2, 0], 1).is_err());
        assert!(QueueingProblem::from_ints(&[2, 1], -1).is_err());
        assert!(QueueingProblem::from_ints(&[], 1).is_err());
    }

    #[test]
    fn unsorted_input_is_ranked_with_stable_ties() {
        let agents = vec![
            ("a".to_string(), Scalar::from_int(5)),
            ("b".to_string(), Scalar::from_int(13)),
            ("c".to_string(), Scalar::from_int(13)),
        ];
        let p = QueueingProblem::from_unsorted(agents, Scalar::one()).unwrap();
        assert_eq!(p.labels(), ["b", "c", "a"]);
    }

    #[test]
    fn coalition_parse_and_display() {
        let c: Coalition = "2,4,5".parse().unwrap();
        assert_eq!(c, Coalition::of(&[2, 4, 5]));
        assert_eq!(c.to_string(), "2,4,5");
        assert_eq!("{1}".parse::<Coalition>().unwrap(), Coalition::singleton(0));
        assert_eq!("0b101".parse::<Coalition>().unwrap(), Coalition::of(&[1, 3]));
        assert!("0,1".parse::<Coalition>().is_err());
    }

    #[test]
    fn subsets_enumerates_power_set() {
        let c = Coalition::of(&[1, 3, 4]);
        let subs: Vec<Coalition> = c.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s.is_subset_of(c)));
    }

    #[test]
    fn plan_rejects_shared_slot() {
        let mut a = BTreeMap::new();
        a.insert(0, Slot::new(0, 0));
        a.insert(1, Slot::new(0, 0));
        assert!(matches!(SchedulingPlan::new(1, a), Err(Error::InvalidPlan(_))));
    }

    #[test]
    fn round_robin_initial_schedule() {
        let base = QueueingProblem::from_ints(&[5, 4, 3, 2, 1], 1).unwrap();
        let rq = RequeueingProblem::from_order_1based(base, 2, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(rq.initial().render(), "[m1: 1,3,5 | m2: 2,4]");
        assert_eq!(rq.initial_start(4), 2);
    }

    #[test]
    fn owned_machines_requires_all_users() {
        let base = QueueingProblem::from_ints(&[5, 4, 3, 2, 1], 1).unwrap();
        let rq = RequeueingProblem::from_order_1based(base, 2, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(rq.owned_machines(Coalition::of(&[2, 4])), vec![1]);
        assert_eq!(rq.owned_machines(Coalition::of(&[1, 3])), Vec::<usize>::new());
    }
}
