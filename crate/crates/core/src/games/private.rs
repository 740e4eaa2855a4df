//! Private requeueing: purchased machines serve only the buying coalition and
//! a machine sold by a coalition returns its full price.
//!
//! Plans over all agents use this machine numbering: indices `0..m0` are the
//! initial machines, indices `>= m0` are newly bought ones. An initial machine
//! left without jobs is sold. The machine count of a plan is the number of
//! machines serving at least one job.

use crate::error::{Error, Result};
use crate::games::scaled::Scaled;
use crate::games::table::{GameKind, GameTable};
use crate::games::RearrangementVariant;
use crate::model::{Coalition, RequeueingProblem, SchedulingPlan, Slot};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Default agent limit for exhaustive requeueing values.
pub const REQUEUEING_CAP: usize = 8;

/// Whether `plan` is an admissible rearrangement of the initial schedule for
/// `coalition`:
/// - every outsider stays on her initial machine;
/// - `NoSwaps`: no outsider gains a predecessor; `Swaps`: no outsider starts later;
/// - only machines whose initial users all belong to the coalition may be sold.
///
/// Plans must cover every agent and leave no machine idle before its last job.
pub fn is_admissible_private(
    rq: &RequeueingProblem,
    coalition: Coalition,
    plan: &SchedulingPlan,
    variant: RearrangementVariant,
) -> Result<bool> {
    check_plan(rq, plan)?;
    let n = rq.n();
    let m0 = rq.initial_machines();
    let outsiders: Vec<usize> = coalition.complement(n).members().collect();

    for &i in &outsiders {
        let now = plan.slot(i).expect("plan covers every agent");
        let before = rq.initial_slot(i);
        if now.machine != before.machine {
            return Ok(false);
        }
        let ok = match variant {
            RearrangementVariant::Swaps => now.start <= before.start,
            RearrangementVariant::NoSwaps => plan.assignment().iter().all(|(&l, slot)| {
                if slot.machine != now.machine || slot.start >= now.start {
                    return true;
                }
                let orig = rq.initial_slot(l);
                orig.machine == before.machine && orig.start < before.start
            }),
        };
        if !ok {
            return Ok(false);
        }
    }

    let loads = plan.loads();
    let owned = rq.owned_machines(coalition);
    for k in 0..m0 {
        let sold = loads.get(k).is_none_or(|&l| l == 0);
        if sold && !owned.contains(&k) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_plan(rq: &RequeueingProblem, plan: &SchedulingPlan) -> Result<()> {
    if plan.covered() != rq.base().grand() {
        return Err(Error::InvalidPlan("a rearrangement must place every agent".into()));
    }
    if !plan.is_gap_free() {
        return Err(Error::InvalidPlan(format!("{} leaves a machine idle before its last job", plan.render())));
    }
    Ok(())
}

/// `c_{σ0}(T) - c_σ(T) - (m - m0) b` for a rearrangement `plan`.
pub fn private_plan_value(rq: &RequeueingProblem, coalition: Coalition, plan: &SchedulingPlan) -> Result<Scalar> {
    check_plan(rq, plan)?;
    let savings: Scalar = coalition
        .members()
        .map(|a| {
            let delta = rq.initial_start(a) as i64 - plan.start(a).expect("covered") as i64;
            rq.base().weight(a) * delta
        })
        .sum();
    let extra = plan.used_machines() as i64 - rq.initial_machines() as i64;
    Ok(savings - rq.base().machine_cost() * extra)
}

#[derive(Clone, Debug)]
pub struct PrivateOptimum {
    pub value: Scalar,
    /// One optimal rearrangement (the initial schedule when nothing beats it).
    pub plan: SchedulingPlan,
}

/// `V(T)`: best savings of `coalition` over admissible rearrangements.
pub fn private_requeueing_value(
    rq: &RequeueingProblem,
    coalition: Coalition,
    variant: RearrangementVariant,
) -> Result<Scalar> {
    private_requeueing_optimum(rq, coalition, variant).map(|o| o.value)
}

pub fn private_requeueing_optimum(
    rq: &RequeueingProblem,
    coalition: Coalition,
    variant: RearrangementVariant,
) -> Result<PrivateOptimum> {
    private_optimum_with_cap(rq, coalition, variant, REQUEUEING_CAP)
}

pub fn private_optimum_with_cap(
    rq: &RequeueingProblem,
    coalition: Coalition,
    variant: RearrangementVariant,
    cap: usize,
) -> Result<PrivateOptimum> {
    if rq.n() > cap {
        return Err(Error::CapExceeded { what: "private requeueing enumeration", n: rq.n(), cap });
    }
    let scaled = Scaled::new(rq.base())?;
    Ok(Search::new(rq, &scaled, coalition, variant).run())
}

pub fn private_requeueing_game(rq: &RequeueingProblem, variant: RearrangementVariant) -> Result<GameTable> {
    private_requeueing_game_with_cap(rq, variant, REQUEUEING_CAP)
}

pub fn private_requeueing_game_with_cap(
    rq: &RequeueingProblem,
    variant: RearrangementVariant,
    cap: usize,
) -> Result<GameTable> {
    if rq.n() > cap {
        return Err(Error::CapExceeded { what: "private requeueing enumeration", n: rq.n(), cap });
    }
    let scaled = Scaled::new(rq.base())?;
    Ok(GameTable::build(GameKind::Value, rq.n(), |t| Search::new(rq, &scaled, t, variant).run().value))
}

/// An initial machine that keeps at least one outsider.
struct Occupied {
    machine: usize,
    /// (agent, initial start), in initial order
    outsiders: Vec<(usize, usize)>,
}

#[derive(Clone, Copy)]
enum Place {
    /// Occupied machine and segment (segment `j` = before outsider `j`;
    /// segment `outsiders.len()` = after all of them).
    Occupied(usize, usize),
    Empty(usize),
}

/// Exhaustive search over admissible rearrangements.
///
/// Outsiders are pinned to their machines (in initial order); coalition
/// members are placed one at a time, heaviest first, either on an occupied
/// machine or on one of the interchangeable empty machines (kept owned
/// machines and purchases alike). Members sharing a machine segment are
/// served heaviest first, which is optimal within the segment.
struct Search<'a> {
    rq: &'a RequeueingProblem,
    scaled: &'a Scaled,
    variant: RearrangementVariant,
    members: Vec<usize>,
    occupied: Vec<Occupied>,
    owned: Vec<usize>,
    /// allowed places on occupied machines, per member
    options: Vec<Vec<(usize, usize)>>,
    // search state
    on_occupied: Vec<Vec<Vec<usize>>>,
    on_empty: Vec<Vec<usize>>,
    best: Option<(i128, Vec<Place>)>,
    choice: Vec<Place>,
}

impl<'a> Search<'a> {
    fn new(rq: &'a RequeueingProblem, scaled: &'a Scaled, coalition: Coalition, variant: RearrangementVariant) -> Self {
        let n = rq.n();
        let m0 = rq.initial_machines();
        let mut by_machine: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m0];
        for i in coalition.complement(n).members() {
            let slot = rq.initial_slot(i);
            by_machine[slot.machine].push((i, slot.start));
        }
        let occupied: Vec<Occupied> = by_machine
            .into_iter()
            .enumerate()
            .filter(|(_, o)| !o.is_empty())
            .map(|(machine, mut outsiders)| {
                outsiders.sort_by_key(|&(_, s)| s);
                Occupied { machine, outsiders }
            })
            .collect();
        let members: Vec<usize> = coalition.members().collect();
        let options = members
            .iter()
            .map(|&a| {
                let home = rq.initial_slot(a);
                occupied
                    .iter()
                    .enumerate()
                    .flat_map(|(k, occ)| {
                        let last = occ.outsiders.len();
                        let first = match variant {
                            RearrangementVariant::Swaps => last,
                            RearrangementVariant::NoSwaps if occ.machine == home.machine => {
                                occ.outsiders.iter().filter(|&&(_, s)| s < home.start).count()
                            }
                            RearrangementVariant::NoSwaps => last,
                        };
                        (first..=last).map(move |seg| (k, seg))
                    })
                    .collect()
            })
            .collect();
        let on_occupied = occupied.iter().map(|o| vec![Vec::new(); o.outsiders.len() + 1]).collect();
        Search {
            rq,
            scaled,
            variant,
            owned: rq.owned_machines(coalition),
            on_empty: Vec::with_capacity(members.len()),
            choice: Vec::with_capacity(members.len()),
            members,
            occupied,
            options,
            on_occupied,
            best: None,
        }
    }

    fn run(mut self) -> PrivateOptimum {
        self.descend(0);
        let (value, choice) = self.best.take().expect("the null rearrangement is always reachable");
        let plan = self.plan_for(&choice);
        PrivateOptimum { value: self.scaled.to_scalar(value), plan }
    }

    fn descend(&mut self, pos: usize) {
        if pos == self.members.len() {
            self.evaluate();
            return;
        }
        let agent = self.members[pos];
        for idx in 0..self.options[pos].len() {
            let (k, seg) = self.options[pos][idx];
            self.on_occupied[k][seg].push(agent);
            self.choice.push(Place::Occupied(k, seg));
            self.descend(pos + 1);
            self.choice.pop();
            self.on_occupied[k][seg].pop();
        }
        let used = self.on_empty.len();
        for e in 0..=used {
            if e == used {
                self.on_empty.push(Vec::new());
            }
            self.on_empty[e].push(agent);
            self.choice.push(Place::Empty(e));
            self.descend(pos + 1);
            self.choice.pop();
            self.on_empty[e].pop();
            if e == used {
                self.on_empty.pop();
            }
        }
    }

    fn evaluate(&mut self) {
        let w = &self.scaled.weights;
        let mut value: i128 = 0;
        let mut gain = |agent: usize, start: usize| {
            value += (self.rq.initial_start(agent) as i128 - start as i128) * w[agent];
        };
        for seq in &self.on_empty {
            for (start, &a) in seq.iter().enumerate() {
                gain(a, start);
            }
        }
        for (k, occ) in self.occupied.iter().enumerate() {
            for (a, start) in occupied_starts(occ, &self.on_occupied[k], self.variant).members {
                gain(a, start);
            }
        }
        let extra = self.on_empty.len() as i128 - self.owned.len() as i128;
        value -= extra * self.scaled.machine_cost;
        if self.best.as_ref().is_none_or(|(v, _)| value > *v) {
            self.best = Some((value, self.choice.clone()));
        }
    }

    fn plan_for(&self, choice: &[Place]) -> SchedulingPlan {
        let m0 = self.rq.initial_machines();
        let mut on_occupied: Vec<Vec<Vec<usize>>> =
            self.occupied.iter().map(|o| vec![Vec::new(); o.outsiders.len() + 1]).collect();
        let mut on_empty: Vec<Vec<usize>> = Vec::new();
        for (&a, place) in self.members.iter().zip(choice) {
            match *place {
                Place::Occupied(k, seg) => on_occupied[k][seg].push(a),
                Place::Empty(e) => {
                    if e == on_empty.len() {
                        on_empty.push(Vec::new());
                    }
                    on_empty[e].push(a);
                }
            }
        }
        let mut assignment = BTreeMap::new();
        for (k, occ) in self.occupied.iter().enumerate() {
            let starts = occupied_starts(occ, &on_occupied[k], self.variant);
            for (a, s) in starts.members.into_iter().chain(starts.outsiders) {
                assignment.insert(a, Slot::new(occ.machine, s));
            }
        }
        let mut fresh = m0;
        for (e, seq) in on_empty.iter().enumerate() {
            let machine = match self.owned.get(e) {
                Some(&k) => k,
                None => {
                    fresh += 1;
                    fresh - 1
                }
            };
            for (s, &a) in seq.iter().enumerate() {
                assignment.insert(a, Slot::new(machine, s));
            }
        }
        SchedulingPlan::new(fresh.max(1), assignment).expect("search produces admissible slot sets")
    }
}

struct MachineStarts {
    members: Vec<(usize, usize)>,
    outsiders: Vec<(usize, usize)>,
}

/// Start times on an occupied machine.
///
/// `NoSwaps`: segments and outsiders alternate in initial order.
/// `Swaps`: all members sit in one list; outsiders are pushed as late as their
/// initial start allows, and members fill the remaining periods heaviest first.
fn occupied_starts(occ: &Occupied, segments: &[Vec<usize>], variant: RearrangementVariant) -> MachineStarts {
    let mut members = Vec::new();
    let mut outsiders = Vec::new();
    match variant {
        RearrangementVariant::NoSwaps => {
            let mut t = 0;
            for (j, seg) in segments.iter().enumerate() {
                for &a in seg {
                    members.push((a, t));
                    t += 1;
                }
                if let Some(&(o, _)) = occ.outsiders.get(j) {
                    outsiders.push((o, t));
                    t += 1;
                }
            }
        }
        RearrangementVariant::Swaps => {
            let list: Vec<usize> = segments.iter().flatten().copied().collect();
            let r = occ.outsiders.len();
            let len = r + list.len();
            let mut taken = vec![false; len];
            let mut latest = len;
            for &(o, s0) in occ.outsiders.iter().rev() {
                let p = s0.min(latest - 1);
                taken[p] = true;
                outsiders.push((o, p));
                latest = p;
            }
            let free = (0..len).filter(|&p| !taken[p]);
            members.extend(list.into_iter().zip(free));
        }
    }
    MachineStarts { members, outsiders }
}
