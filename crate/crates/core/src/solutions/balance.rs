//! Core membership, exact non-emptiness with certificates, and core extent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{GameKind, GameTable};
use crate::lp::{EqualityLp, LpOutcome};
use crate::model::Coalition;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

/// Largest agent count accepted by the core solver.
pub const CORE_SOLVER_CAP: usize = 12;

/// First violated core constraint of `y`: the grand coalition when efficiency
/// fails, otherwise the first coalition (in bitmask order) whose constraint fails.
pub fn core_violation(game: &GameTable, y: &[Scalar]) -> Result<Option<Coalition>> {
    if y.len() != game.n() {
        return Err(Error::Dimension { expected: game.n(), got: y.len() });
    }
    let paid = |c: Coalition| -> Scalar { c.members().map(|i| &y[i]).sum() };
    if paid(game.grand()) != *game.grand_worth() {
        return Ok(Some(game.grand()));
    }
    Ok(game.iter().find_map(|(c, w)| {
        let ok = match game.kind() {
            GameKind::Cost => paid(c) <= *w,
            GameKind::Value => paid(c) >= *w,
        };
        (!ok).then_some(c)
    }))
}

pub fn is_in_core(game: &GameTable, y: &[Scalar]) -> Result<bool> {
    Ok(core_violation(game, y)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedCoalition {
    pub coalition: Coalition,
    pub weight: Scalar,
}

/// A family of proper coalitions covering every agent exactly `copies` times,
/// compared with `copies` times the grand coalition's worth.
///
/// It proves the core empty when `weighted_worth < grand_total` (cost games)
/// or `weighted_worth > grand_total` (value games).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedCollection {
    pub kind: GameKind,
    pub coalitions: Vec<WeightedCoalition>,
    pub copies: Scalar,
    /// `Σ weight(S) · worth(S)`
    pub weighted_worth: Scalar,
    /// `copies · worth(N)`
    pub grand_total: Scalar,
}

impl BalancedCollection {
    fn evaluate(game: &GameTable, coalitions: Vec<WeightedCoalition>, copies: Scalar) -> Self {
        let weighted_worth = coalitions.iter().map(|e| &e.weight * game.worth(e.coalition)).sum();
        let grand_total = &copies * game.grand_worth();
        BalancedCollection { kind: game.kind(), coalitions, copies, weighted_worth, grand_total }
    }

    /// Whether the weighted sum falls strictly on the wrong side of the grand total.
    pub fn contradicts(&self) -> bool {
        match self.kind {
            GameKind::Cost => self.weighted_worth < self.grand_total,
            GameKind::Value => self.weighted_worth > self.grand_total,
        }
    }

    /// Same collection with the smallest integer weights.
    pub fn integer_form(&self) -> BalancedCollection {
        let lcm = self
            .coalitions
            .iter()
            .map(|e| e.weight.denom().clone())
            .chain(std::iter::once(self.copies.denom().clone()))
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let scale = Scalar::from_bigint(lcm);
        BalancedCollection {
            kind: self.kind,
            coalitions: self
                .coalitions
                .iter()
                .map(|e| WeightedCoalition { coalition: e.coalition, weight: &e.weight * &scale })
                .collect(),
            copies: &self.copies * &scale,
            weighted_worth: &self.weighted_worth * &scale,
            grand_total: &self.grand_total * &scale,
        }
    }

    /// Recomputes coverage and both sides from `game` and checks the contradiction.
    pub fn verify(&self, game: &GameTable) -> bool {
        if self.kind != game.kind() || !self.copies.is_positive() {
            return false;
        }
        let n = game.n();
        let mut coverage = vec![Scalar::zero(); n];
        let mut lhs = Scalar::zero();
        for e in &self.coalitions {
            let c = e.coalition;
            if c.is_empty() || c == game.grand() || !c.is_subset_of(game.grand()) || !e.weight.is_positive() {
                return false;
            }
            for i in c.members() {
                coverage[i] += &e.weight;
            }
            lhs += &e.weight * game.worth(c);
        }
        let rhs = &self.copies * game.grand_worth();
        let strict = match game.kind() {
            GameKind::Cost => lhs < rhs,
            GameKind::Value => lhs > rhs,
        };
        coverage.iter().all(|c| *c == self.copies) && strict && lhs == self.weighted_worth && rhs == self.grand_total
    }
}

/// Evaluates a user-given collection: returns it with sums filled in, or an
/// error when the coverage is not uniform.
pub fn check_balanced_collection(game: &GameTable, entries: &[(Coalition, Scalar)]) -> Result<BalancedCollection> {
    let n = game.n();
    let mut coverage = vec![Scalar::zero(); n];
    for (c, w) in entries {
        if c.is_empty() || !c.is_subset_of(game.grand()) || !w.is_positive() {
            return Err(Error::InvalidProblem(format!("bad collection entry {{{c}}} with weight {w}")));
        }
        for i in c.members() {
            coverage[i] += w;
        }
    }
    let copies = coverage[0].clone();
    if let Some(i) = coverage.iter().position(|c| *c != copies) {
        return Err(Error::InvalidProblem(format!(
            "agent {} is covered {} times, agent 1 {} times",
            i + 1,
            coverage[i],
            copies
        )));
    }
    let coalitions = entries.iter().map(|(c, w)| WeightedCoalition { coalition: *c, weight: w.clone() }).collect();
    Ok(BalancedCollection::evaluate(game, coalitions, copies))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum CoreCertificate {
    Nonempty { allocation: Vec<Scalar> },
    Empty { collection: BalancedCollection },
}

impl CoreCertificate {
    pub fn is_nonempty(&self) -> bool {
        matches!(self, CoreCertificate::Nonempty { .. })
    }

    pub fn allocation(&self) -> Option<&[Scalar]> {
        match self {
            CoreCertificate::Nonempty { allocation } => Some(allocation),
            CoreCertificate::Empty { .. } => None,
        }
    }

    /// Independent re-check against the game.
    pub fn verify(&self, game: &GameTable) -> bool {
        match self {
            CoreCertificate::Nonempty { allocation } => is_in_core(game, allocation).unwrap_or(false),
            CoreCertificate::Empty { collection } => collection.verify(game),
        }
    }
}

fn check_cap(game: &GameTable) -> Result<()> {
    if game.n() > CORE_SOLVER_CAP {
        return Err(Error::CapExceeded { what: "core solver", n: game.n(), cap: CORE_SOLVER_CAP });
    }
    Ok(())
}

/// Cost-form worth: value games are negated.
fn cost_worth(game: &GameTable, c: Coalition) -> Scalar {
    match game.kind() {
        GameKind::Cost => game.worth(c).clone(),
        GameKind::Value => -game.worth(c),
    }
}

/// Decides whether the core is non-empty.
///
/// Solves `min Σ λ_S c(S)` over balanced weights `λ` on all non-empty
/// coalitions. The optimal prices form a core allocation when the optimum
/// reaches the grand coalition's worth; otherwise the optimal weights, with the
/// grand coalition removed and renormalised, undercut it.
pub fn core_nonempty(game: &GameTable) -> Result<CoreCertificate> {
    check_cap(game)?;
    let n = game.n();
    let columns: Vec<Coalition> = Coalition::all_nonempty(n).collect();
    let costs = columns.iter().map(|&c| cost_worth(game, c)).collect();
    let rows = (0..n)
        .map(|i| columns.iter().map(|c| if c.contains(i) { Scalar::one() } else { Scalar::zero() }).collect())
        .collect();
    let rhs = vec![Scalar::one(); n];
    let LpOutcome::Optimal { value, primal, dual } = EqualityLp::new(costs, rows, rhs).solve() else {
        unreachable!("singletons are feasible and weights are bounded");
    };
    let grand = cost_worth(game, game.grand());
    if value == grand {
        let allocation = match game.kind() {
            GameKind::Cost => dual,
            GameKind::Value => dual.into_iter().map(|y| -y).collect(),
        };
        return Ok(CoreCertificate::Nonempty { allocation });
    }
    debug_assert!(value < grand);
    let grand_idx = columns.len() - 1;
    let rest = Scalar::one() - &primal[grand_idx];
    let coalitions = columns
        .iter()
        .zip(&primal)
        .take(grand_idx)
        .filter(|(_, l)| l.is_positive())
        .map(|(&c, l)| WeightedCoalition { coalition: c, weight: l / &rest })
        .collect();
    let collection = BalancedCollection::evaluate(game, coalitions, Scalar::one());
    Ok(CoreCertificate::Empty { collection })
}

/// Range of each agent's share over the core, or `None` when the core is empty.
pub fn core_bounds(game: &GameTable) -> Result<Option<Vec<(Scalar, Scalar)>>> {
    check_cap(game)?;
    if !core_nonempty(game)?.is_nonempty() {
        return Ok(None);
    }
    let n = game.n();
    // dual of `min g·y  s.t. y(S) <= c(S), y(N) = c(N)`:
    // min Σ_{S≠N} λ_S c(S) - μ c(N)  s.t.  μ - Σ_{S∋j} λ_S = g_j, λ >= 0
    let proper: Vec<Coalition> = Coalition::all_nonempty(n).filter(|&c| c != game.grand()).collect();
    let grand = cost_worth(game, game.grand());
    let mut costs: Vec<Scalar> = proper.iter().map(|&c| cost_worth(game, c)).collect();
    costs.push(-&grand);
    costs.push(grand.clone());
    let rows: Vec<Vec<Scalar>> = (0..n)
        .map(|j| {
            let mut r: Vec<Scalar> =
                proper.iter().map(|c| if c.contains(j) { -Scalar::one() } else { Scalar::zero() }).collect();
            r.push(Scalar::one());
            r.push(-Scalar::one());
            r
        })
        .collect();
    let optimum = |g: Vec<Scalar>| -> Scalar {
        match EqualityLp::new(costs.clone(), rows.clone(), g).solve() {
            LpOutcome::Optimal { value, .. } => value,
            other => unreachable!("bounded when the core is non-empty: {other:?}"),
        }
    };
    let unit = |i: usize, s: i64| (0..n).map(|j| if j == i { Scalar::from_int(s) } else { Scalar::zero() }).collect();
    let bounds = (0..n)
        .map(|i| {
            let lo = -optimum(unit(i, 1));
            let hi = optimum(unit(i, -1));
            match game.kind() {
                GameKind::Cost => (lo, hi),
                GameKind::Value => (-hi, -lo),
            }
        })
        .collect();
    Ok(Some(bounds))
}

/// The core when it is a single point.
pub fn unique_core_point(game: &GameTable) -> Result<Option<Vec<Scalar>>> {
    Ok(core_bounds(game)?.and_then(|b| {
        b.iter().all(|(lo, hi)| lo == hi).then(|| b.into_iter().map(|(lo, _)| lo).collect())
    }))
}
