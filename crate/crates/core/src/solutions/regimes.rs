//! Classification of the machine cost axis by core status.

use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::queueing_cost_game;
use crate::model::{Coalition, QueueingProblem};
use crate::scalar::Scalar;
use crate::scheduling::{optimal_machine_count, thresholds};
use crate::solutions::balance::{core_bounds, core_nonempty, CoreCertificate, CORE_SOLVER_CAP};
use crate::solutions::theorems::theorem_bounds;

/// Largest agent count for which samples also test core uniqueness.
pub const UNIQUENESS_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Nonempty,
    Empty,
}

/// Closed-form result whose hypothesis holds at a given machine cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guarantee {
    /// Cheap machines: `min(b + w_i, 2 w_i)` is the only core point.
    CheapUnique,
    /// Cheap machines: `min(b + w_i, 2 w_i)` is a core point.
    CheapMember,
    /// Expensive machines: the reduced game is concave and shares the core.
    ReducedGame,
    /// Between `r(2)` and `Σ (i - 1) w_i`: empty core.
    EmptyBand,
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Guarantee::CheapUnique => "cheap machines, unique core point",
            Guarantee::CheapMember => "cheap machines, core point min(b+w_i, 2w_i)",
            Guarantee::ReducedGame => "reduced game concave, same core",
            Guarantee::EmptyBand => "empty band",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineCount {
    pub coalition: Coalition,
    pub machines: usize,
}

/// Analysis at one machine cost.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeSample {
    pub machine_cost: Scalar,
    pub verdict: Verdict,
    pub guarantee: Option<Guarantee>,
    /// Whether the core is a single point (absent above the uniqueness cap or when empty).
    pub unique: Option<bool>,
    /// Coalitions using more than one machine; all others use one.
    pub multi_machine: Vec<MachineCount>,
    pub certificate: CoreCertificate,
}

impl RegimeSample {
    pub fn machines(&self, coalition: Coalition) -> usize {
        self.multi_machine.iter().find(|m| m.coalition == coalition).map_or(1, |m| m.machines)
    }
}

/// A maximal run of samples sharing verdict and guarantee.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regime {
    pub lower: Scalar,
    pub lower_closed: bool,
    /// `None` for an unbounded interval.
    pub upper: Option<Scalar>,
    pub upper_closed: bool,
    pub verdict: Verdict,
    pub guarantee: Option<Guarantee>,
    pub samples: Vec<RegimeSample>,
}

impl Regime {
    pub fn contains(&self, b: &Scalar) -> bool {
        let above = if self.lower_closed { *b >= self.lower } else { *b > self.lower };
        let below = match &self.upper {
            None => true,
            Some(u) if self.upper_closed => b <= u,
            Some(u) => b < u,
        };
        above && below
    }

    pub fn interval(&self) -> String {
        let open = if self.lower_closed { '[' } else { '(' };
        match &self.upper {
            Some(u) => format!("{open}{}, {u}{}", self.lower, if self.upper_closed { ']' } else { ')' }),
            None => format!("{open}{}, inf)", self.lower),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub weights: Vec<Scalar>,
    pub breakpoints: Vec<Scalar>,
    pub regimes: Vec<Regime>,
}

impl RegimeReport {
    pub fn regime_at(&self, b: &Scalar) -> &Regime {
        self.regimes.iter().find(|r| r.contains(b)).expect("regimes partition [0, inf)")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let w: Vec<String> = self.weights.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "weights: ({})", w.join(", "));
        for r in &self.regimes {
            let verdict = match r.verdict {
                Verdict::Nonempty => "core non-empty",
                Verdict::Empty => "core empty",
            };
            let _ = write!(out, "b in {:<12} {verdict}", r.interval());
            if let Some(g) = r.guarantee {
                let _ = write!(out, " ({g})");
            }
            out.push('\n');
            let mut last: Option<String> = None;
            for s in &r.samples {
                let counts = if s.multi_machine.is_empty() {
                    "every coalition uses 1 machine".to_string()
                } else {
                    let parts: Vec<String> =
                        s.multi_machine.iter().map(|m| format!("m({{{}}})={}", m.coalition, m.machines)).collect();
                    format!("{}; others 1", parts.join(", "))
                };
                if last.as_ref() != Some(&counts) {
                    let _ = writeln!(out, "    from b = {}: {counts}", s.machine_cost);
                    last = Some(counts);
                }
            }
        }
        out
    }
}

fn guarantee_at(problem: &QueueingProblem) -> Option<Guarantee> {
    let t = theorem_bounds(problem);
    if t.empty_band {
        Some(Guarantee::EmptyBand)
    } else if t.reduced_game_applies {
        Some(Guarantee::ReducedGame)
    } else if t.cheap_allocation_unique {
        Some(Guarantee::CheapUnique)
    } else if t.cheap_allocation_in_core {
        Some(Guarantee::CheapMember)
    } else {
        None
    }
}

/// Core verdict, machine counts and guarantees at one machine cost.
pub fn analyze_machine_cost(problem: &QueueingProblem, b: &Scalar) -> Result<RegimeSample> {
    let p = problem.with_machine_cost(b.clone())?;
    let game = queueing_cost_game(&p)?;
    let certificate = core_nonempty(&game)?;
    let verdict = if certificate.is_nonempty() { Verdict::Nonempty } else { Verdict::Empty };
    let unique = match verdict {
        Verdict::Nonempty if p.n() <= UNIQUENESS_CAP => {
            let bounds = core_bounds(&game)?.expect("non-empty");
            Some(bounds.iter().all(|(lo, hi)| lo == hi))
        }
        _ => None,
    };
    let multi_machine = Coalition::all_nonempty(p.n())
        .map(|c| MachineCount { coalition: c, machines: optimal_machine_count(&p, c).expect("non-empty") })
        .filter(|m| m.machines > 1)
        .collect();
    Ok(RegimeSample { machine_cost: b.clone(), verdict, guarantee: guarantee_at(&p), unique, multi_machine, certificate })
}

/// Every machine cost where some coalition's machine count or a closed-form
/// hypothesis can change, together with 0.
pub fn breakpoints(problem: &QueueingProblem) -> Vec<Scalar> {
    let n = problem.n();
    let t = theorem_bounds(problem);
    let mut points: Vec<Scalar> = Coalition::all_nonempty(n).flat_map(|c| thresholds(problem, c)).collect();
    points.extend([Scalar::zero(), t.membership_bound, t.uniqueness_bound, t.single_machine_bound]);
    points.extend(t.two_machine_threshold);
    points.retain(|p| !p.is_negative());
    points.sort();
    points.dedup();
    points
}

/// Partitions `[0, inf)` into maximal intervals of constant core verdict and
/// guarantee, sampling each breakpoint and each gap between them.
pub fn classify_regimes(problem: &QueueingProblem) -> Result<RegimeReport> {
    let n = problem.n();
    if n > CORE_SOLVER_CAP {
        return Err(Error::CapExceeded { what: "regime classification", n, cap: CORE_SOLVER_CAP });
    }
    let points = breakpoints(problem);
    // atoms: (lower, lower_closed, upper, upper_closed, sample point)
    let mut atoms: Vec<(Scalar, bool, Option<Scalar>, bool, Scalar)> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        atoms.push((p.clone(), true, Some(p.clone()), true, p.clone()));
        match points.get(i + 1) {
            Some(q) => atoms.push((p.clone(), false, Some(q.clone()), false, Scalar::midpoint(p, q))),
            None => atoms.push((p.clone(), false, None, false, p + &Scalar::one())),
        }
    }
    let samples = atoms
        .par_iter()
        .map(|a| analyze_machine_cost(problem, &a.4))
        .collect::<Result<Vec<_>>>()?;

    let mut regimes: Vec<Regime> = Vec::new();
    for ((lower, lower_closed, upper, upper_closed, _), sample) in atoms.into_iter().zip(samples) {
        if let Some(last) = regimes.last_mut() {
            if last.verdict == sample.verdict && last.guarantee == sample.guarantee {
                last.upper = upper;
                last.upper_closed = upper_closed;
                last.samples.push(sample);
                continue;
            }
        }
        regimes.push(Regime {
            lower,
            lower_closed,
            upper,
            upper_closed,
            verdict: sample.verdict,
            guarantee: sample.guarantee,
            samples: vec![sample],
        });
    }
    Ok(RegimeReport { weights: problem.weights().to_vec(), breakpoints: points, regimes })
}
