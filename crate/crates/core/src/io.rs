//! Problem files.
//!
//! ```json
//! {"weights": [20, "15", {"label": "c", "weight": "10"}],
//!  "machine_cost": "30",
//!  "initial": {"machines": 1, "order": [1, 2, "c"]}}
//! ```
//!
//! Weights may be listed in any order; agents are renumbered by decreasing
//! weight (ties keep input order). Unlabelled agents are labelled by their
//! 1-based input position, and `order` refers to agents by label.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{QueueingProblem, RequeueingProblem};
use crate::scalar::Scalar;

#[derive(Deserialize)]
#[serde(untagged)]
enum RawAgent {
    Labeled { label: Label, weight: Scalar },
    Plain(Scalar),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Number(u64),
    Text(String),
}

impl Label {
    fn into_string(self) -> String {
        match self {
            Label::Number(v) => v.to_string(),
            Label::Text(s) => s,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    machines: usize,
    order: Vec<Label>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    weights: Vec<RawAgent>,
    machine_cost: Scalar,
    #[serde(default)]
    initial: Option<RawInitial>,
}

/// A loaded problem, with the initial schedule when the file has one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub problem: QueueingProblem,
    pub requeueing: Option<RequeueingProblem>,
}

impl ProblemFile {
    pub fn requeueing(&self) -> Result<&RequeueingProblem> {
        self.requeueing
            .as_ref()
            .ok_or_else(|| Error::InvalidProblem("this game needs an `initial` schedule in the problem file".into()))
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let agents: Vec<(String, Scalar)> = raw
        .weights
        .into_iter()
        .enumerate()
        .map(|(i, a)| match a {
            RawAgent::Plain(w) => ((i + 1).to_string(), w),
            RawAgent::Labeled { label, weight } => (label.into_string(), weight),
        })
        .collect();
    let mut seen = std::collections::HashSet::new();
    if let Some((l, _)) = agents.iter().find(|(l, _)| !seen.insert(l.clone())) {
        return Err(Error::InvalidProblem(format!("duplicate agent label `{l}`")));
    }
    let problem = QueueingProblem::from_unsorted(agents, raw.machine_cost)?;
    let requeueing = match raw.initial {
        None => None,
        Some(init) => {
            let order = init
                .order
                .into_iter()
                .map(|l| {
                    let l = l.into_string();
                    problem
                        .labels()
                        .iter()
                        .position(|x| *x == l)
                        .ok_or_else(|| Error::InvalidProblem(format!("unknown agent `{l}` in initial order")))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(RequeueingProblem::from_order(problem.clone(), init.machines, &order)?)
        }
    };
    Ok(ProblemFile { problem, requeueing })
}

pub fn load_problem(path: &std::path::Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_problem(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Coalition;

    #[test]
    fn sorts_and_keeps_labels() {
        let f = parse_problem(
            r#"{"weights": [5, {"label": "big", "weight": "20"}, 10.5, "15/2"], "machine_cost": "3/2",
                "initial": {"machines": 2, "order": ["big", 1, 3, "4"]}}"#,
        )
        .unwrap();
        let p = &f.problem;
        assert_eq!(p.labels(), ["big", "3", "4", "1"]);
        assert_eq!(p.weight(1), &Scalar::ratio(21, 2));
        assert_eq!(p.machine_cost(), &Scalar::ratio(3, 2));
        let rq = f.requeueing().unwrap();
        assert_eq!(rq.initial().render(), "[m1: 1,2 | m2: 4,3]");
        assert_eq!(rq.owned_machines(Coalition::of(&[1, 2])), vec![0]);
    }

    #[test]
    fn rejects_bad_files() {
        for bad in [
            r#"{"weights": [], "machine_cost": 1}"#,
            r#"{"weights": [1, -2], "machine_cost": 1}"#,
            r#"{"weights": [1], "machine_cost": "-1"}"#,
            r#"{"weights": [1, 2], "machine_cost": 1, "initial": {"machines": 1, "order": [1]}}"#,
            r#"{"weights": [1, 2], "machine_cost": 1, "initial": {"machines": 1, "order": [1, 7]}}"#,
            r#"{"weights": [1, {"label": "1", "weight": 2}], "machine_cost": 1}"#,
            r#"{"weights": [1], "machine_cost": "x"}"#,
            r#"{"weights": [1], "cost": 1}"#,
            "not json",
        ] {
            assert!(parse_problem(bad).is_err(), "{bad}");
        }
        assert!(parse_problem(r#"{"weights": [1], "machine_cost": 1}"#).unwrap().requeueing().is_err());
    }
}
