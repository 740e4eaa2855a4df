use crate::error::{Error, Result};
use crate::games::table::{GameKind, GameTable};
use crate::model::{complement_weight, Coalition, QueueingProblem};
use crate::scalar::Scalar;
use crate::scheduling::{coalition_cost, threshold};

/// Largest agent count for which full queueing cost tables are built.
pub const QUEUEING_TABLE_CAP: usize = 20;

/// `C(S) = min_k C(S, k)` for every non-empty coalition.
pub fn queueing_cost_game(problem: &QueueingProblem) -> Result<GameTable> {
    let n = problem.n();
    if n > QUEUEING_TABLE_CAP {
        return Err(Error::CapExceeded { what: "queueing game table", n, cap: QUEUEING_TABLE_CAP });
    }
    Ok(GameTable::build(GameKind::Cost, n, |s| coalition_cost(problem, s)))
}

/// `Ĉ` together with whether its guarantees apply (`b >= r^w(2)`, i.e. every
/// coalition uses a single machine).
#[derive(Clone, Debug)]
pub struct ReducedCostGame {
    pub table: GameTable,
    pub single_machine_regime: bool,
}

/// `Ĉ(T) = C(T) - sum_{i=1}^{n-|T|-1} i w^{-T}_{i+1}`.
pub fn reduced_cost_game(problem: &QueueingProblem) -> Result<ReducedCostGame> {
    let base = queueing_cost_game(problem)?;
    let n = problem.n();
    let table = GameTable::build(GameKind::Cost, n, |t| base.worth(t) - reduction(problem, t));
    let single_machine_regime = match threshold(problem, problem.grand(), 2) {
        Ok(r2) => *problem.machine_cost() >= r2,
        Err(_) => true, // n = 1
    };
    Ok(ReducedCostGame { table, single_machine_regime })
}

fn reduction(problem: &QueueingProblem, t: Coalition) -> Scalar {
    let n = problem.n();
    let terms = (n - t.len()).saturating_sub(1);
    (1..=terms)
        .map(|i| complement_weight(problem, t, i + 1).expect("rank within complement") * i as i64)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheduling::brute_force_min_cost;

    fn example1(b: i64) -> QueueingProblem {
        QueueingProblem::from_ints(&[20, 15, 10, 5], b).unwrap()
    }

    #[test]
    fn pairs_across_halves_use_one_machine() {
        let p = example1(22);
        let g = queueing_cost_game(&p).unwrap();
        for i in [1, 2] {
            for j in [3, 4] {
                let expected = Scalar::from_int(22) + p.weight(i - 1) + p.weight(j - 1) * 2;
                assert_eq!(*g.worth(Coalition::of(&[i, j])), expected);
            }
        }
    }

    #[test]
    fn singletons_and_grand() {
        let p = example1(30);
        let g = queueing_cost_game(&p).unwrap();
        for i in 0..4 {
            assert_eq!(*g.worth(Coalition::singleton(i)), p.machine_cost() + p.weight(i));
        }
        assert_eq!(*g.grand_worth(), 125);
        assert_eq!(*g.grand_worth(), brute_force_min_cost(&p, p.grand(), 4).unwrap().0);
    }

    #[test]
    fn queueing_game_is_subadditive() {
        for b in [0, 3, 12, 17, 22, 30, 40, 60] {
            let g = queueing_cost_game(&example1(b)).unwrap();
            assert_eq!(g.additivity_violation(), None, "b={b}");
        }
    }

    #[test]
    fn reduced_game_examples() {
        let p = example1(50);
        let r = reduced_cost_game(&p).unwrap();
        assert!(r.single_machine_regime);
        assert_eq!(*r.table.worth(Coalition::of(&[4])), 20);
        // |T| >= n - 1 leaves C unchanged
        let c = queueing_cost_game(&p).unwrap();
        for t in Coalition::all_nonempty(4).filter(|t| t.len() >= 3) {
            assert_eq!(r.table.worth(t), c.worth(t));
        }
        assert_eq!(*r.table.grand_worth(), 50 + 20 + 30 + 30 + 20);
    }

    #[test]
    fn reduced_game_flags_low_machine_cost() {
        assert!(!reduced_cost_game(&example1(34)).unwrap().single_machine_regime);
        assert!(reduced_cost_game(&example1(35)).unwrap().single_machine_regime);
    }

    #[test]
    fn reduced_game_marginal_identity() {
        // Ĉ(T ∪ {k}) - Ĉ(T) = sum_{i>k} w_i + k w_k for T non-empty, k outside T
        let p = QueueingProblem::from_ints(&[11, 8, 8, 5, 3, 2], 500).unwrap();
        let r = reduced_cost_game(&p).unwrap();
        let n = p.n();
        for t in Coalition::all_nonempty(n) {
            for k in t.complement(n).members() {
                let tail: Scalar = (k + 1..n).map(|i| p.weight(i).clone()).sum();
                let expected = tail + p.weight(k) * (k as i64 + 1);
                assert_eq!(r.table.worth(t.with(k)) - r.table.worth(t), expected, "T={t} k={}", k + 1);
            }
        }
    }
}
