//! Exact two-phase simplex over rationals.
//!
//! Problems are given in equality form `min c·x  s.t.  A x = b, x >= 0`. The
//! solver uses Bland's rule, so it terminates on degenerate problems, and
//! reports the dual prices `y = c_B B^{-1}` of the optimal basis.

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityLp {
    pub costs: Vec<Scalar>,
    /// Row-major constraint matrix, one row per equation.
    pub rows: Vec<Vec<Scalar>>,
    pub rhs: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Scalar,
        primal: Vec<Scalar>,
        /// One price per equation; `y·A <= c` componentwise and `y·b = value`.
        dual: Vec<Scalar>,
    },
    /// `y·A <= 0` and `y·b > 0`: no nonnegative `x` satisfies `A x = b`.
    Infeasible { farkas: Vec<Scalar> },
    Unbounded,
}

struct Tableau {
    // m rows over `vars + m` columns; the last m columns are artificials
    body: Vec<Vec<Scalar>>,
    rhs: Vec<Scalar>,
    basis: Vec<usize>,
    vars: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.vars + self.body.len()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.body[row][col].clone();
        if p != 1 {
            let inv = p.recip();
            for v in self.body[row].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
            self.rhs[row] = &self.rhs[row] * &inv;
        }
        let pivot_row = self.body[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.body.len() {
            if r == row || self.body[r][col].is_zero() {
                continue;
            }
            let f = self.body[r][col].clone();
            for (v, pv) in self.body[r].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &(&f * pv);
                }
            }
            self.rhs[r] = &self.rhs[r] - &(&f * &pivot_rhs);
        }
        self.basis[row] = col;
    }

    /// Reduced costs `c_j - c_B B^{-1} A_j` for every column, and `c_B B^{-1} b`.
    fn reduced(&self, cost: &dyn Fn(usize) -> Scalar) -> (Vec<Scalar>, Scalar) {
        let cb: Vec<Scalar> = self.basis.iter().map(|&j| cost(j)).collect();
        let d = (0..self.width())
            .map(|j| {
                let mut v = cost(j);
                for (r, c) in cb.iter().enumerate() {
                    if !c.is_zero() && !self.body[r][j].is_zero() {
                        v -= c * &self.body[r][j];
                    }
                }
                v
            })
            .collect();
        let z = cb.iter().zip(&self.rhs).map(|(c, b)| c * b).sum();
        (d, z)
    }

    /// Runs Bland-rule pivots until optimal (`true`) or unbounded (`false`).
    fn optimize(&mut self, cost: &dyn Fn(usize) -> Scalar, allowed: usize) -> bool {
        loop {
            let (d, _) = self.reduced(cost);
            let Some(col) = (0..allowed).find(|&j| d[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(Scalar, usize)> = None;
            for r in 0..self.body.len() {
                let a = &self.body[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((q, br)) => ratio < *q || (ratio == *q && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((ratio, r));
                }
            }
            match best {
                Some((_, row)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

impl EqualityLp {
    pub fn new(costs: Vec<Scalar>, rows: Vec<Vec<Scalar>>, rhs: Vec<Scalar>) -> Self {
        assert_eq!(rows.len(), rhs.len());
        assert!(rows.iter().all(|r| r.len() == costs.len()));
        EqualityLp { costs, rows, rhs }
    }

    pub fn solve(&self) -> LpOutcome {
        let m = self.rows.len();
        let vars = self.costs.len();
        // flip rows so that every right-hand side is nonnegative
        let sign: Vec<bool> = self.rhs.iter().map(|b| b.is_negative()).collect();
        let body = self
            .rows
            .iter()
            .zip(&sign)
            .enumerate()
            .map(|(i, (row, &neg))| {
                let mut out: Vec<Scalar> = row.iter().map(|v| if neg { -v } else { v.clone() }).collect();
                out.extend((0..m).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }));
                out
            })
            .collect();
        let rhs = self.rhs.iter().map(|b| b.abs()).collect();
        let mut t = Tableau { body, rhs, basis: (vars..vars + m).collect(), vars };

        let phase1 = |j: usize| if j >= vars { Scalar::one() } else { Scalar::zero() };
        t.optimize(&phase1, vars);
        let (d1, infeasibility) = t.reduced(&phase1);
        let unflip = |v: Scalar, i: usize| if sign[i] { -v } else { v };
        if infeasibility.is_positive() {
            // phase-one prices y' = 1 - d_art satisfy y'A <= 0 and y'b > 0
            let farkas = (0..m).map(|i| unflip(Scalar::one() - &d1[vars + i], i)).collect();
            return LpOutcome::Infeasible { farkas };
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..m {
            if t.basis[r] >= vars {
                if let Some(col) = (0..vars).find(|&j| !t.body[r][j].is_zero()) {
                    t.pivot(r, col);
                }
            }
        }

        let phase2 = |j: usize| if j < vars { self.costs[j].clone() } else { Scalar::zero() };
        if !t.optimize(&phase2, vars) {
            return LpOutcome::Unbounded;
        }
        let (d2, value) = t.reduced(&phase2);
        let mut primal = vec![Scalar::zero(); vars];
        for (r, &j) in t.basis.iter().enumerate() {
            if j < vars {
                primal[j] = t.rhs[r].clone();
            }
        }
        let dual = (0..m).map(|i| unflip(-&d2[vars + i], i)).collect();
        LpOutcome::Optimal { value, primal, dual }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn row(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| s(x)).collect()
    }

    #[test]
    fn small_optimum_with_duals() {
        // min x + 2y + 3z  s.t. x + y = 2, y + z = 3
        let lp = EqualityLp::new(row(&[1, 2, 3]), vec![row(&[1, 1, 0]), row(&[0, 1, 1])], row(&[2, 3]));
        match lp.solve() {
            LpOutcome::Optimal { value, primal, dual } => {
                assert_eq!(value, 7);
                assert_eq!(primal, row(&[0, 2, 1]));
                let yb: Scalar = dual.iter().zip(&lp.rhs).map(|(y, b)| y * b).sum();
                assert_eq!(yb, value);
                for j in 0..3 {
                    let ya: Scalar = (0..2).map(|i| &dual[i] * &lp.rows[i][j]).sum();
                    assert!(ya <= lp.costs[j]);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_and_fractions() {
        // min x + y  s.t. -2x - y = -3
        let lp = EqualityLp::new(row(&[1, 1]), vec![row(&[-2, -1])], row(&[-3]));
        match lp.solve() {
            LpOutcome::Optimal { value, primal, dual } => {
                assert_eq!(value, Scalar::ratio(3, 2));
                assert_eq!(primal, vec![Scalar::ratio(3, 2), s(0)]);
                assert_eq!(dual, vec![Scalar::ratio(-1, 2)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasibility_ray() {
        // x + y = 1 and x + y = 2
        let lp = EqualityLp::new(row(&[0, 0]), vec![row(&[1, 1]), row(&[1, 1])], row(&[1, 2]));
        match lp.solve() {
            LpOutcome::Infeasible { farkas } => {
                for j in 0..2 {
                    let ya: Scalar = (0..2).map(|i| &farkas[i] * &lp.rows[i][j]).sum();
                    assert!(!ya.is_positive());
                }
                let yb: Scalar = farkas.iter().zip(&lp.rhs).map(|(y, b)| y * b).sum();
                assert!(yb.is_positive());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded() {
        let lp = EqualityLp::new(row(&[-1, 0]), vec![row(&[1, -1])], row(&[0]));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let lp = EqualityLp::new(row(&[1, 1]), vec![row(&[1, 1]), row(&[2, 2])], row(&[1, 2]));
        assert!(matches!(lp.solve(), LpOutcome::Optimal { value, .. } if value == 1));
    }
}
