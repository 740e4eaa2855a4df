//! Integer images of a problem's weights and machine cost over a common
//! denominator, so the enumerators can work in `i128` and stay exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::model::QueueingProblem;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    pub weights: Vec<i128>,
    pub machine_cost: i128,
    denom: BigInt,
}

impl Scaled {
    pub fn new(problem: &QueueingProblem) -> Result<Self> {
        let denom = problem
            .weights()
            .iter()
            .chain(std::iter::once(problem.machine_cost()))
            .fold(BigInt::one(), |acc, s| acc.lcm(s.denom()));
        let scale = |s: &Scalar| -> Result<i128> {
            let v = s.numer() * (&denom / s.denom());
            v.to_i64().map(i128::from).ok_or_else(|| {
                Error::InvalidProblem(format!("{s} is too large for exact enumeration after scaling"))
            })
        };
        let weights = problem.weights().iter().map(scale).collect::<Result<Vec<_>>>()?;
        let machine_cost = scale(problem.machine_cost())?;
        Ok(Scaled { weights, machine_cost, denom })
    }

    pub fn to_scalar(&self, v: i128) -> Scalar {
        Scalar::from_big_ratio(BigInt::from(v), self.denom.clone())
    }
}
