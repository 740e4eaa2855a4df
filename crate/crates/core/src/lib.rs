//! Cooperative queueing games with an endogenous number of machines.

pub mod claims;
pub mod error;
pub mod games;
pub mod io;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod scalar;
pub mod scheduling;
pub mod solutions;

pub use error::{Error, Result};
pub use games::{GameKind, GameTable, RearrangementVariant};
pub use model::{Coalition, QueueingProblem, RequeueingProblem, SchedulingPlan, Slot};
pub use scalar::Scalar;
