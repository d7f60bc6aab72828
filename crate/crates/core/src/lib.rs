//! Ranks of the hat Heegaard Floer groups of `p/q` Dehn surgeries on knots
//! in the 3-sphere.
//!
//! The crate has two independent routes to the same numbers:
//!
//! * [`rank`] evaluates closed formulas in the knot's `nu`, its genus and the
//!   ranks of `H_*(A_s)`, through the counting function [`slope::phi`];
//! * [`cone`] builds the truncated mapping cone of `D_{p/q,[i]}` at the
//!   homology level as an explicit 0/1 integer matrix and reads off
//!   `rk Ker + rk Coker` by exact elimination.
//!
//! [`applications`] turns rank profiles into lower bounds on Dehn surgery
//! genera and into Cabling Conjecture obstructions, and [`sweep`] drives
//! randomized cross-checks of the two routes.

pub mod applications;
pub mod cone;
pub mod knot;
pub mod linalg;
pub mod rank;
pub mod slope;
pub mod sweep;

use thiserror::Error;

pub use knot::{parse_knot_file, KnotInvariants};
pub use rank::{rank_integer_surgery, rank_per_spinc, total_rank, RankProfile};
pub use slope::{SlopeContext, SpinC};

/// Two evaluations that must agree did not. Always an implementation bug or
/// a violated precondition, never bad user input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("internal consistency failure: {0}")]
pub struct Inconsistency(pub String);

impl Inconsistency {
    pub(crate) fn new(msg: impl Into<String>) -> Self {
        Inconsistency(msg.into())
    }
}
