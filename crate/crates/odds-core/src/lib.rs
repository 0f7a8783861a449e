//! Solvers for the odds problem of optimal stopping and its variants.
//!
//! The player watches `n` independent Bernoulli trials arrive one at a
//! time and may select at most one success; selecting a success at
//! position `i` pays `R_i`.  Reward vectors for the classical problem
//! (select the last success) and its relatives (m-th last, any of the
//! last m, k of the last l) are generated in [`rewards`].
//!
//! Three independent routes compute the optimal policy and value:
//!
//! * [`dp`] — backward induction on the recurrence
//!   `w_{i-1} = max(q_i w_i + p_i R_i, w_i)`, plus the odds-theorem
//!   threshold rule for last-success rewards;
//! * [`lp`] + [`simplex`] — a flow-formulation LP over stop/continue
//!   flows `(y, z)`, solved by an in-repo dense two-phase simplex, together
//!   with its dual in raw (P1) and reduced (P) form;
//! * [`evaluate`] — brute-force policy enumeration, exact policy
//!   evaluation, and seeded Monte Carlo simulation as ground truth.
//!
//! The DP solution and the flow optimum are a primal-dual pair; [`duality`]
//! certifies this machine-checkably via feasibility residuals, the duality
//! gap, and complementary slackness, and [`bridge`] converts between
//! policies and flows in both directions.

pub mod bridge;
pub mod dp;
pub mod duality;
pub mod evaluate;
pub mod export;
pub mod io;
pub mod lp;
pub mod rewards;
pub mod simplex;
pub mod types;

pub use types::{FlowSolution, Instance, Policy, StopRegion, ValueVector};
