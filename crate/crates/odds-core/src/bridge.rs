//! Both directions of the policy/flow correspondence: every randomized
//! policy induces a feasible flow on the stop/continue digraph, and every
//! feasible flow is realized by a policy.
//!
//! Forward: `z_0 = 1`, `y_i = z_{i-1} p_i (1 - pi_i)`, `z_i = z_{i-1} - y_i`
//! (the difference form keeps conservation exact in floating point).
//! Backward: `pi_i = 1 - y_i / (p_i z_{i-1})`.

use thiserror::Error;

use crate::duality::{check_primal_feasible, FEAS_TOL};
use crate::types::{FlowSolution, Instance, Policy};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BridgeError {
    #[error("policy length {got} does not match instance n = {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("flow violates the inequality system: max residual {residual:.3e} exceeds {tol:.1e}")]
    InfeasibleFlow { residual: f64, tol: f64 },
}

/// Maps a policy to the flow it induces.  The result satisfies the flow
/// inequality system to machine precision, and its objective equals the
/// policy's expected reward.
pub fn policy_to_flow(inst: &Instance, pol: &Policy) -> Result<FlowSolution, BridgeError> {
    if pol.len() != inst.n() {
        return Err(BridgeError::LengthMismatch {
            got: pol.len(),
            expected: inst.n(),
        });
    }
    let n = inst.n();
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n + 1];
    z[0] = 1.0;
    for i in 0..n {
        y[i] = z[i] * inst.p()[i] * (1.0 - pol.pi()[i]);
        z[i + 1] = z[i] - y[i];
    }
    Ok(FlowSolution::new(y, z).expect("finite flows from finite inputs"))
}

/// Recovers the policy that realizes a feasible flow.
///
/// Requires the flow to satisfy the inequality system within
/// [`FEAS_TOL`].  Where `z_{i-1} = 0` the state is unreachable and any
/// continuation probability is payoff-equivalent; this takes `pi_i = 0`.
/// Rounding overshoot is clamped into `[0, 1]`.
pub fn flow_to_policy(inst: &Instance, flow: &FlowSolution) -> Result<Policy, BridgeError> {
    if flow.n() != inst.n() {
        return Err(BridgeError::LengthMismatch {
            got: flow.n(),
            expected: inst.n(),
        });
    }
    let residuals = check_primal_feasible(inst, flow).expect("lengths checked above");
    if !residuals.is_feasible(FEAS_TOL) {
        return Err(BridgeError::InfeasibleFlow {
            residual: residuals.max_residual(),
            tol: FEAS_TOL,
        });
    }
    let pi = (0..inst.n())
        .map(|i| {
            let z_prev = flow.z()[i];
            if z_prev <= 0.0 {
                0.0
            } else {
                (1.0 - flow.y()[i] / (inst.p()[i] * z_prev)).clamp(0.0, 1.0)
            }
        })
        .collect();
    Ok(Policy::new(pi).expect("clamped values lie in [0, 1]"))
}
