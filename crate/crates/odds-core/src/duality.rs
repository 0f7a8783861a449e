//! Optimality certificates tying the flow LP to the DP-style dual.
//!
//! The primal side is a flow `(y, z)` for the flow formulation; the dual
//! side is a value vector `w` feasible for the minimization problem
//!
//! ```text
//!     min w_0   s.t.  w_{i-1} >= q_i w_i + p_i R_i,
//!                     w_{i-1} >= w_i,
//!                     w_n = 0.
//! ```
//!
//! A feasible pair with zero duality gap and zero complementary-slackness
//! violation certifies that both sides are optimal, which is exactly the
//! correspondence between the DP solution and the flow optimum.

use serde::Serialize;
use thiserror::Error;

use crate::types::{FlowSolution, Instance, ValueVector};

/// Feasibility tolerance required of inputs to the certificate operations.
pub const FEAS_TOL: f64 = 1e-9;
/// Complementary-slackness violation threshold (relative to `max(1, w_0)`).
pub const SLACKNESS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("flow and instance disagree on n: {got} vs {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("primal flow infeasible: max residual {residual:.3e} exceeds {tol:.1e}")]
    PrimalInfeasible { residual: f64, tol: f64 },
    #[error("dual values infeasible: max residual {residual:.3e} exceeds {tol:.1e}")]
    DualInfeasible { residual: f64, tol: f64 },
}

/// Worst-case violation of the flow inequality system, per constraint
/// family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimalResiduals {
    /// max_i |y_i + z_i - z_{i-1}|
    pub conservation: f64,
    /// max_i max(0, y_i - p_i z_{i-1})
    pub capacity: f64,
    /// |z_0 - 1|
    pub source: f64,
    /// max_i max(0, -y_i)
    pub nonnegativity: f64,
}

impl PrimalResiduals {
    pub fn max_residual(&self) -> f64 {
        self.conservation
            .max(self.capacity)
            .max(self.source)
            .max(self.nonnegativity)
    }

    pub fn is_feasible(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

/// Worst-case violation of the dual constraints, per family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualResiduals {
    /// max_i max(0, q_i w_i + p_i R_i - w_{i-1})
    pub stop: f64,
    /// max_i max(0, w_i - w_{i-1})
    pub monotonicity: f64,
    /// |w_n|
    pub terminal: f64,
}

impl DualResiduals {
    pub fn max_residual(&self) -> f64 {
        self.stop.max(self.monotonicity).max(self.terminal)
    }

    pub fn is_feasible(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

/// Measures how far `flow` is from satisfying the flow inequality system.
pub fn check_primal_feasible(
    inst: &Instance,
    flow: &FlowSolution,
) -> Result<PrimalResiduals, CertifyError> {
    if flow.n() != inst.n() {
        return Err(CertifyError::LengthMismatch {
            got: flow.n(),
            expected: inst.n(),
        });
    }
    let (y, z) = (flow.y(), flow.z());
    let mut res = PrimalResiduals {
        conservation: 0.0,
        capacity: 0.0,
        source: (z[0] - 1.0).abs(),
        nonnegativity: 0.0,
    };
    for i in 0..inst.n() {
        res.conservation = res.conservation.max((y[i] + z[i + 1] - z[i]).abs());
        res.capacity = res.capacity.max(y[i] - inst.p()[i] * z[i]);
        res.nonnegativity = res.nonnegativity.max(-y[i]);
    }
    res.capacity = res.capacity.max(0.0);
    res.nonnegativity = res.nonnegativity.max(0.0);
    Ok(res)
}

/// Measures how far `w` is from dual feasibility.
pub fn check_dual_feasible(
    inst: &Instance,
    w: &ValueVector,
) -> Result<DualResiduals, CertifyError> {
    if w.n() != inst.n() {
        return Err(CertifyError::LengthMismatch {
            got: w.n(),
            expected: inst.n(),
        });
    }
    let v = w.w();
    let mut res = DualResiduals {
        stop: 0.0,
        monotonicity: 0.0,
        terminal: v[inst.n()].abs(),
    };
    for i in 1..=inst.n() {
        let stop = inst.q_at(i - 1) * v[i] + inst.p()[i - 1] * inst.rewards()[i - 1];
        res.stop = res.stop.max(stop - v[i - 1]);
        res.monotonicity = res.monotonicity.max(v[i] - v[i - 1]);
    }
    res.stop = res.stop.max(0.0);
    res.monotonicity = res.monotonicity.max(0.0);
    Ok(res)
}

/// Duality gap `w_0 - sum_i R_i y_i` of a feasible pair.
///
/// Weak duality keeps this above `-FEAS_TOL`; a gap below
/// [`SLACKNESS_TOL`] certifies joint optimality.
pub fn duality_gap(
    inst: &Instance,
    flow: &FlowSolution,
    w: &ValueVector,
) -> Result<f64, CertifyError> {
    require_feasible_pair(inst, flow, w)?;
    Ok(w.root() - flow.objective(inst))
}

/// One index's complementary-slackness products.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlacknessEntry {
    /// 1-based position.
    pub index: usize,
    /// `y_i * (w_{i-1} - q_i w_i - p_i R_i)`, scaled by `max(1, w_0)`;
    /// positive stop flow must have a binding stop constraint.
    pub stop_violation: f64,
    /// `(p_i z_{i-1} - y_i) * (w_{i-1} - w_i)`, scaled by `max(1, w_0)`;
    /// capacity slack must kill the continue multiplier `alpha_i`.
    pub capacity_violation: f64,
}

/// Complementary-slackness report for a feasible primal/dual pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlacknessReport {
    pub tolerance: f64,
    /// Every index whose violation exceeds the tolerance.
    pub violations: Vec<SlacknessEntry>,
    pub max_violation: f64,
}

impl SlacknessReport {
    pub fn is_satisfied(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks both complementary-slackness families at [`SLACKNESS_TOL`],
/// measured relative to `max(1, w_0)` so thresholds stay meaningful across
/// reward magnitudes.
pub fn complementary_slackness(
    inst: &Instance,
    flow: &FlowSolution,
    w: &ValueVector,
) -> Result<SlacknessReport, CertifyError> {
    require_feasible_pair(inst, flow, w)?;
    let scale = w.root().abs().max(1.0);
    let v = w.w();
    let (y, z) = (flow.y(), flow.z());
    let mut report = SlacknessReport {
        tolerance: SLACKNESS_TOL,
        violations: Vec::new(),
        max_violation: 0.0,
    };
    for i in 1..=inst.n() {
        let p = inst.p()[i - 1];
        let stop_slack = (v[i - 1] - inst.q_at(i - 1) * v[i] - p * inst.rewards()[i - 1]).max(0.0);
        let cap_slack = (p * z[i - 1] - y[i - 1]).max(0.0);
        let alpha = (v[i - 1] - v[i]).max(0.0);
        let entry = SlacknessEntry {
            index: i,
            stop_violation: y[i - 1].max(0.0) * stop_slack / scale,
            capacity_violation: cap_slack * alpha / scale,
        };
        let worst = entry.stop_violation.max(entry.capacity_violation);
        report.max_violation = report.max_violation.max(worst);
        if worst > SLACKNESS_TOL {
            report.violations.push(entry);
        }
    }
    Ok(report)
}

/// The eliminated dual variables `alpha_i = w_{i-1} - w_i`.
pub fn dual_auxiliary(w: &ValueVector) -> Vec<f64> {
    w.w().windows(2).map(|pair| pair[0] - pair[1]).collect()
}

fn require_feasible_pair(
    inst: &Instance,
    flow: &FlowSolution,
    w: &ValueVector,
) -> Result<(), CertifyError> {
    let primal = check_primal_feasible(inst, flow)?;
    if !primal.is_feasible(FEAS_TOL) {
        return Err(CertifyError::PrimalInfeasible {
            residual: primal.max_residual(),
            tol: FEAS_TOL,
        });
    }
    let dual = check_dual_feasible(inst, w)?;
    if !dual.is_feasible(FEAS_TOL) {
        return Err(CertifyError::DualInfeasible {
            residual: dual.max_residual(),
            tol: FEAS_TOL,
        });
    }
    Ok(())
}
