//! Backward-induction solver for the DP equation
//!
//! ```text
//!     w_{i-1} = max { q_i w_i + p_i R_i,  w_i },    w_n = 0,
//! ```
//!
//! plus extraction of a deterministic optimal stop region and the
//! odds-theorem threshold rule for last-success rewards.
//!
//! Tie rule: where stopping and continuing are equally good, these solvers
//! STOP.  The odds theorem's canonical policy breaks the same tie toward
//! CONTINUE (it picks the largest optimal threshold), so stop regions may
//! differ at ties while the values agree.

use thiserror::Error;

use crate::types::{Instance, StopRegion, ValueVector};

/// Tolerance (relative to `max(1, w_0)`) at which a candidate value vector
/// is rejected as not solving the DP equation.
pub const DP_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DpError {
    #[error("value vector has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error(
        "values do not solve the DP equation: residual {residual:.3e} at w_{index} exceeds {tol:.1e}"
    )]
    NotAFixpoint {
        index: usize,
        residual: f64,
        tol: f64,
    },
    #[error("odds are undefined at index {index}: p_{index} = 1")]
    OddsUndefined { index: usize },
}

/// Solves the DP equation in one backward pass.
pub fn solve_dp(inst: &Instance) -> ValueVector {
    let n = inst.n();
    let mut w = vec![0.0; n + 1];
    for i in (1..=n).rev() {
        let stop = inst.q_at(i - 1) * w[i] + inst.p()[i - 1] * inst.rewards()[i - 1];
        w[i - 1] = stop.max(w[i]);
    }
    ValueVector::new(w).expect("backward induction yields finite values")
}

/// Largest residual of `w` against the DP recurrence, relative to
/// `max(1, w_0)`.
pub fn dp_residual(inst: &Instance, w: &ValueVector) -> f64 {
    let scale = w.root().abs().max(1.0);
    let v = w.w();
    let mut worst = v[inst.n()].abs();
    for i in 1..=inst.n() {
        let stop = inst.q_at(i - 1) * v[i] + inst.p()[i - 1] * inst.rewards()[i - 1];
        worst = worst.max((v[i - 1] - stop.max(v[i])).abs());
    }
    worst / scale
}

/// Extracts the deterministic optimal stop region from a DP solution:
/// stop at `i` iff `q_i w_i + p_i R_i >= w_i` (equivalently `R_i >= w_i`).
///
/// The input is validated against the DP equation rather than trusted,
/// because this is also applied to LP-derived value vectors.
pub fn policy_from_values(inst: &Instance, w: &ValueVector) -> Result<StopRegion, DpError> {
    if w.w().len() != inst.n() + 1 {
        return Err(DpError::LengthMismatch {
            got: w.w().len(),
            expected: inst.n() + 1,
        });
    }
    let scale = w.root().abs().max(1.0);
    let v = w.w();
    if v[inst.n()].abs() > DP_CHECK_TOL * scale {
        return Err(DpError::NotAFixpoint {
            index: inst.n(),
            residual: v[inst.n()].abs(),
            tol: DP_CHECK_TOL,
        });
    }
    for i in 1..=inst.n() {
        let stop = inst.q_at(i - 1) * v[i] + inst.p()[i - 1] * inst.rewards()[i - 1];
        let residual = (v[i - 1] - stop.max(v[i])).abs();
        if residual > DP_CHECK_TOL * scale {
            return Err(DpError::NotAFixpoint {
                index: i - 1,
                residual,
                tol: DP_CHECK_TOL,
            });
        }
    }
    let stop = (1..=inst.n())
        .map(|i| {
            let stop_value = inst.q_at(i - 1) * v[i] + inst.p()[i - 1] * inst.rewards()[i - 1];
            stop_value >= v[i]
        })
        .collect();
    Ok(StopRegion::new(stop))
}

/// The odds-theorem threshold and win probability for last-success rewards.
///
/// `s_star` is the largest index `s` with `r_s + r_{s+1} + ... + r_n >= 1`
/// (1 if even the full sum falls short), and the win probability is
/// `(prod_{j>=s*} q_j) * (sum_{j>=s*} r_j)`.  The `>= 1` comparison is an
/// exact double comparison; no tolerance is applied.  Only `p` is read;
/// rewards are ignored, so the result is meaningful for last-success
/// instances.
///
/// Returns the 1-based threshold index and the win probability.
pub fn odds_threshold(inst: &Instance) -> Result<(usize, f64), DpError> {
    let n = inst.n();
    for j in 1..n {
        if inst.p()[j] >= 1.0 {
            return Err(DpError::OddsUndefined { index: j + 1 });
        }
    }

    // Scan from the tail for the largest s >= 2 whose odds suffix reaches 1.
    let mut sum = 0.0;
    let mut prod = 1.0;
    for s in (2..=n).rev() {
        let idx = s - 1;
        sum += inst.p()[idx] / inst.q_at(idx);
        prod *= inst.q_at(idx);
        if sum >= 1.0 {
            return Ok((s, prod * sum));
        }
    }

    // s* = 1.  Written as (prod_{j>=2} q_j)(p_1 + q_1 sum_{j>=2} r_j), which
    // equals the theorem's expression when q_1 > 0 and stays finite at
    // p_1 = 1, where it degenerates to "stop at position 1, win iff no
    // later success".
    let q1 = inst.q_at(0);
    Ok((1, prod * (inst.p()[0] + q1 * sum)))
}
