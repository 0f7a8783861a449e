//! Domain types shared by every solver module.
//!
//! An [`Instance`] is a sequence of `n` independent Bernoulli trials with
//! success probabilities `p_1..p_n` and a reward `R_i` paid when the player
//! selects a success at position `i`.  The remaining types hold the various
//! solution objects produced by the solvers: randomized policies, DP value
//! vectors, flows on the stop/continue digraph, and deterministic stop
//! regions.
//!
//! All indices are 1-based in documentation (matching the usual statement of
//! the problem); storage is 0-based, so `p()[0]` is `p_1`.
//!
//! Every type here is immutable after construction and safe to share across
//! threads.

use serde::Serialize;
use thiserror::Error;

/// Validation errors raised when constructing domain types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TypeError {
    #[error("instance must contain at least one observation")]
    Empty,
    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("probability p_{index} = {value} is outside (0, 1]")]
    ProbabilityOutOfRange { index: usize, value: f64 },
    #[error("reward R_{index} = {value} must be nonnegative and finite")]
    RewardInvalid { index: usize, value: f64 },
    #[error("policy entry pi_{index} = {value} is outside [0, 1]")]
    PolicyOutOfRange { index: usize, value: f64 },
    #[error("value vector entry w_{index} = {value} is not finite")]
    ValueNotFinite { index: usize, value: f64 },
    #[error("flow entry {what}_{index} = {value} is not finite")]
    FlowNotFinite {
        what: &'static str,
        index: usize,
        value: f64,
    },
}

/// Advisory flags attached to an otherwise valid instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum InstanceFlag {
    /// `p_i = 1` is accepted (the secretary problem needs `p_1 = 1`) but the
    /// problem statement assumes an open interval, and odds `r_i = p_i/q_i`
    /// do not exist at such an index.
    UnitProbability { index: usize },
}

impl std::fmt::Display for InstanceFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InstanceFlag::UnitProbability { index } => {
                write!(f, "p_{index} = 1 lies outside the open interval (0, 1); odds are undefined at this index")
            }
        }
    }
}

/// One problem instance: success probabilities and rewards.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    p: Vec<f64>,
    rewards: Vec<f64>,
}

impl Instance {
    /// Validates candidate data and builds an instance.
    ///
    /// Requirements: `p` and `rewards` have equal nonzero length, every
    /// `p_i` lies in `(0, 1]`, and every `R_i` is finite and nonnegative.
    /// `p_i = 1` is accepted; see [`Instance::flags`].
    pub fn new(p: Vec<f64>, rewards: Vec<f64>) -> Result<Self, TypeError> {
        if p.is_empty() {
            return Err(TypeError::Empty);
        }
        if rewards.len() != p.len() {
            return Err(TypeError::DimensionMismatch {
                what: "rewards",
                got: rewards.len(),
                expected: p.len(),
            });
        }
        for (i, &pi) in p.iter().enumerate() {
            if !(pi > 0.0 && pi <= 1.0) || !pi.is_finite() {
                return Err(TypeError::ProbabilityOutOfRange {
                    index: i + 1,
                    value: pi,
                });
            }
        }
        for (i, &ri) in rewards.iter().enumerate() {
            if !ri.is_finite() || ri < 0.0 {
                return Err(TypeError::RewardInvalid {
                    index: i + 1,
                    value: ri,
                });
            }
        }
        Ok(Instance { p, rewards })
    }

    /// The classical secretary problem: `p_i = 1/i`, `R_i = i/n`.
    pub fn secretary(n: usize) -> Result<Self, TypeError> {
        if n == 0 {
            return Err(TypeError::Empty);
        }
        let p = (1..=n).map(|i| 1.0 / i as f64).collect();
        let rewards = (1..=n).map(|i| i as f64 / n as f64).collect();
        Instance::new(p, rewards)
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// Success probabilities `p_1..p_n` (0-based storage).
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Rewards `R_1..R_n` (0-based storage).
    pub fn rewards(&self) -> &[f64] {
        &self.rewards
    }

    /// Failure probability `q_i = 1 - p_i`, by 0-based index.
    pub fn q_at(&self, idx: usize) -> f64 {
        1.0 - self.p[idx]
    }

    /// Odds `r_i = p_i / q_i`, by 0-based index; `None` when `q_i = 0`.
    pub fn odds_at(&self, idx: usize) -> Option<f64> {
        let q = self.q_at(idx);
        if q > 0.0 {
            Some(self.p[idx] / q)
        } else {
            None
        }
    }

    /// Advisory flags: indices with `p_i = 1`.
    pub fn flags(&self) -> Vec<InstanceFlag> {
        self.p
            .iter()
            .enumerate()
            .filter(|&(_, &pi)| pi >= 1.0)
            .map(|(i, _)| InstanceFlag::UnitProbability { index: i + 1 })
            .collect()
    }

    /// A copy with every reward multiplied by `c`.
    pub fn scale_rewards(&self, c: f64) -> Result<Self, TypeError> {
        Instance::new(self.p.clone(), self.rewards.iter().map(|r| r * c).collect())
    }
}

/// A randomized policy: `pi_i` is the probability of choosing CONT
/// (continue) upon observing a success at position `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Policy {
    pi: Vec<f64>,
}

impl Policy {
    pub fn new(pi: Vec<f64>) -> Result<Self, TypeError> {
        if pi.is_empty() {
            return Err(TypeError::Empty);
        }
        for (i, &v) in pi.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(TypeError::PolicyOutOfRange {
                    index: i + 1,
                    value: v,
                });
            }
        }
        Ok(Policy { pi })
    }

    /// Policy that continues through every success.
    pub fn all_continue(n: usize) -> Self {
        Policy { pi: vec![1.0; n] }
    }

    /// Policy that stops at the first success.
    pub fn all_stop(n: usize) -> Self {
        Policy { pi: vec![0.0; n] }
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }
}

/// DP values `w_0..w_n`: `w_i` is the optimal expected reward after
/// observing (and not selecting) position `i`.
///
/// Vectors produced by the DP solver satisfy `w_n = 0`, monotone
/// nonincreasing entries, and nonnegativity.  Construction only checks
/// shape and finiteness so that candidate vectors from other sources (an LP
/// solve, a corrupted file) can be run through the feasibility checkers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueVector {
    w: Vec<f64>,
}

impl ValueVector {
    /// Wraps `w_0..w_n`; requires at least two entries, all finite.
    pub fn new(w: Vec<f64>) -> Result<Self, TypeError> {
        if w.len() < 2 {
            return Err(TypeError::Empty);
        }
        for (i, &v) in w.iter().enumerate() {
            if !v.is_finite() {
                return Err(TypeError::ValueNotFinite { index: i, value: v });
            }
        }
        Ok(ValueVector { w })
    }

    /// Entries `w_0..w_n` (length `n + 1`).
    pub fn w(&self) -> &[f64] {
        &self.w
    }

    /// Horizon `n`.
    pub fn n(&self) -> usize {
        self.w.len() - 1
    }

    /// Optimal expected reward `w_0`.
    pub fn root(&self) -> f64 {
        self.w[0]
    }
}

/// A flow on the stop/continue digraph: `y_i` is the probability mass
/// stopped at position `i`, `z_i` the mass continuing past it.
///
/// Feasible flows satisfy `z_0 = 1`, `y_i >= 0`, conservation
/// `y_i + z_i = z_{i-1}`, and capacity `y_i <= p_i z_{i-1}`; feasibility is
/// checked by the duality module, not at construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowSolution {
    y: Vec<f64>,
    z: Vec<f64>,
}

impl FlowSolution {
    /// Wraps stop flows `y_1..y_n` and continue flows `z_0..z_n`.
    pub fn new(y: Vec<f64>, z: Vec<f64>) -> Result<Self, TypeError> {
        if y.is_empty() {
            return Err(TypeError::Empty);
        }
        if z.len() != y.len() + 1 {
            return Err(TypeError::DimensionMismatch {
                what: "z",
                got: z.len(),
                expected: y.len() + 1,
            });
        }
        for (i, &v) in y.iter().enumerate() {
            if !v.is_finite() {
                return Err(TypeError::FlowNotFinite {
                    what: "y",
                    index: i + 1,
                    value: v,
                });
            }
        }
        for (i, &v) in z.iter().enumerate() {
            if !v.is_finite() {
                return Err(TypeError::FlowNotFinite {
                    what: "z",
                    index: i,
                    value: v,
                });
            }
        }
        Ok(FlowSolution { y, z })
    }

    /// Stop flows `y_1..y_n` (0-based storage).
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Continue flows `z_0..z_n` (entry `i` is `z_i`).
    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Flow objective `sum_i R_i y_i`.
    pub fn objective(&self, inst: &Instance) -> f64 {
        self.y
            .iter()
            .zip(inst.rewards())
            .map(|(y, r)| r * y)
            .sum()
    }
}

/// Deterministic rendering of a policy: `stop[i]` means "select a success
/// at position i+1".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StopRegion {
    stop: Vec<bool>,
}

impl StopRegion {
    pub fn new(stop: Vec<bool>) -> Self {
        StopRegion { stop }
    }

    pub fn stop(&self) -> &[bool] {
        &self.stop
    }

    pub fn len(&self) -> usize {
        self.stop.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stop.is_empty()
    }

    /// The equivalent deterministic policy: `pi_i = 0` where stopping,
    /// `1` otherwise.
    pub fn to_policy(&self) -> Policy {
        Policy {
            pi: self.stop.iter().map(|&s| if s { 0.0 } else { 1.0 }).collect(),
        }
    }
}
