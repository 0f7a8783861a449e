//! Reward vectors for the problem variants, generated from the success
//! probabilities.
//!
//! Each variant's reward at position `i` has the shape
//!
//! ```text
//!     R_i = (prod_{j>i} q_j) * sum_{h in H} e_h(r_{i+1}, ..., r_n)
//! ```
//!
//! where `e_h` is the elementary symmetric polynomial of degree `h` in the
//! odds of the positions after `i`, and `H` selects the variant:
//! `{0}` for last-success, `{m-1}` for m-th-last, `{0..m-1}` for
//! any-of-last-m, and `{k-1..l-1}` for k-of-last-l.
//!
//! The vector is filled from `i = n` down to `1`, absorbing one odds value
//! into the symmetric polynomials per step, so the whole computation is
//! `O(n * max(H))` instead of the exponential subset sums the closed forms
//! suggest.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::Instance;

/// Which reward construction to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VariantSpec {
    /// Reward the last success: `R_i = prod_{j>i} q_j`.
    LastSuccess,
    /// Reward the m-th success counted from the end.
    MthLast { m: usize },
    /// Reward any of the last m successes.
    AnyOfLastM { m: usize },
    /// Reward the k-th through l-th successes counted from the end
    /// (selecting k out of the last l); requires `1 <= k <= l < n`.
    KOfLastL { k: usize, l: usize },
}

impl VariantSpec {
    /// Inclusive degree range `H` of symmetric polynomials entering the sum.
    fn degree_range(&self) -> (usize, usize) {
        match *self {
            VariantSpec::LastSuccess => (0, 0),
            VariantSpec::MthLast { m } => (m - 1, m - 1),
            VariantSpec::AnyOfLastM { m } => (0, m - 1),
            VariantSpec::KOfLastL { k, l } => (k - 1, l - 1),
        }
    }

    fn check_params(&self, n: usize) -> Result<(), RewardError> {
        match *self {
            VariantSpec::LastSuccess => Ok(()),
            VariantSpec::MthLast { m } | VariantSpec::AnyOfLastM { m } => {
                if m == 0 {
                    Err(RewardError::BadParameter {
                        reason: "m must be at least 1".into(),
                    })
                } else {
                    Ok(())
                }
            }
            VariantSpec::KOfLastL { k, l } => {
                if k == 0 || k > l {
                    Err(RewardError::BadParameter {
                        reason: format!("need 1 <= k <= l, got k={k}, l={l}"),
                    })
                } else if l >= n {
                    Err(RewardError::BadParameter {
                        reason: format!("need l < n, got l={l}, n={n}"),
                    })
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl std::fmt::Display for VariantSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            VariantSpec::LastSuccess => write!(f, "last-success"),
            VariantSpec::MthLast { m } => write!(f, "mth-last(m={m})"),
            VariantSpec::AnyOfLastM { m } => write!(f, "any-of-last-m(m={m})"),
            VariantSpec::KOfLastL { k, l } => write!(f, "k-of-last-l(k={k}, l={l})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RewardError {
    #[error("invalid variant parameter: {reason}")]
    BadParameter { reason: String },
    #[error("odds are undefined at index {index}: p_{index} = 1")]
    OddsUndefined { index: usize },
}

/// Elementary symmetric polynomials `e_0..e_max_h` of the values in `r`.
///
/// `e_h` is the sum over all h-element subsets of `r` of the product of the
/// chosen entries; `e_0 = 1` and `e_h = 0` for `h > r.len()`.  Uses the
/// one-pass recurrence `e_h <- e_h + x * e_{h-1}` (descending `h`), one
/// update sweep per entry.
pub fn elem_sym_polys(r: &[f64], max_h: usize) -> Vec<f64> {
    let mut e = vec![0.0; max_h + 1];
    e[0] = 1.0;
    for &x in r {
        for h in (1..=max_h).rev() {
            e[h] += x * e[h - 1];
        }
    }
    e
}

/// Builds the reward vector for `spec` from the probability vector `p`.
///
/// Positions `2..n` must have `p_j < 1` so that their odds exist; `p_1 = 1`
/// is fine because no reward formula looks at the odds of its own position
/// or earlier ones.
pub fn build_rewards(p: &[f64], spec: VariantSpec) -> Result<Vec<f64>, RewardError> {
    let n = p.len();
    spec.check_params(n)?;
    for (j, &pj) in p.iter().enumerate().skip(1) {
        if pj >= 1.0 {
            return Err(RewardError::OddsUndefined { index: j + 1 });
        }
    }
    let (h_lo, h_hi) = spec.degree_range();
    // Suffixes have at most n - 1 entries, so degrees beyond that are
    // identically zero and need no storage.
    let h_hi = h_hi.min(n.saturating_sub(1));

    // Running state over the suffix i+1..n: tail_q = prod q_j and
    // e[h] = e_h(odds of the suffix).
    let mut rewards = vec![0.0; n];
    let mut tail_q = 1.0;
    let mut e = vec![0.0; h_hi + 1];
    e[0] = 1.0;
    for i in (0..n).rev() {
        let sum: f64 = if h_lo > h_hi {
            0.0
        } else {
            e[h_lo..=h_hi].iter().sum()
        };
        rewards[i] = tail_q * sum;
        if i > 0 {
            // Absorb position i+1 (1-based) into the suffix state.
            let q = 1.0 - p[i];
            let odds = p[i] / q;
            for h in (1..=h_hi).rev() {
                e[h] += odds * e[h - 1];
            }
            tail_q *= q;
        }
    }
    Ok(rewards)
}

/// Convenience: builds an [`Instance`] directly from `p` and a variant.
pub fn build_instance(p: Vec<f64>, spec: VariantSpec) -> Result<Instance, BuildError> {
    let rewards = build_rewards(&p, spec)?;
    Ok(Instance::new(p, rewards)?)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Reward(#[from] RewardError),
    #[error(transparent)]
    Type(#[from] crate::types::TypeError),
}
