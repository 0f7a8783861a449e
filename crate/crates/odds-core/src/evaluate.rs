//! Ground truth for policy values: the exact product-formula expectation,
//! exhaustive record enumeration for small `n`, brute-force search over
//! deterministic policies, and seeded Monte Carlo simulation.
//!
//! A *record* is the realized observation sequence up to and including the
//! selection point; when the player observes everything and selects
//! nothing, a final `1` is appended, so such records have length `n + 1`.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::types::{Instance, Policy, StopRegion};

/// Largest `n` accepted by [`enumerate_records`] (2^(n+1) records).
pub const MAX_ENUM_N: usize = 24;
/// Largest `n` accepted by [`brute_force_optimal`] (2^n policies).
pub const MAX_BRUTE_N: usize = 20;

/// Name of the PRNG used by [`simulate`], recorded for reproducibility.
pub const GENERATOR_NAME: &str = "chacha8";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("n = {n} too large for {what} (limit {max})")]
    TooLarge {
        what: &'static str,
        n: usize,
        max: usize,
    },
    #[error("policy length {got} does not match instance n = {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("trials must be at least 1")]
    ZeroTrials,
}

fn check_lengths(inst: &Instance, pol: &Policy) -> Result<(), EvalError> {
    if pol.len() != inst.n() {
        return Err(EvalError::LengthMismatch {
            got: pol.len(),
            expected: inst.n(),
        });
    }
    Ok(())
}

/// Exact expected reward of `pol` on `inst`:
/// `sum_i R_i * (prod_{j<i} (q_j + p_j pi_j)) * p_i (1 - pi_i)`, in `O(n)`.
pub fn expected_reward(inst: &Instance, pol: &Policy) -> Result<f64, EvalError> {
    check_lengths(inst, pol)?;
    let mut reach = 1.0;
    let mut total = 0.0;
    for i in 0..inst.n() {
        let p = inst.p()[i];
        let pi = pol.pi()[i];
        total += inst.rewards()[i] * reach * p * (1.0 - pi);
        reach *= inst.q_at(i) + p * pi;
    }
    Ok(total)
}

/// One element of the record space: the realized bits, last bit always 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    bits: Vec<bool>,
}

impl Record {
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Record length `i`; length `n + 1` means nothing was selected.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Enumerates every record with positive occurrence probability.
///
/// Records of length `i <= n` end in a selected success and carry
/// probability `(prod_{j<i} a_j) * p_i (1 - pi_i)`, where `a_j` is `q_j` for
/// a failure bit and `p_j pi_j` for a passed-over success.  Records of
/// length `n + 1` (nothing selected, final `1` appended) carry
/// `prod_{j<=n} a_j`.  Probabilities over the whole space sum to 1.
pub fn enumerate_records(
    inst: &Instance,
    pol: &Policy,
) -> Result<Vec<(Record, f64)>, EvalError> {
    check_lengths(inst, pol)?;
    let n = inst.n();
    if n > MAX_ENUM_N {
        return Err(EvalError::TooLarge {
            what: "record enumeration",
            n,
            max: MAX_ENUM_N,
        });
    }

    let pass_weight = |j: usize, bit: bool| -> f64 {
        if bit {
            inst.p()[j] * pol.pi()[j]
        } else {
            inst.q_at(j)
        }
    };

    let mut out = Vec::new();
    // Lengths 1..=n: free prefix bits, terminal selected success.
    for i in 1..=n {
        let terminal = inst.p()[i - 1] * (1.0 - pol.pi()[i - 1]);
        for mask in 0u64..(1u64 << (i - 1)) {
            let mut prob = terminal;
            let mut bits = Vec::with_capacity(i);
            for j in 0..i - 1 {
                let bit = mask >> (i - 2 - j) & 1 == 1;
                bits.push(bit);
                prob *= pass_weight(j, bit);
            }
            bits.push(true);
            if prob > 0.0 {
                out.push((Record { bits }, prob));
            }
        }
    }
    // Length n + 1: every position passed, appended 1.
    for mask in 0u64..(1u64 << n) {
        let mut prob = 1.0;
        let mut bits = Vec::with_capacity(n + 1);
        for j in 0..n {
            let bit = mask >> (n - 1 - j) & 1 == 1;
            bits.push(bit);
            prob *= pass_weight(j, bit);
        }
        bits.push(true);
        if prob > 0.0 {
            out.push((Record { bits }, prob));
        }
    }
    Ok(out)
}

/// Maximizes the exact expected reward over all `2^n` deterministic
/// policies.  Ties go to the lexicographically smallest stop vector.
pub fn brute_force_optimal(inst: &Instance) -> Result<(f64, StopRegion), EvalError> {
    let n = inst.n();
    if n > MAX_BRUTE_N {
        return Err(EvalError::TooLarge {
            what: "brute-force policy search",
            n,
            max: MAX_BRUTE_N,
        });
    }
    let mut best_value = f64::NEG_INFINITY;
    let mut best_stop = vec![false; n];
    // Masks enumerate stop vectors in lexicographic order (stop[0] is the
    // most significant bit), so keeping strict improvements returns the
    // lexicographically smallest argmax.
    for mask in 0u64..(1u64 << n) {
        let stop: Vec<bool> = (0..n).map(|i| mask >> (n - 1 - i) & 1 == 1).collect();
        let pol = StopRegion::new(stop.clone()).to_policy();
        let value = expected_reward(inst, &pol)?;
        if value > best_value {
            best_value = value;
            best_stop = stop;
        }
    }
    Ok((best_value, StopRegion::new(best_stop)))
}

/// Monte Carlo estimate of a policy's expected reward.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
    pub generator: &'static str,
    pub workers: u64,
}

/// Simulates `trials` plays of `pol` on `inst` with a seeded generator.
///
/// Trials are split across `workers` substreams of a ChaCha8 stream keyed
/// by `seed`; the run is bitwise reproducible for a fixed
/// `(inst, pol, trials, seed, workers)` tuple, and worker count is part of
/// that contract.  Policy randomization is drawn independently at each
/// reached success.
pub fn simulate(
    inst: &Instance,
    pol: &Policy,
    trials: u64,
    seed: u64,
    workers: u64,
) -> Result<SimResult, EvalError> {
    check_lengths(inst, pol)?;
    if trials == 0 {
        return Err(EvalError::ZeroTrials);
    }
    let workers = workers.max(1);
    let n = inst.n();

    // stop_counts[i] = number of trials that stopped at position i+1.
    let mut stop_counts = vec![0u64; n];
    let base = trials / workers;
    let extra = trials % workers;
    for w in 0..workers {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(w);
        let quota = base + u64::from(w < extra);
        for _ in 0..quota {
            for (count, (&p, &pi)) in stop_counts
                .iter_mut()
                .zip(inst.p().iter().zip(pol.pi()))
            {
                if rng.random_bool(p) && !rng.random_bool(pi) {
                    *count += 1;
                    break;
                }
            }
        }
    }

    let t = trials as f64;
    let mut mean = 0.0;
    let mut mean_sq = 0.0;
    for (&count, &reward) in stop_counts.iter().zip(inst.rewards()) {
        let frac = count as f64 / t;
        mean += reward * frac;
        mean_sq += reward * reward * frac;
    }
    let stderr = if trials > 1 {
        let sample_var = (mean_sq - mean * mean).max(0.0) * t / (t - 1.0);
        (sample_var / t).sqrt()
    } else {
        0.0
    };

    Ok(SimResult {
        estimate: mean,
        stderr,
        trials,
        seed,
        generator: GENERATOR_NAME,
        workers,
    })
}

/// Draws success probabilities uniformly from `[0.05, 0.95]`, the range the
/// test suites use to stay clear of the `q_i -> 0` degeneracy.
pub fn random_probabilities<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.05..=0.95)).collect()
}

/// [`random_probabilities`] from a fresh ChaCha8 stream keyed by `seed`.
pub fn seeded_probabilities(seed: u64, n: usize) -> Vec<f64> {
    random_probabilities(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

/// Draws rewards uniformly from `[0, 1]`.
pub fn random_rewards<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.0..=1.0)).collect()
}

/// Draws a policy uniformly from `[0, 1]^n`.
pub fn random_policy<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Policy {
    Policy::new((0..n).map(|_| rng.random_range(0.0..=1.0)).collect())
        .expect("sampled values lie in [0, 1]")
}

/// Seeded instance generator used by the test suites: `p` uniform in
/// `[0.05, 0.95]`, rewards either uniform or from a rotating set of
/// variants.
pub fn random_instance(seed: u64, n: usize, mode: u64) -> Instance {
    use crate::rewards::{build_rewards, VariantSpec};
    let mut rng = StdRng::seed_from_u64(seed);
    let p = random_probabilities(&mut rng, n);
    let rewards = match mode % 4 {
        0 => random_rewards(&mut rng, n),
        1 => build_rewards(&p, VariantSpec::LastSuccess).unwrap(),
        2 => {
            let m = rng.random_range(1..=n.min(4));
            build_rewards(&p, VariantSpec::AnyOfLastM { m }).unwrap()
        }
        _ => {
            if n < 2 {
                build_rewards(&p, VariantSpec::LastSuccess).unwrap()
            } else {
                let l = rng.random_range(1..=(n - 1).min(4));
                let k = rng.random_range(1..=l);
                build_rewards(&p, VariantSpec::KOfLastL { k, l }).unwrap()
            }
        }
    };
    Instance::new(p, rewards).expect("generated data is valid")
}
