//! The JSON instance and policy file formats shared by the command-line
//! tools and the test suites.
//!
//! An instance file carries `n`, the probability array `p`, and exactly one
//! of an explicit `rewards` array or a `variant` object from which rewards
//! are generated:
//!
//! ```json
//! { "n": 3, "p": [1.0, 0.5, 0.3333333333333333], "rewards": [0.3333333333333333, 0.6666666666666666, 1.0] }
//! { "n": 4, "p": [0.5, 0.5, 0.5, 0.5], "variant": { "kind": "mth-last", "m": 2 } }
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rewards::{build_rewards, RewardError, VariantSpec};
use crate::types::{Instance, Policy, TypeError};

/// On-disk instance schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewards: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<VariantSpec>,
}

/// On-disk policy schema: continuation probabilities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolicyFile {
    pub pi: Vec<f64>,
}

/// A validated instance plus the variant it was generated from, when the
/// file said so.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub instance: Instance,
    pub variant: Option<VariantSpec>,
}

#[derive(Debug, Error)]
pub enum FileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field n = {n} does not match p length {got}")]
    WrongN { n: usize, got: usize },
    #[error("instance file must carry exactly one of `rewards` or `variant`")]
    RewardsXorVariant,
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Reward(#[from] RewardError),
}

impl InstanceFile {
    /// Validates the schema and produces the instance, generating rewards
    /// from the variant when one is given.
    pub fn load(self) -> Result<LoadedInstance, FileError> {
        if self.p.len() != self.n {
            return Err(FileError::WrongN {
                n: self.n,
                got: self.p.len(),
            });
        }
        let (rewards, variant) = match (self.rewards, self.variant) {
            (Some(r), None) => (r, None),
            (None, Some(v)) => (build_rewards(&self.p, v)?, Some(v)),
            _ => return Err(FileError::RewardsXorVariant),
        };
        Ok(LoadedInstance {
            instance: Instance::new(self.p, rewards)?,
            variant,
        })
    }

    /// Snapshot of an instance with explicit rewards.
    pub fn from_instance(inst: &Instance) -> Self {
        InstanceFile {
            n: inst.n(),
            p: inst.p().to_vec(),
            rewards: Some(inst.rewards().to_vec()),
            variant: None,
        }
    }
}

pub fn parse_instance_json(text: &str) -> Result<LoadedInstance, FileError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    file.load()
}

pub fn parse_policy_json(text: &str) -> Result<Policy, FileError> {
    let file: PolicyFile = serde_json::from_str(text)?;
    Ok(Policy::new(file.pi)?)
}
