//! Clipped-surrogate policy-gradient trainer with separate discount rates
//! for terminal and shaping rewards.

mod objective;
mod returns;
mod rollout;
mod trainer;

pub use objective::{
    adapt_clip, adapt_step_multiplier, ppo_surrogate, surrogate_grad_coefs, value_loss,
};
pub use returns::{advantages, dual_discount_returns, explained_variance};
pub use rollout::{collect_episode, EpisodeRollout, RolloutBatch};
pub use trainer::{Trainer, TrainerError};

use crate::env::EnvError;
use crate::nn::NnError;
use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PpoError {
    #[error("invalid config: {0}")]
    Config(&'static str),
    #[error("reward sequences differ in length")]
    LengthMismatch,
    #[error("environment failure: {0}")]
    Env(#[from] EnvError),
    #[error("network failure: {0}")]
    Nn(#[from] NnError),
}

/// Trainer hyperparameters. Discount `gamma1` applies to the terminal
/// (landing-bonus) reward stream, `gamma2` to the dense shaping stream.
#[derive(Debug, Clone, PartialEq)]
pub struct PpoConfig {
    pub gamma1: f64,
    pub gamma2: f64,
    /// Initial clip half-width; adapted within `[clip_min, clip_max]`.
    pub clip_init: f64,
    pub clip_min: f64,
    pub clip_max: f64,
    /// Targeted KL divergence between policy updates.
    pub kl_target: f64,
    /// Remaining epochs are abandoned once KL exceeds
    /// `kl_abort_factor * kl_target`.
    pub kl_abort_factor: f64,
    pub episodes_per_batch: usize,
    /// Gradient epochs per update, for the policy and the value net each.
    pub epochs: usize,
    pub minibatch: usize,
    pub episode_budget: u64,
    pub policy_step: f64,
    pub value_step: f64,
    pub zeta_min: f64,
    pub zeta_max: f64,
}

impl Default for PpoConfig {
    fn default() -> Self {
        Self {
            gamma1: 0.996,
            gamma2: 0.95,
            clip_init: 0.2,
            clip_min: 0.01,
            clip_max: 0.5,
            kl_target: 0.001,
            kl_abort_factor: 50.0,
            episodes_per_batch: 120,
            epochs: 20,
            minibatch: 256,
            episode_budget: 300_000,
            policy_step: 1e-4,
            value_step: 1e-3,
            zeta_min: 0.1,
            zeta_max: 10.0,
        }
    }
}

impl PpoConfig {
    pub fn validate(&self) -> Result<(), PpoError> {
        if !(0.0 <= self.gamma2 && self.gamma2 <= self.gamma1 && self.gamma1 < 1.0) {
            return Err(PpoError::Config("need 0 <= gamma2 <= gamma1 < 1"));
        }
        if !(self.clip_min <= self.clip_init && self.clip_init <= self.clip_max) {
            return Err(PpoError::Config("clip bounds out of order"));
        }
        if self.kl_target <= 0.0 {
            return Err(PpoError::Config("kl_target must be positive"));
        }
        if self.episodes_per_batch == 0 || self.minibatch == 0 {
            return Err(PpoError::Config("batch sizes must be positive"));
        }
        if !(self.zeta_min > 0.0 && self.zeta_min <= self.zeta_max) {
            return Err(PpoError::Config("zeta bounds out of order"));
        }
        Ok(())
    }

    /// The value net regresses returns multiplied by this factor to keep
    /// its outputs near unity.
    pub fn value_target_scale(&self) -> f64 {
        1.0 - self.gamma2
    }
}

/// One row of the training log.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainLogEntry {
    pub update: u64,
    /// Episodes consumed so far.
    pub episodes: u64,
    /// Undiscounted per-episode reward statistics over the batch.
    pub mean_reward: f64,
    pub std_reward: f64,
    pub min_reward: f64,
    pub mean_steps: f64,
    pub kl: f64,
    pub entropy: f64,
    pub explained_variance: f64,
    pub clip_eps: f64,
    pub zeta: f64,
    /// Fraction of batch episodes that landed inside every limit.
    pub success_rate: f64,
    pub mean_fuel: f64,
    pub terminal_r_mean: f64,
    pub terminal_r_std: f64,
    pub terminal_v_mean: f64,
    pub terminal_v_std: f64,
    pub terminal_att_mean: f64,
    pub terminal_att_std: f64,
    pub terminal_omega_mean: f64,
    pub terminal_omega_std: f64,
}

/// Append-only training log.
#[derive(Debug, Clone, Default)]
pub struct TrainLog {
    pub entries: Vec<TrainLogEntry>,
}
