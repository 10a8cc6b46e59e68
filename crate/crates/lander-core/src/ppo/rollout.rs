//! Rollout collection: per-step records for whole episodes, grouped into
//! update batches.

use super::PpoError;
use crate::env::{Env, TerminalReport};
use crate::nn::{GaussianPolicy, Matrix, RunningScaler};
use crate::seeds::substream;
use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One episode's step records plus its terminal summary. Observations are
/// kept both raw (to fold into the scaler) and scaled as the policy saw
/// them (so stored log probabilities stay consistent during the update).
#[derive(Debug, Clone)]
pub struct EpisodeRollout {
    pub episode_index: u64,
    pub seed: u64,
    pub obs_raw: Matrix,
    pub obs_scaled: Matrix,
    pub actions: Matrix,
    pub log_probs: Vec<f64>,
    pub r1: Vec<f64>,
    pub r2: Vec<f64>,
    pub report: TerminalReport,
}

impl EpisodeRollout {
    pub fn len(&self) -> usize {
        self.log_probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_probs.is_empty()
    }

    /// Undiscounted episode reward (both streams).
    pub fn total_reward(&self) -> f64 {
        self.r1.iter().sum::<f64>() + self.r2.iter().sum::<f64>()
    }
}

/// A contiguous batch of episodes feeding one update.
#[derive(Debug, Clone, Default)]
pub struct RolloutBatch {
    pub episodes: Vec<EpisodeRollout>,
}

impl RolloutBatch {
    pub fn total_steps(&self) -> usize {
        self.episodes.iter().map(|e| e.len()).sum()
    }
}

/// Run one episode with the stochastic policy. The episode seed drives the
/// environment draws and the action noise through separate substreams, so
/// episode `i` of a run is reproducible in isolation and collection order
/// does not matter.
pub fn collect_episode<E: Env>(
    env: &mut E,
    policy: &GaussianPolicy,
    scaler: &RunningScaler,
    episode_index: u64,
    seed: u64,
) -> Result<EpisodeRollout, PpoError> {
    let mut action_rng = ChaCha8Rng::seed_from_u64(substream(seed, 2));
    let mut obs_raw_rows: Vec<Vec<f64>> = Vec::new();
    let mut obs_scaled_rows: Vec<Vec<f64>> = Vec::new();
    let mut action_rows: Vec<Vec<f64>> = Vec::new();
    let mut log_probs = Vec::new();
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();

    let mut obs = env.reset(seed);
    loop {
        let scaled = scaler.apply_vec(&obs);
        let (action, logp) = policy.sample_action(&scaled, &mut action_rng)?;
        let outcome = env.step(&action)?;
        obs_raw_rows.push(obs);
        obs_scaled_rows.push(scaled);
        action_rows.push(action);
        log_probs.push(logp);
        r1.push(outcome.r1);
        r2.push(outcome.r2);
        obs = outcome.observation;
        if outcome.done {
            break;
        }
    }
    let report = env
        .terminal_report()
        .expect("episode just terminated");
    Ok(EpisodeRollout {
        episode_index,
        seed,
        obs_raw: Matrix::from_rows(&obs_raw_rows),
        obs_scaled: Matrix::from_rows(&obs_scaled_rows),
        actions: Matrix::from_rows(&action_rows),
        log_probs,
        r1,
        r2,
        report,
    })
}
