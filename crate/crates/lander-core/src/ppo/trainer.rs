//! The update loop: collect a batch of episodes, fit the value baseline,
//! take clipped-surrogate policy steps, and servo the clip parameter and
//! step sizes from the measured KL divergence.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;

use super::objective::{adapt_clip, adapt_step_multiplier, surrogate_grad_coefs};
use super::returns::{advantages, dual_discount_returns, explained_variance};
use super::rollout::{collect_episode, EpisodeRollout, RolloutBatch};
use super::{PpoConfig, PpoError, TrainLog, TrainLogEntry};
use crate::env::Env;
use crate::nn::{kl_approx, AdamState, Checkpoint, GaussianPolicy, Matrix, Network, RunningScaler};
use crate::seeds::{episode_seed, substream};
use alloc::string::String;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrainerError {
    #[error("ppo failure at update {update}: {source}")]
    Ppo { update: u64, source: PpoError },
    #[error("non-finite loss at update {update} ({detail})")]
    NonFinite { update: u64, detail: &'static str },
}

/// Policy-gradient trainer. Deterministic for a fixed master seed: episode
/// RNG streams are derived from the global episode index, so batches are
/// identical however rollouts are scheduled.
#[derive(Debug, Clone)]
pub struct Trainer {
    pub cfg: PpoConfig,
    policy: GaussianPolicy,
    value: Network,
    scaler: RunningScaler,
    policy_opt: AdamState,
    value_opt: AdamState,
    clip_eps: f64,
    shuffle_rng: ChaCha8Rng,
    master_seed: u64,
    episodes_collected: u64,
    updates_done: u64,
    log: TrainLog,
}

impl Trainer {
    pub fn new(obs_dim: usize, act_dim: usize, cfg: PpoConfig, master_seed: u64) -> Result<Self, PpoError> {
        cfg.validate()?;
        let mut policy_rng = ChaCha8Rng::seed_from_u64(substream(master_seed, 1000));
        let mut value_rng = ChaCha8Rng::seed_from_u64(substream(master_seed, 1001));
        let shuffle_rng = ChaCha8Rng::seed_from_u64(substream(master_seed, 1002));
        let policy = GaussianPolicy::new(obs_dim, act_dim, &mut policy_rng);
        let value = Network::value(obs_dim, &mut value_rng);
        let mut policy_opt = AdamState::new(policy.n_params(), cfg.policy_step);
        let mut value_opt = AdamState::new(value.n_params(), cfg.value_step);
        policy_opt.zeta_min = cfg.zeta_min;
        policy_opt.zeta_max = cfg.zeta_max;
        value_opt.zeta_min = cfg.zeta_min;
        value_opt.zeta_max = cfg.zeta_max;
        let clip_eps = cfg.clip_init;
        Ok(Self {
            cfg,
            policy,
            value,
            scaler: RunningScaler::new(obs_dim),
            policy_opt,
            value_opt,
            clip_eps,
            shuffle_rng,
            master_seed,
            episodes_collected: 0,
            updates_done: 0,
            log: TrainLog::default(),
        })
    }

    pub fn policy(&self) -> &GaussianPolicy {
        &self.policy
    }

    pub fn value(&self) -> &Network {
        &self.value
    }

    pub fn scaler(&self) -> &RunningScaler {
        &self.scaler
    }

    pub fn clip_eps(&self) -> f64 {
        self.clip_eps
    }

    pub fn episodes_collected(&self) -> u64 {
        self.episodes_collected
    }

    pub fn updates_done(&self) -> u64 {
        self.updates_done
    }

    pub fn log(&self) -> &TrainLog {
        &self.log
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Seed stream for a given global episode index.
    pub fn seed_for_episode(&self, index: u64) -> u64 {
        episode_seed(self.master_seed, index)
    }

    /// Index the next collected episode will carry.
    pub fn next_episode_index(&self) -> u64 {
        self.episodes_collected
    }

    /// Snapshot everything needed to rerun the agent.
    pub fn checkpoint(&self, env_kind: &str) -> Checkpoint {
        Checkpoint {
            env_kind: String::from(env_kind),
            episodes: self.episodes_collected,
            policy: self.policy.clone(),
            value: self.value.clone(),
            scaler: self.scaler.clone(),
        }
    }

    /// Collect one batch of episodes serially. Equivalent batches may be
    /// produced in parallel by calling [`collect_episode`] with the same
    /// episode indices and merging in index order.
    pub fn collect_batch<E: Env>(&self, env: &mut E) -> Result<RolloutBatch, PpoError> {
        let mut episodes = Vec::with_capacity(self.cfg.episodes_per_batch);
        for i in 0..self.cfg.episodes_per_batch as u64 {
            let index = self.episodes_collected + i;
            let seed = self.seed_for_episode(index);
            episodes.push(collect_episode(env, &self.policy, &self.scaler, index, seed)?);
        }
        Ok(RolloutBatch { episodes })
    }

    /// One full update from a collected batch.
    pub fn update(&mut self, batch: &RolloutBatch) -> Result<TrainLogEntry, TrainerError> {
        let update_index = self.updates_done;
        let entry = self
            .update_inner(batch)
            .map_err(|source| TrainerError::Ppo { update: update_index, source })?;
        self.log.entries.push(entry.clone());
        Ok(entry)
    }

    fn update_inner(&mut self, batch: &RolloutBatch) -> Result<TrainLogEntry, PpoError> {
        let n = batch.total_steps();
        let obs_dim = self.policy.obs_dim();
        let act_dim = self.policy.act_dim();

        // Flatten the batch. Stored scaled observations keep the stored
        // log probabilities valid; raw observations are folded into the
        // scaler afterwards for the next batch.
        let mut obs_scaled = Matrix::zeros(n, obs_dim);
        let mut obs_raw = Matrix::zeros(n, obs_dim);
        let mut actions = Matrix::zeros(n, act_dim);
        let mut old_logp = Vec::with_capacity(n);
        let mut targets = Vec::with_capacity(n);
        let scale = self.cfg.value_target_scale();
        let mut row = 0;
        for ep in &batch.episodes {
            let g = dual_discount_returns(&ep.r1, &ep.r2, self.cfg.gamma1, self.cfg.gamma2)?;
            for k in 0..ep.len() {
                obs_scaled.row_mut(row).copy_from_slice(ep.obs_scaled.row(k));
                obs_raw.row_mut(row).copy_from_slice(ep.obs_raw.row(k));
                actions.row_mut(row).copy_from_slice(ep.actions.row(k));
                old_logp.push(ep.log_probs[k]);
                targets.push(g[k] * scale);
                row += 1;
            }
        }

        // Value baseline predictions before this update.
        let value_cache = self.value.forward_batch(&obs_scaled)?;
        let predictions: Vec<f64> = value_cache.output().data().to_vec();
        let ev = explained_variance(&targets, &predictions);
        let adv = advantages(&targets, &predictions)?;

        // Policy epochs with per-epoch KL measurement and divergence guard.
        let mut kl = 0.0;
        let mut indices: Vec<usize> = (0..n).collect();
        let mut policy_params = self.policy.flatten_params();
        for _epoch in 0..self.cfg.epochs {
            indices.shuffle(&mut self.shuffle_rng);
            for mb in indices.chunks(self.cfg.minibatch) {
                let mb_obs = obs_scaled.select_rows(mb);
                let mb_actions = actions.select_rows(mb);
                let mb_old: Vec<f64> = mb.iter().map(|&i| old_logp[i]).collect();
                let mb_adv: Vec<f64> = mb.iter().map(|&i| adv[i]).collect();

                let cache = self.policy.mean_net.forward_batch(&mb_obs)?;
                let new_logp = self.policy.log_prob_batch(cache.output(), &mb_actions);
                let coefs = surrogate_grad_coefs(&mb_old, &new_logp, &mb_adv, self.clip_eps);
                // Gradient ascent on the surrogate: descend its negation,
                // averaged over the minibatch.
                let m = mb.len() as f64;
                let loss_coefs: Vec<f64> = coefs.iter().map(|c| -c / m).collect();
                let (d_mean, d_log_std) =
                    self.policy.log_prob_grads(cache.output(), &mb_actions, &loss_coefs);
                let grads = self.policy.mean_net.backward_batch(&cache, &d_mean)?;
                let mut flat = Vec::with_capacity(self.policy.n_params());
                grads.flatten_into(&mut flat);
                flat.extend_from_slice(&d_log_std);
                self.policy_opt.step(&mut policy_params, &flat)?;
                self.policy.unflatten_params(&policy_params)?;
            }
            let cache = self.policy.mean_net.forward_batch(&obs_scaled)?;
            let new_logp_all = self.policy.log_prob_batch(cache.output(), &actions);
            kl = kl_approx(&old_logp, &new_logp_all)?;
            if !kl.is_finite() {
                return Err(PpoError::Nn(crate::nn::NnError::NonFiniteGradient));
            }
            if kl > self.cfg.kl_abort_factor * self.cfg.kl_target {
                break;
            }
        }

        // Servo the clip parameter first, then the step multipliers.
        self.clip_eps = adapt_clip(kl, self.clip_eps, &self.cfg);
        self.policy_opt.zeta =
            adapt_step_multiplier(kl, self.clip_eps, self.policy_opt.zeta, &self.cfg);
        self.value_opt.zeta =
            adapt_step_multiplier(kl, self.clip_eps, self.value_opt.zeta, &self.cfg);

        // Value regression epochs.
        let mut value_params = Vec::with_capacity(self.value.n_params());
        self.value.flatten_params_into(&mut value_params);
        for _epoch in 0..self.cfg.epochs {
            indices.shuffle(&mut self.shuffle_rng);
            for mb in indices.chunks(self.cfg.minibatch) {
                let mb_obs = obs_scaled.select_rows(mb);
                let mb_targets: Vec<f64> = mb.iter().map(|&i| targets[i]).collect();
                let cache = self.value.forward_batch(&mb_obs)?;
                let m = mb.len() as f64;
                let mut upstream = Matrix::zeros(mb.len(), 1);
                for (i, t) in mb_targets.iter().enumerate() {
                    let p = cache.output().get(i, 0);
                    upstream.set(i, 0, 2.0 * (p - t) / m);
                }
                let grads = self.value.backward_batch(&cache, &upstream)?;
                let mut flat = Vec::with_capacity(self.value.n_params());
                grads.flatten_into(&mut flat);
                self.value_opt.step(&mut value_params, &flat)?;
                self.value.unflatten_params(&value_params)?;
            }
        }

        // Fold this batch's raw observations in for the next batch.
        self.scaler.update_batch(&obs_raw);

        self.episodes_collected += batch.episodes.len() as u64;
        self.updates_done += 1;
        Ok(self.log_entry(batch, kl, ev))
    }

    fn log_entry(&self, batch: &RolloutBatch, kl: f64, ev: f64) -> TrainLogEntry {
        let eps = &batch.episodes;
        let ne = eps.len().max(1) as f64;
        let rewards: Vec<f64> = eps.iter().map(EpisodeRollout::total_reward).collect();
        let mean_reward = rewards.iter().sum::<f64>() / ne;
        let std_reward = (rewards.iter().map(|r| (r - mean_reward) * (r - mean_reward)).sum::<f64>()
            / ne)
            .sqrt();
        let min_reward = rewards.iter().cloned().fold(f64::INFINITY, f64::min);
        let mean_steps = eps.iter().map(|e| e.len() as f64).sum::<f64>() / ne;
        let stats = |vals: Vec<f64>| -> (f64, f64) {
            let mean = vals.iter().sum::<f64>() / ne;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / ne;
            (mean, var.sqrt())
        };
        let (r_mean, r_std) = stats(eps.iter().map(|e| e.report.r.norm()).collect());
        let (v_mean, v_std) = stats(eps.iter().map(|e| e.report.v.norm()).collect());
        let (att_mean, att_std) = stats(eps.iter().map(|e| e.report.attitude_norm()).collect());
        let (om_mean, om_std) = stats(eps.iter().map(|e| e.report.omega_norm()).collect());
        let success =
            eps.iter().filter(|e| e.report.landed()).count() as f64 / ne;
        let mean_fuel = eps.iter().map(|e| e.report.fuel_used).sum::<f64>() / ne;
        TrainLogEntry {
            update: self.updates_done,
            episodes: self.episodes_collected,
            mean_reward,
            std_reward,
            min_reward,
            mean_steps,
            kl,
            entropy: self.policy.entropy(),
            explained_variance: ev,
            clip_eps: self.clip_eps,
            zeta: self.policy_opt.zeta,
            success_rate: success,
            mean_fuel,
            terminal_r_mean: r_mean,
            terminal_r_std: r_std,
            terminal_v_mean: v_mean,
            terminal_v_std: v_std,
            terminal_att_mean: att_mean,
            terminal_att_std: att_std,
            terminal_omega_mean: om_mean,
            terminal_omega_std: om_std,
        }
    }

    /// Collect-update loop until the episode budget is spent. A zero
    /// budget returns immediately with untouched parameters and an empty
    /// log. `on_update` observes each new log entry.
    pub fn train<E: Env>(
        &mut self,
        env: &mut E,
        mut on_update: impl FnMut(&Self, &TrainLogEntry),
    ) -> Result<(), TrainerError> {
        while self.episodes_collected < self.cfg.episode_budget {
            let update_index = self.updates_done;
            let batch = self
                .collect_batch(env)
                .map_err(|source| TrainerError::Ppo { update: update_index, source })?;
            let entry = self.update(&batch)?;
            on_update(self, &entry);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{EnvError, StepOutcome, TerminalReport, TerminationCause};
    use crate::math::Vec3;
    use alloc::vec;
    use rand::Rng;

    /// Minimal 1-D double integrator: drive position and velocity to zero.
    #[derive(Debug, Clone)]
    struct DoubleIntegrator {
        x: f64,
        v: f64,
        steps: usize,
        done: bool,
        active: bool,
        total_accel: f64,
    }

    impl DoubleIntegrator {
        fn new() -> Self {
            Self { x: 0.0, v: 0.0, steps: 0, done: true, active: false, total_accel: 0.0 }
        }
    }

    impl Env for DoubleIntegrator {
        fn obs_dim(&self) -> usize {
            2
        }

        fn act_dim(&self) -> usize {
            1
        }

        fn reset(&mut self, seed: u64) -> Vec<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            self.x = rng.random_range(-2.0..2.0);
            self.v = rng.random_range(-1.0..1.0);
            self.steps = 0;
            self.done = false;
            self.active = true;
            self.total_accel = 0.0;
            vec![self.x, self.v]
        }

        fn step(&mut self, action: &[f64]) -> Result<StepOutcome, EnvError> {
            if self.done {
                return Err(EnvError::EpisodeFinished);
            }
            let a = action[0].clamp(-1.0, 1.0);
            let dt = 0.2;
            self.x += self.v * dt + 0.5 * a * dt * dt;
            self.v += a * dt;
            self.steps += 1;
            self.total_accel += a.abs();
            let r2 = -0.2 * (self.x * self.x + 0.3 * self.v * self.v) + 0.01;
            let mut r1 = 0.0;
            if self.steps >= 50 {
                self.done = true;
                if self.x.abs() < 0.2 && self.v.abs() < 0.2 {
                    r1 = 5.0;
                }
            }
            Ok(StepOutcome {
                observation: vec![self.x, self.v],
                r1,
                r2,
                done: self.done,
                cause: self.done.then_some(TerminationCause::Timeout),
                fuel_used: self.total_accel,
                glideslope_sample: None,
            })
        }

        fn terminal_report(&self) -> Option<TerminalReport> {
            self.done.then(|| TerminalReport {
                cause: TerminationCause::Timeout,
                r: Vec3::new(self.x, 0.0, 0.0),
                v: Vec3::new(self.v, 0.0, 0.0),
                attitude: None,
                omega: None,
                steps: self.steps,
                fuel_used: self.total_accel,
                glideslope: None,
                fuel_exhausted: false,
                divert_triggered: false,
            })
        }
    }

    fn toy_config(budget: u64) -> PpoConfig {
        PpoConfig {
            episodes_per_batch: 20,
            epochs: 5,
            minibatch: 128,
            episode_budget: budget,
            policy_step: 3e-4,
            value_step: 2e-3,
            ..PpoConfig::default()
        }
    }

    #[test]
    fn zero_budget_returns_initial_parameters_and_empty_log() {
        let mut trainer = Trainer::new(2, 1, toy_config(0), 5).unwrap();
        let before = trainer.policy().flatten_params();
        let mut env = DoubleIntegrator::new();
        trainer.train(&mut env, |_, _| {}).unwrap();
        assert_eq!(trainer.policy().flatten_params(), before);
        assert!(trainer.log().entries.is_empty());
        assert_eq!(trainer.episodes_collected(), 0);
    }

    #[test]
    fn fixed_seed_runs_are_identical() {
        let run = |seed: u64| {
            let mut trainer = Trainer::new(2, 1, toy_config(200), seed).unwrap();
            let mut env = DoubleIntegrator::new();
            trainer.train(&mut env, |_, _| {}).unwrap();
            (
                trainer.policy().flatten_params(),
                trainer
                    .log()
                    .entries
                    .iter()
                    .map(|e| (e.mean_reward, e.kl))
                    .collect::<Vec<_>>(),
            )
        };
        assert_eq!(run(11), run(11));
        assert_ne!(run(11).1, run(12).1);
    }

    #[test]
    fn zero_advantage_batch_leaves_policy_unchanged() {
        let mut trainer = Trainer::new(2, 1, toy_config(20), 3).unwrap();
        let mut env = DoubleIntegrator::new();
        let mut batch = trainer.collect_batch(&mut env).unwrap();
        // Force identical returns on every step of every episode: constant
        // rewards on equal-length episodes give constant targets, so the
        // normalized advantages vanish.
        for ep in batch.episodes.iter_mut() {
            for k in 0..ep.len() {
                ep.r1[k] = 0.0;
                ep.r2[k] = 0.0;
            }
        }
        let policy_before = trainer.policy().flatten_params();
        trainer.update(&batch).unwrap();
        let policy_after = trainer.policy().flatten_params();
        assert_eq!(policy_before, policy_after);
    }

    #[test]
    fn mean_return_improves_on_the_double_integrator() {
        let mut trainer = Trainer::new(2, 1, toy_config(200 * 20), 7).unwrap();
        let mut env = DoubleIntegrator::new();
        trainer.train(&mut env, |_, _| {}).unwrap();
        let entries = &trainer.log().entries;
        assert_eq!(entries.len(), 200);
        let head: f64 = entries[..20].iter().map(|e| e.mean_reward).sum::<f64>() / 20.0;
        let tail: f64 = entries[180..].iter().map(|e| e.mean_reward).sum::<f64>() / 20.0;
        assert!(
            tail > head + 1.0,
            "no improvement: first {head}, last {tail}"
        );
        // The trained controller should usually earn the terminal bonus.
        let tail_success: f64 = entries[180..]
            .iter()
            .map(|e| e.success_rate)
            .sum::<f64>()
            / 20.0;
        let head_success: f64 =
            entries[..20].iter().map(|e| e.success_rate).sum::<f64>() / 20.0;
        assert!(tail_success > head_success);
    }

    #[test]
    fn kl_is_zero_with_zero_epochs() {
        let mut cfg = toy_config(20);
        cfg.epochs = 0;
        let mut trainer = Trainer::new(2, 1, cfg, 9).unwrap();
        let mut env = DoubleIntegrator::new();
        let batch = trainer.collect_batch(&mut env).unwrap();
        let entry = trainer.update(&batch).unwrap();
        assert_eq!(entry.kl, 0.0);
    }
}
