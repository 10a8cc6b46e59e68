//! Gaussian action distribution with a state-dependent mean network and a
//! learned state-independent diagonal covariance.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;

use super::matrix::Matrix;
use super::network::Network;
use super::NnError;
use alloc::vec::Vec;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub const LOG_STD_MIN: f64 = -20.0;
pub const LOG_STD_MAX: f64 = 2.0;
/// Initial exploration spans the clipped action range.
pub const LOG_STD_INIT: f64 = -0.5108256237659907; // ln(0.6)

const LN_2PI: f64 = 1.8378770664093453;

/// Stochastic policy: `u ~ N(mean(x), diag(exp(log_std))^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPolicy {
    pub mean_net: Network,
    pub log_std: Vec<f64>,
}

impl GaussianPolicy {
    pub fn new<R: Rng>(obs_dim: usize, act_dim: usize, rng: &mut R) -> Self {
        Self {
            mean_net: Network::policy_mean(obs_dim, act_dim, rng),
            log_std: alloc::vec![LOG_STD_INIT; act_dim],
        }
    }

    pub fn act_dim(&self) -> usize {
        self.log_std.len()
    }

    pub fn obs_dim(&self) -> usize {
        self.mean_net.input_dim()
    }

    /// Deterministic action (exploration off): the mean.
    pub fn mean_action(&self, obs: &[f64]) -> Result<Vec<f64>, NnError> {
        self.mean_net.forward(obs)
    }

    /// Draw an action and return it with its log density.
    pub fn sample_action<R: Rng>(
        &self,
        obs: &[f64],
        rng: &mut R,
    ) -> Result<(Vec<f64>, f64), NnError> {
        let mean = self.mean_net.forward(obs)?;
        let mut action = Vec::with_capacity(mean.len());
        for (m, ls) in mean.iter().zip(self.log_std.iter()) {
            let eps: f64 = StandardNormal.sample(rng);
            action.push(m + ls.exp() * eps);
        }
        let logp = log_prob_diag_gaussian(&mean, &self.log_std, &action);
        Ok((action, logp))
    }

    /// Log densities of stored actions under the current parameters, given
    /// precomputed means (one batch row per sample).
    pub fn log_prob_batch(&self, means: &Matrix, actions: &Matrix) -> Vec<f64> {
        let mut out = Vec::with_capacity(means.rows());
        for i in 0..means.rows() {
            out.push(log_prob_diag_gaussian(
                means.row(i),
                &self.log_std,
                actions.row(i),
            ));
        }
        out
    }

    /// Differential entropy of the action distribution:
    /// `sum(log_std) + d/2 ln(2 pi e)`.
    pub fn entropy(&self) -> f64 {
        let d = self.log_std.len() as f64;
        self.log_std.iter().sum::<f64>() + 0.5 * d * (LN_2PI + 1.0)
    }

    /// Per-sample gradients of `coef_i * log p(u_i | x_i)` with respect to
    /// the mean rows and the shared log-std vector.
    ///
    /// `d logp / d mean_j = (u_j - mean_j) / sigma_j^2`,
    /// `d logp / d log_std_j = ((u_j - mean_j)/sigma_j)^2 - 1`.
    pub fn log_prob_grads(
        &self,
        means: &Matrix,
        actions: &Matrix,
        coef: &[f64],
    ) -> (Matrix, Vec<f64>) {
        let mut d_mean = Matrix::zeros(means.rows(), means.cols());
        let mut d_log_std = alloc::vec![0.0; self.log_std.len()];
        for i in 0..means.rows() {
            let c = coef[i];
            if c == 0.0 {
                continue;
            }
            let mrow = means.row(i);
            let arow = actions.row(i);
            let drow = d_mean.row_mut(i);
            for j in 0..mrow.len() {
                let sigma = self.log_std[j].exp();
                let z = (arow[j] - mrow[j]) / sigma;
                drow[j] = c * z / sigma;
                d_log_std[j] += c * (z * z - 1.0);
            }
        }
        (d_mean, d_log_std)
    }

    pub fn n_params(&self) -> usize {
        self.mean_net.n_params() + self.log_std.len()
    }

    /// Flat parameter order: mean network, then log-std.
    pub fn flatten_params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_params());
        self.mean_net.flatten_params_into(&mut out);
        out.extend_from_slice(&self.log_std);
        out
    }

    pub fn unflatten_params(&mut self, flat: &[f64]) -> Result<(), NnError> {
        let used = self.mean_net.unflatten_params(flat)?;
        if flat.len() != used + self.log_std.len() {
            return Err(NnError::Shape("policy parameter length mismatch"));
        }
        for (ls, v) in self.log_std.iter_mut().zip(flat[used..].iter()) {
            *ls = v.clamp(LOG_STD_MIN, LOG_STD_MAX);
        }
        Ok(())
    }
}

/// Diagonal-Gaussian log density.
pub fn log_prob_diag_gaussian(mean: &[f64], log_std: &[f64], action: &[f64]) -> f64 {
    let mut logp = 0.0;
    for ((m, ls), a) in mean.iter().zip(log_std.iter()).zip(action.iter()) {
        let z = (a - m) / ls.exp();
        logp -= 0.5 * z * z + ls + 0.5 * LN_2PI;
    }
    logp
}

/// KL-divergence proxy between policy snapshots: the mean squared
/// difference of action log probabilities.
pub fn kl_approx(old_logp: &[f64], new_logp: &[f64]) -> Result<f64, NnError> {
    if old_logp.len() != new_logp.len() {
        return Err(NnError::Shape("log-prob length mismatch"));
    }
    if old_logp.is_empty() {
        return Err(NnError::Shape("empty log-prob vectors"));
    }
    let n = old_logp.len() as f64;
    Ok(old_logp
        .iter()
        .zip(new_logp.iter())
        .map(|(o, n)| (o - n) * (o - n))
        .sum::<f64>()
        / n)
}
