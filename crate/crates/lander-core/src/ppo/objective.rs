//! Clipped surrogate objective, value regression loss, and the KL-driven
//! adaptation of the clip parameter and step-size multiplier.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;

use super::PpoConfig;
use alloc::vec::Vec;

/// Clipped-surrogate objective:
/// `mean_k min(p_k A_k, clip(p_k, 1 - eps, 1 + eps) A_k)` with
/// `p_k = exp(new_logp - old_logp)`. Larger is better.
pub fn ppo_surrogate(old_logp: &[f64], new_logp: &[f64], adv: &[f64], eps: f64) -> f64 {
    debug_assert_eq!(old_logp.len(), new_logp.len());
    debug_assert_eq!(old_logp.len(), adv.len());
    if old_logp.is_empty() {
        return 0.0;
    }
    let mut total = 0.0;
    for ((o, n), a) in old_logp.iter().zip(new_logp.iter()).zip(adv.iter()) {
        let ratio = (n - o).exp();
        let clipped = ratio.clamp(1.0 - eps, 1.0 + eps);
        total += (ratio * a).min(clipped * a);
    }
    total / old_logp.len() as f64
}

/// Per-sample gradient of the surrogate with respect to the new log
/// probability: `p_k A_k` where the unclipped branch is active, else 0.
pub fn surrogate_grad_coefs(
    old_logp: &[f64],
    new_logp: &[f64],
    adv: &[f64],
    eps: f64,
) -> Vec<f64> {
    old_logp
        .iter()
        .zip(new_logp.iter())
        .zip(adv.iter())
        .map(|((o, n), a)| {
            let ratio = (n - o).exp();
            let clipped = ratio.clamp(1.0 - eps, 1.0 + eps);
            if ratio * a <= clipped * a {
                ratio * a
            } else {
                0.0
            }
        })
        .collect()
}

/// Mean squared error of the value predictions against (scaled) returns.
pub fn value_loss(predictions: &[f64], targets: &[f64]) -> f64 {
    debug_assert_eq!(predictions.len(), targets.len());
    if predictions.is_empty() {
        return 0.0;
    }
    predictions
        .iter()
        .zip(targets.iter())
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / predictions.len() as f64
}

/// Servo of the clip half-width toward the KL target: widen by 1.5x when
/// KL runs low, shrink by 1.5x when it runs high, bounded.
pub fn adapt_clip(kl: f64, eps: f64, cfg: &PpoConfig) -> f64 {
    if kl < 0.5 * cfg.kl_target {
        (1.5 * eps).min(cfg.clip_max)
    } else if kl > 2.0 * cfg.kl_target {
        (eps / 1.5).max(cfg.clip_min)
    } else {
        eps
    }
}

/// Servo of the step-size multiplier, engaged only once the clip parameter
/// has saturated toward its own bound.
pub fn adapt_step_multiplier(kl: f64, eps: f64, zeta: f64, cfg: &PpoConfig) -> f64 {
    if kl < 0.5 * cfg.kl_target && eps > 0.5 * cfg.clip_max && zeta < cfg.zeta_max {
        (1.5 * zeta).min(cfg.zeta_max)
    } else if kl > 2.0 * cfg.kl_target && eps < 2.0 * cfg.clip_min && zeta > cfg.zeta_min {
        (zeta / 1.5).max(cfg.zeta_min)
    } else {
        zeta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unchanged_policy_returns_mean_advantage() {
        let logp = [0.4, -1.0, 2.0];
        let adv = [1.0, 2.0, -0.5];
        let s = ppo_surrogate(&logp, &logp, &adv, 0.2);
        assert_relative_eq!(s, (1.0 + 2.0 - 0.5) / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn clip_arithmetic_positive_advantage() {
        // ratio 1.5, eps 0.2, A = 1: clipped at 1.2.
        let s = ppo_surrogate(&[0.0], &[1.5f64.ln()], &[1.0], 0.2);
        assert_relative_eq!(s, 1.2, epsilon = 1e-12);
    }

    #[test]
    fn clip_arithmetic_negative_advantage() {
        // ratio 0.5, eps 0.2, A = -1: min(-0.5, -0.8) = -0.8.
        let s = ppo_surrogate(&[0.0], &[0.5f64.ln()], &[-1.0], 0.2);
        assert_relative_eq!(s, -0.8, epsilon = 1e-12);
    }

    #[test]
    fn surrogate_is_ratio_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..100 {
            let n = 17;
            let old: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..0.0)).collect();
            let new: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..0.0)).collect();
            let adv: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let c = rng.random_range(-5.0..5.0);
            let old_shift: Vec<f64> = old.iter().map(|v| v + c).collect();
            let new_shift: Vec<f64> = new.iter().map(|v| v + c).collect();
            let a = ppo_surrogate(&old, &new, &adv, 0.2);
            let b = ppo_surrogate(&old_shift, &new_shift, &adv, 0.2);
            assert_relative_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn gradient_coefs_zero_out_clipped_samples() {
        // Positive advantage, ratio far above the clip: inactive.
        let c = surrogate_grad_coefs(&[0.0], &[1.0], &[1.0], 0.2);
        assert_eq!(c, vec![0.0]);
        // Negative advantage, ratio far below the clip: inactive.
        let c = surrogate_grad_coefs(&[0.0], &[-1.0], &[-1.0], 0.2);
        assert_eq!(c, vec![0.0]);
        // Inside the clip: active with coefficient ratio * A.
        let c = surrogate_grad_coefs(&[0.0], &[0.05], &[2.0], 0.2);
        assert_relative_eq!(c[0], 0.05f64.exp() * 2.0, epsilon = 1e-12);
    }

    #[test]
    fn value_loss_cases() {
        let t = [1.0, -2.0, 0.5];
        assert_eq!(value_loss(&t, &t), 0.0);
        let p: Vec<f64> = t.iter().map(|v| v + 0.3).collect();
        assert_relative_eq!(value_loss(&p, &t), 0.09, epsilon = 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let a: Vec<f64> = (0..31).map(|_| rng.random_range(-4.0..4.0)).collect();
        let b: Vec<f64> = (0..31).map(|_| rng.random_range(-4.0..4.0)).collect();
        let brute =
            a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / 31.0;
        assert_relative_eq!(value_loss(&a, &b), brute, epsilon = 1e-12);
    }

    #[test]
    fn clip_adaptation_examples() {
        let cfg = PpoConfig::default();
        // Dead zone.
        assert_eq!(adapt_clip(0.001, 0.2, &cfg), 0.2);
        // Low KL widens: 0.0004 < 0.0005.
        assert_relative_eq!(adapt_clip(0.0004, 0.2, &cfg), 0.3, epsilon = 1e-15);
        // High KL shrinks with the floor active.
        assert_relative_eq!(
            adapt_clip(0.003, 0.02, &cfg),
            0.013333333333333334,
            epsilon = 1e-15
        );
        assert_eq!(adapt_clip(0.003, 0.012, &cfg), 0.01);
    }

    #[test]
    fn step_multiplier_examples() {
        let cfg = PpoConfig::default();
        assert_eq!(adapt_step_multiplier(0.001, 0.2, 1.0, &cfg), 1.0);
        assert_relative_eq!(
            adapt_step_multiplier(0.0004, 0.3, 1.0, &cfg),
            1.5,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            adapt_step_multiplier(0.003, 0.015, 1.0, &cfg),
            0.6666666666666666,
            epsilon = 1e-15
        );
        // Conditions not met: low KL but clip not saturated high.
        assert_eq!(adapt_step_multiplier(0.0004, 0.1, 1.0, &cfg), 1.0);
    }

    #[test]
    fn adaptation_never_leaves_bounds() {
        let cfg = PpoConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut eps = cfg.clip_init;
        let mut zeta = 1.0;
        for _ in 0..1_000_000 {
            let kl = rng.random_range(0.0..0.01);
            eps = adapt_clip(kl, eps, &cfg);
            zeta = adapt_step_multiplier(kl, eps, zeta, &cfg);
            assert!((cfg.clip_min..=cfg.clip_max).contains(&eps));
            assert!((cfg.zeta_min..=cfg.zeta_max).contains(&zeta));
        }
    }
}
