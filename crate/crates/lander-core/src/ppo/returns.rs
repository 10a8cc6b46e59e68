//! Dual-discount returns and advantages.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;

use super::PpoError;
use alloc::vec;
use alloc::vec::Vec;

/// Per-step return with separate discounting of the two reward streams:
/// `G_k = sum_{l>=k} gamma1^(l-k) r1_l + gamma2^(l-k) r2_l`.
pub fn dual_discount_returns(
    r1: &[f64],
    r2: &[f64],
    gamma1: f64,
    gamma2: f64,
) -> Result<Vec<f64>, PpoError> {
    if r1.len() != r2.len() {
        return Err(PpoError::LengthMismatch);
    }
    let n = r1.len();
    let mut out = vec![0.0; n];
    let mut g1 = 0.0;
    let mut g2 = 0.0;
    for k in (0..n).rev() {
        g1 = r1[k] + gamma1 * g1;
        g2 = r2[k] + gamma2 * g2;
        out[k] = g1 + g2;
    }
    Ok(out)
}

/// Advantages: returns minus the value baseline, then normalized to zero
/// mean and unit variance over the batch. Normalization is skipped when
/// the raw advantages are (numerically) constant.
pub fn advantages(returns: &[f64], values: &[f64]) -> Result<Vec<f64>, PpoError> {
    if returns.len() != values.len() {
        return Err(PpoError::LengthMismatch);
    }
    let mut adv: Vec<f64> = returns.iter().zip(values.iter()).map(|(g, v)| g - v).collect();
    let n = adv.len() as f64;
    if n == 0.0 {
        return Ok(adv);
    }
    let mean = adv.iter().sum::<f64>() / n;
    let var = adv.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    if std < 1e-12 {
        for a in adv.iter_mut() {
            *a = 0.0;
        }
        return Ok(adv);
    }
    for a in adv.iter_mut() {
        *a = (*a - mean) / std;
    }
    Ok(adv)
}

/// `1 - Var(target - prediction) / Var(target)`, the usual fit quality of
/// the value baseline; 1 for perfect predictions, capped at 1, and defined
/// as 0 for a degenerate constant target that is not matched.
pub fn explained_variance(targets: &[f64], predictions: &[f64]) -> f64 {
    debug_assert_eq!(targets.len(), predictions.len());
    let n = targets.len() as f64;
    if n == 0.0 {
        return 0.0;
    }
    let mean_t = targets.iter().sum::<f64>() / n;
    let var_t = targets.iter().map(|t| (t - mean_t) * (t - mean_t)).sum::<f64>() / n;
    let resid: Vec<f64> = targets.iter().zip(predictions.iter()).map(|(t, p)| t - p).collect();
    let mean_r = resid.iter().sum::<f64>() / n;
    let var_r = resid.iter().map(|r| (r - mean_r) * (r - mean_r)).sum::<f64>() / n;
    if var_t < 1e-12 {
        return if var_r < 1e-12 { 1.0 } else { 0.0 };
    }
    (1.0 - var_r / var_t).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Plain single-discount return, the independent reference.
    fn single_discount(r: &[f64], gamma: f64) -> Vec<f64> {
        let mut out = vec![0.0; r.len()];
        let mut g = 0.0;
        for k in (0..r.len()).rev() {
            g = r[k] + gamma * g;
            out[k] = g;
        }
        out
    }

    #[test]
    fn zero_terminal_stream_reduces_to_single_discount() {
        let r2 = [1.0, -0.5, 0.25, 2.0];
        let r1 = [0.0; 4];
        let got = dual_discount_returns(&r1, &r2, 0.99, 0.9).unwrap();
        let expect = single_discount(&r2, 0.9);
        for (g, e) in got.iter().zip(expect.iter()) {
            assert_relative_eq!(g, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn single_step_episode() {
        let got = dual_discount_returns(&[10.0], &[0.5], 0.5, 0.1).unwrap();
        assert_eq!(got, vec![10.5]);
    }

    #[test]
    fn hand_backward_recursion_example() {
        let got = dual_discount_returns(&[0.0, 10.0], &[1.0, 1.0], 0.5, 0.1).unwrap();
        assert_relative_eq!(got[0], 6.1, epsilon = 1e-12);
        assert_relative_eq!(got[1], 11.0, epsilon = 1e-12);
    }

    #[test]
    fn equal_discounts_collapse_to_single_discount() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..1000 {
            let n = rng.random_range(1..40);
            let r1: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let r2: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let gamma = rng.random_range(0.0..0.999);
            let got = dual_discount_returns(&r1, &r2, gamma, gamma).unwrap();
            let merged: Vec<f64> = r1.iter().zip(r2.iter()).map(|(a, b)| a + b).collect();
            let expect = single_discount(&merged, gamma);
            for (g, e) in got.iter().zip(expect.iter()) {
                assert!((g - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(dual_discount_returns(&[1.0], &[1.0, 2.0], 0.9, 0.9).is_err());
    }

    #[test]
    fn perfect_baseline_gives_zero_advantages() {
        let g = [3.0, -1.0, 0.5];
        let adv = advantages(&g, &g).unwrap();
        assert_eq!(adv, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn advantages_match_brute_force_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let g: Vec<f64> = (0..64).map(|_| rng.random_range(-5.0..5.0)).collect();
        let v: Vec<f64> = (0..64).map(|_| rng.random_range(-5.0..5.0)).collect();
        let adv = advantages(&g, &v).unwrap();
        // Brute force with independent arithmetic.
        let raw: Vec<f64> = g.iter().zip(v.iter()).map(|(a, b)| a - b).collect();
        let mean = raw.iter().sum::<f64>() / 64.0;
        let std =
            (raw.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / 64.0).sqrt();
        for (a, r) in adv.iter().zip(raw.iter()) {
            assert_relative_eq!(a, &((r - mean) / std), epsilon = 1e-12);
        }
        // Normalization preserves ordering.
        let mut order_raw: Vec<usize> = (0..64).collect();
        order_raw.sort_by(|&i, &j| raw[i].partial_cmp(&raw[j]).unwrap());
        let mut order_norm: Vec<usize> = (0..64).collect();
        order_norm.sort_by(|&i, &j| adv[i].partial_cmp(&adv[j]).unwrap());
        assert_eq!(order_raw, order_norm);
    }

    #[test]
    fn explained_variance_cases() {
        let t = [1.0, 2.0, 3.0];
        assert_eq!(explained_variance(&t, &t), 1.0);
        // Constant prediction of the mean: EV = 0.
        let p = [2.0, 2.0, 2.0];
        assert_relative_eq!(explained_variance(&t, &p), 0.0, epsilon = 1e-12);
        // Worse than the mean: negative.
        let p = [3.0, 2.0, 1.0];
        assert!(explained_variance(&t, &p) < 0.0);
        assert!(explained_variance(&t, &p) <= 1.0);
    }
}
