//! Incremental observation scaler.
//!
//! Network inputs are centered and divided by three standard deviations,
//! with the statistics folded in batch by batch over the whole
//! optimization instead of being recomputed per rollout.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;

use super::matrix::Matrix;
use alloc::vec;
use alloc::vec::Vec;

const STD_GUARD: f64 = 1e-8;

/// Per-element running mean and variance (Chan's parallel merge).
#[derive(Debug, Clone, PartialEq)]
pub struct RunningScaler {
    mean: Vec<f64>,
    /// Sum of squared deviations from the mean.
    m2: Vec<f64>,
    count: f64,
}

impl RunningScaler {
    pub fn new(dim: usize) -> Self {
        Self { mean: vec![0.0; dim], m2: vec![0.0; dim], count: 0.0 }
    }

    pub fn from_parts(mean: Vec<f64>, m2: Vec<f64>, count: f64) -> Self {
        assert_eq!(mean.len(), m2.len());
        Self { mean, m2, count }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn count(&self) -> f64 {
        self.count
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn m2(&self) -> &[f64] {
        &self.m2
    }

    /// Population variance per element; 1 before any data arrives so the
    /// scaler is usable on the very first rollout.
    pub fn variance(&self, i: usize) -> f64 {
        if self.count == 0.0 {
            1.0
        } else {
            (self.m2[i] / self.count).max(0.0)
        }
    }

    /// Fold a batch (rows are samples) into the running statistics.
    pub fn update_batch(&mut self, batch: &Matrix) {
        assert_eq!(batch.cols(), self.dim(), "scaler width mismatch");
        let nb = batch.rows() as f64;
        if nb == 0.0 {
            return;
        }
        for j in 0..self.dim() {
            let mut bmean = 0.0;
            for i in 0..batch.rows() {
                bmean += batch.get(i, j);
            }
            bmean /= nb;
            let mut bm2 = 0.0;
            for i in 0..batch.rows() {
                let d = batch.get(i, j) - bmean;
                bm2 += d * d;
            }
            let na = self.count;
            let delta = bmean - self.mean[j];
            let total = na + nb;
            self.mean[j] += delta * nb / total;
            self.m2[j] += bm2 + delta * delta * na * nb / total;
        }
        self.count += nb;
    }

    /// Scale one observation: `(x - mean) / (3 std + guard)`.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        for (j, (xi, o)) in x.iter().zip(out.iter_mut()).enumerate() {
            let std = self.variance(j).sqrt();
            *o = (xi - self.mean[j]) / (3.0 * std + STD_GUARD);
        }
    }

    pub fn apply_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        self.apply(x, &mut out);
        out
    }

    /// Fold the batch in, then return it scaled with the updated
    /// statistics.
    pub fn update_and_apply(&mut self, batch: &Matrix) -> Matrix {
        self.update_batch(batch);
        let mut out = Matrix::zeros(batch.rows(), batch.cols());
        for i in 0..batch.rows() {
            let mut row = vec![0.0; batch.cols()];
            self.apply(batch.row(i), &mut row);
            out.row_mut(i).copy_from_slice(&row);
        }
        out
    }
}
