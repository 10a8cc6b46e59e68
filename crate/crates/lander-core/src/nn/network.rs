//! Layered affine maps with tanh hidden activations and exact
//! reverse-mode gradients.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;

use super::matrix::Matrix;
use super::NnError;
use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Linear,
}

impl Activation {
    pub fn as_str(self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Linear => "linear",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "tanh" => Some(Activation::Tanh),
            "linear" => Some(Activation::Linear),
            _ => None,
        }
    }
}

/// One affine layer: `y = act(x W + b)`, weights stored fan-in x fan-out.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl Layer {
    pub fn fan_in(&self) -> usize {
        self.weights.rows()
    }

    pub fn fan_out(&self) -> usize {
        self.weights.cols()
    }
}

/// Feed-forward network; hidden layers tanh, output linear.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    layers: Vec<Layer>,
}

/// Hidden widths used for both function approximators: first hidden
/// 10x the input, last hidden 10x the output (policy) or 5 (value),
/// middle hidden the rounded geometric mean of its neighbors.
pub fn policy_hidden_widths(obs_dim: usize, act_dim: usize) -> [usize; 3] {
    let h1 = 10 * obs_dim;
    let h3 = 10 * act_dim;
    let h2 = ((h1 * h3) as f64).sqrt().round() as usize;
    [h1, h2, h3]
}

pub fn value_hidden_widths(obs_dim: usize) -> [usize; 3] {
    let h1 = 10 * obs_dim;
    let h3 = 5;
    let h2 = ((h1 * h3) as f64).sqrt().round() as usize;
    [h1, h2, h3]
}

impl Network {
    /// Build a tanh network with the given layer widths
    /// (`dims[0]` inputs through `dims.last()` outputs). Weights start
    /// zero-mean uniform scaled by `1/sqrt(fan_in)`; biases start zero.
    pub fn new<R: Rng>(dims: &[usize], rng: &mut R) -> Self {
        assert!(dims.len() >= 2, "network needs input and output widths");
        let mut layers = Vec::with_capacity(dims.len() - 1);
        for w in dims.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let scale = 1.0 / (fan_in as f64).sqrt();
            let data = (0..fan_in * fan_out)
                .map(|_| rng.random_range(-scale..=scale))
                .collect();
            layers.push(Layer {
                weights: Matrix::from_vec(fan_in, fan_out, data),
                bias: vec![0.0; fan_out],
                activation: Activation::Tanh,
            });
        }
        layers.last_mut().expect("at least one layer").activation = Activation::Linear;
        Self { layers }
    }

    /// Build the four-layer policy-mean architecture for the given task.
    pub fn policy_mean<R: Rng>(obs_dim: usize, act_dim: usize, rng: &mut R) -> Self {
        let [h1, h2, h3] = policy_hidden_widths(obs_dim, act_dim);
        Self::new(&[obs_dim, h1, h2, h3, act_dim], rng)
    }

    /// Build the four-layer value architecture.
    pub fn value<R: Rng>(obs_dim: usize, rng: &mut R) -> Self {
        let [h1, h2, h3] = value_hidden_widths(obs_dim);
        Self::new(&[obs_dim, h1, h2, h3, 1], rng)
    }

    pub fn from_layers(layers: Vec<Layer>) -> Result<Self, NnError> {
        if layers.is_empty() {
            return Err(NnError::Shape("network has no layers"));
        }
        for w in layers.windows(2) {
            if w[0].fan_out() != w[1].fan_in() {
                return Err(NnError::Shape("layer widths do not chain"));
            }
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].fan_in()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("nonempty").fan_out()
    }

    pub fn n_params(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.fan_in() * l.fan_out() + l.fan_out())
            .sum()
    }

    /// Single-input forward pass.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>, NnError> {
        if x.len() != self.input_dim() {
            return Err(NnError::Shape("input width mismatch"));
        }
        let batch = Matrix::from_vec(1, x.len(), x.to_vec());
        let cache = self.forward_batch(&batch)?;
        Ok(cache.output().row(0).to_vec())
    }

    /// Batched forward pass keeping per-layer activations for backprop.
    pub fn forward_batch(&self, x: &Matrix) -> Result<ForwardCache, NnError> {
        if x.cols() != self.input_dim() {
            return Err(NnError::Shape("input width mismatch"));
        }
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(x.clone());
        for layer in &self.layers {
            let mut z = activations.last().expect("input present").mul(&layer.weights);
            for i in 0..z.rows() {
                let row = z.row_mut(i);
                for (v, b) in row.iter_mut().zip(layer.bias.iter()) {
                    *v += b;
                }
            }
            if layer.activation == Activation::Tanh {
                for v in z.data_mut() {
                    *v = v.tanh();
                }
            }
            activations.push(z);
        }
        Ok(ForwardCache { activations })
    }

    /// Reverse-mode gradients of `sum_i upstream_i . output_i` with respect
    /// to every weight and bias. `upstream` is (batch x out_dim); tanh
    /// derivatives come from the cached activations (`1 - a^2`).
    pub fn backward_batch(
        &self,
        cache: &ForwardCache,
        upstream: &Matrix,
    ) -> Result<NetworkGrads, NnError> {
        if upstream.rows() != cache.activations[0].rows()
            || upstream.cols() != self.output_dim()
        {
            return Err(NnError::Shape("upstream gradient shape mismatch"));
        }
        let n_layers = self.layers.len();
        let mut d_weights = Vec::with_capacity(n_layers);
        let mut d_bias = Vec::with_capacity(n_layers);
        let mut delta = upstream.clone();
        for idx in (0..n_layers).rev() {
            let layer = &self.layers[idx];
            if layer.activation == Activation::Tanh {
                let act = &cache.activations[idx + 1];
                for (d, a) in delta.data_mut().iter_mut().zip(act.data().iter()) {
                    *d *= 1.0 - a * a;
                }
            }
            let dw = cache.activations[idx].tr_mul(&delta);
            let mut db = vec![0.0; layer.fan_out()];
            for i in 0..delta.rows() {
                for (b, d) in db.iter_mut().zip(delta.row(i).iter()) {
                    *b += d;
                }
            }
            d_weights.push(dw);
            d_bias.push(db);
            if idx > 0 {
                delta = delta.mul_tr(&layer.weights);
            }
        }
        d_weights.reverse();
        d_bias.reverse();
        Ok(NetworkGrads { d_weights, d_bias })
    }

    /// Copy all parameters into `out` (layer order, weights row-major then
    /// bias).
    pub fn flatten_params_into(&self, out: &mut Vec<f64>) {
        for layer in &self.layers {
            out.extend_from_slice(layer.weights.data());
            out.extend_from_slice(&layer.bias);
        }
    }

    /// Overwrite parameters from a flat slice; returns values consumed.
    pub fn unflatten_params(&mut self, flat: &[f64]) -> Result<usize, NnError> {
        let needed = self.n_params();
        if flat.len() < needed {
            return Err(NnError::Shape("flat parameter vector too short"));
        }
        let mut offset = 0;
        for layer in &mut self.layers {
            let w = layer.weights.data_mut();
            w.copy_from_slice(&flat[offset..offset + w.len()]);
            offset += w.len();
            let blen = layer.bias.len();
            layer.bias.copy_from_slice(&flat[offset..offset + blen]);
            offset += blen;
        }
        Ok(needed)
    }
}

/// Cached activations from a batched forward pass; `activations[0]` is the
/// input, `activations[L]` the output.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub activations: Vec<Matrix>,
}

impl ForwardCache {
    pub fn output(&self) -> &Matrix {
        self.activations.last().expect("nonempty cache")
    }
}

/// Parameter gradients in layer order.
#[derive(Debug, Clone)]
pub struct NetworkGrads {
    pub d_weights: Vec<Matrix>,
    pub d_bias: Vec<Vec<f64>>,
}

impl NetworkGrads {
    pub fn flatten_into(&self, out: &mut Vec<f64>) {
        for (dw, db) in self.d_weights.iter().zip(self.d_bias.iter()) {
            out.extend_from_slice(dw.data());
            out.extend_from_slice(db);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn published_widths() {
        assert_eq!(policy_hidden_widths(12, 4), [120, 69, 40]);
        assert_eq!(value_hidden_widths(12), [120, 24, 5]);
        assert_eq!(policy_hidden_widths(5, 3), [50, 39, 30]);
        assert_eq!(value_hidden_widths(5), [50, 16, 5]);
    }

    #[test]
    fn zero_network_maps_everything_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut net = Network::new(&[3, 4, 2], &mut rng);
        let zeros = vec![0.0; net.n_params()];
        net.unflatten_params(&zeros).unwrap();
        let y = net.forward(&[1.0, -2.0, 0.5]).unwrap();
        assert_eq!(y, vec![0.0, 0.0]);
    }

    #[test]
    fn single_linear_identity_layer() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut net = Network::new(&[3, 3], &mut rng);
        let mut params = vec![0.0; net.n_params()];
        // Identity weights, zero bias.
        for i in 0..3 {
            params[i * 3 + i] = 1.0;
        }
        net.unflatten_params(&params).unwrap();
        let x = [0.3, -1.5, 2.0];
        assert_eq!(net.forward(&x).unwrap(), x.to_vec());
    }

    #[test]
    fn forward_matches_independent_evaluation() {
        // Hand-rolled forward pass for a fixed 2-3-1 network.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let net = Network::new(&[2, 3, 1], &mut rng);
        let w0 = net.layers()[0].weights.clone();
        let b0 = net.layers()[0].bias.clone();
        let w1 = net.layers()[1].weights.clone();
        let b1 = net.layers()[1].bias.clone();
        let mut check_rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let x = [
                check_rng.random_range(-2.0..2.0),
                check_rng.random_range(-2.0..2.0),
            ];
            let mut h = [0.0; 3];
            for j in 0..3 {
                h[j] = (x[0] * w0.get(0, j) + x[1] * w0.get(1, j) + b0[j]).tanh();
            }
            let mut y = b1[0];
            for j in 0..3 {
                y += h[j] * w1.get(j, 0);
            }
            let got = net.forward(&x).unwrap();
            assert!((got[0] - y).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_upstream_gives_zero_gradients() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let net = Network::new(&[4, 6, 2], &mut rng);
        let x = Matrix::from_vec(3, 4, (0..12).map(|i| (i as f64).cos()).collect());
        let cache = net.forward_batch(&x).unwrap();
        let grads = net
            .backward_batch(&cache, &Matrix::zeros(3, 2))
            .unwrap();
        let mut flat = Vec::new();
        grads.flatten_into(&mut flat);
        assert!(flat.iter().all(|g| *g == 0.0));
    }

    #[test]
    fn gradients_are_additive_over_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let net = Network::new(&[3, 5, 2], &mut rng);
        let xs: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..3).map(|j| ((i * 3 + j) as f64).sin()).collect())
            .collect();
        let ups: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..2).map(|j| ((i * 2 + j) as f64).cos()).collect())
            .collect();
        let batch = Matrix::from_rows(&xs);
        let upstream = Matrix::from_rows(&ups);
        let cache = net.forward_batch(&batch).unwrap();
        let combined = net.backward_batch(&cache, &upstream).unwrap();
        let mut combined_flat = Vec::new();
        combined.flatten_into(&mut combined_flat);

        let mut summed = vec![0.0; combined_flat.len()];
        for i in 0..4 {
            let b = Matrix::from_rows(&[xs[i].clone()]);
            let u = Matrix::from_rows(&[ups[i].clone()]);
            let c = net.forward_batch(&b).unwrap();
            let g = net.backward_batch(&c, &u).unwrap();
            let mut f = Vec::new();
            g.flatten_into(&mut f);
            for (s, v) in summed.iter_mut().zip(f.iter()) {
                *s += v;
            }
        }
        for (a, b) in combined_flat.iter().zip(summed.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn finite_difference_gradient_check() {
        // Loss: fixed random linear probe of the outputs.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let mut net = Network::new(&[3, 4, 3, 2], &mut rng);
            let x = Matrix::from_rows(&[
                vec![0.3, -0.7, 1.2],
                vec![-1.0, 0.4, 0.1],
            ]);
            let probe = Matrix::from_rows(&[vec![0.8, -0.3], vec![0.5, 1.1]]);
            let cache = net.forward_batch(&x).unwrap();
            let grads = net.backward_batch(&cache, &probe).unwrap();
            let mut analytic = Vec::new();
            grads.flatten_into(&mut analytic);

            let loss = |net: &Network| {
                let out = net.forward_batch(&x).unwrap();
                out.output()
                    .data()
                    .iter()
                    .zip(probe.data().iter())
                    .map(|(o, p)| o * p)
                    .sum::<f64>()
            };
            let mut params = Vec::new();
            net.flatten_params_into(&mut params);
            let h = 1e-5;
            for (i, analytic_g) in analytic.iter().enumerate() {
                let orig = params[i];
                params[i] = orig + h;
                net.unflatten_params(&params).unwrap();
                let hi = loss(&net);
                params[i] = orig - h;
                net.unflatten_params(&params).unwrap();
                let lo = loss(&net);
                params[i] = orig;
                net.unflatten_params(&params).unwrap();
                let fd = (hi - lo) / (2.0 * h);
                let scale = analytic_g.abs().max(fd.abs()).max(1e-6);
                assert!(
                    (analytic_g - fd).abs() / scale < 1e-4,
                    "param {i}: analytic {analytic_g} vs fd {fd}"
                );
            }
        }
    }
}
