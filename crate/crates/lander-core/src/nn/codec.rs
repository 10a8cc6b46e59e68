//! Flat, versioned text encoding of trained parameters.
//!
//! A checkpoint carries the policy (mean network and log-std), the value
//! network, the observation scaler, and a small metadata header. Layout
//! (whitespace-delimited, one record per line):
//!
//! ```text
//! lander-params v1
//! meta <env-kind> <obs_dim> <act_dim> <episodes>
//! net <name> <n_layers>
//! layer <index> <fan_in> <fan_out> <tanh|linear>
//! w <index> <fan_in * fan_out row-major values>
//! b <index> <fan_out values>
//! log_std <act_dim values>
//! scaler <dim> <count> then lines: mean <...> / m2 <...>
//! end
//! ```
//!
//! Values are written with 17 significant digits, so a decode of an encode
//! is bit-exact.

use super::network::{Activation, Layer, Network};
use super::policy::GaussianPolicy;
use super::scaler::RunningScaler;
use super::Matrix;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use thiserror::Error;

pub const FORMAT_MAGIC: &str = "lander-params";
pub const FORMAT_VERSION: &str = "v1";

#[derive(Debug, Error, PartialEq)]
pub enum CodecError {
    #[error("bad header: expected `{FORMAT_MAGIC} {FORMAT_VERSION}`")]
    BadHeader,
    #[error("unexpected end of input at record {0}")]
    Truncated(&'static str),
    #[error("malformed record `{0}`")]
    Malformed(&'static str),
    #[error("bad float value `{0}`")]
    BadValue(String),
}

/// Everything needed to rerun a trained agent.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    /// Environment kind tag, e.g. `6dof` or `3dof`.
    pub env_kind: String,
    /// Episodes consumed when the snapshot was taken.
    pub episodes: u64,
    pub policy: GaussianPolicy,
    pub value: Network,
    pub scaler: RunningScaler,
}

fn push_values(out: &mut String, values: &[f64]) {
    for v in values {
        out.push(' ');
        out.push_str(&format!("{:.17e}", v));
    }
    out.push('\n');
}

fn encode_network(out: &mut String, name: &str, net: &Network) {
    out.push_str(&format!("net {} {}\n", name, net.layers().len()));
    for (i, layer) in net.layers().iter().enumerate() {
        out.push_str(&format!(
            "layer {} {} {} {}\n",
            i,
            layer.fan_in(),
            layer.fan_out(),
            layer.activation.as_str()
        ));
        out.push_str(&format!("w {}", i));
        push_values(out, layer.weights.data());
        out.push_str(&format!("b {}", i));
        push_values(out, &layer.bias);
    }
}

pub fn encode(ck: &Checkpoint) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", FORMAT_MAGIC, FORMAT_VERSION));
    out.push_str(&format!(
        "meta {} {} {} {}\n",
        ck.env_kind,
        ck.policy.obs_dim(),
        ck.policy.act_dim(),
        ck.episodes
    ));
    encode_network(&mut out, "policy_mean", &ck.policy.mean_net);
    out.push_str("log_std");
    push_values(&mut out, &ck.policy.log_std);
    encode_network(&mut out, "value", &ck.value);
    out.push_str(&format!("scaler {} {:.17e}\n", ck.scaler.dim(), ck.scaler.count()));
    out.push_str("mean");
    push_values(&mut out, ck.scaler.mean());
    out.push_str("m2");
    push_values(&mut out, ck.scaler.m2());
    out.push_str("end\n");
    out
}

struct Tokens<'a> {
    iter: core::str::SplitWhitespace<'a>,
}

impl<'a> Tokens<'a> {
    fn new(s: &'a str) -> Self {
        Self { iter: s.split_whitespace() }
    }

    fn next(&mut self, what: &'static str) -> Result<&'a str, CodecError> {
        self.iter.next().ok_or(CodecError::Truncated(what))
    }

    fn expect(&mut self, token: &'static str) -> Result<(), CodecError> {
        if self.next(token)? != token {
            return Err(CodecError::Malformed(token));
        }
        Ok(())
    }

    fn usize(&mut self, what: &'static str) -> Result<usize, CodecError> {
        self.next(what)?
            .parse()
            .map_err(|_| CodecError::Malformed(what))
    }

    fn u64(&mut self, what: &'static str) -> Result<u64, CodecError> {
        self.next(what)?
            .parse()
            .map_err(|_| CodecError::Malformed(what))
    }

    fn f64(&mut self, what: &'static str) -> Result<f64, CodecError> {
        let tok = self.next(what)?;
        tok.parse().map_err(|_| CodecError::BadValue(tok.to_string()))
    }

    fn values(&mut self, n: usize, what: &'static str) -> Result<Vec<f64>, CodecError> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.f64(what)?);
        }
        Ok(out)
    }
}

fn decode_network(t: &mut Tokens<'_>, name: &'static str) -> Result<Network, CodecError> {
    t.expect("net")?;
    if t.next("net name")? != name {
        return Err(CodecError::Malformed(name));
    }
    let n_layers = t.usize("layer count")?;
    let mut layers = Vec::with_capacity(n_layers);
    for i in 0..n_layers {
        t.expect("layer")?;
        if t.usize("layer index")? != i {
            return Err(CodecError::Malformed("layer index"));
        }
        let fan_in = t.usize("fan_in")?;
        let fan_out = t.usize("fan_out")?;
        let act = Activation::parse(t.next("activation")?)
            .ok_or(CodecError::Malformed("activation"))?;
        t.expect("w")?;
        if t.usize("weight index")? != i {
            return Err(CodecError::Malformed("weight index"));
        }
        let w = t.values(fan_in * fan_out, "weights")?;
        t.expect("b")?;
        if t.usize("bias index")? != i {
            return Err(CodecError::Malformed("bias index"));
        }
        let b = t.values(fan_out, "bias")?;
        layers.push(Layer {
            weights: Matrix::from_vec(fan_in, fan_out, w),
            bias: b,
            activation: act,
        });
    }
    Network::from_layers(layers).map_err(|_| CodecError::Malformed("layer chain"))
}

pub fn decode(text: &str) -> Result<Checkpoint, CodecError> {
    let mut t = Tokens::new(text);
    if t.next("magic")? != FORMAT_MAGIC || t.next("version")? != FORMAT_VERSION {
        return Err(CodecError::BadHeader);
    }
    t.expect("meta")?;
    let env_kind = t.next("env kind")?.to_string();
    let _obs_dim = t.usize("obs_dim")?;
    let act_dim = t.usize("act_dim")?;
    let episodes = t.u64("episodes")?;
    let mean_net = decode_network(&mut t, "policy_mean")?;
    t.expect("log_std")?;
    let log_std = t.values(act_dim, "log_std")?;
    let value = decode_network(&mut t, "value")?;
    t.expect("scaler")?;
    let dim = t.usize("scaler dim")?;
    let count = t.f64("scaler count")?;
    t.expect("mean")?;
    let mean = t.values(dim, "scaler mean")?;
    t.expect("m2")?;
    let m2 = t.values(dim, "scaler m2")?;
    t.expect("end")?;
    Ok(Checkpoint {
        env_kind,
        episodes,
        policy: GaussianPolicy { mean_net, log_std },
        value,
        scaler: RunningScaler::from_parts(mean, m2, count),
    })
}
