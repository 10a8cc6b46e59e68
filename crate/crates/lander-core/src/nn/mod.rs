//! From-scratch function approximators: tanh networks for the policy mean
//! and value estimate, a diagonal-Gaussian action head, reverse-mode
//! gradients, ADAM, and the incremental input scaler.

pub mod adam;
pub mod codec;
pub mod matrix;
pub mod network;
pub mod policy;
pub mod scaler;

pub use adam::AdamState;
pub use codec::{decode, encode, Checkpoint, CodecError};
pub use matrix::Matrix;
pub use network::{
    policy_hidden_widths, value_hidden_widths, Activation, ForwardCache, Layer, Network,
    NetworkGrads,
};
pub use policy::{kl_approx, log_prob_diag_gaussian, GaussianPolicy};
pub use scaler::RunningScaler;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NnError {
    #[error("shape mismatch: {0}")]
    Shape(&'static str),
    #[error("non-finite gradient")]
    NonFiniteGradient,
}
