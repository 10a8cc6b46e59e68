//! Core library for a Mars powered-descent guidance laboratory.
//!
//! Everything in this crate is pure computation over `f64` values: rigid-body
//! lander dynamics, episodic descent environments with velocity-field reward
//! shaping, small tanh networks with hand-rolled reverse-mode gradients, a
//! clipped-surrogate policy-gradient trainer with separate discount rates for
//! terminal and shaping rewards, and a closed-form energy-optimal guidance
//! baseline. File formats, CLI, and experiment orchestration live in the
//! companion `lander-lab` crate.
//!
//! The crate is `no_std`-compatible (`default-features = false,
//! features = ["libm"]`); it only needs an allocator.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod dynamics;
pub mod env;
pub mod guidance;
pub mod math;
pub mod nn;
pub mod ppo;
pub mod seeds;

mod float;

pub use math::{Mat3, Quaternion, Vec3};
