//! Episodic reinforcement-learning environments for powered descent.
//!
//! Rewards are split into a shaping stream `r2` (velocity-field tracking,
//! control effort, attitude margins, progress bonus) and a terminal stream
//! `r1` (the landing bonus), which the trainer discounts at different
//! rates.

pub mod config;
pub mod sampling;
pub mod shaping;
mod sixdof;
mod threedof;

pub use config::{
    DivertSpec, EnvOptions, InitialConditionRanges, Range, ShapingConfig, UncertaintyRanges,
    THRUST_3DOF_MAX, THRUST_3DOF_MIN,
};
pub use sampling::{sample_initial_state, sample_uncertainty, UncertaintyDraw};
pub use shaping::{glideslope_metric, target_velocity, FieldSample};
pub use sixdof::SixDofEnv;
pub use threedof::{action_to_thrust, ThreeDofEnv};

use crate::dynamics::DynamicsError;
use crate::math::Vec3;
use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EnvError {
    #[error("step called before reset")]
    NotStarted,
    #[error("step called on a finished episode")]
    EpisodeFinished,
    #[error("action has {got} components, expected {expected}")]
    ActionSize { expected: usize, got: usize },
    #[error("action contains a non-finite value")]
    NonFiniteAction,
    #[error("dynamics failure: {0}")]
    Dynamics(DynamicsError),
}

/// Why an episode ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationCause {
    /// Crossed the ground inside every landing limit.
    Landed,
    /// Crossed the ground outside at least one limit.
    GroundContact,
    /// Pitch or roll exceeded the hard limit.
    AttitudeViolation,
    /// Step cap reached.
    Timeout,
}

impl TerminationCause {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminationCause::Landed => "landed",
            TerminationCause::GroundContact => "ground-contact",
            TerminationCause::AttitudeViolation => "attitude-violation",
            TerminationCause::Timeout => "timeout",
        }
    }
}

/// Result of one guidance step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub observation: Vec<f64>,
    /// Terminal (landing-bonus) reward; nonzero only on a terminal step.
    pub r1: f64,
    /// Shaping reward.
    pub r2: f64,
    pub done: bool,
    pub cause: Option<TerminationCause>,
    /// Propellant consumed so far \[kg\].
    pub fuel_used: f64,
    /// Glideslope ratio contributed by this step, when inside the
    /// final-descent band.
    pub glideslope_sample: Option<f64>,
}

/// Terminal summary of a finished episode.
#[derive(Debug, Clone, Copy)]
pub struct TerminalReport {
    pub cause: TerminationCause,
    /// Target-relative position \[m\].
    pub r: Vec3,
    /// Velocity \[m/s\].
    pub v: Vec3,
    /// (yaw, pitch, roll) \[rad\]; absent in 3-DOF.
    pub attitude: Option<[f64; 3]>,
    /// Body rates \[rad/s\]; absent in 3-DOF.
    pub omega: Option<Vec3>,
    pub steps: usize,
    pub fuel_used: f64,
    /// Mean glideslope over the final 2 m of descent, when sampled.
    pub glideslope: Option<f64>,
    pub fuel_exhausted: bool,
    pub divert_triggered: bool,
}

impl TerminalReport {
    pub fn landed(&self) -> bool {
        self.cause == TerminationCause::Landed
    }

    /// Norm of (pitch, roll); zero for 3-DOF episodes.
    pub fn attitude_norm(&self) -> f64 {
        match self.attitude {
            Some([_, pitch, roll]) => (pitch * pitch + roll * roll).sqrt(),
            None => 0.0,
        }
    }

    pub fn omega_norm(&self) -> f64 {
        self.omega.map(|w| w.norm()).unwrap_or(0.0)
    }
}

/// Episode interface shared by the 6-DOF and 3-DOF tasks.
///
/// `reset(seed)` starts a fresh episode drawn from the given stream and
/// returns the first observation; each instance owns all of its mutable
/// state, so distinct instances may run on different threads.
pub trait Env {
    fn obs_dim(&self) -> usize;
    fn act_dim(&self) -> usize;
    fn reset(&mut self, seed: u64) -> Vec<f64>;
    fn step(&mut self, action: &[f64]) -> Result<StepOutcome, EnvError>;
    fn terminal_report(&self) -> Option<TerminalReport>;
}

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;
