//! Point-mass 3-DOF descent environment.
//!
//! The action is an inertial thrust vector scaled so a unit component is
//! the aggregate maximum of the engine cluster; its magnitude is clipped
//! into the four-engine envelope. The shaping reward matches the 6-DOF
//! task with the attitude terms dropped.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;

use super::config::{
    DivertSpec, EnvOptions, InitialConditionRanges, ShapingConfig, UncertaintyRanges,
    THRUST_3DOF_MAX, THRUST_3DOF_MIN,
};
use super::sampling::{sample_force_noise_mean, sample_initial_state, sample_uncertainty};
use super::shaping::{
    glideslope_sample, good_landing, observation_3dof, shaping_reward_translational,
    target_velocity,
};
use super::{Env, EnvError, StepOutcome, TerminalReport, TerminationCause};
use crate::dynamics::{point_mass_rk4_step, Disturbance, LanderParams, PointMassState};
use crate::math::Vec3;
use crate::seeds::substream;
use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Map a raw action in `[-1, 1]^3` to a thrust vector inside the envelope:
/// scale by the aggregate maximum, then clip the magnitude into
/// `[4000, 20000]` N preserving direction. A null command defaults to a
/// vertical minimum burn.
pub fn action_to_thrust(action: [f64; 3]) -> Vec3 {
    let scaled = Vec3::from_array(action).clamp(-1.0, 1.0) * THRUST_3DOF_MAX;
    let norm = scaled.norm();
    if norm < 1e-12 {
        return Vec3::new(0.0, 0.0, THRUST_3DOF_MIN);
    }
    let clipped = norm.clamp(THRUST_3DOF_MIN, THRUST_3DOF_MAX);
    scaled * (clipped / norm)
}

/// 3-DOF descent episode; owns its RNG stream.
#[derive(Debug, Clone)]
pub struct ThreeDofEnv {
    ic: InitialConditionRanges,
    uncertainty: UncertaintyRanges,
    shaping: ShapingConfig,
    opts: EnvOptions,
    nominal: LanderParams,

    params: LanderParams,
    state: PointMassState,
    initial_mass: f64,
    field_speed: f64,
    steps: usize,
    done: bool,
    active: bool,
    cause: Option<TerminationCause>,
    rng: ChaCha8Rng,
    noise_mean: Vec3,
    noise_std: f64,
    divert: Option<DivertSpec>,
    divert_triggered: bool,
    target_shift: Vec3,
    glideslope_samples: Vec<f64>,
    fuel_exhausted: bool,
    last_thrust: Vec3,
    last_v_targ: Vec3,
    last_r1: f64,
    last_r2: f64,
}

impl ThreeDofEnv {
    pub fn new(
        ic: InitialConditionRanges,
        uncertainty: UncertaintyRanges,
        shaping: ShapingConfig,
        opts: EnvOptions,
    ) -> Self {
        let nominal = LanderParams::default();
        let divert = opts.divert;
        Self {
            ic,
            uncertainty,
            shaping,
            opts,
            nominal: nominal.clone(),
            params: nominal,
            state: PointMassState { r: Vec3::zero(), v: Vec3::zero(), mass: 2000.0 },
            initial_mass: 2000.0,
            field_speed: 0.0,
            steps: 0,
            done: true,
            active: false,
            cause: None,
            rng: ChaCha8Rng::seed_from_u64(0),
            noise_mean: Vec3::zero(),
            noise_std: 0.0,
            divert,
            divert_triggered: false,
            target_shift: Vec3::zero(),
            glideslope_samples: Vec::new(),
            fuel_exhausted: false,
            last_thrust: Vec3::zero(),
            last_v_targ: Vec3::zero(),
            last_r1: 0.0,
            last_r2: 0.0,
        }
    }

    pub fn published(opts: EnvOptions) -> Self {
        Self::new(
            InitialConditionRanges::table3(),
            UncertaintyRanges::table6(),
            ShapingConfig::default(),
            opts,
        )
    }

    pub fn inject_divert(&mut self, offset: Vec3, trigger_altitude: f64) {
        self.divert = Some(DivertSpec { offset, trigger_altitude });
    }

    pub fn state(&self) -> &PointMassState {
        &self.state
    }

    pub fn params(&self) -> &LanderParams {
        &self.params
    }

    pub fn effective_position(&self) -> Vec3 {
        self.state.r + self.target_shift
    }

    pub fn elapsed_time(&self) -> f64 {
        self.steps as f64 * self.opts.guidance_dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn fuel_used(&self) -> f64 {
        self.initial_mass - self.state.mass
    }

    pub fn last_thrust(&self) -> Vec3 {
        self.last_thrust
    }

    pub fn last_v_targ(&self) -> Vec3 {
        self.last_v_targ
    }

    pub fn last_rewards(&self) -> (f64, f64) {
        (self.last_r1, self.last_r2)
    }

    pub fn glideslope_samples(&self) -> &[f64] {
        &self.glideslope_samples
    }

    pub fn divert_triggered(&self) -> bool {
        self.divert_triggered
    }

    pub fn shaping(&self) -> &ShapingConfig {
        &self.shaping
    }

    fn observe(&mut self) -> Vec<f64> {
        let r = self.effective_position();
        let field = target_velocity(r, self.state.v, self.field_speed, &self.shaping);
        self.last_v_targ = field.v_targ;
        observation_3dof(self.state.v - field.v_targ, r.z, field.t_go)
    }

    fn check_divert_trigger(&mut self) {
        if self.divert_triggered {
            return;
        }
        if let Some(spec) = self.divert {
            if self.state.r.z <= spec.trigger_altitude {
                self.divert_triggered = true;
                self.target_shift = spec.offset;
            }
        }
    }
}

impl Env for ThreeDofEnv {
    fn obs_dim(&self) -> usize {
        5
    }

    fn act_dim(&self) -> usize {
        3
    }

    fn reset(&mut self, seed: u64) -> Vec<f64> {
        let mut setup_rng = ChaCha8Rng::seed_from_u64(substream(seed, 0));
        self.rng = ChaCha8Rng::seed_from_u64(substream(seed, 1));

        let draw = sample_uncertainty(&self.uncertainty, &self.nominal, &mut setup_rng);
        self.params = self.nominal.clone();
        if self.opts.test_mode {
            self.noise_mean =
                sample_force_noise_mean(self.uncertainty.force_noise_mean_bound, &mut setup_rng);
            self.noise_std = self.uncertainty.force_noise_std;
        } else {
            self.params.gravity = draw.gravity;
            self.noise_mean = Vec3::zero();
            self.noise_std = 0.0;
        }
        let full = sample_initial_state(&self.ic, draw.initial_mass, &mut setup_rng);
        self.state = PointMassState { r: full.r, v: full.v, mass: full.mass };
        self.initial_mass = draw.initial_mass;
        self.field_speed = self.shaping.field_speed(self.state.v.norm());
        self.steps = 0;
        self.done = false;
        self.active = true;
        self.cause = None;
        self.divert = self.opts.divert.or(self.divert);
        self.divert_triggered = false;
        self.target_shift = Vec3::zero();
        self.glideslope_samples.clear();
        self.fuel_exhausted = false;
        self.last_thrust = Vec3::zero();
        self.last_r1 = 0.0;
        self.last_r2 = 0.0;
        self.check_divert_trigger();
        self.observe()
    }

    fn step(&mut self, action: &[f64]) -> Result<StepOutcome, EnvError> {
        if !self.active {
            return Err(EnvError::NotStarted);
        }
        if self.done {
            return Err(EnvError::EpisodeFinished);
        }
        if action.len() != 3 {
            return Err(EnvError::ActionSize { expected: 3, got: action.len() });
        }
        for a in action {
            if !a.is_finite() {
                return Err(EnvError::NonFiniteAction);
            }
        }
        let mut thrust = action_to_thrust([action[0], action[1], action[2]]);
        if self.fuel_exhausted || self.state.mass <= self.params.dry_mass {
            self.fuel_exhausted = true;
            thrust = Vec3::zero();
        }
        self.last_thrust = thrust;

        let dist = if self.noise_std > 0.0 || self.noise_mean != Vec3::zero() {
            let n = &mut self.rng;
            let g = |n: &mut ChaCha8Rng| -> f64 { StandardNormal.sample(n) };
            Disturbance {
                force: self.noise_mean + Vec3::new(g(n), g(n), g(n)) * self.noise_std,
                torque: Vec3::zero(),
            }
        } else {
            Disturbance::default()
        };

        let dt = self.opts.guidance_dt / self.opts.substeps as f64;
        let mut thrust_now = thrust;
        for _ in 0..self.opts.substeps {
            if self.state.mass <= self.params.dry_mass {
                self.fuel_exhausted = true;
                thrust_now = Vec3::zero();
            }
            self.state = point_mass_rk4_step(&self.state, thrust_now, dt, &self.params, &dist)
                .map_err(EnvError::Dynamics)?;
        }
        self.steps += 1;

        self.check_divert_trigger();
        let r_eff = self.effective_position();
        let field = target_velocity(r_eff, self.state.v, self.field_speed, &self.shaping);
        let r2 = shaping_reward_translational(
            self.state.v,
            field.v_targ,
            thrust.norm(),
            &self.shaping,
        );

        let mut glide = None;
        if r_eff.z > 0.0 && r_eff.z <= 2.0 {
            let s = glideslope_sample(self.state.v, self.shaping.glideslope_cap);
            self.glideslope_samples.push(s);
            glide = Some(s);
        }

        let mut r1 = 0.0;
        if r_eff.z <= 0.0 {
            self.done = true;
            if good_landing(r_eff, self.state.v, None, None, &self.shaping) {
                r1 = self.shaping.kappa;
                self.cause = Some(TerminationCause::Landed);
            } else {
                self.cause = Some(TerminationCause::GroundContact);
            }
        } else if self.steps >= self.opts.timeout_steps {
            self.done = true;
            self.cause = Some(TerminationCause::Timeout);
        }

        self.last_r1 = r1;
        self.last_r2 = r2;
        let observation = self.observe();
        Ok(StepOutcome {
            observation,
            r1,
            r2,
            done: self.done,
            cause: self.cause,
            fuel_used: self.fuel_used(),
            glideslope_sample: glide,
        })
    }

    fn terminal_report(&self) -> Option<TerminalReport> {
        if !self.done {
            return None;
        }
        Some(TerminalReport {
            cause: self.cause.expect("terminated episode has a cause"),
            r: self.effective_position(),
            v: self.state.v,
            attitude: None,
            omega: None,
            steps: self.steps,
            fuel_used: self.fuel_used(),
            glideslope: super::shaping::glideslope_metric(&self.glideslope_samples),
            fuel_exhausted: self.fuel_exhausted,
            divert_triggered: self.divert_triggered,
        })
    }
}
