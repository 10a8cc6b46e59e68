//! Episodic 6-DOF powered-descent environment.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;

use super::config::{
    DivertSpec, EnvOptions, InitialConditionRanges, ShapingConfig, UncertaintyRanges,
};
use super::sampling::{sample_force_noise_mean, sample_initial_state, sample_uncertainty};
use super::shaping::{
    attitude_violated, glideslope_sample, good_landing, observation_6dof,
    shaping_reward_attitude, shaping_reward_translational, target_velocity,
};
use super::{Env, EnvError, StepOutcome, TerminalReport, TerminationCause};
use crate::dynamics::{
    rk4_step, thruster_wrench, Disturbance, LanderParams, LanderState, ThrusterLayout, Wrench,
    ENGINE_COUNT,
};
use crate::math::{Mat3, Quaternion, Vec3};
use crate::seeds::substream;
use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// 6-DOF descent episode. Each instance owns its RNG stream; instances are
/// independent and safe to run in parallel.
#[derive(Debug, Clone)]
pub struct SixDofEnv {
    ic: InitialConditionRanges,
    uncertainty: UncertaintyRanges,
    shaping: ShapingConfig,
    opts: EnvOptions,
    layout: ThrusterLayout,
    nominal: LanderParams,

    params: LanderParams,
    state: LanderState,
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
    last_command: [f64; ENGINE_COUNT],
    last_v_targ: Vec3,
    last_t_go: f64,
    last_r1: f64,
    last_r2: f64,
}

impl SixDofEnv {
    pub fn new(
        ic: InitialConditionRanges,
        uncertainty: UncertaintyRanges,
        shaping: ShapingConfig,
        opts: EnvOptions,
    ) -> Self {
        let nominal = LanderParams::default();
        let state = LanderState {
            r: Vec3::zero(),
            v: Vec3::zero(),
            q: Quaternion::identity(),
            omega: Vec3::zero(),
            mass: 2000.0,
        };
        let divert = opts.divert;
        Self {
            ic,
            uncertainty,
            shaping,
            opts,
            layout: ThrusterLayout::standard(),
            nominal: nominal.clone(),
            params: nominal,
            state,
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
            last_command: [0.0; ENGINE_COUNT],
            last_v_targ: Vec3::zero(),
            last_t_go: 0.0,
            last_r1: 0.0,
            last_r2: 0.0,
        }
    }

    /// Published setup: Table-3 ellipse, Table-6 uncertainty, default
    /// shaping coefficients.
    pub fn published(opts: EnvOptions) -> Self {
        Self::new(
            InitialConditionRanges::table3(),
            UncertaintyRanges::table6(),
            ShapingConfig::default(),
            opts,
        )
    }

    /// Retarget mid-flight: once altitude first drops to
    /// `trigger_altitude`, the target origin shifts by `offset`.
    pub fn inject_divert(&mut self, offset: Vec3, trigger_altitude: f64) {
        self.divert = Some(DivertSpec { offset, trigger_altitude });
    }

    pub fn state(&self) -> &LanderState {
        &self.state
    }

    pub fn params(&self) -> &LanderParams {
        &self.params
    }

    /// Target-relative position (accounts for a triggered divert).
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

    pub fn last_command(&self) -> [f64; ENGINE_COUNT] {
        self.last_command
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
        self.last_t_go = field.t_go;
        observation_6dof(
            self.state.v - field.v_targ,
            self.state.q.to_array(),
            self.state.omega,
            r.z,
            field.t_go,
        )
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

impl Env for SixDofEnv {
    fn obs_dim(&self) -> usize {
        12
    }

    fn act_dim(&self) -> usize {
        ENGINE_COUNT
    }

    fn reset(&mut self, seed: u64) -> Vec<f64> {
        let mut setup_rng = ChaCha8Rng::seed_from_u64(substream(seed, 0));
        self.rng = ChaCha8Rng::seed_from_u64(substream(seed, 1));

        let draw = sample_uncertainty(&self.uncertainty, &self.nominal, &mut setup_rng);
        self.params = self.nominal.clone();
        if self.opts.test_mode {
            // Testing perturbs the wet mass and adds force noise; gravity
            // and inertia stay nominal.
            self.params.inertia_noise = Mat3::zero();
            self.noise_mean =
                sample_force_noise_mean(self.uncertainty.force_noise_mean_bound, &mut setup_rng);
            self.noise_std = self.uncertainty.force_noise_std;
        } else {
            self.params.gravity = draw.gravity;
            self.params.inertia_noise = draw.inertia_noise;
            self.noise_mean = Vec3::zero();
            self.noise_std = 0.0;
        }
        self.state = sample_initial_state(&self.ic, draw.initial_mass, &mut setup_rng);
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
        self.last_command = [0.0; ENGINE_COUNT];
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
        if action.len() != ENGINE_COUNT {
            return Err(EnvError::ActionSize { expected: ENGINE_COUNT, got: action.len() });
        }

        // Engine-wise mapping: unit action is full throttle; commands clip
        // into [T_min, T_max] because engines cannot shut off.
        let throttle_floor = self.layout.t_min / self.layout.t_max;
        let mut t_cmd = [0.0; ENGINE_COUNT];
        for (c, a) in t_cmd.iter_mut().zip(action.iter()) {
            if !a.is_finite() {
                return Err(EnvError::NonFiniteAction);
            }
            *c = a.clamp(throttle_floor, 1.0) * self.layout.t_max;
        }
        if self.fuel_exhausted || self.state.mass <= self.params.dry_mass {
            self.fuel_exhausted = true;
            t_cmd = [0.0; ENGINE_COUNT];
        }
        self.last_command = t_cmd;
        let wrench = thruster_wrench(&self.layout, &t_cmd).expect("finite commands");
        let total_thrust: f64 = t_cmd.iter().sum();

        // Force noise is drawn per guidance step and held over substeps.
        let dist = if self.noise_std > 0.0 || self.noise_mean != Vec3::zero() {
            let n = &mut self.rng;
            let g = |n: &mut ChaCha8Rng| -> f64 { StandardNormal.sample(n) };
            Disturbance {
                force: self.noise_mean
                    + Vec3::new(g(n), g(n), g(n)) * self.noise_std,
                torque: Vec3::zero(),
            }
        } else {
            Disturbance::default()
        };

        let dt = self.opts.guidance_dt / self.opts.substeps as f64;
        let mut wrench_now = wrench;
        let mut thrust_now = total_thrust;
        for _ in 0..self.opts.substeps {
            if self.state.mass <= self.params.dry_mass {
                self.fuel_exhausted = true;
                wrench_now = Wrench::default();
                thrust_now = 0.0;
            }
            self.state = rk4_step(&self.state, &wrench_now, thrust_now, dt, &self.params, &dist)
                .map_err(EnvError::Dynamics)?;
        }
        self.steps += 1;

        self.check_divert_trigger();
        let r_eff = self.effective_position();
        let field = target_velocity(r_eff, self.state.v, self.field_speed, &self.shaping);
        let (yaw, pitch, roll) = self.state.q.to_yaw_pitch_roll();
        let angles = [yaw, pitch, roll];

        let mut r2 = shaping_reward_translational(
            self.state.v,
            field.v_targ,
            total_thrust,
            &self.shaping,
        );
        r2 += shaping_reward_attitude(angles, &self.shaping);

        let mut glide = None;
        if r_eff.z > 0.0 && r_eff.z <= 2.0 {
            let s = glideslope_sample(self.state.v, self.shaping.glideslope_cap);
            self.glideslope_samples.push(s);
            glide = Some(s);
        }

        let mut r1 = 0.0;
        if r_eff.z <= 0.0 {
            self.done = true;
            if good_landing(
                r_eff,
                self.state.v,
                Some([pitch, roll]),
                Some(self.state.omega),
                &self.shaping,
            ) {
                r1 = self.shaping.kappa;
                self.cause = Some(TerminationCause::Landed);
            } else {
                self.cause = Some(TerminationCause::GroundContact);
            }
        } else if attitude_violated(angles, &self.shaping) {
            self.done = true;
            self.cause = Some(TerminationCause::AttitudeViolation);
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
        let (yaw, pitch, roll) = self.state.q.to_yaw_pitch_roll();
        Some(TerminalReport {
            cause: self.cause.expect("terminated episode has a cause"),
            r: self.effective_position(),
            v: self.state.v,
            attitude: Some([yaw, pitch, roll]),
            omega: Some(self.state.omega),
            steps: self.steps,
            fuel_used: self.fuel_used(),
            glideslope: super::shaping::glideslope_metric(&self.glideslope_samples),
            fuel_exhausted: self.fuel_exhausted,
            divert_triggered: self.divert_triggered,
        })
    }
}
