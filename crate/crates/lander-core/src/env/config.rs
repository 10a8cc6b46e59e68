//! Environment configuration: initial-condition ellipses, parameter
//! uncertainty, and the reward-shaping coefficients.

use crate::math::Vec3;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("range for {0} has min > max")]
    InvertedRange(&'static str),
    #[error("invalid shaping config: {0}")]
    Shaping(&'static str),
}

/// Uniform sampling bounds for one scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub const fn fixed(v: f64) -> Self {
        Self { min: v, max: v }
    }

    pub fn valid(&self) -> bool {
        self.min <= self.max && self.min.is_finite() && self.max.is_finite()
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.min + self.max)
    }
}

/// Deployment-ellipse ranges: position/velocity per axis plus attitude and
/// body rates. Axes are downrange (x), crossrange (y), elevation (z).
#[derive(Debug, Clone, PartialEq)]
pub struct InitialConditionRanges {
    pub position: [Range; 3],
    pub velocity: [Range; 3],
    /// Yaw, pitch, roll \[rad\].
    pub attitude: [Range; 3],
    /// Yaw, pitch, roll rates \[rad/s\].
    pub rates: [Range; 3],
}

impl InitialConditionRanges {
    /// The 4 km^2 optimization ellipse.
    pub fn table3() -> Self {
        use core::f64::consts::PI;
        Self {
            position: [
                Range::new(0.0, 2000.0),
                Range::new(-1000.0, 1000.0),
                Range::new(2300.0, 2400.0),
            ],
            velocity: [
                Range::new(-70.0, -10.0),
                Range::new(-30.0, 30.0),
                Range::new(-90.0, -70.0),
            ],
            attitude: [
                Range::new(-PI / 8.0, PI / 8.0),
                // Published bounds are asymmetric; kept verbatim.
                Range::new(PI / 4.0 - PI / 8.0, PI / 4.0 + PI / 16.0),
                Range::new(-PI / 8.0, PI / 8.0),
            ],
            rates: [
                Range::fixed(0.0),
                Range::new(-0.01, 0.01),
                Range::new(-0.01, 0.01),
            ],
        }
    }

    /// Extended 9 km^2 ellipse.
    pub fn extended_9km2() -> Self {
        let mut ic = Self::table3();
        ic.position = [
            Range::new(0.0, 3000.0),
            Range::new(-1500.0, 1500.0),
            Range::new(2400.0, 2500.0),
        ];
        ic
    }

    /// Extended 12 km^2 ellipse (raised deployment altitude).
    pub fn extended_12km2() -> Self {
        let mut ic = Self::table3();
        ic.position = [
            Range::new(0.0, 4000.0),
            Range::new(-1500.0, 1500.0),
            Range::new(2900.0, 3100.0),
        ];
        ic
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let all = [
            (&self.position, "position"),
            (&self.velocity, "velocity"),
            (&self.attitude, "attitude"),
            (&self.rates, "rates"),
        ];
        for (ranges, name) in all {
            for r in ranges.iter() {
                if !r.valid() {
                    return Err(ConfigError::InvertedRange(name));
                }
            }
        }
        Ok(())
    }
}

/// Per-episode parameter uncertainty plus the test-time force-noise model.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyRanges {
    /// Initial wet mass \[kg\].
    pub initial_mass: Range,
    /// Gravity bounds per axis \[m/s^2\] (z negative, pointing down).
    pub gravity: [Range; 3],
    /// Symmetric bound for diagonal inertia noise \[kg m^2\].
    pub inertia_diag_bound: f64,
    /// Symmetric bound for off-diagonal inertia noise \[kg m^2\].
    pub inertia_offdiag_bound: f64,
    /// Test-time force noise: per-episode constant mean, uniform in
    /// +/- this bound per axis \[N\].
    pub force_noise_mean_bound: f64,
    /// Test-time force noise: per-step Gaussian standard deviation \[N\].
    pub force_noise_std: f64,
}

impl UncertaintyRanges {
    /// The published optimization uncertainty plus the test-noise model.
    pub fn table6() -> Self {
        Self {
            initial_mass: Range::new(1900.0, 2100.0),
            gravity: [
                Range::new(-0.07, 0.07),
                Range::new(-0.07, 0.07),
                Range::new(-3.79, -3.64),
            ],
            inertia_diag_bound: 100.0,
            inertia_offdiag_bound: 10.0,
            force_noise_mean_bound: 100.0,
            force_noise_std: 100.0,
        }
    }

    /// No perturbations at all (deterministic episodes).
    pub fn none() -> Self {
        Self {
            initial_mass: Range::fixed(2000.0),
            gravity: [
                Range::fixed(0.0),
                Range::fixed(0.0),
                Range::fixed(-3.7114),
            ],
            inertia_diag_bound: 0.0,
            inertia_offdiag_bound: 0.0,
            force_noise_mean_bound: 0.0,
            force_noise_std: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.initial_mass.valid() {
            return Err(ConfigError::InvertedRange("initial_mass"));
        }
        for g in &self.gravity {
            if !g.valid() {
                return Err(ConfigError::InvertedRange("gravity"));
            }
        }
        Ok(())
    }
}

/// Velocity-field and reward coefficients.
///
/// Attitude vectors are ordered (yaw, pitch, roll); the yaw limit is never
/// reachable and yaw is excluded from the margin penalty.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapingConfig {
    /// Velocity-field speed scale \[m/s\]. `None` latches to the episode's
    /// initial speed.
    pub v_o: Option<f64>,
    /// Field time constant above the waypoint \[s\].
    pub tau1: f64,
    /// Field time constant below the waypoint \[s\].
    pub tau2: f64,
    /// Velocity-tracking penalty weight (<= 0).
    pub alpha: f64,
    /// Control-effort penalty weight (<= 0).
    pub beta: f64,
    /// Attitude-violation penalty (<= 0), applied once on termination.
    pub gamma_att: f64,
    /// Attitude-margin penalty weight (<= 0).
    pub delta: f64,
    /// Per-step progress bonus (> 0).
    pub eta: f64,
    /// Landing bonus (> 0).
    pub kappa: f64,
    /// Hard attitude limits (yaw, pitch, roll) \[rad\].
    pub q_lim: [f64; 3],
    /// Margin thresholds (yaw, pitch, roll) \[rad\].
    pub q_mgn: [f64; 3],
    /// Landing limits.
    pub r_lim: f64,
    pub v_lim: f64,
    /// Landing attitude limit on pitch and roll \[rad\].
    pub q_land_lim: f64,
    /// Landing body-rate limit \[rad/s\].
    pub omega_lim: f64,
    /// Waypoint altitude separating the two field segments \[m\].
    pub waypoint_altitude: f64,
    /// Targeted descent rate above / below the waypoint \[m/s\].
    pub upper_descent_rate: f64,
    pub lower_descent_rate: f64,
    /// Floor on the closing speed used in the time-to-go ratio \[m/s\].
    pub closing_speed_floor: f64,
    /// Below this range the target velocity is zero \[m\].
    pub range_epsilon: f64,
    /// Thrust-norm divisor for the control penalty \[N\].
    pub thrust_norm_scale: f64,
    /// Per-sample cap on the glideslope ratio.
    pub glideslope_cap: f64,
}

impl Default for ShapingConfig {
    fn default() -> Self {
        use core::f64::consts::PI;
        Self {
            v_o: None,
            tau1: 20.0,
            tau2: 100.0,
            alpha: -0.01,
            beta: -0.05,
            gamma_att: -100.0,
            delta: -20.0,
            eta: 0.01,
            kappa: 10.0,
            q_lim: [2.0 * PI, 7.0 * PI / 16.0, 7.0 * PI / 16.0],
            q_mgn: [0.0, 5.0 * PI / 16.0, 5.0 * PI / 16.0],
            r_lim: 5.0,
            v_lim: 2.0,
            q_land_lim: 0.2,
            omega_lim: 0.2,
            waypoint_altitude: 15.0,
            upper_descent_rate: -2.0,
            lower_descent_rate: -1.0,
            closing_speed_floor: 0.1,
            range_epsilon: 1e-8,
            thrust_norm_scale: 20000.0,
            glideslope_cap: 1000.0,
        }
    }
}

impl ShapingConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.tau1 > 0.0 && self.tau2 > 0.0) {
            return Err(ConfigError::Shaping("tau1, tau2 must be positive"));
        }
        if !(self.kappa > 0.0) {
            return Err(ConfigError::Shaping("kappa must be positive"));
        }
        if !(self.eta > 0.0) {
            return Err(ConfigError::Shaping("eta must be positive"));
        }
        if self.alpha > 0.0 || self.beta > 0.0 || self.gamma_att > 0.0 || self.delta > 0.0 {
            return Err(ConfigError::Shaping("penalty weights must be <= 0"));
        }
        if !(self.closing_speed_floor > 0.0 && self.thrust_norm_scale > 0.0) {
            return Err(ConfigError::Shaping("scales must be positive"));
        }
        Ok(())
    }

    /// Field speed scale for an episode starting at speed `initial_speed`.
    pub fn field_speed(&self, initial_speed: f64) -> f64 {
        self.v_o.unwrap_or(initial_speed)
    }
}

/// 3-DOF thrust envelope: four engines at min/max throttle, acting as a
/// single vectored thruster.
pub const THRUST_3DOF_MIN: f64 = 4000.0;
pub const THRUST_3DOF_MAX: f64 = 20000.0;

/// Divert injection: shift the target origin by `offset` once altitude
/// first drops to `trigger_altitude`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivertSpec {
    pub offset: Vec3,
    pub trigger_altitude: f64,
}

/// Knobs shared by the 6-DOF and 3-DOF environments.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvOptions {
    /// Guidance period \[s\].
    pub guidance_dt: f64,
    /// Integrator substeps per guidance period.
    pub substeps: usize,
    /// Episode cap in guidance steps.
    pub timeout_steps: usize,
    /// Test mode: nominal gravity/inertia, force noise on.
    pub test_mode: bool,
    pub divert: Option<DivertSpec>,
}

impl Default for EnvOptions {
    fn default() -> Self {
        Self {
            guidance_dt: 0.2,
            substeps: 4,
            timeout_steps: 600,
            test_mode: false,
            divert: None,
        }
    }
}
