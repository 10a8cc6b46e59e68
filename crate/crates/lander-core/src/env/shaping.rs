//! Velocity-field reward shaping.
//!
//! The shaping reward tracks a target velocity field that points at a
//! waypoint 15 m above the landing site, slowing as time-to-go shrinks;
//! below the waypoint the field switches to a vertical descent.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;

use super::config::ShapingConfig;
use crate::math::Vec3;
use alloc::vec::Vec;

/// Target velocity and time-to-go at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub v_targ: Vec3,
    pub t_go: f64,
}

/// Evaluate the piecewise velocity field at position `r`, velocity `v`,
/// with the episode's field speed `v_o`.
pub fn target_velocity(r: Vec3, v: Vec3, v_o: f64, cfg: &ShapingConfig) -> FieldSample {
    let (r_hat, v_hat) = if r.z > cfg.waypoint_altitude {
        (
            r - Vec3::new(0.0, 0.0, cfg.waypoint_altitude),
            v - Vec3::new(0.0, 0.0, cfg.upper_descent_rate),
        )
    } else {
        (
            Vec3::new(0.0, 0.0, r.z),
            v - Vec3::new(0.0, 0.0, cfg.lower_descent_rate),
        )
    };
    let tau = if r.z > cfg.waypoint_altitude { cfg.tau1 } else { cfg.tau2 };
    let range = r_hat.norm();
    let closing = v_hat.norm().max(cfg.closing_speed_floor);
    let t_go = range / closing;
    let v_targ = if range < cfg.range_epsilon {
        Vec3::zero()
    } else {
        -v_o * (1.0 - (-t_go / tau).exp()) * (r_hat / range)
    };
    FieldSample { v_targ, t_go }
}

/// Shaping-reward terms shared by the 6-DOF and 3-DOF environments:
/// velocity tracking, control effort (normalized by the total-thrust
/// scale), and the per-step progress bonus.
pub fn shaping_reward_translational(
    v: Vec3,
    v_targ: Vec3,
    thrust_norm: f64,
    cfg: &ShapingConfig,
) -> f64 {
    cfg.alpha * (v - v_targ).norm() + cfg.beta * thrust_norm / cfg.thrust_norm_scale + cfg.eta
}

/// True when any attitude angle magnitude exceeds its hard limit.
/// Angles are ordered (yaw, pitch, roll).
pub fn attitude_violated(angles: [f64; 3], cfg: &ShapingConfig) -> bool {
    angles
        .iter()
        .zip(cfg.q_lim.iter())
        .any(|(a, lim)| a.abs() > *lim)
}

/// Attitude terms of the shaping reward: the violation penalty plus the
/// margin penalty on pitch and roll (yaw is never limited).
pub fn shaping_reward_attitude(angles: [f64; 3], cfg: &ShapingConfig) -> f64 {
    let mut r = 0.0;
    if attitude_violated(angles, cfg) {
        r += cfg.gamma_att;
    }
    for i in 1..3 {
        r += cfg.delta * (angles[i].abs() - cfg.q_mgn[i]).max(0.0);
    }
    r
}

/// Landing-bonus predicate for a terminal state: crossed the ground inside
/// all limits. Pitch/roll only for attitude; all body-rate components.
pub fn good_landing(
    r: Vec3,
    v: Vec3,
    pitch_roll: Option<[f64; 2]>,
    omega: Option<Vec3>,
    cfg: &ShapingConfig,
) -> bool {
    let attitude_ok = pitch_roll
        .map(|pr| pr.iter().all(|a| a.abs() < cfg.q_land_lim))
        .unwrap_or(true);
    let rates_ok = omega
        .map(|w| {
            w.x.abs() < cfg.omega_lim && w.y.abs() < cfg.omega_lim && w.z.abs() < cfg.omega_lim
        })
        .unwrap_or(true);
    r.z < 0.0 && r.norm() < cfg.r_lim && v.norm() < cfg.v_lim && attitude_ok && rates_ok
}

/// Observation fed to the agent in the 6-DOF task:
/// `[v - v_targ, q, omega, r_z, t_go]` (12 values). Aside from altitude,
/// the translational coordinates never appear.
pub fn observation_6dof(
    v_error: Vec3,
    q: [f64; 4],
    omega: Vec3,
    altitude: f64,
    t_go: f64,
) -> Vec<f64> {
    let mut obs = Vec::with_capacity(12);
    obs.extend_from_slice(&v_error.to_array());
    obs.extend_from_slice(&q);
    obs.extend_from_slice(&omega.to_array());
    obs.push(altitude);
    obs.push(t_go);
    obs
}

/// 3-DOF observation: `[v - v_targ, r_z, t_go]` (5 values).
pub fn observation_3dof(v_error: Vec3, altitude: f64, t_go: f64) -> Vec<f64> {
    let mut obs = Vec::with_capacity(5);
    obs.extend_from_slice(&v_error.to_array());
    obs.push(altitude);
    obs.push(t_go);
    obs
}

/// Glideslope ratio `|v_z| / |(v_x, v_y)|` for one state, capped so a pure
/// vertical descent reports the cap rather than infinity.
pub fn glideslope_sample(v: Vec3, cap: f64) -> f64 {
    let horizontal = v.x.hypot(v.y);
    if horizontal <= 0.0 {
        return cap;
    }
    (v.z.abs() / horizontal).min(cap)
}

/// Mean glideslope over the samples collected in the final-descent band.
/// `None` when the trajectory never produced a sample.
pub fn glideslope_metric(samples: &[f64]) -> Option<f64> {
    if samples.is_empty() {
        return None;
    }
    Some(samples.iter().sum::<f64>() / samples.len() as f64)
}
