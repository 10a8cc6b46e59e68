//! Energy-optimal closed-loop guidance (DR/DV) with a waypoint above the
//! landing site, used as the fuel-consumption reference.
//!
//! The feedback law drives relative position and velocity to zero in
//! `t_go` under constant gravity:
//!
//! `a_cmd = -4 v / t_go - 6 r / t_go^2 - g`
//!
//! with the optimal `t_go` the smallest positive root of
//!
//! `|g|^2 t^4 - 4 |v|^2 t^2 - 24 (r . v) t - 36 |r|^2 = 0`.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;

use crate::dynamics::PointMassState;
use crate::env::{THRUST_3DOF_MAX, THRUST_3DOF_MIN};
use crate::math::Vec3;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GuidanceError {
    #[error("time-to-go must be positive (got {0})")]
    NonPositiveTgo(f64),
    #[error("state is already at the target")]
    Degenerate,
    #[error("no positive root; fall back to t_go = |r|/|v| = {fallback}")]
    NoPositiveRoot { fallback: f64 },
}

/// Waypoint geometry and actuator envelope for the descent profile.
#[derive(Debug, Clone, PartialEq)]
pub struct DrdvConfig {
    /// Altitude of the intermediate aim point \[m\].
    pub waypoint_altitude: f64,
    /// Velocity targeted at the waypoint \[m/s\].
    pub waypoint_velocity: Vec3,
    /// Velocity targeted at touchdown \[m/s\].
    pub final_velocity: Vec3,
    /// Total-thrust envelope \[N\].
    pub thrust_min: f64,
    pub thrust_max: f64,
    /// Root-solve tolerance on t_go \[s\].
    pub tgo_tolerance: f64,
    /// Commands are computed against at least this horizon \[s\].
    pub tgo_floor: f64,
}

impl Default for DrdvConfig {
    fn default() -> Self {
        Self {
            waypoint_altitude: 15.0,
            waypoint_velocity: Vec3::new(0.0, 0.0, -2.0),
            final_velocity: Vec3::new(0.0, 0.0, -1.0),
            thrust_min: THRUST_3DOF_MIN,
            thrust_max: THRUST_3DOF_MAX,
            tgo_tolerance: 1e-10,
            tgo_floor: 0.2,
        }
    }
}

/// One guidance evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceCommand {
    /// Commanded specific force (includes gravity compensation) \[m/s^2\].
    pub accel: Vec3,
    /// Thrust after envelope clipping \[N\].
    pub thrust: Vec3,
    /// Horizon used for the command \[s\].
    pub t_go: f64,
}

/// Free-final-time optimality residual.
pub fn tgo_quartic(r: Vec3, v: Vec3, g: Vec3, t: f64) -> f64 {
    g.dot(g) * t.powi(4) - 4.0 * v.dot(v) * t * t - 24.0 * r.dot(v) * t - 36.0 * r.dot(r)
}

/// Smallest positive root of the t_go quartic, found by bracketed
/// bisection refined to machine precision (never coarser than `tol`).
pub fn solve_tgo(r: Vec3, v: Vec3, g: Vec3, tol: f64) -> Result<f64, GuidanceError> {
    let r2 = r.dot(r);
    let v2 = v.dot(v);
    if r2 < 1e-16 && v2 < 1e-16 {
        return Err(GuidanceError::Degenerate);
    }
    let f = |t: f64| tgo_quartic(r, v, g, t);

    // The residual starts non-positive (it is -36 |r|^2 at t = 0, and for
    // r = 0 the -4 |v|^2 t^2 term dominates small t); scan a geometric grid
    // for the first sign change.
    let mut lo = 1e-9;
    let mut f_lo = f(lo);
    if f_lo > 0.0 {
        // Root below the scan start; treat as immediate arrival.
        return Ok(lo);
    }
    let mut hi = lo;
    let mut found = false;
    while hi < 1e9 {
        hi *= 2.0;
        let f_hi = f(hi);
        if f_hi > 0.0 {
            found = true;
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    if !found {
        let fallback = if v2 > 0.0 { (r2 / v2).sqrt() } else { 1.0 };
        return Err(GuidanceError::NoPositiveRoot { fallback });
    }
    let _ = f_lo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi || (hi - lo) < tol * 1e-6 {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Energy-optimal feedback acceleration driving `(r_rel, v_rel)` to zero
/// in `t_go` under constant gravity `g`. Returns the specific thrust force
/// (gravity already compensated).
pub fn drdv_accel(r_rel: Vec3, v_rel: Vec3, g: Vec3, t_go: f64) -> Result<Vec3, GuidanceError> {
    if !(t_go > 0.0) {
        return Err(GuidanceError::NonPositiveTgo(t_go));
    }
    Ok(-4.0 / t_go * v_rel - 6.0 / (t_go * t_go) * r_rel - g)
}

/// Closed-loop waypoint policy: above the waypoint altitude it steers to
/// the waypoint at the approach velocity, below it steers to the origin at
/// the final descent velocity. Thrust is the commanded specific force
/// times mass, magnitude-clipped into the envelope.
pub fn drdv_waypoint_policy(
    state: &PointMassState,
    gravity: Vec3,
    cfg: &DrdvConfig,
) -> GuidanceCommand {
    let (r_rel, v_rel) = if state.r.z > cfg.waypoint_altitude {
        (
            state.r - Vec3::new(0.0, 0.0, cfg.waypoint_altitude),
            state.v - cfg.waypoint_velocity,
        )
    } else {
        (state.r, state.v - cfg.final_velocity)
    };
    let t_go = match solve_tgo(r_rel, v_rel, gravity, cfg.tgo_tolerance) {
        Ok(t) => t,
        Err(GuidanceError::NoPositiveRoot { fallback }) => fallback,
        Err(_) => cfg.tgo_floor,
    }
    .max(cfg.tgo_floor);
    let accel =
        drdv_accel(r_rel, v_rel, gravity, t_go).expect("t_go floored above zero");
    let raw = accel * state.mass;
    let norm = raw.norm();
    let thrust = if norm < 1e-12 {
        Vec3::new(0.0, 0.0, cfg.thrust_min)
    } else {
        raw * (norm.clamp(cfg.thrust_min, cfg.thrust_max) / norm)
    };
    GuidanceCommand { accel, thrust, t_go }
}

/// Express a thrust command as a 3-DOF environment action (unit action is
/// the aggregate maximum thrust).
pub fn thrust_to_action(thrust: Vec3) -> [f64; 3] {
    [
        thrust.x / THRUST_3DOF_MAX,
        thrust.y / THRUST_3DOF_MAX,
        thrust.z / THRUST_3DOF_MAX,
    ]
}
