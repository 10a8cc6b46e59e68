//! Rigid-body 6-DOF lander dynamics and a point-mass 3-DOF variant.
//!
//! The body frame has z passing vertically through the lander; all four
//! engines thrust along body +z, so roll/pitch torque comes from differential
//! throttling and there is no direct z-axis torque authority.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;

use crate::math::{Mat3, Quaternion, Vec3};
use alloc::vec::Vec;
use thiserror::Error;

/// Number of descent engines.
pub const ENGINE_COUNT: usize = 4;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("quaternion norm deviates from 1 by {0:.3e}")]
    NonUnitQuaternion(f64),
    #[error("inertia matrix is singular")]
    SingularInertia,
    #[error("state became non-finite during integration")]
    DivergedState,
}

/// Per-engine body-frame geometry and the common thrust envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct ThrusterLayout {
    /// Body-frame position of each engine \[m\].
    pub positions: [Vec3; ENGINE_COUNT],
    /// Unit direction of the force each engine produces when fired.
    pub directions: [Vec3; ENGINE_COUNT],
    /// Minimum thrust while running \[N\].
    pub t_min: f64,
    /// Maximum thrust \[N\].
    pub t_max: f64,
}

impl ThrusterLayout {
    /// The four-engine layout used throughout: engines 1..4 at
    /// (0,-2,-1), (0,2,-1), (-2,0,-1), (2,0,-1) m, all thrusting along
    /// body +z, throttleable between 1000 and 5000 N.
    pub fn standard() -> Self {
        let up = Vec3::new(0.0, 0.0, 1.0);
        Self {
            positions: [
                Vec3::new(0.0, -2.0, -1.0),
                Vec3::new(0.0, 2.0, -1.0),
                Vec3::new(-2.0, 0.0, -1.0),
                Vec3::new(2.0, 0.0, -1.0),
            ],
            directions: [up; ENGINE_COUNT],
            t_min: 1000.0,
            t_max: 5000.0,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.t_min > 0.0 && self.t_min < self.t_max) {
            return Err(DynamicsError::NonFinite("thrust bounds"));
        }
        for d in &self.directions {
            if (d.norm() - 1.0).abs() > 1e-9 {
                return Err(DynamicsError::NonFinite("direction not unit"));
            }
        }
        Ok(())
    }
}

/// Physical parameters held fixed over an episode.
#[derive(Debug, Clone, PartialEq)]
pub struct LanderParams {
    /// Body-ellipsoid semi-axes along x, y, z \[m\].
    pub semi_axes: Vec3,
    /// Specific impulse \[s\].
    pub isp: f64,
    /// Reference gravity for the mass-flow equation \[m/s^2\].
    pub g_ref: f64,
    /// Planet gravity vector \[m/s^2\].
    pub gravity: Vec3,
    /// Additive inertia perturbation sampled per episode \[kg m^2\].
    pub inertia_noise: Mat3,
    /// Mass floor; thrust is cut when fuel is exhausted \[kg\].
    pub dry_mass: f64,
}

impl Default for LanderParams {
    fn default() -> Self {
        Self {
            semi_axes: Vec3::new(2.0, 2.0, 1.0),
            isp: 225.0,
            g_ref: 9.8,
            gravity: Vec3::new(0.0, 0.0, -3.7114),
            inertia_noise: Mat3::zero(),
            dry_mass: 1500.0,
        }
    }
}

impl LanderParams {
    /// Inertia at the given mass: uniform-density ellipsoid plus the
    /// episode noise matrix. Recomputed as fuel depletes.
    pub fn inertia(&self, mass: f64) -> Mat3 {
        ellipsoid_inertia(mass, self.semi_axes.x, self.semi_axes.y, self.semi_axes.z)
            + self.inertia_noise
    }
}

/// Body force and torque from the engine cluster.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Wrench {
    /// Body-frame force \[N\].
    pub force: Vec3,
    /// Body-frame torque \[N m\].
    pub torque: Vec3,
}

/// External disturbance: inertial force plus body torque.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Disturbance {
    /// Inertial-frame force \[N\].
    pub force: Vec3,
    /// Body-frame torque \[N m\].
    pub torque: Vec3,
}

/// Full 6-DOF simulation state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanderState {
    /// Position in the target-centered inertial frame \[m\].
    pub r: Vec3,
    /// Inertial velocity \[m/s\].
    pub v: Vec3,
    /// Attitude quaternion (inertial to body), scalar-last.
    pub q: Quaternion,
    /// Body rates \[rad/s\].
    pub omega: Vec3,
    /// Mass \[kg\].
    pub mass: f64,
}

impl LanderState {
    pub fn is_finite(&self) -> bool {
        self.r.is_finite()
            && self.v.is_finite()
            && self.q.is_finite()
            && self.omega.is_finite()
            && self.mass.is_finite()
    }
}

/// Time derivative of [`LanderState`]; same layout, unnormalized quaternion.
#[derive(Debug, Clone, Copy)]
pub struct StateDerivative {
    pub r_dot: Vec3,
    pub v_dot: Vec3,
    pub q_dot: Quaternion,
    pub omega_dot: Vec3,
    pub mass_dot: f64,
}

/// Body force and torque for the commanded per-engine thrusts:
/// `F_B = sum d_i T_i`, `L_B = sum r_i x (d_i T_i)`.
pub fn thruster_wrench(
    layout: &ThrusterLayout,
    t_cmd: &[f64; ENGINE_COUNT],
) -> Result<Wrench, DynamicsError> {
    let mut force = Vec3::zero();
    let mut torque = Vec3::zero();
    for i in 0..ENGINE_COUNT {
        if !t_cmd[i].is_finite() {
            return Err(DynamicsError::NonFinite("thrust command"));
        }
        let f_i = layout.directions[i] * t_cmd[i];
        force += f_i;
        torque += layout.positions[i].cross(f_i);
    }
    Ok(Wrench { force, torque })
}

/// DCM mapping inertial to body coordinates. Errors when the quaternion
/// norm deviates from one by more than `1e-6`.
pub fn attitude_matrix(q: Quaternion) -> Result<Mat3, DynamicsError> {
    let dev = (q.norm() - 1.0).abs();
    if dev > 1e-6 {
        return Err(DynamicsError::NonUnitQuaternion(dev));
    }
    Ok(q.attitude_matrix())
}

/// Inertia of a uniform-density ellipsoid with semi-axes a, b, c:
/// `diag(m/5 (b^2+c^2), m/5 (a^2+c^2), m/5 (a^2+b^2))`.
pub fn ellipsoid_inertia(mass: f64, a: f64, b: f64, c: f64) -> Mat3 {
    debug_assert!(mass > 0.0 && a > 0.0 && b > 0.0 && c > 0.0);
    let s = mass / 5.0;
    Mat3::diag(s * (b * b + c * c), s * (a * a + c * c), s * (a * a + b * b))
}

/// Equations of motion:
/// `r' = v`, `v' = (A^T(q) F_B + F_env)/m + g`,
/// `J w' = -w x (J w) + L_B + L_env`, `q' = 1/2 Xi(q) w`,
/// `m' = -(sum_i T_i)/(Isp g_ref)` (unit engine directions).
///
/// `total_thrust` is the sum of commanded engine thrust magnitudes, which
/// drives mass flow independently of force cancellation.
pub fn state_derivative(
    s: &LanderState,
    wrench: &Wrench,
    total_thrust: f64,
    p: &LanderParams,
    dist: &Disturbance,
) -> Result<StateDerivative, DynamicsError> {
    let a = s.q.attitude_matrix();
    let inertia = p.inertia(s.mass);
    let inertia_inv = inertia.inverse().ok_or(DynamicsError::SingularInertia)?;
    let force_inertial = a.transpose() * wrench.force + dist.force;
    let torque = wrench.torque + dist.torque - s.omega.cross(inertia * s.omega);
    Ok(StateDerivative {
        r_dot: s.v,
        v_dot: force_inertial / s.mass + p.gravity,
        q_dot: s.q.kinematics(s.omega),
        omega_dot: inertia_inv * torque,
        mass_dot: -total_thrust / (p.isp * p.g_ref),
    })
}

fn advance(s: &LanderState, d: &StateDerivative, dt: f64) -> LanderState {
    LanderState {
        r: s.r + d.r_dot * dt,
        v: s.v + d.v_dot * dt,
        q: Quaternion::new(s.q.v + d.q_dot.v * dt, s.q.w + d.q_dot.w * dt),
        omega: s.omega + d.omega_dot * dt,
        mass: s.mass + d.mass_dot * dt,
    }
}

/// One classical RK4 step with controls held constant. The quaternion is
/// renormalized afterwards and mass is floored at `p.dry_mass` (callers cut
/// thrust once the floor is hit).
pub fn rk4_step(
    s: &LanderState,
    wrench: &Wrench,
    total_thrust: f64,
    dt: f64,
    p: &LanderParams,
    dist: &Disturbance,
) -> Result<LanderState, DynamicsError> {
    debug_assert!(dt > 0.0);
    let k1 = state_derivative(s, wrench, total_thrust, p, dist)?;
    let s2 = advance(s, &k1, 0.5 * dt);
    let k2 = state_derivative(&s2, wrench, total_thrust, p, dist)?;
    let s3 = advance(s, &k2, 0.5 * dt);
    let k3 = state_derivative(&s3, wrench, total_thrust, p, dist)?;
    let s4 = advance(s, &k3, dt);
    let k4 = state_derivative(&s4, wrench, total_thrust, p, dist)?;

    let sixth = dt / 6.0;
    let mut out = LanderState {
        r: s.r + (k1.r_dot + (k2.r_dot + k3.r_dot) * 2.0 + k4.r_dot) * sixth,
        v: s.v + (k1.v_dot + (k2.v_dot + k3.v_dot) * 2.0 + k4.v_dot) * sixth,
        q: Quaternion::new(
            s.q.v + (k1.q_dot.v + (k2.q_dot.v + k3.q_dot.v) * 2.0 + k4.q_dot.v) * sixth,
            s.q.w + (k1.q_dot.w + (k2.q_dot.w + k3.q_dot.w) * 2.0 + k4.q_dot.w) * sixth,
        ),
        omega: s.omega + (k1.omega_dot + (k2.omega_dot + k3.omega_dot) * 2.0 + k4.omega_dot) * sixth,
        mass: s.mass + (k1.mass_dot + (k2.mass_dot + k3.mass_dot) * 2.0 + k4.mass_dot) * sixth,
    };
    out.q = out.q.normalized();
    if out.mass < p.dry_mass {
        out.mass = p.dry_mass;
    }
    if !out.is_finite() {
        return Err(DynamicsError::DivergedState);
    }
    Ok(out)
}

/// Point-mass 3-DOF state: the translational and mass equations only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMassState {
    pub r: Vec3,
    pub v: Vec3,
    pub mass: f64,
}

impl PointMassState {
    pub fn is_finite(&self) -> bool {
        self.r.is_finite() && self.v.is_finite() && self.mass.is_finite()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PointMassDerivative {
    pub r_dot: Vec3,
    pub v_dot: Vec3,
    pub mass_dot: f64,
}

/// 3-DOF equations: `r' = v`, `v' = (T + F_env)/m + g`,
/// `m' = -|T|/(Isp g_ref)`.
pub fn point_mass_derivative(
    s: &PointMassState,
    thrust: Vec3,
    p: &LanderParams,
    dist: &Disturbance,
) -> PointMassDerivative {
    PointMassDerivative {
        r_dot: s.v,
        v_dot: (thrust + dist.force) / s.mass + p.gravity,
        mass_dot: -thrust.norm() / (p.isp * p.g_ref),
    }
}

/// RK4 step of the point-mass dynamics with constant thrust.
pub fn point_mass_rk4_step(
    s: &PointMassState,
    thrust: Vec3,
    dt: f64,
    p: &LanderParams,
    dist: &Disturbance,
) -> Result<PointMassState, DynamicsError> {
    debug_assert!(dt > 0.0);
    let adv = |s0: &PointMassState, d: &PointMassDerivative, h: f64| PointMassState {
        r: s0.r + d.r_dot * h,
        v: s0.v + d.v_dot * h,
        mass: s0.mass + d.mass_dot * h,
    };
    let k1 = point_mass_derivative(s, thrust, p, dist);
    let k2 = point_mass_derivative(&adv(s, &k1, 0.5 * dt), thrust, p, dist);
    let k3 = point_mass_derivative(&adv(s, &k2, 0.5 * dt), thrust, p, dist);
    let k4 = point_mass_derivative(&adv(s, &k3, dt), thrust, p, dist);
    let sixth = dt / 6.0;
    let mut out = PointMassState {
        r: s.r + (k1.r_dot + (k2.r_dot + k3.r_dot) * 2.0 + k4.r_dot) * sixth,
        v: s.v + (k1.v_dot + (k2.v_dot + k3.v_dot) * 2.0 + k4.v_dot) * sixth,
        mass: s.mass + (k1.mass_dot + (k2.mass_dot + k3.mass_dot) * 2.0 + k4.mass_dot) * sixth,
    };
    if out.mass < p.dry_mass {
        out.mass = p.dry_mass;
    }
    if !out.is_finite() {
        return Err(DynamicsError::DivergedState);
    }
    Ok(out)
}

/// Inertial-frame angular momentum `A^T(q) J(m) w`; conserved for
/// torque-free motion.
pub fn angular_momentum_inertial(s: &LanderState, p: &LanderParams) -> Vec3 {
    s.q.attitude_matrix().transpose() * (p.inertia(s.mass) * s.omega)
}

/// Rotational kinetic energy `1/2 w^T J(m) w`.
pub fn rotational_energy(s: &LanderState, p: &LanderParams) -> f64 {
    0.5 * s.omega.dot(p.inertia(s.mass) * s.omega)
}

/// Propagate torque-free, thrust-free motion for `n` steps of `dt`,
/// returning the trace of states (used by conservation and order studies).
pub fn propagate_ballistic(
    s0: &LanderState,
    n: usize,
    dt: f64,
    p: &LanderParams,
) -> Result<Vec<LanderState>, DynamicsError> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(*s0);
    let wrench = Wrench::default();
    let dist = Disturbance::default();
    let mut s = *s0;
    for _ in 0..n {
        s = rk4_step(&s, &wrench, 0.0, dt, p, &dist)?;
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn level_state(mass: f64) -> LanderState {
        LanderState {
            r: Vec3::new(0.0, 0.0, 2000.0),
            v: Vec3::new(-30.0, 5.0, -75.0),
            q: Quaternion::identity(),
            omega: Vec3::zero(),
            mass,
        }
    }

    #[test]
    fn equal_thrust_cancels_torque() {
        let layout = ThrusterLayout::standard();
        let w = thruster_wrench(&layout, &[1000.0; 4]).unwrap();
        assert_eq!(w.force, Vec3::new(0.0, 0.0, 4000.0));
        assert_eq!(w.torque, Vec3::zero());
    }

    #[test]
    fn asymmetric_thrust_wrench_matches_hand_cross_products() {
        let layout = ThrusterLayout::standard();
        let w = thruster_wrench(&layout, &[5000.0, 1000.0, 3000.0, 3000.0]).unwrap();
        assert_relative_eq!(w.force.z, 12000.0, epsilon = 1e-12);
        assert_relative_eq!(w.force.x, 0.0, epsilon = 1e-12);
        assert_relative_eq!(w.force.y, 0.0, epsilon = 1e-12);
        // Engine sums: (-2)*5000 + 2*1000 about x; 2*3000 - 2*3000 about y.
        assert_relative_eq!(w.torque.x, -8000.0, epsilon = 1e-12);
        assert_relative_eq!(w.torque.y, 0.0, epsilon = 1e-12);
        assert_relative_eq!(w.torque.z, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn single_engine_wrench() {
        let layout = ThrusterLayout::standard();
        let w = thruster_wrench(&layout, &[0.0, 0.0, 2000.0, 0.0]).unwrap();
        assert_eq!(w.force, Vec3::new(0.0, 0.0, 2000.0));
        // r = (-2, 0, -1) crossed with (0, 0, 2000).
        assert_eq!(w.torque, Vec3::new(0.0, 4000.0, 0.0));
    }

    #[test]
    fn attitude_matrix_rejects_denormalized_quaternion() {
        let q = Quaternion::new(Vec3::new(0.1, 0.0, 0.0), 1.0);
        assert!(matches!(
            attitude_matrix(q),
            Err(DynamicsError::NonUnitQuaternion(_))
        ));
        assert!(attitude_matrix(q.normalized()).is_ok());
    }

    #[test]
    fn sphere_inertia() {
        let j = ellipsoid_inertia(2000.0, 1.0, 1.0, 1.0);
        assert_eq!(j, Mat3::diag(800.0, 800.0, 800.0));
    }

    #[test]
    fn ellipsoid_inertia_arithmetic() {
        let j = ellipsoid_inertia(2000.0, 2.0, 2.0, 1.0);
        assert_eq!(j, Mat3::diag(2000.0, 2000.0, 3200.0));
    }

    #[test]
    fn inertia_is_linear_in_mass() {
        let j1 = ellipsoid_inertia(1500.0, 2.0, 1.5, 1.0);
        let j2 = ellipsoid_inertia(3000.0, 2.0, 1.5, 1.0);
        for i in 0..3 {
            assert_relative_eq!(j2.m[i][i], 2.0 * j1.m[i][i], epsilon = 1e-12);
        }
    }

    #[test]
    fn ballistic_derivative() {
        let p = LanderParams::default();
        let s = level_state(2000.0);
        let d = state_derivative(&s, &Wrench::default(), 0.0, &p, &Disturbance::default()).unwrap();
        assert_eq!(d.v_dot, p.gravity);
        assert_eq!(d.omega_dot, Vec3::zero());
        assert_eq!(d.mass_dot, 0.0);
    }

    #[test]
    fn mass_flow_rate() {
        let p = LanderParams::default();
        let s = level_state(2000.0);
        let w = thruster_wrench(&ThrusterLayout::standard(), &[5000.0; 4]).unwrap();
        let d = state_derivative(&s, &w, 20000.0, &p, &Disturbance::default()).unwrap();
        assert_relative_eq!(d.mass_dot, -9.070294784580499, epsilon = 1e-12);
    }

    #[test]
    fn principal_axis_spin_has_zero_angular_acceleration() {
        let p = LanderParams::default();
        let mut s = level_state(2000.0);
        s.omega = Vec3::new(0.0, 0.0, 0.4);
        let d = state_derivative(&s, &Wrench::default(), 0.0, &p, &Disturbance::default()).unwrap();
        assert_relative_eq!(d.omega_dot.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn rk4_is_exact_for_ballistic_flight() {
        let p = LanderParams::default();
        let s0 = level_state(2000.0);
        let dt = 0.05;
        let n = 200;
        let trace = propagate_ballistic(&s0, n, dt, &p).unwrap();
        let t = n as f64 * dt;
        let expect_r = s0.r + s0.v * t + p.gravity * (0.5 * t * t);
        let expect_v = s0.v + p.gravity * t;
        let last = trace.last().unwrap();
        assert_relative_eq!(last.r.x, expect_r.x, epsilon = 1e-9);
        assert_relative_eq!(last.r.y, expect_r.y, epsilon = 1e-9);
        assert_relative_eq!(last.r.z, expect_r.z, epsilon = 1e-9);
        assert_relative_eq!(last.v.z, expect_v.z, epsilon = 1e-9);
    }

    #[test]
    fn torque_free_tumble_conserves_momentum_and_energy() {
        let p = LanderParams::default();
        let mut s0 = level_state(2000.0);
        s0.q = Quaternion::from_yaw_pitch_roll(0.3, 0.5, -0.2);
        s0.omega = Vec3::new(0.25, -0.15, 0.1);
        let h0 = angular_momentum_inertial(&s0, &p);
        let e0 = rotational_energy(&s0, &p);
        let trace = propagate_ballistic(&s0, 2000, 0.05, &p).unwrap();
        for s in &trace {
            let h = angular_momentum_inertial(s, &p);
            let e = rotational_energy(s, &p);
            assert!((h - h0).norm() / h0.norm() < 1e-6);
            assert!((e - e0).abs() / e0 < 1e-6);
            assert!((s.q.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn six_dof_level_flight_matches_point_mass() {
        let p = LanderParams::default();
        let layout = ThrusterLayout::standard();
        let t_cmd = [3000.0; 4];
        let w = thruster_wrench(&layout, &t_cmd).unwrap();
        let total: f64 = t_cmd.iter().sum();
        let mut s6 = level_state(2000.0);
        let mut s3 = PointMassState { r: s6.r, v: s6.v, mass: s6.mass };
        let dist = Disturbance::default();
        for _ in 0..100 {
            s6 = rk4_step(&s6, &w, total, 0.05, &p, &dist).unwrap();
            s3 = point_mass_rk4_step(&s3, Vec3::new(0.0, 0.0, total), 0.05, &p, &dist).unwrap();
            assert!((s6.r - s3.r).norm() < 1e-10);
            assert!((s6.v - s3.v).norm() < 1e-10);
            assert!((s6.mass - s3.mass).abs() < 1e-10);
        }
    }

    #[test]
    fn hover_thrust_balances_gravity_in_point_mass() {
        let p = LanderParams::default();
        let s = PointMassState {
            r: Vec3::new(0.0, 0.0, 100.0),
            v: Vec3::zero(),
            mass: 2000.0,
        };
        let thrust = -p.gravity * s.mass;
        let d = point_mass_derivative(&s, thrust, &p, &Disturbance::default());
        assert_relative_eq!(d.v_dot.norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(d.mass_dot, -(thrust.norm()) / (225.0 * 9.8), epsilon = 1e-12);
    }

    #[test]
    fn mass_floor_cuts_at_dry_mass() {
        let mut p = LanderParams::default();
        p.dry_mass = 1999.9;
        let s = level_state(2000.0);
        let w = thruster_wrench(&ThrusterLayout::standard(), &[5000.0; 4]).unwrap();
        let out = rk4_step(&s, &w, 20000.0, 1.0, &p, &Disturbance::default()).unwrap();
        assert_eq!(out.mass, 1999.9);
    }

    proptest! {
        #[test]
        fn wrench_is_linear_and_additive(
            t1 in 0.0f64..5000.0, t2 in 0.0f64..5000.0,
            t3 in 0.0f64..5000.0, t4 in 0.0f64..5000.0,
            alpha in 0.0f64..3.0
        ) {
            let layout = ThrusterLayout::standard();
            let t = [t1, t2, t3, t4];
            let w = thruster_wrench(&layout, &t).unwrap();
            let scaled = [t1 * alpha, t2 * alpha, t3 * alpha, t4 * alpha];
            let ws = thruster_wrench(&layout, &scaled).unwrap();
            prop_assert!((ws.force - w.force * alpha).norm() < 1e-9 * (1.0 + w.force.norm()));
            prop_assert!((ws.torque - w.torque * alpha).norm() < 1e-9 * (1.0 + w.torque.norm()));

            // Additivity over engines.
            let mut acc = Wrench::default();
            for i in 0..ENGINE_COUNT {
                let mut only = [0.0; ENGINE_COUNT];
                only[i] = t[i];
                let wi = thruster_wrench(&layout, &only).unwrap();
                acc.force += wi.force;
                acc.torque += wi.torque;
            }
            prop_assert!((acc.force - w.force).norm() < 1e-9);
            prop_assert!((acc.torque - w.torque).norm() < 1e-9);
        }

        #[test]
        fn no_configuration_produces_z_torque(
            t1 in 1000.0f64..5000.0, t2 in 1000.0f64..5000.0,
            t3 in 1000.0f64..5000.0, t4 in 1000.0f64..5000.0
        ) {
            let layout = ThrusterLayout::standard();
            let w = thruster_wrench(&layout, &[t1, t2, t3, t4]).unwrap();
            prop_assert!(w.torque.z.abs() < 1e-12);
        }

        #[test]
        fn mass_never_increases_while_firing(
            t in 1000.0f64..5000.0, steps in 1usize..50
        ) {
            let p = LanderParams::default();
            let layout = ThrusterLayout::standard();
            let cmd = [t; 4];
            let w = thruster_wrench(&layout, &cmd).unwrap();
            let total = 4.0 * t;
            let mut s = level_state(2000.0);
            let mut prev_mass = s.mass;
            for _ in 0..steps {
                s = rk4_step(&s, &w, total, 0.05, &p, &Disturbance::default()).unwrap();
                prop_assert!(s.mass < prev_mass);
                prev_mass = s.mass;
            }
        }
    }
}
