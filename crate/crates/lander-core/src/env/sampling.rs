//! Per-episode draws: initial state, parameter uncertainty, disturbances.

use super::config::{InitialConditionRanges, Range, UncertaintyRanges};
use crate::dynamics::{LanderParams, LanderState};
use crate::math::{Mat3, Quaternion, Vec3};
use rand::Rng;

fn draw<R: Rng>(rng: &mut R, range: Range) -> f64 {
    if range.min == range.max {
        range.min
    } else {
        rng.random_range(range.min..=range.max)
    }
}

/// Uniform initial state over the deployment ellipse. Euler angles are
/// drawn for the z-y-x (yaw, pitch, roll) sequence and converted to a unit
/// quaternion; rate draws map onto body axes (roll -> x, pitch -> y,
/// yaw -> z).
pub fn sample_initial_state<R: Rng>(
    ranges: &InitialConditionRanges,
    mass: f64,
    rng: &mut R,
) -> LanderState {
    let r = Vec3::new(
        draw(rng, ranges.position[0]),
        draw(rng, ranges.position[1]),
        draw(rng, ranges.position[2]),
    );
    let v = Vec3::new(
        draw(rng, ranges.velocity[0]),
        draw(rng, ranges.velocity[1]),
        draw(rng, ranges.velocity[2]),
    );
    let yaw = draw(rng, ranges.attitude[0]);
    let pitch = draw(rng, ranges.attitude[1]);
    let roll = draw(rng, ranges.attitude[2]);
    let yaw_rate = draw(rng, ranges.rates[0]);
    let pitch_rate = draw(rng, ranges.rates[1]);
    let roll_rate = draw(rng, ranges.rates[2]);
    LanderState {
        r,
        v,
        q: Quaternion::from_yaw_pitch_roll(yaw, pitch, roll),
        omega: Vec3::new(roll_rate, pitch_rate, yaw_rate),
        mass,
    }
}

/// Sampled per-episode parameter overrides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyDraw {
    pub initial_mass: f64,
    pub gravity: Vec3,
    pub inertia_noise: Mat3,
}

/// Draw initial mass, gravity, and a symmetric inertia perturbation.
///
/// The perturbed inertia must stay positive-definite down to the dry mass;
/// draws that push the smallest eigenvalue of `J(dry) + N` below
/// 10 kg m^2 are rejected and resampled.
pub fn sample_uncertainty<R: Rng>(
    u: &UncertaintyRanges,
    nominal: &LanderParams,
    rng: &mut R,
) -> UncertaintyDraw {
    let initial_mass = draw(rng, u.initial_mass);
    let gravity = Vec3::new(
        draw(rng, u.gravity[0]),
        draw(rng, u.gravity[1]),
        draw(rng, u.gravity[2]),
    );
    let dry_inertia = LanderParams {
        inertia_noise: Mat3::zero(),
        ..nominal.clone()
    }
    .inertia(nominal.dry_mass);

    let sym = |b: f64, rng: &mut R| if b == 0.0 { 0.0 } else { rng.random_range(-b..=b) };
    let mut inertia_noise = Mat3::zero();
    for attempt in 0.. {
        let d = u.inertia_diag_bound;
        let o = u.inertia_offdiag_bound;
        let (dx, dy, dz) = (sym(d, rng), sym(d, rng), sym(d, rng));
        let (oxy, oxz, oyz) = (sym(o, rng), sym(o, rng), sym(o, rng));
        let n = Mat3::new([[dx, oxy, oxz], [oxy, dy, oyz], [oxz, oyz, dz]]);
        let eig = (dry_inertia + n).eigvals_symmetric();
        if eig[0] > 10.0 {
            inertia_noise = n;
            break;
        }
        // Never expected with the published bounds.
        if attempt > 1000 {
            break;
        }
    }
    UncertaintyDraw { initial_mass, gravity, inertia_noise }
}

/// Episode-constant mean of the test-time force noise, uniform per axis in
/// `+/- bound`.
pub fn sample_force_noise_mean<R: Rng>(bound: f64, rng: &mut R) -> Vec3 {
    if bound == 0.0 {
        return Vec3::zero();
    }
    Vec3::new(
        rng.random_range(-bound..=bound),
        rng.random_range(-bound..=bound),
        rng.random_range(-bound..=bound),
    )
}
