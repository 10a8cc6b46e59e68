//! Small fixed-size linear algebra: 3-vectors, 3x3 matrices, and attitude
//! quaternions in the scalar-last convention.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::float::FloatExt;

use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// A 3-vector of `f64`. Units depend on context (m, m/s, N, N*m, rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const ZERO3: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub const fn zero() -> Self {
        ZERO3
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        self / self.norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Component-wise clamp into `[lo, hi]`.
    pub fn clamp(self, lo: f64, hi: f64) -> Vec3 {
        Vec3::new(self.x.clamp(lo, hi), self.y.clamp(lo, hi), self.z.clamp(lo, hi))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// A 3x3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    pub m: [[f64; 3]; 3],
}

impl Mat3 {
    pub const fn new(m: [[f64; 3]; 3]) -> Self {
        Self { m }
    }

    pub const fn zero() -> Self {
        Self::new([[0.0; 3]; 3])
    }

    pub const fn identity() -> Self {
        Self::new([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub const fn diag(a: f64, b: f64, c: f64) -> Self {
        Self::new([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    /// Skew-symmetric cross-product matrix `[a x]` with `[a x] b = a x b`.
    pub fn skew(a: Vec3) -> Self {
        Self::new([[0.0, -a.z, a.y], [a.z, 0.0, -a.x], [-a.y, a.x, 0.0]])
    }

    /// Outer product `a b^T`.
    pub fn outer(a: Vec3, b: Vec3) -> Self {
        Self::new([
            [a.x * b.x, a.x * b.y, a.x * b.z],
            [a.y * b.x, a.y * b.y, a.y * b.z],
            [a.z * b.x, a.z * b.y, a.z * b.z],
        ])
    }

    pub fn transpose(self) -> Self {
        let m = self.m;
        Self::new([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn det(self) -> f64 {
        let m = self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Inverse via the adjugate. Returns `None` when the determinant is
    /// smaller than `1e-12` in magnitude.
    pub fn inverse(self) -> Option<Self> {
        let d = self.det();
        if d.abs() < 1e-12 {
            return None;
        }
        let m = self.m;
        let inv_d = 1.0 / d;
        let mut out = [[0.0; 3]; 3];
        out[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * inv_d;
        out[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv_d;
        out[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv_d;
        out[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * inv_d;
        out[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv_d;
        out[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv_d;
        out[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * inv_d;
        out[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv_d;
        out[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv_d;
        Some(Self::new(out))
    }

    pub fn is_finite(self) -> bool {
        self.m.iter().all(|row| row.iter().all(|v| v.is_finite()))
    }

    /// Eigenvalues of a symmetric matrix, ascending. Uses the trigonometric
    /// closed form for the characteristic cubic; only valid for symmetric
    /// input.
    pub fn eigvals_symmetric(self) -> [f64; 3] {
        let m = self.m;
        let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
        if p1 == 0.0 {
            let mut e = [m[0][0], m[1][1], m[2][2]];
            e.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
            return e;
        }
        let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
        let p2 = (m[0][0] - q) * (m[0][0] - q)
            + (m[1][1] - q) * (m[1][1] - q)
            + (m[2][2] - q) * (m[2][2] - q)
            + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let mut b = self;
        for i in 0..3 {
            b.m[i][i] -= q;
        }
        for row in b.m.iter_mut() {
            for v in row.iter_mut() {
                *v /= p;
            }
        }
        let r = (b.det() / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let e1 = q + 2.0 * p * phi.cos();
        let e3 = q + 2.0 * p * (phi + 2.0 * core::f64::consts::PI / 3.0).cos();
        let e2 = 3.0 * q - e1 - e3;
        let mut e = [e1, e2, e3];
        e.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        e
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] += o.m[i][j];
            }
        }
        out
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] -= o.m[i][j];
            }
        }
        out
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(self, s: f64) -> Mat3 {
        let mut out = self;
        for row in out.m.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        let m = self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }
}

impl Mul<Mat3> for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut out = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for (k, row) in o.m.iter().enumerate() {
                    s += self.m[i][k] * row[j];
                }
                out.m[i][j] = s;
            }
        }
        out
    }
}

/// Attitude quaternion, stored scalar-last: `q = [vector, q4]`.
///
/// `attitude_matrix` maps inertial coordinates to body coordinates; its
/// transpose maps body to inertial. Composition satisfies
/// `A(p.compose(q)) = A(p) * A(q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    /// Vector part.
    pub v: Vec3,
    /// Scalar part.
    pub w: f64,
}

impl Quaternion {
    pub const fn new(v: Vec3, w: f64) -> Self {
        Self { v, w }
    }

    pub const fn identity() -> Self {
        Self::new(ZERO3, 1.0)
    }

    /// Rotation of `angle` radians about the unit `axis`.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Self {
        let half = 0.5 * angle;
        Self::new(axis * half.sin(), half.cos())
    }

    pub fn norm(self) -> f64 {
        (self.v.dot(self.v) + self.w * self.w).sqrt()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.v / n, self.w / n)
    }

    pub fn is_finite(self) -> bool {
        self.v.is_finite() && self.w.is_finite()
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.v.x, self.v.y, self.v.z, self.w]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(Vec3::new(a[0], a[1], a[2]), a[3])
    }

    /// Direction cosine matrix mapping inertial to body coordinates,
    /// `A(q) = Xi^T(q) Psi(q)`, expanded to
    /// `(w^2 - |v|^2) I + 2 v v^T - 2 w [v x]`.
    pub fn attitude_matrix(self) -> Mat3 {
        let s = self.w * self.w - self.v.dot(self.v);
        let mut a = Mat3::identity() * s;
        a = a + Mat3::outer(self.v, self.v) * 2.0;
        a = a - Mat3::skew(self.v) * (2.0 * self.w);
        a
    }

    /// Kinematics: `dq/dt = 1/2 Xi(q) omega` with body rates `omega`.
    pub fn kinematics(self, omega: Vec3) -> Quaternion {
        Quaternion::new(
            (self.v.cross(omega) + omega * self.w) * 0.5,
            -0.5 * self.v.dot(omega),
        )
    }

    /// Composition such that `A(self.compose(q)) = A(self) * A(q)`.
    pub fn compose(self, q: Quaternion) -> Quaternion {
        Quaternion::new(
            q.v * self.w + self.v * q.w - self.v.cross(q.v),
            self.w * q.w - self.v.dot(q.v),
        )
    }

    /// Quaternion for a yaw-pitch-roll attitude: the body frame is reached
    /// from inertial by rotating about z (yaw), then y (pitch), then x
    /// (roll), i.e. `A = Rx(roll) Ry(pitch) Rz(yaw)`.
    pub fn from_yaw_pitch_roll(yaw: f64, pitch: f64, roll: f64) -> Self {
        let qz = Quaternion::from_axis_angle(Vec3::new(0.0, 0.0, 1.0), yaw);
        let qy = Quaternion::from_axis_angle(Vec3::new(0.0, 1.0, 0.0), pitch);
        let qx = Quaternion::from_axis_angle(Vec3::new(1.0, 0.0, 0.0), roll);
        qx.compose(qy).compose(qz).normalized()
    }

    /// Extract (yaw, pitch, roll) for the z-y-x sequence above.
    /// Yaw and roll lie in (-pi, pi], pitch in [-pi/2, pi/2].
    pub fn to_yaw_pitch_roll(self) -> (f64, f64, f64) {
        let a = self.attitude_matrix().m;
        let pitch = (-a[0][2]).clamp(-1.0, 1.0).asin();
        let yaw = a[0][1].atan2(a[0][0]);
        let roll = a[1][2].atan2(a[2][2]);
        (yaw, pitch, roll)
    }
}
