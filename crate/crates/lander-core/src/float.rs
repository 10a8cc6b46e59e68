//! Float math that works with and without `std`.
//!
//! Without `std`, `f64` loses its transcendental inherent methods; this trait
//! fills them back in via `libm`. With `std` the inherent methods win method
//! resolution, so importing the trait is harmless.

#[cfg(not(feature = "std"))]
pub(crate) trait FloatExt {
    fn abs(self) -> f64;
    fn sqrt(self) -> f64;
    fn exp(self) -> f64;
    fn ln(self) -> f64;
    fn sin(self) -> f64;
    fn cos(self) -> f64;
    fn tanh(self) -> f64;
    fn asin(self) -> f64;
    fn acos(self) -> f64;
    fn atan2(self, other: f64) -> f64;
    fn powi(self, n: i32) -> f64;
    fn powf(self, p: f64) -> f64;
    fn round(self) -> f64;
    fn floor(self) -> f64;
    fn hypot(self, other: f64) -> f64;
}

#[cfg(not(feature = "std"))]
impl FloatExt for f64 {
    fn abs(self) -> f64 {
        libm::fabs(self)
    }
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    fn ln(self) -> f64 {
        libm::log(self)
    }
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    fn tanh(self) -> f64 {
        libm::tanh(self)
    }
    fn asin(self) -> f64 {
        libm::asin(self)
    }
    fn acos(self) -> f64 {
        libm::acos(self)
    }
    fn atan2(self, other: f64) -> f64 {
        libm::atan2(self, other)
    }
    fn powi(self, n: i32) -> f64 {
        libm::pow(self, n as f64)
    }
    fn powf(self, p: f64) -> f64 {
        libm::pow(self, p)
    }
    fn round(self) -> f64 {
        libm::round(self)
    }
    fn floor(self) -> f64 {
        libm::floor(self)
    }
    fn hypot(self, other: f64) -> f64 {
        libm::hypot(self, other)
    }
}

