//! Thin math shim. All transcendental calls go through `libm` so results
//! are bit-identical between `std` and `no_std` builds.

pub(crate) const TAU: f64 = core::f64::consts::TAU;

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn fabs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// Reduce an angle into `[0, 2*pi)`.
#[inline]
pub(crate) fn reduce_angle(a: f64) -> f64 {
    let r = a - TAU * floor(a / TAU);
    // floor rounding can land exactly on 2*pi for tiny negative inputs
    if r >= TAU {
        r - TAU
    } else {
        r
    }
}

/// `i^k` for `k` taken mod 4.
#[inline]
pub(crate) fn i_power(k: u8) -> crate::C64 {
    match k % 4 {
        0 => crate::C64::new(1.0, 0.0),
        1 => crate::C64::new(0.0, 1.0),
        2 => crate::C64::new(-1.0, 0.0),
        _ => crate::C64::new(0.0, -1.0),
    }
}
