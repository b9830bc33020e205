//! Scalar helpers over `libm`, since `core` has no float intrinsics.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// `exp(exponent * ln_base)` with results below the smallest normal double
/// flushed to zero. `ln_base = -inf` (base 0) yields 0.
#[inline]
pub(crate) fn pow_from_ln(ln_base: f64, exponent: f64) -> f64 {
    let v = exp(exponent * ln_base);
    if v < f64::MIN_POSITIVE {
        0.0
    } else {
        v
    }
}

/// `base^exponent` for `base` in `[0, 1]`, evaluated in the log domain.
#[inline]
pub(crate) fn unit_pow(base: f64, exponent: f64) -> f64 {
    if base <= 0.0 {
        0.0
    } else {
        pow_from_ln(ln(base), exponent)
    }
}

/// `1 - exp(exponent * ln_base)` without cancellation near 1.
#[inline]
pub(crate) fn one_minus_pow_from_ln(ln_base: f64, exponent: f64) -> f64 {
    -expm1(exponent * ln_base)
}
