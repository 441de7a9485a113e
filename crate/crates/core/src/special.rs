//! Complex log-Gamma and the Gamma-function quantities built on it.
//!
//! `log_gamma` uses the Stirling series once `|z| >= 10` and `Re z >= 0`, and the upward
//! recurrence `log Γ(z) = log Γ(z + n) - Σ log(z + j)` to get there. All logarithms are
//! principal, so the result is the branch of log Γ that is real on the positive axis and
//! continuous off the negative real axis.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2m} / (2m (2m - 1)) for m = 1..=10
const STIRLING_COEFFS: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const STIRLING_MIN_MODULUS: f64 = 10.0;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Principal log Γ(z).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain(format!("non-finite Gamma argument {z}")));
    }
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    Ok(log_gamma_unchecked(z))
}

/// [`log_gamma`] without argument validation, for hot loops whose arguments are
/// known to be finite and away from the poles.
#[inline]
pub(crate) fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re >= 0.0 && z.norm_sqr() >= STIRLING_MIN_MODULUS * STIRLING_MIN_MODULUS {
        return stirling_series(z);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < 0.0 || w.norm_sqr() < STIRLING_MIN_MODULUS * STIRLING_MIN_MODULUS {
        shift += w.ln();
        w += 1.0;
    }
    stirling_series(w) - shift
}

#[inline]
fn stirling_series(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(STIRLING_COEFFS[9], 0.0);
    for &c in STIRLING_COEFFS[..9].iter().rev() {
        series = series * inv2 + c;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series * inv
}

/// log Γ(x) for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "real log-Gamma needs a positive argument, got {x}"
        )));
    }
    Ok(log_gamma_unchecked(Complex64::new(x, 0.0)).re)
}

/// Γ(num) / Γ(den), computed as `exp(log Γ(num) - log Γ(den))`.
pub fn gamma_ratio(num: Complex64, den: Complex64) -> Result<Complex64> {
    if num == den {
        log_gamma(num)?;
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok((log_gamma(num)? - log_gamma(den)?).exp())
}

/// Leading Stirling size of |Γ(x + iy)|: `sqrt(2π) e^{-π|y|/2} |y|^{x - 1/2}`.
pub fn stirling_magnitude(x: f64, y: f64) -> Result<f64> {
    Ok(ln_stirling_magnitude(x, y)?.exp())
}

/// Natural log of [`stirling_magnitude`], usable where the magnitude itself underflows.
pub fn ln_stirling_magnitude(x: f64, y: f64) -> Result<f64> {
    if !x.is_finite() || !(y.abs() >= 1.0) || !y.is_finite() {
        return Err(Error::domain(format!(
            "stirling_magnitude needs finite x and |y| >= 1, got ({x}, {y})"
        )));
    }
    let ay = y.abs();
    Ok(HALF_LN_2PI - PI * ay / 2.0 + (x - 0.5) * ay.ln())
}

/// `z^{-w}` on the principal branch, as `exp(-w log z)`.
pub fn complex_pow_neg(z: Complex64, w: Complex64) -> Complex64 {
    (-w * z.ln()).exp()
}
