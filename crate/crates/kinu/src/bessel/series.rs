//! Ascending-series route.
//!
//! I_{i nu}(x) = (x/2)^{i nu} sum_k (x/2)^{2k} / (k! Gamma(i nu + k + 1)) is
//! summed in complex arithmetic with the factor e^{-nu pi/2} folded into the
//! prefactor, which keeps every partial sum O(1) for any order. From the
//! scaled sum Z = e^{-nu pi/2} I_{i nu}(x):
//!
//!   Khat = e^{nu pi/2} K_{i nu}(x) = -2 pi Im(Z) / (1 - e^{-2 pi nu}),
//!   I^(+) = Re I_{i nu}(x)         = e^{nu pi/2} Re(Z).
//!
//! The first identity is the classical K = pi (I_{-a} - I_a) / (2 sin(a pi))
//! specialised to a = i nu, where I_{-i nu} is the conjugate of I_{i nu}.

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::scaled::apply_log_shift;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Orders below this leave too little of Im(Z) to extract reliably; the
/// dispatcher sends them to the cosh-integral rule instead.
pub const NU_SERIES_MIN: f64 = 0.5;

/// Beyond this argument the alternating phases of the sum cancel more than
/// the dispatcher's error budget allows.
pub const SERIES_X_MAX: f64 = 12.0;

const MAX_TERMS: usize = 400;

pub struct SeriesEval {
    /// Z = e^{-nu pi/2} I_{i nu}(x).
    pub z: Complex64,
    /// dZ/dx.
    pub z_dx: Complex64,
    /// Estimated absolute rounding floor on the components of z.
    pub floor: f64,
}

/// Sums the scaled series; valid for any nu >= 0, x > 0 with convergence by
/// `MAX_TERMS` (comfortable for x <= ~60).
pub fn i_scaled_series(nu: f64, x: f64) -> Result<SeriesEval> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("series: x = {x} not in (0, inf)")));
    }
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::Domain(format!("series: nu = {nu} not in [0, inf)")));
    }
    let lg = ln_gamma(Complex64::new(1.0, nu))?;
    // P = exp(i nu ln(x/2) - ln Gamma(1 + i nu) - nu pi/2); |P| ~ 1/sqrt(nu).
    let p = (Complex64::new(0.0, nu * (0.5 * x).ln()) - lg - nu * FRAC_PI_2).exp();

    let x2_4 = 0.25 * x * x;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    // sum of t_k (i nu + 2k), for the term-wise derivative.
    let mut sum_d = Complex64::new(0.0, nu);
    let mut max_term = 1.0f64;
    let mut converged = false;
    for k in 0..MAX_TERMS {
        let kp1 = (k + 1) as f64;
        term = term * x2_4 / (kp1 * Complex64::new(kp1, nu));
        sum += term;
        sum_d += term * Complex64::new(2.0 * kp1, nu);
        max_term = max_term.max(term.norm());
        if term.norm() <= 1e-20 * (1.0 + sum.norm()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence(format!(
            "series for nu = {nu}, x = {x} not converged in {MAX_TERMS} terms"
        )));
    }
    let floor = 4.0 * f64::EPSILON * p.norm() * max_term.max(sum.norm());
    Ok(SeriesEval {
        z: p * sum,
        z_dx: p * sum_d / x,
        floor,
    })
}

/// (Khat, dKhat/dx, floor) by the series route. Requires nu >= NU_SERIES_MIN.
pub fn khat_series(nu: f64, x: f64) -> Result<(f64, f64, f64)> {
    if nu < NU_SERIES_MIN {
        return Err(Error::Domain(format!(
            "khat_series: nu = {nu} below {NU_SERIES_MIN}; use the quadrature route"
        )));
    }
    let s = i_scaled_series(nu, x)?;
    let scale = -2.0 * PI / (1.0 - (-2.0 * PI * nu).exp());
    Ok((scale * s.z.im, scale * s.z_dx.im, scale.abs() * s.floor))
}

/// (I^(+), dI^(+)/dx), unscaled. Errors if e^{nu pi/2} Re Z overflows.
pub fn i_plus_series(nu: f64, x: f64) -> Result<(f64, f64)> {
    let s = i_scaled_series(nu, x)?;
    let shift = nu * FRAC_PI_2;
    let mag = s.z.re.abs().max(s.z_dx.re.abs());
    if mag > 0.0 && shift + mag.ln() > 705.0 {
        return Err(Error::Overflow(format!(
            "I^(+) at nu = {nu}, x = {x} exceeds f64 range; use the scaled form"
        )));
    }
    Ok((
        apply_log_shift(s.z.re, shift),
        apply_log_shift(s.z_dx.re, shift),
    ))
}
