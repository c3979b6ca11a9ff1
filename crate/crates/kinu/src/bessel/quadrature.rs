//! Integral-representation route: K_{i nu}(x) = int_0^inf e^{-x cosh t} cos(nu t) dt.
//!
//! The integrand is truncated where e^{-x cosh T} drops below a hundredth of
//! the quadrature tolerance and integrated by the tanh-sinh rule. The result
//! carries an intrinsic cancellation floor of order eps * K_0(x): the
//! integrand has magnitude ~K_0(x)/T while the integral is e^{-nu pi/2}
//! smaller in the oscillatory regime, and no double-precision quadrature can
//! see below that. The reported floor lets callers decide whether the route
//! is usable.

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::quad::tanh_sinh;
use std::f64::consts::FRAC_PI_2;

pub struct CoshQuad {
    pub k: f64,
    pub k_dx: f64,
    /// Absolute error floor on `k` (cancellation + truncation).
    pub floor: f64,
}

/// Crude K_0 overestimate used only for floor bookkeeping.
fn k0_envelope(x: f64) -> f64 {
    if x < 1.0 {
        (2.0 / x).ln() + 1.0
    } else {
        (FRAC_PI_2 / x).sqrt() * (-x).exp()
    }
}

/// Unscaled K_{i nu}(x) and its x-derivative by direct quadrature.
pub fn k_cosh_quadrature(nu: f64, x: f64, cfg: &EvalConfig) -> Result<CoshQuad> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("quadrature: x = {x} not in (0, inf)")));
    }
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::Domain(format!("quadrature: nu = {nu} not in [0, inf)")));
    }
    let tol = cfg.quad_tol;
    let cosh_t = ((5.0 - tol.ln()) / x).max(2.0);
    let t_max = cosh_t.acosh();

    let val = tanh_sinh(
        |t: f64| (-x * t.cosh()).exp() * (nu * t).cos(),
        0.0,
        t_max,
        0.1 * tol,
        1e-15,
        14,
    )?;
    let der = tanh_sinh(
        |t: f64| -t.cosh() * (-x * t.cosh()).exp() * (nu * t).cos(),
        0.0,
        t_max,
        0.1 * tol * cosh_t,
        1e-15,
        14,
    )?;
    let floor = 4.0 * f64::EPSILON * k0_envelope(x) + val.err_est;
    Ok(CoshQuad {
        k: val.value,
        k_dx: der.value,
        floor,
    })
}

/// (Khat, dKhat/dx, floor-on-Khat): the same integral with the e^{nu pi/2}
/// convention factor applied. Guarded against the scale factor itself
/// overflowing; the dispatcher only sends this route orders for which the
/// amplified floor is negligible.
pub fn khat_quadrature(nu: f64, x: f64, cfg: &EvalConfig) -> Result<(f64, f64, f64)> {
    let shift = nu * FRAC_PI_2;
    if shift > 700.0 {
        return Err(Error::Overflow(format!(
            "e^(nu pi/2) overflows at nu = {nu}; use the ODE route"
        )));
    }
    let q = k_cosh_quadrature(nu, x, cfg)?;
    let s = shift.exp();
    Ok((q.k * s, q.k_dx * s, q.floor * s))
}

/// Phase of the oscillatory-regime envelope, nu arccosh(nu/x) - sqrt(nu^2-x^2);
/// shared by the WKB solver and the turning-point diagnostics.
pub fn phase_integral(nu: f64, x: f64) -> f64 {
    if nu <= x {
        return 0.0;
    }
    nu * (nu / x).acosh() - (nu * nu - x * x).sqrt()
}

/// Local spacing of consecutive combined zeros in nu, pi/2 / arccosh(nu/x).
pub fn combined_zero_spacing(nu: f64, x: f64) -> f64 {
    FRAC_PI_2 / (nu.max(x * (1.0 + 1e-12)) / x).acosh().max(1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Classical series oracle for K_0: K_0(x) = -(ln(x/2)+gamma) I_0(x) + sum H_k (x^2/4)^k / k!^2.
    fn k0_series_oracle(x: f64) -> f64 {
        const EULER_GAMMA: f64 = 0.5772156649015328606065120900824;
        let q = 0.25 * x * x;
        let mut i0 = 1.0;
        let mut sum = 0.0;
        let mut term = 1.0;
        let mut h = 0.0;
        for k in 1..60 {
            term *= q / ((k * k) as f64);
            h += 1.0 / k as f64;
            i0 += term;
            sum += term * h;
        }
        -((0.5 * x).ln() + EULER_GAMMA) * i0 + sum
    }

    #[test]
    fn matches_k0_series_oracle() {
        let cfg = EvalConfig::default();
        for x in [0.5, 1.0, 2.0, 5.0] {
            let q = k_cosh_quadrature(0.0, x, &cfg).unwrap();
            assert_relative_eq!(q.k, k0_series_oracle(x), max_relative = 1e-12);
        }
    }

    #[test]
    fn k0_frozen_values() {
        let cfg = EvalConfig::default();
        let q = k_cosh_quadrature(0.0, 1.0, &cfg).unwrap();
        assert_relative_eq!(q.k, 0.42102443824070833334, max_relative = 1e-13);
        // dK_0/dx = -K_1.
        assert_relative_eq!(q.k_dx, -0.60190723019723457474, max_relative = 1e-13);
        let q05 = k_cosh_quadrature(0.0, 0.5, &cfg).unwrap();
        assert_relative_eq!(q05.k, 0.92441907122766586178, max_relative = 1e-13);
        let q2 = k_cosh_quadrature(0.0, 2.0, &cfg).unwrap();
        assert_relative_eq!(q2.k, 0.11389387274953343565, max_relative = 1e-13);
    }

    #[test]
    fn k0_derivative_against_series_differences() {
        // Independent derivative check: Richardson-extrapolated central
        // differences of the series oracle.
        let h = 1e-4;
        let d1 = (k0_series_oracle(1.0 + h) - k0_series_oracle(1.0 - h)) / (2.0 * h);
        let d2 = (k0_series_oracle(1.0 + 2.0 * h) - k0_series_oracle(1.0 - 2.0 * h)) / (4.0 * h);
        let fd = (4.0 * d1 - d2) / 3.0;
        let cfg = EvalConfig::default();
        let q = k_cosh_quadrature(0.0, 1.0, &cfg).unwrap();
        assert_relative_eq!(q.k_dx, fd, max_relative = 1e-9);
    }

    #[test]
    fn imaginary_order_spot_value() {
        let cfg = EvalConfig::default();
        let q = k_cosh_quadrature(5.0, 1.0, &cfg).unwrap();
        assert_relative_eq!(q.k, 3.8046182799756372805e-4, max_relative = 1e-10);
    }

    #[test]
    fn floor_grows_with_order() {
        let cfg = EvalConfig::default();
        let f1 = khat_quadrature(1.0, 1.0, &cfg).unwrap().2;
        let f10 = khat_quadrature(10.0, 1.0, &cfg).unwrap().2;
        assert!(f10 > 100.0 * f1);
    }

    #[test]
    fn domain_checks() {
        let cfg = EvalConfig::default();
        assert!(k_cosh_quadrature(1.0, -1.0, &cfg).is_err());
        assert!(k_cosh_quadrature(f64::NAN, 1.0, &cfg).is_err());
        assert!(khat_quadrature(600.0, 1.0, &cfg).is_err());
    }
}
