//! ODE route: seed (K, K') from the large-argument expansion far out, then
//! march the modified Bessel equation
//!
//!   K'' = -K'/x + (1 - nu^2/x^2) K
//!
//! inward with an adaptive Dormand-Prince 5(4) pair. Inward is the stable
//! direction: K grows relative to the decaying I-type contaminant as x
//! shrinks. The pair (K, K') is carried as mantissas with a shared
//! power-of-two exponent so that nothing underflows even at nu = 200, where
//! the seed sits at x = 40000 and K ~ e^{-40000}.

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::scaled::{ScaledValue, MANTISSA_HI, MANTISSA_LO};
use std::f64::consts::{LN_2, PI};

/// Large-argument expansion sqrt(pi/2x) e^{-x} [1 + sum_n c_n (2x)^{-n}] with
/// c_{n+1} = -c_n ((n+1/2)^2 + nu^2) / (n+1); the Pochhammer pair
/// (i nu + 1/2)_n (-i nu + 1/2)_n is real, so the whole sum is real.
/// Truncated at the smallest term; errors if that term is still larger than
/// `min_rel` relative to the sum.
pub fn k_asymptotic_scaled(nu: f64, x: f64, min_rel: f64) -> Result<ScaledValue> {
    let mut term = 1.0f64;
    let mut s = 1.0f64;
    // s_d = sum of n c_n (2x)^{-n}, for S'.
    let mut s_d = 0.0f64;
    let mut smallest = 1.0f64;
    for n in 0..60usize {
        let nf = n as f64;
        let next = -term * ((nf + 0.5).powi(2) + nu * nu) / ((nf + 1.0) * 2.0 * x);
        if next.abs() >= term.abs() && n > 0 {
            break;
        }
        term = next;
        s += term;
        s_d += (nf + 1.0) * term;
        smallest = term.abs();
        if smallest < 1e-19 * s.abs() {
            break;
        }
    }
    if smallest > min_rel * s.abs() {
        return Err(Error::Domain(format!(
            "asymptotic seed at x = {x} for nu = {nu} bottoms out at {:.2e} rel; \
             increase x_start_factor",
            smallest / s.abs()
        )));
    }
    let ln_pref = -x + 0.5 * (PI / (2.0 * x)).ln();
    let exp2 = (ln_pref / LN_2).floor() as i64;
    let f = (ln_pref - exp2 as f64 * LN_2).exp() * s;
    // K'/K = -1 - 1/(2x) + S'/S with S' = -s_d / x.
    let logderiv = -1.0 - 0.5 / x - s_d / (x * s);
    Ok(ScaledValue::new(f, f * logderiv, exp2))
}

const MAX_STEPS: usize = 40_000_000;

/// One Dormand-Prince 5(4) step; returns (y5, err_inf).
fn dp54_step(nu: f64, t: f64, y: [f64; 2], h: f64) -> ([f64; 2], f64) {
    let rhs = |t: f64, y: [f64; 2]| -> [f64; 2] {
        [y[1], -y[1] / t + (1.0 - (nu / t) * (nu / t)) * y[0]]
    };
    let add = |y: [f64; 2], terms: &[(f64, [f64; 2])]| -> [f64; 2] {
        let mut out = y;
        for (c, k) in terms {
            out[0] += h * c * k[0];
            out[1] += h * c * k[1];
        }
        out
    };
    let k1 = rhs(t, y);
    let k2 = rhs(t + 0.2 * h, add(y, &[(0.2, k1)]));
    let k3 = rhs(t + 0.3 * h, add(y, &[(3.0 / 40.0, k1), (9.0 / 40.0, k2)]));
    let k4 = rhs(
        t + 0.8 * h,
        add(y, &[(44.0 / 45.0, k1), (-56.0 / 15.0, k2), (32.0 / 9.0, k3)]),
    );
    let k5 = rhs(
        t + 8.0 / 9.0 * h,
        add(
            y,
            &[
                (19372.0 / 6561.0, k1),
                (-25360.0 / 2187.0, k2),
                (64448.0 / 6561.0, k3),
                (-212.0 / 729.0, k4),
            ],
        ),
    );
    let k6 = rhs(
        t + h,
        add(
            y,
            &[
                (9017.0 / 3168.0, k1),
                (-355.0 / 33.0, k2),
                (46732.0 / 5247.0, k3),
                (49.0 / 176.0, k4),
                (-5103.0 / 18656.0, k5),
            ],
        ),
    );
    let y5 = add(
        y,
        &[
            (35.0 / 384.0, k1),
            (500.0 / 1113.0, k3),
            (125.0 / 192.0, k4),
            (-2187.0 / 6784.0, k5),
            (11.0 / 84.0, k6),
        ],
    );
    let k7 = rhs(t + h, y5);
    // b5 - b4 coefficients.
    let e = [
        35.0 / 384.0 - 5179.0 / 57600.0,
        0.0,
        500.0 / 1113.0 - 7571.0 / 16695.0,
        125.0 / 192.0 - 393.0 / 640.0,
        -2187.0 / 6784.0 + 92097.0 / 339200.0,
        11.0 / 84.0 - 187.0 / 2100.0,
        -1.0 / 40.0,
    ];
    let ks = [k1, k2, k3, k4, k5, k6, k7];
    let mut err = 0.0f64;
    for i in 0..2 {
        let mut de = 0.0;
        for (c, k) in e.iter().zip(ks.iter()) {
            de += c * k[i];
        }
        err = err.max((h * de).abs());
    }
    (y5, err)
}

/// Marches from `x_from` down to `x_to` (both > 0), renormalizing the shared
/// exponent whenever the mantissas leave their band.
pub fn march_inward(
    nu: f64,
    x_from: f64,
    x_to: f64,
    seed: ScaledValue,
    rtol: f64,
) -> Result<ScaledValue> {
    let mut t = x_from;
    let mut v = seed;
    let mut h = -1e-3 * x_from.min(1e3);
    let mut steps = 0usize;
    while t > x_to {
        if t + h < x_to {
            h = x_to - t;
        }
        let (ynew, err) = dp54_step(nu, t, [v.f, v.fp], h);
        let scale = v
            .f
            .abs()
            .max(v.fp.abs())
            .max(ynew[0].abs().max(ynew[1].abs()))
            .max(MANTISSA_LO);
        let ratio = err / (rtol * scale);
        if ratio <= 1.0 {
            t += h;
            v.f = ynew[0];
            v.fp = ynew[1];
            v.renormalize();
        }
        let factor = if ratio > 0.0 {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        if h.abs() < 1e-13 * t.abs().max(1.0) {
            return Err(Error::Convergence(format!(
                "ODE march step underflow at x = {t} (nu = {nu})"
            )));
        }
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::Convergence(format!(
                "ODE march exceeded {MAX_STEPS} steps (nu = {nu}, to x = {x_to})"
            )));
        }
    }
    Ok(v)
}

/// Scaled (K, K') at (nu, x) by the seeded inward march.
pub fn eval_k_ode_impl(nu: f64, x: f64, cfg: &EvalConfig) -> Result<ScaledValue> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("ode: x = {x} not in (0, inf)")));
    }
    let x_start = (cfg.x_start_factor * x.max(nu) * x.max(nu)).max(x + 10.0);
    let seed = k_asymptotic_scaled(nu, x_start, 0.1 * cfg.ode_tol)?;
    march_inward(nu, x_start, x, seed, cfg.ode_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn asymptotic_matches_k0_at_large_x() {
        // K_0(20) = 5.7412378153365838e-10 (classical value).
        let v = k_asymptotic_scaled(0.0, 20.0, 1e-10).unwrap();
        let (k, kp) = v.to_f64();
        assert_relative_eq!(k, 5.7412378153365838e-10, max_relative = 1e-12);
        // dK_0/dx(20) = -K_1(20) = -5.8830579695570382e-10.
        assert_relative_eq!(kp, -5.8830579695570382e-10, max_relative = 1e-11);
    }

    #[test]
    fn asymptotic_rejects_small_x_for_large_nu() {
        assert!(k_asymptotic_scaled(30.0, 15.0, 1e-13).is_err());
    }

    #[test]
    fn march_reproduces_k0() {
        let cfg = EvalConfig::default();
        let v = eval_k_ode_impl(0.0, 1.0, &cfg).unwrap();
        let (k, kp) = v.to_f64();
        assert_relative_eq!(k, 0.42102443824070833334, max_relative = 1e-11);
        assert_relative_eq!(kp, -0.60190723019723457474, max_relative = 1e-11);
    }

    #[test]
    fn march_imaginary_order_scaled() {
        let cfg = EvalConfig::default();
        let v = eval_k_ode_impl(5.0, 1.0, &cfg).unwrap();
        let (khat, khat_dx) = v.descale_khat(5.0);
        assert_relative_eq!(khat, 0.9800584440033037075, max_relative = 1e-10);
        assert_relative_eq!(khat_dx, -2.7582229362463804026, max_relative = 1e-10);
    }

    #[test]
    fn mantissas_stay_in_band() {
        let cfg = EvalConfig::default();
        let v = eval_k_ode_impl(8.0, 2.0, &cfg).unwrap();
        assert!(v.in_band());
    }
}
