//! Tunable knobs for the evaluators, quadratures and the finite-difference
//! oracle. Defaults reproduce every tolerance quoted in the test suite.

use crate::error::{Error, Result};

/// Controls for the K_{i nu} evaluators.
#[derive(Clone, Debug)]
pub struct EvalConfig {
    /// Absolute tolerance of the tanh-sinh rule for the cosh integral.
    pub quad_tol: f64,
    /// Relative per-step tolerance of the inward ODE march.
    pub ode_tol: f64,
    /// The march is seeded at `x_start_factor * max(x, nu)^2` (floored at x+10),
    /// far enough out for the large-argument expansion to bottom out below
    /// the march tolerance.
    pub x_start_factor: f64,
    /// Largest order for which the direct cosh-integral quadrature is
    /// accepted by [`crate::bessel::eval_k_quadrature`] regardless of x.
    pub nu_quad_max: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            quad_tol: 1e-14,
            ode_tol: 1e-12,
            x_start_factor: 1.0,
            nu_quad_max: 15.0,
        }
    }
}

/// Which quadrature drives the orthogonality and norm integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadRule {
    TanhSinh,
    AdaptiveGauss,
}

/// Controls for integrals over rho in [g, infinity).
#[derive(Clone, Debug)]
pub struct QuadratureSpec {
    pub rule: QuadRule,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// The rho cutoff is placed where the large-argument envelope of the
    /// integrand falls below `abs_tol / tail_safety`.
    pub tail_safety: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rule: QuadRule::TanhSinh,
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            tail_safety: 10.0,
        }
    }
}

/// Controls for the finite-difference reference solver.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Half-line box width; `None` derives it from the highest requested
    /// level as `ln(nu_max/g) + 6`.
    pub x_max: Option<f64>,
    /// Coarse grid step (the solver also runs h/2 and extrapolates).
    pub h: f64,
    /// Number of levels, counted across both parities.
    pub n_levels: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            x_max: None,
            h: 1e-3,
            n_levels: 10,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h <= 1e-3) {
            return Err(Error::Domain(format!(
                "oracle grid step h = {} outside (0, 1e-3]",
                self.h
            )));
        }
        if self.n_levels == 0 {
            return Err(Error::Domain("n_levels must be >= 1".into()));
        }
        if let Some(xm) = self.x_max {
            if !(xm.is_finite() && xm > 0.0) {
                return Err(Error::Domain(format!("x_max = {xm} not positive finite")));
            }
        }
        Ok(())
    }
}

/// Applies one `key=value` pair (the config-file syntax understood by the
/// CLI) to the given configs. Unknown keys are rejected.
pub fn apply_key_value(
    eval: &mut EvalConfig,
    quad: &mut QuadratureSpec,
    oracle: &mut OracleConfig,
    key: &str,
    value: &str,
) -> Result<()> {
    fn f(v: &str, key: &str) -> Result<f64> {
        v.parse::<f64>()
            .map_err(|_| Error::Domain(format!("config: bad float {v:?} for key {key:?}")))
    }
    match key {
        "quad_tol" => eval.quad_tol = f(value, key)?,
        "ode_tol" => eval.ode_tol = f(value, key)?,
        "x_start_factor" => eval.x_start_factor = f(value, key)?,
        "nu_quad_max" => eval.nu_quad_max = f(value, key)?,
        "rel_tol" => quad.rel_tol = f(value, key)?,
        "abs_tol" => quad.abs_tol = f(value, key)?,
        "tail_safety" => quad.tail_safety = f(value, key)?,
        "rule" => {
            quad.rule = match value {
                "tanh-sinh" => QuadRule::TanhSinh,
                "adaptive-gauss" => QuadRule::AdaptiveGauss,
                _ => {
                    return Err(Error::Domain(format!(
                        "config: rule must be tanh-sinh or adaptive-gauss, got {value:?}"
                    )))
                }
            }
        }
        "oracle.x_max" => oracle.x_max = Some(f(value, key)?),
        "oracle.h" => oracle.h = f(value, key)?,
        "oracle.n_levels" => {
            oracle.n_levels = value
                .parse()
                .map_err(|_| Error::Domain(format!("config: bad integer {value:?}")))?
        }
        _ => return Err(Error::Domain(format!("config: unknown key {key:?}"))),
    }
    Ok(())
}

/// Parses a whole config file body (`key=value` lines, `#` comments).
pub fn apply_config_text(
    eval: &mut EvalConfig,
    quad: &mut QuadratureSpec,
    oracle: &mut OracleConfig,
    text: &str,
) -> Result<()> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Domain(format!("config line {}: expected key=value", lineno + 1))
        })?;
        apply_key_value(eval, quad, oracle, key.trim(), value.trim())?;
    }
    Ok(())
}
