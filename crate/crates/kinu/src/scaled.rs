//! Extended-range value/derivative pairs.
//!
//! K_{i nu}(x) spans far more dynamic range than f64 along an inward ODE
//! march (it is ~e^{-x} at the seed point x ~ nu^2), so the march carries a
//! mantissa pair together with a power-of-two exponent. Rescaling by 2^k is
//! exact in binary floating point, so the representation costs no accuracy.

use std::f64::consts::{FRAC_PI_2, LN_2};

/// Lower edge of the mantissa band, 2^-32.
pub const MANTISSA_LO: f64 = 1.0 / 4294967296.0;
/// Upper edge of the mantissa band, 2^32.
pub const MANTISSA_HI: f64 = 4294967296.0;

/// A function value and its first derivative sharing one binary exponent:
/// the represented pair is `(f * 2^exp2, fp * 2^exp2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledValue {
    pub f: f64,
    pub fp: f64,
    pub exp2: i64,
}

impl ScaledValue {
    pub fn new(f: f64, fp: f64, exp2: i64) -> Self {
        let mut v = ScaledValue { f, fp, exp2 };
        v.renormalize();
        v
    }

    /// Brings max(|f|, |fp|) back into [2^-32, 2^32); no-op for the zero pair.
    pub fn renormalize(&mut self) {
        let mut m = self.f.abs().max(self.fp.abs());
        if m == 0.0 {
            self.exp2 = 0;
            return;
        }
        while m >= MANTISSA_HI {
            self.f *= MANTISSA_LO;
            self.fp *= MANTISSA_LO;
            self.exp2 += 32;
            m *= MANTISSA_LO;
        }
        while m < MANTISSA_LO {
            self.f *= MANTISSA_HI;
            self.fp *= MANTISSA_HI;
            self.exp2 -= 32;
            m *= MANTISSA_HI;
        }
    }

    pub fn in_band(&self) -> bool {
        let m = self.f.abs().max(self.fp.abs());
        m == 0.0 || (MANTISSA_LO..MANTISSA_HI).contains(&m)
    }

    /// ln of the represented |f| (`-inf` for zero).
    pub fn ln_abs_f(&self) -> f64 {
        self.f.abs().ln() + self.exp2 as f64 * LN_2
    }

    /// Represented values as plain f64 (may overflow/underflow; callers in
    /// this crate descale through [`descale_khat`] instead).
    pub fn to_f64(&self) -> (f64, f64) {
        let s = pow2(self.exp2);
        (self.f * s, self.fp * s)
    }

    /// Applies the e^{nu pi/2} convention shift in log space, returning the
    /// scaled pair (Khat, Khat') when `self` holds (K, K') mantissas.
    pub fn descale_khat(&self, nu: f64) -> (f64, f64) {
        let t = self.exp2 as f64 * LN_2 + nu * FRAC_PI_2;
        (apply_log_shift(self.f, t), apply_log_shift(self.fp, t))
    }
}

/// Exact 2^e, saturating to 0 / infinity outside the representable range.
fn pow2(e: i64) -> f64 {
    if e > 1100 {
        f64::INFINITY
    } else if e < -1100 {
        0.0
    } else {
        2f64.powi(e as i32)
    }
}

/// `v * e^t` computed through logarithms so that huge `t` paired with tiny
/// `v` (or vice versa) does not trip intermediate overflow.
pub fn apply_log_shift(v: f64, t: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let ln = v.abs().ln() + t;
    v.signum() * ln.exp()
}
