use std::f64::consts::FRAC_PI_2;

use super::{Estimate, QuadratureConfig};
use crate::error::{Error, Result};

const T_MAX: f64 = 4.5;
const MAX_LEVELS: usize = 12;

/// Exp-sinh rule on `[origin, inf)`: `u = origin + scale exp(pi/2 sinh t)`,
/// trapezoidal in `t` with step halving until successive levels agree.
pub(crate) fn exp_sinh<F>(f: F, origin: f64, scale: f64, config: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    let term = |t: f64| {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        let w = scale * e * FRAC_PI_2 * t.cosh();
        let u = origin + scale * e;
        if !(u.is_finite() && w.is_finite()) {
            return 0.0;
        }
        let v = f(u) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let mut h = 1.0;
    let mut evaluations = 0usize;
    let n0 = (T_MAX / h) as i64;
    let mut sum: f64 = (-n0..=n0).map(|k| term(k as f64 * h)).sum();
    evaluations += (2 * n0 + 1) as usize;
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for level in 1..=MAX_LEVELS {
        h *= 0.5;
        let n = (T_MAX / h) as i64;
        let odd: f64 = (-n..=n).filter(|k| k % 2 != 0).map(|k| term(k as f64 * h)).sum();
        evaluations += n as usize + 1;
        sum += odd;
        let next = sum * h;
        error = (next - estimate).abs();
        estimate = next;
        if level >= 3 && error <= config.abs_tol.max(config.rel_tol * estimate.abs()) {
            return Ok(Estimate { value: estimate, error, evaluations, subdivisions: level });
        }
    }
    Err(Error::Convergence {
        what: "exp-sinh levels exhausted".into(),
        value: estimate,
        error,
        subdivisions: MAX_LEVELS,
    })
}
