use std::f64::consts::PI;

use num_complex::Complex64;

use super::extrapolate::{extrapolant_sequence, ExtrapolationBasis};
use super::gauss_kronrod::{adaptive, Budget};
use super::{ComplexEstimate, HalfLine, HalfLineMap, QuadratureConfig};
use crate::error::{Error, Result};

/// Regulator length unit when there is no oscillation to set one.
const NON_OSCILLATORY_SCALE: f64 = 1e-3;
/// `exp(-delta K)` at the truncation point.
const TRUNCATION_EXPONENT: f64 = 41.5;

/// `lim_{delta -> 0} int_0^inf g(k) exp(i a k) exp(-delta k) dk` with `a = phase_rate`.
pub fn integrate_oscillatory<G>(g: G, phase_rate: f64, config: &QuadratureConfig) -> Result<ComplexEstimate>
where
    G: Fn(f64) -> Complex64,
{
    integrate_oscillatory_with(g, phase_rate, &[], config)
}

/// As [`integrate_oscillatory`], with points where `g` is not smooth.
pub fn integrate_oscillatory_with<G>(
    g: G,
    phase_rate: f64,
    breakpoints: &[f64],
    config: &QuadratureConfig,
) -> Result<ComplexEstimate>
where
    G: Fn(f64) -> Complex64,
{
    config.validate()?;
    if !(phase_rate >= 0.0 && phase_rate.is_finite()) {
        return Err(Error::domain(format!("phase rate must be finite and >= 0, got {phase_rate}")));
    }
    let unit = if phase_rate > 0.0 { 0.5 * phase_rate } else { NON_OSCILLATORY_SCALE };
    let deltas: Vec<f64> = config.regulator_sequence.iter().map(|d| d * unit).collect();
    let budget = Budget {
        abs_tol: 1e-2 * config.abs_tol,
        rel_tol: 1e-2 * config.rel_tol,
        max_subdivisions: config.max_subdivisions,
    };

    let mut values = Vec::with_capacity(deltas.len());
    let mut errors = Vec::with_capacity(deltas.len());
    let mut evaluations = 0;
    let mut subdivisions = 0;
    for &delta in &deltas {
        let rate = Complex64::new(-delta, phase_rate);
        let integrand = |k: f64| g(k) * (rate * k).exp();
        let est = if phase_rate > 0.0 {
            let cutoff = TRUNCATION_EXPONENT / delta;
            let period = 2.0 * PI / phase_rate;
            let segments = (cutoff / period).ceil() as usize;
            let mut points: Vec<f64> = (0..=segments).map(|j| (j as f64 * period).min(cutoff)).collect();
            points.extend(breakpoints.iter().copied().filter(|b| *b > 0.0 && *b < cutoff));
            points.sort_by(f64::total_cmp);
            points.dedup();
            let seg_budget = Budget { max_subdivisions: budget.max_subdivisions + points.len(), ..budget };
            adaptive(integrand, &points, seg_budget)?
        } else {
            let mut points = breakpoints.to_vec();
            points.push(1.0 / delta);
            HalfLine { origin: 0.0, scale: 1.0, map: HalfLineMap::Rational }.integrate(integrand, &points, budget)?
        };
        evaluations += est.evaluations;
        subdivisions += est.subdivisions;
        values.push(est.value);
        errors.push(est.error);
    }

    let basis = if phase_rate > 0.0 { ExtrapolationBasis::Polynomial } else { ExtrapolationBasis::PolynomialLog };
    let order = config.extrapolation_order;
    let seq = extrapolant_sequence(&deltas, &values, order, basis)?;
    let value = seq[order];
    let spread = (seq[order] - seq[order - 1]).norm();
    let tolerance = config.abs_tol.max(config.rel_tol * value.norm());
    if order >= 2 {
        let previous_spread = (seq[order - 1] - seq[order - 2]).norm();
        if spread > previous_spread && spread > tolerance {
            return Err(Error::Convergence {
                what: "regulator extrapolants do not contract".into(),
                value: value.norm(),
                error: spread,
                subdivisions,
            });
        }
    }
    // Quadrature errors propagate through the interpolation weights at zero.
    let m = order + 1;
    let n = deltas.len();
    let xs = &deltas[n - m..];
    let propagated: f64 = (0..m)
        .map(|i| {
            let weight: f64 = (0..m).filter(|&j| j != i).map(|j| xs[j] / (xs[j] - xs[i])).product();
            weight.abs() * errors[n - m + i]
        })
        .sum();
    Ok(ComplexEstimate { value, error: spread + propagated, evaluations, subdivisions })
}
