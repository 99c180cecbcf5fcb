//! Numerical integration engines.
//!
//! * [`integrate_semi_infinite`] and [`integrate_eta`]: adaptive Gauss-Kronrod
//!   on `(0, inf)` and `[1, inf)` after mapping the half-line onto `[0, 1)`.
//! * [`integrate_oscillatory`]: `int_0^inf g(k) exp(i a k) dk` evaluated with an
//!   exponential regulator `exp(-delta k)` at a sequence of `delta` and
//!   extrapolated to `delta -> 0`.

mod extrapolate;
mod gauss_kronrod;
mod oscillatory;
mod tanh_sinh;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use extrapolate::{extrapolate_to_zero, ExtrapolationBasis};
pub use gauss_kronrod::{adaptive, Budget, Integrand};
pub use oscillatory::{integrate_oscillatory, integrate_oscillatory_with};
pub(crate) use tanh_sinh::exp_sinh;

/// Integral estimate with its error bound and cost counters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T = f64> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

pub type ComplexEstimate = Estimate<Complex64>;

/// Map used for `int_1^inf d eta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EtaTransform {
    /// `eta = 1 / (1 - x)`.
    Reciprocal,
    /// `eta = 1 + L x / (1 - x)` with `L` the decay length of the integrand.
    RationalStretch,
}

/// Map used for `int_0^inf du`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UTransform {
    /// `u = -L ln(1 - x)`, exact for a pure exponential.
    ExpWeighted,
    /// Double-exponential (exp-sinh) trapezoidal rule.
    TanhSinh,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub eta_transform: EtaTransform,
    pub u_transform: UTransform,
    /// Dimensionless regulator values; the engine multiplies them by `2 / phase_rate`.
    pub regulator_sequence: Vec<f64>,
    /// Degree of the extrapolating polynomial in `delta`.
    pub extrapolation_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            eta_transform: EtaTransform::RationalStretch,
            u_transform: UTransform::ExpWeighted,
            regulator_sequence: (1..=6).map(|k| 0.5f64.powi(k)).collect(),
            extrapolation_order: 3,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Config("tolerances must be > 0".into()));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Config("max_subdivisions must be >= 1".into()));
        }
        if self.extrapolation_order < 1 {
            return Err(Error::Config("extrapolation_order must be >= 1".into()));
        }
        let seq = &self.regulator_sequence;
        if seq.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return Err(Error::Config("regulator values must be positive and finite".into()));
        }
        if seq.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("regulator_sequence must be strictly decreasing".into()));
        }
        if seq.len() < self.extrapolation_order + 1 {
            return Err(Error::Config(format!(
                "regulator_sequence needs at least {} entries for extrapolation order {}",
                self.extrapolation_order + 1,
                self.extrapolation_order
            )));
        }
        Ok(())
    }

    /// Copy with both tolerances multiplied by `factor`.
    pub fn scaled_tolerances(&self, factor: f64) -> Self {
        QuadratureConfig {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..self.clone()
        }
    }

    pub(crate) fn budget(&self) -> Budget {
        Budget {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum HalfLineMap {
    Exponential,
    Rational,
}

/// `[origin, inf)` mapped onto `[0, 1)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HalfLine {
    pub origin: f64,
    pub scale: f64,
    pub map: HalfLineMap,
}

impl HalfLine {
    /// Returns `(t, dt/dx)`.
    #[inline]
    fn forward(&self, x: f64) -> (f64, f64) {
        let y = 1.0 - x;
        match self.map {
            HalfLineMap::Exponential => (self.origin - self.scale * y.ln(), self.scale / y),
            HalfLineMap::Rational => (self.origin + self.scale * x / y, self.scale / (y * y)),
        }
    }

    fn inverse(&self, t: f64) -> f64 {
        let s = (t - self.origin) / self.scale;
        match self.map {
            HalfLineMap::Exponential => -(-s).exp_m1(),
            HalfLineMap::Rational => s / (1.0 + s),
        }
    }

    pub fn integrate<T, F>(&self, f: F, breakpoints: &[f64], budget: Budget) -> Result<Estimate<T>>
    where
        T: Integrand,
        F: Fn(f64) -> T,
    {
        let mut points = vec![0.0];
        let mut inner: Vec<f64> = breakpoints
            .iter()
            .filter(|b| **b > self.origin && b.is_finite())
            .map(|b| self.inverse(*b))
            .filter(|x| *x > 0.0 && *x < 1.0)
            .collect();
        inner.sort_by(f64::total_cmp);
        inner.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        points.extend(inner);
        points.push(1.0);
        adaptive(
            |x| {
                let (t, jac) = self.forward(x);
                if !(t.is_finite() && jac.is_finite()) {
                    return T::zero();
                }
                let v = f(t) * jac;
                if v.is_finite_value() {
                    v
                } else {
                    T::zero()
                }
            },
            &points,
            budget,
        )
    }
}

/// `int_origin^inf f(u) du` with the configured `u` map, an integrand decay
/// length `scale` and optional interior breakpoints.
pub(crate) fn half_line_u<F>(f: F, origin: f64, scale: f64, breakpoints: &[f64], config: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    match config.u_transform {
        UTransform::ExpWeighted => HalfLine { origin, scale, map: HalfLineMap::Exponential }.integrate(f, breakpoints, config.budget()),
        UTransform::TanhSinh => exp_sinh(f, origin, scale, config),
    }
}

/// `int_1^inf f(eta) d eta` with the configured `eta` map.
pub(crate) fn half_line_eta<F>(f: F, scale: f64, breakpoints: &[f64], budget: Budget, transform: EtaTransform) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    let line = match transform {
        EtaTransform::Reciprocal => HalfLine { origin: 1.0, scale: 1.0, map: HalfLineMap::Rational },
        EtaTransform::RationalStretch => HalfLine { origin: 1.0, scale, map: HalfLineMap::Rational },
    };
    line.integrate(f, breakpoints, budget)
}

/// `int_0^inf f(u) du` for integrands with exponential or
/// algebraic-times-exponential decay.
pub fn integrate_semi_infinite<F>(f: F, config: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    config.validate()?;
    half_line_u(f, 0.0, 1.0, &[], config)
}

/// `int_1^inf f(eta) d eta`.
pub fn integrate_eta<F>(f: F, config: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    config.validate()?;
    half_line_eta(f, 1.0, &[], config.budget(), config.eta_transform)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig { rel_tol: 1e-12, abs_tol: 1e-14, ..Default::default() }
    }

    #[test]
    fn semi_infinite_examples() {
        for transform in [UTransform::ExpWeighted, UTransform::TanhSinh] {
            let c = QuadratureConfig { u_transform: transform, ..cfg() };
            let a = integrate_semi_infinite(|u| (-u).exp(), &c).unwrap();
            assert!((a.value - 1.0).abs() < 1e-10, "{transform:?}: {}", a.value);
            let b = integrate_semi_infinite(|u| u * (-2.0 * u).exp(), &c).unwrap();
            assert!((b.value - 0.25).abs() < 1e-10, "{transform:?}: {}", b.value);
            let d = integrate_semi_infinite(|u| u.powi(3) * (-u).exp(), &c).unwrap();
            assert!((d.value - 6.0).abs() < 1e-9, "{transform:?}: {}", d.value);
        }
    }

    #[test]
    fn eta_examples() {
        for transform in [EtaTransform::Reciprocal, EtaTransform::RationalStretch] {
            let c = QuadratureConfig { eta_transform: transform, ..cfg() };
            let a = integrate_eta(|h| (-2.0 * h).exp(), &c).unwrap();
            assert!((a.value - (-2f64).exp() / 2.0).abs() < 1e-10);
            let b = integrate_eta(|h| h * h * (-h).exp(), &c).unwrap();
            assert!((b.value - 5.0 * (-1f64).exp()).abs() < 1e-9);
            let d = integrate_eta(|h| 1.0 / (h * h), &c).unwrap();
            assert!((d.value - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn error_estimate_covers_true_error() {
        let c = QuadratureConfig { rel_tol: 1e-6, ..cfg() };
        let est = integrate_semi_infinite(|u| u.sqrt() * (-u).exp(), &c).unwrap();
        let exact = std::f64::consts::PI.sqrt() / 2.0;
        assert!((est.value - exact).abs() <= est.error.max(1e-15));
        assert!(est.error <= 1e-6 * exact);
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        let bad = QuadratureConfig { rel_tol: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = QuadratureConfig { regulator_sequence: vec![0.5, 0.5, 0.25, 0.1], ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = QuadratureConfig { regulator_sequence: vec![0.5, 0.25], ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = QuadratureConfig { max_subdivisions: 0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn half_line_maps_invert() {
        for map in [HalfLineMap::Exponential, HalfLineMap::Rational] {
            let line = HalfLine { origin: 1.0, scale: 3.0, map };
            for x in [0.0, 0.1, 0.5, 0.9, 0.999] {
                let (t, _) = line.forward(x);
                assert!((line.inverse(t) - x).abs() < 1e-12);
            }
        }
    }
}
