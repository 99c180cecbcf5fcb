//! Surface models and their reflection coefficients.
//!
//! Every dielectric function here is evaluated on the imaginary frequency
//! axis, `omega = i xi`, where it is real and at least one. Frequencies are
//! stored as inverse lengths (nm^-1); the CLI layer converts from eV.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four surface models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum MaterialModel {
    /// Constant refractive index `n >= 1`.
    NonDispersive { n: f64 },
    /// Lossless free-electron gas, `eps(omega) = 1 - omega_p^2 / omega^2`.
    Plasma { omega_p: f64 },
    /// Bound charges with restoring force, `eps(omega) = 1 - omega_p^2 / (omega^2 - omega_t^2)`.
    LorentzDielectric { omega_p: f64, omega_t: f64 },
    /// Idealised mirror with `R_TE = -1`, `R_TM = +1` at every frequency.
    PerfectReflector,
}

/// Static susceptibility `chi(0) = eps(0) - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticSusceptibility {
    Finite(f64),
    /// Plasma and perfect reflector: the static response is infinite.
    Unbounded,
}

impl StaticSusceptibility {
    pub fn finite(self) -> Option<f64> {
        match self {
            StaticSusceptibility::Finite(chi) => Some(chi),
            StaticSusceptibility::Unbounded => None,
        }
    }
}

impl MaterialModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MaterialModel::NonDispersive { n } => {
                if !(n >= 1.0 && n.is_finite()) {
                    return Err(Error::domain(format!("refractive index must be finite and >= 1, got {n}")));
                }
            }
            MaterialModel::Plasma { omega_p } => check_frequency("omega_p", omega_p)?,
            MaterialModel::LorentzDielectric { omega_p, omega_t } => {
                check_frequency("omega_p", omega_p)?;
                check_frequency("omega_t", omega_t)?;
            }
            MaterialModel::PerfectReflector => {}
        }
        Ok(())
    }

    /// Lorentz model with a given static susceptibility and resonance.
    pub fn lorentz_from_chi0(chi0: f64, omega_t: f64) -> Self {
        MaterialModel::LorentzDielectric { omega_p: chi0.sqrt() * omega_t, omega_t }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MaterialModel::NonDispersive { .. } => "nondispersive",
            MaterialModel::Plasma { .. } => "plasma",
            MaterialModel::LorentzDielectric { .. } => "lorentz",
            MaterialModel::PerfectReflector => "perfect",
        }
    }

    pub fn static_susceptibility(&self) -> StaticSusceptibility {
        match *self {
            MaterialModel::NonDispersive { n } => StaticSusceptibility::Finite(n * n - 1.0),
            MaterialModel::LorentzDielectric { omega_p, omega_t } => {
                let ratio = omega_p / omega_t;
                StaticSusceptibility::Finite(ratio * ratio)
            }
            MaterialModel::Plasma { .. } | MaterialModel::PerfectReflector => StaticSusceptibility::Unbounded,
        }
    }

    /// `eps(i xi)`.
    pub fn epsilon_imaginary(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) {
            return Err(Error::domain(format!("imaginary frequency must be positive, got {xi}")));
        }
        self.validate()?;
        match *self {
            MaterialModel::PerfectReflector => Err(Error::domain(
                "perfect reflector has no dielectric function; its reflection coefficients are limits",
            )),
            _ => Ok(1.0 + self.susceptibility_unchecked(xi)),
        }
    }

    /// `(eps(0) - 1) / (eps(0) + 1)`, the zero-frequency TM mirror strength.
    pub fn static_mirror_coefficient(&self) -> f64 {
        match self.static_susceptibility() {
            StaticSusceptibility::Finite(chi) => chi / (chi + 2.0),
            StaticSusceptibility::Unbounded => 1.0,
        }
    }

    /// `eps(i xi) - 1` without argument checks. Panics for the perfect reflector.
    pub(crate) fn susceptibility_unchecked(&self, xi: f64) -> f64 {
        match *self {
            MaterialModel::NonDispersive { n } => n * n - 1.0,
            MaterialModel::Plasma { omega_p } => {
                let r = omega_p / xi;
                r * r
            }
            MaterialModel::LorentzDielectric { omega_p, omega_t } => omega_p * omega_p / (xi * xi + omega_t * omega_t),
            MaterialModel::PerfectReflector => unreachable!("perfect reflector has no susceptibility"),
        }
    }

    /// Dimensionless form at distance `z`: frequencies multiplied by `z`.
    pub(crate) fn scaled(&self, z: f64) -> ScaledMaterial {
        match *self {
            MaterialModel::NonDispersive { n } => ScaledMaterial::NonDispersive { chi: n * n - 1.0 },
            MaterialModel::Plasma { omega_p } => ScaledMaterial::Plasma { wp: omega_p * z },
            MaterialModel::LorentzDielectric { omega_p, omega_t } => ScaledMaterial::Lorentz {
                wp: omega_p * z,
                wt: omega_t * z,
            },
            MaterialModel::PerfectReflector => ScaledMaterial::PerfectReflector,
        }
    }
}

fn check_frequency(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {value}")))
    }
}

/// A material expressed through the dimensionless groups `omega z`,
/// with the scaled imaginary frequency `u = xi z` as argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ScaledMaterial {
    NonDispersive { chi: f64 },
    Plasma { wp: f64 },
    Lorentz { wp: f64, wt: f64 },
    PerfectReflector,
}

impl ScaledMaterial {
    /// `eps(i u / z) - 1`.
    #[inline]
    pub(crate) fn chi(&self, u: f64) -> f64 {
        match *self {
            ScaledMaterial::NonDispersive { chi } => chi,
            ScaledMaterial::Plasma { wp } => {
                let r = wp / u;
                r * r
            }
            ScaledMaterial::Lorentz { wp, wt } => wp * wp / (u * u + wt * wt),
            ScaledMaterial::PerfectReflector => f64::INFINITY,
        }
    }

    pub(crate) fn static_mirror(&self) -> f64 {
        match *self {
            ScaledMaterial::NonDispersive { chi } => chi / (chi + 2.0),
            ScaledMaterial::Lorentz { wp, wt } => {
                let chi = (wp / wt) * (wp / wt);
                chi / (chi + 2.0)
            }
            ScaledMaterial::Plasma { .. } | ScaledMaterial::PerfectReflector => 1.0,
        }
    }

    /// Frequencies where the dielectric response changes character.
    pub(crate) fn characteristic_scales(&self) -> Vec<f64> {
        match *self {
            ScaledMaterial::NonDispersive { .. } | ScaledMaterial::PerfectReflector => Vec::new(),
            ScaledMaterial::Plasma { wp } => vec![wp],
            ScaledMaterial::Lorentz { wp, wt } => vec![wt, wp, (wp * wp + wt * wt).sqrt()],
        }
    }
}

fn check_reflection_args(eps: f64, eta: f64) -> Result<()> {
    if !(eps >= 1.0) || eps.is_nan() {
        return Err(Error::domain(format!("eps must be >= 1, got {eps}")));
    }
    if !(eta >= 1.0) || eta.is_nan() {
        return Err(Error::domain(format!("eta must be >= 1, got {eta}")));
    }
    Ok(())
}

/// TE reflection coefficient on the imaginary axis,
/// `(eta - sqrt(eps - 1 + eta^2)) / (eta + sqrt(eps - 1 + eta^2))`.
///
/// `eps = +inf` is accepted and gives the mirror value `-1`.
pub fn reflection_te(eps: f64, eta: f64) -> Result<f64> {
    check_reflection_args(eps, eta)?;
    if eps.is_infinite() {
        return Ok(-1.0);
    }
    Ok(te_from_chi(eps - 1.0, eta))
}

/// TM reflection coefficient on the imaginary axis,
/// `(eta eps - sqrt(eps - 1 + eta^2)) / (eta eps + sqrt(eps - 1 + eta^2))`.
pub fn reflection_tm(eps: f64, eta: f64) -> Result<f64> {
    check_reflection_args(eps, eta)?;
    if eps.is_infinite() {
        return Ok(1.0);
    }
    Ok(tm_from_chi(eps - 1.0, eta))
}

/// Plasma TE coefficient on the real `k_z` axis,
/// `(k_z - sqrt(k_z^2 - omega_p^2)) / (k_z + sqrt(k_z^2 - omega_p^2))`.
///
/// Below the plasma frequency the root is `i sqrt(omega_p^2 - k_z^2)`, the
/// branch on which the field decays into the medium, so the coefficient is
/// a pure phase there.
pub fn reflection_te_real_axis(omega_p: f64, k_z: f64) -> Result<Complex64> {
    check_frequency("omega_p", omega_p)?;
    if !(k_z >= 0.0) {
        return Err(Error::domain(format!("k_z must be >= 0, got {k_z}")));
    }
    Ok(plasma_te_real(omega_p, k_z))
}

// Stable forms. With chi = eps - 1 and s = sqrt(chi + eta^2):
//   R_TE = -chi / (eta + s)^2
//   R_TM - (eps-1)/(eps+1) = -2 eps chi / ((eta + s)(eta eps + s)(eps + 1))

#[inline]
pub(crate) fn te_from_chi(chi: f64, eta: f64) -> f64 {
    let s = (chi + eta * eta).sqrt();
    let d = eta + s;
    -chi / (d * d)
}

#[inline]
pub(crate) fn tm_from_chi(chi: f64, eta: f64) -> f64 {
    let eps = 1.0 + chi;
    let s = (chi + eta * eta).sqrt();
    (eta * eps - s) / (eta * eps + s)
}

/// `R_TM(eps, eta) - (eps - 1)/(eps + 1)`, free of cancellation at large `eta`.
#[inline]
pub(crate) fn tm_minus_high_eta_limit(chi: f64, eta: f64) -> f64 {
    let eps = 1.0 + chi;
    let s = (chi + eta * eta).sqrt();
    -2.0 * eps * chi / ((eta + s) * (eta * eps + s) * (eps + 1.0))
}

/// `R_TM - 1` for a plasma in scaled variables, written so that `chi = (wp/u)^2`
/// never has to be formed.
#[inline]
pub(crate) fn plasma_tm_minus_one(wp: f64, u: f64, eta: f64) -> f64 {
    let root = (wp * wp + u * u * eta * eta).sqrt();
    -2.0 * u * root / (eta * (u * u + wp * wp) + u * root)
}

/// Plasma `R_TE` in scaled variables: `-wp^2 / (u eta + sqrt(wp^2 + u^2 eta^2))^2`.
#[inline]
pub(crate) fn plasma_te_scaled(wp: f64, u: f64, eta: f64) -> f64 {
    let a = u * eta;
    let d = a + (wp * wp + a * a).sqrt();
    -wp * wp / (d * d)
}

#[inline]
pub(crate) fn plasma_te_real(omega_p: f64, k_z: f64) -> Complex64 {
    if k_z >= omega_p {
        let s = ((k_z - omega_p) * (k_z + omega_p)).sqrt();
        let d = k_z + s;
        Complex64::new(omega_p * omega_p / (d * d), 0.0)
    } else {
        let s = ((omega_p - k_z) * (omega_p + k_z)).sqrt();
        let num = Complex64::new(k_z, -s);
        let den = Complex64::new(k_z, s);
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TIGHT: f64 = 1e-15;

    #[test]
    fn epsilon_examples() {
        let nd = MaterialModel::NonDispersive { n: 2.0 };
        assert_eq!(nd.epsilon_imaginary(0.3).unwrap(), 4.0);
        let plasma = MaterialModel::Plasma { omega_p: 0.7 };
        assert!((plasma.epsilon_imaginary(0.7).unwrap() - 2.0).abs() < TIGHT);
        let lorentz = MaterialModel::LorentzDielectric { omega_p: 2.0, omega_t: 1.0 };
        assert!((lorentz.epsilon_imaginary(1e-9).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn epsilon_rejects_bad_input() {
        assert!(MaterialModel::PerfectReflector.epsilon_imaginary(1.0).is_err());
        assert!(MaterialModel::NonDispersive { n: 2.0 }.epsilon_imaginary(0.0).is_err());
        assert!(MaterialModel::NonDispersive { n: 2.0 }.epsilon_imaginary(-1.0).is_err());
        assert!(MaterialModel::NonDispersive { n: 0.5 }.epsilon_imaginary(1.0).is_err());
        assert!(MaterialModel::Plasma { omega_p: 0.0 }.epsilon_imaginary(1.0).is_err());
    }

    #[test]
    fn static_mirror_examples() {
        assert!((MaterialModel::NonDispersive { n: 2.0 }.static_mirror_coefficient() - 0.6).abs() < TIGHT);
        assert_eq!(MaterialModel::Plasma { omega_p: 3.0 }.static_mirror_coefficient(), 1.0);
        assert_eq!(MaterialModel::PerfectReflector.static_mirror_coefficient(), 1.0);
        let lorentz = MaterialModel::LorentzDielectric { omega_p: 2.0, omega_t: 1.0 };
        assert!((lorentz.static_mirror_coefficient() - 2.0 / 3.0).abs() < TIGHT);
        assert_eq!(
            MaterialModel::Plasma { omega_p: 1.0 }.static_susceptibility(),
            StaticSusceptibility::Unbounded
        );
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(reflection_te(1.0, 3.0).unwrap(), 0.0);
        assert!((reflection_te(4.0, 1.0).unwrap() + 1.0 / 3.0).abs() < TIGHT);
        assert_eq!(reflection_te(f64::INFINITY, 2.0).unwrap(), -1.0);
        assert!((reflection_te(1e30, 2.0).unwrap() + 1.0).abs() < 1e-12);

        assert_eq!(reflection_tm(1.0, 2.0).unwrap(), 0.0);
        assert!((reflection_tm(4.0, 1.0).unwrap() - 1.0 / 3.0).abs() < TIGHT);
        assert!((reflection_tm(4.0, 1e7).unwrap() - 0.6).abs() < 1e-12);
        assert!((reflection_tm(1e30, 2.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reflection_domain_errors() {
        assert!(reflection_te(0.5, 2.0).is_err());
        assert!(reflection_te(2.0, 0.5).is_err());
        assert!(reflection_tm(f64::NAN, 2.0).is_err());
        assert!(reflection_te_real_axis(-1.0, 1.0).is_err());
        assert!(reflection_te_real_axis(1.0, -1.0).is_err());
    }

    #[test]
    fn real_axis_examples() {
        let wp = 1.3;
        let at_edge = reflection_te_real_axis(wp, wp).unwrap();
        assert!((at_edge - Complex64::new(1.0, 0.0)).norm() < TIGHT);
        let mid = reflection_te_real_axis(wp, wp / 2f64.sqrt()).unwrap();
        assert!((mid - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        let k = 1e4 * wp;
        let far = reflection_te_real_axis(wp, k).unwrap();
        let asymptote = wp * wp / (4.0 * k * k);
        assert!((far.re / asymptote - 1.0).abs() < 1e-6);
        assert_eq!(far.im, 0.0);
    }

    #[test]
    fn stable_forms_agree_with_definitions() {
        for &(eps, eta) in &[(4.0, 1.0), (1.5, 7.0), (100.0, 3.0), (2.0, 50.0)] {
            let s: f64 = (eps - 1.0 + eta * eta as f64).sqrt();
            let te = (eta - s) / (eta + s);
            let tm = (eta * eps - s) / (eta * eps + s);
            assert!((te_from_chi(eps - 1.0, eta) - te).abs() < 1e-14);
            assert!((tm_from_chi(eps - 1.0, eta) - tm).abs() < 1e-14);
            let diff = tm - (eps - 1.0) / (eps + 1.0);
            assert!((tm_minus_high_eta_limit(eps - 1.0, eta) - diff).abs() < 1e-13);
        }
        let (wp, u, eta): (f64, f64, f64) = (0.3, 0.02, 4.0);
        let chi = (wp / u).powi(2);
        assert!((plasma_tm_minus_one(wp, u, eta) - (tm_from_chi(chi, eta) - 1.0)).abs() < 1e-13);
        assert!((plasma_te_scaled(wp, u, eta) - te_from_chi(chi, eta)).abs() < 1e-13);
    }

    #[test]
    fn tm_subtraction_decays_like_inverse_eta_squared() {
        let chi = 3.0;
        let a = tm_minus_high_eta_limit(chi, 100.0);
        let b = tm_minus_high_eta_limit(chi, 1000.0);
        assert!((a / b - 100.0).abs() < 0.1);
    }

    proptest! {
        #[test]
        fn reflection_ranges(eps in 1.0f64..1e6, eta in 1.0f64..1e4) {
            let te = reflection_te(eps, eta).unwrap();
            let tm = reflection_tm(eps, eta).unwrap();
            prop_assert!(te > -1.0 && te <= 0.0);
            prop_assert!(tm >= 0.0 && tm < 1.0);
            prop_assert!(te * tm <= 0.0);
        }

        #[test]
        fn te_bounded_by_leading_asymptote(chi in 1e-3f64..10.0, eta in 1.0f64..1e3) {
            let te = te_from_chi(chi, eta);
            prop_assert!(te.abs() <= chi / (4.0 * eta * eta) * (1.0 + 1e-12));
        }

        #[test]
        fn dispersive_eps_is_monotone(wp in 1e-3f64..1e3, wt in 1e-3f64..1e3, a in 1e-4f64..1e4, b in 1e-4f64..1e4) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            for m in [MaterialModel::Plasma { omega_p: wp }, MaterialModel::LorentzDielectric { omega_p: wp, omega_t: wt }] {
                let e_lo = m.epsilon_imaginary(lo).unwrap();
                let e_hi = m.epsilon_imaginary(hi).unwrap();
                prop_assert!(e_hi >= 1.0);
                prop_assert!(e_hi <= e_lo);
            }
        }

        #[test]
        fn total_reflection_below_plasma_frequency(wp in 1e-3f64..1e3, frac in 0.0f64..=1.0) {
            let r = reflection_te_real_axis(wp, frac * wp).unwrap();
            prop_assert!((r.norm() - 1.0).abs() < 1e-14);
        }
    }
}
