//! Shift integrals and the per-model evaluation routes.
//!
//! With `u = xi z` the shape factor is
//!
//! ```text
//! S_perp = int_0^inf du int_1^inf d eta  u [(3 eta^2 - 2) R_TE + (eta^2 - 2)(R_TM - r0)] e^{-2 u eta}  -  3/4 r0
//! S_para = int_0^inf du int_1^inf d eta  u/2 [(eta^2 - 3) R_TE + (5 eta^2 - 3)(R_TM - r0)] e^{-2 u eta}  -  r0
//! ```
//!
//! and `Delta mu / mu_B = (alpha / 2 pi) S / (m z)^2`.
//!
//! For a plasma the TE part of this integral does not converge at small `u`,
//! so it is evaluated on the real `k_z` axis instead. After the `k_par`
//! integral is done in closed form (as a finite part), what remains is
//! `J = int_0^inf q R_TE(q) e^{2 i q} dq` with `q = k_z z`, and
//! `S_TE = -c (2a - b) Re J`, where `a k_par^2 + b k_z^2` is the TE polynomial
//! of the orientation over `omega^3` and `c` is [`TE_REAL_AXIS_CONSTANT`].

use std::cell::Cell;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closed_forms::perfect_reflector;
use crate::error::{Error, Result};
use crate::materials::{plasma_te_real, plasma_te_scaled, plasma_tm_minus_one, te_from_chi, tm_minus_high_eta_limit, MaterialModel, ScaledMaterial};
use crate::quadrature::{half_line_eta, half_line_u, integrate_oscillatory_with, Budget, QuadratureConfig};
use crate::units::CONSTANTS;

/// Overall constant of the real-axis TE representation.
///
/// Fixed by [`calibrate_te_constant`]: in the mirror limit `R_TE = -1` the
/// real-axis double integral evaluates to `-5/4` (perp) and `-1/2` (para),
/// while the TE sector must supply `+5/4` and `+1/2` for the plasma to
/// approach the perfect-mirror totals.
pub const TE_REAL_AXIS_CONSTANT: f64 = -1.0;

const CALIBRATION_CANDIDATES: [f64; 4] = [1.0, -1.0, 2.0, -2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Field normal to the surface.
    Perp,
    /// Field parallel to the surface.
    Para,
}

impl Orientation {
    pub const ALL: [Orientation; 2] = [Orientation::Perp, Orientation::Para];

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Perp => "perp",
            Orientation::Para => "para",
        }
    }

    /// TE weight `a eta^2 - b` as `(a, b)`.
    fn te_weights(self) -> (f64, f64) {
        match self {
            Orientation::Perp => (3.0, 2.0),
            Orientation::Para => (0.5, 1.5),
        }
    }

    /// TM weight `a eta^2 - b` as `(a, b)`.
    fn tm_weights(self) -> (f64, f64) {
        match self {
            Orientation::Perp => (1.0, 2.0),
            Orientation::Para => (2.5, 1.5),
        }
    }

    /// Coefficient of `r0` in the electrostatic boundary term.
    fn boundary_weight(self) -> f64 {
        match self {
            Orientation::Perp => 0.75,
            Orientation::Para => 1.0,
        }
    }

    /// `2a - b` for the real-axis TE polynomial `a k_par^2 + b k_z^2`
    /// (perp `(2, -1)`, para `(3/2, 1)`).
    fn te_real_axis_weight(self) -> f64 {
        match self {
            Orientation::Perp => 5.0,
            Orientation::Para => 2.0,
        }
    }
}

impl std::str::FromStr for Orientation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "perp" | "perpendicular" => Ok(Orientation::Perp),
            "para" | "parallel" => Ok(Orientation::Para),
            other => Err(Error::Parse(format!("unknown orientation '{other}' (expected perp or para)"))),
        }
    }
}

/// Which polarisation sectors of the integrand to include.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Both,
    TmOnly,
    TeOnly,
}

impl Sector {
    fn te(self) -> bool {
        matches!(self, Sector::Both | Sector::TeOnly)
    }
    fn tm(self) -> bool {
        matches!(self, Sector::Both | Sector::TmOnly)
    }
}

/// One shift evaluation: surface model, distance `z` (nm) and field orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub model: MaterialModel,
    pub z: f64,
    pub orientation: Orientation,
}

impl Query {
    pub fn new(model: MaterialModel, z: f64, orientation: Orientation) -> Self {
        Query { model, z, orientation }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        check_distance(self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvaluationPath {
    ImaginaryAxis,
    #[serde(rename = "RealAxisTE_plus_ImagTM")]
    RealAxisTePlusImagTm,
    ClosedForm,
}

impl EvaluationPath {
    pub fn as_str(self) -> &'static str {
        match self {
            EvaluationPath::ImaginaryAxis => "ImaginaryAxis",
            EvaluationPath::RealAxisTePlusImagTm => "RealAxisTE_plus_ImagTM",
            EvaluationPath::ClosedForm => "ClosedForm",
        }
    }
}

impl std::str::FromStr for EvaluationPath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ImaginaryAxis" => Ok(EvaluationPath::ImaginaryAxis),
            "RealAxisTE_plus_ImagTM" => Ok(EvaluationPath::RealAxisTePlusImagTm),
            "ClosedForm" => Ok(EvaluationPath::ClosedForm),
            other => Err(Error::Parse(format!("unknown evaluation path '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub function_evaluations: usize,
    pub subdivisions: usize,
    pub path: EvaluationPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftResult {
    /// Dimensionless `S` with `Delta mu = e^3 / (16 pi^2 m^3 z^2) S`.
    pub shape_factor: f64,
    /// `Delta mu / mu_B`.
    pub rel_shift: f64,
    pub err_estimate: f64,
    pub diagnostics: Diagnostics,
}

/// A partial shape factor from one route, before `Delta mu / mu_B` is attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partial {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

impl Partial {
    fn combine(self, other: Partial) -> Partial {
        Partial {
            value: self.value + other.value,
            error: self.error + other.error,
            evaluations: self.evaluations + other.evaluations,
            subdivisions: self.subdivisions + other.subdivisions,
        }
    }

    fn into_result(self, z: f64, path: EvaluationPath) -> ShiftResult {
        ShiftResult {
            shape_factor: self.value,
            rel_shift: CONSTANTS.relative_shift(self.value, z),
            err_estimate: self.error,
            diagnostics: Diagnostics { function_evaluations: self.evaluations, subdivisions: self.subdivisions, path },
        }
    }
}

fn check_distance(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("distance z must be finite and > 0, got {z}")))
    }
}

/// `R_TM - r0` at scaled frequency `u`, from the stable difference forms.
#[inline]
fn tm_excess(material: &ScaledMaterial, u: f64, eta: f64) -> f64 {
    match *material {
        ScaledMaterial::NonDispersive { chi } => tm_minus_high_eta_limit(chi, eta),
        ScaledMaterial::Lorentz { wp, wt } => {
            let chi = wp * wp / (u * u + wt * wt);
            let chi0 = (wp / wt) * (wp / wt);
            // chi/(chi+2) - chi0/(chi0+2) with chi - chi0 = -wp^2 u^2 / (wt^2 (u^2 + wt^2))
            let dchi = -wp * wp * u * u / (wt * wt * (u * u + wt * wt));
            tm_minus_high_eta_limit(chi, eta) + 2.0 * dchi / ((chi + 2.0) * (chi0 + 2.0))
        }
        ScaledMaterial::Plasma { wp } => plasma_tm_minus_one(wp, u, eta),
        ScaledMaterial::PerfectReflector => 0.0,
    }
}

#[inline]
fn te_coefficient(material: &ScaledMaterial, u: f64, eta: f64) -> f64 {
    match *material {
        ScaledMaterial::Plasma { wp } => plasma_te_scaled(wp, u, eta),
        ScaledMaterial::PerfectReflector => -1.0,
        _ => te_from_chi(material.chi(u), eta),
    }
}

#[inline]
fn density(material: &ScaledMaterial, orientation: Orientation, sector: Sector, u: f64, eta: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let e2 = eta * eta;
    let mut bracket = 0.0;
    if sector.te() {
        let (a, b) = orientation.te_weights();
        bracket += (a * e2 - b) * te_coefficient(material, u, eta);
    }
    if sector.tm() {
        let (a, b) = orientation.tm_weights();
        bracket += (a * e2 - b) * tm_excess(material, u, eta);
    }
    u * bracket * (-2.0 * u * eta).exp()
}

fn density_guard(model: &MaterialModel, sector: Sector) -> Result<()> {
    model.validate()?;
    match model {
        MaterialModel::PerfectReflector => Err(Error::domain(
            "perfect reflector cannot be integrated: the small-frequency region diverges; use the closed form",
        )),
        MaterialModel::Plasma { .. } if sector.te() => Err(Error::domain(
            "plasma TE sector diverges on the imaginary axis; it is evaluated on the real axis",
        )),
        _ => Ok(()),
    }
}

/// Integrand density at `(u, eta)` for distance `z`, with both polarisation sectors.
pub fn integrand_imaginary(model: &MaterialModel, orientation: Orientation, u: f64, eta: f64, z: f64) -> Result<f64> {
    integrand_imaginary_sector(model, orientation, Sector::Both, u, eta, z)
}

pub fn integrand_imaginary_sector(
    model: &MaterialModel,
    orientation: Orientation,
    sector: Sector,
    u: f64,
    eta: f64,
    z: f64,
) -> Result<f64> {
    density_guard(model, sector)?;
    check_distance(z)?;
    if !(u >= 0.0 && u.is_finite()) || !(eta >= 1.0 && eta.is_finite()) {
        return Err(Error::domain(format!("need u >= 0 and eta >= 1, got u = {u}, eta = {eta}")));
    }
    Ok(density(&model.scaled(z), orientation, sector, u, eta))
}

/// `int_{u_min}^inf du int_1^inf d eta density`, nested with the inner
/// integral at a tenth of the outer tolerance.
fn double_integral(
    material: &ScaledMaterial,
    orientation: Orientation,
    sector: Sector,
    u_min: f64,
    config: &QuadratureConfig,
) -> Result<Partial> {
    let inner_budget = Budget {
        abs_tol: 0.1 * config.abs_tol,
        rel_tol: 0.1 * config.rel_tol,
        max_subdivisions: config.max_subdivisions,
    };
    let failure: Cell<Option<Error>> = Cell::new(None);
    let inner_evals = Cell::new(0usize);
    let inner_subdivisions = Cell::new(0usize);
    let inner_err_sum = Cell::new(0.0f64);
    let inner_abs_sum = Cell::new(0.0f64);

    let outer = |u: f64| -> f64 {
        if u <= 0.0 || !u.is_finite() {
            return 0.0;
        }
        let chi = material.chi(u);
        let mut eta_breaks = Vec::new();
        if chi.is_finite() && chi > 1.0 {
            eta_breaks.push(1.0 + chi.sqrt());
        }
        let scale = (0.5 / u).clamp(1e-3, 1e12);
        match half_line_eta(|eta| density(material, orientation, sector, u, eta), scale, &eta_breaks, inner_budget, config.eta_transform) {
            Ok(est) => {
                inner_evals.set(inner_evals.get() + est.evaluations);
                inner_subdivisions.set(inner_subdivisions.get() + est.subdivisions);
                inner_err_sum.set(inner_err_sum.get() + est.error);
                inner_abs_sum.set(inner_abs_sum.get() + est.value.abs());
                est.value
            }
            Err(e) => {
                let previous = failure.take();
                failure.set(previous.or(Some(e)));
                0.0
            }
        }
    };

    let mut u_breaks = Vec::new();
    for s in material.characteristic_scales() {
        for f in [0.1, 1.0, 10.0] {
            let b = s * f;
            if b > u_min && b.is_finite() {
                u_breaks.push(b);
            }
        }
    }
    let est = half_line_u(outer, u_min, 0.5, &u_breaks, config)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    // Inner errors enter through the outer weights; their aggregate relative
    // size over all outer nodes scales the result.
    let inner_rel = inner_err_sum.get() / inner_abs_sum.get().max(f64::MIN_POSITIVE);
    let inner_contribution = inner_rel * est.value.abs();
    Ok(Partial {
        value: est.value,
        error: est.error + inner_contribution,
        evaluations: est.evaluations + inner_evals.get(),
        subdivisions: est.subdivisions + inner_subdivisions.get(),
    })
}

/// Imaginary-axis shape factor for non-dispersive and Lorentz surfaces,
/// boundary term included.
pub fn shape_factor_imaginary(model: &MaterialModel, z: f64, orientation: Orientation, config: &QuadratureConfig) -> Result<ShiftResult> {
    config.validate()?;
    density_guard(model, Sector::Both)?;
    if matches!(model, MaterialModel::Plasma { .. }) {
        return Err(Error::domain("plasma surfaces are evaluated through shape_factor"));
    }
    check_distance(z)?;
    let material = model.scaled(z);
    let r0 = material.static_mirror();
    if r0 == 0.0 {
        // No contrast: every reflection coefficient vanishes identically.
        return Ok(Partial { value: 0.0, error: 0.0, evaluations: 0, subdivisions: 0 }.into_result(z, EvaluationPath::ImaginaryAxis));
    }
    let mut p = double_integral(&material, orientation, Sector::Both, 0.0, config)?;
    p.value -= orientation.boundary_weight() * r0;
    Ok(p.into_result(z, EvaluationPath::ImaginaryAxis))
}

/// Plasma TM sector on the imaginary axis plus the `r0 = 1` boundary term.
pub fn plasma_tm_imaginary(omega_p: f64, z: f64, orientation: Orientation, config: &QuadratureConfig) -> Result<Partial> {
    config.validate()?;
    let model = MaterialModel::Plasma { omega_p };
    density_guard(&model, Sector::TmOnly)?;
    check_distance(z)?;
    let mut p = double_integral(&model.scaled(z), orientation, Sector::TmOnly, 0.0, config)?;
    p.value -= orientation.boundary_weight();
    Ok(p)
}

/// `J = int_0^inf q R(q) e^{2iq} dq` by the regulated oscillatory engine.
fn real_axis_te_integral<R>(reflection: R, breakpoints: &[f64], config: &QuadratureConfig) -> Result<(Complex64, Partial)>
where
    R: Fn(f64) -> Complex64,
{
    let est = integrate_oscillatory_with(|q| reflection(q) * q, 2.0, breakpoints, config)?;
    Ok((
        est.value,
        Partial { value: est.value.re, error: est.error, evaluations: est.evaluations, subdivisions: est.subdivisions },
    ))
}

/// Plasma TE sector evaluated on the real `k_z` axis.
pub fn plasma_te_real_axis(omega_p: f64, z: f64, orientation: Orientation, config: &QuadratureConfig) -> Result<Partial> {
    te_real_axis_with_constant(omega_p, z, orientation, config, Some(TE_REAL_AXIS_CONSTANT))
}

/// As [`plasma_te_real_axis`] with an explicit calibration constant; `None`
/// reports that the constant has not been fixed.
pub fn te_real_axis_with_constant(
    omega_p: f64,
    z: f64,
    orientation: Orientation,
    config: &QuadratureConfig,
    constant: Option<f64>,
) -> Result<Partial> {
    let c = constant.ok_or_else(|| Error::Config("real-axis TE constant has not been calibrated".into()))?;
    config.validate()?;
    MaterialModel::Plasma { omega_p }.validate()?;
    check_distance(z)?;
    let wp = omega_p * z;
    let (_, mut p) = real_axis_te_integral(|q| plasma_te_real(wp, q), &[wp], config)?;
    let weight = -c * orientation.te_real_axis_weight();
    p.value *= weight;
    p.error *= weight.abs();
    Ok(p)
}

/// Independent value of the plasma TE sector: `J` with its contour rotated
/// onto the positive imaginary `q` axis, where it becomes
/// `-int_0^inf y R(iy) e^{-2y} dy` with `R(iy) = -wp^2 / (y + sqrt(y^2 + wp^2))^2`.
pub fn plasma_te_rotated(omega_p_z: f64, orientation: Orientation, config: &QuadratureConfig) -> Result<Partial> {
    config.validate()?;
    if !(omega_p_z > 0.0 && omega_p_z.is_finite()) {
        return Err(Error::domain(format!("omega_p z must be finite and > 0, got {omega_p_z}")));
    }
    let w = omega_p_z;
    let f = |y: f64| {
        let d = y + (y * y + w * w).sqrt();
        y * (w * w / (d * d)) * (-2.0 * y).exp()
    };
    let est = half_line_u(f, 0.0, 0.5, &[w], config)?;
    let weight = -TE_REAL_AXIS_CONSTANT * orientation.te_real_axis_weight();
    Ok(Partial {
        value: weight * est.value,
        error: weight.abs() * est.error,
        evaluations: est.evaluations,
        subdivisions: est.subdivisions,
    })
}

/// Determines the real-axis TE constant from the mirror limit.
///
/// With `R_TE = -1` the real-axis double integral is evaluated numerically
/// for both orientations. The constant is whichever of `{+-1, +-2}` maps it
/// onto the TE sector a perfect mirror needs (`perfect - (-boundary)`),
/// provided both orientations agree within 5%.
pub fn calibrate_te_constant(config: &QuadratureConfig) -> Result<f64> {
    let (_, j) = real_axis_te_integral(|_| Complex64::new(-1.0, 0.0), &[], config)?;
    let mut chosen: Option<f64> = None;
    for orientation in Orientation::ALL {
        let raw = -orientation.te_real_axis_weight() * j.value;
        let target = perfect_reflector(orientation) + orientation.boundary_weight();
        let best = CALIBRATION_CANDIDATES
            .iter()
            .copied()
            .min_by(|a, b| ((a * raw - target).abs()).total_cmp(&(b * raw - target).abs()))
            .expect("candidate set is non-empty");
        if ((best * raw - target) / target).abs() > 0.05 {
            return Err(Error::Convergence {
                what: format!("no calibration candidate reproduces the {} mirror limit", orientation.as_str()),
                value: raw,
                error: (best * raw - target).abs(),
                subdivisions: j.subdivisions,
            });
        }
        match chosen {
            None => chosen = Some(best),
            Some(c) if c == best => {}
            Some(c) => {
                return Err(Error::Config(format!("orientations disagree on the TE constant ({c} vs {best})")));
            }
        }
    }
    Ok(chosen.expect("two orientations were checked"))
}

/// Plasma TE sector on the imaginary axis with the `u` range cut off below
/// at `cutoff`. Grows without bound as `cutoff -> 0`.
pub fn plasma_te_imaginary_truncated(
    omega_p_z: f64,
    orientation: Orientation,
    cutoff: f64,
    config: &QuadratureConfig,
) -> Result<Partial> {
    config.validate()?;
    if !(omega_p_z > 0.0 && omega_p_z.is_finite()) {
        return Err(Error::domain(format!("omega_p z must be finite and > 0, got {omega_p_z}")));
    }
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::domain(format!("cutoff must be finite and > 0, got {cutoff}")));
    }
    double_integral(&ScaledMaterial::Plasma { wp: omega_p_z }, orientation, Sector::TeOnly, cutoff, config)
}

/// Evaluates one query on the route appropriate to its model.
pub fn shape_factor(query: &Query, config: &QuadratureConfig) -> Result<ShiftResult> {
    query.validate()?;
    config.validate()?;
    let Query { model, z, orientation } = *query;
    match model {
        MaterialModel::PerfectReflector => Ok(Partial {
            value: perfect_reflector(orientation),
            error: 0.0,
            evaluations: 0,
            subdivisions: 0,
        }
        .into_result(z, EvaluationPath::ClosedForm)),
        MaterialModel::Plasma { omega_p } => {
            let tm = plasma_tm_imaginary(omega_p, z, orientation, config)?;
            let te = plasma_te_real_axis(omega_p, z, orientation, config)?;
            Ok(tm.combine(te).into_result(z, EvaluationPath::RealAxisTePlusImagTm))
        }
        MaterialModel::NonDispersive { .. } | MaterialModel::LorentzDielectric { .. } => {
            shape_factor_imaginary(&model, z, orientation, config)
        }
    }
}
