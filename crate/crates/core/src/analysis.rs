//! Parameter sweeps over the static susceptibility, the peak search on the
//! Lorentz curve, and the limit experiments.
//!
//! Lorentz evaluations are parameterised by the dimensionless groups alone:
//! the distance is fixed at `z = 1` and `omega_T = omega_T z`,
//! `omega_p = sqrt(chi0) omega_T`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::nondispersive_closed;
use crate::error::{Error, Result};
use crate::kernel::{shape_factor, Orientation, Query};
use crate::materials::MaterialModel;
use crate::quadrature::QuadratureConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepFamily {
    LorentzAtFixedOmegaTz,
    NonDispersive,
}

/// Spacing of the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepScale {
    /// Uniform in `chi0`.
    Linear,
    /// Uniform in `sqrt(chi0)`.
    SqrtChi0,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: SweepFamily,
    pub omega_t_z: f64,
    pub chi0_range: (f64, f64),
    pub points: usize,
    pub orientation: Orientation,
    pub scale: SweepScale,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.chi0_range;
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::domain(format!("chi0 range must satisfy 0 <= lo < hi, got [{lo}, {hi}]")));
        }
        if self.points < 2 {
            return Err(Error::domain("a sweep needs at least two points"));
        }
        if self.family == SweepFamily::LorentzAtFixedOmegaTz && !(self.omega_t_z > 0.0 && self.omega_t_z.is_finite()) {
            return Err(Error::domain(format!("omega_T z must be finite and > 0, got {}", self.omega_t_z)));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi) = self.chi0_range;
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return lo;
                }
                if i + 1 == self.points {
                    return hi;
                }
                let t = i as f64 / last;
                match self.scale {
                    SweepScale::Linear => lo + (hi - lo) * t,
                    SweepScale::SqrtChi0 => {
                        let s = lo.sqrt() + (hi.sqrt() - lo.sqrt()) * t;
                        s * s
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub chi0: f64,
    pub sqrt_chi0: f64,
    #[serde(rename = "S_dispersive")]
    pub s_dispersive: f64,
    #[serde(rename = "S_nondispersive")]
    pub s_nondispersive: f64,
    pub err_d: f64,
    pub err_n: f64,
    /// Set when one of the two evaluations failed; the affected values are NaN.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakResult {
    pub found: bool,
    pub chi0_peak: Option<f64>,
    #[serde(rename = "S_peak")]
    pub s_peak: Option<f64>,
    pub enhancement: Option<f64>,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// Interior local maxima of `|S|` seen on the coarse grid.
    pub local_maxima: usize,
}

/// Lorentz shape factor at the dimensionless point `(chi0, omega_T z)`.
pub fn lorentz_shape_factor(chi0: f64, omega_t_z: f64, orientation: Orientation, config: &QuadratureConfig) -> Result<(f64, f64)> {
    if chi0 == 0.0 {
        return Ok((0.0, 0.0));
    }
    let model = MaterialModel::lorentz_from_chi0(chi0, omega_t_z);
    let r = shape_factor(&Query::new(model, 1.0, orientation), config)?;
    Ok((r.shape_factor, r.err_estimate))
}

fn nondispersive_shape_factor(chi0: f64, orientation: Orientation, config: &QuadratureConfig) -> Result<(f64, f64)> {
    let model = MaterialModel::NonDispersive { n: (1.0 + chi0).sqrt() };
    let r = shape_factor(&Query::new(model, 1.0, orientation), config)?;
    Ok((r.shape_factor, r.err_estimate))
}

/// Evaluates the family's model and the matching non-dispersive surface
/// (`n = sqrt(1 + chi0)`) on every grid point. Points are independent and
/// evaluated in parallel; a failed point is flagged and the sweep continues.
pub fn sweep(spec: &SweepSpec, config: &QuadratureConfig) -> Result<Vec<CurvePoint>> {
    spec.validate()?;
    config.validate()?;
    let grid = spec.grid();
    let points = grid
        .par_iter()
        .map(|&chi0| {
            let nd = nondispersive_shape_factor(chi0, spec.orientation, config);
            let disp = match spec.family {
                SweepFamily::NonDispersive => nd.clone(),
                SweepFamily::LorentzAtFixedOmegaTz => lorentz_shape_factor(chi0, spec.omega_t_z, spec.orientation, config),
            };
            let failure = match (&disp, &nd) {
                (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
                _ => None,
            };
            let (s_d, e_d) = disp.unwrap_or((f64::NAN, f64::NAN));
            let (s_n, e_n) = nd.unwrap_or((f64::NAN, f64::NAN));
            CurvePoint {
                chi0,
                sqrt_chi0: chi0.sqrt(),
                s_dispersive: s_d,
                s_nondispersive: s_n,
                err_d: e_d,
                err_n: e_n,
                failure,
            }
        })
        .collect();
    Ok(points)
}

pub const PEAK_SCAN_RANGE: (f64, f64) = (1e-2, 1e4);
pub const PEAK_SCAN_POINTS: usize = 25;
const GOLDEN_REL_TOL: f64 = 1e-4;

/// Log-spaced `chi0` grid of the coarse peak scan.
pub fn peak_scan_grid() -> Vec<f64> {
    let (lo, hi) = PEAK_SCAN_RANGE;
    let (a, b) = (lo.ln(), hi.ln());
    (0..PEAK_SCAN_POINTS)
        .map(|i| (a + (b - a) * i as f64 / (PEAK_SCAN_POINTS - 1) as f64).exp())
        .collect()
}

/// Locates the maximum of `|S(chi0)|` on the Lorentz curve at fixed `omega_T z`.
///
/// The shape factor of a dielectric is negative, so the peak of the curve is
/// the maximum of its magnitude.
pub fn find_peak(omega_t_z: f64, orientation: Orientation, config: &QuadratureConfig) -> Result<PeakResult> {
    if !(omega_t_z > 0.0 && omega_t_z.is_finite()) {
        return Err(Error::domain(format!("omega_T z must be finite and > 0, got {omega_t_z}")));
    }
    config.validate()?;
    let grid = peak_scan_grid();
    let values = grid
        .par_iter()
        .map(|&chi0| lorentz_shape_factor(chi0, omega_t_z, orientation, config).map(|(s, _)| s.abs()))
        .collect::<Result<Vec<f64>>>()?;
    let maxima: Vec<usize> = (1..grid.len() - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .collect();
    let Some(&best) = maxima.iter().max_by(|&&i, &&j| values[i].total_cmp(&values[j])) else {
        return Ok(PeakResult {
            found: false,
            chi0_peak: None,
            s_peak: None,
            enhancement: None,
            bracket: PEAK_SCAN_RANGE,
            iterations: 0,
            local_maxima: 0,
        });
    };
    let bracket = (grid[best - 1], grid[best + 1]);
    let magnitude = |ln_chi: f64| lorentz_shape_factor(ln_chi.exp(), omega_t_z, orientation, config).map(|(s, _)| s.abs());

    // Golden-section search on ln chi0, maximising |S|.
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (bracket.0.ln(), bracket.1.ln());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = magnitude(c)?;
    let mut fd = magnitude(d)?;
    let mut iterations = 0;
    while b - a > GOLDEN_REL_TOL {
        iterations += 1;
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = magnitude(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = magnitude(d)?;
        }
    }
    let chi0_peak = (0.5 * (a + b)).exp();
    let (s_peak, _) = lorentz_shape_factor(chi0_peak, omega_t_z, orientation, config)?;
    let reference = nondispersive_closed((1.0 + chi0_peak).sqrt(), orientation)?;
    Ok(PeakResult {
        found: true,
        chi0_peak: Some(chi0_peak),
        s_peak: Some(s_peak),
        enhancement: Some(s_peak / reference),
        bracket,
        iterations,
        local_maxima: maxima.len(),
    })
}

/// Peak height over the non-dispersive value at the same `chi0`.
pub fn enhancement_ratio(omega_t_z: f64, orientation: Orientation, config: &QuadratureConfig) -> Result<f64> {
    let peak = find_peak(omega_t_z, orientation, config)?;
    peak.enhancement.ok_or(Error::NoPeak { omega_t_z })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitExperiment {
    NInfinityGrowth,
    OmegaTZeroVsPlasma,
    PlasmaSmallDistancePower,
    NonDispersiveDistancePower,
}

impl LimitExperiment {
    pub const ALL: [LimitExperiment; 4] = [
        LimitExperiment::NInfinityGrowth,
        LimitExperiment::OmegaTZeroVsPlasma,
        LimitExperiment::PlasmaSmallDistancePower,
        LimitExperiment::NonDispersiveDistancePower,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LimitExperiment::NInfinityGrowth => "NInfinityGrowth",
            LimitExperiment::OmegaTZeroVsPlasma => "OmegaTZeroVsPlasma",
            LimitExperiment::PlasmaSmallDistancePower => "PlasmaSmallDistancePower",
            LimitExperiment::NonDispersiveDistancePower => "NonDispersiveDistancePower",
        }
    }
}

impl std::str::FromStr for LimitExperiment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LimitExperiment::ALL
            .into_iter()
            .find(|e| e.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown experiment '{s}'")))
    }
}

/// Tabulated output of one limit experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub experiment: LimitExperiment,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Named fitted quantities (slopes, exponents).
    pub fits: Vec<(String, f64)>,
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

fn evaluate_all(queries: &[Query], config: &QuadratureConfig) -> Result<Vec<(f64, f64)>> {
    queries
        .par_iter()
        .map(|q| shape_factor(q, config).map(|r| (r.shape_factor, r.rel_shift)))
        .collect()
}

/// Plasma evaluation points for the small-distance power law: fixed
/// `omega_p = 1 nm^-1` and `omega_p z` log-spaced over `[1e-4, 1e-2]`.
pub fn plasma_power_queries(orientation: Orientation) -> Vec<Query> {
    log_grid(1e-4, 1e-2, 5)
        .into_iter()
        .map(|wz| Query::new(MaterialModel::Plasma { omega_p: 1.0 }, wz, orientation))
        .collect()
}

pub fn limit_diagnostics(experiment: LimitExperiment, config: &QuadratureConfig) -> Result<LimitReport> {
    config.validate()?;
    let strings = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match experiment {
        LimitExperiment::NInfinityGrowth => {
            let ns = log_grid(1e2, 1e4, 5);
            let queries: Vec<Query> = ns
                .iter()
                .map(|&n| Query::new(MaterialModel::NonDispersive { n }, 1.0, Orientation::Perp))
                .collect();
            let s = evaluate_all(&queries, config)?;
            let ys: Vec<f64> = s.iter().map(|v| v.0).collect();
            let rows = ns.iter().zip(&ys).map(|(n, y)| vec![*n, *y]).collect();
            Ok(LimitReport {
                experiment,
                columns: strings(&["n", "S_perp"]),
                rows,
                fits: vec![("dS_perp/dn".into(), fit_slope(&ns, &ys))],
            })
        }
        LimitExperiment::OmegaTZeroVsPlasma => {
            let wp_z = 1.0;
            let wts = [1e-1, 1e-2, 1e-3, 1e-4];
            let mut rows = Vec::new();
            for (k, orientation) in Orientation::ALL.into_iter().enumerate() {
                let plasma = shape_factor(&Query::new(MaterialModel::Plasma { omega_p: wp_z }, 1.0, orientation), config)?.shape_factor;
                let queries: Vec<Query> = wts
                    .iter()
                    .map(|&wt| Query::new(MaterialModel::LorentzDielectric { omega_p: wp_z, omega_t: wt }, 1.0, orientation))
                    .collect();
                for (wt, (s, _)) in wts.iter().zip(evaluate_all(&queries, config)?) {
                    rows.push(vec![k as f64, wp_z, *wt, s, plasma, s - plasma]);
                }
            }
            Ok(LimitReport {
                experiment,
                columns: strings(&["orientation(0=perp,1=para)", "omega_p_z", "omega_T_z", "S_lorentz", "S_plasma", "gap"]),
                rows,
                fits: Vec::new(),
            })
        }
        LimitExperiment::PlasmaSmallDistancePower => {
            let mut rows = Vec::new();
            let mut fits = Vec::new();
            for (k, orientation) in Orientation::ALL.into_iter().enumerate() {
                let queries = plasma_power_queries(orientation);
                let out = evaluate_all(&queries, config)?;
                let lz: Vec<f64> = queries.iter().map(|q| q.z.ln()).collect();
                let lm: Vec<f64> = out.iter().map(|(_, m)| m.abs().ln()).collect();
                for (q, (s, m)) in queries.iter().zip(&out) {
                    rows.push(vec![k as f64, q.z, *s, *m]);
                }
                fits.push((format!("exponent_{}", orientation.as_str()), fit_slope(&lz, &lm)));
            }
            Ok(LimitReport {
                experiment,
                columns: strings(&["orientation(0=perp,1=para)", "z_nm", "S", "delta_mu_over_muB"]),
                rows,
                fits,
            })
        }
        LimitExperiment::NonDispersiveDistancePower => {
            let zs = log_grid(1.0, 1e3, 4);
            let queries: Vec<Query> = zs
                .iter()
                .map(|&z| Query::new(MaterialModel::NonDispersive { n: 2.0 }, z, Orientation::Perp))
                .collect();
            let out = evaluate_all(&queries, config)?;
            let lz: Vec<f64> = zs.iter().map(|z| z.ln()).collect();
            let lm: Vec<f64> = out.iter().map(|(_, m)| m.abs().ln()).collect();
            let rows = zs.iter().zip(&out).map(|(z, (s, m))| vec![*z, *s, *m]).collect();
            Ok(LimitReport {
                experiment,
                columns: strings(&["z_nm", "S", "delta_mu_over_muB"]),
                rows,
                fits: vec![("exponent".into(), fit_slope(&lz, &lm))],
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_share_endpoints() {
        let mut spec = SweepSpec {
            family: SweepFamily::NonDispersive,
            omega_t_z: 0.0,
            chi0_range: (0.0, 9.0),
            points: 4,
            orientation: Orientation::Perp,
            scale: SweepScale::SqrtChi0,
        };
        assert_eq!(spec.grid(), vec![0.0, 1.0, 4.0, 9.0]);
        spec.scale = SweepScale::Linear;
        assert_eq!(spec.grid(), vec![0.0, 3.0, 6.0, 9.0]);
    }

    #[test]
    fn zero_susceptibility_point_vanishes() {
        let spec = SweepSpec {
            family: SweepFamily::NonDispersive,
            omega_t_z: 0.0,
            chi0_range: (0.0, 3.0),
            points: 2,
            orientation: Orientation::Para,
            scale: SweepScale::Linear,
        };
        let pts = sweep(&spec, &QuadratureConfig::default()).unwrap();
        assert_eq!(pts[0].s_nondispersive, 0.0);
        assert!(pts.iter().all(|p| p.failure.is_none()));
    }

    #[test]
    fn slope_of_a_line() {
        assert!((fit_slope(&[0.0, 1.0, 2.0], &[1.0, -1.0, -3.0]) + 2.0).abs() < 1e-14);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let spec = SweepSpec {
            family: SweepFamily::LorentzAtFixedOmegaTz,
            omega_t_z: -1.0,
            chi0_range: (0.0, 3.0),
            points: 3,
            orientation: Orientation::Para,
            scale: SweepScale::Linear,
        };
        assert!(sweep(&spec, &QuadratureConfig::default()).is_err());
    }
}
