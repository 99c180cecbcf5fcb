//! Tabular output: the result-row schema, number formatting and parsing.
//!
//! Rows carry their inputs in boundary units (eV, nm) exactly as given, so a
//! row parsed back reproduces the query that generated it.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{CurvePoint, LimitReport, PeakResult};
use crate::error::{Error, Result};
use crate::kernel::{EvaluationPath, Orientation, Query, ShiftResult};
use crate::materials::MaterialModel;
use crate::units::{PhysicalConstants, CONSTANTS};

pub const RESULT_HEADER: &str =
    "model,orientation,z_nm,n,omega_p_eV,omega_T_eV,chi0,sqrt_chi0,S,delta_mu_over_muB,abs_err,path,fn_evals";
pub const SWEEP_HEADER: &str = "chi0,sqrt_chi0,S_dispersive,S_nondispersive,err_d,err_n,failure";
pub const PEAK_HEADER: &str =
    "omega_T_z,orientation,found,chi0_peak,sqrt_chi0_peak,S_peak,enhancement,bracket_lo,bracket_hi,iterations,local_maxima";

/// A surface model with its parameters in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Surface {
    #[serde(rename = "nondispersive")]
    NonDispersive { n: f64 },
    Plasma { omega_p_ev: f64 },
    Lorentz { omega_p_ev: f64, omega_t_ev: f64 },
    Perfect,
}

impl Surface {
    pub fn name(&self) -> &'static str {
        match self {
            Surface::NonDispersive { .. } => "nondispersive",
            Surface::Plasma { .. } => "plasma",
            Surface::Lorentz { .. } => "lorentz",
            Surface::Perfect => "perfect",
        }
    }

    pub fn to_model(&self, constants: &PhysicalConstants) -> MaterialModel {
        match *self {
            Surface::NonDispersive { n } => MaterialModel::NonDispersive { n },
            Surface::Plasma { omega_p_ev } => MaterialModel::Plasma { omega_p: constants.ev_to_inv_nm(omega_p_ev) },
            Surface::Lorentz { omega_p_ev, omega_t_ev } => MaterialModel::LorentzDielectric {
                omega_p: constants.ev_to_inv_nm(omega_p_ev),
                omega_t: constants.ev_to_inv_nm(omega_t_ev),
            },
            Surface::Perfect => MaterialModel::PerfectReflector,
        }
    }

    fn chi0(&self) -> Option<f64> {
        match *self {
            Surface::NonDispersive { n } => Some(n * n - 1.0),
            Surface::Lorentz { omega_p_ev, omega_t_ev } => Some((omega_p_ev / omega_t_ev).powi(2)),
            Surface::Plasma { .. } | Surface::Perfect => None,
        }
    }
}

/// One line of the result table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub surface: Surface,
    pub orientation: Orientation,
    pub z_nm: f64,
    pub chi0: Option<f64>,
    pub sqrt_chi0: Option<f64>,
    pub shape_factor: f64,
    pub delta_mu_over_mu_b: f64,
    pub abs_err: f64,
    pub path: EvaluationPath,
    pub fn_evals: usize,
}

impl ResultRow {
    pub fn new(surface: Surface, z_nm: f64, orientation: Orientation, result: &ShiftResult) -> Self {
        let chi0 = surface.chi0();
        ResultRow {
            surface,
            orientation,
            z_nm,
            chi0,
            sqrt_chi0: chi0.map(f64::sqrt),
            shape_factor: result.shape_factor,
            delta_mu_over_mu_b: result.rel_shift,
            abs_err: result.err_estimate,
            path: result.diagnostics.path,
            fn_evals: result.diagnostics.function_evaluations,
        }
    }

    pub fn query(&self, constants: &PhysicalConstants) -> Query {
        Query::new(self.surface.to_model(constants), self.z_nm, self.orientation)
    }

    fn parameters(&self) -> [Option<f64>; 3] {
        match self.surface {
            Surface::NonDispersive { n } => [Some(n), None, None],
            Surface::Plasma { omega_p_ev } => [None, Some(omega_p_ev), None],
            Surface::Lorentz { omega_p_ev, omega_t_ev } => [None, Some(omega_p_ev), Some(omega_t_ev)],
            Surface::Perfect => [None, None, None],
        }
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
        let [n, wp, wt] = self.parameters();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.surface.name(),
            self.orientation.as_str(),
            format_number(self.z_nm),
            opt(n),
            opt(wp),
            opt(wt),
            opt(self.chi0),
            opt(self.sqrt_chi0),
            format_number(self.shape_factor),
            format_number(self.delta_mu_over_mu_b),
            format_number(self.abs_err),
            self.path.as_str(),
            self.fn_evals
        )
    }

    pub fn parse_csv(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.trim_end_matches(['\r', '\n']).split(',').collect();
        if fields.len() != 13 {
            return Err(Error::Parse(format!("expected 13 fields, found {}", fields.len())));
        }
        let opt = |i: usize| -> Result<Option<f64>> {
            if fields[i].is_empty() {
                Ok(None)
            } else {
                parse_number(fields[i]).map(Some)
            }
        };
        let need = |i: usize, name: &str| -> Result<f64> {
            opt(i)?.ok_or_else(|| Error::Parse(format!("missing {name} for model '{}'", fields[0])))
        };
        let surface = match fields[0] {
            "nondispersive" => Surface::NonDispersive { n: need(3, "n")? },
            "plasma" => Surface::Plasma { omega_p_ev: need(4, "omega_p_eV")? },
            "lorentz" => Surface::Lorentz { omega_p_ev: need(4, "omega_p_eV")?, omega_t_ev: need(5, "omega_T_eV")? },
            "perfect" => Surface::Perfect,
            other => return Err(Error::Parse(format!("unknown model '{other}'"))),
        };
        Ok(ResultRow {
            surface,
            orientation: fields[1].parse()?,
            z_nm: parse_number(fields[2])?,
            chi0: opt(6)?,
            sqrt_chi0: opt(7)?,
            shape_factor: parse_number(fields[8])?,
            delta_mu_over_mu_b: parse_number(fields[9])?,
            abs_err: parse_number(fields[10])?,
            path: fields[11].parse()?,
            fn_evals: fields[12].parse().map_err(|_| Error::Parse(format!("bad fn_evals '{}'", fields[12])))?,
        })
    }

    /// JSON object with the CSV keys, `shape_factor` as an alias of `S`, and
    /// the given `constants` and `config` blocks.
    pub fn to_json(&self, constants: &PhysicalConstants, config: Value) -> Value {
        let [n, wp, wt] = self.parameters();
        json!({
            "model": self.surface.name(),
            "orientation": self.orientation.as_str(),
            "z_nm": self.z_nm,
            "n": n,
            "omega_p_eV": wp,
            "omega_T_eV": wt,
            "chi0": self.chi0,
            "sqrt_chi0": self.sqrt_chi0,
            "S": self.shape_factor,
            "shape_factor": self.shape_factor,
            "delta_mu_over_muB": self.delta_mu_over_mu_b,
            "abs_err": self.abs_err,
            "path": self.path.as_str(),
            "fn_evals": self.fn_evals,
            "constants": constants,
            "config": config,
        })
    }
}

/// Shortest decimal that parses back to the same `f64` (at most 17
/// significant digits). Exponent notation outside `[1e-4, 1e15)`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn parse_number(token: &str) -> Result<f64> {
    token
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("not a number: '{token}'")))
}

pub fn sweep_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for p in points {
        let failure = p.failure.as_deref().unwrap_or("").replace([',', '\n'], ";");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_number(p.chi0),
            format_number(p.sqrt_chi0),
            format_number(p.s_dispersive),
            format_number(p.s_nondispersive),
            format_number(p.err_d),
            format_number(p.err_n),
            failure
        );
    }
    out
}

pub fn peak_csv(omega_t_z: f64, orientation: Orientation, peak: &PeakResult) -> String {
    let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
    format!(
        "{PEAK_HEADER}\n{},{},{},{},{},{},{},{},{},{},{}\n",
        format_number(omega_t_z),
        orientation.as_str(),
        peak.found,
        opt(peak.chi0_peak),
        opt(peak.chi0_peak.map(f64::sqrt)),
        opt(peak.s_peak),
        opt(peak.enhancement),
        format_number(peak.bracket.0),
        format_number(peak.bracket.1),
        peak.iterations,
        peak.local_maxima
    )
}

/// Table rows followed by one `# fit name = value` line per fitted quantity.
pub fn limits_csv(report: &LimitReport) -> String {
    let mut out = report.columns.join(",");
    out.push('\n');
    for row in &report.rows {
        out.push_str(&row.iter().map(|v| format_number(*v)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    for (name, value) in &report.fits {
        let _ = writeln!(out, "# fit {name} = {}", format_number(*value));
    }
    out
}

/// `--version` text: crate version, real-axis TE constant and physical constants.
pub fn version_text() -> String {
    format!(
        "spinshift {}\nte_real_axis_constant = {}\nhbar_c_eV_nm = {}\nalpha = {}\nelectron_mass_energy_eV = {}",
        env!("CARGO_PKG_VERSION"),
        format_number(crate::kernel::TE_REAL_AXIS_CONSTANT),
        format_number(CONSTANTS.hbar_c),
        format_number(CONSTANTS.alpha),
        format_number(CONSTANTS.electron_mass_energy)
    )
}
