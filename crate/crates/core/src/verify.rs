//! The acceptance battery, shared by `spinshift verify` and the acceptance
//! test target. Each criterion reports PASS or FAIL with the measured numbers.

use std::time::Instant;

use crate::analysis::{find_peak, fit_slope, lorentz_shape_factor, plasma_power_queries};
use crate::closed_forms::{nondispersive_large_n, perfect_reflector, plasma_small_distance};
use crate::kernel::{plasma_te_imaginary_truncated, plasma_te_real_axis, plasma_tm_imaginary, shape_factor, Orientation, Query};
use crate::materials::{reflection_te, reflection_te_real_axis, reflection_tm, MaterialModel};
use crate::output::{ResultRow, Surface};
use crate::quadrature::{integrate_semi_infinite, QuadratureConfig};
use crate::units::CONSTANTS;

/// Pinned tolerances.
pub mod tol {
    pub const CLOSED_FORM_REL: f64 = 1e-6;
    pub const CLOSED_FORM_SECONDS: f64 = 60.0;
    pub const VANISHING_ABS: f64 = 1e-8;
    pub const LARGE_N_REL: f64 = 0.01;
    pub const PLASMA_ASYMPTOTE_REL: f64 = 0.02;
    pub const PLASMA_EXPONENT: f64 = -3.0;
    pub const PLASMA_EXPONENT_ABS: f64 = 0.05;
    pub const PLASMA_SECONDS: f64 = 300.0;
    pub const MIRROR_REL: f64 = 0.05;
    pub const DIVERGENCE_SLOPE: f64 = -1.0;
    pub const DIVERGENCE_SLOPE_ABS: f64 = 0.1;
    pub const PEAK_SQRT_CHI0: (f64, f64) = (1.5, 3.5);
    pub const PEAK_SECONDS: f64 = 600.0;
    pub const ENHANCEMENT_SLOPE: f64 = -1.0;
    pub const ENHANCEMENT_SLOPE_ABS: f64 = 0.05;
    pub const PARA_PERP_RATIO: f64 = 81.6 / 30.3;
    pub const PARA_PERP_REL: f64 = 0.10;
    pub const LARGE_CHI0_REL: f64 = 0.02;
    pub const REGIME_TARGET: f64 = 1e-9;
    pub const REGIME_FACTOR: f64 = 3.0;
    pub const SCALING_REL: f64 = 1e-8;
}

const GOLDEN: &str = include_str!("../tests/fixtures/nondispersive_golden.csv");

/// Golden non-dispersive value for `(n, orientation)` from the 50-digit fixture.
pub fn golden(n: &str, orientation: Orientation) -> Option<f64> {
    GOLDEN.lines().skip(1).find_map(|line| {
        let mut f = line.split(',');
        let (ln, lo, ls) = (f.next()?, f.next()?, f.next()?);
        (ln == n && lo == orientation.as_str()).then(|| ls.parse().ok()).flatten()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {}: {} ({:.2} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

type Check = fn(&QuadratureConfig, bool) -> (bool, String);

pub const CRITERIA: [(u32, &str, Check); 12] = [
    (1, "closed-form equivalence", closed_form_equivalence),
    (2, "vanishing-contrast limit", vanishing_contrast),
    (3, "large-n expansion", large_n),
    (4, "perfect-reflector constants and sign flip", perfect_constants),
    (5, "plasma small-distance asymptotics", plasma_small),
    (6, "plasma perfect-reflector limit", plasma_mirror),
    (7, "rotated-contour TE divergence witness", te_divergence),
    (8, "Lorentz peak structure", peak_structure),
    (9, "enhancement scaling", enhancement_scaling),
    (10, "large-chi0 convergence", large_chi0),
    (11, "order-of-magnitude regime", regime),
    (12, "property suites", properties),
];

pub fn run_criterion(id: u32, fast: bool) -> Option<Outcome> {
    let (id, name, check) = CRITERIA.iter().copied().find(|c| c.0 == id)?;
    let config = QuadratureConfig::default();
    let start = Instant::now();
    let (pass, detail) = check(&config, fast);
    Some(Outcome { id, name, pass, detail, seconds: start.elapsed().as_secs_f64() })
}

pub fn run_all(fast: bool) -> Vec<Outcome> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0, fast)).collect()
}

fn nd(n: f64, orientation: Orientation, config: &QuadratureConfig) -> Result<f64, String> {
    shape_factor(&Query::new(MaterialModel::NonDispersive { n }, 1.0, orientation), config)
        .map(|r| r.shape_factor)
        .map_err(|e| e.to_string())
}

fn closed_form_equivalence(config: &QuadratureConfig, _fast: bool) -> (bool, String) {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in ["1.1", "1.5", "2", "5", "10", "100"] {
        for o in Orientation::ALL {
            let exact = golden(n, o).expect("fixture covers the grid");
            match nd(n.parse().unwrap(), o, config) {
                Ok(s) => worst = worst.max(((s - exact) / exact).abs()),
                Err(e) => return (false, format!("n = {n} {}: {e}", o.as_str())),
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst <= tol::CLOSED_FORM_REL && secs <= tol::CLOSED_FORM_SECONDS,
        format!("max rel err {worst:.2e} (tol {:.0e}), {secs:.2} s (limit {} s)", tol::CLOSED_FORM_REL, tol::CLOSED_FORM_SECONDS),
    )
}

fn vanishing_contrast(config: &QuadratureConfig, _fast: bool) -> (bool, String) {
    let mut parts = Vec::new();
    let mut pass = true;
    for o in Orientation::ALL {
        match nd(1.0 + 1e-6, o, config) {
            Ok(s) => {
                pass &= s.abs() <= tol::VANISHING_ABS;
                parts.push(format!("|S_{}| = {:.4e}", o.as_str(), s.abs()));
            }
            Err(e) => return (false, e),
        }
    }
    (pass, format!("{} at n = 1 + 1e-6 (tol {:.0e})", parts.join(", "), tol::VANISHING_ABS))
}

fn large_n(config: &QuadratureConfig, _fast: bool) -> (bool, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    for o in Orientation::ALL {
        let expected = nondispersive_large_n(1e3, o);
        match nd(1e3, o, config) {
            Ok(s) => {
                let rel = ((s - expected) / expected).abs();
                pass &= rel <= tol::LARGE_N_REL;
                parts.push(format!("{} S = {s:.6} vs {expected:.6} (rel {rel:.2e})", o.as_str()));
            }
            Err(e) => return (false, e),
        }
    }
    (pass, parts.join("; "))
}

fn perfect_constants(config: &QuadratureConfig, _fast: bool) -> (bool, String) {
    let eval = |o| shape_factor(&Query::new(MaterialModel::PerfectReflector, 10.0, o), config).map(|r| r.shape_factor);
    match (eval(Orientation::Perp), eval(Orientation::Para)) {
        (Ok(p), Ok(q)) => (
            p == 0.5 && q == -0.5 && p.signum() != q.signum(),
            format!("S_perp = {p}, S_para = {q}"),
        ),
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    }
}

fn plasma_small(config: &QuadratureConfig, _fast: bool) -> (bool, String) {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for o in Orientation::ALL {
        let asym = plasma_small_distance(1e-3, o).unwrap();
        let s = match shape_factor(&Query::new(MaterialModel::Plasma { omega_p: 1e-3 }, 1.0, o), config) {
            Ok(r) => r.shape_factor,
            Err(e) => return (false, e.to_string()),
        };
        let rel = ((s - asym) / asym).abs();
        pass &= rel <= tol::PLASMA_ASYMPTOTE_REL;
        let queries = plasma_power_queries(o);
        let mut lz = Vec::new();
        let mut lm = Vec::new();
        for q in &queries {
            match shape_factor(q, config) {
                Ok(r) => {
                    lz.push(q.z.ln());
                    lm.push(r.rel_shift.abs().ln());
                }
                Err(e) => return (false, e.to_string()),
            }
        }
        let exponent = fit_slope(&lz, &lm);
        pass &= (exponent - tol::PLASMA_EXPONENT).abs() <= tol::PLASMA_EXPONENT_ABS;
        parts.push(format!("{} S = {s:.4} vs {asym:.4} (rel {rel:.2e}), exponent {exponent:.4}", o.as_str()));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs <= tol::PLASMA_SECONDS;
    (pass, parts.join("; "))
}

fn plasma_mirror(config: &QuadratureConfig, _fast: bool) -> (bool, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    for o in Orientation::ALL {
        let target = perfect_reflector(o);
        let (tm, te) = match (plasma_tm_imaginary(100.0, 1.0, o, config), plasma_te_real_axis(100.0, 1.0, o, config)) {
            (Ok(a), Ok(b)) => (a.value, b.value),
            (Err(e), _) | (_, Err(e)) => return (false, e.to_string()),
        };
        let s = tm + te;
        let rel = ((s - target) / target).abs();
        pass &= rel <= tol::MIRROR_REL;
        parts.push(format!("{} S = {s:.5} (TM {tm:.5}, TE {te:.5}) vs {target} (rel {rel:.3e})", o.as_str()));
    }
    (pass, format!("omega_p z = 100: {}", parts.join("; ")))
}

fn te_divergence(config: &QuadratureConfig, _fast: bool) -> (bool, String) {
    let cutoffs = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for c in cutoffs {
        match plasma_te_imaginary_truncated(1.0, Orientation::Perp, c, config) {
            Ok(p) => {
                lx.push(c.ln());
                ly.push(p.value.abs().ln());
            }
            Err(e) => return (false, e.to_string()),
        }
    }
    let slope = fit_slope(&lx, &ly);
    (
        (slope - tol::DIVERGENCE_SLOPE).abs() <= tol::DIVERGENCE_SLOPE_ABS,
        format!("log-log slope {slope:.4} over cutoff in [1e-3, 1e-1] at omega_p z = 1"),
    )
}

fn peak_structure(config: &QuadratureConfig, _fast: bool) -> (bool, String) {
    let start = Instant::now();
    let perp = find_peak(0.02, Orientation::Perp, config);
    let none = find_peak(0.5, Orientation::Perp, config);
    let para = find_peak(0.2, Orientation::Para, config);
    let (perp, none, para) = match (perp, none, para) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return (false, e.to_string()),
    };
    let root = perp.chi0_peak.map(f64::sqrt).unwrap_or(f64::NAN);
    let pass = perp.found
        && perp.local_maxima == 1
        && root >= tol::PEAK_SQRT_CHI0.0
        && root <= tol::PEAK_SQRT_CHI0.1
        && !none.found
        && para.found
        && start.elapsed().as_secs_f64() <= tol::PEAK_SECONDS;
    (
        pass,
        format!(
            "perp 0.02: {} maxima, sqrt(chi0_peak) = {root:.4}; perp 0.5 found = {}; para 0.2 found = {} (sqrt(chi0_peak) = {:.4})",
            perp.local_maxima,
            none.found,
            para.found,
            para.chi0_peak.map(f64::sqrt).unwrap_or(f64::NAN)
        ),
    )
}

fn enhancement_scaling(config: &QuadratureConfig, _fast: bool) -> (bool, String) {
    let wts = [0.01, 0.02, 0.04];
    let mut table = Vec::new();
    for o in Orientation::ALL {
        let mut row = Vec::new();
        for wt in wts {
            match find_peak(wt, o, config) {
                Ok(p) if p.found => row.push(p.enhancement.unwrap()),
                Ok(_) => return (false, format!("no {} peak at omega_T z = {wt}", o.as_str())),
                Err(e) => return (false, e.to_string()),
            }
        }
        table.push(row);
    }
    let lx: Vec<f64> = wts.iter().map(|w| w.ln()).collect();
    let slope = fit_slope(&lx, &table[0].iter().map(|e| e.ln()).collect::<Vec<_>>());
    let ratios: Vec<f64> = (0..wts.len()).map(|i| table[1][i] / table[0][i]).collect();
    let ratio_ok = ratios.iter().all(|r| ((r - tol::PARA_PERP_RATIO) / tol::PARA_PERP_RATIO).abs() <= tol::PARA_PERP_REL);
    (
        (slope - tol::ENHANCEMENT_SLOPE).abs() <= tol::ENHANCEMENT_SLOPE_ABS && ratio_ok,
        format!(
            "perp enhancements {:.4?}, slope {slope:.4}; para/perp {:.4?} vs {:.4}",
            table[0], ratios, tol::PARA_PERP_RATIO
        ),
    )
}

fn large_chi0(config: &QuadratureConfig, _fast: bool) -> (bool, String) {
    let chi0 = 1e4;
    let lorentz = match lorentz_shape_factor(chi0, 0.02, Orientation::Perp, config) {
        Ok(v) => v.0,
        Err(e) => return (false, e.to_string()),
    };
    let reference = match nd((1.0 + chi0).sqrt(), Orientation::Perp, config) {
        Ok(v) => v,
        Err(e) => return (false, e),
    };
    let ratio = lorentz / reference;
    (
        (ratio - 1.0).abs() <= tol::LARGE_CHI0_REL,
        format!("omega_T z = 0.02, perp: S_lorentz = {lorentz:.5}, S_nd = {reference:.5}, ratio {ratio:.4}"),
    )
}

fn regime(config: &QuadratureConfig, _fast: bool) -> (bool, String) {
    let surface = Surface::Lorentz { omega_p_ev: 0.006, omega_t_ev: 0.003 };
    let q = Query::new(surface.to_model(&CONSTANTS), 10.0, Orientation::Perp);
    match shape_factor(&q, config) {
        Ok(r) => {
            let m = r.rel_shift.abs();
            let ok = m >= tol::REGIME_TARGET / tol::REGIME_FACTOR && m <= tol::REGIME_TARGET * tol::REGIME_FACTOR;
            (ok, format!("omega_p = 6 meV, omega_T = 3 meV, z = 10 nm: S = {:.4}, |delta mu / mu_B| = {m:.3e}", r.shape_factor))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn properties(config: &QuadratureConfig, fast: bool) -> (bool, String) {
    let mut failures = Vec::new();
    let samples = if fast { 12 } else { 40 };

    // Reflection-coefficient ranges on a log grid.
    for i in 0..samples {
        for j in 0..samples {
            let eps = 1.0 + 10f64.powf(-3.0 + 9.0 * i as f64 / (samples - 1) as f64);
            let eta = 10f64.powf(4.0 * j as f64 / (samples - 1) as f64);
            let te = reflection_te(eps, eta).unwrap();
            let tm = reflection_tm(eps, eta).unwrap();
            if !(te > -1.0 && te <= 0.0 && (0.0..1.0).contains(&tm)) {
                failures.push(format!("range at eps = {eps}, eta = {eta}"));
            }
        }
        let k = i as f64 / (samples - 1) as f64;
        if (reflection_te_real_axis(2.0, 2.0 * k).unwrap().norm() - 1.0).abs() > 1e-14 {
            failures.push(format!("unit modulus at k = {}", 2.0 * k));
        }
    }

    // Scaling invariance under (omega_p, omega_T, z) -> (c omega_p, c omega_T, z / c).
    let models = [
        (MaterialModel::LorentzDielectric { omega_p: 0.4, omega_t: 0.1 }, Orientation::Perp),
        (MaterialModel::Plasma { omega_p: 0.4 }, Orientation::Para),
    ];
    for (model, o) in models {
        let base = shape_factor(&Query::new(model, 2.0, o), config).map(|r| r.shape_factor);
        for c in [10.0, 100.0, 1000.0] {
            let scaled = match model {
                MaterialModel::LorentzDielectric { omega_p, omega_t } => {
                    MaterialModel::LorentzDielectric { omega_p: c * omega_p, omega_t: c * omega_t }
                }
                MaterialModel::Plasma { omega_p } => MaterialModel::Plasma { omega_p: c * omega_p },
                other => other,
            };
            let s = shape_factor(&Query::new(scaled, 2.0 / c, o), config).map(|r| r.shape_factor);
            match (&base, s) {
                (Ok(b), Ok(s)) if ((s - b) / b).abs() <= tol::SCALING_REL => {}
                (b, s) => failures.push(format!("scaling {} c = {c}: {b:?} vs {s:?}", model.name())),
            }
        }
    }

    // Determinism.
    let q = Query::new(MaterialModel::LorentzDielectric { omega_p: 0.3, omega_t: 0.05 }, 1.0, Orientation::Para);
    let a = shape_factor(&q, config);
    let b = shape_factor(&q, config);
    if a != b {
        failures.push("repeated evaluation differs".into());
    }

    // Tolerance monotonicity of the adaptive engine.
    let f = |u: f64| (-u).exp() * (5.0 * u).cos() / (1.0 + u);
    let mut previous = f64::INFINITY;
    for k in 4..=11 {
        let cfg = QuadratureConfig { rel_tol: 10f64.powi(-k), ..config.clone() };
        match integrate_semi_infinite(f, &cfg) {
            Ok(e) if e.error <= previous => previous = e.error,
            Ok(e) => failures.push(format!("error rose to {:e} at rel_tol 1e-{k}", e.error)),
            Err(e) => failures.push(e.to_string()),
        }
    }

    // CSV round trip.
    for (surface, z, o) in [
        (Surface::NonDispersive { n: 1.7 }, 12.5, Orientation::Perp),
        (Surface::Plasma { omega_p_ev: 0.01 }, 3.0, Orientation::Para),
        (Surface::Lorentz { omega_p_ev: 0.006, omega_t_ev: 0.003 }, 30.0, Orientation::Perp),
        (Surface::Perfect, 10.0, Orientation::Para),
    ] {
        let query = Query::new(surface.to_model(&CONSTANTS), z, o);
        match shape_factor(&query, config) {
            Ok(r) => {
                let row = ResultRow::new(surface, z, o, &r);
                match ResultRow::parse_csv(&row.to_csv()) {
                    Ok(back) if back == row && back.query(&CONSTANTS) == query => {}
                    other => failures.push(format!("round trip {}: {other:?}", surface.name())),
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }

    let detail = if failures.is_empty() {
        "reflection ranges, scaling invariance (3 decades), determinism, tolerance monotonicity, CSV round trip".to_string()
    } else {
        failures.join("; ")
    };
    (failures.is_empty(), detail)
}
