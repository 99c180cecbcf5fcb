//! Analytic reference values in shape-factor units.
//!
//! All values are `S`, defined by `Delta mu = e^3 / (16 pi^2 m^3 z^2) * S`.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::kernel::Orientation;

/// Where the non-dispersive closed form hands over to its Taylor series about `n = 1`.
///
/// The printed expressions are `0/0` at `n = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesWindow {
    pub n_switch: f64,
    pub series_order: usize,
}

impl Default for SeriesWindow {
    fn default() -> Self {
        SeriesWindow { n_switch: 1.0 + 1e-3, series_order: 4 }
    }
}

/// Taylor coefficients of `S(n)` in powers of `n - 1`, starting at the linear
/// term. Generated at 120 digits by `tests/fixtures/generate_golden.py`.
const SERIES_PERP: [f64; 6] = [
    -1.083_333_333_333_333_3,
    0.275,
    0.076_785_714_285_714_286,
    -0.217_757_936_507_936_51,
    0.170_062_229_437_229_44,
    -0.054_705_884_393_384_393,
];
const SERIES_PARA: [f64; 6] = [
    -1.25,
    0.425,
    0.239_880_952_380_952_38,
    -0.429_464_285_714_285_71,
    0.260_619_588_744_588_74,
    -0.007_565_871_628_371_628_4,
];

pub const MAX_SERIES_ORDER: usize = 6;

/// Exact shape factor of a non-dispersive half-space with refractive index `n`.
pub fn nondispersive_closed(n: f64, orientation: Orientation) -> Result<f64> {
    nondispersive_closed_with(n, orientation, SeriesWindow::default())
}

pub fn nondispersive_closed_with(n: f64, orientation: Orientation, window: SeriesWindow) -> Result<f64> {
    if !(n >= 1.0) || !n.is_finite() {
        return Err(Error::domain(format!("refractive index must be finite and >= 1, got {n}")));
    }
    if !(window.n_switch > 1.0) || window.series_order == 0 || window.series_order > MAX_SERIES_ORDER {
        return Err(Error::Config(format!("invalid series window {window:?}")));
    }
    if n < window.n_switch {
        return Ok(near_unity_series(n - 1.0, orientation, window.series_order));
    }
    Ok(closed_expression(n, orientation))
}

fn near_unity_series(h: f64, orientation: Orientation, order: usize) -> f64 {
    let coeffs = match orientation {
        Orientation::Perp => &SERIES_PERP,
        Orientation::Para => &SERIES_PARA,
    };
    coeffs[..order].iter().rev().fold(0.0, |acc, c| (acc + c) * h)
}

fn closed_expression(n: f64, orientation: Orientation) -> f64 {
    let h = n - 1.0;
    let n2 = n * n;
    let n4 = n2 * n2;
    let n2m1 = h * (n + 1.0);
    let n2p1 = n2 + 1.0;
    let root_n2m1 = n2m1.sqrt();
    let root_n4m1 = (n2m1 * n2p1).sqrt();
    // arctanh((n-1) sqrt(1+n^2) / (1+(n-1)n)) = ln1p((n-1)(n-1+sqrt(n^2+1))/n)
    let arctanh_term = (h * (h + n2p1.sqrt()) / n).ln_1p();
    // ln(n + sqrt(n^2-1))
    let log_term = (h + root_n2m1).ln_1p();
    let denom = n2m1 * n2p1 * root_n4m1;
    let p5 = |c: [f64; 6]| c.iter().rev().fold(0.0, |acc, a| acc * n + a);
    match orientation {
        Orientation::Perp => {
            let bracket = root_n4m1 * p5([5.0, -2.0, 1.0, -2.0, -3.0, 1.0])
                - n4 * root_n2m1 * (1.0 + 2.0 * n2) * arctanh_term
                + 2.0 * n2m1 * n2p1 * n2p1 * n2p1.sqrt() * log_term;
            -0.5 * bracket / denom
        }
        Orientation::Para => {
            let bracket = root_n4m1 * p5([26.0, -9.0, 8.0, -23.0, -3.0, 1.0])
                + 3.0 * n4 * root_n2m1 * (2.0 - 3.0 * n2) * arctanh_term
                + 9.0 * n2m1 * n2p1 * n2p1 * n2p1.sqrt() * log_term;
            -bracket / (12.0 * denom)
        }
    }
}

/// Two-term large-index expansion: `-(n - 1)/2` (perp) and `-(n/12 + 1/2)` (para).
pub fn nondispersive_large_n(n: f64, orientation: Orientation) -> f64 {
    match orientation {
        Orientation::Perp => -(n - 1.0) / 2.0,
        Orientation::Para => -(n / 12.0 + 0.5),
    }
}

/// Perfect mirror: `+1/2` (perp) and `-1/2` (para).
pub fn perfect_reflector(orientation: Orientation) -> f64 {
    match orientation {
        Orientation::Perp => 0.5,
        Orientation::Para => -0.5,
    }
}

/// Leading small-distance behaviour of a plasma surface,
/// `|S| = pi / (4 sqrt 2 omega_p z)` (perp), `5 pi / (8 sqrt 2 omega_p z)` (para).
///
/// The sign is negative for both orientations: `R_TM - 1 < 0` everywhere and
/// the TM weights are positive at large `eta`, so the integral representation
/// fixes it.
pub fn plasma_small_distance(omega_p_z: f64, orientation: Orientation) -> Result<f64> {
    if !(omega_p_z > 0.0) || !omega_p_z.is_finite() {
        return Err(Error::domain(format!("omega_p z must be finite and > 0, got {omega_p_z}")));
    }
    let magnitude = PI / (4.0 * SQRT_2 * omega_p_z);
    Ok(match orientation {
        Orientation::Perp => -magnitude,
        Orientation::Para => -2.5 * magnitude,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishes_without_contrast() {
        assert_eq!(nondispersive_closed(1.0, Orientation::Perp).unwrap(), 0.0);
        assert_eq!(nondispersive_closed(1.0, Orientation::Para).unwrap(), 0.0);
    }

    #[test]
    fn series_window_is_continuous() {
        let w = SeriesWindow::default();
        for o in [Orientation::Perp, Orientation::Para] {
            // Both branches evaluated at the same points either side of the switch.
            for n in [w.n_switch - 1e-6, w.n_switch, w.n_switch + 1e-6] {
                let series = near_unity_series(n - 1.0, o, w.series_order);
                let closed = closed_expression(n, o);
                assert!((series - closed).abs() < 1e-9, "{o:?} at {n}: {series} {closed}");
            }
            let below = nondispersive_closed_with(w.n_switch - 1e-12, o, w).unwrap();
            let above = nondispersive_closed_with(w.n_switch + 1e-12, o, w).unwrap();
            assert!((below - above).abs() < 1e-10);
        }
    }

    #[test]
    fn large_index_limit() {
        let s = nondispersive_closed(1e3, Orientation::Perp).unwrap();
        let expected = -(1e3 - 1.0) / 2.0;
        assert!(((s - expected) / expected).abs() < 1e-3);
        assert!((nondispersive_large_n(100.0, Orientation::Perp) + 49.5).abs() < 1e-14);
        assert!((nondispersive_large_n(100.0, Orientation::Para) + (100.0 / 12.0 + 0.5)).abs() < 1e-14);
        let ratio = nondispersive_large_n(1e9, Orientation::Perp) / nondispersive_large_n(1e9, Orientation::Para);
        assert!((ratio - 6.0).abs() < 1e-6);
    }

    #[test]
    fn perfect_reflector_signs_differ() {
        assert_eq!(perfect_reflector(Orientation::Perp), 0.5);
        assert_eq!(perfect_reflector(Orientation::Para), -0.5);
    }

    #[test]
    fn plasma_asymptote() {
        let perp = plasma_small_distance(1e-3, Orientation::Perp).unwrap();
        let para = plasma_small_distance(1e-3, Orientation::Para).unwrap();
        assert!((perp.abs() - 555.360_367_269_795_7).abs() < 1e-9);
        assert!((para.abs() - 1388.400_918_174_489).abs() < 1e-8);
        assert_eq!(para / perp, 2.5);
        assert!(plasma_small_distance(0.0, Orientation::Perp).is_err());
    }

    #[test]
    fn rejects_sub_unity_index() {
        assert!(nondispersive_closed(0.9, Orientation::Perp).is_err());
        assert!(nondispersive_closed(f64::NAN, Orientation::Perp).is_err());
    }

    #[test]
    fn monotone_decreasing_on_sampled_grid() {
        // Observed behaviour, recorded: strictly decreasing for both orientations on [1, 1e3].
        for o in [Orientation::Perp, Orientation::Para] {
            let mut prev = 0.0;
            for k in 1..=300 {
                let n = 10f64.powf(3.0 * k as f64 / 300.0);
                let s = nondispersive_closed(n, o).unwrap();
                assert!(s < prev, "{o:?} at n = {n}");
                prev = s;
            }
        }
    }
}
