//! Regression against the 50-digit non-dispersive fixture.

use spinshift::closed_forms::{nondispersive_closed, nondispersive_large_n};
use spinshift::kernel::{shape_factor, Orientation, Query};
use spinshift::{MaterialModel, QuadratureConfig};

fn fixture() -> Vec<(f64, Orientation, f64)> {
    include_str!("fixtures/nondispersive_golden.csv")
        .lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn closed_form_matches_fixture() {
    for (n, o, s) in fixture() {
        let v = nondispersive_closed(n, o).unwrap();
        // Cancellation at the series hand-over costs about 1e-10 relative, and
        // decimal n is not exactly representable.
        let dn = n * f64::EPSILON;
        let slope = (nondispersive_closed(n + 1e-3 * n, o).unwrap() - v).abs() / (1e-3 * n);
        assert!((v - s).abs() <= 1e-10 * s.abs() + 2.0 * slope * dn, "n = {n} {o:?}: {v} vs {s}");
    }
}

#[test]
fn quadrature_matches_fixture() {
    let cfg = QuadratureConfig::default();
    for (n, o, s) in fixture() {
        if n > 1e3 {
            continue;
        }
        let r = shape_factor(&Query::new(MaterialModel::NonDispersive { n }, 7.0, o), &cfg).unwrap();
        if s == 0.0 {
            assert_eq!(r.shape_factor, 0.0);
            continue;
        }
        let rel = ((r.shape_factor - s) / s).abs();
        assert!(rel < 1e-6, "n = {n} {o:?}: rel {rel:e}");
        assert!((r.shape_factor - s).abs() <= r.err_estimate + 1e-12 * s.abs(), "n = {n} {o:?}: error bound");
    }
}

/// The remainder after the two-term large-n expansion falls off like
/// `ln(n) / n`, so `remainder * n / ln n` is nearly constant on [1e2, 1e4].
#[test]
fn large_n_remainder_decays_like_log_over_n() {
    for o in Orientation::ALL {
        let scaled: Vec<f64> = [1e2, 1e3, 1e4]
            .iter()
            .map(|&n: &f64| (nondispersive_closed(n, o).unwrap() - nondispersive_large_n(n, o)) * n / n.ln())
            .collect();
        for w in scaled.windows(2) {
            assert!(((w[1] - w[0]) / w[0]).abs() < 0.05, "{o:?}: {scaled:?}");
        }
        assert!(scaled.iter().all(|v| *v < 0.0));
    }
}
