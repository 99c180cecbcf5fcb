//! Property tests of the kernel and the analysis layer.

use proptest::prelude::*;
use spinshift::analysis::{find_peak, sweep, SweepFamily, SweepScale, SweepSpec};
use spinshift::kernel::{shape_factor, Orientation, Query};
use spinshift::output::{ResultRow, Surface};
use spinshift::units::CONSTANTS;
use spinshift::{MaterialModel, QuadratureConfig};

fn orientation() -> impl Strategy<Value = Orientation> {
    prop_oneof![Just(Orientation::Perp), Just(Orientation::Para)]
}

fn s(model: MaterialModel, z: f64, o: Orientation, cfg: &QuadratureConfig) -> (f64, f64) {
    let r = shape_factor(&Query::new(model, z, o), cfg).unwrap();
    (r.shape_factor, r.err_estimate)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scaling_invariance(
        wp in 0.05f64..5.0,
        ratio in 0.2f64..20.0,
        z in 0.1f64..10.0,
        decade in 1i32..=3,
        o in orientation(),
    ) {
        let cfg = QuadratureConfig::default();
        let c = 10f64.powi(decade);
        let wt = wp / ratio;
        let lorentz = |k: f64| MaterialModel::LorentzDielectric { omega_p: k * wp, omega_t: k * wt };
        let (a, ea) = s(lorentz(1.0), z, o, &cfg);
        let (b, eb) = s(lorentz(c), z / c, o, &cfg);
        prop_assert!((a - b).abs() <= ea + eb + 1e-10 * a.abs(), "lorentz {a} vs {b}");
        let (a, ea) = s(MaterialModel::Plasma { omega_p: wp }, z, o, &cfg);
        let (b, eb) = s(MaterialModel::Plasma { omega_p: c * wp }, z / c, o, &cfg);
        prop_assert!((a - b).abs() <= ea + eb + 1e-10 * a.abs(), "plasma {a} vs {b}");
    }

    #[test]
    fn nondispersive_is_distance_free(n in 1.0f64..50.0, z in 0.1f64..1e3, o in orientation()) {
        let cfg = QuadratureConfig::default();
        let (a, ea) = s(MaterialModel::NonDispersive { n }, z, o, &cfg);
        let (b, eb) = s(MaterialModel::NonDispersive { n }, 2.0 * z, o, &cfg);
        prop_assert!((a - b).abs() <= ea + eb);
    }

    #[test]
    fn halving_tolerance_stays_within_error(n in 1.01f64..20.0, o in orientation()) {
        let cfg = QuadratureConfig::default();
        let tight = cfg.scaled_tolerances(0.5);
        let (a, ea) = s(MaterialModel::NonDispersive { n }, 1.0, o, &cfg);
        let (b, _) = s(MaterialModel::NonDispersive { n }, 1.0, o, &tight);
        prop_assert!((a - b).abs() <= ea, "{a} vs {b} (err {ea:e})");
    }

    #[test]
    fn csv_round_trip(
        kind in 0usize..4,
        p in 1.0f64..30.0,
        q in 1e-4f64..1.0,
        z in 0.5f64..100.0,
        o in orientation(),
    ) {
        let surface = match kind {
            0 => Surface::NonDispersive { n: p },
            1 => Surface::Plasma { omega_p_ev: q },
            2 => Surface::Lorentz { omega_p_ev: q * p, omega_t_ev: q },
            _ => Surface::Perfect,
        };
        let query = Query::new(surface.to_model(&CONSTANTS), z, o);
        let r = shape_factor(&query, &QuadratureConfig::default()).unwrap();
        let row = ResultRow::new(surface, z, o, &r);
        let line = row.to_csv();
        let back = ResultRow::parse_csv(&line).unwrap();
        prop_assert_eq!(&back, &row);
        prop_assert_eq!(back.query(&CONSTANTS), query);
        prop_assert_eq!(back.to_csv(), line);
    }
}

#[test]
fn sweep_scales_agree_on_shared_grid() {
    let base = SweepSpec {
        family: SweepFamily::LorentzAtFixedOmegaTz,
        omega_t_z: 0.05,
        chi0_range: (1.0, 9.0),
        points: 2,
        orientation: Orientation::Perp,
        scale: SweepScale::Linear,
    };
    let cfg = QuadratureConfig::default();
    let a = sweep(&base, &cfg).unwrap();
    let b = sweep(&SweepSpec { scale: SweepScale::SqrtChi0, ..base }, &cfg).unwrap();
    assert_eq!(a, b);
    for p in &a {
        assert!((p.sqrt_chi0 * p.sqrt_chi0 - p.chi0).abs() <= 1e-12 * p.chi0);
    }
}

#[test]
fn sweep_is_ordered_and_deterministic() {
    let spec = SweepSpec {
        family: SweepFamily::LorentzAtFixedOmegaTz,
        omega_t_z: 0.02,
        chi0_range: (0.0, 30.0),
        points: 16,
        orientation: Orientation::Para,
        scale: SweepScale::SqrtChi0,
    };
    let cfg = QuadratureConfig::default();
    let a = sweep(&spec, &cfg).unwrap();
    let b = sweep(&spec, &cfg).unwrap();
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| w[0].chi0 < w[1].chi0));
    assert_eq!(a[0].s_dispersive, 0.0);
    assert_eq!(a[0].s_nondispersive, 0.0);
}

#[test]
fn peak_is_stable_under_tighter_tolerances() {
    let cfg = QuadratureConfig::default();
    for (wt, o) in [(0.02, Orientation::Perp), (0.1, Orientation::Para)] {
        let a = find_peak(wt, o, &cfg).unwrap();
        let b = find_peak(wt, o, &cfg.scaled_tolerances(0.5)).unwrap();
        let (ca, cb) = (a.chi0_peak.unwrap(), b.chi0_peak.unwrap());
        assert!(((ca - cb) / ca).abs() < 1e-3);
        assert!(a.enhancement.unwrap() > 1.0);
        let (lo, hi) = a.bracket;
        assert!(ca > lo && ca < hi);
    }
}
