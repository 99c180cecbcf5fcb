//! Quadrature engines against closed forms, and real-axis against rotated-contour evaluation.

use num_complex::Complex64;
use spinshift::kernel::{plasma_te_real_axis, plasma_te_rotated, Orientation};
use spinshift::quadrature::{integrate_eta, integrate_oscillatory, integrate_semi_infinite, EtaTransform, UTransform};
use spinshift::QuadratureConfig;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn semi_infinite_examples_both_transforms() {
    for t in [UTransform::ExpWeighted, UTransform::TanhSinh] {
        let c = QuadratureConfig { u_transform: t, ..cfg() };
        let a = integrate_semi_infinite(|u| (-u).exp(), &c).unwrap().value;
        let b = integrate_semi_infinite(|u| u * (-2.0 * u).exp(), &c).unwrap().value;
        let d = integrate_semi_infinite(|u| u.powi(3) * (-u).exp(), &c).unwrap().value;
        assert!((a - 1.0).abs() < 1e-10, "{t:?}: {a}");
        assert!((b - 0.25).abs() < 1e-10, "{t:?}: {b}");
        assert!((d - 6.0).abs() < 1e-9, "{t:?}: {d}");
    }
}

#[test]
fn eta_examples_both_transforms() {
    for t in [EtaTransform::Reciprocal, EtaTransform::RationalStretch] {
        let c = QuadratureConfig { eta_transform: t, ..cfg() };
        let a = integrate_eta(|e| (-2.0 * e).exp(), &c).unwrap().value;
        let b = integrate_eta(|e| e * e * (-e).exp(), &c).unwrap().value;
        let d = integrate_eta(|e| 1.0 / (e * e), &c).unwrap().value;
        assert!((a - (-2.0f64).exp() / 2.0).abs() < 1e-10);
        assert!((b - 5.0 / 1f64.exp()).abs() < 1e-9);
        assert!((d - 1.0).abs() < 1e-10);
    }
}

/// Five kernels analytic in the upper half plane: the regulated real-axis
/// value of `int_0^inf g(k) e^{2ik} dk` against `i int_0^inf g(iy) e^{-2y} dy`.
#[test]
fn real_axis_against_rotated_battery() {
    let kernels: [(&str, fn(Complex64) -> Complex64); 5] = [
        ("exp", |k| (-k).exp()),
        ("pole", |k| 1.0 / (k + 1.0)),
        ("double pole", |k| 1.0 / ((k + 2.0) * (k + 2.0))),
        ("sqrt", |k| 1.0 / (k + 1.0).sqrt() / (k + 1.0)),
        ("mixed", |k| k * (-k * 0.5).exp() / (k + 3.0)),
    ];
    let c = QuadratureConfig { rel_tol: 1e-10, abs_tol: 1e-13, ..cfg() };
    for (name, g) in kernels {
        let real = integrate_oscillatory(|k| g(Complex64::new(k, 0.0)), 2.0, &c).unwrap();
        let re = integrate_semi_infinite(|y| (Complex64::i() * g(Complex64::new(0.0, y))).re * (-2.0 * y).exp(), &c).unwrap();
        let im = integrate_semi_infinite(|y| (Complex64::i() * g(Complex64::new(0.0, y))).im * (-2.0 * y).exp(), &c).unwrap();
        let rotated = Complex64::new(re.value, im.value);
        let diff = (real.value - rotated).norm();
        assert!(diff < 1e-6 * rotated.norm().max(1e-3), "{name}: {} vs {rotated}", real.value);
        assert!(diff <= real.error + re.error + im.error + 1e-12, "{name}: diff {diff:e} > err {:e}", real.error);
    }
}

/// TE-like kernel `q R(q)` with `R = (q - sqrt(q^2 - 3)) / (q + sqrt(q^2 - 3))`,
/// the square root argument of an `n = 2` medium at grazing `k_par`.
#[test]
fn te_like_kernel_real_axis_vs_imaginary_axis() {
    let w = 3f64.sqrt();
    for o in Orientation::ALL {
        let real = plasma_te_real_axis(w, 1.0, o, &cfg()).unwrap();
        let imag = plasma_te_rotated(w, o, &cfg()).unwrap();
        assert!(((real.value - imag.value) / imag.value).abs() < 1e-4, "{o:?}");
    }
}

#[test]
fn tolerance_monotonicity_and_determinism() {
    let f = |u: f64| (3.0 * u).sin() * (-u).exp() / (1.0 + u * u);
    let mut last = f64::INFINITY;
    for k in 3..=12 {
        let c = QuadratureConfig { rel_tol: 10f64.powi(-k), ..cfg() };
        let a = integrate_semi_infinite(f, &c).unwrap();
        let b = integrate_semi_infinite(f, &c).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert!(a.error <= last, "error rose at 1e-{k}");
        last = a.error;
    }
}
