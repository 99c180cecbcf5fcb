//! Globally adaptive 21-point Gauss-Kronrod quadrature on a finite interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::Estimate;
use crate::error::{Error, Result};

/// Values an integrand may return.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_646_842_352,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    floor: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    // Largest error first; ties broken by position so the order is total and reproducible.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One 21-point Kronrod rule with the QUADPACK error heuristic.
/// Returns the value, the error estimate and the roundoff floor of that estimate.
fn rule<T, F>(f: &F, a: f64, b: f64) -> (T, f64, f64)
where
    T: Integrand,
    F: Fn(f64) -> T,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[10];
    let mut gauss = T::zero();
    let mut abs_sum = f_center.magnitude() * WGK[10];
    let mut values = [(T::zero(), T::zero()); 10];
    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod = kronrod + (f1 + f2) * WGK[j];
        abs_sum += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
        *slot = (f1, f2);
    }
    let mean = kronrod * 0.5;
    let mut asc = WGK[10] * (f_center - mean).magnitude();
    for (j, (f1, f2)) in values.iter().enumerate() {
        asc += WGK[j] * ((*f1 - mean).magnitude() + (*f2 - mean).magnitude());
    }
    let abs_half = half.abs();
    let result = kronrod * half;
    let res_abs = abs_sum * abs_half;
    let res_asc = asc * abs_half;
    let mut err = ((kronrod - gauss) * half).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    (result, err, floor)
}

/// Tolerances and budget for one adaptive run.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

/// Adaptive integration over the partition `points` (sorted, at least two entries).
///
/// The returned estimate is the one with the smallest error seen during
/// refinement, so a tighter tolerance can never report a larger error.
/// A run whose remaining error is within twice the accumulated roundoff
/// floor is accepted: further bisection cannot reduce it.
pub fn adaptive<T, F>(f: F, points: &[f64], budget: Budget) -> Result<Estimate<T>>
where
    T: Integrand,
    F: Fn(f64) -> T,
{
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = 0.0;
    let mut frozen_err = 0.0;
    let mut floor_sum = 0.0;
    let mut evaluations = 0usize;
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (v, e, fl) = rule(&f, w[0], w[1]);
        evaluations += 21;
        total = total + v;
        total_err += e;
        floor_sum += fl;
        heap.push(Segment { a: w[0], b: w[1], value: v, error: e, floor: fl });
    }
    if !total.is_finite_value() {
        return Err(Error::Convergence {
            what: "integrand returned a non-finite value".into(),
            value: f64::NAN,
            error: f64::INFINITY,
            subdivisions: 0,
        });
    }

    let mut subdivisions = 0usize;
    let mut best = Estimate { value: total, error: total_err, evaluations, subdivisions };
    let tolerance = |v: T| budget.abs_tol.max(budget.rel_tol * v.magnitude());

    loop {
        let err = total_err + frozen_err;
        if err < best.error {
            best = Estimate { value: total, error: err, evaluations, subdivisions };
        }
        if err <= tolerance(total).max(2.0 * floor_sum) {
            best.evaluations = evaluations;
            return Ok(best);
        }
        if subdivisions >= budget.max_subdivisions {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval at machine resolution: its error cannot shrink further.
            frozen_err += worst.error;
            total_err -= worst.error;
            continue;
        }
        let (v1, e1, f1) = rule(&f, worst.a, mid);
        let (v2, e2, f2) = rule(&f, mid, worst.b);
        evaluations += 42;
        subdivisions += 1;
        total = total - worst.value + v1 + v2;
        total_err += e1 + e2 - worst.error;
        floor_sum += f1 + f2 - worst.floor;
        if !total.is_finite_value() {
            break;
        }
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1, floor: f1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2, floor: f2 });
        // Re-sum periodically so running totals do not drift.
        if subdivisions % 64 == 0 {
            let mut items: Vec<_> = heap.iter().collect();
            items.sort_by(|x, y| x.a.total_cmp(&y.a));
            total = items.iter().fold(T::zero(), |acc, s| acc + s.value);
            total_err = items.iter().map(|s| s.error).sum();
            floor_sum = items.iter().map(|s| s.floor).sum();
        }
    }
    best.evaluations = evaluations;
    if best.error <= tolerance(best.value).max(2.0 * floor_sum) {
        return Ok(best);
    }
    Err(Error::Convergence {
        what: "adaptive Gauss-Kronrod budget exhausted".into(),
        value: best.value.magnitude(),
        error: best.error,
        subdivisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget(rel: f64) -> Budget {
        Budget { abs_tol: 1e-15, rel_tol: rel, max_subdivisions: 500 }
    }

    #[test]
    fn polynomial_is_exact() {
        let est = adaptive(|x: f64| x.powi(7) - 3.0 * x * x, &[0.0, 2.0], budget(1e-12)).unwrap();
        assert!((est.value - (2f64.powi(8) / 8.0 - 8.0)).abs() < 1e-12);
        assert_eq!(est.subdivisions, 0);
    }

    #[test]
    fn endpoint_singularity() {
        let est = adaptive(|x: f64| 1.0 / x.sqrt(), &[0.0, 1.0], budget(1e-10)).unwrap();
        assert!((est.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn complex_oscillation() {
        let est = adaptive(|x: f64| Complex64::new(0.0, 10.0 * x).exp(), &[0.0, 1.0], budget(1e-12)).unwrap();
        let exact = (Complex64::new(0.0, 10.0).exp() - 1.0) / Complex64::new(0.0, 10.0);
        assert!((est.value - exact).norm() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tight = Budget { abs_tol: 0.0, rel_tol: 1e-15, max_subdivisions: 3 };
        let res = adaptive(|x: f64| (1.0 / x).sin(), &[1e-6, 1.0], tight);
        assert!(matches!(res, Err(Error::Convergence { .. })));
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let res = adaptive(|_x: f64| f64::NAN, &[0.0, 1.0], budget(1e-8));
        assert!(res.is_err());
    }
}
