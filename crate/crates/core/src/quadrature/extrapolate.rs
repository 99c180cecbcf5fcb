use num_complex::Complex64;

use crate::error::{Error, Result};

/// Functions of `delta` fitted through the regulated values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtrapolationBasis {
    /// `1, delta, delta^2, ...`: the regulated integral is analytic in `delta`.
    Polynomial,
    /// `1, delta, delta ln delta, delta^2, delta^2 ln delta, ...`: needed when no
    /// oscillation is present and algebraic tails produce logarithms.
    PolynomialLog,
}

impl ExtrapolationBasis {
    fn function(self, index: usize, delta: f64) -> f64 {
        match self {
            ExtrapolationBasis::Polynomial => delta.powi(index as i32),
            ExtrapolationBasis::PolynomialLog => {
                if index == 0 {
                    return 1.0;
                }
                let power = (index + 1) / 2;
                let base = delta.powi(power as i32);
                if index % 2 == 0 {
                    base * delta.ln()
                } else {
                    base
                }
            }
        }
    }
}

/// Value at `delta = 0` of the interpolant through the last `terms` points.
fn fit_at_zero(deltas: &[f64], values: &[Complex64], terms: usize, basis: ExtrapolationBasis) -> Result<Complex64> {
    let n = deltas.len();
    let xs = &deltas[n - terms..];
    let ys = &values[n - terms..];
    if basis == ExtrapolationBasis::Polynomial {
        // Neville tableau evaluated at zero.
        let mut p: Vec<Complex64> = ys.to_vec();
        for level in 1..terms {
            for i in 0..terms - level {
                let (xi, xj) = (xs[i], xs[i + level]);
                p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
            }
        }
        return Ok(p[0]);
    }
    let mut matrix: Vec<Vec<f64>> = xs
        .iter()
        .map(|&d| (0..terms).map(|j| basis.function(j, d)).collect())
        .collect();
    let re: Vec<f64> = ys.iter().map(|v| v.re).collect();
    let im: Vec<f64> = ys.iter().map(|v| v.im).collect();
    let mut rhs = vec![re, im];
    solve_in_place(&mut matrix, &mut rhs)?;
    Ok(Complex64::new(rhs[0][0], rhs[1][0]))
}

/// Gaussian elimination with partial pivoting for several right-hand sides.
fn solve_in_place(a: &mut [Vec<f64>], rhs: &mut [Vec<f64>]) -> Result<()> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return Err(Error::Config("singular extrapolation system".into()));
        }
        a.swap(col, pivot);
        for b in rhs.iter_mut() {
            b.swap(col, pivot);
        }
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            for b in rhs.iter_mut() {
                b[row] -= factor * b[col];
            }
        }
    }
    for b in rhs.iter_mut() {
        for row in (0..n).rev() {
            let mut acc = b[row];
            for k in row + 1..n {
                acc -= a[row][k] * b[k];
            }
            b[row] = acc / a[row][row];
        }
    }
    Ok(())
}

/// Extrapolates `values(deltas)` to `delta = 0` using the smallest
/// `order + 1` regulators. Returns the limit and the spread between the
/// order-`order` and order-`order - 1` extrapolants.
pub fn extrapolate_to_zero(
    deltas: &[f64],
    values: &[Complex64],
    order: usize,
    basis: ExtrapolationBasis,
) -> Result<(Complex64, f64)> {
    if deltas.len() != values.len() || deltas.len() < order + 1 || order == 0 {
        return Err(Error::Config("extrapolation needs order + 1 regulated values".into()));
    }
    let best = fit_at_zero(deltas, values, order + 1, basis)?;
    let previous = fit_at_zero(deltas, values, order, basis)?;
    Ok((best, (best - previous).norm()))
}

/// Successive extrapolants at orders `1..=order`, used to check contraction.
pub(crate) fn extrapolant_sequence(
    deltas: &[f64],
    values: &[Complex64],
    order: usize,
    basis: ExtrapolationBasis,
) -> Result<Vec<Complex64>> {
    (1..=order + 1).map(|terms| fit_at_zero(deltas, values, terms, basis)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_polynomial_exactly() {
        let deltas: Vec<f64> = (1..=6).map(|k| 0.5f64.powi(k)).collect();
        let values: Vec<Complex64> = deltas
            .iter()
            .map(|d| Complex64::new(2.0 - 3.0 * d + d * d * d, 0.5 * d))
            .collect();
        let (v, spread) = extrapolate_to_zero(&deltas, &values, 3, ExtrapolationBasis::Polynomial).unwrap();
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(spread < 1e-3);
    }

    #[test]
    fn log_basis_handles_delta_log_delta() {
        let deltas: Vec<f64> = (1..=6).map(|k| 1e-2 * 0.5f64.powi(k)).collect();
        let values: Vec<Complex64> = deltas
            .iter()
            .map(|d| Complex64::new(1.0 + d * d.ln() - 0.4 * d + 2.0 * d * d, 0.0))
            .collect();
        let (v, _) = extrapolate_to_zero(&deltas, &values, 3, ExtrapolationBasis::PolynomialLog).unwrap();
        assert!((v.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_short_sequences() {
        let d = [0.5, 0.25];
        let v = [Complex64::new(1.0, 0.0); 2];
        assert!(extrapolate_to_zero(&d, &v, 3, ExtrapolationBasis::Polynomial).is_err());
    }
}
