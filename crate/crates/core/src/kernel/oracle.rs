use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_dimension, KernelError};
use crate::numerics::factorial_f64;

fn complex_kernel(r2: f64, d: usize, z: Complex64) -> Complex64 {
    (Complex64::new(4.0 * PI, 0.0) * z).powf(-(d as f64) / 2.0) * (-r2 / (4.0 * z)).exp()
}

/// `∂_t^k Γ` from kernel values alone, by the trapezoid rule on the circle
/// `|z - t| = t/2` in the complex time plane (Cauchy's formula). The rule
/// converges like `2^{-nodes}`.
pub fn contour_time_derivative(offset: &[f64], t: f64, k: usize, nodes: usize) -> Result<f64, KernelError> {
    check_dimension(offset.len())?;
    if !(t > 0.0) {
        return Err(KernelError::NonPositiveTime(t));
    }
    let r2: f64 = offset.iter().map(|x| x * x).sum();
    let rho = 0.5 * t;
    let sum: Complex64 = (0..nodes)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / nodes as f64;
            let w = Complex64::from_polar(1.0, theta);
            complex_kernel(r2, offset.len(), t + rho * w) * w.powi(-(k as i32))
        })
        .sum();
    Ok(sum.re * factorial_f64(k) / (nodes as f64 * rho.powi(k as i32)))
}

/// Real central differences in `t` with two Richardson levels, for
/// `k ∈ {1, 2}`.
pub fn richardson_time_derivative(offset: &[f64], t: f64, k: usize, h: f64) -> Result<f64, KernelError> {
    check_dimension(offset.len())?;
    if !(t > 0.0) || h <= 0.0 || h >= 0.5 * t {
        return Err(KernelError::NonPositiveTime(t));
    }
    let r2: f64 = offset.iter().map(|x| x * x).sum();
    let d = offset.len();
    let f = |s: f64| (4.0 * PI * s).powf(-(d as f64) / 2.0) * (-r2 / (4.0 * s)).exp();
    let diff = |h: f64| match k {
        1 => (f(t + h) - f(t - h)) / (2.0 * h),
        2 => (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h),
        _ => f64::NAN,
    };
    if !(1..=2).contains(&k) {
        return Err(KernelError::BadScan(format!("richardson oracle supports k = 1, 2; got {k}")));
    }
    let level1 = |h: f64| (4.0 * diff(0.5 * h) - diff(h)) / 3.0;
    Ok((16.0 * level1(0.5 * h) - level1(h)) / 15.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{kernel_time_derivative, kernel_time_derivative_at, KernelPoint};

    #[test]
    fn contour_oracle_matches_closed_form() {
        for offset in [vec![1.0], vec![0.0], vec![0.3, 0.4], vec![0.2, -0.1, 0.45]] {
            for t in [0.05, 0.25, 1.0] {
                for k in 0..=6 {
                    let exact = kernel_time_derivative_at(&offset, t, k).unwrap();
                    let oracle = contour_time_derivative(&offset, t, k, 96).unwrap();
                    let rel = (exact - oracle).abs() / exact.abs();
                    assert!(rel < 1e-8, "{offset:?} t={t} k={k} rel={rel}");
                }
            }
        }
    }

    #[test]
    fn richardson_second_derivative() {
        let p = KernelPoint::new(1, 1.0, 0.25).unwrap();
        let exact = kernel_time_derivative(p, 2).unwrap();
        let fd = richardson_time_derivative(&[1.0], 0.25, 2, 0.02).unwrap();
        assert!((exact - fd).abs() < 1e-8 * exact.abs(), "{exact} {fd}");
        let fd1 = richardson_time_derivative(&[1.0], 0.25, 1, 0.02).unwrap();
        let e1 = kernel_time_derivative(p, 1).unwrap();
        assert!((e1 - fd1).abs() < 1e-8 * e1.abs());
        assert!(richardson_time_derivative(&[1.0], 0.25, 3, 0.02).is_err());
    }
}
