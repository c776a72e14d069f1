use std::f64::consts::PI;

use num_traits::ToPrimitive;

use super::{check_dimension, KernelError, KernelPoint};
use crate::exact::{multinomial, ExactPoly};
use crate::spectral::physicists_hermite;

/// `H_0(y), …, H_n(y)` by the three-term recurrence.
pub(crate) fn hermite_values(n: usize, y: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(1.0);
    if n >= 1 {
        h.push(2.0 * y);
    }
    for m in 1..n {
        h.push(2.0 * y * h[m] - 2.0 * m as f64 * h[m - 1]);
    }
    h
}

/// `∂_t^α Γ₁(x, t)` for `α = 0..=k`, from
/// `∂_t^α Γ₁ = (4t)^{-α} H_{2α}(x / 2√t) Γ₁`.
pub(crate) fn one_dim_derivatives(x: f64, t: f64, k: usize) -> Vec<f64> {
    let y = x / (2.0 * t.sqrt());
    let gamma = (4.0 * PI * t).powf(-0.5) * (-y * y).exp();
    let h = hermite_values(2 * k, y);
    let mut scale = gamma;
    (0..=k)
        .map(|a| {
            let v = scale * h[2 * a];
            scale /= 4.0 * t;
            v
        })
        .collect()
}

/// Compositions of `k` into `d` non-negative parts with their multinomial
/// weights.
pub(crate) fn compositions(k: usize, d: usize) -> Vec<(f64, Vec<usize>)> {
    fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(left - a, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    rec(k, d, &mut Vec::new(), &mut parts);
    parts
        .into_iter()
        .map(|p| {
            let head: Vec<u64> = p[..d - 1].iter().map(|&a| a as u64).collect();
            let w = multinomial(k as u64, &head).expect("parts sum to k").to_f64().expect("small multinomial");
            (w, p)
        })
        .collect()
}

/// `Δ^k` of a product kernel, given per-axis 1-D tables `tables[i][α]`.
pub(crate) fn combine(tables: &[Vec<f64>], comps: &[(f64, Vec<usize>)]) -> f64 {
    comps.iter().map(|(w, parts)| w * parts.iter().zip(tables).map(|(&a, tab)| tab[a]).product::<f64>()).sum()
}

/// Gaussian heat kernel `(4πt)^{-d/2} e^{-r²/4t}`.
pub fn heat_kernel(p: KernelPoint) -> f64 {
    (4.0 * PI * p.t).powf(-(p.d as f64) / 2.0) * (-p.r * p.r / (4.0 * p.t)).exp()
}

/// `∂_t^k Γ(x, t; y)` with `|x - y| = r`.
pub fn kernel_time_derivative(p: KernelPoint, k: usize) -> Result<f64, KernelError> {
    let p = KernelPoint::new(p.d, p.r, p.t)?;
    let mut offset = vec![0.0; p.d];
    offset[0] = p.r;
    kernel_time_derivative_at(&offset, p.t, k)
}

/// `∂_t^k Γ` at a general offset vector `x - y` of length 1, 2 or 3.
pub fn kernel_time_derivative_at(offset: &[f64], t: f64, k: usize) -> Result<f64, KernelError> {
    check_dimension(offset.len())?;
    if !(t > 0.0) {
        return Err(KernelError::NonPositiveTime(t));
    }
    let tables: Vec<Vec<f64>> = offset.iter().map(|&x| one_dim_derivatives(x, t, k)).collect();
    Ok(combine(&tables, &compositions(k, offset.len())))
}

/// `Δ_x ∂_t^k Γ` computed by differentiating the exact Hermite factors in
/// space: each axis contributes `(H'' - 4yH' + (4y² - 2)H)(y) e^{-y²} / 4t`
/// with `H = H_{2α}`.
pub fn laplacian_of_time_derivative_at(offset: &[f64], t: f64, k: usize) -> Result<f64, KernelError> {
    let d = offset.len();
    check_dimension(d)?;
    if !(t > 0.0) {
        return Err(KernelError::NonPositiveTime(t));
    }
    let y_of = |x: f64| x / (2.0 * t.sqrt());
    let four_y = ExactPoly::from_ints(&[0, 4]);
    let quad = ExactPoly::from_ints(&[-2, 0, 4]);
    let polys: Vec<(Vec<f64>, Vec<f64>)> = (0..=k)
        .map(|a| {
            let h = physicists_hermite(2 * a as u32);
            let h1 = h.derivative();
            let second = &(&h1.derivative() - &(&four_y * &h1)) + &(&quad * &h);
            (dense(&h), dense(&second))
        })
        .collect();
    let pre = (4.0 * PI * t).powf(-0.5);
    let mut plain = Vec::with_capacity(d);
    let mut lapl = Vec::with_capacity(d);
    for &x in offset {
        let y = y_of(x);
        let g = pre * (-y * y).exp();
        let mut p = Vec::with_capacity(k + 1);
        let mut q = Vec::with_capacity(k + 1);
        for (a, (h, s)) in polys.iter().enumerate() {
            let scale = g * (4.0 * t).powi(-(a as i32));
            p.push(scale * horner(h, y));
            q.push(scale * horner(s, y) / (4.0 * t));
        }
        plain.push(p);
        lapl.push(q);
    }
    let comps = compositions(k, d);
    let mut total = 0.0;
    for axis in 0..d {
        let mut tables = plain.clone();
        tables[axis] = lapl[axis].clone();
        total += combine(&tables, &comps);
    }
    Ok(total)
}

fn dense(p: &ExactPoly) -> Vec<f64> {
    let deg = p.degree().unwrap_or(0) as usize;
    let mut c = vec![0.0; deg + 1];
    for (e, v) in p.terms() {
        c[e as usize] = v.to_f64().unwrap_or(f64::NAN);
    }
    c
}

fn horner(c: &[f64], y: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * y + v)
}
