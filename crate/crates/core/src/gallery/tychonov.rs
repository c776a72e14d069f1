use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::laurent::{ln_abs, LaurentPoly};
use super::GalleryError;
use crate::numerics::{linspace, ln_factorial, logspace};

/// Relative size of the last retained term that counts as converged.
pub const TRUNCATION_TOLERANCE: f64 = 1e-12;

/// `R_k` with `D_t^k e^{-t^{-α}} = R_k(t) e^{-t^{-α}}`, from
/// `R_{k+1} = R_k' + α t^{-α-1} R_k`.
pub fn tychonov_g_derivative(alpha: u32, k: usize) -> LaurentPoly {
    tychonov_g_derivatives(alpha, k).pop().expect("k + 1 entries")
}

/// `R_0, …, R_k`.
pub fn tychonov_g_derivatives(alpha: u32, k: usize) -> Vec<LaurentPoly> {
    let factor = LaurentPoly::from_pairs(&[(-(alpha as i32) - 1, alpha as i64)]);
    let mut out = vec![LaurentPoly::one()];
    for j in 0..k {
        let next = &out[j].derivative() + &(&out[j] * &factor);
        out.push(next);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TychonovParams {
    pub alpha: u32,
    pub truncation: usize,
    pub x_range: (f64, f64),
    pub t_range: (f64, f64),
}

impl Default for TychonovParams {
    fn default() -> Self {
        Self { alpha: 2, truncation: 8, x_range: (-1.0, 1.0), t_range: (0.4, 1.0) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TychonovValue {
    pub u: f64,
    /// `ln|u|`, finite even when `u` underflows; `-inf` when `u = 0`.
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub ln_abs_u: f64,
    pub residual: f64,
    pub envelope_ok: bool,
}

/// Truncated series `u_K = Σ_{k≤K} (-1)^k D_t^k g · x^{4k}/(4k)!` with its
/// exact derivative polynomials and a fitted envelope constant.
#[derive(Debug, Clone)]
pub struct TychonovSeries {
    params: TychonovParams,
    r: Vec<LaurentPoly>,
    envelope_c: f64,
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn factorial_rational(n: usize) -> BigRational {
    BigRational::from_integer((1..=n as u64).map(BigInt::from).product())
}

impl TychonovSeries {
    pub fn new(params: TychonovParams) -> Result<Self, GalleryError> {
        if params.alpha < 2 {
            return Err(GalleryError::InvalidParameter(format!("alpha must be >= 2, got {}", params.alpha)));
        }
        if params.truncation < 4 {
            return Err(GalleryError::InvalidParameter(format!("truncation must be >= 4, got {}", params.truncation)));
        }
        let (x0, x1) = params.x_range;
        let (t0, t1) = params.t_range;
        if !(x0 <= x1 && t0 > 0.0 && t0 <= t1) {
            return Err(GalleryError::InvalidParameter(format!("bad window {params:?}")));
        }
        let r = tychonov_g_derivatives(params.alpha, params.truncation + 1);
        let mut series = Self { params, r, envelope_c: 0.0 };
        series.envelope_c = series.fit_envelope()?;
        Ok(series)
    }

    pub fn params(&self) -> &TychonovParams {
        &self.params
    }

    /// Smallest `C` with `|u| ≤ exp((C x⁴/t)^{1/3} - 1/(2t^α))` on a 21 × 21
    /// grid over the window.
    pub fn envelope_constant(&self) -> f64 {
        self.envelope_c
    }

    fn fit_envelope(&self) -> Result<f64, GalleryError> {
        let (x0, x1) = self.params.x_range;
        let (t0, t1) = self.params.t_range;
        let mut c = 0.0f64;
        for t in linspace(t0, t1, 21) {
            for x in linspace(x0, x1, 21) {
                let v = self.series(x, t)?;
                let excess = v.ln_abs + 0.5 * t.powi(-(self.params.alpha as i32));
                if excess > 0.0 && x != 0.0 {
                    c = c.max(t * excess.powi(3) / x.powi(4));
                }
            }
        }
        Ok(c * (1.0 + 1e-9))
    }

    fn series(&self, x: f64, t: f64) -> Result<Partial, GalleryError> {
        self.partial_sum(x, t, true)
    }

    fn partial_sum(&self, x: f64, t: f64, check: bool) -> Result<Partial, GalleryError> {
        let k_max = self.params.truncation;
        let tq = rational(t);
        let x4 = rational(x).pow(4);
        let mut sum = BigRational::zero();
        let mut last = BigRational::zero();
        let mut xpow = BigRational::from_integer(BigInt::from(1));
        for k in 0..=k_max {
            let mut term = self.r[k].eval_exact(&tq) * &xpow / factorial_rational(4 * k);
            if k % 2 == 1 {
                term = -term;
            }
            sum += &term;
            last = term;
            xpow *= &x4;
        }
        if check && !last.is_zero() {
            let converged = !sum.is_zero() && ln_abs(&last) - ln_abs(&sum) <= TRUNCATION_TOLERANCE.ln();
            if !converged {
                return Err(GalleryError::NonConvergent { x, t, truncation: k_max });
            }
        }
        let neg_exp = -t.powi(-(self.params.alpha as i32));
        let ln_g_free = if sum.is_zero() { f64::NEG_INFINITY } else { ln_abs(&sum) };
        let ln_abs_u = ln_g_free + neg_exp;
        let u = if sum.is_negative() { -ln_abs_u.exp() } else { ln_abs_u.exp() };

        // telescoping boundary term R_{K+1} g x^{4K} / (4K)!
        let r_next = self.r[k_max + 1].eval_exact(&tq);
        let residual = if r_next.is_zero() || x == 0.0 {
            0.0
        } else {
            (ln_abs(&r_next) + neg_exp + 4.0 * k_max as f64 * x.abs().ln() - ln_factorial(4 * k_max)).exp()
        };
        Ok(Partial { u, ln_abs: ln_abs_u, residual })
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<TychonovValue, GalleryError> {
        if t <= 0.0 {
            return Ok(TychonovValue { u: 0.0, ln_abs_u: f64::NEG_INFINITY, residual: 0.0, envelope_ok: true });
        }
        let p = self.series(x, t)?;
        let bound = (self.envelope_c * x.powi(4) / t).cbrt() - 0.5 * t.powi(-(self.params.alpha as i32));
        Ok(TychonovValue { u: p.u, ln_abs_u: p.ln_abs, residual: p.residual, envelope_ok: p.ln_abs <= bound + 1e-12 })
    }
}

struct Partial {
    u: f64,
    ln_abs: f64,
    residual: f64,
}

pub fn tychonov_eval(params: TychonovParams, x: f64, t: f64) -> Result<TychonovValue, GalleryError> {
    TychonovSeries::new(params)?.eval(x, t)
}

/// Smallest truncation `K ≥ 4` whose last-term test passes at every `x` in
/// `xs` for this `t`.
pub fn required_truncation(alpha: u32, xs: &[f64], t: f64, k_cap: usize) -> Result<usize, GalleryError> {
    let mut k = 4;
    while k <= k_cap {
        let params = TychonovParams { alpha, truncation: k, x_range: (0.0, 0.0), t_range: (t, t) };
        let s = TychonovSeries { params, r: tychonov_g_derivatives(alpha, k + 1), envelope_c: 0.0 };
        if xs.iter().all(|&x| s.series(x, t).is_ok()) {
            return Ok(k);
        }
        k += 2;
    }
    Err(GalleryError::NonConvergent { x: xs.iter().fold(0.0, |m: f64, v| m.max(v.abs())), t, truncation: k_cap })
}

/// `sup_{|x| ≤ x_max} ln|u(x, 2^{-m})|` for `m = 0..=m_max`, each with its
/// own converged truncation.
pub fn tychonov_decay(alpha: u32, x_max: f64, m_max: u32, x_points: usize) -> Result<Vec<(f64, f64)>, GalleryError> {
    let xs = linspace(0.0, x_max, x_points);
    (0..=m_max)
        .map(|m| {
            let t = 0.5f64.powi(m as i32);
            let k = required_truncation(alpha, &xs, t, 200)?;
            let s = TychonovSeries {
                params: TychonovParams { alpha, truncation: k, x_range: (0.0, x_max), t_range: (t, t) },
                r: tychonov_g_derivatives(alpha, k + 1),
                envelope_c: 0.0,
            };
            let mut sup = f64::NEG_INFINITY;
            for &x in &xs {
                sup = sup.max(s.series(x, t)?.ln_abs);
            }
            Ok((t, sup))
        })
        .collect()
}

/// Fitted constant in `|D_t^k g| ≤ C^k k! t^{-k} e^{-1/(2t^α)}` on `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeBound {
    pub alpha: u32,
    /// `ln sup_t |R_k| t^k e^{-1/(2t^α)} / k!` for `k = 0..=k_max`.
    #[serde(with = "crate::serde_ext::extended_f64_vec")]
    pub ln_sup: Vec<f64>,
    #[serde(rename = "C")]
    pub constant: f64,
}

pub fn tychonov_derivative_bound(alpha: u32, k_max: usize, t_points: usize) -> DerivativeBound {
    let r = tychonov_g_derivatives(alpha, k_max);
    let ts = logspace(1e-2, 1.0, t_points);
    let a = alpha as i32;
    let ln_sup: Vec<f64> = r
        .iter()
        .enumerate()
        .map(|(k, rk)| {
            ts.iter()
                .map(|&t| {
                    let v = rk.eval_exact(&rational(t));
                    if v.is_zero() {
                        return f64::NEG_INFINITY;
                    }
                    ln_abs(&v) + k as f64 * t.ln() - 0.5 * t.powi(-a) - ln_factorial(k)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let constant = ln_sup.iter().enumerate().skip(1).map(|(k, l)| (l / k as f64).exp()).fold(0.0, f64::max);
    DerivativeBound { alpha, ln_sup, constant }
}

/// `R_k(t)` in double precision from the exact coefficients.
pub fn tychonov_r_value(r: &LaurentPoly, t: f64) -> f64 {
    r.eval_exact(&rational(t)).to_f64().unwrap_or(f64::NAN)
}
