use serde::{Deserialize, Serialize};

use super::GalleryError;
use crate::numerics::linspace;
use crate::spectral::{hermite_apply_schrodinger, HermiteBasis};

/// Basis size used by the gallery's Hermite checks.
pub const HERMITE_TRUNCATION: usize = 16;

/// Both routes for `(D² - x²)^k ψ_n = (-1)^k (2n+1)^k ψ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenResidual {
    pub n: usize,
    pub k: u32,
    /// `(-1)^k (2n+1)^k`.
    pub scale: f64,
    /// Relative residual of the coefficient-space route.
    pub diagonal: f64,
    /// Relative residual of the nodal collocation route.
    pub collocation: f64,
}

pub fn hermite_eigen_residual(n: usize, k: u32, basis: &HermiteBasis) -> Result<EigenResidual, GalleryError> {
    let nh = basis.truncation();
    if n + 2 * k as usize > nh {
        return Err(GalleryError::TruncationMargin { n, k, truncation: nh });
    }
    let scale = (-((2 * n + 1) as f64)).powi(k as i32);

    let mut coeffs = vec![0.0; nh + 1];
    coeffs[n] = 1.0;
    let mut c = coeffs.clone();
    for _ in 0..k {
        c = hermite_apply_schrodinger(basis, &c).map_err(|e| GalleryError::InvalidParameter(e.to_string()))?;
    }
    let diagonal = c.iter().zip(&coeffs).fold(0.0f64, |m, (a, b)| m.max((a - scale * b).abs())) / scale.abs();

    let psi = basis.synthesize(&coeffs);
    let d2 = basis.collocation_second_derivative();
    let mut v = psi.clone();
    for _ in 0..k {
        v = basis.apply_schrodinger_collocation(&d2, &v);
    }
    let peak = psi.amax();
    let collocation = (v - &psi * scale).amax() / (scale.abs() * peak);
    Ok(EigenResidual { n, k, scale, diagonal, collocation })
}

/// Inverse-square potential `V = A/|x|²` in `d ≥ 3` dimensions and the
/// exponent of its steady solution `|x|^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseSquareSpec {
    #[serde(rename = "A")]
    pub a: f64,
    pub d: u32,
    pub alpha_of_a: f64,
}

impl InverseSquareSpec {
    pub fn new(a: f64, d: u32) -> Result<Self, GalleryError> {
        if d < 3 {
            return Err(GalleryError::InvalidParameter(format!("dimension must be >= 3, got {d}")));
        }
        if !(a >= 0.0 && a.is_finite()) {
            return Err(GalleryError::InvalidParameter(format!("A must be >= 0, got {a}")));
        }
        let m = d as f64 - 2.0;
        let alpha_of_a = (-m + (m * m + 4.0 * a).sqrt()) / 2.0;
        Ok(Self { a, d, alpha_of_a })
    }

    /// `α(α-1) + (d-1)α - A`.
    pub fn identity_defect(&self) -> f64 {
        let al = self.alpha_of_a;
        al * (al - 1.0) + (self.d as f64 - 1.0) * al - self.a
    }
}

/// `max_r |-Δ r^α + A r^{α-2}| / r^{α-2}` over a radial grid, with the
/// radial Laplacian of `r^α` taken in closed form.
pub fn inverse_square_residual(
    spec: &InverseSquareSpec,
    r_min: f64,
    r_max: f64,
    points: usize,
) -> Result<f64, GalleryError> {
    if !(r_min > 0.0 && r_max > r_min) {
        return Err(GalleryError::InvalidParameter(format!("radial range [{r_min}, {r_max}]")));
    }
    let al = spec.alpha_of_a;
    let lap_coeff = al * (al - 1.0) + (spec.d as f64 - 1.0) * al;
    Ok(linspace(r_min, r_max, points.max(2))
        .into_iter()
        .map(|r| {
            let base = r.powf(al - 2.0);
            (-lap_coeff * base + spec.a * base).abs() / base
        })
        .fold(0.0, f64::max))
}
