//! Hermite functions `ψ_n(x) = (2^n n! √π)^{-1/2} e^{-x²/2} H_n(x)` on
//! Gauss–Hermite nodes.
//!
//! `(D² - x²)` is diagonal in this basis, which is how the unbounded
//! potential `V = x²` is handled (it cannot live on a periodic grid).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;

use super::SpectralError;
use crate::exact::ExactPoly;

/// Physicists' Hermite polynomial `H_n` with exact integer coefficients.
pub fn physicists_hermite(n: u32) -> ExactPoly {
    let two_t = ExactPoly::from_ints(&[0, 2]);
    let mut prev = ExactPoly::one();
    if n == 0 {
        return prev;
    }
    let mut cur = two_t.clone();
    for m in 1..n {
        let c = BigRational::from_integer(BigInt::from(2 * m));
        let next = &(&two_t * &cur) - &prev.scale(&c);
        prev = cur;
        cur = next;
    }
    cur
}

/// `[ψ_0(x), …, ψ_{n_max}(x)]` by the normalised three-term recurrence.
pub fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp());
    if n_max >= 1 {
        out.push(std::f64::consts::SQRT_2 * x * out[0]);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Truncated Hermite-function basis `ψ_0..ψ_{N_h}` collocated on the
/// `N_h + 1` Gauss–Hermite nodes.
#[derive(Debug, Clone)]
pub struct HermiteBasis {
    truncation: usize,
    nodes: Vec<f64>,
    /// Quadrature weights for plain `dx` (the Gaussian is inside the ψ's).
    weights: Vec<f64>,
    /// `basis[(i, n)] = ψ_n(x_i)`
    basis: DMatrix<f64>,
}

impl HermiteBasis {
    pub fn new(truncation: usize) -> Self {
        let q = truncation + 1;
        // Golub–Welsch: eigenvalues of the Jacobi matrix are the nodes
        let jacobi =
            DMatrix::from_fn(q, q, |i, j| if i + 1 == j || j + 1 == i { (i.max(j) as f64 / 2.0).sqrt() } else { 0.0 });
        let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.total_cmp(b));

        let rows: Vec<Vec<f64>> = nodes.iter().map(|&x| hermite_functions(truncation, x)).collect();
        // Christoffel form of the Gauss weights, already multiplied by e^{x²}
        let weights = rows.iter().map(|r| 1.0 / r.iter().map(|v| v * v).sum::<f64>()).collect();
        let basis = DMatrix::from_fn(q, q, |i, n| rows[i][n]);
        Self { truncation, nodes, weights, basis }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Max deviation of the discrete Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let w = DMatrix::from_diagonal(&DVector::from_column_slice(&self.weights));
        let gram = self.basis.transpose() * w * &self.basis;
        let q = self.truncation + 1;
        (gram - DMatrix::identity(q, q)).amax()
    }

    /// Nodal values → expansion coefficients.
    pub fn project(&self, values: &[f64]) -> DVector<f64> {
        let wv = DVector::from_iterator(values.len(), values.iter().zip(&self.weights).map(|(v, w)| v * w));
        self.basis.transpose() * wv
    }

    /// Expansion coefficients → nodal values.
    pub fn synthesize(&self, coeffs: &[f64]) -> DVector<f64> {
        let mut c = DVector::zeros(self.truncation + 1);
        for (i, v) in coeffs.iter().enumerate() {
            c[i] = *v;
        }
        &self.basis * c
    }

    /// `D` in coefficient space from the ladder relation
    /// `ψ_n' = √(n/2) ψ_{n-1} - √((n+1)/2) ψ_{n+1}`, truncated at `N_h`.
    pub fn derivative_coeff_matrix(&self) -> DMatrix<f64> {
        let q = self.truncation + 1;
        let mut d = DMatrix::zeros(q, q);
        for n in 0..q {
            if n >= 1 {
                d[(n - 1, n)] = (n as f64 / 2.0).sqrt();
            }
            if n + 1 < q {
                d[(n + 1, n)] = -((n as f64 + 1.0) / 2.0).sqrt();
            }
        }
        d
    }

    /// Nodal second-derivative matrix `B D² B^{-1}`, with `B^{-1} = Bᵀ W`.
    pub fn collocation_second_derivative(&self) -> DMatrix<f64> {
        let d = self.derivative_coeff_matrix();
        let w = DMatrix::from_diagonal(&DVector::from_column_slice(&self.weights));
        &self.basis * (&d * &d) * self.basis.transpose() * w
    }

    /// `(D² - x²)` applied to nodal values through the collocation matrix.
    pub fn apply_schrodinger_collocation(&self, d2: &DMatrix<f64>, values: &DVector<f64>) -> DVector<f64> {
        let mut out = d2 * values;
        for (i, x) in self.nodes.iter().enumerate() {
            out[i] -= x * x * values[i];
        }
        out
    }
}

/// `(D² - x²)` in the Hermite basis: `c_n ↦ -(2n+1) c_n`.
pub fn hermite_apply_schrodinger(basis: &HermiteBasis, coeffs: &[f64]) -> Result<Vec<f64>, SpectralError> {
    if coeffs.len() > basis.truncation() + 1 {
        return Err(SpectralError::HermiteTruncation { index: coeffs.len() - 1, truncation: basis.truncation() });
    }
    Ok(coeffs.iter().enumerate().map(|(n, c)| -((2 * n + 1) as f64) * c).collect())
}
