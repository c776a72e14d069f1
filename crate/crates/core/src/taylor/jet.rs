use serde::{Deserialize, Serialize};

use super::TaylorError;
use crate::spectral::{Field, OperatorSpec, NOISE_FLOOR};

/// Largest admissible fraction of spectral energy above the 2/3 cutoff.
pub const RESOLUTION_THRESHOLD: f64 = 1e-8;

/// Sign of the generator used to build a jet.
///
/// A forward jet `a_{j+1} = L a_j` expands `u(t0 + s)`; a backward jet
/// `b_{j+1} = -L b_j` expands `u(t0 - s)` in powers of `s ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// The stored `a_0` is the datum with transform round-off below
/// [`NOISE_FLOOR`] removed.
#[derive(Debug, Clone)]
pub struct TaylorJet {
    base_time: f64,
    coefficients: Vec<Field>,
    norms: Vec<f64>,
    operator: OperatorSpec,
    direction: Direction,
}

impl TaylorJet {
    pub fn base_time(&self) -> f64 {
        self.base_time
    }

    pub fn coefficients(&self) -> &[Field] {
        &self.coefficients
    }

    /// Sup-norms `‖a_j‖_∞`.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn operator(&self) -> &OperatorSpec {
        &self.operator
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub(crate) fn set_base_time(&mut self, t: f64) {
        self.base_time = t;
    }

    /// Highest coefficient index `J`.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }
}

/// Forward jet at base time 0.
pub fn iterate(op: &OperatorSpec, a0: &Field, order: usize) -> Result<TaylorJet, TaylorError> {
    iterate_directed(op, a0, order, Direction::Forward, 0.0)
}

pub fn iterate_directed(
    op: &OperatorSpec,
    a0: &Field,
    order: usize,
    direction: Direction,
    base_time: f64,
) -> Result<TaylorJet, TaylorError> {
    if order < 1 {
        return Err(TaylorError::JetTooShort { min: 2, got: order + 1 });
    }
    let fraction = a0.tail_energy_fraction();
    if fraction > RESOLUTION_THRESHOLD {
        return Err(TaylorError::Unresolved { fraction });
    }
    let mut coefficients = Vec::with_capacity(order + 1);
    coefficients.push(a0.denoised(NOISE_FLOOR));
    for j in 0..order {
        let next = op.apply(&coefficients[j])?;
        let next = match direction {
            Direction::Forward => next,
            Direction::Backward => next.scale(-1.0),
        };
        coefficients.push(next);
    }
    let norms = coefficients.iter().map(Field::sup_norm).collect();
    Ok(TaylorJet { base_time, coefficients, norms, operator: op.clone(), direction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn sine_jets_alternate() {
        let g = Grid::standard();
        let s = Field::from_fn(&g, f64::sin);
        for op in [OperatorSpec::Laplacian, OperatorSpec::NegBiharmonic] {
            let jet = iterate(&op, &s, 5).unwrap();
            for (j, a) in jet.coefficients().iter().enumerate() {
                let expect = s.scale(if j % 2 == 0 { 1.0 } else { -1.0 });
                assert!(a.max_abs_diff(&expect).unwrap() < 1e-13);
                assert!((jet.norms()[j] - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn thirty_two_mode_norms_grow_like_top_mode() {
        let g = Grid::standard();
        let a0 = Field::from_fn(&g, |x| (1..=32).map(|m| (m as f64 * x).sin() / (m * m) as f64).sum());
        let jet = iterate(&OperatorSpec::Laplacian, &a0, 20).unwrap();
        // direct spectral oracle: sup_x |Σ (-m²)^j m^-2 sin(mx)| on the grid
        for j in [10usize, 15, 20] {
            let oracle = g
                .nodes()
                .iter()
                .map(|&x| {
                    (1..=32)
                        .map(|m| {
                            let mf = m as f64;
                            (-mf * mf).powi(j as i32) / (mf * mf) * (mf * x).sin()
                        })
                        .sum::<f64>()
                        .abs()
                })
                .fold(0.0, f64::max);
            let rel = (jet.norms()[j] - oracle).abs() / oracle;
            assert!(rel < 1e-10, "j={j} rel={rel}");
        }
        let rate = (jet.norms()[20] / jet.norms()[15]).ln() / 5.0;
        assert!((rate - 1024f64.ln()).abs() < 0.02 * 1024f64.ln(), "{rate}");
    }

    #[test]
    fn backward_jet_negates_generator() {
        let g = Grid::standard();
        let s = Field::from_fn(&g, |x| (2.0 * x).cos());
        let jet = iterate_directed(&OperatorSpec::Laplacian, &s, 3, Direction::Backward, 1.0).unwrap();
        assert!(jet.coefficients()[1].max_abs_diff(&s.scale(4.0)).unwrap() < 1e-12);
        assert_eq!(jet.base_time(), 1.0);
    }

    #[test]
    fn unresolved_datum_is_rejected() {
        let g = Grid::standard();
        let rough = Field::from_fn(&g, |x| (120.0 * x).sin());
        assert!(matches!(iterate(&OperatorSpec::Laplacian, &rough, 4), Err(TaylorError::Unresolved { .. })));
        let s = Field::from_fn(&g, f64::sin);
        assert!(matches!(iterate(&OperatorSpec::Laplacian, &s, 0), Err(TaylorError::JetTooShort { .. })));
    }

    #[test]
    fn scaling_scales_norms_exactly() {
        let g = Grid::standard();
        let a0 = Field::from_fn(&g, |x| x.sin() + 0.25 * (4.0 * x).cos());
        let base = iterate(&OperatorSpec::NegBiharmonic, &a0, 8).unwrap();
        let scaled = iterate(&OperatorSpec::NegBiharmonic, &a0.scale(8.0), 8).unwrap();
        for (a, b) in base.norms().iter().zip(scaled.norms()) {
            assert_eq!(8.0 * a, *b);
        }
    }
}
