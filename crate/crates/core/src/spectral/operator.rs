use super::{Field, SpectralError, NOISE_FLOOR};

/// Spatial generator of a linear parabolic equation `∂_t u = L u`.
#[derive(Debug, Clone)]
pub enum OperatorSpec {
    /// `Δ`
    Laplacian,
    /// `-Δ²`, the generator of `∂_t u + Δ²u = 0`.
    NegBiharmonic,
    /// `Δ - V` for a periodic potential sampled on the same grid.
    Schrodinger { potential: Field },
}

impl OperatorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorSpec::Laplacian => "laplacian",
            OperatorSpec::NegBiharmonic => "neg_biharmonic",
            OperatorSpec::Schrodinger { .. } => "schrodinger",
        }
    }

    /// Fourier symbol when the operator is a pure multiplier.
    pub fn symbol(&self) -> Option<fn(f64) -> f64> {
        match self {
            OperatorSpec::Laplacian => Some(|k| -k * k),
            OperatorSpec::NegBiharmonic => Some(|k| -(k * k) * (k * k)),
            OperatorSpec::Schrodinger { .. } => None,
        }
    }

    /// Applies the operator. Input coefficients below [`NOISE_FLOOR`] times
    /// the largest one are treated as transform round-off and dropped.
    pub fn apply(&self, f: &Field) -> Result<Field, SpectralError> {
        let f = &f.denoised(NOISE_FLOOR);
        match self {
            OperatorSpec::Laplacian => Ok(f.map_spectrum(|k| -k * k)),
            OperatorSpec::NegBiharmonic => Ok(f.map_spectrum(|k| -(k * k) * (k * k))),
            OperatorSpec::Schrodinger { potential } => {
                potential.check_grid(f)?;
                let lap = f.map_spectrum(|k| -k * k);
                let vf = potential.mul_dealiased(f)?;
                lap.sub(&vf)
            }
        }
    }
}
