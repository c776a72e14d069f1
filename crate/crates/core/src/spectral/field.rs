use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Grid, SpectralError};
use crate::numerics::CompensatedSum;

/// Real function sampled on a periodic [`Grid`], with its Fourier
/// coefficients kept alongside the nodal values.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
    coeffs: Vec<Complex64>,
    sup_norm: f64,
}

/// On-disk form: `{"grid": {"n": .., "L": ..}, "values": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FieldRecord {
    pub grid: GridRecord,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct GridRecord {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
}

fn sup(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

impl Field {
    pub fn from_samples(grid: &Grid, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.len() != grid.n_points() {
            return Err(SpectralError::LengthMismatch { expected: grid.n_points(), got: values.len() });
        }
        let coeffs = grid.forward(&values);
        Ok(Self { grid: grid.clone(), sup_norm: sup(&values), values, coeffs })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::from_samples(grid, values).expect("length matches grid")
    }

    /// Builds a field from Fourier coefficients. The coefficients are
    /// symmetrised (`c_{-k} = conj(c_k)`) so the synthesis is real, and kept
    /// as given rather than re-derived from the samples.
    pub fn from_coeffs(grid: &Grid, mut coeffs: Vec<Complex64>) -> Result<Self, SpectralError> {
        let n = grid.n_points();
        if coeffs.len() != n {
            return Err(SpectralError::LengthMismatch { expected: n, got: coeffs.len() });
        }
        coeffs[0].im = 0.0;
        coeffs[n / 2].im = 0.0;
        for i in 1..n / 2 {
            let avg = 0.5 * (coeffs[i] + coeffs[n - i].conj());
            coeffs[i] = avg;
            coeffs[n - i] = avg.conj();
        }
        let values = grid.inverse(&coeffs);
        Ok(Self { grid: grid.clone(), sup_norm: sup(&values), values, coeffs })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![0.0; grid.n_points()],
            coeffs: vec![Complex64::new(0.0, 0.0); grid.n_points()],
            sup_norm: 0.0,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn is_zero(&self) -> bool {
        self.sup_norm == 0.0
    }

    pub(crate) fn check_grid(&self, other: &Field) -> Result<(), SpectralError> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(SpectralError::GridMismatch)
        }
    }

    /// Applies a real Fourier multiplier `m(k)` (angular wavenumber).
    pub fn map_spectrum(&self, multiplier: impl Fn(f64) -> f64) -> Field {
        let coeffs: Vec<Complex64> =
            self.coeffs.iter().enumerate().map(|(i, c)| c * multiplier(self.grid.wavenumber(i))).collect();
        Field::from_coeffs(&self.grid, coeffs).expect("same grid")
    }

    pub fn scale(&self, a: f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| a * v).collect(),
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
            sup_norm: self.sup_norm * a.abs(),
        }
    }

    /// `a * self + b * other`.
    pub fn lin_comb(&self, a: f64, other: &Field, b: f64) -> Result<Field, SpectralError> {
        self.check_grid(other)?;
        let values: Vec<f64> = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x * a + y * b).collect();
        Ok(Field { grid: self.grid.clone(), sup_norm: sup(&values), values, coeffs })
    }

    /// `Σ w_i f_i`, summed mode by mode with compensation so modes absent
    /// from every term stay exactly zero.
    pub fn weighted_sum<'a>(
        grid: &Grid,
        terms: impl IntoIterator<Item = (f64, &'a Field)>,
    ) -> Result<Field, SpectralError> {
        let n = grid.n_points();
        let mut re: Vec<CompensatedSum> = (0..n).map(|_| CompensatedSum::new()).collect();
        let mut im: Vec<CompensatedSum> = (0..n).map(|_| CompensatedSum::new()).collect();
        for (w, f) in terms {
            if f.grid != *grid {
                return Err(SpectralError::GridMismatch);
            }
            for ((r, i), c) in re.iter_mut().zip(im.iter_mut()).zip(&f.coeffs) {
                r.add(w * c.re);
                i.add(w * c.im);
            }
        }
        let coeffs = re.iter().zip(&im).map(|(r, i)| Complex64::new(r.value(), i.value())).collect();
        Field::from_coeffs(grid, coeffs)
    }

    pub fn add(&self, other: &Field) -> Result<Field, SpectralError> {
        self.lin_comb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Field) -> Result<Field, SpectralError> {
        self.lin_comb(1.0, other, -1.0)
    }

    /// Zeroes every mode above the 2/3-rule cutoff.
    pub fn dealiased(&self) -> Field {
        let cut = self.grid.dealias_cutoff();
        self.truncate_modes(|m| m.abs() <= cut)
    }

    fn truncate_modes(&self, keep: impl Fn(i64) -> bool) -> Field {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if keep(self.grid.mode(i)) { *c } else { Complex64::new(0.0, 0.0) })
            .collect();
        Field::from_coeffs(&self.grid, coeffs).expect("same grid")
    }

    /// Pointwise product with 2/3-rule dealiasing of inputs and output.
    pub fn mul_dealiased(&self, other: &Field) -> Result<Field, SpectralError> {
        self.check_grid(other)?;
        let a = self.dealiased();
        let b = other.dealiased();
        let values: Vec<f64> = a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect();
        Ok(Field::from_samples(&self.grid, values)?.dealiased())
    }

    /// Drops Fourier coefficients below `rel` times the largest one.
    ///
    /// Repeated high-order differentiation amplifies transform round-off at
    /// mode `k` by `k^{2j}`; coefficients this small carry no signal.
    pub fn denoised(&self, rel: f64) -> Field {
        let peak = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        if peak == 0.0 {
            return self.clone();
        }
        let floor = rel * peak;
        let coeffs = self.coeffs.iter().map(|c| if c.norm() > floor { *c } else { Complex64::new(0.0, 0.0) }).collect();
        Field::from_coeffs(&self.grid, coeffs).expect("same grid")
    }

    /// Fraction of spectral energy above the 2/3-rule cutoff.
    pub fn tail_energy_fraction(&self) -> f64 {
        let cut = self.grid.dealias_cutoff();
        let mut total = 0.0;
        let mut tail = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = c.norm_sqr();
            total += e;
            if self.grid.mode(i).abs() > cut {
                tail += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }

    pub fn max_abs_diff(&self, other: &Field) -> Result<f64, SpectralError> {
        self.check_grid(other)?;
        Ok(self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn to_record(&self) -> FieldRecord {
        FieldRecord {
            grid: GridRecord { n: self.grid.n_points(), length: self.grid.length() },
            values: self.values.clone(),
        }
    }

    pub fn from_record(rec: &FieldRecord) -> Result<Field, SpectralError> {
        let grid = Grid::new(rec.grid.n, rec.grid.length)?;
        Field::from_samples(&grid, rec.values.clone())
    }
}
