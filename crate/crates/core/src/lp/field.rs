use std::sync::OnceLock;

use rustfft::num_complex::Complex64;

use super::fft;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Real periodic grid function with a lazily computed spectrum.
///
/// The spectrum holds Fourier coefficients normalized so that
/// `f(x) = Σ_k f̂_k e^{ik·x}`.
#[derive(Clone, Debug)]
pub struct Field {
    grid: Grid,
    samples: Vec<f64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl Field {
    pub fn zeros(grid: Grid) -> Self {
        Self::from_samples_unchecked(grid, vec![0.0; grid.len()])
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        Self::from_samples_unchecked(grid, vec![value; grid.len()])
    }

    pub fn from_samples(grid: Grid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        Ok(Self::from_samples_unchecked(grid, samples))
    }

    pub(crate) fn from_samples_unchecked(grid: Grid, samples: Vec<f64>) -> Self {
        Field {
            grid,
            samples,
            spectrum: OnceLock::new(),
        }
    }

    /// Samples `f` at the grid points.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let samples = (0..grid.len()).map(|i| f(grid.coords(i))).collect();
        Self::from_samples_unchecked(grid, samples)
    }

    /// Synthesizes samples from Fourier coefficients and keeps them cached.
    pub fn from_spectrum(grid: Grid, spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                spectrum.len()
            )));
        }
        let samples = fft::inverse_real(&spectrum, grid.points_per_axis(), grid.dim());
        let cache = OnceLock::new();
        let _ = cache.set(spectrum);
        Ok(Field {
            grid,
            samples,
            spectrum: cache,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum
            .get_or_init(|| fft::forward_real(&self.samples, self.grid.points_per_axis(), self.grid.dim()))
    }

    pub fn ensure_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Applies a Fourier multiplier given as a function of the flat index.
    pub fn apply_multiplier(&self, mult: impl Fn(usize) -> Complex64) -> Field {
        let spec: Vec<Complex64> = self.spectrum().iter().enumerate().map(|(i, &c)| mult(i) * c).collect();
        Field::from_spectrum(self.grid, spec).expect("spectrum length preserved")
    }

    /// Applies a real Fourier multiplier table (one entry per lattice point).
    pub fn apply_table(&self, table: &[f64]) -> Field {
        debug_assert_eq!(table.len(), self.grid.len());
        let spec: Vec<Complex64> = self.spectrum().iter().zip(table).map(|(&c, &w)| c * w).collect();
        Field::from_spectrum(self.grid, spec).expect("spectrum length preserved")
    }

    /// 2/3-rule truncation.
    pub fn dealiased(&self) -> Field {
        let grid = self.grid;
        let spec: Vec<Complex64> = self
            .spectrum()
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if grid.is_resolved(i) {
                    c
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Field::from_spectrum(grid, spec).expect("spectrum length preserved")
    }

    /// Pointwise product without truncation.
    pub fn mul_raw(&self, other: &Field) -> Result<Field> {
        self.ensure_same_grid(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect();
        Ok(Field::from_samples_unchecked(self.grid, samples))
    }

    /// Pointwise product followed by 2/3-rule truncation.
    pub fn mul(&self, other: &Field) -> Result<Field> {
        Ok(self.mul_raw(other)?.dealiased())
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.axpy(-1.0, other)
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Field) -> Result<Field> {
        self.ensure_same_grid(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a + alpha * b)
            .collect();
        Ok(Field::from_samples_unchecked(self.grid, samples))
    }

    pub fn scale(&self, alpha: f64) -> Field {
        Field::from_samples_unchecked(self.grid, self.samples.iter().map(|a| alpha * a).collect())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field::from_samples_unchecked(self.grid, self.samples.iter().map(|&a| f(a)).collect())
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Spectral interpolation onto a grid with the same dimension and
    /// period. Modes that do not fit are dropped; the Nyquist mode of the
    /// coarser grid is split symmetrically.
    pub fn resample(&self, target: Grid) -> Result<Field> {
        if target.dim() != self.grid.dim() || target.period() != self.grid.period() {
            return Err(Error::GridMismatch);
        }
        let src = self.spectrum();
        let mut out = vec![Complex64::new(0.0, 0.0); target.len()];
        let n_src = self.grid.points_per_axis() as i64;
        let n_dst = target.points_per_axis() as i64;
        let limit = n_src.min(n_dst) / 2;
        let dim = self.grid.dim();
        for (i, &c) in src.iter().enumerate() {
            let k = self.grid.signed_multi_index(i);
            if k[..dim].iter().any(|v| v.abs() > limit) {
                continue;
            }
            if n_dst < n_src {
                // Folding: both ±limit land on the target Nyquist index.
                let mut idx = [0usize; 3];
                for a in 0..dim {
                    idx[a] = k[a].rem_euclid(n_dst) as usize;
                }
                out[target.flat_index(idx)] += c;
                continue;
            }
            // Splitting: a source Nyquist coefficient is shared between ±limit.
            let edges: Vec<usize> = (0..dim).filter(|&a| k[a].abs() == limit).collect();
            let copies = 1usize << edges.len();
            let weight = 1.0 / copies as f64;
            for mask in 0..copies {
                let mut idx = [0usize; 3];
                for a in 0..dim {
                    let mut v = k[a];
                    if let Some(bit) = edges.iter().position(|&e| e == a) {
                        if mask >> bit & 1 == 1 {
                            v = -v;
                        }
                    }
                    idx[a] = v.rem_euclid(n_dst) as usize;
                }
                out[target.flat_index(idx)] += c * weight;
            }
        }
        Field::from_spectrum(target, out)
    }
}

/// `dim` scalar components on a shared grid.
#[derive(Clone, Debug)]
pub struct VectorField {
    components: Vec<Field>,
}

impl VectorField {
    pub fn new(components: Vec<Field>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidGrid("vector field needs components".into()))?;
        for c in &components[1..] {
            first.ensure_same_grid(c)?;
        }
        Ok(VectorField { components })
    }

    pub fn zeros(grid: Grid) -> Self {
        VectorField {
            components: (0..grid.dim()).map(|_| Field::zeros(grid)).collect(),
        }
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    pub fn components(&self) -> &[Field] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Field {
        &self.components[i]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn into_components(self) -> Vec<Field> {
        self.components
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> Field {
        let grid = *self.grid();
        let samples = (0..grid.len())
            .map(|i| {
                self.components
                    .iter()
                    .map(|c| c.samples()[i].powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        Field::from_samples_unchecked(grid, samples)
    }

    pub fn max_abs(&self) -> f64 {
        self.magnitude().max_abs()
    }

    pub fn map_components(&self, f: impl Fn(&Field) -> Field) -> VectorField {
        VectorField {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch);
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField { components })
    }

    /// `Σ_j self_j · other_j`, each product truncated.
    pub fn dot(&self, other: &VectorField) -> Result<Field> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch);
        }
        let grid = *self.grid();
        let mut acc = vec![0.0; grid.len()];
        for (a, b) in self.components.iter().zip(&other.components) {
            a.ensure_same_grid(b)?;
            for (s, (x, y)) in acc.iter_mut().zip(a.samples().iter().zip(b.samples())) {
                *s += x * y;
            }
        }
        Ok(Field::from_samples_unchecked(grid, acc).dealiased())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn spectrum_of_cosine() {
        let g = Grid::new(1, 16, 2.0 * PI).unwrap();
        let f = Field::from_fn(g, |x| (3.0 * x[0]).cos());
        let s = f.spectrum();
        assert!((s[3].re - 0.5).abs() < 1e-14);
        assert!((s[13].re - 0.5).abs() < 1e-14);
        assert!(s[0].norm() < 1e-14);
    }

    #[test]
    fn from_spectrum_reproduces_samples() {
        let g = Grid::new(2, 16, 3.0).unwrap();
        let f = Field::from_fn(g, |x| (2.0 * PI * x[0] / 3.0).sin() * (x[1] * 2.0 * PI / 3.0).cos());
        let back = Field::from_spectrum(g, f.spectrum().to_vec()).unwrap();
        let scale = f.max_abs();
        for (a, b) in f.samples().iter().zip(back.samples()) {
            assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn hermitian_spectrum() {
        let g = Grid::new(2, 8, 2.0 * PI).unwrap();
        let f = Field::from_fn(g, |x| (x[0] + 2.0 * x[1]).sin() + 0.3 * (x[1]).cos() + 1.0);
        let s = f.spectrum();
        for i in 0..g.len() {
            let k = g.signed_multi_index(i);
            let j = g.flat_index([(-k[0]).rem_euclid(8) as usize, (-k[1]).rem_euclid(8) as usize, 0]);
            assert!((s[i] - s[j].conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn resample_preserves_trig_polynomial() {
        let coarse = Grid::new(2, 16, 2.0 * PI).unwrap();
        let fine = Grid::new(2, 32, 2.0 * PI).unwrap();
        let f = |x: [f64; 3]| (2.0 * x[0] - x[1]).cos() + 0.25 * (5.0 * x[1]).sin();
        let up = Field::from_fn(coarse, f).resample(fine).unwrap();
        let direct = Field::from_fn(fine, f);
        for (a, b) in up.samples().iter().zip(direct.samples()) {
            assert!((a - b).abs() < 1e-13);
        }
        let down = direct.resample(coarse).unwrap();
        let coarse_direct = Field::from_fn(coarse, f);
        for (a, b) in down.samples().iter().zip(coarse_direct.samples()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = Field::zeros(Grid::new(1, 8, 1.0).unwrap());
        let b = Field::zeros(Grid::new(1, 16, 1.0).unwrap());
        assert!(matches!(a.mul(&b), Err(Error::GridMismatch)));
    }
}
