use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{leray_project, spectral_gradient, Field, Grid, VectorField};

use super::params::PhysicalParams;
use super::state::State;

/// Initial-condition families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IcKind {
    /// `m` and `u` random in the band.
    Random,
    /// `m = 0`, `u` random and divergence free.
    Vortex,
    /// `m` random, `u = ∇φ` with `φ` random.
    Irrotational,
    /// `m = A cos(k₁x)`, and `u_x = A sin(k₁y)` when `N ≥ 2`.
    AcousticShear,
    /// `m ≡ A`, `u ≡ 0`.
    Uniform,
}

fn default_band() -> [f64; 2] {
    [1.0, 4.0]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcSpec {
    pub kind: IcKind,
    pub amplitude: f64,
    /// Radial band `[k_lo, k_hi]` in wavenumber units.
    #[serde(default = "default_band")]
    pub band: [f64; 2],
    #[serde(default)]
    pub seed: u64,
}

impl IcSpec {
    pub fn validate(&self, grid: &Grid) -> Result<()> {
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "amplitude must be non-negative, got {}",
                self.amplitude
            )));
        }
        if matches!(self.kind, IcKind::Random | IcKind::Vortex | IcKind::Irrotational) {
            check_band(grid, self.band)?;
        }
        if self.kind == IcKind::Vortex && grid.dim() < 2 {
            return Err(Error::UnsupportedDimension {
                required: "2 or 3",
                got: grid.dim(),
            });
        }
        Ok(())
    }

    pub fn build(&self, grid: &Grid, params: &PhysicalParams) -> Result<State> {
        self.validate(grid)?;
        let amp = self.amplitude;
        let branch = params.branch();
        match self.kind {
            IcKind::Random => random_band_limited_ic(grid, amp, self.band, self.seed, params),
            IcKind::Vortex => vortex_ic(grid, amp, self.band, self.seed, params),
            IcKind::Irrotational => irrotational_ic(grid, amp, self.band, self.seed, params),
            IcKind::AcousticShear => {
                let k1 = grid.wavenumber_unit();
                let m = Field::from_fn(*grid, |x| amp * (k1 * x[0]).cos());
                let mut comps = vec![Field::zeros(*grid); grid.dim()];
                if grid.dim() >= 2 {
                    comps[0] = Field::from_fn(*grid, |x| amp * (k1 * x[1]).sin());
                }
                State::new(m, VectorField::new(comps)?, branch)
            }
            IcKind::Uniform => State::new(Field::constant(*grid, amp), VectorField::zeros(*grid), branch),
        }
    }
}

fn check_band(grid: &Grid, band: [f64; 2]) -> Result<()> {
    let [lo, hi] = band;
    let limit = 2.0 / 3.0 * grid.k_max();
    if !(lo >= 0.0 && lo <= hi && hi <= limit * (1.0 + 1e-12)) {
        return Err(Error::InvalidConfig(format!(
            "band [{lo}, {hi}] must satisfy 0 <= lo <= hi <= {limit:.6}"
        )));
    }
    Ok(())
}

/// White noise filtered to `lo ≤ |k| ≤ hi` and the 2/3-rule mask.
fn band_noise(grid: &Grid, band: [f64; 2], rng: &mut ChaCha8Rng) -> Result<Field> {
    let noise: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let f = Field::from_samples(*grid, noise)?;
    let [lo, hi] = band;
    let eps = 1e-12 * grid.k_max();
    let spec: Vec<Complex64> = f
        .spectrum()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let k = grid.k_norm(i);
            if grid.is_resolved(i) && k >= lo - eps && k <= hi + eps && !has_nyquist(grid, i) {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Field::from_spectrum(*grid, spec)
}

/// Seeded mean-zero random field with spectrum in the band, scaled to `|f|∞ = amplitude`.
pub fn band_limited_field(grid: &Grid, band: [f64; 2], amplitude: f64, seed: u64) -> Result<Field> {
    check_band(grid, band)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rescale(band_noise(grid, band, &mut rng)?, amplitude)
}

fn has_nyquist(grid: &Grid, i: usize) -> bool {
    (0..grid.dim()).any(|a| grid.is_nyquist_along(i, a))
}

fn rescale(f: Field, amplitude: f64) -> Result<Field> {
    if amplitude == 0.0 {
        return Ok(Field::zeros(*f.grid()));
    }
    let sup = f.max_abs();
    if !(sup > 0.0) {
        return Err(Error::InvalidConfig("band contains no resolved lattice modes".into()));
    }
    Ok(f.scale(amplitude / sup))
}

fn rescale_vector(v: VectorField, amplitude: f64) -> Result<VectorField> {
    if amplitude == 0.0 {
        return Ok(VectorField::zeros(*v.grid()));
    }
    let sup = v.max_abs();
    if !(sup > 0.0) {
        return Err(Error::InvalidConfig("band contains no resolved lattice modes".into()));
    }
    Ok(v.map_components(|c| c.scale(amplitude / sup)))
}

fn noise_vector(grid: &Grid, band: [f64; 2], rng: &mut ChaCha8Rng) -> Result<VectorField> {
    let comps = (0..grid.dim())
        .map(|_| band_noise(grid, band, rng))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(comps)
}

/// Seeded random state with `|m|∞ = |u|∞ = amplitude` and spectrum in the
/// annulus `band[0] ≤ |k| ≤ band[1]`.
pub fn random_band_limited_ic(
    grid: &Grid,
    amplitude: f64,
    band: [f64; 2],
    seed: u64,
    params: &PhysicalParams,
) -> Result<State> {
    check_band(grid, band)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rescale(band_noise(grid, band, &mut rng)?, amplitude)?;
    let u = rescale_vector(noise_vector(grid, band, &mut rng)?, amplitude)?;
    State::new(m, u, params.branch())
}

pub fn vortex_ic(grid: &Grid, amplitude: f64, band: [f64; 2], seed: u64, params: &PhysicalParams) -> Result<State> {
    check_band(grid, band)?;
    if grid.dim() < 2 {
        return Err(Error::UnsupportedDimension {
            required: "2 or 3",
            got: grid.dim(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = leray_project(&noise_vector(grid, band, &mut rng)?)?;
    State::new(Field::zeros(*grid), rescale_vector(u, amplitude)?, params.branch())
}

pub fn irrotational_ic(
    grid: &Grid,
    amplitude: f64,
    band: [f64; 2],
    seed: u64,
    params: &PhysicalParams,
) -> Result<State> {
    check_band(grid, band)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rescale(band_noise(grid, band, &mut rng)?, amplitude)?;
    let phi = band_noise(grid, band, &mut rng)?;
    let u = rescale_vector(spectral_gradient(&phi), amplitude)?;
    State::new(m, u, params.branch())
}
