use rustfft::num_complex::Complex64;

use super::field::{Field, VectorField};
use crate::error::{Error, Result};

/// `∂_axis f` as the multiplier `i k_axis`; the Nyquist mode along `axis`
/// is dropped so the result stays real.
pub fn partial(f: &Field, axis: usize) -> Field {
    let grid = *f.grid();
    f.apply_multiplier(|i| {
        if grid.is_nyquist_along(i, axis) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, grid.wavevector(i)[axis])
        }
    })
}

pub fn spectral_gradient(f: &Field) -> VectorField {
    let comps = (0..f.grid().dim()).map(|a| partial(f, a)).collect();
    VectorField::new(comps).expect("components share one grid")
}

pub fn divergence(u: &VectorField) -> Result<Field> {
    let grid = *u.grid();
    if u.len() != grid.dim() {
        return Err(Error::InvalidParams(format!(
            "divergence needs {} components, got {}",
            grid.dim(),
            u.len()
        )));
    }
    let mut spec = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (axis, c) in u.components().iter().enumerate() {
        for (i, (acc, v)) in spec.iter_mut().zip(c.spectrum()).enumerate() {
            if !grid.is_nyquist_along(i, axis) {
                *acc += Complex64::new(0.0, grid.wavevector(i)[axis]) * v;
            }
        }
    }
    Field::from_spectrum(grid, spec)
}

/// Planar curl `∂_x u_y - ∂_y u_x`.
pub fn curl_2d(u: &VectorField) -> Result<Field> {
    if u.grid().dim() != 2 || u.len() != 2 {
        return Err(Error::UnsupportedDimension {
            required: "2",
            got: u.grid().dim(),
        });
    }
    partial(u.component(1), 0).sub(&partial(u.component(0), 1))
}

pub fn curl_3d(u: &VectorField) -> Result<VectorField> {
    if u.grid().dim() != 3 || u.len() != 3 {
        return Err(Error::UnsupportedDimension {
            required: "3",
            got: u.grid().dim(),
        });
    }
    let d = |c: usize, a: usize| partial(u.component(c), a);
    VectorField::new(vec![
        d(2, 1).sub(&d(1, 2))?,
        d(0, 2).sub(&d(2, 0))?,
        d(1, 0).sub(&d(0, 1))?,
    ])
}

/// Curl in two or three dimensions.
#[derive(Clone, Debug)]
pub enum Curl {
    Planar(Field),
    Spatial(VectorField),
}

impl Curl {
    pub fn fields(&self) -> Vec<&Field> {
        match self {
            Curl::Planar(f) => vec![f],
            Curl::Spatial(v) => v.components().iter().collect(),
        }
    }
}

pub fn curl(u: &VectorField) -> Result<Curl> {
    match u.grid().dim() {
        2 => Ok(Curl::Planar(curl_2d(u)?)),
        3 => Ok(Curl::Spatial(curl_3d(u)?)),
        got => Err(Error::UnsupportedDimension {
            required: "2 or 3",
            got,
        }),
    }
}

/// Helmholtz projection onto divergence-free fields (mean kept).
pub fn leray_project(u: &VectorField) -> Result<VectorField> {
    let grid = *u.grid();
    let dim = grid.dim();
    let specs: Vec<&[Complex64]> = u.components().iter().map(|c| c.spectrum()).collect();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; dim];
    for i in 0..grid.len() {
        let k = grid.wavevector(i);
        let k2: f64 = k[..dim].iter().map(|x| x * x).sum();
        let dot: Complex64 = (0..dim).map(|a| specs[a][i] * k[a]).sum();
        for a in 0..dim {
            out[a][i] = if k2 > 0.0 {
                specs[a][i] - dot * (k[a] / k2)
            } else {
                specs[a][i]
            };
        }
    }
    let comps = out
        .into_iter()
        .map(|s| Field::from_spectrum(grid, s))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(comps)
}
