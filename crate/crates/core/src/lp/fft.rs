//! Multi-dimensional complex FFT on row-major cubes, built from 1-D
//! transforms along each axis. Plans are cached process-wide.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);
type PlanCache = Mutex<(FftPlanner<f64>, HashMap<usize, PlanPair>)>;

fn plans(n: usize) -> PlanPair {
    static CACHE: OnceLock<PlanCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    let (planner, map) = &mut *guard;
    if let Some(pair) = map.get(&n) {
        return pair.clone();
    }
    let pair = (planner.plan_fft_forward(n), planner.plan_fft_inverse(n));
    map.insert(n, pair.clone());
    pair
}

/// Unnormalized in-place transform of an `n^dim` cube.
pub(crate) fn transform(data: &mut [Complex64], n: usize, dim: usize, inverse: bool) {
    debug_assert_eq!(data.len(), n.pow(dim as u32));
    let (fwd, inv) = plans(n);
    let plan = if inverse { inv } else { fwd };
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    let total = data.len();
    let mut lines = Vec::new();
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        if stride == 1 {
            plan.process_with_scratch(data, &mut scratch);
            continue;
        }
        let block = n * stride;
        lines.resize(block, Complex64::new(0.0, 0.0));
        for start in (0..total).step_by(block) {
            let chunk = &mut data[start..start + block];
            for s in 0..stride {
                for j in 0..n {
                    lines[s * n + j] = chunk[j * stride + s];
                }
            }
            plan.process_with_scratch(&mut lines, &mut scratch);
            for s in 0..stride {
                for j in 0..n {
                    chunk[j * stride + s] = lines[s * n + j];
                }
            }
        }
    }
}

/// Fourier coefficients `f̂_k` with `f(x) = Σ f̂_k e^{ik·x}`.
pub(crate) fn forward_real(samples: &[f64], n: usize, dim: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    transform(&mut buf, n, dim, false);
    let scale = 1.0 / buf.len() as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Real part of the synthesis `Σ f̂_k e^{ik·x}`.
pub(crate) fn inverse_real(spectrum: &[Complex64], n: usize, dim: usize) -> Vec<f64> {
    let mut buf = spectrum.to_vec();
    transform(&mut buf, n, dim, true);
    buf.into_iter().map(|c| c.re).collect()
}
