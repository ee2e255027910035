//! Reference implementations used as test oracles. Nothing here calls into
//! the library's spectral code: transforms, profiles, products, derivatives
//! and norms are all recomputed from their definitions.

#![allow(dead_code)]

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Periodic lattice `[0, L)^dim` with `n` points per axis, row-major.
#[derive(Clone, Copy, Debug)]
pub struct Lattice {
    pub dim: usize,
    pub n: usize,
    pub period: f64,
    /// Use the `O(len²)` direct sum instead of separable FFTs.
    pub naive: bool,
}

impl Lattice {
    pub fn new(dim: usize, n: usize, period: f64) -> Self {
        Lattice {
            dim,
            n,
            period,
            naive: false,
        }
    }

    pub fn naive(dim: usize, n: usize, period: f64) -> Self {
        Lattice {
            dim,
            n,
            period,
            naive: true,
        }
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    fn digits(&self, flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        let mut r = flat;
        for a in (0..self.dim).rev() {
            out[a] = r % self.n;
            r /= self.n;
        }
        out
    }

    pub fn signed(&self, flat: usize) -> Vec<i64> {
        let half = (self.n / 2) as i64;
        self.digits(flat)
            .into_iter()
            .map(|j| {
                let j = j as i64;
                if j >= half {
                    j - self.n as i64
                } else {
                    j
                }
            })
            .collect()
    }

    pub fn k(&self, flat: usize) -> Vec<f64> {
        let unit = 2.0 * PI / self.period;
        self.signed(flat).into_iter().map(|j| j as f64 * unit).collect()
    }

    pub fn k_abs(&self, flat: usize) -> f64 {
        self.k(flat).iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn x(&self, flat: usize) -> Vec<f64> {
        let h = self.period / self.n as f64;
        self.digits(flat).into_iter().map(|j| j as f64 * h).collect()
    }

    pub fn cell(&self) -> f64 {
        (self.period / self.n as f64).powi(self.dim as i32)
    }

    pub fn k_max(&self) -> f64 {
        PI * self.n as f64 / self.period
    }

    /// Largest shell index whose inner edge `2^q·3/4` lies below `k_max`.
    pub fn top_shell(&self) -> i32 {
        let mut q = -1;
        while 0.75 * 2f64.powi(q + 1) <= self.k_max() {
            q += 1;
        }
        q + 1
    }

    pub fn shells(&self) -> Vec<i32> {
        (-1..=self.top_shell()).collect()
    }

    fn nyquist(&self, flat: usize, axis: usize) -> bool {
        self.digits(flat)[axis] == self.n / 2
    }

    fn kept(&self, flat: usize) -> bool {
        let cut = (self.n / 3) as i64;
        self.signed(flat).iter().all(|j| j.abs() <= cut)
    }

    /// Coefficients `c_k` with `f(x) = Σ c_k e^{ik·x}`.
    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        let z: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut out = if self.naive {
            self.direct(&z, -1.0)
        } else {
            self.separable(z, false)
        };
        let scale = 1.0 / self.len() as f64;
        out.iter_mut().for_each(|c| *c *= scale);
        out
    }

    pub fn inverse(&self, c: &[Complex64]) -> Vec<f64> {
        let z = if self.naive {
            self.direct(c, 1.0)
        } else {
            self.separable(c.to_vec(), true)
        };
        z.into_iter().map(|v| v.re).collect()
    }

    fn direct(&self, z: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = self.len();
        let idx: Vec<Vec<usize>> = (0..n).map(|i| self.digits(i)).collect();
        (0..n)
            .map(|a| {
                let mut acc = Complex64::new(0.0, 0.0);
                for b in 0..n {
                    let phase: usize = idx[a].iter().zip(&idx[b]).map(|(p, q)| p * q).sum();
                    let theta = sign * 2.0 * PI * (phase % self.n) as f64 / self.n as f64;
                    acc += z[b] * Complex64::from_polar(1.0, theta);
                }
                acc
            })
            .collect()
    }

    fn separable(&self, mut z: Vec<Complex64>, inverse: bool) -> Vec<Complex64> {
        let mut planner = FftPlanner::<f64>::new();
        let plan = if inverse {
            planner.plan_fft_inverse(self.n)
        } else {
            planner.plan_fft_forward(self.n)
        };
        let n = self.n;
        let total = self.len();
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            for start in 0..total {
                if !(start / stride).is_multiple_of(n) {
                    continue;
                }
                for j in 0..n {
                    line[j] = z[start + j * stride];
                }
                plan.process(&mut line);
                for j in 0..n {
                    z[start + j * stride] = line[j];
                }
            }
        }
        z
    }

    pub fn sample(&self, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        (0..self.len()).map(|i| f(&self.x(i))).collect()
    }

    fn multiply(&self, f: &[f64], m: impl Fn(usize) -> Complex64) -> Vec<f64> {
        let c: Vec<Complex64> = self.forward(f).into_iter().enumerate().map(|(i, v)| v * m(i)).collect();
        self.inverse(&c)
    }

    pub fn block(&self, f: &[f64], q: i32) -> Vec<f64> {
        self.multiply(f, |i| Complex64::new(shell(q, self.k_abs(i)), 0.0))
    }

    /// `S_q f = Σ_{p ≤ q-1} Δ_p f`, summed block by block.
    pub fn low(&self, f: &[f64], q: i32) -> Vec<f64> {
        let mut acc = vec![0.0; f.len()];
        for p in -1..q {
            add_into(&mut acc, &self.block(f, p));
        }
        acc
    }

    pub fn truncate(&self, f: &[f64]) -> Vec<f64> {
        self.multiply(f, |i| {
            if self.kept(i) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Pointwise product followed by 2/3-rule truncation.
    pub fn product(&self, f: &[f64], g: &[f64]) -> Vec<f64> {
        let raw: Vec<f64> = f.iter().zip(g).map(|(a, b)| a * b).collect();
        self.truncate(&raw)
    }

    pub fn d(&self, f: &[f64], axis: usize) -> Vec<f64> {
        self.multiply(f, |i| {
            if self.nyquist(i, axis) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, self.k(i)[axis])
            }
        })
    }

    /// `L^p` norm of the pointwise Euclidean magnitude of a tuple.
    pub fn norm(&self, fields: &[Vec<f64>], p: f64) -> f64 {
        let mags = (0..self.len()).map(|i| fields.iter().map(|f| f[i] * f[i]).sum::<f64>().sqrt());
        if p.is_infinite() {
            return mags.fold(0.0, f64::max);
        }
        (mags.map(|v| v.powf(p)).sum::<f64>() * self.cell()).powf(1.0 / p)
    }

    /// Dyadic `B^s_{2,r}` norm of a tuple, blocks measured in physical space.
    pub fn besov(&self, fields: &[Vec<f64>], s: f64, r: f64) -> f64 {
        let terms: Vec<f64> = self
            .shells()
            .into_iter()
            .map(|q| {
                let blocks: Vec<Vec<f64>> = fields.iter().map(|f| self.block(f, q)).collect();
                2f64.powf(q as f64 * s) * self.norm(&blocks, 2.0)
            })
            .collect();
        if r == 1.0 {
            terms.iter().sum()
        } else {
            terms.iter().map(|t| t.powf(r)).sum::<f64>().powf(1.0 / r)
        }
    }

    /// `[f, Δ_q] g = f·Δ_q g - Δ_q(f·g)`, both products truncated.
    pub fn commutator(&self, f: &[f64], g: &[f64], q: i32) -> Vec<f64> {
        let a = self.product(f, &self.block(g, q));
        let b = self.block(&self.product(f, g), q);
        a.iter().zip(&b).map(|(x, y)| x - y).collect()
    }

    /// `T_f g` as the double sum `Σ_q Σ_{p ≤ q-2} Δ_p f · Δ_q g`.
    pub fn paraproduct_double_sum(&self, f: &[f64], g: &[f64]) -> Vec<f64> {
        let shells = self.shells();
        let fb: Vec<Vec<f64>> = shells.iter().map(|&p| self.block(f, p)).collect();
        let gb: Vec<Vec<f64>> = shells.iter().map(|&q| self.block(g, q)).collect();
        let mut acc = vec![0.0; f.len()];
        for (qi, &q) in shells.iter().enumerate() {
            for (pi, &p) in shells.iter().enumerate() {
                if p <= q - 2 {
                    add_into(&mut acc, &self.product(&fb[pi], &gb[qi]));
                }
            }
        }
        acc
    }
}

pub fn add_into(acc: &mut [f64], f: &[f64]) {
    for (a, b) in acc.iter_mut().zip(f) {
        *a += b;
    }
}

pub fn max_abs(f: &[f64]) -> f64 {
    f.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn l2(f: &[f64]) -> f64 {
    f.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn ramp(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let up = (-1.0 / t).exp();
        up / (up + (-1.0 / (1.0 - t)).exp())
    }
}

/// Low-frequency cutoff: 1 below 3/4, 0 above 4/3.
pub fn cutoff(r: f64) -> f64 {
    1.0 - ramp((r - 0.75) * 12.0 / 7.0)
}

/// Multiplier of block `q` at radius `r`.
pub fn shell(q: i32, r: f64) -> f64 {
    if q < 0 {
        cutoff(r)
    } else {
        let s = 2f64.powi(q);
        cutoff(r / (2.0 * s)) - cutoff(r / s)
    }
}

/// Inputs of a commutator scan as raw sample arrays.
pub struct ScanInputs {
    pub m: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    pub mt: Vec<f64>,
    pub ut: Vec<Vec<f64>>,
}

/// One scan variant written out from its definition.
pub struct VariantRef {
    pub c_q: Vec<f64>,
    pub statistic: f64,
}

fn grad(lat: &Lattice, f: &[f64]) -> Vec<Vec<f64>> {
    (0..lat.dim).map(|a| lat.d(f, a)).collect()
}

fn sum_commutators(lat: &Lattice, pairs: &[(Vec<f64>, Vec<f64>)], q: i32) -> Vec<f64> {
    let mut acc = vec![0.0; lat.len()];
    for (f, g) in pairs {
        add_into(&mut acc, &lat.commutator(f, g, q));
    }
    acc
}

/// Reference `c_q` for a variant named by its kebab-case identifier.
pub fn variant_reference(lat: &Lattice, name: &str, x: &ScanInputs, eps: f64) -> VariantRef {
    let dim = lat.dim;
    let sigma = 1.0 + dim as f64 / 2.0;
    let (m, u, mt, ut) = (&x.m, &x.u, &x.mt, &x.ut);
    let div_pairs = |f: &Vec<f64>, v: &Vec<Vec<f64>>| -> Vec<Vec<(Vec<f64>, Vec<f64>)>> {
        vec![(0..dim).map(|j| (f.clone(), lat.d(&v[j], j))).collect()]
    };
    let grad_pairs = |f: &Vec<f64>, g: &Vec<f64>| -> Vec<Vec<(Vec<f64>, Vec<f64>)>> {
        (0..dim).map(|j| vec![(f.clone(), lat.d(g, j))]).collect()
    };
    let dot_pairs = |v: &Vec<Vec<f64>>, g: &Vec<f64>| -> Vec<Vec<(Vec<f64>, Vec<f64>)>> {
        vec![(0..dim).map(|j| (v[j].clone(), lat.d(g, j))).collect()]
    };
    let dot_vec_pairs = |v: &Vec<Vec<f64>>, w: &Vec<Vec<f64>>| -> Vec<Vec<(Vec<f64>, Vec<f64>)>> {
        (0..dim)
            .map(|i| (0..dim).map(|j| (v[j].clone(), lat.d(&w[i], j))).collect())
            .collect()
    };
    let gm = grad(lat, m);
    let gu: Vec<Vec<f64>> = u.iter().flat_map(|c| grad(lat, c)).collect();
    let one = |f: &Vec<f64>| vec![f.clone()];
    let b1 = |f: &[Vec<f64>]| lat.besov(f, sigma, 1.0);
    let hi = |f: &[Vec<f64>]| lat.besov(f, sigma + eps, 2.0);
    let lo = |f: &[Vec<f64>]| lat.besov(f, sigma - 1.0 + eps, 2.0);
    let sup = |f: &[Vec<f64>]| lat.norm(f, f64::INFINITY);

    // (components, weight exponent, normalizer product, ℓ¹?, low-frequency?)
    let (comps, s, denom, l1, low) = match name {
        "local-m-divu" => (div_pairs(m, u), sigma, b1(&one(m)) * b1(u), true, false),
        "local-m-gradm" => (grad_pairs(m, m), sigma, sup(&gm) * b1(&one(m)), true, false),
        "local-u-gradm" => (dot_pairs(u, m), sigma, b1(u) * b1(&one(m)), true, false),
        "local-u-gradu" => (dot_vec_pairs(u, u), sigma, sup(&gu) * b1(u), true, false),
        "dt-ut-gradm" => (dot_pairs(ut, m), sigma - 1.0 + eps, lo(ut) * lo(&gm), false, false),
        "dt-u-gradmt" => (dot_pairs(u, mt), sigma - 1.0 + eps, hi(u) * lo(&one(mt)), false, false),
        "dt-ut-gradu" => (dot_vec_pairs(ut, u), sigma - 1.0 + eps, lo(ut) * hi(u), false, false),
        "dt-u-gradut" => (dot_vec_pairs(u, ut), sigma - 1.0 + eps, hi(u) * lo(ut), false, false),
        "dt-mt-divu" => (div_pairs(mt, u), sigma - 1.0 + eps, lo(&one(mt)) * hi(u), false, false),
        "dt-m-divut" => (div_pairs(m, ut), sigma - 1.0 + eps, hi(&one(m)) * lo(ut), false, false),
        "dt-mt-gradm" => (
            grad_pairs(mt, m),
            sigma - 1.0 + eps,
            lo(&one(mt)) * lo(&gm),
            false,
            false,
        ),
        "dt-m-gradmt" => (
            grad_pairs(m, mt),
            sigma - 1.0 + eps,
            hi(&one(m)) * lo(&one(mt)),
            false,
            false,
        ),
        "global-u-gradu" => (dot_vec_pairs(u, u), sigma + eps, hi(u) * lo(&gu), false, false),
        "global-m-gradm" => (grad_pairs(m, m), sigma + eps, lo(&gm) * hi(&one(m)), false, false),
        "global-u-gradm" => (dot_pairs(u, m), sigma + eps, hi(u) * hi(&one(m)), false, false),
        "global-low-u-gradm" => (dot_pairs(u, m), sigma + eps, hi(u) * lo(&gm), false, true),
        "global-m-divu" => (div_pairs(m, u), sigma + eps, hi(&one(m)) * hi(u), false, false),
        "global-low-m-divu" => (div_pairs(m, u), sigma + eps, hi(&one(m)) * hi(u), false, true),
        other => panic!("unknown variant {other}"),
    };
    let p = if low {
        2.0 * dim as f64 / (dim as f64 + 2.0)
    } else {
        2.0
    };
    let qs: Vec<i32> = if low { vec![-1] } else { lat.shells() };
    let c_q: Vec<f64> = qs
        .iter()
        .map(|&q| {
            let parts: Vec<Vec<f64>> = comps.iter().map(|pairs| sum_commutators(lat, pairs, q)).collect();
            2f64.powf(q as f64 * s) * lat.norm(&parts, p) / denom
        })
        .collect();
    let statistic = if l1 {
        c_q.iter().sum()
    } else {
        c_q.iter().map(|c| c * c).sum::<f64>().sqrt()
    };
    VariantRef { c_q, statistic }
}

/// Energy `‖U‖²_{B^{σ+ε}_{2,2}} + ‖U_t‖²_{B^{σ-1+ε}_{2,2}}` by block sums.
pub fn energy_reference(lat: &Lattice, u_all: &[Vec<f64>], ut_all: &[Vec<f64>], sigma: f64, eps: f64) -> f64 {
    lat.besov(u_all, sigma + eps, 2.0).powi(2) + lat.besov(ut_all, sigma - 1.0 + eps, 2.0).powi(2)
}

/// Small deterministic generator for test inputs.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407))
    }

    pub fn uniform(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn signed(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }
}

/// Real trigonometric polynomial with random coefficients on modes with
/// `0 < max_a |k_a| ≤ kmax` (integer lattice), sampled on `lat`.
pub fn random_trig(lat: &Lattice, kmax: i64, seed: u64) -> Vec<f64> {
    let mut rng = Lcg::new(seed);
    let dim = lat.dim;
    let mut modes = Vec::new();
    let span = 2 * kmax + 1;
    for flat in 0..span.pow(dim as u32) {
        let mut k = vec![0i64; dim];
        let mut r = flat;
        for ka in k.iter_mut() {
            *ka = r % span - kmax;
            r /= span;
        }
        if k.iter().all(|&v| v == 0) {
            continue;
        }
        modes.push((k, rng.signed(), rng.uniform() * 2.0 * PI));
    }
    let unit = 2.0 * PI / lat.period;
    lat.sample(|x| {
        modes
            .iter()
            .map(|(k, amp, ph)| {
                let arg: f64 = k.iter().zip(x).map(|(&kk, &xx)| kk as f64 * unit * xx).sum();
                amp * (arg + ph).cos()
            })
            .sum()
    })
}
