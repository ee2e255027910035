use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{Branch, EulerModel, PhysicalParams, State, StateRate};
use crate::lp::norms::{block_l2_squared, dyadic_sum};
use crate::lp::{curl, partial, DyadicPartition, Field};

/// Regularity indices `σ`, `ε` and `ε′`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Indices {
    pub sigma: f64,
    pub eps: f64,
    pub eps_prime: f64,
}

impl Indices {
    pub const DEFAULT_EPS: f64 = 0.1;
    pub const DEFAULT_EPS_PRIME: f64 = 0.05;

    /// `σ = 1 + N/2` with the default `ε` and `ε′`.
    pub fn for_dim(dim: usize) -> Self {
        Indices {
            sigma: 1.0 + dim as f64 / 2.0,
            eps: Self::DEFAULT_EPS,
            eps_prime: Self::DEFAULT_EPS_PRIME,
        }
    }

    pub fn with_eps(dim: usize, eps: f64, eps_prime: f64) -> Result<Self> {
        let idx = Indices {
            eps,
            eps_prime,
            ..Self::for_dim(dim)
        };
        idx.validate()?;
        Ok(idx)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidConfig(format!("eps must be positive, got {}", self.eps)));
        }
        if !(self.eps_prime >= 0.0 && self.eps_prime < self.eps) {
            return Err(Error::InvalidConfig(format!(
                "eps_prime must lie in [0, eps), got {}",
                self.eps_prime
            )));
        }
        Ok(())
    }
}

/// One row of diagnostics at time `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `‖(m, u)‖_{B^{σ+ε}_{2,2}}`
    pub besov_u: f64,
    /// `‖(m_t, u_t)‖_{B^{σ-1+ε}_{2,2}}`
    pub besov_ut: f64,
    pub energy: f64,
    pub dissipation: f64,
    /// `‖ω‖_{B^{σ-1}_{2,1}}`; absent in one dimension.
    pub vorticity_norm: Option<f64>,
    /// `‖∇m‖_{B^{σ-1+ε′}_{2,2}}`
    pub grad_m_norm: f64,
    /// `‖u‖_{B^{σ+ε′}_{2,2}}`
    pub u_norm_eps_prime: f64,
    /// `‖(m, u)‖_{B^σ_{2,1}}`
    pub besov_sigma_21: f64,
    /// `‖Δ_q m‖² + ‖Δ_q u‖²` for `q = -1..=q_max`.
    pub block_energies: Vec<f64>,
    pub min_density: f64,
    pub sup_m: f64,
    pub sup_u: f64,
}

/// `U_t` computed from `U` through the equations of motion.
pub fn time_derivative_state(s: &State, model: &EulerModel) -> Result<StateRate> {
    model.rate(s)
}

fn sum_blocks(part: &DyadicPartition, fields: &[&Field]) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; part.block_count()];
    for f in fields {
        for (a, b) in acc.iter_mut().zip(block_l2_squared(part, f)?) {
            *a += b;
        }
    }
    Ok(acc)
}

fn weighted_sq(blocks_sq: &[f64], s: f64) -> f64 {
    blocks_sq
        .iter()
        .enumerate()
        .map(|(i, b)| 4f64.powf((i as f64 - 1.0) * s) * b)
        .sum()
}

fn state_blocks(part: &DyadicPartition, s: &State) -> Result<Vec<f64>> {
    let mut fields = vec![&s.m];
    fields.extend(s.u.components());
    sum_blocks(part, &fields)
}

fn rate_blocks(part: &DyadicPartition, r: &StateRate) -> Result<Vec<f64>> {
    let mut fields = vec![&r.dm];
    fields.extend(r.du.components());
    sum_blocks(part, &fields)
}

fn grad_blocks(part: &DyadicPartition, m: &Field) -> Result<Vec<f64>> {
    let grads: Vec<Field> = (0..m.grid().dim()).map(|j| partial(m, j)).collect();
    let refs: Vec<&Field> = grads.iter().collect();
    sum_blocks(part, &refs)
}

/// `E = ‖U‖²_{B^{σ+ε}_{2,2}} + ‖U_t‖²_{B^{σ-1+ε}_{2,2}}`.
pub fn energy_functional(s: &State, model: &EulerModel, sigma: f64, eps: f64, part: &DyadicPartition) -> Result<f64> {
    let rate = time_derivative_state(s, model)?;
    Ok(weighted_sq(&state_blocks(part, s)?, sigma + eps) + weighted_sq(&rate_blocks(part, &rate)?, sigma - 1.0 + eps))
}

/// `D = ‖u‖²_{B^{σ+ε}_{2,2}} + ‖∇m‖²_{B^{σ-1+ε}_{2,2}} + ‖U_t‖²_{B^{σ-1+ε}_{2,2}}`.
pub fn dissipation_functional(
    s: &State,
    model: &EulerModel,
    sigma: f64,
    eps: f64,
    part: &DyadicPartition,
) -> Result<f64> {
    let rate = time_derivative_state(s, model)?;
    let refs: Vec<&Field> = s.u.components().iter().collect();
    Ok(weighted_sq(&sum_blocks(part, &refs)?, sigma + eps)
        + weighted_sq(&grad_blocks(part, &s.m)?, sigma - 1.0 + eps)
        + weighted_sq(&rate_blocks(part, &rate)?, sigma - 1.0 + eps))
}

/// Smallest density implied by a state.
pub fn min_density(s: &State, params: &PhysicalParams) -> f64 {
    let m_min = s.m.min();
    match s.branch {
        Branch::Isothermal => params.n_bar() * (m_min / params.pressure_const().sqrt()).exp(),
        Branch::Isentropic => {
            let psi = params.psi_bar() + params.coupling() * m_min;
            if psi <= 0.0 {
                return 0.0;
            }
            let base = params.pressure_const() * params.gamma();
            (psi * psi / base).powf(1.0 / (params.gamma() - 1.0))
        }
    }
}

/// Evaluates [`DiagnosticsRecord`]s for one model, partition and index set.
#[derive(Clone, Debug)]
pub struct Diagnostics {
    pub part: DyadicPartition,
    pub model: EulerModel,
    pub indices: Indices,
}

impl Diagnostics {
    pub fn new(part: DyadicPartition, model: EulerModel, indices: Indices) -> Result<Self> {
        indices.validate()?;
        Ok(Diagnostics { part, model, indices })
    }

    pub fn record(&self, t: f64, s: &State) -> Result<DiagnosticsRecord> {
        let part = &self.part;
        let Indices { sigma, eps, eps_prime } = self.indices;
        let rate = time_derivative_state(s, &self.model)?;
        let m_blocks = block_l2_squared(part, &s.m)?;
        let u_refs: Vec<&Field> = s.u.components().iter().collect();
        let u_blocks = sum_blocks(part, &u_refs)?;
        let gm_blocks = grad_blocks(part, &s.m)?;
        let rt_blocks = rate_blocks(part, &rate)?;
        let block_energies: Vec<f64> = m_blocks.iter().zip(&u_blocks).map(|(a, b)| a + b).collect();

        let u_sq = weighted_sq(&block_energies, sigma + eps);
        let ut_sq = weighted_sq(&rt_blocks, sigma - 1.0 + eps);
        let dissipation = weighted_sq(&u_blocks, sigma + eps) + weighted_sq(&gm_blocks, sigma - 1.0 + eps) + ut_sq;
        let vorticity_norm = if s.grid().dim() >= 2 {
            let w = curl(&s.u)?;
            let refs = w.fields();
            let wb: Vec<f64> = sum_blocks(part, &refs)?.into_iter().map(f64::sqrt).collect();
            Some(dyadic_sum(&wb, sigma - 1.0, 1.0))
        } else {
            None
        };
        let sqrt_all = |v: &[f64]| v.iter().map(|x| x.sqrt()).collect::<Vec<_>>();
        let norms = s.norms();
        Ok(DiagnosticsRecord {
            t,
            besov_u: u_sq.sqrt(),
            besov_ut: ut_sq.sqrt(),
            energy: u_sq + ut_sq,
            dissipation,
            vorticity_norm,
            grad_m_norm: weighted_sq(&gm_blocks, sigma - 1.0 + eps_prime).sqrt(),
            u_norm_eps_prime: weighted_sq(&u_blocks, sigma + eps_prime).sqrt(),
            besov_sigma_21: dyadic_sum(&sqrt_all(&block_energies), sigma, 1.0),
            block_energies,
            min_density: min_density(s, &self.model.params),
            sup_m: norms.sup_m,
            sup_u: norms.sup_u,
        })
    }
}
