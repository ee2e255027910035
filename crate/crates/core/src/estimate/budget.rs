use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::{EulerModel, NonlinearTerms, State};
use crate::lp::norms::block_l2_squared;
use crate::lp::{divergence, partial, DyadicPartition, Field};

/// Budget of one dyadic block at the middle of three consecutive states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlockBudget {
    pub q: i32,
    /// `½ d/dt (‖Δ_q m‖² + ‖Δ_q u‖²) + a‖Δ_q u‖²`, time derivative by centered difference.
    pub lhs: f64,
    /// Transport, commutator and regrouped pressure terms at the middle state.
    pub rhs: f64,
    /// `-(Δ_q N_m, Δ_q m) - (Δ_q N_u, Δ_q u)` with the nonlinearities `N` taken as they stand.
    pub rhs_direct: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BudgetReport {
    pub dt: f64,
    pub floor: f64,
    pub blocks: Vec<BlockBudget>,
    pub max_residual: f64,
}

fn integral(a: &[f64], b: &[f64], cell: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * cell
}

fn block_energy(part: &DyadicPartition, s: &State, q: i32) -> Result<f64> {
    let i = (q + 1) as usize;
    let mut e = block_l2_squared(part, &s.m)?[i];
    for c in s.u.components() {
        e += block_l2_squared(part, c)?[i];
    }
    Ok(e)
}

fn block_u_energy(part: &DyadicPartition, s: &State, q: i32) -> Result<f64> {
    let i = (q + 1) as usize;
    let mut e = 0.0;
    for c in s.u.components() {
        e += block_l2_squared(part, c)?[i];
    }
    Ok(e)
}

fn coupling_for(model: &EulerModel, s: &State) -> Result<f64> {
    if model.terms == NonlinearTerms::all() {
        Ok(model.coupling(s.branch))
    } else if model.terms == NonlinearTerms::none() {
        Ok(0.0)
    } else {
        Err(Error::InvalidParams(
            "block budget needs all nonlinear terms on or all off".into(),
        ))
    }
}

/// Nonlinear block flux through the transport and commutator form, with the
/// pressure terms regrouped into `-∫Δ_q m ∇m·Δ_q u + ∫[Δ_q, m]∇m·Δ_q u + ∫[Δ_q, m] div u Δ_q m`.
pub fn block_flux(part: &DyadicPartition, s: &State, model: &EulerModel, q: i32) -> Result<f64> {
    let c = coupling_for(model, s)?;
    if !model.terms.any() {
        return Ok(0.0);
    }
    let grid = *s.grid();
    let dim = grid.dim();
    let cell = grid.cell_volume();
    let div = divergence(&s.u)?;
    let grad_m: Vec<Field> = (0..dim).map(|j| partial(&s.m, j)).collect();
    let dq = |f: &Field| part.dyadic_block(f, q);
    let dm = dq(&s.m)?;
    let du: Vec<Field> = s.u.components().iter().map(dq).collect::<Result<_>>()?;

    // ½∫ div u (|Δ_q m|² + |Δ_q u|²)
    let mut sq = dm.samples().iter().map(|x| x * x).collect::<Vec<f64>>();
    for d in &du {
        for (a, x) in sq.iter_mut().zip(d.samples()) {
            *a += x * x;
        }
    }
    let mut total = 0.5 * integral(div.samples(), &sq, cell);

    // [u, Δ_q]·∇g = u·Δ_q ∇g - Δ_q(u·∇g)
    let transport_commutator = |g: &Field| -> Result<Field> {
        let grads: Vec<Field> = (0..dim).map(|j| partial(g, j)).collect();
        let mut prod = vec![0.0; grid.len()];
        let mut local = vec![0.0; grid.len()];
        for (j, gj) in grads.iter().enumerate() {
            let uj = s.u.component(j).samples();
            let blk = dq(gj)?;
            for k in 0..grid.len() {
                prod[k] += uj[k] * gj.samples()[k];
                local[k] += uj[k] * blk.samples()[k];
            }
        }
        let prod = Field::from_samples(grid, prod)?;
        Field::from_samples(grid, local)?.sub(&dq(&prod)?)
    };
    total += integral(transport_commutator(&s.m)?.samples(), dm.samples(), cell);
    for (i, d) in du.iter().enumerate() {
        total += integral(transport_commutator(s.u.component(i))?.samples(), d.samples(), cell);
    }

    if c != 0.0 {
        // [Δ_q, m] g = Δ_q(m g) - m Δ_q g
        let commute = |g: &Field| -> Result<Field> { dq(&s.m.mul_raw(g)?)?.sub(&s.m.mul_raw(&dq(g)?)?) };
        let mut regrouped = 0.0;
        for (j, d) in du.iter().enumerate() {
            let w: Vec<f64> = dm
                .samples()
                .iter()
                .zip(grad_m[j].samples())
                .map(|(a, b)| a * b)
                .collect();
            regrouped -= integral(&w, d.samples(), cell);
            regrouped += integral(commute(&grad_m[j])?.samples(), d.samples(), cell);
        }
        regrouped += integral(commute(&div)?.samples(), dm.samples(), cell);
        total -= c * regrouped;
    }
    Ok(total)
}

/// The same flux evaluated as `-(Δ_q N_m, Δ_q m) - (Δ_q N_u, Δ_q u)`.
pub fn block_flux_direct(part: &DyadicPartition, s: &State, model: &EulerModel, q: i32) -> Result<f64> {
    let c = coupling_for(model, s)?;
    if !model.terms.any() {
        return Ok(0.0);
    }
    let grid = *s.grid();
    let dim = grid.dim();
    let cell = grid.cell_volume();
    let div = divergence(&s.u)?;
    let n = grid.len();
    let advect = |g: &Field| -> Vec<f64> {
        let mut out = vec![0.0; n];
        for j in 0..dim {
            let gj = partial(g, j);
            for ((o, uj), d) in out.iter_mut().zip(s.u.component(j).samples()).zip(gj.samples()) {
                *o += uj * d;
            }
        }
        out
    };
    let m = s.m.samples();
    let mut nm = advect(&s.m);
    for ((o, mv), d) in nm.iter_mut().zip(m).zip(div.samples()) {
        *o += c * mv * d;
    }
    let nm = Field::from_samples(grid, nm)?;
    let dm = part.dyadic_block(&s.m, q)?;
    let mut total = -integral(part.dyadic_block(&nm, q)?.samples(), dm.samples(), cell);
    for i in 0..dim {
        let mut nu = advect(s.u.component(i));
        let gm = partial(&s.m, i);
        for ((o, mv), d) in nu.iter_mut().zip(m).zip(gm.samples()) {
            *o += c * mv * d;
        }
        let nu = Field::from_samples(grid, nu)?;
        let du = part.dyadic_block(s.u.component(i), q)?;
        total -= integral(part.dyadic_block(&nu, q)?.samples(), du.samples(), cell);
    }
    Ok(total)
}

/// Compares the discrete rate of block energy with the flux at `mid`, where
/// `prev`, `mid`, `next` are consecutive states spaced by `dt`.
#[allow(clippy::too_many_arguments)]
pub fn block_energy_budget(
    prev: &State,
    mid: &State,
    next: &State,
    dt: f64,
    model: &EulerModel,
    part: &DyadicPartition,
    q: i32,
    floor: f64,
) -> Result<BlockBudget> {
    part.check_index(q)?;
    if !(dt > 0.0) {
        return Err(Error::InvalidParams(format!("dt must be positive, got {dt}")));
    }
    for s in [prev, next] {
        if s.grid() != mid.grid() {
            return Err(Error::GridMismatch);
        }
    }
    let rate = (block_energy(part, next, q)? - block_energy(part, prev, q)?) / (2.0 * dt);
    let lhs = 0.5 * rate + model.params.damping() * block_u_energy(part, mid, q)?;
    let rhs = block_flux(part, mid, model, q)?;
    let rhs_direct = block_flux_direct(part, mid, model, q)?;
    let scale = lhs.abs().max(rhs.abs()).max(floor);
    let residual = if scale > 0.0 { (lhs - rhs).abs() / scale } else { 0.0 };
    Ok(BlockBudget {
        q,
        lhs,
        rhs,
        rhs_direct,
        residual,
    })
}

/// Budgets for every block; the floor is `floor_rel` times the largest block flux.
pub fn budget_all_blocks(
    prev: &State,
    mid: &State,
    next: &State,
    dt: f64,
    model: &EulerModel,
    part: &DyadicPartition,
    floor_rel: f64,
) -> Result<BudgetReport> {
    let raw = part
        .indices()
        .map(|q| block_energy_budget(prev, mid, next, dt, model, part, q, 0.0))
        .collect::<Result<Vec<_>>>()?;
    let scale = raw.iter().map(|b| b.lhs.abs().max(b.rhs.abs())).fold(0.0, f64::max);
    let floor = floor_rel * scale;
    let blocks: Vec<BlockBudget> = raw
        .into_iter()
        .map(|b| {
            let s = b.lhs.abs().max(b.rhs.abs()).max(floor);
            BlockBudget {
                residual: if s > 0.0 { (b.lhs - b.rhs).abs() / s } else { 0.0 },
                ..b
            }
        })
        .collect();
    let max_residual = blocks.iter().map(|b| b.residual).fold(0.0, f64::max);
    Ok(BudgetReport {
        dt,
        floor,
        blocks,
        max_residual,
    })
}
