//! Bony decomposition `f·g = T_f g + T_g f + R(f, g)` and block commutators.
//! Every pointwise product is followed by 2/3-rule truncation.

use super::field::{Field, VectorField};
use super::partition::DyadicPartition;
use crate::error::{Error, Result};

fn check(part: &DyadicPartition, f: &Field, g: &Field) -> Result<()> {
    f.ensure_same_grid(g)?;
    if f.grid() != part.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

fn accumulate(acc: &mut [f64], f: &Field) {
    for (a, v) in acc.iter_mut().zip(f.samples()) {
        *a += v;
    }
}

/// `T_f g = Σ_{q ≥ 0} S_{q-1} f · Δ_q g`.
pub fn paraproduct(part: &DyadicPartition, f: &Field, g: &Field) -> Result<Field> {
    check(part, f, g)?;
    let grid = *f.grid();
    let mut acc = vec![0.0; grid.len()];
    // S_{-1} = 0, so the q = 0 term vanishes.
    for q in 1..=part.q_max() {
        let low = f.apply_table(&part.low_cutoff_table(q - 1));
        let high = part.dyadic_block(g, q)?;
        accumulate(&mut acc, &low.mul(&high)?);
    }
    Field::from_samples(grid, acc)
}

/// `R(f, g) = Σ_q Δ_q f · Δ̃_q g`.
pub fn remainder(part: &DyadicPartition, f: &Field, g: &Field) -> Result<Field> {
    check(part, f, g)?;
    let grid = *f.grid();
    let mut acc = vec![0.0; grid.len()];
    for q in part.indices() {
        let a = part.dyadic_block(f, q)?;
        let b = part.widened_block(g, q)?;
        accumulate(&mut acc, &a.mul(&b)?);
    }
    Field::from_samples(grid, acc)
}

/// `[f, Δ_q] g = f·Δ_q g - Δ_q(f·g)`.
pub fn commutator_block(part: &DyadicPartition, f: &Field, g: &Field, q: i32) -> Result<Field> {
    check(part, f, g)?;
    part.check_index(q)?;
    let first = f.mul(&part.dyadic_block(g, q)?)?;
    let second = part.dyadic_block(&f.mul(g)?, q)?;
    first.sub(&second)
}

/// Commutator `[f, Δ_q]` applied to a scalar with the full product
/// `f·g` precomputed, for scans over `q`.
#[derive(Clone, Debug)]
pub struct CommutatorKernel<'a> {
    part: &'a DyadicPartition,
    pairs: Vec<(Field, Field)>,
    product: Field,
}

impl<'a> CommutatorKernel<'a> {
    /// Kernel for `Σ_j [f_j, Δ_q] g_j`.
    pub fn new(part: &'a DyadicPartition, pairs: Vec<(Field, Field)>) -> Result<Self> {
        let grid = *part.grid();
        let mut acc = vec![0.0; grid.len()];
        for (f, g) in &pairs {
            check(part, f, g)?;
            let prod = f.mul_raw(g)?;
            accumulate(&mut acc, &prod);
        }
        let product = Field::from_samples(grid, acc)?.dealiased();
        Ok(CommutatorKernel { part, pairs, product })
    }

    pub fn block(&self, q: i32) -> Result<Field> {
        self.part.check_index(q)?;
        let grid = *self.part.grid();
        let mut acc = vec![0.0; grid.len()];
        for (f, g) in &self.pairs {
            accumulate(&mut acc, &f.mul_raw(&self.part.dyadic_block(g, q)?)?);
        }
        let first = Field::from_samples(grid, acc)?.dealiased();
        first.sub(&self.part.dyadic_block(&self.product, q)?)
    }
}

/// `[u, Δ_q]·∇g = Σ_j [u_j, Δ_q] ∂_j g` given the gradient of `g`.
pub fn vector_commutator_dot(part: &DyadicPartition, u: &VectorField, grad: &VectorField, q: i32) -> Result<Field> {
    let pairs = u
        .components()
        .iter()
        .cloned()
        .zip(grad.components().iter().cloned())
        .collect();
    CommutatorKernel::new(part, pairs)?.block(q)
}
