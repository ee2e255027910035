use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{EulerModel, State};
use crate::lp::norms::{block_norms_multi, dyadic_sum, lp_norm_multi};
use crate::lp::{partial, CommutatorKernel, DyadicPartition, Field, VectorField};

use super::diagnostics::{time_derivative_state, Indices};

/// Inputs of a scan: a state and an independent pair playing `(m_t, u_t)`.
#[derive(Clone, Debug)]
pub struct ScanFields {
    pub m: Field,
    pub u: VectorField,
    pub m_t: Field,
    pub u_t: VectorField,
}

impl ScanFields {
    pub fn new(m: Field, u: VectorField, m_t: Field, u_t: VectorField) -> Result<Self> {
        let g = *m.grid();
        if *u.grid() != g || *m_t.grid() != g || *u_t.grid() != g {
            return Err(Error::GridMismatch);
        }
        if u.len() != g.dim() || u_t.len() != g.dim() {
            return Err(Error::InvalidParams(
                "velocity fields need one component per axis".into(),
            ));
        }
        Ok(ScanFields { m, u, m_t, u_t })
    }

    /// Uses the state and its time derivative from the equations of motion.
    pub fn from_state(s: &State, model: &EulerModel) -> Result<Self> {
        let r = time_derivative_state(s, model)?;
        Self::new(s.m.clone(), s.u.clone(), r.dm, r.du)
    }

    /// Spectral interpolation of all four inputs.
    pub fn resample(&self, target: crate::lp::Grid) -> Result<Self> {
        let v = |w: &VectorField| -> Result<VectorField> {
            VectorField::new(
                w.components()
                    .iter()
                    .map(|c| c.resample(target))
                    .collect::<Result<_>>()?,
            )
        };
        Self::new(
            self.m.resample(target)?,
            v(&self.u)?,
            self.m_t.resample(target)?,
            v(&self.u_t)?,
        )
    }

    pub fn grid(&self) -> &crate::lp::Grid {
        self.m.grid()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `2^{qσ}` weights, `B^σ_{2,1}` norms, `ℓ¹` summability.
    Local,
    /// `2^{q(σ-1+ε)}` weights, `B_{2,2}` norms, `ℓ²` summability.
    TimeDerivative,
    /// `2^{q(σ+ε)}` weights, `B_{2,2}` norms, `ℓ²` summability.
    Global,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CommutatorVariant {
    #[serde(rename = "local-m-divu")]
    LocalMDivU,
    #[serde(rename = "local-m-gradm")]
    LocalMGradM,
    #[serde(rename = "local-u-gradm")]
    LocalUGradM,
    #[serde(rename = "local-u-gradu")]
    LocalUGradU,
    #[serde(rename = "dt-ut-gradm")]
    DtUtGradM,
    #[serde(rename = "dt-u-gradmt")]
    DtUGradMt,
    #[serde(rename = "dt-ut-gradu")]
    DtUtGradU,
    #[serde(rename = "dt-u-gradut")]
    DtUGradUt,
    #[serde(rename = "dt-mt-divu")]
    DtMtDivU,
    #[serde(rename = "dt-m-divut")]
    DtMDivUt,
    #[serde(rename = "dt-mt-gradm")]
    DtMtGradM,
    #[serde(rename = "dt-m-gradmt")]
    DtMGradMt,
    #[serde(rename = "global-u-gradu")]
    GlobalUGradU,
    #[serde(rename = "global-m-gradm")]
    GlobalMGradM,
    #[serde(rename = "global-u-gradm")]
    GlobalUGradM,
    #[serde(rename = "global-low-u-gradm")]
    GlobalLowUGradM,
    #[serde(rename = "global-m-divu")]
    GlobalMDivU,
    #[serde(rename = "global-low-m-divu")]
    GlobalLowMDivU,
}

/// Which input a bracket slot or a norm refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Input {
    M,
    U,
    Mt,
    Ut,
    GradM,
    GradU,
}

impl Input {
    fn symbol(self) -> &'static str {
        match self {
            Input::M => "m",
            Input::U => "u",
            Input::Mt => "m_t",
            Input::Ut => "u_t",
            Input::GradM => "grad m",
            Input::GradU => "grad u",
        }
    }
}

/// Shape of the bracket `[f, Δ_q] ∘ g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bracket {
    /// `[f, Δ_q] div g`, scalar `f`, vector `g`.
    Div(Input, Input),
    /// `[f, Δ_q] ∇g`, scalar `f`, scalar `g`.
    Grad(Input, Input),
    /// `[f, Δ_q]·∇g`, vector `f`, scalar `g`.
    DotGrad(Input, Input),
    /// `[f, Δ_q]·∇g`, vector `f`, vector `g`.
    DotGradVec(Input, Input),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Normalizer {
    Besov {
        input: Input,
        s: f64,
        r: f64,
    },
    /// Sup of the pointwise Euclidean (Frobenius) magnitude.
    Sup {
        input: Input,
    },
}

impl Normalizer {
    pub fn label(&self) -> String {
        match self {
            Normalizer::Besov { input, s, r } => {
                let r = if *r == 1.0 { "1" } else { "2" };
                format!("B^{s:.4}_{{2,{r}}}({})", input.symbol())
            }
            Normalizer::Sup { input } => format!("L^inf({})", input.symbol()),
        }
    }
}

const ALL: [CommutatorVariant; 18] = {
    use CommutatorVariant::*;
    [
        LocalMDivU,
        LocalMGradM,
        LocalUGradM,
        LocalUGradU,
        DtUtGradM,
        DtUGradMt,
        DtUtGradU,
        DtUGradUt,
        DtMtDivU,
        DtMDivUt,
        DtMtGradM,
        DtMGradMt,
        GlobalUGradU,
        GlobalMGradM,
        GlobalUGradM,
        GlobalLowUGradM,
        GlobalMDivU,
        GlobalLowMDivU,
    ]
};

impl CommutatorVariant {
    pub fn all() -> &'static [CommutatorVariant] {
        &ALL
    }

    pub fn name(self) -> &'static str {
        use CommutatorVariant::*;
        match self {
            LocalMDivU => "local-m-divu",
            LocalMGradM => "local-m-gradm",
            LocalUGradM => "local-u-gradm",
            LocalUGradU => "local-u-gradu",
            DtUtGradM => "dt-ut-gradm",
            DtUGradMt => "dt-u-gradmt",
            DtUtGradU => "dt-ut-gradu",
            DtUGradUt => "dt-u-gradut",
            DtMtDivU => "dt-mt-divu",
            DtMDivUt => "dt-m-divut",
            DtMtGradM => "dt-mt-gradm",
            DtMGradMt => "dt-m-gradmt",
            GlobalUGradU => "global-u-gradu",
            GlobalMGradM => "global-m-gradm",
            GlobalUGradM => "global-u-gradm",
            GlobalLowUGradM => "global-low-u-gradm",
            GlobalMDivU => "global-m-divu",
            GlobalLowMDivU => "global-low-m-divu",
        }
    }

    pub fn family(self) -> Family {
        use CommutatorVariant::*;
        match self {
            LocalMDivU | LocalMGradM | LocalUGradM | LocalUGradU => Family::Local,
            DtUtGradM | DtUGradMt | DtUtGradU | DtUGradUt | DtMtDivU | DtMDivUt | DtMtGradM | DtMGradMt => {
                Family::TimeDerivative
            }
            _ => Family::Global,
        }
    }

    /// Only the `q = -1` block, measured in `L^{2N/(N+2)}`.
    pub fn is_low_frequency(self) -> bool {
        matches!(
            self,
            CommutatorVariant::GlobalLowUGradM | CommutatorVariant::GlobalLowMDivU
        )
    }

    pub fn bracket(self) -> Bracket {
        use CommutatorVariant::*;
        use Input::*;
        match self {
            LocalMDivU | GlobalMDivU | GlobalLowMDivU => Bracket::Div(M, U),
            LocalMGradM | GlobalMGradM => Bracket::Grad(M, M),
            LocalUGradM | GlobalUGradM | GlobalLowUGradM => Bracket::DotGrad(U, M),
            LocalUGradU | GlobalUGradU => Bracket::DotGradVec(U, U),
            DtUtGradM => Bracket::DotGrad(Ut, M),
            DtUGradMt => Bracket::DotGrad(U, Mt),
            DtUtGradU => Bracket::DotGradVec(Ut, U),
            DtUGradUt => Bracket::DotGradVec(U, Ut),
            DtMtDivU => Bracket::Div(Mt, U),
            DtMDivUt => Bracket::Div(M, Ut),
            DtMtGradM => Bracket::Grad(Mt, M),
            DtMGradMt => Bracket::Grad(M, Mt),
        }
    }

    /// Exponent `s` of the block weight `2^{qs}`.
    pub fn weight_exponent(self, idx: &Indices) -> f64 {
        match self.family() {
            Family::Local => idx.sigma,
            Family::TimeDerivative => idx.sigma - 1.0 + idx.eps,
            Family::Global => idx.sigma + idx.eps,
        }
    }

    pub fn lp_exponent(self, dim: usize) -> f64 {
        if self.is_low_frequency() {
            2.0 * dim as f64 / (dim as f64 + 2.0)
        } else {
            2.0
        }
    }

    /// `1` or `2`: the `ℓ^r` norm in which `(c_q)` is summable.
    pub fn summability(self) -> f64 {
        match self.family() {
            Family::Local => 1.0,
            _ => 2.0,
        }
    }

    pub fn normalizers(self, idx: &Indices) -> [Normalizer; 2] {
        use CommutatorVariant::*;
        use Input::*;
        let crit = |input| Normalizer::Besov {
            input,
            s: idx.sigma,
            r: 1.0,
        };
        let hi = |input| Normalizer::Besov {
            input,
            s: idx.sigma + idx.eps,
            r: 2.0,
        };
        let lo = |input| Normalizer::Besov {
            input,
            s: idx.sigma - 1.0 + idx.eps,
            r: 2.0,
        };
        match self {
            LocalMDivU => [crit(M), crit(U)],
            LocalMGradM => [Normalizer::Sup { input: GradM }, crit(M)],
            LocalUGradM => [crit(U), crit(M)],
            LocalUGradU => [Normalizer::Sup { input: GradU }, crit(U)],
            DtUtGradM => [lo(Ut), lo(GradM)],
            DtUGradMt => [hi(U), lo(Mt)],
            DtUtGradU => [lo(Ut), hi(U)],
            DtUGradUt => [hi(U), lo(Ut)],
            DtMtDivU => [lo(Mt), hi(U)],
            DtMDivUt => [hi(M), lo(Ut)],
            DtMtGradM => [lo(Mt), lo(GradM)],
            DtMGradMt => [hi(M), lo(Mt)],
            GlobalUGradU => [hi(U), lo(GradU)],
            GlobalMGradM => [lo(GradM), hi(M)],
            GlobalUGradM => [hi(U), hi(M)],
            GlobalLowUGradM => [hi(U), lo(GradM)],
            GlobalMDivU => [hi(M), hi(U)],
            GlobalLowMDivU => [hi(M), hi(U)],
        }
    }
}

impl fmt::Display for CommutatorVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CommutatorVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ALL.iter()
            .copied()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown commutator variant `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorScanReport {
    pub variant: CommutatorVariant,
    pub family: Family,
    pub bracket: Bracket,
    pub dim: usize,
    pub points_per_axis: usize,
    pub weight_exponent: f64,
    pub lp_exponent: f64,
    pub normalizer_labels: [String; 2],
    pub normalizers: [f64; 2],
    pub q: Vec<i32>,
    /// `‖bracket_q‖_{L^p}` before weighting.
    pub bracket_norms: Vec<f64>,
    pub c_q: Vec<f64>,
    /// `"l1"` or `"l2"`.
    pub statistic_kind: String,
    pub statistic: f64,
}

fn scalar(fields: &ScanFields, input: Input) -> &Field {
    match input {
        Input::M => &fields.m,
        Input::Mt => &fields.m_t,
        _ => unreachable!("vector input in scalar slot"),
    }
}

fn vector(fields: &ScanFields, input: Input) -> &VectorField {
    match input {
        Input::U => &fields.u,
        Input::Ut => &fields.u_t,
        _ => unreachable!("scalar input in vector slot"),
    }
}

fn gradient(f: &Field) -> Vec<Field> {
    (0..f.grid().dim()).map(|j| partial(f, j)).collect()
}

/// Component kernels: component `i` of the bracket is `Σ_j [f_ij, Δ_q] g_ij`.
fn components(fields: &ScanFields, bracket: Bracket) -> Vec<Vec<(Field, Field)>> {
    let dim = fields.grid().dim();
    match bracket {
        Bracket::Div(f, g) => {
            let f = scalar(fields, f);
            let g = vector(fields, g);
            vec![(0..dim).map(|j| (f.clone(), partial(g.component(j), j))).collect()]
        }
        Bracket::Grad(f, g) => {
            let f = scalar(fields, f);
            gradient(scalar(fields, g))
                .into_iter()
                .map(|d| vec![(f.clone(), d)])
                .collect()
        }
        Bracket::DotGrad(f, g) => {
            let f = vector(fields, f);
            let grad = gradient(scalar(fields, g));
            vec![f.components().iter().cloned().zip(grad).collect()]
        }
        Bracket::DotGradVec(f, g) => {
            let f = vector(fields, f);
            vector(fields, g)
                .components()
                .iter()
                .map(|gi| f.components().iter().cloned().zip(gradient(gi)).collect())
                .collect()
        }
    }
}

fn normalizer_value(part: &DyadicPartition, fields: &ScanFields, n: Normalizer) -> Result<f64> {
    let owned: Vec<Field> = match n {
        Normalizer::Besov { input, .. } | Normalizer::Sup { input } => match input {
            Input::M => vec![fields.m.clone()],
            Input::Mt => vec![fields.m_t.clone()],
            Input::U => fields.u.components().to_vec(),
            Input::Ut => fields.u_t.components().to_vec(),
            Input::GradM => gradient(&fields.m),
            Input::GradU => fields.u.components().iter().flat_map(gradient).collect(),
        },
    };
    let refs: Vec<&Field> = owned.iter().collect();
    match n {
        Normalizer::Besov { s, r, .. } => Ok(dyadic_sum(&block_norms_multi(part, &refs, 2.0)?, s, r)),
        Normalizer::Sup { .. } => lp_norm_multi(&refs, f64::INFINITY),
    }
}

/// Bracket `L^p` norm per block, over `qs`.
pub fn bracket_norms(
    part: &DyadicPartition,
    fields: &ScanFields,
    bracket: Bracket,
    qs: &[i32],
    p: f64,
) -> Result<Vec<f64>> {
    let kernels = components(fields, bracket)
        .into_iter()
        .map(|pairs| CommutatorKernel::new(part, pairs))
        .collect::<Result<Vec<_>>>()?;
    qs.par_iter()
        .map(|&q| {
            let blocks = kernels.iter().map(|k| k.block(q)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&Field> = blocks.iter().collect();
            lp_norm_multi(&refs, p)
        })
        .collect()
}

/// `c_q = 2^{qs} ‖bracket_q‖_{L^p} / (N_1 N_2)` with the summability statistic.
pub fn commutator_scan(
    part: &DyadicPartition,
    fields: &ScanFields,
    variant: CommutatorVariant,
    indices: &Indices,
) -> Result<CommutatorScanReport> {
    let grid = *fields.grid();
    if grid != *part.grid() {
        return Err(Error::GridMismatch);
    }
    let dim = grid.dim();
    if variant.is_low_frequency() && dim <= 2 {
        return Err(Error::UnsupportedDimension {
            required: "3",
            got: dim,
        });
    }
    let norms = variant.normalizers(indices);
    let values = [
        normalizer_value(part, fields, norms[0])?,
        normalizer_value(part, fields, norms[1])?,
    ];
    let denom = values[0] * values[1];
    if !(denom > 0.0) {
        return Err(Error::ZeroNorm(format!(
            "{}: {} = {:e}, {} = {:e}",
            variant,
            norms[0].label(),
            values[0],
            norms[1].label(),
            values[1]
        )));
    }
    let qs: Vec<i32> = if variant.is_low_frequency() {
        vec![-1]
    } else {
        part.indices().collect()
    };
    let p = variant.lp_exponent(dim);
    let s = variant.weight_exponent(indices);
    let raw = bracket_norms(part, fields, variant.bracket(), &qs, p)?;
    let c_q: Vec<f64> = qs
        .iter()
        .zip(&raw)
        .map(|(&q, &b)| 2f64.powf(q as f64 * s) * b / denom)
        .collect();
    let r = variant.summability();
    let statistic = if r == 1.0 {
        c_q.iter().sum()
    } else {
        c_q.iter().map(|c| c * c).sum::<f64>().sqrt()
    };
    Ok(CommutatorScanReport {
        variant,
        family: variant.family(),
        bracket: variant.bracket(),
        dim,
        points_per_axis: grid.points_per_axis(),
        weight_exponent: s,
        lp_exponent: p,
        normalizer_labels: [norms[0].label(), norms[1].label()],
        normalizers: values,
        q: qs,
        bracket_norms: raw,
        c_q,
        statistic_kind: if r == 1.0 { "l1".into() } else { "l2".into() },
        statistic,
    })
}

/// Every variant applicable in the grid's dimension.
pub fn scan_all(part: &DyadicPartition, fields: &ScanFields, indices: &Indices) -> Result<Vec<CommutatorScanReport>> {
    CommutatorVariant::all()
        .iter()
        .filter(|v| !v.is_low_frequency() || fields.grid().dim() > 2)
        .map(|&v| commutator_scan(part, fields, v, indices))
        .collect()
}
