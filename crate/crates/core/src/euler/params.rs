use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Branch of the symmetrization: sound-speed variable for `γ > 1`,
/// log-density variable for `γ = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Isentropic,
    Isothermal,
}

/// Smallest accepted `γ - 1` on the isentropic branch.
pub const MIN_GAMMA_GAP: f64 = 1e-8;

/// Wire form of [`PhysicalParams`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    #[serde(rename = "A")]
    pub pressure_const: f64,
    pub gamma: f64,
    #[serde(rename = "a")]
    pub damping: f64,
    pub n_bar: f64,
}

/// Pressure law `p = A n^γ`, damping `a`, background density `n̄`, and the
/// background sound speed `ψ̄ = √(Aγ) n̄^{(γ-1)/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamSpec", into = "ParamSpec")]
pub struct PhysicalParams {
    pressure_const: f64,
    gamma: f64,
    damping: f64,
    n_bar: f64,
    psi_bar: f64,
}

impl TryFrom<ParamSpec> for PhysicalParams {
    type Error = Error;
    fn try_from(s: ParamSpec) -> Result<Self> {
        PhysicalParams::new(s.pressure_const, s.gamma, s.damping, s.n_bar)
    }
}

impl From<PhysicalParams> for ParamSpec {
    fn from(p: PhysicalParams) -> Self {
        ParamSpec {
            pressure_const: p.pressure_const,
            gamma: p.gamma,
            damping: p.damping,
            n_bar: p.n_bar,
        }
    }
}

impl PhysicalParams {
    pub fn new(pressure_const: f64, gamma: f64, damping: f64, n_bar: f64) -> Result<Self> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(pressure_const) {
            return Err(Error::InvalidParams(format!(
                "A must be positive, got {pressure_const}"
            )));
        }
        if !positive(damping) {
            return Err(Error::InvalidParams(format!("a must be positive, got {damping}")));
        }
        if !positive(n_bar) {
            return Err(Error::InvalidParams(format!("n_bar must be positive, got {n_bar}")));
        }
        if !(gamma.is_finite() && gamma >= 1.0) {
            return Err(Error::InvalidParams(format!("gamma must be >= 1, got {gamma}")));
        }
        if gamma > 1.0 && gamma - 1.0 < MIN_GAMMA_GAP {
            return Err(Error::InvalidParams(format!(
                "gamma = {gamma} is too close to 1; use gamma = 1 for the isothermal branch"
            )));
        }
        let psi_bar = (pressure_const * gamma).sqrt() * n_bar.powf((gamma - 1.0) / 2.0);
        Ok(PhysicalParams {
            pressure_const,
            gamma,
            damping,
            n_bar,
            psi_bar,
        })
    }

    pub fn pressure_const(&self) -> f64 {
        self.pressure_const
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }

    pub fn psi_bar(&self) -> f64 {
        self.psi_bar
    }

    pub fn branch(&self) -> Branch {
        if self.gamma == 1.0 {
            Branch::Isothermal
        } else {
            Branch::Isentropic
        }
    }

    /// `(γ - 1)/2`; zero on the isothermal branch.
    pub fn coupling(&self) -> f64 {
        (self.gamma - 1.0) / 2.0
    }

    /// Linear wave speed of the symmetric system: `ψ̄`, or `√A` when `γ = 1`
    /// (the two coincide).
    pub fn wave_speed(&self) -> f64 {
        match self.branch() {
            Branch::Isentropic => self.psi_bar,
            Branch::Isothermal => self.pressure_const.sqrt(),
        }
    }

    /// `ψ(n) = √(p'(n))` at a single density.
    pub fn sound_speed_at(&self, n: f64) -> f64 {
        (self.pressure_const * self.gamma).sqrt() * n.powf((self.gamma - 1.0) / 2.0)
    }

    pub fn with_damping(&self, damping: f64) -> Result<Self> {
        Self::new(self.pressure_const, self.gamma, damping, self.n_bar)
    }
}
