use alloc::string::String;

use crate::error::{Error, Result};
use crate::model::{ModelConstants, TechChange};
use crate::thermo::PhysicalState;
use crate::units;

use super::schedule::{DecaySpec, Discovery, Schedule};

/// Technological change, given either as a total or by components.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TechSpec {
    Total(f64),
    Components(TechChange),
}

impl TechSpec {
    pub fn eta_tech(&self) -> f64 {
        match self {
            TechSpec::Total(v) => *v,
            TechSpec::Components(c) => c.total(),
        }
    }
}

/// Gaussian perturbation of η, standard deviation `sigma` per √year.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnsembleSpec {
    pub members: usize,
    pub noise: NoiseSpec,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.members < 1 {
            return Err(Error::InvalidParameter { name: "members", reason: "must be at least 1" });
        }
        if !(self.noise.sigma.is_finite() && self.noise.sigma >= 0.0) {
            return Err(Error::InvalidParameter { name: "sigma", reason: "must be finite and non-negative" });
        }
        Ok(())
    }
}

/// Inputs for the coupled physical simulation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalScenario {
    pub initial: PhysicalState,
    pub constants: ModelConstants,
    pub discovery: Discovery,
    /// `η_e = d ln e_S^tot / dt`.
    pub efficiency: Schedule,
    pub decay: DecaySpec,
    pub dt: f64,
    pub horizon: f64,
}

impl PhysicalScenario {
    /// Constant discovery and decay taken from `initial`, fixed specific enthalpy.
    pub fn from_state(initial: PhysicalState, constants: ModelConstants, dt: f64, horizon: f64) -> Self {
        PhysicalScenario {
            discovery: Discovery::Rate(Schedule::Constant(initial.discovery)),
            decay: DecaySpec::Fraction(Schedule::Constant(initial.delta)),
            efficiency: Schedule::Constant(0.0),
            initial,
            constants,
            dt,
            horizon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.initial.validate()?;
        self.constants.validate()?;
        if let Discovery::Rate(s) = &self.discovery {
            s.validate("discovery")?;
        }
        self.efficiency.validate("eta_e")?;
        match &self.decay {
            DecaySpec::Fraction(s) => s.validate("delta")?,
            DecaySpec::Flux(s) => s.validate("decay_flux")?,
        }
        super::step_count(self.dt, self.horizon).map(|_| ())
    }
}

/// Fiscal-layer scenario.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScenarioParams {
    pub id: String,
    pub eta0: f64,
    pub tech: TechSpec,
    /// Initial wealth; 100 index units unless configured.
    pub c0: f64,
    pub dt: f64,
    pub horizon: f64,
    /// W per $1000, used for the energy read-out.
    pub lambda: f64,
    /// |η| beyond which a trajectory is declared collapsed, 1/yr.
    pub blowup_bound: f64,
    pub ensemble: Option<EnsembleSpec>,
    pub physical: Option<PhysicalScenario>,
}

impl ScenarioParams {
    pub const DEFAULT_C0: f64 = 100.0;
    pub const DEFAULT_BLOWUP_BOUND: f64 = 10.0;

    pub fn new(eta0: f64, eta_tech: f64, dt: f64, horizon: f64) -> Self {
        ScenarioParams {
            id: String::from("scenario"),
            eta0,
            tech: TechSpec::Total(eta_tech),
            c0: Self::DEFAULT_C0,
            dt,
            horizon,
            lambda: units::DEFAULT_LAMBDA,
            blowup_bound: Self::DEFAULT_BLOWUP_BOUND,
            ensemble: None,
            physical: None,
        }
    }

    pub fn eta_tech(&self) -> f64 {
        self.tech.eta_tech()
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, reason: "must be finite" })
            }
        };
        finite("eta0", self.eta0)?;
        finite("eta_tech", self.eta_tech())?;
        if !(self.c0.is_finite() && self.c0 > 0.0) {
            return Err(Error::InvalidParameter { name: "c0", reason: "must be positive" });
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidParameter { name: "lambda", reason: "must be positive" });
        }
        if !(self.blowup_bound > 0.0) {
            return Err(Error::InvalidParameter { name: "blowup_bound", reason: "must be positive" });
        }
        super::step_count(self.dt, self.horizon)?;
        if let Some(e) = &self.ensemble {
            e.validate()?;
        }
        if let Some(p) = &self.physical {
            p.validate()?;
        }
        Ok(())
    }
}
