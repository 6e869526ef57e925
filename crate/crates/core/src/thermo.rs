//! Physical-layer quantities: accumulated size, reserve enthalpy, material
//! flows and the rate of return they imply.
//!
//! Reserve enthalpy `ΔH_R` is stored directly; the count of reserve units is
//! derived as `N_R = ΔH_R / Δμ` when needed.

use crate::error::{domain, Error, Result};
use crate::math;
use crate::model::{ModelConstants, RateOfReturn};

/// Where the decay parameter δ of a state came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DecaySource {
    /// Set directly by a scenario.
    Exogenous,
    /// Computed as `j_d / j_a` from the current flow pair.
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalState {
    /// Matter units incorporated into the system, `N_S`.
    pub n_s: f64,
    /// Available reserve enthalpy `ΔH_R`.
    pub delta_h_r: f64,
    /// Energy dissipated per matter unit incorporated, `e_S^tot`.
    pub e_s_tot: f64,
    /// Degrees of freedom per matter unit, when the split `e_S^tot = ν e_S` is known.
    pub nu: Option<f64>,
    /// Decay parameter `δ = j_d / j_a`.
    pub delta: f64,
    pub delta_source: DecaySource,
    /// Reserve discovery rate `D` (power).
    pub discovery: f64,
}

impl PhysicalState {
    pub fn new(n_s: f64, delta_h_r: f64, e_s_tot: f64) -> Self {
        PhysicalState {
            n_s,
            delta_h_r,
            e_s_tot,
            nu: None,
            delta: 0.0,
            delta_source: DecaySource::Exogenous,
            discovery: 0.0,
        }
    }

    /// Sets `e_S^tot = ν · e_S`.
    pub fn with_degrees_of_freedom(mut self, nu: f64, e_s: f64) -> Self {
        self.nu = Some(nu);
        self.e_s_tot = nu * e_s;
        self
    }

    pub fn with_decay(mut self, delta: f64) -> Self {
        self.delta = delta;
        self.delta_source = DecaySource::Exogenous;
        self
    }

    pub fn with_discovery(mut self, discovery: f64) -> Self {
        self.discovery = discovery;
        self
    }

    /// Energy per degree of freedom, if ν is known.
    pub fn e_s(&self) -> Option<f64> {
        self.nu.map(|nu| self.e_s_tot / nu)
    }

    /// `N_R = ΔH_R / Δμ`.
    pub fn reserve_units(&self, delta_mu: f64) -> f64 {
        self.delta_h_r / delta_mu
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_s.is_finite() && self.n_s > 0.0) {
            return Err(domain("n_s", self.n_s));
        }
        if !(self.delta_h_r.is_finite() && self.delta_h_r >= 0.0) {
            return Err(domain("delta_h_r", self.delta_h_r));
        }
        if !(self.e_s_tot.is_finite() && self.e_s_tot > 0.0) {
            return Err(domain("e_s_tot", self.e_s_tot));
        }
        if !self.delta.is_finite() {
            return Err(domain("delta", self.delta));
        }
        if !self.discovery.is_finite() {
            return Err(domain("discovery", self.discovery));
        }
        Ok(())
    }
}

/// Consumption and decay flows, in matter per unit time, with the powers that
/// drive them.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlowPair {
    pub j_a: f64,
    pub j_d: f64,
    pub j_net: f64,
    pub a: f64,
    pub d: f64,
}

impl FlowPair {
    /// `δ = j_d / j_a`.
    pub fn delta(&self) -> f64 {
        self.j_d / self.j_a
    }

    /// Negative consumption flux: raw materials sourced from within.
    pub fn internal_sourcing(&self) -> bool {
        self.j_a < 0.0
    }
}

/// Interface size `N̆ = k N_S^{1/3} N_R`.
pub fn interface_size(n_s: f64, n_r: f64, k: f64) -> Result<f64> {
    if !(n_s >= 0.0) {
        return Err(domain("n_s", n_s));
    }
    if !(n_r >= 0.0) {
        return Err(domain("n_r", n_r));
    }
    if !(k >= 0.0) {
        return Err(domain("k", k));
    }
    Ok(k * math::cbrt(n_s) * n_r)
}

/// Length density times diffusivity, `Λ𝒟 = α k N_S^{1/3}`, so that `a = Λ𝒟·ΔH_R`.
pub fn length_diffusivity(state: &PhysicalState, alpha: f64, k: f64) -> f64 {
    alpha * k * math::cbrt(state.n_s)
}

/// Primary energy consumption `a = α k N_S^{1/3} ΔH_R`.
pub fn consumption_rate(state: &PhysicalState, alpha: f64, k: f64) -> f64 {
    length_diffusivity(state, alpha, k) * state.delta_h_r
}

pub fn material_flows(state: &PhysicalState, a: f64, d: f64) -> Result<FlowPair> {
    let e = state.e_s_tot;
    if !(e > 0.0) {
        return Err(domain("e_s_tot", e));
    }
    Ok(FlowPair { j_a: a / e, j_d: d / e, j_net: (a - d) / e, a, d })
}

/// Work rate, efficiency and the growth rate they imply.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WorkEfficiency {
    pub work: f64,
    pub efficiency: f64,
    pub eta: f64,
}

/// `w = ∂ΔG/∂t`, `ε = w/a`, `η = α ε`.
pub fn work_and_efficiency(a: f64, d_gibbs_dt: f64, alpha: f64) -> Result<WorkEfficiency> {
    if !(a > 0.0) {
        return Err(domain("a", a));
    }
    let efficiency = d_gibbs_dt / a;
    Ok(WorkEfficiency { work: d_gibbs_dt, efficiency, eta: alpha * efficiency })
}

/// Rate of return from the physical state,
/// `η = α k (1−δ) ΔH_R / (3 N_S^{2/3} e_S^tot)`.
///
/// Equivalent to `(1/3)(1−δ) j_a / N_S` with `j_a = a / e_S^tot`: current
/// growth is diluted in the accumulated size.
pub fn eta_from_physical(state: &PhysicalState, constants: &ModelConstants) -> RateOfReturn {
    let numer = constants.alpha * constants.k * (1.0 - state.delta) * state.delta_h_r;
    RateOfReturn(numer / (3.0 * math::two_thirds_power(state.n_s) * state.e_s_tot))
}

/// `η = (1/3)(1−δ) j_a / N_S = j_net / (3 N_S)` from a flow pair.
pub fn eta_from_flows(flows: &FlowPair, n_s: f64) -> f64 {
    flows.j_net / (3.0 * n_s)
}

/// Nominal production and decay coefficients `β = j_a/3N_S`, `γ = j_d/3N_S`.
pub fn production_coefficients(flows: &FlowPair, n_s: f64) -> (f64, f64) {
    (flows.j_a / (3.0 * n_s), flows.j_d / (3.0 * n_s))
}

/// Relative rates of reserve discovery and depletion.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReserveTendency {
    /// `η_D = D / ΔH_R`
    pub discovery: f64,
    /// `η_R = a / ΔH_R`
    pub depletion: f64,
}

impl ReserveTendency {
    /// `d ln ΔH_R / dt = η_D − η_R`.
    pub fn net(&self) -> f64 {
        self.discovery - self.depletion
    }
}

pub fn reserve_tendency(state: &PhysicalState, a: f64) -> Result<ReserveTendency> {
    let h = state.delta_h_r;
    if !(h > 0.0) {
        return Err(Error::ReservesExhausted { delta_h_r: h });
    }
    Ok(ReserveTendency { discovery: state.discovery / h, depletion: a / h })
}

/// Longevity contribution to technological change, `η_δ = −(∂j_d/∂t) / j_a`.
pub fn longevity_term(j_a: f64, dj_d_dt: f64) -> Result<f64> {
    if !(j_a > 0.0) {
        return Err(domain("j_a", j_a));
    }
    Ok(-dj_d_dt / j_a)
}

/// Exact longevity term `d ln(1−δ)/dt` from δ and its time derivative.
pub fn longevity_from_decay(delta: f64, d_delta_dt: f64) -> f64 {
    -d_delta_dt / (1.0 - delta)
}

/// Enthalpy of the system `H_S = N_S e_S^tot`.
pub fn enthalpy(state: &PhysicalState) -> f64 {
    state.n_s * state.e_s_tot
}

/// Heating leg timescale `2Δμ / a`. Diagnostic only.
pub fn tau_heat(delta_mu: f64, a: f64) -> f64 {
    2.0 * delta_mu / a
}

/// Dissipation leg timescale `2Δμ / d`. Diagnostic only.
pub fn tau_dissipation(delta_mu: f64, d: f64) -> f64 {
    2.0 * delta_mu / d
}

/// Growth timescale `N_S / j_net`.
pub fn tau_growth(n_s: f64, j_net: f64) -> f64 {
    n_s / j_net
}
