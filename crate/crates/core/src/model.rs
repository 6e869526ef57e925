//! Fiscal-layer mathematics.
//!
//! The rate of return on wealth η evolves by the logistic law
//! `dη/dt = η_tech·η − 2η²`, whose constant-forcing solution is a sigmoid
//! controlled by the growth number `G = η_tech / 2η₀`.

use crate::error::{domain, Error, Result};
use crate::math;
use crate::units;

/// Below this |η_tech| (per year) the closed form switches to its analytic
/// limit `η₀/(1 + 2η₀t)`.
pub const TECH_ZERO_THRESHOLD: f64 = 1e-12;

/// Rate of return, fraction per year. Negative values are decay; `-inf` marks
/// a trajectory past its collapse singularity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateOfReturn(pub f64);

impl RateOfReturn {
    pub const COLLAPSED: RateOfReturn = RateOfReturn(f64::NEG_INFINITY);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_collapsed(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl From<RateOfReturn> for f64 {
    fn from(r: RateOfReturn) -> f64 {
        r.0
    }
}

/// Components of technological change: longevity gains, net reserve expansion
/// and growth of the specific enthalpy of raw-material incorporation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TechChange {
    pub eta_delta: f64,
    pub eta_r_net: f64,
    pub eta_e: f64,
}

impl TechChange {
    pub fn total(&self) -> f64 {
        self.eta_delta + self.eta_r_net - self.eta_e
    }
}

/// The five growth regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Regime {
    /// G > 1, η₀ > 0: rates of return rise towards η_tech/2.
    Innovation,
    /// 0 < G < 1, η₀ > 0: rates of return fall towards η_tech/2.
    DiminishingReturnsTC,
    /// G < 0, η₀ > 0: rates of return fall towards zero.
    DiminishingReturnsTD,
    /// G > 1, η₀ < 0: decay slows towards zero.
    Decay,
    /// G < 1, η₀ < 0: decay accelerates to a finite-time singularity.
    Collapse,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Innovation => "Innovation",
            Regime::DiminishingReturnsTC => "DR and TC",
            Regime::DiminishingReturnsTD => "DR and TD",
            Regime::Decay => "Decay",
            Regime::Collapse => "Collapse",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Regime::Innovation => "innovation",
            Regime::DiminishingReturnsTC => "dr_tc",
            Regime::DiminishingReturnsTD => "dr_td",
            Regime::Decay => "decay",
            Regime::Collapse => "collapse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GrowthMode {
    pub regime: Regime,
    /// Rate approached as t → ∞; `-inf` for collapse.
    pub limiting_rate: f64,
}

/// Constants tying the fiscal and physical layers together.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelConstants {
    /// W per $1000 (2005 USD).
    pub lambda: f64,
    /// Rate coefficient of consumption, 1/yr. Not known for civilization.
    pub alpha: f64,
    /// Interface shape coefficient.
    pub k: f64,
    /// Potential step per reserve unit.
    pub delta_mu: f64,
}

impl Default for ModelConstants {
    fn default() -> Self {
        ModelConstants {
            lambda: units::DEFAULT_LAMBDA,
            alpha: 1.0,
            k: units::spherical_shape_coefficient(),
            delta_mu: 1.0,
        }
    }
}

impl ModelConstants {
    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, reason: "must be finite and positive" })
            }
        };
        positive("lambda", self.lambda)?;
        positive("alpha", self.alpha)?;
        positive("k", self.k)?;
        positive("delta_mu", self.delta_mu)
    }
}

/// Wealth, real output and the primary power they are tied to.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiscalState {
    /// Trillion 2005 USD.
    pub wealth_c: f64,
    /// Trillion 2005 USD per year.
    pub output_y: f64,
    /// Terawatts.
    pub energy_a: f64,
    /// Nominal production coefficient, 1/yr.
    pub beta: f64,
    /// Real-output correction coefficient, 1/yr.
    pub gamma: f64,
}

impl FiscalState {
    /// Builds the state from wealth and the source/sink split `η = β − γ`.
    pub fn new(wealth_c: f64, beta: f64, gamma: f64, lambda: f64) -> Result<Self> {
        if !(wealth_c.is_finite() && wealth_c > 0.0) {
            return Err(domain("wealth_c", wealth_c));
        }
        Ok(FiscalState {
            wealth_c,
            output_y: (beta - gamma) * wealth_c,
            energy_a: units::power_tw(lambda, wealth_c),
            beta,
            gamma,
        })
    }

    pub fn rate_of_return(&self) -> f64 {
        self.beta - self.gamma
    }

    /// Nominal output `Ŷ = βC`.
    pub fn nominal_output(&self) -> f64 {
        self.beta * self.wealth_c
    }
}

/// `G = η_tech / 2η₀`.
pub fn growth_number(eta_tech: f64, eta0: f64) -> Result<f64> {
    if eta0 == 0.0 {
        return Err(Error::DegenerateInitialRate);
    }
    Ok(eta_tech / (2.0 * eta0))
}

pub fn classify_mode(eta_tech: f64, eta0: f64) -> Result<GrowthMode> {
    if !eta_tech.is_finite() {
        return Err(domain("eta_tech", eta_tech));
    }
    if !eta0.is_finite() {
        return Err(domain("eta0", eta0));
    }
    let mode = |regime, limiting_rate| Ok(GrowthMode { regime, limiting_rate });
    if eta0 == 0.0 {
        // η = 0 is a fixed point; only the non-positive forcing side is stable.
        return if eta_tech <= 0.0 {
            mode(Regime::DiminishingReturnsTD, 0.0)
        } else {
            Err(Error::InnovationBoundary { eta_tech })
        };
    }
    let g = growth_number(eta_tech, eta0)?;
    if eta0 > 0.0 {
        if g > 1.0 {
            mode(Regime::Innovation, eta_tech / 2.0)
        } else if g > 0.0 {
            mode(Regime::DiminishingReturnsTC, eta_tech / 2.0)
        } else {
            mode(Regime::DiminishingReturnsTD, 0.0)
        }
    } else if g > 1.0 {
        mode(Regime::Decay, 0.0)
    } else if g < 1.0 {
        mode(Regime::Collapse, f64::NEG_INFINITY)
    } else {
        // Unstable constant fixed point η = η_tech/2 = η₀ < 0.
        mode(Regime::Decay, eta0)
    }
}

/// Time at which the closed-form solution diverges to −∞, if it does.
///
/// The denominator `1 + (G−1)e^{−η_tech t}` vanishes at `t* = ln(1−G)/η_tech`,
/// which is positive exactly when η₀ < 0 and G < 1.
pub fn blowup_time(eta0: f64, eta_tech: f64) -> Option<f64> {
    if !(eta0 < 0.0) {
        return None;
    }
    if eta_tech.abs() < TECH_ZERO_THRESHOLD {
        return Some(-1.0 / (2.0 * eta0));
    }
    let g = eta_tech / (2.0 * eta0);
    if g < 1.0 {
        Some(math::ln1p(-g) / eta_tech)
    } else {
        None
    }
}

/// Closed-form rate of return at time `t` for constant technological change.
///
/// Evaluated as `η₀ / (e^{−rt} + 2η₀(1 − e^{−rt})/r)`, algebraically the
/// sigmoid `Gη₀/(1 + (G−1)e^{−rt})` but regular as `r → 0` and at `η₀ = 0`.
pub fn eta_closed_form(t: f64, eta0: f64, eta_tech: f64) -> RateOfReturn {
    if t == 0.0 || eta0 == 0.0 {
        return RateOfReturn(eta0);
    }
    if let Some(t_star) = blowup_time(eta0, eta_tech) {
        if t >= t_star {
            return RateOfReturn::COLLAPSED;
        }
    }
    let denom = if eta_tech.abs() < TECH_ZERO_THRESHOLD {
        1.0 + 2.0 * eta0 * t
    } else {
        let decay = math::exp(-eta_tech * t);
        let growth = -math::expm1(-eta_tech * t) / eta_tech;
        decay + 2.0 * eta0 * growth
    };
    RateOfReturn(eta0 / denom)
}

/// `dη/dt = η_tech·η − 2η²`.
pub fn eta_rhs(eta: f64, eta_tech: f64) -> f64 {
    eta * (eta_tech - 2.0 * eta)
}

/// Innovation rate `d ln η/dt = η_tech − 2η`.
pub fn innovation_rate(eta: f64, eta_tech: f64) -> Result<f64> {
    if eta == 0.0 {
        return Err(Error::UndefinedLogarithm);
    }
    Ok(eta_tech - 2.0 * eta)
}

/// Real GDP growth `d ln Y/dt = η_tech − η`.
pub fn gdp_growth_rate(eta: f64, eta_tech: f64) -> f64 {
    eta_tech - eta
}

/// GDP growth as the sum of the rate of return and the innovation rate.
pub fn gdp_growth_two_term(eta: f64, eta_tech: f64) -> Result<f64> {
    Ok(eta + innovation_rate(eta, eta_tech)?)
}

/// Characteristic time of the exponential phase of the sigmoid, `1/η_tech`.
pub fn characteristic_time(eta_tech: f64) -> f64 {
    1.0 / eta_tech
}

/// A value that saturates to ±∞ instead of failing.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Saturating {
    pub value: f64,
    pub overflowed: bool,
}

/// Wealth under a constant innovation time `tau_eta`:
/// `C = C₀ exp(η τ (e^{t/τ} − 1))`. `tau_eta = ±inf` gives `C₀ e^{ηt}`.
pub fn wealth_super_exponential(t: f64, c0: f64, eta: f64, tau_eta: f64) -> Result<Saturating> {
    if !(c0 > 0.0) {
        return Err(domain("c0", c0));
    }
    if tau_eta == 0.0 || tau_eta.is_nan() {
        return Err(domain("tau_eta", tau_eta));
    }
    let exponent = if tau_eta.is_infinite() {
        eta * t
    } else {
        eta * tau_eta * math::expm1(t / tau_eta)
    };
    let value = c0 * math::exp(exponent);
    Ok(Saturating { value, overflowed: value.is_infinite() })
}

/// Inflation `⟨i⟩ = γ/β`.
pub fn inflation_from_coefficients(beta: f64, gamma: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::InvalidNominalProduction { beta });
    }
    Ok(gamma / beta)
}

/// GDP deflator `Ŷ/Y ≃ 1 + ⟨i⟩`.
pub fn gdp_deflator(beta: f64, gamma: f64) -> Result<f64> {
    Ok(1.0 + inflation_from_coefficients(beta, gamma)?)
}

/// Inflation as the decay parameter δ = j_d/j_a.
///
/// First-order approximation, meaningful only while |i| ≪ 1. No cutoff is
/// enforced.
pub fn inflation_from_decay(delta: f64) -> f64 {
    delta
}
