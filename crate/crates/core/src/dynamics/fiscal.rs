use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Result;
use crate::math;
use crate::model::{self, GrowthMode, Regime};
use crate::units;

use super::scenario::ScenarioParams;

/// One sample of a fiscal trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectoryPoint {
    pub t: f64,
    pub eta: f64,
    pub wealth: f64,
    pub output: f64,
    /// Primary power implied by wealth through λ, TW per trillion.
    pub energy: f64,
    pub innovation: f64,
    pub gdp_growth: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectoryMeta {
    pub scenario_id: String,
    pub blowup_time: Option<f64>,
    pub terminal_mode: Option<GrowthMode>,
    /// The run stopped before the horizon.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub meta: TrajectoryMeta,
}

/// Advance `(η, ln C)` by one RK4 step of length `h`.
///
/// Integrates the reciprocal `u = 1/η`, for which `du/dt = 2 − η_tech·u` is
/// linear, together with `d ln C/dt = 1/u`. Returns `None` when `u` changes
/// sign inside the step: η has passed through −∞.
pub fn fiscal_step(eta: f64, ln_c: f64, eta_tech: f64, h: f64) -> Option<(f64, f64)> {
    if eta == 0.0 {
        return Some((0.0, ln_c));
    }
    let u0 = 1.0 / eta;
    let positive = u0 > 0.0;
    let same_side = |u: f64| if positive { u > 0.0 } else { u < 0.0 };
    let f = |u: f64| 2.0 - eta_tech * u;

    let k1 = f(u0);
    let u1 = u0 + 0.5 * h * k1;
    if !same_side(u1) {
        return None;
    }
    let k2 = f(u1);
    let u2 = u0 + 0.5 * h * k2;
    if !same_side(u2) {
        return None;
    }
    let k3 = f(u2);
    let u3 = u0 + h * k3;
    if !same_side(u3) {
        return None;
    }
    let k4 = f(u3);
    let u = u0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if !same_side(u) {
        return None;
    }
    let growth = h / 6.0 * (1.0 / u0 + 2.0 / u1 + 2.0 / u2 + 1.0 / u3);
    Some((1.0 / u, ln_c + growth))
}

pub(crate) fn point(t: f64, eta: f64, ln_c: f64, eta_tech: f64, lambda: f64) -> TrajectoryPoint {
    let wealth = math::exp(ln_c);
    let innovation = eta_tech - 2.0 * eta;
    TrajectoryPoint {
        t,
        eta,
        wealth,
        output: eta * wealth,
        energy: units::power_tw(lambda, wealth),
        innovation,
        gdp_growth: eta + innovation,
    }
}

/// Deterministic fiscal trajectory on the grid `0, dt, …, horizon`.
///
/// A run that collapses returns the samples up to the last finite step with
/// `truncated` set and a Collapse terminal mode.
pub fn integrate_fiscal(params: &ScenarioParams) -> Result<Trajectory> {
    params.validate()?;
    let steps = super::step_count(params.dt, params.horizon)?;
    let eta_tech = params.eta_tech();
    let mode = model::classify_mode(eta_tech, params.eta0).ok();

    let mut points = Vec::with_capacity(steps + 1);
    let (mut eta, mut ln_c) = (params.eta0, math::ln(params.c0));
    points.push(point(0.0, eta, ln_c, eta_tech, params.lambda));
    let mut truncated = false;
    for i in 1..=steps {
        match fiscal_step(eta, ln_c, eta_tech, params.dt) {
            Some((e, l)) if e.abs() <= params.blowup_bound => {
                eta = e;
                ln_c = l;
            }
            _ => {
                truncated = true;
                break;
            }
        }
        points.push(point(i as f64 * params.dt, eta, ln_c, eta_tech, params.lambda));
    }

    let blowup_time = model::blowup_time(params.eta0, eta_tech);
    let terminal_mode = if truncated {
        Some(GrowthMode { regime: Regime::Collapse, limiting_rate: f64::NEG_INFINITY })
    } else {
        mode
    };
    Ok(Trajectory {
        points,
        meta: TrajectoryMeta { scenario_id: params.id.clone(), blowup_time, terminal_mode, truncated },
    })
}

/// Value of a wealth index at `t = 0`.
pub const WEALTH_INDEX_BASE: f64 = 100.0;

/// `100 · C(t)/C(0)`.
pub fn wealth_index(trajectory: &Trajectory) -> Vec<(f64, f64)> {
    let Some(first) = trajectory.points.first() else {
        return Vec::new();
    };
    let c0 = first.wealth;
    trajectory.points.iter().map(|p| (p.t, WEALTH_INDEX_BASE * p.wealth / c0)).collect()
}
