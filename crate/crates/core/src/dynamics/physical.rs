//! Coupled reserve/system integration.
//!
//! State `[N_S, ΔH_R, ln e_S^tot, consumed]` is stepped with RK4; every other
//! quantity is read off the state at the sample times.

use alloc::vec::Vec;

use crate::error::Result;
use crate::math;
use crate::model::{self, TechChange};
use crate::thermo::{self, DecaySource, FlowPair, PhysicalState};
use crate::units;

use super::fiscal::{Trajectory, TrajectoryMeta, TrajectoryPoint};
use super::rk4::rk4_step;
use super::scenario::PhysicalScenario;
use super::schedule::{DecaySpec, Discovery};

/// Physical quantities at one sample time.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalPoint {
    pub t: f64,
    pub state: PhysicalState,
    pub flows: FlowPair,
    pub tech: TechChange,
    pub eta: f64,
    /// Cumulative `∫ a dt`.
    pub consumed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PhysicalEvent {
    /// ΔH_R was driven below zero and clamped; consumption stops.
    ReservesExhausted { t: f64 },
    /// N_S reached zero; the run ends.
    SystemDissolved { t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalRun {
    pub trajectory: Trajectory,
    pub points: Vec<PhysicalPoint>,
    pub events: Vec<PhysicalEvent>,
}

const N_S: usize = 0;
const H_R: usize = 1;
const LN_E: usize = 2;
const CONSUMED: usize = 3;

struct Model<'a> {
    s: &'a PhysicalScenario,
}

impl Model<'_> {
    fn consumption(&self, y: &[f64; 4]) -> f64 {
        let c = &self.s.constants;
        c.alpha * c.k * math::cbrt(y[N_S].max(0.0)) * y[H_R].max(0.0)
    }

    fn discovery(&self, t: f64, a: f64) -> f64 {
        match &self.s.discovery {
            Discovery::Rate(s) => s.value(t),
            Discovery::MatchConsumption => a,
        }
    }

    fn rhs(&self, t: f64, y: &[f64; 4]) -> [f64; 4] {
        let a = self.consumption(y);
        let e = math::exp(y[LN_E]);
        let j_a = a / e;
        let j_d = match &self.s.decay {
            DecaySpec::Fraction(s) => s.value(t) * j_a,
            DecaySpec::Flux(s) => s.value(t),
        };
        [j_a - j_d, self.discovery(t, a) - a, self.s.efficiency.value(t), a]
    }

    fn observe(&self, t: f64, y: &[f64; 4]) -> Result<(PhysicalPoint, TrajectoryPoint)> {
        let n_s = y[N_S];
        let h = y[H_R];
        let a = self.consumption(y);
        let d_res = self.discovery(t, a);
        let eta_e = self.s.efficiency.value(t);

        let mut state = self.s.initial;
        state.n_s = n_s;
        state.delta_h_r = h;
        state.e_s_tot = math::exp(y[LN_E]);
        state.discovery = d_res;

        let j_a = a / state.e_s_tot;
        let eta_r_net = if h > 0.0 {
            (d_res - a) / h
        } else if d_res == a {
            0.0
        } else {
            (d_res - a) * f64::INFINITY
        };
        let (delta, d_delta) = match &self.s.decay {
            DecaySpec::Fraction(s) => {
                state.delta_source = DecaySource::Exogenous;
                (s.value(t), s.derivative(t))
            }
            DecaySpec::Flux(s) => {
                state.delta_source = DecaySource::Derived;
                let delta = s.value(t) / j_a;
                let j_net = j_a - s.value(t);
                let dj_a = j_a * (j_net / (3.0 * n_s) + eta_r_net - eta_e);
                (delta, (s.derivative(t) - delta * dj_a) / j_a)
            }
        };
        state.delta = delta;
        let flows = thermo::material_flows(&state, a, delta * a)?;
        let eta = thermo::eta_from_physical(&state, &self.s.constants).value();
        let tech = TechChange { eta_delta: thermo::longevity_from_decay(delta, d_delta), eta_r_net, eta_e };
        let innovation = tech.total() - 2.0 * eta;

        let wealth = units::wealth_trillion(self.s.constants.lambda, a);
        let fiscal = TrajectoryPoint {
            t,
            eta,
            wealth,
            output: eta * wealth,
            energy: a,
            innovation,
            // fiscal-law growth; the read-out C = a/λ follows it only while D = a
            gdp_growth: eta + innovation,
        };
        let point = PhysicalPoint { t, state, flows, tech, eta, consumed: y[CONSUMED] };
        Ok((point, fiscal))
    }
}

/// Integrate the coupled model on `0, dt, …, horizon`.
pub fn integrate_physical(scenario: &PhysicalScenario) -> Result<PhysicalRun> {
    scenario.validate()?;
    let steps = super::step_count(scenario.dt, scenario.horizon)?;
    let model = Model { s: scenario };
    let init = &scenario.initial;
    let mut y = [init.n_s, init.delta_h_r, math::ln(init.e_s_tot), 0.0];

    let mut points = Vec::with_capacity(steps + 1);
    let mut fiscal = Vec::with_capacity(steps + 1);
    let mut events = Vec::new();
    let mut record = |t: f64, y: &[f64; 4]| -> Result<()> {
        let (p, f) = model.observe(t, y)?;
        points.push(p);
        fiscal.push(f);
        Ok(())
    };
    record(0.0, &y)?;

    let mut truncated = false;
    let mut exhausted = false;
    for i in 1..=steps {
        let t0 = (i - 1) as f64 * scenario.dt;
        let t = i as f64 * scenario.dt;
        y = rk4_step(|t, y| model.rhs(t, y), t0, &y, scenario.dt);
        if y[H_R] < 0.0 {
            // the overshoot was never available to consume
            y[CONSUMED] += y[H_R];
            y[H_R] = 0.0;
            if !exhausted {
                events.push(PhysicalEvent::ReservesExhausted { t });
                exhausted = true;
            }
        }
        if !(y[N_S] > 0.0) || y.iter().any(|v| !v.is_finite()) {
            events.push(PhysicalEvent::SystemDissolved { t });
            truncated = true;
            break;
        }
        record(t, &y)?;
    }

    let last = fiscal.last().copied();
    let terminal_mode = last.and_then(|p| model::classify_mode(p.innovation + 2.0 * p.eta, p.eta).ok());
    let trajectory = Trajectory {
        points: fiscal,
        meta: TrajectoryMeta {
            scenario_id: Default::default(),
            blowup_time: None,
            terminal_mode,
            truncated,
        },
    };
    Ok(PhysicalRun { trajectory, points, events })
}
