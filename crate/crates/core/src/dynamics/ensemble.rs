//! Stochastic ensembles of the fiscal rate of return.
//!
//! Member `i` draws from `ChaCha8(seed)` on stream `i`, so its path depends
//! only on `(seed, i)` and never on how members are scheduled.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::math;

use super::fiscal::{fiscal_step, WEALTH_INDEX_BASE};
use super::quantile::quantiles_in_place;
use super::scenario::ScenarioParams;

pub const QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

/// 5/25/50/75/95 percent quantiles at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Band(pub [f64; 5]);

impl Band {
    pub fn from_values(values: &mut [f64]) -> Band {
        Band(quantiles_in_place(values, &QUANTILE_LEVELS))
    }

    pub fn q05(&self) -> f64 {
        self.0[0]
    }

    pub fn median(&self) -> f64 {
        self.0[2]
    }

    pub fn q95(&self) -> f64 {
        self.0[4]
    }

    /// Inside the 5–95 envelope, inclusive.
    pub fn contains(&self, x: f64) -> bool {
        self.q05() <= x && x <= self.q95()
    }

    pub fn is_nested(&self) -> bool {
        self.0.windows(2).all(|w| w[0].total_cmp(&w[1]).is_le())
    }
}

#[derive(Debug, Clone)]
pub struct Member {
    eta: f64,
    ln_c: f64,
    collapsed: bool,
    rng: ChaCha8Rng,
}

impl Member {
    pub fn is_collapsed(&self) -> bool {
        self.collapsed
    }

    /// η, or −∞ once collapsed.
    pub fn eta(&self) -> f64 {
        if self.collapsed {
            f64::NEG_INFINITY
        } else {
            self.eta
        }
    }
}

/// Everything a member needs to step, shared read-only across threads.
#[derive(Debug, Clone)]
pub struct EnsemblePlan {
    eta0: f64,
    ln_c0: f64,
    eta_tech: f64,
    dt: f64,
    steps: usize,
    bound: f64,
    noise_scale: f64,
    seed: u64,
    members: usize,
}

impl EnsemblePlan {
    pub fn new(params: &ScenarioParams) -> Result<Self> {
        params.validate()?;
        let spec = params
            .ensemble
            .ok_or(Error::InvalidParameter { name: "members", reason: "ensemble settings are required" })?;
        Ok(EnsemblePlan {
            eta0: params.eta0,
            ln_c0: math::ln(params.c0),
            eta_tech: params.eta_tech(),
            dt: params.dt,
            steps: super::step_count(params.dt, params.horizon)?,
            bound: params.blowup_bound,
            noise_scale: spec.noise.sigma * math::sqrt(params.dt),
            seed: spec.noise.seed,
            members: spec.members,
        })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn members(&self) -> usize {
        self.members
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|i| i as f64 * self.dt).collect()
    }

    pub fn member(&self, index: usize) -> Member {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        Member { eta: self.eta0, ln_c: self.ln_c0, collapsed: false, rng }
    }

    /// Deterministic step, then `η += σ√dt·ξ`.
    pub fn step(&self, m: &mut Member) {
        if m.collapsed {
            return;
        }
        match fiscal_step(m.eta, m.ln_c, self.eta_tech, self.dt) {
            Some((eta, ln_c)) => {
                let xi: f64 = if self.noise_scale > 0.0 { StandardNormal.sample(&mut m.rng) } else { 0.0 };
                m.eta = eta + self.noise_scale * xi;
                m.ln_c = ln_c;
                if !(m.eta.abs() <= self.bound) {
                    m.collapsed = true;
                }
            }
            None => m.collapsed = true,
        }
    }

    /// Wealth index, 100 at `t = 0`; 0 once collapsed.
    pub fn wealth_index(&self, m: &Member) -> f64 {
        if m.collapsed {
            0.0
        } else {
            WEALTH_INDEX_BASE * math::exp(m.ln_c - self.ln_c0)
        }
    }

    /// Step `eta_out.len()` times, recording the sample after each step.
    pub fn advance(&self, m: &mut Member, eta_out: &mut [f64], wealth_out: &mut [f64]) {
        debug_assert_eq!(eta_out.len(), wealth_out.len());
        for (e, w) in eta_out.iter_mut().zip(wealth_out.iter_mut()) {
            self.step(m);
            *e = m.eta();
            *w = self.wealth_index(m);
        }
    }

    /// The noiseless path on the same grid, η and wealth index.
    pub fn deterministic(&self) -> (Vec<f64>, Vec<f64>) {
        let mut m = Member { eta: self.eta0, ln_c: self.ln_c0, collapsed: false, rng: ChaCha8Rng::seed_from_u64(0) };
        let quiet = EnsemblePlan { noise_scale: 0.0, ..self.clone() };
        let mut eta = vec![0.0; self.steps + 1];
        let mut wealth = vec![0.0; self.steps + 1];
        eta[0] = self.eta0;
        wealth[0] = WEALTH_INDEX_BASE;
        quiet.advance(&mut m, &mut eta[1..], &mut wealth[1..]);
        (eta, wealth)
    }

    /// Band at `t = 0`, where every member sits at the initial state.
    pub fn initial_bands(&self) -> (Band, Band) {
        (Band([self.eta0; 5]), Band([WEALTH_INDEX_BASE; 5]))
    }

    pub fn finish(&self, eta_bands: Vec<Band>, wealth_bands: Vec<Band>, collapsed: usize) -> EnsembleResult {
        let (deterministic_eta, deterministic_wealth) = self.deterministic();
        EnsembleResult {
            times: self.times(),
            eta_bands,
            wealth_bands,
            deterministic_eta,
            deterministic_wealth,
            collapsed_members: collapsed,
            collapse_fraction: collapsed as f64 / self.members as f64,
            member_count: self.members,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnsembleResult {
    pub times: Vec<f64>,
    pub eta_bands: Vec<Band>,
    /// Bands of the wealth index `100·C(t)/C₀`.
    pub wealth_bands: Vec<Band>,
    pub deterministic_eta: Vec<f64>,
    pub deterministic_wealth: Vec<f64>,
    pub collapsed_members: usize,
    pub collapse_fraction: f64,
    pub member_count: usize,
    pub seed: u64,
}

/// Single-threaded ensemble run.
pub fn run_ensemble(params: &ScenarioParams) -> Result<EnsembleResult> {
    let plan = EnsemblePlan::new(params)?;
    let n = plan.members();
    let mut members: Vec<Member> = (0..n).map(|i| plan.member(i)).collect();
    let mut eta = vec![0.0; n];
    let mut wealth = vec![0.0; n];
    let (e0, w0) = plan.initial_bands();
    let mut eta_bands = Vec::with_capacity(plan.steps() + 1);
    let mut wealth_bands = Vec::with_capacity(plan.steps() + 1);
    eta_bands.push(e0);
    wealth_bands.push(w0);
    for _ in 0..plan.steps() {
        for (j, m) in members.iter_mut().enumerate() {
            plan.step(m);
            eta[j] = m.eta();
            wealth[j] = plan.wealth_index(m);
        }
        eta_bands.push(Band::from_values(&mut eta));
        wealth_bands.push(Band::from_values(&mut wealth));
    }
    let collapsed = members.iter().filter(|m| m.is_collapsed()).count();
    Ok(plan.finish(eta_bands, wealth_bands, collapsed))
}
