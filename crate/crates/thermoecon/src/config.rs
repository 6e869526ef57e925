//! INI scenario files.
//!
//! Rates accept an explicit percent suffix (`4%`) or a bare fraction (`0.04`).
//! A bare rate above 0.5 in magnitude is rejected: it is almost always a
//! percentage with the `%` forgotten.

use std::fmt::Write as _;
use std::path::Path;

use ini::Ini;
use thermoecon_core::dynamics::{
    DecaySpec, Discovery, EnsembleSpec, NoiseSpec, PhysicalScenario, ScenarioParams, Schedule, TechSpec,
};
use thermoecon_core::{ModelConstants, PhysicalState, TechChange};

/// Default grid when a scenario does not set one.
pub const DEFAULT_DT: f64 = 0.05;
pub const DEFAULT_HORIZON: f64 = 400.0;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{key}: {reason}")]
    Invalid { key: String, reason: String },
    #[error("{key}: missing")]
    Missing { key: String },
    #[error("cannot read {path}: {reason}")]
    Unreadable { path: String, reason: String },
}

impl ConfigError {
    pub fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError::Invalid { key: key.into(), reason: reason.into() }
    }

    fn missing(key: impl Into<String>) -> Self {
        ConfigError::Missing { key: key.into() }
    }
}

/// Parse a rate given as `"4%"` or a bare fraction.
pub fn parse_rate(key: &str, text: &str) -> Result<f64, ConfigError> {
    let text = text.trim();
    if let Some(pct) = text.strip_suffix('%') {
        return parse_number(key, pct).map(|v| v / 100.0);
    }
    let v = parse_number(key, text)?;
    if v.abs() > 0.5 {
        return Err(ConfigError::invalid(key, format!("'{text}' is ambiguous; write '{text}%' or a fraction")));
    }
    Ok(v)
}

pub fn parse_number(key: &str, text: &str) -> Result<f64, ConfigError> {
    let text = text.trim();
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ConfigError::invalid(key, format!("'{text}' is not a finite number"))),
    }
}

fn parse_uint(key: &str, text: &str) -> Result<u64, ConfigError> {
    text.trim().parse::<u64>().map_err(|_| ConfigError::invalid(key, format!("'{}' is not a non-negative integer", text.trim())))
}

/// `v`, `linear(v0, slope)` or `table(t:v, t:v, ...)`.
fn parse_schedule(key: &str, text: &str, rate: bool) -> Result<Schedule, ConfigError> {
    let value = |s: &str| if rate { parse_rate(key, s) } else { parse_number(key, s) };
    let text = text.trim();
    let inner = |prefix: &str| {
        text.strip_prefix(prefix).and_then(|rest| rest.trim_start().strip_prefix('(')).and_then(|r| r.strip_suffix(')'))
    };
    let schedule = if let Some(args) = inner("linear") {
        let parts: Vec<&str> = args.split(',').collect();
        if parts.len() != 2 {
            return Err(ConfigError::invalid(key, "linear(initial, slope) takes two values"));
        }
        Schedule::Linear { initial: value(parts[0])?, slope: value(parts[1])? }
    } else if let Some(args) = inner("table") {
        let mut knots = Vec::new();
        for knot in args.split(',') {
            let (t, v) = knot
                .split_once(':')
                .ok_or_else(|| ConfigError::invalid(key, format!("table entry '{}' needs t:value", knot.trim())))?;
            knots.push((parse_number(key, t)?, value(v)?));
        }
        Schedule::Table(knots)
    } else {
        Schedule::Constant(value(text)?)
    };
    schedule.validate("schedule").map_err(|e| ConfigError::invalid(key, e.to_string()))?;
    Ok(schedule)
}

const SCENARIO_KEYS: &[&str] =
    &["id", "eta0", "eta_tech", "eta_delta", "eta_r_net", "eta_e", "c0", "dt", "horizon", "lambda", "blowup_bound"];
const ENSEMBLE_KEYS: &[&str] = &["members", "sigma", "seed"];
const PHYSICAL_KEYS: &[&str] = &[
    "n_s", "delta_h_r", "e_s_tot", "nu", "e_s", "alpha", "k", "delta_mu", "delta", "decay_flux", "discovery", "eta_e",
];
const RUN_KEYS: &[&str] = &["version", "command", "seed"];

struct Section<'a> {
    name: &'static str,
    props: Option<&'a ini::Properties>,
}

impl Section<'_> {
    fn key(&self, k: &str) -> String {
        format!("{}.{}", self.name, k)
    }

    fn get(&self, k: &str) -> Option<&str> {
        self.props.and_then(|p| p.get(k))
    }

    fn rate(&self, k: &str) -> Result<Option<f64>, ConfigError> {
        self.get(k).map(|v| parse_rate(&self.key(k), v)).transpose()
    }

    fn number(&self, k: &str) -> Result<Option<f64>, ConfigError> {
        self.get(k).map(|v| parse_number(&self.key(k), v)).transpose()
    }

    fn require_number(&self, k: &str) -> Result<f64, ConfigError> {
        self.number(k)?.ok_or_else(|| ConfigError::missing(self.key(k)))
    }
}

/// A scenario as read from a file, before command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct ScenarioFile {
    pub id: Option<String>,
    pub eta0: Option<f64>,
    pub tech: Option<TechSpec>,
    pub c0: Option<f64>,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
    pub lambda: Option<f64>,
    pub blowup_bound: Option<f64>,
    pub members: Option<usize>,
    pub sigma: Option<f64>,
    pub seed: Option<u64>,
    pub physical: Option<PhysicalSection>,
}

#[derive(Debug, Clone)]
pub struct PhysicalSection {
    pub state: PhysicalState,
    pub constants: ModelConstants,
    pub decay: DecaySpec,
    pub discovery: Discovery,
    pub efficiency: Schedule,
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Unreadable { path: path.display().to_string(), reason: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let ini = Ini::load_from_str(text).map_err(|e| ConfigError::invalid("syntax", e.to_string()))?;
        for (name, props) in ini.iter() {
            let allowed = match name {
                Some("scenario") => SCENARIO_KEYS,
                Some("ensemble") => ENSEMBLE_KEYS,
                Some("physical") => PHYSICAL_KEYS,
                Some("run") => RUN_KEYS,
                None if props.is_empty() => continue,
                None => return Err(ConfigError::invalid(props.iter().next().unwrap().0, "key outside any section")),
                Some(other) => return Err(ConfigError::invalid(other, "unknown section")),
            };
            for (k, _) in props.iter() {
                if !allowed.contains(&k) {
                    return Err(ConfigError::invalid(format!("{}.{k}", name.unwrap()), "unknown key"));
                }
            }
        }
        let sc = Section { name: "scenario", props: ini.section(Some("scenario")) };
        let en = Section { name: "ensemble", props: ini.section(Some("ensemble")) };
        let ph = Section { name: "physical", props: ini.section(Some("physical")) };

        let eta_tech = sc.rate("eta_tech")?;
        let components = [sc.rate("eta_delta")?, sc.rate("eta_r_net")?, sc.rate("eta_e")?];
        let tech = match (eta_tech, components.iter().any(Option::is_some)) {
            (Some(_), true) => {
                return Err(ConfigError::invalid("scenario.eta_tech", "give either eta_tech or its components, not both"))
            }
            (Some(v), false) => Some(TechSpec::Total(v)),
            (None, true) => Some(TechSpec::Components(TechChange {
                eta_delta: components[0].unwrap_or(0.0),
                eta_r_net: components[1].unwrap_or(0.0),
                eta_e: components[2].unwrap_or(0.0),
            })),
            (None, false) => None,
        };

        let members = en
            .get("members")
            .map(|v| parse_uint("ensemble.members", v))
            .transpose()?
            .map(|m| usize::try_from(m).map_err(|_| ConfigError::invalid("ensemble.members", "too large")))
            .transpose()?;
        let seed = en.get("seed").map(|v| parse_uint("ensemble.seed", v)).transpose()?;

        let physical = if ph.props.is_some() { Some(physical_section(&ph)?) } else { None };

        Ok(ScenarioFile {
            id: sc.get("id").map(str::to_owned),
            eta0: sc.rate("eta0")?,
            tech,
            c0: sc.number("c0")?,
            dt: sc.number("dt")?,
            horizon: sc.number("horizon")?,
            lambda: sc.number("lambda")?,
            blowup_bound: sc.number("blowup_bound")?,
            members,
            sigma: en.rate("sigma")?,
            seed,
            physical,
        })
    }
}

fn physical_section(ph: &Section<'_>) -> Result<PhysicalSection, ConfigError> {
    let n_s = ph.require_number("n_s")?;
    let delta_h_r = ph.require_number("delta_h_r")?;
    let mut state = match (ph.number("e_s_tot")?, ph.number("nu")?, ph.number("e_s")?) {
        (Some(_), _, Some(_)) => {
            return Err(ConfigError::invalid("physical.e_s", "give e_s_tot or nu and e_s, not both"));
        }
        (Some(e), nu, None) => {
            let mut s = PhysicalState::new(n_s, delta_h_r, e);
            s.nu = nu;
            s
        }
        (None, Some(nu), Some(e_s)) => PhysicalState::new(n_s, delta_h_r, 0.0).with_degrees_of_freedom(nu, e_s),
        (None, _, _) => return Err(ConfigError::missing("physical.e_s_tot")),
    };

    let defaults = ModelConstants::default();
    let constants = ModelConstants {
        lambda: defaults.lambda,
        alpha: ph.number("alpha")?.unwrap_or(defaults.alpha),
        k: ph.number("k")?.unwrap_or(defaults.k),
        delta_mu: ph.number("delta_mu")?.unwrap_or(defaults.delta_mu),
    };

    let decay = match (ph.get("delta"), ph.get("decay_flux")) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::invalid("physical.decay_flux", "give delta or decay_flux, not both"));
        }
        (Some(d), None) => DecaySpec::Fraction(parse_schedule("physical.delta", d, true)?),
        (None, Some(f)) => DecaySpec::Flux(parse_schedule("physical.decay_flux", f, false)?),
        (None, None) => DecaySpec::Fraction(Schedule::Constant(0.0)),
    };
    let discovery = match ph.get("discovery").map(str::trim) {
        Some("match") => Discovery::MatchConsumption,
        Some(d) => Discovery::Rate(parse_schedule("physical.discovery", d, false)?),
        None => Discovery::Rate(Schedule::Constant(0.0)),
    };
    let efficiency = match ph.get("eta_e") {
        Some(e) => parse_schedule("physical.eta_e", e, true)?,
        None => Schedule::Constant(0.0),
    };
    if let DecaySpec::Fraction(s) = &decay {
        state = state.with_decay(s.value(0.0));
    }
    if let Discovery::Rate(s) = &discovery {
        state = state.with_discovery(s.value(0.0));
    }
    Ok(PhysicalSection { state, constants, decay, discovery, efficiency })
}

/// Values given on the command line; each replaces the file's value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub eta0: Option<f64>,
    pub eta_tech: Option<f64>,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
    pub members: Option<usize>,
    pub sigma: Option<f64>,
    pub seed: Option<u64>,
}

/// Which optional sections a command needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Needs {
    Fiscal,
    Ensemble,
    Physical,
}

/// Merge file and overrides into validated parameters.
pub fn resolve(file: ScenarioFile, o: &Overrides, needs: Needs) -> Result<ScenarioParams, ConfigError> {
    let dt = o.dt.or(file.dt).unwrap_or(DEFAULT_DT);
    let horizon = o.horizon.or(file.horizon).unwrap_or(DEFAULT_HORIZON);
    let tech = match o.eta_tech {
        Some(v) => Some(TechSpec::Total(v)),
        None => file.tech,
    };
    let physical = file.physical.map(|p| {
        let constants = ModelConstants { lambda: file.lambda.unwrap_or(p.constants.lambda), ..p.constants };
        PhysicalScenario {
            initial: p.state,
            constants,
            discovery: p.discovery,
            efficiency: p.efficiency,
            decay: p.decay,
            dt,
            horizon,
        }
    });
    let (eta0, tech) = if needs == Needs::Physical {
        if physical.is_none() {
            return Err(ConfigError::missing("physical"));
        }
        (o.eta0.or(file.eta0).unwrap_or(0.0), tech.unwrap_or(TechSpec::Total(0.0)))
    } else {
        (
            o.eta0.or(file.eta0).ok_or_else(|| ConfigError::missing("scenario.eta0"))?,
            tech.ok_or_else(|| ConfigError::missing("scenario.eta_tech"))?,
        )
    };

    let members = o.members.or(file.members);
    let sigma = o.sigma.or(file.sigma);
    let seed = o.seed.or(file.seed).unwrap_or(0);
    let ensemble = match (members, sigma) {
        (Some(members), Some(sigma)) => Some(EnsembleSpec { members, noise: NoiseSpec { sigma, seed } }),
        (None, None) if needs != Needs::Ensemble => None,
        (None, _) => return Err(ConfigError::missing("ensemble.members")),
        (Some(_), None) => return Err(ConfigError::missing("ensemble.sigma")),
    };

    let params = ScenarioParams {
        id: file.id.unwrap_or_else(|| String::from("scenario")),
        eta0,
        tech,
        c0: file.c0.unwrap_or(ScenarioParams::DEFAULT_C0),
        dt,
        horizon,
        lambda: file.lambda.unwrap_or(thermoecon_core::units::DEFAULT_LAMBDA),
        blowup_bound: file.blowup_bound.unwrap_or(ScenarioParams::DEFAULT_BLOWUP_BOUND),
        ensemble,
        physical,
    };
    params.validate().map_err(|e| match e {
        thermoecon_core::Error::InvalidParameter { name, reason } => ConfigError::invalid(section_of(name), reason),
        thermoecon_core::Error::Domain { quantity, value } => {
            ConfigError::invalid(section_of(quantity), format!("{value} is out of range"))
        }
        other => ConfigError::invalid("scenario", other.to_string()),
    })?;
    Ok(params)
}

fn section_of(name: &str) -> String {
    let section = if ENSEMBLE_KEYS.contains(&name) {
        "ensemble"
    } else if SCENARIO_KEYS.contains(&name) {
        "scenario"
    } else {
        "physical"
    };
    format!("{section}.{name}")
}

fn echo_rate(v: f64) -> String {
    if v.abs() <= 0.5 {
        return format!("{v}");
    }
    format!("{}%", v * 100.0)
}

fn echo_schedule(s: &Schedule, rate: bool) -> String {
    let v = |x: f64| if rate { echo_rate(x) } else { format!("{x}") };
    match s {
        Schedule::Constant(x) => v(*x),
        Schedule::Linear { initial, slope } => format!("linear({}, {})", v(*initial), v(*slope)),
        Schedule::Table(knots) => {
            let parts: Vec<String> = knots.iter().map(|(t, x)| format!("{t}:{}", v(*x))).collect();
            format!("table({})", parts.join(", "))
        }
    }
}

/// Full configuration echo that re-parses to the same parameters.
pub fn manifest(params: &ScenarioParams, command: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[scenario]");
    let _ = writeln!(out, "id = {}", params.id);
    let _ = writeln!(out, "eta0 = {}", echo_rate(params.eta0));
    match params.tech {
        TechSpec::Total(v) => {
            let _ = writeln!(out, "eta_tech = {}", echo_rate(v));
        }
        TechSpec::Components(c) => {
            let _ = writeln!(out, "eta_delta = {}", echo_rate(c.eta_delta));
            let _ = writeln!(out, "eta_r_net = {}", echo_rate(c.eta_r_net));
            let _ = writeln!(out, "eta_e = {}", echo_rate(c.eta_e));
        }
    }
    let _ = writeln!(out, "c0 = {}", params.c0);
    let _ = writeln!(out, "dt = {}", params.dt);
    let _ = writeln!(out, "horizon = {}", params.horizon);
    let _ = writeln!(out, "lambda = {}", params.lambda);
    let _ = writeln!(out, "blowup_bound = {}", params.blowup_bound);
    if let Some(e) = &params.ensemble {
        let _ = writeln!(out, "\n[ensemble]");
        let _ = writeln!(out, "members = {}", e.members);
        let _ = writeln!(out, "sigma = {}", echo_rate(e.noise.sigma));
        let _ = writeln!(out, "seed = {}", e.noise.seed);
    }
    if let Some(p) = &params.physical {
        let s = &p.initial;
        let _ = writeln!(out, "\n[physical]");
        let _ = writeln!(out, "n_s = {}", s.n_s);
        let _ = writeln!(out, "delta_h_r = {}", s.delta_h_r);
        let _ = writeln!(out, "e_s_tot = {}", s.e_s_tot);
        if let Some(nu) = s.nu {
            let _ = writeln!(out, "nu = {nu}");
        }
        let _ = writeln!(out, "alpha = {}", p.constants.alpha);
        let _ = writeln!(out, "k = {}", p.constants.k);
        let _ = writeln!(out, "delta_mu = {}", p.constants.delta_mu);
        match &p.decay {
            DecaySpec::Fraction(d) => {
                let _ = writeln!(out, "delta = {}", echo_schedule(d, true));
            }
            DecaySpec::Flux(f) => {
                let _ = writeln!(out, "decay_flux = {}", echo_schedule(f, false));
            }
        }
        match &p.discovery {
            Discovery::MatchConsumption => {
                let _ = writeln!(out, "discovery = match");
            }
            Discovery::Rate(d) => {
                let _ = writeln!(out, "discovery = {}", echo_schedule(d, false));
            }
        }
        let _ = writeln!(out, "eta_e = {}", echo_schedule(&p.efficiency, true));
    }
    let _ = writeln!(out, "\n[run]");
    let _ = writeln!(out, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "command = {command}");
    if let Some(e) = &params.ensemble {
        let _ = writeln!(out, "seed = {}", e.noise.seed);
    }
    out
}
