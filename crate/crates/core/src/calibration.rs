//! Historical calibration: cumulative wealth, λ and the empirical rate of return.
//!
//! Monetary inputs are billions of 2005 USD per year (GDP) or billions (wealth);
//! power is in TW.

use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::math;
use crate::units;

/// Default head correction span: years of output assumed accumulated before the
/// first sample, used by [`pre_series_wealth`].
pub const HEAD_YEARS: f64 = 2500.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HistoricalRecord {
    pub year: i32,
    pub gdp: Option<f64>,
    pub energy: Option<f64>,
    pub deflator: Option<f64>,
    /// Externally estimated cumulative wealth; replaces accumulation at this year.
    pub wealth: Option<f64>,
}

impl HistoricalRecord {
    pub fn new(year: i32, gdp: f64) -> Self {
        HistoricalRecord { year, gdp: Some(gdp), energy: None, deflator: None, wealth: None }
    }

    pub fn with_energy(mut self, energy: f64) -> Self {
        self.energy = Some(energy);
        self
    }

    pub fn with_deflator(mut self, deflator: f64) -> Self {
        self.deflator = Some(deflator);
        self
    }

    pub fn with_wealth(mut self, wealth: f64) -> Self {
        self.wealth = Some(wealth);
        self
    }
}

/// Records sorted by strictly increasing year.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HistoricalSeries {
    records: Vec<HistoricalRecord>,
}

impl HistoricalSeries {
    /// Sorts by year and checks positivity; duplicate years are rejected.
    pub fn new(mut records: Vec<HistoricalRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptySeries);
        }
        records.sort_by_key(|r| r.year);
        if let Some(w) = records.windows(2).find(|w| w[0].year == w[1].year) {
            return Err(Error::DuplicateYear { year: w[0].year });
        }
        for r in &records {
            let positive = |name, v: Option<f64>| match v {
                Some(x) if !(x.is_finite() && x > 0.0) => Err(domain(name, x)),
                _ => Ok(()),
            };
            positive("gdp", r.gdp)?;
            positive("energy", r.energy)?;
            positive("deflator", r.deflator)?;
            positive("wealth", r.wealth)?;
        }
        Ok(HistoricalSeries { records })
    }

    pub fn records(&self) -> &[HistoricalRecord] {
        &self.records
    }

    pub fn has_deflator(&self) -> bool {
        self.records.iter().any(|r| r.deflator.is_some())
    }
}

/// Head correction `GDP(first year) × HEAD_YEARS`.
pub fn pre_series_wealth(series: &HistoricalSeries) -> Result<f64> {
    let first = &series.records[0];
    let gdp = first.gdp.ok_or(Error::MissingValue { year: first.year, column: "gdp" })?;
    Ok(gdp * HEAD_YEARS)
}

/// Cumulative wealth by trapezoidal accumulation of GDP.
///
/// The first sample carries one year of its own output on top of `c_pre`.
/// A record with a wealth value resets the running total to that value.
pub fn cumulative_wealth(series: &HistoricalSeries, c_pre: f64) -> Result<Vec<(i32, f64)>> {
    if !(c_pre.is_finite() && c_pre >= 0.0) {
        return Err(domain("c_pre", c_pre));
    }
    let gdp_of = |r: &HistoricalRecord| r.gdp.ok_or(Error::MissingValue { year: r.year, column: "gdp" });
    let mut out = Vec::with_capacity(series.records.len());
    let mut c = 0.0;
    for (i, r) in series.records.iter().enumerate() {
        c = match (r.wealth, i) {
            (Some(w), _) => w,
            (None, 0) => c_pre + gdp_of(r)?,
            (None, _) => {
                let prev = &series.records[i - 1];
                let span = f64::from(r.year - prev.year);
                c + 0.5 * (gdp_of(prev)? + gdp_of(r)?) * span
            }
        };
        out.push((r.year, c));
    }
    Ok(out)
}

/// λ in W per $1000 from wealth (billions) and power (TW).
pub fn estimate_lambda(wealth_billion: f64, energy_tw: f64) -> Result<f64> {
    if !(wealth_billion > 0.0) {
        return Err(domain("wealth", wealth_billion));
    }
    Ok(units::lambda_w_per_thousand(energy_tw, wealth_billion))
}

/// `η_i = GDP_i / C_i` for every year with GDP.
pub fn empirical_eta(series: &HistoricalSeries, wealth: &[(i32, f64)]) -> Vec<(i32, f64)> {
    series
        .records
        .iter()
        .zip(wealth)
        .filter_map(|(r, &(year, c))| r.gdp.map(|g| (year, g / c)))
        .collect()
}

/// Inflation-decay decomposition for one year.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayDiagnostic {
    pub year: i32,
    pub inflation: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Taken equal to the inflation rate.
    pub delta: f64,
    pub delta_is_approximate: bool,
}

/// `i = deflator − 1`, `β = η/(1−i)`, `γ = β·i`, for years with a deflator.
///
/// Returns `None` when no record has a deflator.
pub fn decay_diagnostics(series: &HistoricalSeries, eta: &[(i32, f64)]) -> Option<Vec<DecayDiagnostic>> {
    if !series.has_deflator() {
        return None;
    }
    let out = series
        .records
        .iter()
        .filter_map(|r| {
            let deflator = r.deflator?;
            let &(_, eta) = eta.iter().find(|(y, _)| *y == r.year)?;
            let i = deflator - 1.0;
            let beta = eta / (1.0 - i);
            Some(DecayDiagnostic {
                year: r.year,
                inflation: i,
                beta,
                gamma: beta * i,
                delta: i,
                delta_is_approximate: true,
            })
        })
        .collect();
    Some(out)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CalibrationReport {
    pub c_pre: f64,
    pub lambda_series: Vec<(i32, f64)>,
    /// `None` when no year has energy data.
    pub lambda_mean: Option<f64>,
    /// Sample standard deviation; 0 for a single year.
    pub lambda_std: Option<f64>,
    pub eta_series: Vec<(i32, f64)>,
    /// Billions of 2005 USD.
    pub wealth_series: Vec<(i32, f64)>,
    pub decay: Option<Vec<DecayDiagnostic>>,
}

impl CalibrationReport {
    pub fn final_eta(&self) -> Option<(i32, f64)> {
        self.eta_series.last().copied()
    }

    pub fn lambda_at(&self, year: i32) -> Option<f64> {
        self.lambda_series.iter().find(|(y, _)| *y == year).map(|(_, l)| *l)
    }
}

fn mean_and_std(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let std = if xs.len() < 2 {
        0.0
    } else {
        math::sqrt(xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0))
    };
    Some((mean, std))
}

pub fn calibrate(series: &HistoricalSeries, c_pre: f64) -> Result<CalibrationReport> {
    let wealth_series = cumulative_wealth(series, c_pre)?;
    let mut lambda_series = Vec::new();
    for (r, &(year, c)) in series.records.iter().zip(&wealth_series) {
        if let Some(e) = r.energy {
            lambda_series.push((year, estimate_lambda(c, e)?));
        }
    }
    let lambdas: Vec<f64> = lambda_series.iter().map(|(_, l)| *l).collect();
    let stats = mean_and_std(&lambdas);
    let eta_series = empirical_eta(series, &wealth_series);
    let decay = decay_diagnostics(series, &eta_series);
    Ok(CalibrationReport {
        c_pre,
        lambda_series,
        lambda_mean: stats.map(|s| s.0),
        lambda_std: stats.map(|s| s.1),
        eta_series,
        wealth_series,
        decay,
    })
}
