use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Exogenous time series for the physical model.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Schedule {
    Constant(f64),
    Linear { initial: f64, slope: f64 },
    /// Piecewise-linear through `(t, value)` knots, held flat outside them.
    Table(Vec<(f64, f64)>),
}

impl Schedule {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Schedule::Constant(v) => *v,
            Schedule::Linear { initial, slope } => initial + slope * t,
            Schedule::Table(knots) => {
                let (first, last) = (knots[0], knots[knots.len() - 1]);
                if t <= first.0 {
                    return first.1;
                }
                if t >= last.0 {
                    return last.1;
                }
                let i = knots.partition_point(|k| k.0 <= t);
                let (t0, v0) = knots[i - 1];
                let (t1, v1) = knots[i];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Schedule::Constant(_) => 0.0,
            Schedule::Linear { slope, .. } => *slope,
            Schedule::Table(knots) => {
                if t < knots[0].0 || t >= knots[knots.len() - 1].0 {
                    return 0.0;
                }
                let i = knots.partition_point(|k| k.0 <= t);
                let (t0, v0) = knots[i - 1];
                let (t1, v1) = knots[i];
                (v1 - v0) / (t1 - t0)
            }
        }
    }

    pub fn validate(&self, name: &'static str) -> Result<()> {
        let ok = match self {
            Schedule::Constant(v) => v.is_finite(),
            Schedule::Linear { initial, slope } => initial.is_finite() && slope.is_finite(),
            Schedule::Table(knots) => {
                !knots.is_empty()
                    && knots.iter().all(|(t, v)| t.is_finite() && v.is_finite())
                    && knots.windows(2).all(|w| w[0].0 < w[1].0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter { name, reason: "schedule needs finite values and increasing times" })
        }
    }
}

/// Reserve discovery rate `D`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Discovery {
    Rate(Schedule),
    /// `D = a` at every instant, holding reserves fixed.
    MatchConsumption,
}

/// How material decay is specified.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DecaySpec {
    /// Decay parameter δ(t); `j_d = δ j_a`.
    Fraction(Schedule),
    /// Decay flux j_d(t) in matter per year; δ is derived.
    Flux(Schedule),
}
