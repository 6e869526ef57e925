//! Thermodynamic model of long-run economic growth.
//!
//! The crate is `no_std` (it needs `alloc`) and holds everything that is pure
//! computation:
//!
//! * [`model`]: closed-form fiscal-layer relations. The logistic law for the
//!   rate of return, the growth number and mode table, wealth/production and
//!   inflation identities.
//! * [`thermo`]: physical-layer quantities (interface, flows, enthalpy, the rate
//!   of return computed from accumulated size and reserves).
//! * [`dynamics`]: fixed-step integration of the fiscal and coupled physical
//!   systems, stochastic ensembles and quantile bands.
//! * [`calibration`]: cumulative wealth, the energy/wealth ratio λ and the
//!   empirical rate of return from historical series.
//!
//! File formats, threading and the command line live in the `thermoecon` crate.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod calibration;
pub mod dynamics;
mod error;
pub mod math;
pub mod model;
pub mod thermo;
pub mod units;

pub use error::{Error, Result};
pub use model::{GrowthMode, ModelConstants, RateOfReturn, Regime, TechChange};
pub use thermo::{FlowPair, PhysicalState};
