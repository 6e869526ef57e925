//! Time integration of the fiscal and physical layers.
//!
//! Every integrator is fixed-step classical RK4 on a uniform grid `t_i = i·dt`
//! so that ensembles share aligned time axes and runs are bit-reproducible.

pub mod ensemble;
pub mod fiscal;
pub mod physical;
pub mod quantile;
mod rk4;
pub mod scenario;
pub mod schedule;

pub use ensemble::{run_ensemble, Band, EnsemblePlan, EnsembleResult, Member, QUANTILE_LEVELS};
pub use fiscal::{fiscal_step, integrate_fiscal, wealth_index, WEALTH_INDEX_BASE, Trajectory, TrajectoryMeta, TrajectoryPoint};
pub use physical::{integrate_physical, PhysicalEvent, PhysicalPoint, PhysicalRun};
pub use rk4::rk4_step;
pub use scenario::{EnsembleSpec, NoiseSpec, PhysicalScenario, ScenarioParams, TechSpec};
pub use schedule::{DecaySpec, Discovery, Schedule};

use crate::error::{Error, Result};
use crate::math;

/// Number of whole steps of `dt` in `horizon`, tolerating representation error
/// (e.g. 200 / 0.01).
pub(crate) fn step_count(dt: f64, horizon: f64) -> Result<usize> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter { name: "dt", reason: "must be finite and positive" });
    }
    if !(horizon.is_finite() && horizon >= dt) {
        return Err(Error::InvalidParameter { name: "horizon", reason: "must be finite and at least dt" });
    }
    let ratio = horizon / dt;
    let nearest = math::round(ratio);
    let steps = if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) { nearest } else { math::floor(ratio) };
    Ok(steps as usize)
}
