//! Robust piecewise-constant control synthesis by gradient ascent.
//!
//! A schedule holds `N` bins of four real controls `(u1, u2, u3, u4)`
//! multiplying `σx^20, σy^20, σx^23, σy^23`. The ascent maximizes the
//! squared trace overlap with a target gate, averaged over a training set
//! of error fractions, minus a power penalty.

mod ascent;
mod controls;
pub mod io;
mod objective;

pub use ascent::{
    ascend, ascend_from, ascend_once, initial_schedule, range_min_fidelity, restart_seed,
    GrapeConfig, OptimizedPulse, StopReason, RANGE_CHECK_POINTS,
};
pub use controls::{
    pulses_to_schedule, schedule_to_pulses, BinPulse, ControlHamiltonians, ControlSchedule,
    MAX_CONTROL,
};
pub use objective::{
    gradient, performance, schedule_gate, step_propagator, Ensemble, Evaluation, Objective,
};

use crate::scan::Scheme;

/// Wraps a schedule as a scannable scheme.
pub fn scheme(label: impl Into<String>, schedule: ControlSchedule) -> Scheme {
    Scheme::new(label, move |err| schedule_gate(&schedule, err))
}
