use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::controls::{ControlSchedule, MAX_CONTROL};
use super::objective::{schedule_gate, Ensemble, Objective};
use crate::par::Execution;
use crate::quantum::{gate_fidelity, Unitary};
use crate::scan::linspace;
use crate::sequences::{sequential_gate, ErrorKind, ErrorModel};
use crate::{Error, Result};

/// Number of points used to check fidelity across the trained range.
pub const RANGE_CHECK_POINTS: usize = 41;

#[derive(Debug, Clone, PartialEq)]
pub struct GrapeConfig {
    /// Total time T in units of Λ⁻¹.
    pub duration: f64,
    pub bins: usize,
    pub target: Unitary,
    pub ensemble: Ensemble,
    /// Power-penalty weight α_p.
    pub penalty: f64,
    /// Initial ascent step η; halved on rejected steps, restored after an
    /// accepted one.
    pub step_size: f64,
    pub max_iterations: usize,
    /// Stop once the objective gains less than this over `stall_window`
    /// accepted iterations.
    pub tolerance: f64,
    pub stall_window: usize,
    pub seed: u64,
    /// Initial controls are drawn uniformly from [−scale, scale].
    pub init_scale: f64,
    /// Number of seeded attempts; the one with the highest final ensemble
    /// performance is kept.
    pub restarts: usize,
    pub execution: Execution,
}

impl Default for GrapeConfig {
    fn default() -> Self {
        GrapeConfig {
            duration: 6.0 * PI,
            bins: 400,
            target: sequential_gate(),
            ensemble: Ensemble::uniform(ErrorKind::PulseLength, -0.2, 0.2, 5)
                .expect("default training set is valid"),
            penalty: 0.01,
            step_size: 4.0,
            max_iterations: 5000,
            tolerance: 1e-9,
            stall_window: 20,
            seed: 1,
            init_scale: 0.25,
            restarts: 5,
            execution: Execution::default(),
        }
    }
}

impl GrapeConfig {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::invalid(what.to_string()))
            }
        };
        check(self.duration > 0.0 && self.duration.is_finite(), "duration must be positive")?;
        check(self.bins >= 1, "bins must be at least 1")?;
        check(self.penalty >= 0.0, "penalty weight must be non-negative")?;
        check(self.step_size > 0.0 && self.step_size.is_finite(), "step size must be positive")?;
        check(self.tolerance >= 0.0, "tolerance must be non-negative")?;
        check(self.stall_window >= 1, "stall window must be at least 1")?;
        check(
            (0.0..=MAX_CONTROL).contains(&self.init_scale),
            "initial amplitude scale must lie in [0, 0.5]",
        )?;
        check(self.restarts >= 1, "at least one restart is required")?;
        Ok(())
    }

    /// Lowest fidelity over the ensemble's fraction range (sampled at
    /// [`RANGE_CHECK_POINTS`] points), or the ideal fidelity when the
    /// ensemble has no error kind.
    pub fn range_min_fidelity(&self, s: &ControlSchedule) -> Result<f64> {
        range_min_fidelity(s, &self.target, &self.ensemble)
    }
}

pub fn range_min_fidelity(s: &ControlSchedule, target: &Unitary, ens: &Ensemble) -> Result<f64> {
    let models: Vec<ErrorModel> = match ens.kind() {
        None => vec![ErrorModel::Ideal],
        Some(kind) => {
            let lo = ens.fractions().iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ens.fractions().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let pts = if lo == hi {
                vec![lo]
            } else {
                linspace(lo, hi, RANGE_CHECK_POINTS)?
            };
            pts.into_iter().map(|e| kind.model(e)).collect()
        }
    };
    let mut worst = f64::INFINITY;
    for m in models {
        worst = worst.min(gate_fidelity(&schedule_gate(s, m)?, target));
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIterations,
    /// Objective gain fell below the tolerance over the stall window.
    Stalled,
    /// Backtracking could not find an improving step.
    NoAscent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedPulse {
    pub schedule: ControlSchedule,
    /// Final ensemble-averaged performance (unpenalized).
    pub performance: f64,
    /// Final penalized objective.
    pub objective: f64,
    pub iterations: usize,
    /// Penalized objective after initialization and after every accepted
    /// step.
    pub trace: Vec<f64>,
    pub stop: StopReason,
    /// Which restart produced this pulse (0-based).
    pub restart: usize,
    pub range_min_fidelity: f64,
    pub config: GrapeConfig,
}

/// Runs `cfg.restarts` seeded ascents and returns the one with the highest
/// final ensemble performance. Ties keep the earlier restart.
pub fn ascend(cfg: &GrapeConfig) -> Result<OptimizedPulse> {
    cfg.validate()?;
    let mut best: Option<OptimizedPulse> = None;
    for restart in 0..cfg.restarts {
        let run = ascend_once(cfg, restart)?;
        if best.as_ref().map_or(true, |b| run.performance > b.performance) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart ran"))
}

/// Seed used by restart `r`.
pub fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed.wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn initial_schedule(cfg: &GrapeConfig, restart: usize) -> Result<ControlSchedule> {
    let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(cfg.seed, restart));
    let a = cfg.init_scale;
    let controls = (0..cfg.bins)
        .map(|_| {
            let mut u = [0.0; 4];
            for x in &mut u {
                *x = if a > 0.0 { rng.gen_range(-a..=a) } else { 0.0 };
            }
            u
        })
        .collect();
    let mut s = ControlSchedule::new(cfg.duration, controls)?;
    s.clip();
    Ok(s)
}

/// One gradient-ascent run from the initial schedule of `restart`.
pub fn ascend_once(cfg: &GrapeConfig, restart: usize) -> Result<OptimizedPulse> {
    cfg.validate()?;
    let schedule = initial_schedule(cfg, restart)?;
    ascend_from(cfg, schedule, restart)
}

/// Gradient ascent u ← clip(u + η g) from a given schedule.
pub fn ascend_from(
    cfg: &GrapeConfig,
    mut schedule: ControlSchedule,
    restart: usize,
) -> Result<OptimizedPulse> {
    let obj = Objective::new(cfg.target, cfg.ensemble.clone(), cfg.penalty)?
        .with_execution(cfg.execution);
    let mut eval = obj.evaluate(&schedule);
    if !eval.objective.is_finite() {
        return Err(Error::NonFinite { iteration: 0 });
    }
    let mut trace = vec![eval.objective];
    let min_step = cfg.step_size * 1e-12;
    let mut stop = StopReason::MaxIterations;
    let mut iterations = 0;

    while iterations < cfg.max_iterations {
        iterations += 1;
        let grad = obj.gradient_at(&schedule, &eval);
        if grad.iter().flatten().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite { iteration: iterations });
        }
        let mut eta = cfg.step_size;
        let accepted = loop {
            let mut candidate = schedule.clone();
            for (u, g) in candidate.controls_mut().iter_mut().zip(&grad) {
                for k in 0..4 {
                    u[k] += eta * g[k];
                }
            }
            candidate.clip();
            let cand_eval = obj.evaluate(&candidate);
            if !cand_eval.objective.is_finite() {
                return Err(Error::NonFinite { iteration: iterations });
            }
            if cand_eval.objective > eval.objective {
                break Some((candidate, cand_eval));
            }
            eta *= 0.5;
            if eta < min_step {
                break None;
            }
        };
        match accepted {
            Some((s, e)) => {
                schedule = s;
                eval = e;
                trace.push(eval.objective);
            }
            None => {
                stop = StopReason::NoAscent;
                break;
            }
        }
        let n = trace.len();
        if n > cfg.stall_window && trace[n - 1] - trace[n - 1 - cfg.stall_window] < cfg.tolerance {
            stop = StopReason::Stalled;
            break;
        }
    }

    let range_min_fidelity = range_min_fidelity(&schedule, &cfg.target, &cfg.ensemble)?;
    Ok(OptimizedPulse {
        performance: eval.performance,
        objective: eval.objective,
        schedule,
        iterations,
        trace,
        stop,
        restart,
        range_min_fidelity,
        config: cfg.clone(),
    })
}
