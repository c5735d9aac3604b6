//! Ensemble-averaged performance P̄ = mean_ε |Tr(U_T† U_N^ε ··· U_1^ε)|² and
//! its first-order gradient with respect to the piecewise-constant controls.

use super::controls::{ControlHamiltonians, ControlSchedule};
use crate::par::Execution;
use crate::quantum::{expm_unitary_unchecked, Matrix3, Unitary, C64};
use crate::scan::linspace;
use crate::sequences::{ErrorKind, ErrorModel};
use crate::{Error, Result};

/// The error fractions a pulse is optimized over. Without an error kind the
/// ensemble is the single ideal model.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    kind: Option<ErrorKind>,
    fractions: Vec<f64>,
}

impl Ensemble {
    pub fn ideal() -> Self {
        Ensemble {
            kind: None,
            fractions: vec![0.0],
        }
    }

    pub fn new(kind: ErrorKind, fractions: Vec<f64>) -> Result<Self> {
        if fractions.is_empty() {
            return Err(Error::invalid("training set is empty"));
        }
        for &e in &fractions {
            kind.model(e).validate()?;
        }
        Ok(Ensemble {
            kind: Some(kind),
            fractions,
        })
    }

    /// `n` evenly spaced fractions on [min, max].
    pub fn uniform(kind: ErrorKind, min: f64, max: f64, n: usize) -> Result<Self> {
        Self::new(kind, linspace(min, max, n)?)
    }

    pub fn kind(&self) -> Option<ErrorKind> {
        self.kind
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn models(&self) -> Vec<ErrorModel> {
        match self.kind {
            None => vec![ErrorModel::Ideal],
            Some(k) => self.fractions.iter().map(|&e| k.model(e)).collect(),
        }
    }
}

/// Generator of bin `u` under `err`: Σ u_k H_k scaled by (1 − ε_f) for a
/// pulse-length error, plus ε_g·D for an off-resonance error.
fn step_generator(hams: &ControlHamiltonians, u: &[f64; 4], err: ErrorModel) -> Matrix3 {
    let controls = hams.control_sum(u);
    match err {
        ErrorModel::Ideal => controls,
        ErrorModel::PulseLength(e) => controls.scale_real(1.0 - e),
        ErrorModel::OffResonance(e) => controls + hams.drift.scale_real(e),
    }
}

/// Factor multiplying each H_k inside the step exponent.
fn control_scale(err: ErrorModel) -> f64 {
    match err {
        ErrorModel::PulseLength(e) => 1.0 - e,
        _ => 1.0,
    }
}

/// U_j = exp(−iΔt G_j) for the 0-based bin `j`.
pub fn step_propagator(s: &ControlSchedule, j: usize, err: ErrorModel) -> Result<Unitary> {
    let err = err.validate()?;
    let u = s.controls().get(j).ok_or_else(|| {
        Error::invalid(format!("bin index {j} out of range (bins = {})", s.bins()))
    })?;
    let g = step_generator(&ControlHamiltonians::standard(), u, err);
    Ok(expm_unitary_unchecked(&g, s.dt()))
}

fn step_propagators(
    s: &ControlSchedule,
    hams: &ControlHamiltonians,
    err: ErrorModel,
) -> Vec<Unitary> {
    let dt = s.dt();
    s.controls()
        .iter()
        .map(|u| expm_unitary_unchecked(&step_generator(hams, u, err), dt))
        .collect()
}

/// U_N ··· U_1 under `err`.
pub fn schedule_gate(s: &ControlSchedule, err: ErrorModel) -> Result<Unitary> {
    let err = err.validate()?;
    let steps = step_propagators(s, &ControlHamiltonians::standard(), err);
    Ok(steps.iter().fold(Unitary::identity(), |acc, u| *u * acc))
}

/// Overlap Tr(U_T† U) for a list of step propagators.
fn overlap(steps: &[Unitary], target: &Unitary) -> C64 {
    let total = steps.iter().fold(Unitary::identity(), |acc, u| *u * acc);
    target.matrix().adjoint().trace_product(total.matrix())
}

/// Gradient of |Tr(U_T† U)|² for one error model:
/// g_k(j) = −2 Re(Tr(iΔt s A_j† H_k B_j) · Tr(B_j† A_j)), with
/// A_j = U_{j+1}† ··· U_N† U_T, B_j = U_j ··· U_1 and s the control scale.
fn single_gradient(
    steps: &[Unitary],
    target: &Unitary,
    hams: &ControlHamiltonians,
    dt: f64,
    scale: f64,
) -> Vec<[f64; 4]> {
    let n = steps.len();
    let mut forward = Vec::with_capacity(n);
    let mut b = Matrix3::identity();
    for u in steps {
        b = *u.matrix() * b;
        forward.push(b);
    }
    let tau = target.matrix().adjoint().trace_product(&b);
    // Tr(B_j† A_j) = conj(Tr(A_j† B_j)) = conj(τ) for every j
    let weight = C64::new(0.0, dt * scale) * tau.conj();

    let mut grad = vec![[0.0; 4]; n];
    let mut a = *target.matrix();
    for j in (0..n).rev() {
        // Tr(A† H B) = Tr(H B A†)
        let m = forward[j] * a.adjoint();
        for (k, h) in hams.controls.iter().enumerate() {
            grad[j][k] = -2.0 * (weight * h.trace_product(&m)).re;
        }
        a = steps[j].matrix().adjoint() * a;
    }
    grad
}

/// Performance, gradient and the schedule they belong to.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Ensemble mean of |Tr(U_T† U)|².
    pub performance: f64,
    /// `performance` minus the power penalty α_p Σ Δt u².
    pub objective: f64,
    steps: Vec<Vec<Unitary>>,
}

/// Evaluates schedules for one target and ensemble.
#[derive(Debug, Clone)]
pub struct Objective {
    pub target: Unitary,
    pub ensemble: Ensemble,
    pub penalty: f64,
    pub execution: Execution,
    hams: ControlHamiltonians,
    models: Vec<ErrorModel>,
}

impl Objective {
    pub fn new(target: Unitary, ensemble: Ensemble, penalty: f64) -> Result<Self> {
        if !(penalty >= 0.0) {
            return Err(Error::invalid(format!("penalty weight must be ≥ 0, got {penalty}")));
        }
        let models = ensemble.models();
        Ok(Objective {
            target,
            ensemble,
            penalty,
            execution: Execution::default(),
            hams: ControlHamiltonians::standard(),
            models,
        })
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn evaluate(&self, s: &ControlSchedule) -> Evaluation {
        let steps: Vec<Vec<Unitary>> = self
            .execution
            .map(&self.models, |&m| step_propagators(s, &self.hams, m));
        let performance = steps
            .iter()
            .map(|st| overlap(st, &self.target).norm_sqr())
            .sum::<f64>()
            / steps.len() as f64;
        Evaluation {
            performance,
            objective: performance - self.penalty * s.power(),
            steps,
        }
    }

    pub fn performance(&self, s: &ControlSchedule) -> f64 {
        self.evaluate(s).performance
    }

    /// Gradient of the penalized objective at the schedule `eval` was
    /// computed for. Per-model gradients are summed in ensemble order.
    pub fn gradient_at(&self, s: &ControlSchedule, eval: &Evaluation) -> Vec<[f64; 4]> {
        let dt = s.dt();
        let pairs: Vec<(&Vec<Unitary>, ErrorModel)> =
            eval.steps.iter().zip(self.models.iter().copied()).collect();
        let per_model = self.execution.map(&pairs, |(steps, m)| {
            single_gradient(steps, &self.target, &self.hams, dt, control_scale(*m))
        });
        let inv = 1.0 / per_model.len() as f64;
        let mut grad = vec![[0.0; 4]; s.bins()];
        for g in &per_model {
            for (acc, gj) in grad.iter_mut().zip(g) {
                for k in 0..4 {
                    acc[k] += gj[k];
                }
            }
        }
        for (acc, u) in grad.iter_mut().zip(s.controls()) {
            for k in 0..4 {
                acc[k] = acc[k] * inv - 2.0 * self.penalty * u[k] * dt;
            }
        }
        grad
    }

    pub fn gradient(&self, s: &ControlSchedule) -> Vec<[f64; 4]> {
        let eval = self.evaluate(s);
        self.gradient_at(s, &eval)
    }
}

/// Ensemble-averaged performance of `s` (no penalty).
pub fn performance(s: &ControlSchedule, target: &Unitary, ensemble: &Ensemble) -> f64 {
    Objective::new(*target, ensemble.clone(), 0.0)
        .expect("zero penalty is valid")
        .performance(s)
}

/// Gradient of the ensemble-averaged performance plus the power-penalty
/// term −2 α_p u_k(j) Δt.
pub fn gradient(
    s: &ControlSchedule,
    target: &Unitary,
    ensemble: &Ensemble,
    penalty: f64,
) -> Result<Vec<[f64; 4]>> {
    Ok(Objective::new(*target, ensemble.clone(), penalty)?.gradient(s))
}
