use std::f64::consts::PI;

use crate::quantum::{sigma_x, sigma_y, z_total, Matrix3};
use crate::{Error, Result};

/// Bound on each control u_k, i.e. Λ/2 with Λ = 1.
pub const MAX_CONTROL: f64 = 0.5;

/// The four control operators and the detuning generator.
///
/// H₁ = σ_x^20, H₂ = σ_y^20, H₃ = σ_x^23, H₄ = σ_y^23, and the drift
/// generator D = Ẑ/3, so that ε_g·D is the detuning term (δ/3)Ẑ in units of
/// Λ.
#[derive(Debug, Clone)]
pub struct ControlHamiltonians {
    pub controls: [Matrix3; 4],
    pub drift: Matrix3,
}

impl ControlHamiltonians {
    pub fn standard() -> Self {
        let ok = "valid transition labels";
        ControlHamiltonians {
            controls: [
                sigma_x(2, 0).expect(ok),
                sigma_y(2, 0).expect(ok),
                sigma_x(2, 3).expect(ok),
                sigma_y(2, 3).expect(ok),
            ],
            drift: z_total().scale_real(1.0 / 3.0),
        }
    }

    /// Σ_k u_k H_k
    pub fn control_sum(&self, u: &[f64; 4]) -> Matrix3 {
        let mut m = Matrix3::zeros();
        for (h, &uk) in self.controls.iter().zip(u) {
            m = m + h.scale_real(uk);
        }
        m
    }
}

impl Default for ControlHamiltonians {
    fn default() -> Self {
        Self::standard()
    }
}

/// Piecewise-constant controls: `controls[j] = [u₁, u₂, u₃, u₄]` on bin j,
/// each bin lasting `duration / bins`.
///
/// The controls relate to the drives by u₁ = −(u_m/2)cos θ_m,
/// u₂ = −(u_m/2)sin θ_m, u₃ = −(u_r/2)cos θ_r, u₄ = −(u_r/2)sin θ_r.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSchedule {
    duration: f64,
    controls: Vec<[f64; 4]>,
}

impl ControlSchedule {
    pub fn new(duration: f64, controls: Vec<[f64; 4]>) -> Result<Self> {
        if !(duration > 0.0) || !duration.is_finite() {
            return Err(Error::invalid(format!(
                "schedule duration must be positive, got {duration}"
            )));
        }
        if controls.is_empty() {
            return Err(Error::invalid("schedule needs at least one bin"));
        }
        if controls.iter().flatten().any(|u| !u.is_finite()) {
            return Err(Error::invalid("schedule has non-finite controls"));
        }
        Ok(ControlSchedule { duration, controls })
    }

    pub fn zeros(duration: f64, bins: usize) -> Result<Self> {
        Self::new(duration, vec![[0.0; 4]; bins])
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn bins(&self) -> usize {
        self.controls.len()
    }

    pub fn dt(&self) -> f64 {
        self.duration / self.controls.len() as f64
    }

    pub fn controls(&self) -> &[[f64; 4]] {
        &self.controls
    }

    pub(crate) fn controls_mut(&mut self) -> &mut [[f64; 4]] {
        &mut self.controls
    }

    /// Σ_j Δt Σ_k u_k(j)², the integrated control power.
    pub fn power(&self) -> f64 {
        self.dt()
            * self
                .controls
                .iter()
                .flatten()
                .map(|u| u * u)
                .sum::<f64>()
    }

    /// Scales each (u₁, u₂) and (u₃, u₄) pair back onto the disc of radius
    /// Λ/2, which keeps every |u_k| ≤ Λ/2 and u_m, u_r ≤ Λ.
    pub fn clip(&mut self) {
        for u in &mut self.controls {
            let (mw, rf) = u.split_at_mut(2);
            clip_pair(mw);
            clip_pair(rf);
        }
    }

    /// Largest u_m or u_r over all bins.
    pub fn max_amplitude(&self) -> f64 {
        self.pulses()
            .iter()
            .map(|p| p.mw_amplitude.max(p.rf_amplitude))
            .fold(0.0, f64::max)
    }

    pub fn pulses(&self) -> Vec<BinPulse> {
        schedule_to_pulses(self)
    }
}

fn clip_pair(pair: &mut [f64]) {
    let r = pair[0].hypot(pair[1]);
    if r > MAX_CONTROL {
        let s = MAX_CONTROL / r;
        pair[0] *= s;
        pair[1] *= s;
    }
}

/// Drive amplitudes (units of Λ) and phases (radians in [0, 2π)) of one bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinPulse {
    pub mw_amplitude: f64,
    pub mw_phase: f64,
    pub rf_amplitude: f64,
    pub rf_phase: f64,
}

impl BinPulse {
    pub fn to_controls(&self) -> [f64; 4] {
        let (m, tm) = (self.mw_amplitude, self.mw_phase);
        let (r, tr) = (self.rf_amplitude, self.rf_phase);
        [
            -0.5 * m * tm.cos(),
            -0.5 * m * tm.sin(),
            -0.5 * r * tr.cos(),
            -0.5 * r * tr.sin(),
        ]
    }
}

fn amplitude_phase(c: f64, s: f64) -> (f64, f64) {
    let amp = 2.0 * c.hypot(s);
    if amp == 0.0 {
        return (0.0, 0.0);
    }
    let mut theta = (-s).atan2(-c);
    if theta < 0.0 {
        theta += 2.0 * PI;
    }
    if theta >= 2.0 * PI {
        theta -= 2.0 * PI;
    }
    (amp, theta)
}

/// Per-bin (u_m, θ_m, u_r, θ_r).
pub fn schedule_to_pulses(s: &ControlSchedule) -> Vec<BinPulse> {
    s.controls()
        .iter()
        .map(|u| {
            let (mw_amplitude, mw_phase) = amplitude_phase(u[0], u[1]);
            let (rf_amplitude, rf_phase) = amplitude_phase(u[2], u[3]);
            BinPulse {
                mw_amplitude,
                mw_phase,
                rf_amplitude,
                rf_phase,
            }
        })
        .collect()
}

pub fn pulses_to_schedule(duration: f64, pulses: &[BinPulse]) -> Result<ControlSchedule> {
    ControlSchedule::new(duration, pulses.iter().map(BinPulse::to_controls).collect())
}
