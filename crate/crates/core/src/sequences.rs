//! Rectangular-pulse constructions of the entangling gate: the sequential
//! MW-then-RF gate and its BB1 and CORPSE composite replacements, with
//! propagators under systematic pulse-length or off-resonance errors.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::numfmt::sig9;
use crate::quantum::{compose, expm_unitary_unchecked, z_total, Matrix3, Unitary};
use crate::{Error, Result};

pub use crate::quantum::Transition as Channel;

/// Which systematic error a sweep or a training ensemble refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// Pulse-length error, ε_f = (T′ − T)/T.
    PulseLength,
    /// Off-resonance error, ε_g = δ/Λ.
    OffResonance,
}

impl ErrorKind {
    pub fn model(self, fraction: f64) -> ErrorModel {
        match self {
            ErrorKind::PulseLength => ErrorModel::PulseLength(fraction),
            ErrorKind::OffResonance => ErrorModel::OffResonance(fraction),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::PulseLength => "ple",
            ErrorKind::OffResonance => "ore",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ErrorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ple" | "pulse-length" => Ok(ErrorKind::PulseLength),
            "ore" | "off-resonance" => Ok(ErrorKind::OffResonance),
            other => Err(Error::invalid(format!("unknown error kind `{other}`"))),
        }
    }
}

/// A systematic error applied identically to every pulse of a sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorModel {
    Ideal,
    PulseLength(f64),
    OffResonance(f64),
}

impl ErrorModel {
    pub fn fraction(self) -> f64 {
        match self {
            ErrorModel::Ideal => 0.0,
            ErrorModel::PulseLength(e) | ErrorModel::OffResonance(e) => e,
        }
    }

    pub fn kind(self) -> Option<ErrorKind> {
        match self {
            ErrorModel::Ideal => None,
            ErrorModel::PulseLength(_) => Some(ErrorKind::PulseLength),
            ErrorModel::OffResonance(_) => Some(ErrorKind::OffResonance),
        }
    }

    /// Checks |ε| ≤ 1.
    pub fn validate(self) -> Result<Self> {
        let e = self.fraction();
        if !(e.abs() <= 1.0) {
            return Err(Error::invalid(format!(
                "error fraction {e} outside [-1, 1]"
            )));
        }
        Ok(self)
    }
}

/// One rectangular pulse at amplitude Λ: `area` is the dimensionless
/// pulse area (amplitude × duration), `phase` the drive phase in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSegment {
    pub channel: Channel,
    pub area: f64,
    pub phase: f64,
}

impl PulseSegment {
    pub fn new(channel: Channel, area: f64, phase: f64) -> Result<Self> {
        if !(area >= 0.0) || !area.is_finite() || !phase.is_finite() {
            return Err(Error::invalid(format!(
                "pulse area must be finite and non-negative (area {area}, phase {phase})"
            )));
        }
        Ok(PulseSegment {
            channel,
            area,
            phase,
        })
    }

    pub fn mw(area: f64, phase: f64) -> Self {
        Self::new(Channel::Mw, area, phase).expect("valid constant segment")
    }

    pub fn rf(area: f64, phase: f64) -> Self {
        Self::new(Channel::Rf, area, phase).expect("valid constant segment")
    }
}

/// Propagator of one segment under `err`.
///
/// * ideal: exp(+i(τ/2)(cos θ σ_x + sin θ σ_y)) on the channel's transition;
/// * pulse length: the same with τ → (1 + ε_f)τ;
/// * off resonance: exp(−iτ[(ε_g/3)Ẑ − ½(cos θ σ_x + sin θ σ_y)]), the
///   detuning acting on all three levels for the duration of the pulse.
pub fn segment_propagator(seg: &PulseSegment, err: ErrorModel) -> Result<Unitary> {
    let err = err.validate()?;
    let drive = seg.channel.drive_axis(seg.phase).scale_real(-0.5);
    Ok(match err {
        ErrorModel::Ideal => expm_unitary_unchecked(&drive, seg.area),
        ErrorModel::PulseLength(e) => expm_unitary_unchecked(&drive, (1.0 + e) * seg.area),
        ErrorModel::OffResonance(e) => {
            let h = z_total().scale_real(e / 3.0) + drive;
            expm_unitary_unchecked(&h, seg.area)
        }
    })
}

/// An ordered pulse list; `segments[0]` is applied first.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    pub label: String,
    pub segments: Vec<PulseSegment>,
}

impl PulseSequence {
    pub fn new(label: impl Into<String>, segments: Vec<PulseSegment>) -> Self {
        PulseSequence {
            label: label.into(),
            segments,
        }
    }

    /// Total duration in units of Λ⁻¹ with every pulse at amplitude Λ.
    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.area).sum()
    }

    /// Time-ordered product of the segment propagators, all distorted by
    /// the same error.
    pub fn propagator(&self, err: ErrorModel) -> Result<Unitary> {
        if self.segments.is_empty() {
            return Err(Error::invalid(format!(
                "sequence `{}` has no segments",
                self.label
            )));
        }
        let factors = self
            .segments
            .iter()
            .map(|s| segment_propagator(s, err))
            .collect::<Result<Vec<_>>>()?;
        compose(&factors)
    }

    /// `idx,channel,tau_over_pi,theta_over_pi` table, one line per segment.
    pub fn segment_table_csv(&self) -> String {
        let mut out = String::from("idx,channel,tau_over_pi,theta_over_pi\n");
        for (i, s) in self.segments.iter().enumerate() {
            let ch = match s.channel {
                Channel::Mw => "MW",
                Channel::Rf => "RF",
            };
            out.push_str(&format!(
                "{i},{ch},{},{}\n",
                sig9(s.area / PI),
                sig9(s.phase / PI)
            ));
        }
        out
    }
}

/// Free-function form of [`PulseSequence::propagator`].
pub fn propagator(seq: &PulseSequence, err: ErrorModel) -> Result<Unitary> {
    seq.propagator(err)
}

/// U_sq = U_r U_m with U_m = exp(i(π/4)σ_y^20) and U_r = exp(i(π/2)σ_y^23):
///
/// ```text
///          ⎡  1  1    0 ⎤
/// (1/√2) · ⎢  0  0  −√2 ⎥
///          ⎣ −1  1    0 ⎦
/// ```
pub fn sequential_gate() -> Unitary {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let m = Matrix3::from_real([[a, a, 0.0], [0.0, 0.0, -1.0], [-a, a, 0.0]]);
    Unitary::new(m).expect("sequential gate is unitary")
}

/// MW(π/2, π/2) followed by RF(π, π/2); total duration 3π/2.
pub fn sequential_segments() -> PulseSequence {
    PulseSequence::new(
        "sequential",
        vec![PulseSegment::mw(FRAC_PI_2, FRAC_PI_2), PulseSegment::rf(PI, FRAC_PI_2)],
    )
}

/// BB1 correction phase φ = arccos(−θ/4π) for a target rotation of area θ.
pub fn bb1_phase(target_area: f64) -> f64 {
    (-target_area / (4.0 * PI)).acos()
}

/// BB1 replacement of a rotation of area `target` about phase `axis`:
/// (θ/2)_axis, π_{axis+φ}, 2π_{axis+3φ}, π_{axis+φ}, (θ/2)_axis.
fn bb1_block(channel: Channel, target: f64, axis: f64) -> [PulseSegment; 5] {
    let phi = bb1_phase(target);
    let seg = |area, phase| PulseSegment::new(channel, area, phase).expect("valid BB1 segment");
    [
        seg(target / 2.0, axis),
        seg(PI, axis + phi),
        seg(2.0 * PI, axis + 3.0 * phi),
        seg(PI, axis + phi),
        seg(target / 2.0, axis),
    ]
}

/// Ten-segment BB1 version of the sequential gate, robust to pulse-length
/// errors. Phases are the closed-form values (1.04π, 2.12π for MW and
/// 1.08π, 2.24π for RF to two decimals).
pub fn bb1_sequence() -> PulseSequence {
    let mut segs = Vec::with_capacity(10);
    segs.extend(bb1_block(Channel::Mw, FRAC_PI_2, FRAC_PI_2));
    segs.extend(bb1_block(Channel::Rf, PI, FRAC_PI_2));
    PulseSequence::new("bb1", segs)
}

/// CORPSE areas (first, second, third in time order) for a target area θ:
/// θ/2 − κ, 2π − 2κ, 2π + θ/2 − κ with κ = arcsin(sin(θ/2)/2).
pub fn corpse_areas(target_area: f64) -> [f64; 3] {
    let half = target_area / 2.0;
    let kappa = (half.sin() / 2.0).asin();
    [half - kappa, 2.0 * PI - 2.0 * kappa, 2.0 * PI + half - kappa]
}

fn corpse_block(channel: Channel, target: f64, axis: f64) -> [PulseSegment; 3] {
    let [a1, a2, a3] = corpse_areas(target);
    let seg = |area, phase| PulseSegment::new(channel, area, phase).expect("valid CORPSE segment");
    [seg(a1, axis), seg(a2, axis - PI), seg(a3, axis)]
}

/// Six-segment CORPSE version of the sequential gate. MW areas are
/// (0.135π, 1.770π, 2.135π) and RF areas (π/3, 5π/3, 7π/3).
pub fn corpse_sequence() -> PulseSequence {
    let mut segs = Vec::with_capacity(6);
    segs.extend(corpse_block(Channel::Mw, FRAC_PI_2, FRAC_PI_2));
    segs.extend(corpse_block(Channel::Rf, PI, FRAC_PI_2));
    PulseSequence::new("corpse", segs)
}

/// 3π/2, the duration of the sequential gate in units of Λ⁻¹.
pub fn sequential_duration() -> f64 {
    1.5 * PI
}
