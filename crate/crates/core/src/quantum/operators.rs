//! Transition operators and the effective three-level Hamiltonian.

use super::matrix::{Matrix3, C64};
use crate::{Error, Result};

/// One of the three levels kept by the effective model. Level |1⟩ of the
/// four-level manifold decouples and has no representation here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    /// |0⟩ = |0⟩ₑ|0⟩ₙ
    L0,
    /// |2⟩ = |1⟩ₑ|0⟩ₙ
    L2,
    /// |3⟩ = |1⟩ₑ|1⟩ₙ
    L3,
}

impl Level {
    pub fn from_label(label: u8) -> Result<Level> {
        match label {
            0 => Ok(Level::L0),
            2 => Ok(Level::L2),
            3 => Ok(Level::L3),
            other => Err(Error::invalid(format!(
                "level |{other}⟩ is not part of the (|0⟩, |2⟩, |3⟩) subspace"
            ))),
        }
    }

    pub fn label(self) -> u8 {
        match self {
            Level::L0 => 0,
            Level::L2 => 2,
            Level::L3 => 3,
        }
    }

    /// Row/column index in the basis order (|0⟩, |2⟩, |3⟩).
    pub fn index(self) -> usize {
        match self {
            Level::L0 => 0,
            Level::L2 => 1,
            Level::L3 => 2,
        }
    }
}

/// |p⟩⟨q|
pub fn sigma(p: u8, q: u8) -> Result<Matrix3> {
    let (p, q) = (Level::from_label(p)?, Level::from_label(q)?);
    Ok(outer(p, q))
}

fn outer(p: Level, q: Level) -> Matrix3 {
    let mut m = Matrix3::zeros();
    m.0[p.index()][q.index()] = C64::new(1.0, 0.0);
    m
}

/// σ_x^pq = |p⟩⟨q| + |q⟩⟨p|
pub fn sigma_x(p: u8, q: u8) -> Result<Matrix3> {
    Ok(sigma(p, q)? + sigma(q, p)?)
}

/// σ_y^pq = i(|p⟩⟨q| − |q⟩⟨p|)
pub fn sigma_y(p: u8, q: u8) -> Result<Matrix3> {
    Ok((sigma(p, q)? - sigma(q, p)?).scale(C64::i()))
}

/// σ_z^pq = |p⟩⟨p| − |q⟩⟨q|, so σ_z^20 = −σ₀₀ + σ₂₂ and σ_z^23 = σ₂₂ − σ₃₃.
pub fn sigma_z(p: u8, q: u8) -> Result<Matrix3> {
    Ok(sigma(p, p)? - sigma(q, q)?)
}

/// Ẑ = σ_z^20 + σ_z^23 = diag(−1, 2, −1)
pub fn z_total() -> Matrix3 {
    Matrix3::from_real([[-1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, -1.0]])
}

/// The two driven transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transition {
    /// Microwave, |0⟩ ↔ |2⟩.
    Mw,
    /// Radio frequency, |2⟩ ↔ |3⟩.
    Rf,
}

impl Transition {
    /// (p, q) labels with the convention σ^pq used for the drive operators.
    pub fn levels(self) -> (u8, u8) {
        match self {
            Transition::Mw => (2, 0),
            Transition::Rf => (2, 3),
        }
    }

    pub fn sigma_x(self) -> Matrix3 {
        let (p, q) = self.levels();
        sigma_x(p, q).expect("transition levels are valid")
    }

    pub fn sigma_y(self) -> Matrix3 {
        let (p, q) = self.levels();
        sigma_y(p, q).expect("transition levels are valid")
    }

    /// cos θ σ_x + sin θ σ_y on this transition.
    pub fn drive_axis(self, phase: f64) -> Matrix3 {
        self.sigma_x().scale_real(phase.cos()) + self.sigma_y().scale_real(phase.sin())
    }
}

/// Amplitude (units of Λ) and phase (radians) of one drive.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Drive {
    pub amplitude: f64,
    pub phase: f64,
}

impl Drive {
    pub fn new(amplitude: f64, phase: f64) -> Self {
        Drive { amplitude, phase }
    }

    pub fn off() -> Self {
        Drive::default()
    }
}

/// Effective Hamiltonian in the rotating frame, δ in units of Λ:
///
/// ```text
///        ⎡ 2δ/3          u_m e^{−iθ_m}   0             ⎤
/// H = −½ ⎢ u_m e^{iθ_m}  −4δ/3           u_r e^{iθ_r}  ⎥
///        ⎣ 0             u_r e^{−iθ_r}   2δ/3          ⎦
/// ```
pub fn effective_hamiltonian(detuning: f64, mw: Drive, rf: Drive) -> Result<Matrix3> {
    for (name, d) in [("microwave", mw), ("radio-frequency", rf)] {
        if !(d.amplitude >= 0.0) {
            return Err(Error::invalid(format!(
                "{name} amplitude must be non-negative, got {}",
                d.amplitude
            )));
        }
    }
    let half = C64::new(-0.5, 0.0);
    let dd = C64::new(detuning, 0.0);
    let em = C64::from_polar(mw.amplitude, mw.phase);
    let er = C64::from_polar(rf.amplitude, rf.phase);
    let zero = C64::new(0.0, 0.0);
    let m = Matrix3([
        [dd * (2.0 / 3.0), em.conj(), zero],
        [em, dd * (-4.0 / 3.0), er],
        [zero, er.conj(), dd * (2.0 / 3.0)],
    ]);
    Ok(m.scale(half))
}

/// Transition frequencies of the four-level ground manifold. They are only
/// needed to derive the rotating frame; the effective model does not use
/// them.
///
/// The frame is U₀ = exp(−iH₀t) with H₀ = a σ₂₂ + b σ₃₃ + c σ₁₁ + d σ₀₀,
/// where a − b = ω_r, a − d = ω_m, a = ω_m + (2δ_m − δ_r)/3 and c = ω₀₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// |0⟩ ↔ |2⟩ splitting, Hz.
    pub omega_02: f64,
    /// |2⟩ ↔ |3⟩ splitting, Hz.
    pub omega_03: f64,
    /// |0⟩ ↔ |1⟩ splitting, Hz.
    pub omega_01: f64,
}

pub const NV_13C: PhysicalConstants = PhysicalConstants {
    omega_02: 2.88e9,
    omega_03: 130e6,
    omega_01: 2e6,
};

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn sigma_y_23_is_minus_pauli_y_on_its_block() {
        let z = c(0.0, 0.0);
        let expected = Matrix3([[z, z, z], [z, z, c(0.0, 1.0)], [z, c(0.0, -1.0), z]]);
        assert_eq!(sigma_y(2, 3).unwrap(), expected);
    }

    #[test]
    fn sigma_y_20_is_pauli_y_on_its_block() {
        let z = c(0.0, 0.0);
        let expected = Matrix3([[z, c(0.0, -1.0), z], [c(0.0, 1.0), z, z], [z, z, z]]);
        assert_eq!(sigma_y(2, 0).unwrap(), expected);
    }

    #[test]
    fn z_sum() {
        let z = sigma_z(2, 0).unwrap() + sigma_z(2, 3).unwrap();
        assert_eq!(z, z_total());
        assert_eq!(z, Matrix3::from_real([[-1., 0., 0.], [0., 2., 0.], [0., 0., -1.]]));
    }

    #[test]
    fn invalid_levels() {
        assert!(matches!(sigma(1, 0), Err(Error::InvalidArgument(_))));
        assert!(sigma_x(0, 4).is_err());
        assert_eq!(Level::from_label(3).unwrap().label(), 3);
    }

    #[test]
    fn block_algebra() {
        for (p, q) in [(2u8, 0u8), (2, 3)] {
            let sx = sigma_x(p, q).unwrap();
            let sy = sigma_y(p, q).unwrap();
            let sz = sigma_z(p, q).unwrap();
            let block_id = sigma(p, p).unwrap() + sigma(q, q).unwrap();
            assert_eq!(sx * sx, block_id);
            assert_eq!(sy * sy, block_id);
            let comm = sx.commutator(&sy);
            assert!(comm.max_abs_diff(&sz.scale(c(0.0, -2.0))) < 1e-15);
        }
    }

    #[test]
    fn zero_drive_gives_zero_hamiltonian() {
        let h = effective_hamiltonian(0.0, Drive::new(0.0, 1.3), Drive::new(0.0, -0.4)).unwrap();
        assert_eq!(h, Matrix3::zeros());
    }

    #[test]
    fn single_resonant_mw_drive() {
        let h = effective_hamiltonian(0.0, Drive::new(1.0, 0.0), Drive::off()).unwrap();
        let expected = sigma_x(2, 0).unwrap().scale_real(-0.5);
        assert!(h.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn negative_amplitude_rejected() {
        assert!(effective_hamiltonian(0.0, Drive::new(-1.0, 0.0), Drive::off()).is_err());
        assert!(effective_hamiltonian(0.0, Drive::off(), Drive::new(f64::NAN, 0.0)).is_err());
    }
}
