//! Robust control of an electron/nuclear spin entangling gate.
//!
//! The model is the three-level effective system (|0⟩, |2⟩, |3⟩) of an NV
//! centre electron spin hyperfine-coupled to a ¹³C nuclear spin. A microwave
//! (MW) drive acts on the |0⟩↔|2⟩ transition and a radio-frequency (RF) drive
//! on |2⟩↔|3⟩. The crate builds the sequential Bell-state gate, its BB1 and
//! CORPSE composite versions, sweeps their fidelity under systematic
//! pulse-length and off-resonance errors, and optimizes ensemble-robust
//! piecewise-constant controls with GRAPE.
//!
//! All amplitudes are expressed in units of the maximum Rabi amplitude Λ and
//! all times in units of Λ⁻¹.

pub mod error;
pub mod grape;
pub mod numfmt;
pub mod par;
pub mod quantum;
pub mod scan;
pub mod sequences;

pub use error::{Error, Result};
pub use par::Execution;
pub use quantum::{gate_fidelity, Matrix3, StateVector3, Unitary, C64};
pub use sequences::{ErrorKind, ErrorModel};
