//! Complex linear algebra for the (|0⟩, |2⟩, |3⟩) subspace.

mod eigen;
mod matrix;
mod operators;

pub use eigen::{eigh, expm_unitary, HermitianEigen};
pub(crate) use eigen::expm_unitary_unchecked;
pub use matrix::{Matrix3, StateVector3, Unitary, C64, HERMITIAN_TOL, UNITARY_TOL};
pub use operators::{
    effective_hamiltonian, sigma, sigma_x, sigma_y, sigma_z, z_total, Drive, Level,
    PhysicalConstants, Transition, NV_13C,
};

use crate::{Error, Result};

/// Time-ordered product of propagators. `factors[0]` acts first, so the
/// result is `factors[n-1] ··· factors[0]`.
pub fn compose<'a, I>(factors: I) -> Result<Unitary>
where
    I: IntoIterator<Item = &'a Unitary>,
{
    let mut iter = factors.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::invalid("cannot compose an empty list of propagators"))?;
    Ok(iter.fold(*first, |acc, u| *u * acc))
}

/// Gate-overlap fidelity F = |Tr(U_a† U_i) / Tr(U_i† U_i)|^{1/2}.
///
/// Insensitive to global phase; equals 1 iff the gates agree up to phase.
pub fn gate_fidelity(actual: &Unitary, ideal: &Unitary) -> f64 {
    let overlap = actual.matrix().adjoint().trace_product(ideal.matrix());
    let norm = ideal.matrix().adjoint().trace_product(ideal.matrix());
    (overlap / norm).norm().sqrt().min(1.0)
}
