//! Hermitian eigendecomposition and the exponential exp(−iHt) for 3×3
//! generators, using cyclic complex Jacobi rotations.

use super::matrix::{Matrix3, Unitary, C64, HERMITIAN_TOL};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 50;

/// Eigenpairs of a Hermitian matrix: `h = vectors · diag(values) · vectors†`,
/// eigenvectors stored as columns, eigenvalues in ascending order.
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen {
    pub values: [f64; 3],
    pub vectors: Matrix3,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> Matrix3 {
        let d = Matrix3::diagonal(self.values.map(|x| C64::new(x, 0.0)));
        self.vectors * d * self.vectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with a numeric error when `h` is not Hermitian to within
/// 1e-12 (relative to its largest entry when that exceeds one).
pub fn eigh(h: &Matrix3) -> Result<HermitianEigen> {
    check_hermitian(h)?;
    Ok(eigh_unchecked(h))
}

fn check_hermitian(h: &Matrix3) -> Result<()> {
    if !h.is_finite() {
        return Err(Error::Numeric("generator has non-finite entries".into()));
    }
    let tol = HERMITIAN_TOL * h.max_abs().max(1.0);
    let defect = h.hermiticity_defect();
    if defect > tol {
        return Err(Error::Numeric(format!(
            "generator is not Hermitian (defect {defect:.3e} > {tol:.1e})"
        )));
    }
    Ok(())
}

pub(crate) fn eigh_unchecked(h: &Matrix3) -> HermitianEigen {
    // symmetrize so round-off in the input cannot leak into the rotation
    let mut a = (*h + h.adjoint()).scale_real(0.5);
    for i in 0..3 {
        a.0[i][i].im = 0.0;
    }
    let mut v = Matrix3::identity();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            rotated |= jacobi_rotate(&mut a, &mut v, p, q);
        }
        if !rotated {
            break;
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a.0[i][i].re.total_cmp(&a.0[j][j].re));
    let values = order.map(|i| a.0[i][i].re);
    let mut vectors = Matrix3::zeros();
    for (col, &src) in order.iter().enumerate() {
        for row in 0..3 {
            vectors.0[row][col] = v.0[row][src];
        }
    }
    HermitianEigen { values, vectors }
}

/// Annihilates a[p][q] with a unitary rotation W (a ← W†aW, v ← vW).
/// Returns false when the entry is already negligible.
fn jacobi_rotate(a: &mut Matrix3, v: &mut Matrix3, p: usize, q: usize) -> bool {
    let apq = a.0[p][q];
    let r = apq.norm();
    let app = a.0[p][p].re;
    let aqq = a.0[q][q].re;
    if r == 0.0 || r <= 1e-18 * (app.abs() + aqq.abs()) {
        if r != 0.0 {
            a.0[p][q] = C64::new(0.0, 0.0);
            a.0[q][p] = C64::new(0.0, 0.0);
        }
        return false;
    }
    let phase = apq / r; // e^{iφ}

    // real Jacobi rotation on [[app, r], [r, aqq]]
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // W = diag(1, e^{-iφ} at q) · [[c, s], [-s, c]]
    let wpp = C64::new(c, 0.0);
    let wpq = C64::new(s, 0.0);
    let wqp = phase.conj() * (-s);
    let wqq = phase.conj() * c;

    // a ← a W (columns p, q)
    for k in 0..3 {
        let akp = a.0[k][p];
        let akq = a.0[k][q];
        a.0[k][p] = akp * wpp + akq * wqp;
        a.0[k][q] = akp * wpq + akq * wqq;
    }
    // a ← W† a (rows p, q)
    for k in 0..3 {
        let apk = a.0[p][k];
        let aqk = a.0[q][k];
        a.0[p][k] = wpp.conj() * apk + wqp.conj() * aqk;
        a.0[q][k] = wpq.conj() * apk + wqq.conj() * aqk;
    }
    a.0[p][q] = C64::new(0.0, 0.0);
    a.0[q][p] = C64::new(0.0, 0.0);
    a.0[p][p].im = 0.0;
    a.0[q][q].im = 0.0;

    for k in 0..3 {
        let vkp = v.0[k][p];
        let vkq = v.0[k][q];
        v.0[k][p] = vkp * wpp + vkq * wqp;
        v.0[k][q] = vkp * wpq + vkq * wqq;
    }
    true
}

/// exp(−iHt) for a Hermitian generator `h` and real duration `t`.
pub fn expm_unitary(h: &Matrix3, t: f64) -> Result<Unitary> {
    check_hermitian(h)?;
    if !t.is_finite() {
        return Err(Error::Numeric(format!("non-finite duration {t}")));
    }
    Ok(expm_unitary_unchecked(h, t))
}

/// [`expm_unitary`] without input validation, for generators built from
/// Hermitian parts inside the crate.
pub(crate) fn expm_unitary_unchecked(h: &Matrix3, t: f64) -> Unitary {
    let eig = eigh_unchecked(h);
    let v = eig.vectors;
    let phases = eig.values.map(|l| C64::from_polar(1.0, -l * t));
    // v · diag(phases) · v†
    let mut u = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..3 {
                acc += v.0[i][k] * phases[k] * v.0[j][k].conj();
            }
            u.0[i][j] = acc;
        }
    }
    Unitary::new_unchecked(u)
}
