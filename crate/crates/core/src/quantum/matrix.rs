use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Tolerance used when a matrix is required to be Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance used when a matrix is required to be unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Dense 3×3 complex matrix in the fixed basis order (|0⟩, |2⟩, |3⟩).
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix3(pub [[C64; 3]; 3]);

impl Matrix3 {
    pub const fn zeros() -> Self {
        Matrix3([[ZERO; 3]; 3])
    }

    pub const fn identity() -> Self {
        Matrix3([[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]])
    }

    pub fn from_real(rows: [[f64; 3]; 3]) -> Self {
        let mut m = Self::zeros();
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.0[i][j] = C64::new(x, 0.0);
            }
        }
        m
    }

    pub fn diagonal(d: [C64; 3]) -> Self {
        let mut m = Self::zeros();
        for (i, &x) in d.iter().enumerate() {
            m.0[i][i] = x;
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &Matrix3) -> C64 {
        let mut acc = ZERO;
        for i in 0..3 {
            for k in 0..3 {
                acc += self.0[i][k] * other.0[k][i];
            }
        }
        acc
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|x| *x *= s);
        m
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix3) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// ‖M†M − I‖ in the entrywise max norm.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Matrix3::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn apply(&self, v: &StateVector3) -> StateVector3 {
        let mut out = [ZERO; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|k| self.0[i][k] * v.0[k]).sum();
        }
        StateVector3(out)
    }

    /// Commutator [self, other].
    pub fn commutator(&self, other: &Matrix3) -> Matrix3 {
        *self * *other - *other * *self
    }
}

impl Default for Matrix3 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl Index<(usize, usize)> for Matrix3 {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Matrix3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Mul for Matrix3 {
    type Output = Matrix3;

    #[inline]
    fn mul(self, rhs: Matrix3) -> Matrix3 {
        let a = &self.0;
        let b = &rhs.0;
        let mut c = [[ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        Matrix3(c)
    }
}

impl Add for Matrix3 {
    type Output = Matrix3;

    fn add(self, rhs: Matrix3) -> Matrix3 {
        let mut m = self;
        m.0.iter_mut()
            .flatten()
            .zip(rhs.0.iter().flatten())
            .for_each(|(a, b)| *a += b);
        m
    }
}

impl Sub for Matrix3 {
    type Output = Matrix3;

    fn sub(self, rhs: Matrix3) -> Matrix3 {
        self + (-rhs)
    }
}

impl Neg for Matrix3 {
    type Output = Matrix3;

    fn neg(self) -> Matrix3 {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for Matrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix3 [")?;
        for row in &self.0 {
            write!(f, "  ")?;
            for x in row {
                write!(f, "{:>+.6}{:+.6}i  ", x.re, x.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.0.iter().enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|x| fmt_complex(*x)).collect();
            write!(f, "[ {} ]", cells.join("  "))?;
        }
        Ok(())
    }
}

fn fmt_complex(x: C64) -> String {
    // print -0.0 as 0.0 so output is stable
    let re = if x.re.abs() < 5e-13 { 0.0 } else { x.re };
    let im = if x.im.abs() < 5e-13 { 0.0 } else { x.im };
    if im == 0.0 {
        format!("{re:>10.6}")
    } else {
        format!("{re:>10.6}{im:+.6}i")
    }
}

/// State vector over (|0⟩, |2⟩, |3⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector3(pub [C64; 3]);

impl StateVector3 {
    pub fn basis(index: usize) -> Result<Self> {
        if index > 2 {
            return Err(Error::invalid(format!("basis index {index} out of range 0..3")));
        }
        let mut v = [ZERO; 3];
        v[index] = ONE;
        Ok(StateVector3(v))
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &StateVector3) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A matrix known to be unitary to within [`UNITARY_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary(Matrix3);

impl Unitary {
    pub const fn identity() -> Self {
        Unitary(Matrix3::identity())
    }

    pub fn new(m: Matrix3) -> Result<Self> {
        let defect = m.unitarity_defect();
        if defect.is_nan() || defect > UNITARY_TOL {
            return Err(Error::Numeric(format!(
                "matrix is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(Unitary(m))
    }

    /// Wraps a matrix the caller has constructed to be unitary.
    pub(crate) const fn new_unchecked(m: Matrix3) -> Self {
        Unitary(m)
    }

    pub fn matrix(&self) -> &Matrix3 {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix3 {
        self.0
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary(self.0.adjoint())
    }

    pub fn apply(&self, v: &StateVector3) -> StateVector3 {
        self.0.apply(v)
    }

    /// Multiplies by a global phase e^{iφ}.
    pub fn with_global_phase(&self, phi: f64) -> Unitary {
        Unitary(self.0.scale(C64::from_polar(1.0, phi)))
    }
}

impl Mul for Unitary {
    type Output = Unitary;

    fn mul(self, rhs: Unitary) -> Unitary {
        Unitary(self.0 * rhs.0)
    }
}

impl fmt::Display for Unitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}
