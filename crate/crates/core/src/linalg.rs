//! 2×2 complex matrices and the Hermitian model of de Sitter 3-space.
//!
//! De Sitter space is realised as the quadric of Hermitian matrices with
//! determinant −1, carrying the Lorentz form ⟨X, X⟩ = −det X. `SL(2,C)` acts
//! by `A·X = A X A*` and the base point is [`ComplexMat2::J`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute tolerance for the structural predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMat2 {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

impl ComplexMat2 {
    pub const IDENTITY: Self = Self::new(ONE, ZERO, ZERO, ONE);
    pub const ZERO: Self = Self::new(ZERO, ZERO, ZERO, ZERO);
    /// Base point of de Sitter space; its stabiliser is `SL(2,R)`.
    pub const J: Self = Self::new(ZERO, Complex64::new(0.0, -1.0), I, ZERO);

    pub const fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn from_real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        Self::new(d1, ZERO, ZERO, d2)
    }

    pub fn det(&self) -> Complex64 {
        det2(self)
    }

    pub fn trace(&self) -> Complex64 {
        self.a11 + self.a22
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(self.a11.conj(), self.a21.conj(), self.a12.conj(), self.a22.conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(c * self.a11, c * self.a12, c * self.a21, c * self.a22)
    }

    /// Inverse via the adjugate. No check is made for singularity.
    pub fn inverse(&self) -> Self {
        let d = self.det();
        Self::new(self.a22 / d, -self.a12 / d, -self.a21 / d, self.a11 / d)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr()).sqrt()
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }

    pub fn hermitian_residual(&self) -> f64 {
        (*self - self.adjoint()).norm()
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        (self.det() - ONE).norm() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.trace().norm() <= tol
    }

    pub(crate) fn require_hermitian(&self, tol: f64) -> Result<()> {
        let residual = self.hermitian_residual();
        if residual > tol {
            return Err(Error::NotHermitian { residual, tol });
        }
        Ok(())
    }

    pub(crate) fn require_unimodular(&self, tol: f64) -> Result<()> {
        let residual = (self.det() - ONE).norm();
        if !(residual <= tol) {
            return Err(Error::NotUnimodular { residual, tol });
        }
        Ok(())
    }
}

impl Add for ComplexMat2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl Sub for ComplexMat2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl Neg for ComplexMat2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a11, -self.a12, -self.a21, -self.a22)
    }
}

impl Mul for ComplexMat2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl Mul<ComplexMat2> for f64 {
    type Output = ComplexMat2;
    fn mul(self, m: ComplexMat2) -> ComplexMat2 {
        m.scale(self.into())
    }
}

impl Mul<f64> for ComplexMat2 {
    type Output = ComplexMat2;
    fn mul(self, x: f64) -> ComplexMat2 {
        self.scale(x.into())
    }
}

impl Mul<ComplexMat2> for Complex64 {
    type Output = ComplexMat2;
    fn mul(self, m: ComplexMat2) -> ComplexMat2 {
        m.scale(self)
    }
}

impl fmt::Display for ComplexMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22)
    }
}

pub fn det2(m: &ComplexMat2) -> Complex64 {
    m.a11 * m.a22 - m.a12 * m.a21
}

pub fn commutator(a: &ComplexMat2, b: &ComplexMat2) -> ComplexMat2 {
    *a * *b - *b * *a
}

/// Lorentz inner product on Hermitian matrices, obtained by polarising
/// ⟨X, X⟩ = −det X.
pub fn lorentz_inner(x: &ComplexMat2, y: &ComplexMat2) -> Result<f64> {
    lorentz_inner_tol(x, y, DEFAULT_TOL)
}

pub fn lorentz_inner_tol(x: &ComplexMat2, y: &ComplexMat2, tol: f64) -> Result<f64> {
    x.require_hermitian(tol)?;
    y.require_hermitian(tol)?;
    Ok(lorentz_form(x, y))
}

/// Unchecked polarisation, used where Hermiticity holds by construction
/// (finite differences of points on de Sitter space, for example).
pub(crate) fn lorentz_form(x: &ComplexMat2, y: &ComplexMat2) -> f64 {
    -((*x + *y).det() - x.det() - y.det()).re / 2.0
}

/// The bundle projection `A ↦ A J A*` onto de Sitter space.
pub fn project_to_ds(a: &ComplexMat2) -> Result<ComplexMat2> {
    project_to_ds_tol(a, DEFAULT_TOL)
}

pub fn project_to_ds_tol(a: &ComplexMat2, tol: f64) -> Result<ComplexMat2> {
    a.require_unimodular(tol)?;
    Ok(project_unchecked(a))
}

pub(crate) fn project_unchecked(a: &ComplexMat2) -> ComplexMat2 {
    *a * ComplexMat2::J * a.adjoint()
}

/// Coordinates of a Hermitian matrix in the chart
/// `X = [[x0 + x3, x1 + i x2], [x1 − i x2, x0 − x3]]`, signature (−,+,+,+).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinkowskiVec {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl MinkowskiVec {
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    /// −x0² + x1² + x2² + x3².
    pub fn minkowski_norm_sqr(&self) -> f64 {
        -self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }
}

pub fn minkowski_coords(x: &ComplexMat2) -> Result<MinkowskiVec> {
    x.require_hermitian(DEFAULT_TOL)?;
    Ok(coords_unchecked(x))
}

pub(crate) fn coords_unchecked(x: &ComplexMat2) -> MinkowskiVec {
    let x0 = 0.5 * (x.a11.re + x.a22.re);
    let x3 = 0.5 * (x.a11.re - x.a22.re);
    let x1 = 0.5 * (x.a12.re + x.a21.re);
    let x2 = 0.5 * (x.a12.im - x.a21.im);
    MinkowskiVec::new(x0, x1, x2, x3)
}

pub fn hermitian_from_coords(v: &MinkowskiVec) -> ComplexMat2 {
    ComplexMat2::new(
        Complex64::new(v.x0 + v.x3, 0.0),
        Complex64::new(v.x1, v.x2),
        Complex64::new(v.x1, -v.x2),
        Complex64::new(v.x0 - v.x3, 0.0),
    )
}
