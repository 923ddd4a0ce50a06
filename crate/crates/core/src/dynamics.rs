//! The Hamiltonian H, the momentum U, the Lax equation U′ = [U, H] and the
//! momentum map Φ = A U A⁻¹.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{commutator, ComplexMat2, DEFAULT_TOL};
use crate::potential::{Jet3, Potential};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Spin of a null curve: the sign ε in the canonical frame equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    Positive,
    Negative,
}

impl Spin {
    pub fn sign(self) -> f64 {
        match self {
            Spin::Positive => 1.0,
            Spin::Negative => -1.0,
        }
    }

    pub fn from_sign(eps: f64) -> Result<Self> {
        if eps == 1.0 {
            Ok(Spin::Positive)
        } else if eps == -1.0 {
            Ok(Spin::Negative)
        } else {
            Err(Error::InvalidConfig(format!("spin must be +1 or -1, got {eps}")))
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Spin::Positive => Spin::Negative,
            Spin::Negative => Spin::Positive,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Positive => "+1",
            Spin::Negative => "-1",
        })
    }
}

/// Lagrange multiplier `m` and spin `ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub m: f64,
    pub eps: Spin,
}

impl ModelParams {
    pub const fn new(m: f64, eps: Spin) -> Self {
        Self { m, eps }
    }

    /// ε(m/3 + i), the point with det U = P(ε(m/3 + i)).
    pub fn spectral_point(&self) -> Complex64 {
        self.eps.sign() * Complex64::new(self.m / 3.0, 1.0)
    }
}

/// Canonical-frame generator in terms of the curvature:
/// `H(k) = [[0, ε], [k + i, 0]]`.
pub fn hamiltonian_k(k: f64, params: &ModelParams) -> ComplexMat2 {
    ComplexMat2::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(params.eps.sign(), 0.0),
        Complex64::new(k, 1.0),
        Complex64::new(0.0, 0.0),
    )
}

/// `H(h) = [[0, ε], [2εh + m/3 + i, 0]]`.
pub fn hamiltonian_h(h: f64, params: &ModelParams) -> ComplexMat2 {
    hamiltonian_k(crate::potential::k_from_h(h, params), params)
}

/// The momentum matrix U(h) of a reduced-curvature jet. Traceless.
pub fn momentum_u(j: &Jet3, params: &ModelParams) -> ComplexMat2 {
    let e = params.eps.sign();
    let m = params.m;
    let Jet3 { h, h1, h2 } = *j;
    let upper = 2.0 * I * e * (h - params.spectral_point());
    let lower_re = 2.0 * (h + 2.0 * e * m / 3.0);
    let lower_im = -e * (h2 - 4.0 * h * h + 2.0 * e * m * h / 3.0 + 2.0 * m * m / 9.0 - 2.0);
    ComplexMat2::new(I * h1, upper, Complex64::new(lower_re, lower_im), -I * h1)
}

/// dU/ds along the reduced flow, entry by entry, using h‴ = 12hh′.
pub fn momentum_derivative(j: &Jet3, params: &ModelParams) -> ComplexMat2 {
    let e = params.eps.sign();
    let m = params.m;
    let Jet3 { h, h1, h2 } = *j;
    let h3 = j.h3();
    let lower_im = -e * (h3 - 8.0 * h * h1 + 2.0 * e * m * h1 / 3.0);
    ComplexMat2::new(I * h2, 2.0 * I * e * h1, Complex64::new(2.0 * h1, lower_im), -I * h2)
}

/// Frobenius norm of `dU/ds − [U, H]` for an arbitrary jet.
pub fn lax_defect(j: &Jet3, params: &ModelParams) -> f64 {
    let u = momentum_u(j, params);
    let h = hamiltonian_h(j.h, params);
    (momentum_derivative(j, params) - commutator(&u, &h)).norm()
}

/// Lax residual `‖dU/ds − [U, H]‖` at `s` on a potential.
pub fn lax_residual(p: &Potential, s: f64, params: &ModelParams) -> Result<f64> {
    Ok(lax_defect(&p.eval(s)?, params))
}

/// Φ(A, U) = A U A⁻¹.
pub fn momentum_map(a: &ComplexMat2, u: &ComplexMat2) -> Result<ComplexMat2> {
    a.require_unimodular(DEFAULT_TOL)?;
    Ok(momentum_map_unchecked(a, u))
}

pub(crate) fn momentum_map_unchecked(a: &ComplexMat2, u: &ComplexMat2) -> ComplexMat2 {
    *a * *u * a.inverse()
}

/// Coordinates of the lift of a curve to momentum space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumLift {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
    pub x5: f64,
}

/// Lift of a curvature jet `(k, k′, k″)` to momentum space.
pub fn lift_to_momentum_space(k: f64, k1: f64, k2: f64, params: &ModelParams) -> MomentumLift {
    let e = params.eps.sign();
    let m = params.m;
    MomentumLift {
        x1: -e / 2.0 * k1,
        x2: k2 / 4.0 - e / 2.0 * (k * k - m * k + 2.0),
        x3: e / 2.0 * (m + k),
        x4: 0.0,
        x5: 1.0,
    }
}
