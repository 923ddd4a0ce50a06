//! Fixed-step Runge–Kutta integration of the frame equation `Γ′ = ΓH(k)` and
//! of the reduced Euler–Lagrange equation `h‴ = 12hh′`, used as ground truth
//! for the closed forms.

use crate::closed_form::FrameSample;
use crate::dynamics::{hamiltonian_h, ModelParams};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMat2, DEFAULT_TOL};
use crate::potential::{Jet3, Potential};

/// Determinant drift that aborts a frame integration.
pub const DRIFT_LIMIT: f64 = 1e-4;

/// Magnitude of `h` treated as a blow-up of the reduced equation.
pub const BLOW_UP_LIMIT: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub step: f64,
    pub s0: f64,
    pub s1: f64,
    /// Rescale `Γ` to `det Γ = 1` after each step. Off by default so that
    /// drift stays visible as a diagnostic.
    pub renormalize: bool,
}

impl IntegratorConfig {
    pub fn new(step: f64, s0: f64, s1: f64) -> Self {
        Self { step, s0, s1, renormalize: false }
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidConfig(format!("step must be positive, got {}", self.step)));
        }
        if !(self.s0.is_finite() && self.s1.is_finite()) || self.s0 == self.s1 {
            return Err(Error::InvalidConfig(format!("empty interval [{}, {}]", self.s0, self.s1)));
        }
        if self.step > (self.s1 - self.s0).abs() {
            return Err(Error::InvalidConfig(format!(
                "step {} exceeds the interval length {}",
                self.step,
                (self.s1 - self.s0).abs()
            )));
        }
        Ok(())
    }

    /// The uniform grid `s0, s0 + δ, …, s1` with `δ ≤ step`.
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.s1 - self.s0).abs() / self.step).round().max(1.0) as usize;
        uniform_grid(self.s0, self.s1, n + 1)
    }
}

/// `n` equally spaced points from `s0` to `s1` inclusive.
pub fn uniform_grid(s0: f64, s1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![s0],
        _ => (0..n).map(|i| if i + 1 == n { s1 } else { s0 + (s1 - s0) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

fn rk4_frame_step(g: &ComplexMat2, s: f64, dt: f64, p: &Potential, params: &ModelParams) -> Result<ComplexMat2> {
    let rhs = |g: &ComplexMat2, t: f64| -> Result<ComplexMat2> { Ok(*g * hamiltonian_h(p.eval(t)?.h, params)) };
    let half = 0.5 * dt;
    let k1 = rhs(g, s)?;
    let k2 = rhs(&(*g + half * k1), s + half)?;
    let k3 = rhs(&(*g + half * k2), s + half)?;
    let k4 = rhs(&(*g + dt * k3), s + dt)?;
    Ok(*g + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
}

/// Integrates `Γ′ = ΓH(k(s))` from `Γ(grid[0]) = Γ0`, recording a sample at
/// every grid point and taking substeps no longer than `max_step`.
pub fn integrate_frame_on_grid(
    p: &Potential,
    params: &ModelParams,
    grid: &[f64],
    max_step: f64,
    gamma0: &ComplexMat2,
    renormalize: bool,
) -> Result<Vec<FrameSample>> {
    gamma0.require_unimodular(DEFAULT_TOL)?;
    if !(max_step > 0.0) {
        return Err(Error::InvalidConfig(format!("step must be positive, got {max_step}")));
    }
    let Some(&first) = grid.first() else { return Ok(Vec::new()) };
    let mut g = *gamma0;
    let mut out = Vec::with_capacity(grid.len());
    out.push(FrameSample::new(first, g, p.eval(first)?, params));
    for pair in grid.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let n = ((b - a).abs() / max_step).ceil().max(1.0) as usize;
        let dt = (b - a) / n as f64;
        for i in 0..n {
            g = rk4_frame_step(&g, a + i as f64 * dt, dt, p, params)?;
            if renormalize {
                g = g.scale(g.det().sqrt().inv());
            }
        }
        let drift = (g.det() - 1.0).norm();
        if !(drift <= DRIFT_LIMIT) {
            return Err(Error::DeterminantDrift { s: b, drift, limit: DRIFT_LIMIT });
        }
        out.push(FrameSample::new(b, g, p.eval(b)?, params));
    }
    Ok(out)
}

/// RK4 on `Γ′ = ΓH(k(s))` over `[s0, s1]`, one sample per step.
pub fn integrate_frame(
    p: &Potential,
    params: &ModelParams,
    cfg: &IntegratorConfig,
    gamma0: &ComplexMat2,
) -> Result<Vec<FrameSample>> {
    cfg.validate()?;
    integrate_frame_on_grid(p, params, &cfg.grid(), cfg.step, gamma0, cfg.renormalize)
}

/// A point of a numerically integrated potential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JetSample {
    pub s: f64,
    pub jet: Jet3,
}

/// RK4 on `(h, h′, h″)′ = (h′, h″, 12hh′)` from `jet0` at `cfg.s0`.
pub fn integrate_reduced_el(jet0: &Jet3, cfg: &IntegratorConfig) -> Result<Vec<JetSample>> {
    cfg.validate()?;
    let f = |y: [f64; 3]| [y[1], y[2], 12.0 * y[0] * y[1]];
    let axpy = |y: [f64; 3], a: f64, k: [f64; 3]| [y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2]];
    let grid = cfg.grid();
    let mut y = jet0.to_array();
    let mut out = Vec::with_capacity(grid.len());
    out.push(JetSample { s: grid[0], jet: *jet0 });
    for pair in grid.windows(2) {
        let dt = pair[1] - pair[0];
        let k1 = f(y);
        let k2 = f(axpy(y, 0.5 * dt, k1));
        let k3 = f(axpy(y, 0.5 * dt, k2));
        let k4 = f(axpy(y, dt, k3));
        for i in 0..3 {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if !(y[0].abs() <= BLOW_UP_LIMIT) {
            return Err(Error::BlowUp { s: pair[1], magnitude: y[0].abs() });
        }
        out.push(JetSample { s: pair[1], jet: Jet3::new(y[0], y[1], y[2]) });
    }
    Ok(out)
}

/// Alignment of two frame tracks modulo a constant left factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameComparison {
    /// `A = Γ_A(s₀)·Γ_B(s₀)⁻¹`.
    pub alignment: ComplexMat2,
    /// `max_s ‖Γ_A(s) − A·Γ_B(s)‖`.
    pub max_deviation: f64,
    /// `max_s ‖Γ_A(s)Γ_B(s)⁻¹ − A‖`.
    pub variation: f64,
}

pub fn compare_frames(a: &[FrameSample], b: &[FrameSample]) -> Result<FrameComparison> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!("{} samples vs {}", a.len(), b.len())));
    }
    let (Some(a0), Some(b0)) = (a.first(), b.first()) else {
        return Err(Error::GridMismatch("no samples".into()));
    };
    let alignment = a0.gamma_frame * b0.gamma_frame.inverse();
    let mut max_deviation: f64 = 0.0;
    let mut variation: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        if (x.s - y.s).abs() > 1e-12 * (1.0 + x.s.abs()) {
            return Err(Error::GridMismatch(format!("s = {} vs s = {}", x.s, y.s)));
        }
        max_deviation = max_deviation.max((x.gamma_frame - alignment * y.gamma_frame).norm());
        variation = variation.max((x.gamma_frame * y.gamma_frame.inverse() - alignment).norm());
    }
    Ok(FrameComparison { alignment, max_deviation, variation })
}
