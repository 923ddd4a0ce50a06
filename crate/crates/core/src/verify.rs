//! Residual checks for one configuration: Weierstrass identities, the
//! Euler–Lagrange equation, the momentum algebra, RK4 conservation laws and
//! the closed-form frames against the oracle.

use std::fmt;

use num_complex::Complex64;

use crate::closed_form::{ClosedForm, ClosedFormTag, FrameSample};
use crate::dynamics::{hamiltonian_h, lax_defect, momentum_map_unchecked, momentum_u, ModelParams};
use crate::error::Result;
use crate::linalg::{lorentz_form, ComplexMat2};
use crate::oracle::{compare_frames, integrate_frame_on_grid, uniform_grid};
use crate::potential::{invariants_from_jet, k_jet, Potential};
use crate::weierstrass::Weierstrass;

/// Step of the five-point stencils applied to closed-form functions.
pub const FD_STEP: f64 = 1e-4;

/// One measured residual and the bound it is held to.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tol
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {:<28} residual {:.3e} (tol {:.1e})", self.name, self.residual, self.tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub params: ModelParams,
    pub s0: f64,
    pub s1: f64,
    /// Closed-form samples on `[s0, s1]`.
    pub samples: usize,
    /// RK4 step.
    pub step: f64,
    pub tol: f64,
    /// Negative control: build the closed-form frame with the opposite spin
    /// while the residuals still use the true one.
    pub corrupt_spin: bool,
}

/// The whole suite for `p` on `[s0, s1]`.
pub fn run_suite(p: &Potential, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let tol = cfg.tol;
    let params = cfg.params;
    let grid = uniform_grid(cfg.s0, cfg.s1, cfg.samples.max(5));
    let mut checks = Vec::new();
    let mut push = |name, residual: f64| checks.push(Check { name, residual: nan_to_inf(residual), tol });

    let wf = p.weierstrass();
    push("weierstrass_ode_lattice", lattice_ode_residual(wf, 32));
    let (dz, ds) = lattice_derivative_residuals(wf, 12);
    push("zeta_derivative_fd", dz);
    push("sigma_log_derivative_fd", ds);

    let jets = grid.iter().map(|&s| p.eval(s)).collect::<Result<Vec<_>>>()?;
    let inv = p.invariants();
    push(
        "first_integral",
        max_of(jets.iter().map(|j| {
            let r = j.h1 * j.h1 - inv.cubic(Complex64::new(j.h, 0.0)).re;
            r.abs() / (1.0 + j.h.abs().powi(3))
        })),
    );
    let (el, kel) = el_residuals(p, &grid, &params)?;
    push("el_equation_fd", el);
    push("curvature_equation_fd", kel);
    push(
        "det_u_equals_cubic",
        max_of(jets.iter().map(|j| {
            let want = invariants_from_jet(j).cubic(params.spectral_point());
            (momentum_u(j, &params).det() - want).norm() / (1.0 + want.norm())
        })),
    );
    push("lax_residual", max_of(jets.iter().map(|j| lax_defect(j, &params))));

    let frame_params = if cfg.corrupt_spin { ModelParams::new(params.m, params.eps.flipped()) } else { params };
    let cf = ClosedForm::new(p, &frame_params)?;
    let closed = grid.iter().map(|&s| cf.sample(s)).collect::<Result<Vec<_>>>()?;
    let closed: Vec<FrameSample> =
        closed.into_iter().map(|x| FrameSample::new(x.s, x.gamma_frame, x.jet, &params)).collect();
    // the oracle records every step so the null condition can be
    // differenced; every `stride`-th sample lands on `grid`
    let stride = ((cfg.s1 - cfg.s0).abs() / (grid.len() - 1) as f64 / cfg.step).ceil().max(1.0) as usize;
    let fine = uniform_grid(cfg.s0, cfg.s1, (grid.len() - 1) * stride + 1);
    let oracle = integrate_frame_on_grid(p, &params, &fine, cfg.step, &closed[0].gamma_frame, false)?;

    push("rk4_det_drift", max_of(oracle.iter().map(FrameSample::det_drift)));
    push("rk4_momentum_drift", momentum_drift(&oracle, &params));
    push("rk4_null_condition", null_residual(&oracle));

    push("frame_det", max_of(closed.iter().map(FrameSample::det_drift)));
    push(
        "frame_maurer_cartan",
        max_of(grid.iter().map(|&s| maurer_cartan_residual(&cf, s, &params)).collect::<Result<Vec<_>>>()?),
    );
    let coarse: Vec<FrameSample> = oracle.iter().step_by(stride).copied().collect();
    let cmp = compare_frames(&coarse, &closed)?;
    push("frame_vs_rk4", cmp.max_deviation.max(cmp.variation));
    push("frame_on_de_sitter", max_of(closed.iter().map(|x| (x.point.minkowski_norm_sqr() - 1.0).abs())));
    push("frame_momentum_constant", momentum_drift(&closed, &params));
    if matches!(cf.tag(), ClosedFormTag::CaseI | ClosedFormTag::CaseII) {
        push(
            "phi_derivative_fd",
            max_of(grid.iter().map(|&s| phi_derivative_residual(&cf, s)).collect::<Result<Vec<_>>>()?),
        );
    }
    Ok(checks)
}

fn nan_to_inf(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    // NaN must fail the check, so it is propagated as +∞
    it.into_iter().map(nan_to_inf).fold(0.0, f64::max)
}

/// Five-point first derivative.
pub fn five_point<T, F>(f: F, s: f64, h: f64) -> Result<T>
where
    F: Fn(f64) -> Result<T>,
    T: std::ops::Sub<Output = T> + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let (a, b, c, d) = (f(s - 2.0 * h)?, f(s - h)?, f(s + h)?, f(s + 2.0 * h)?);
    Ok((a - d + (c - b) * 8.0) * (1.0 / (12.0 * h)))
}

/// Five-point second derivative.
fn five_point_second(f: impl Fn(f64) -> Result<f64>, s: f64, h: f64) -> Result<f64> {
    let (a, b, c, d, e) = (f(s - 2.0 * h)?, f(s - h)?, f(s)?, f(s + h)?, f(s + 2.0 * h)?);
    Ok((-a + 16.0 * b - 30.0 * c + 16.0 * d - e) / (12.0 * h * h))
}

/// Points on an `n × n` grid over three period cells (a box along infinite
/// periods), skipping points within 0.05 of a pole.
pub fn lattice_grid(wf: &Weierstrass, n: usize) -> Vec<Complex64> {
    let hp = wf.half_periods();
    let a = Complex64::new(2.0 * hp.omega1.unwrap_or(1.5), 0.0);
    let b = hp.omega3.map_or(Complex64::new(0.0, 3.0), |w| 2.0 * w);
    let mut pts = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = -1.5 + 3.0 * (i as f64 + 0.37) / n as f64;
            let y = -1.5 + 3.0 * (j as f64 + 0.61) / n as f64;
            let z = x * a + y * b;
            if wf.pole_distance(z) > 0.05 {
                pts.push(z);
            }
        }
    }
    pts
}

/// `max |℘′² − P(℘)| / (1 + |℘|³)` over a lattice grid.
pub fn lattice_ode_residual(wf: &Weierstrass, n: usize) -> f64 {
    let inv = wf.invariants();
    max_of(lattice_grid(wf, n).into_iter().map(|z| match wf.wp(z) {
        Ok((p, dp)) => (dp * dp - inv.cubic(p)).norm() / (1.0 + p.norm().powi(3)),
        Err(_) => f64::INFINITY,
    }))
}

/// Relative residuals of `ζ′ = −℘` and `σ′/σ = ζ` by five-point differences,
/// at grid points at least 0.2 from a pole.
pub fn lattice_derivative_residuals(wf: &Weierstrass, n: usize) -> (f64, f64) {
    let h = FD_STEP;
    let d = |f: &dyn Fn(Complex64) -> Complex64, z: Complex64| {
        (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h)
    };
    let zeta = |z: Complex64| wf.zeta(z).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let sigma = |z: Complex64| wf.sigma(z);
    let (mut rz, mut rs) = (0.0_f64, 0.0_f64);
    for z in lattice_grid(wf, n).into_iter().filter(|&z| wf.pole_distance(z) >= 0.2) {
        let p = wf.wp(z).map_or(Complex64::new(f64::NAN, 0.0), |v| v.0);
        let ze = zeta(z);
        rz = rz.max(nan_to_inf((d(&zeta, z) + p).norm() / (1.0 + p.norm())));
        rs = rs.max(nan_to_inf((d(&sigma, z) / sigma(z) - ze).norm() / (1.0 + ze.norm())));
    }
    (rz, rs)
}

/// Finite-difference residuals of `h‴ = 12hh′` and of
/// `k‴ − 6εkk′ + 2εmk′ = 0`, both relative to the size of their terms.
fn el_residuals(p: &Potential, grid: &[f64], params: &ModelParams) -> Result<(f64, f64)> {
    // |h|^{-1/2} is the distance scale to the nearest pole
    const WIDTH: f64 = 1e-2;
    let eps = params.eps.sign();
    let (mut el, mut kel) = (0.0_f64, 0.0_f64);
    for &s in fd_interior(p, grid, 2.0 * WIDTH) {
        let j = p.eval(s)?;
        let h = WIDTH / (1.0 + j.h.abs().sqrt());
        let h3 = five_point_second(|t| Ok(p.eval(t)?.h1), s, h)?;
        let rhs = 12.0 * j.h * j.h1;
        el = el.max((h3 - rhs).abs() / (1.0 + rhs.abs() + j.h2.abs()));
        let [k, k1, k2] = k_jet(&j, params);
        let k3 = 2.0 * eps * h3;
        let terms = 6.0 * (k * k1).abs() + 2.0 * (params.m * k1).abs() + k2.abs();
        kel = kel.max((k3 - 6.0 * eps * k * k1 + 2.0 * eps * params.m * k1).abs() / (1.0 + terms + k3.abs()));
    }
    Ok((nan_to_inf(el), nan_to_inf(kel)))
}

/// Grid points whose stencil of half-width `reach` stays in the domain.
fn fd_interior<'a>(p: &'a Potential, grid: &'a [f64], reach: f64) -> impl Iterator<Item = &'a f64> + 'a {
    let guard = p.weierstrass().pole_guard() + reach;
    grid.iter().filter(move |&&s| p.domain().contains_with_guard(s, guard))
}

/// `max_s ‖Φ(s) − Φ(s₀)‖` with `Φ = ΓUΓ⁻¹`.
pub fn momentum_drift(track: &[FrameSample], params: &ModelParams) -> f64 {
    let phi = |x: &FrameSample| momentum_map_unchecked(&x.gamma_frame, &momentum_u(&x.jet, params));
    let Some(first) = track.first() else { return 0.0 };
    let phi0 = phi(first);
    max_of(track.iter().map(|x| (phi(x) - phi0).norm()))
}

/// `max |⟨γ′, γ′⟩| / |γ′|²` by five-point differences of the sampled
/// points on a uniform track; `|γ′|²` is the Euclidean coordinate norm.
pub fn null_residual(track: &[FrameSample]) -> f64 {
    if track.len() < 5 {
        return f64::INFINITY;
    }
    let dt = track[1].s - track[0].s;
    let mut worst = 0.0_f64;
    for w in track.windows(5) {
        let x = |i: usize| w[i].point.to_array();
        let mut v = [0.0; 4];
        for (c, vc) in v.iter_mut().enumerate() {
            *vc = (x(0)[c] - x(4)[c] + 8.0 * (x(3)[c] - x(1)[c])) / (12.0 * dt);
        }
        let lorentz = -v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
        let euclid: f64 = v.iter().map(|c| c * c).sum();
        worst = worst.max(nan_to_inf(lorentz.abs() / euclid.max(1.0)));
    }
    worst
}

/// `‖M⁻¹M′ − H(h)‖` with a five-point derivative of step [`FD_STEP`].
pub fn maurer_cartan_residual(cf: &ClosedForm, s: f64, params: &ModelParams) -> Result<f64> {
    let m = cf.frame(s)?;
    let dm = five_point(|t| cf.frame(t), s, FD_STEP)?;
    let h = hamiltonian_h(cf.potential().eval(s)?.h, params);
    Ok(nan_to_inf((m.inverse() * dm - h).norm()))
}

/// `|φ′ − integrand| / (1 + |integrand|)` with a five-point derivative.
pub fn phi_derivative_residual(cf: &ClosedForm, s: f64) -> Result<f64> {
    let d = five_point(|t| cf.phi(t), s, FD_STEP)?;
    let want = cf.phi_integrand(s)?;
    Ok(nan_to_inf((d - want).norm() / (1.0 + want.norm())))
}

/// `⟨γ, γ⟩` for a curve point; 1 on de Sitter space.
pub fn de_sitter_residual(point: &ComplexMat2) -> f64 {
    (lorentz_form(point, point) - 1.0).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Spin;
    use crate::potential::Branch;
    use crate::weierstrass::Invariants;

    fn suite(p: &Potential, params: ModelParams, s0: f64, s1: f64, corrupt: bool) -> Vec<Check> {
        let cfg = SuiteConfig { params, s0, s1, samples: 41, step: 1e-3, tol: 1e-6, corrupt_spin: corrupt };
        run_suite(p, &cfg).unwrap()
    }

    #[test]
    fn rational_suite_passes() {
        let p = Potential::new(Invariants::new(0.0, 0.0), Branch::Auto).unwrap();
        let checks = suite(&p, ModelParams::new(0.0, Spin::Positive), 0.5, 3.0, false);
        for c in &checks {
            assert!(c.passed(), "{c}");
        }
        assert!(checks.iter().any(|c| c.name == "phi_derivative_fd"));
    }

    #[test]
    fn corrupted_spin_is_caught() {
        let p = Potential::new(Invariants::new(0.0, 0.0), Branch::Auto).unwrap();
        let checks = suite(&p, ModelParams::new(0.0, Spin::Positive), 0.5, 3.0, true);
        let mc = checks.iter().find(|c| c.name == "frame_maurer_cartan").unwrap();
        assert!(!mc.passed(), "{mc}");
    }

    #[test]
    fn check_display() {
        let c = Check { name: "x", residual: 2e-7, tol: 1e-6 };
        assert!(c.to_string().starts_with("PASS x"));
        assert!(!Check { name: "y", residual: f64::INFINITY, tol: 1.0 }.passed());
    }

    #[test]
    fn de_sitter_residual_of_projection() {
        let m = crate::closed_form::helix_frame(1.0, 0.4, &ModelParams::new(0.0, Spin::Positive));
        assert!(de_sitter_residual(&crate::linalg::project_unchecked(&m)) < 1e-13);
    }
}
