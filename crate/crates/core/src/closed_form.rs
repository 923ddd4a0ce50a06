//! Closed-form canonical frames of extremal null curves.
//!
//! With `e = ε(m/3 + i)` and `ν = √P(e)`, a potential `h` integrates to a
//! frame built from `h`, `h′`, `q = √(h − e)` and a third-kind elliptic
//! integral `φ`:
//!
//! * Case I (`P(e) ≠ 0`): `φ′ = ν/(h − e)`, `φ = log σ(z−w)/σ(z+w) + 2sζ(w)`
//!   with `℘(w) = e`, `℘′(w) = ν` and `z = s + shift`.
//! * Case II (`P(e) = 0`): `φ′ = 1/(h − e)`, `φ = (ζ(z+w) + es)/(g₂/4 − 3e²)`
//!   with `w` the half-period at which `℘(w) = e`.
//! * Constant potentials give null helices, `Γ(s) = exp(sH(k₀))`.
//!
//! `q` never needs branch tracking: `Im(h − e) = −ε` keeps it off the cut
//! of the principal square root. The logarithms in Case I are continued
//! along `s` from an anchor where the principal value is used.

use std::fmt;

use num_complex::Complex64;

use crate::dynamics::{momentum_u, ModelParams};
use crate::error::{Error, Result};
use crate::linalg::{coords_unchecked, project_unchecked, ComplexMat2, MinkowskiVec};
use crate::potential::{k_from_h, CaseTag, Jet3, Potential};
use crate::weierstrass::{HalfPeriods, Invariants, Weierstrass};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative threshold on `|P(e)|` below which the nilpotent case is used.
pub const CASE_II_TOL: f64 = 1e-9;

/// Newton iterations allowed when inverting `℘(w) = e`.
const NEWTON_MAX_ITER: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosedFormTag {
    /// `det U ≠ 0`.
    CaseI,
    /// `det U = 0` with `(g₂, g₃) ≠ (0, 0)`.
    CaseII,
    /// `ν = 0` with `g₂ = g₃ = 0`; unreachable for real `m`, built only on request.
    CaseIIIFormal,
    /// Constant curvature.
    Helix,
}

impl ClosedFormTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClosedFormTag::CaseI => "CASE_I",
            ClosedFormTag::CaseII => "CASE_II",
            ClosedFormTag::CaseIIIFormal => "CASE_III_FORMAL",
            ClosedFormTag::Helix => "HELIX",
        }
    }
}

impl fmt::Display for ClosedFormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormCase {
    pub tag: ClosedFormTag,
    pub nu: Complex64,
    /// Inversion point of `℘(w) = e` (Cases I and II).
    pub w: Option<Complex64>,
    /// The root of the cubic equal to `e` (Case II).
    pub e3: Option<Complex64>,
}

/// Principal square root of `P(ε(m/3 + i))`. The eigenvalues of `U` are `±iν`.
pub fn nu(inv: &Invariants, params: &ModelParams) -> Complex64 {
    inv.cubic(params.spectral_point()).sqrt()
}

/// Whether `P(e)` is small enough for the nilpotent case.
pub fn is_nilpotent(inv: &Invariants, params: &ModelParams) -> bool {
    inv.cubic(params.spectral_point()).norm() <= CASE_II_TOL * (1.0 + params.m.abs().powi(3))
}

/// The point `w` of the period cell with `℘(w) = e` and `℘′(w) = ν`.
pub fn find_w(p: &Potential, params: &ModelParams) -> Result<Complex64> {
    let inv = p.invariants();
    let e = params.spectral_point();
    if is_nilpotent(&inv, params) {
        return nilpotent_half_period(p.weierstrass(), e);
    }
    let nu = nu(&inv, params);
    let wf = p.weierstrass();
    let roots = crate::weierstrass::cubic_roots(&inv);
    // ℘⁻¹(e) = R_F(e − e₁, e − e₂, e − e₃) on the principal sheet; Newton
    // removes the roundoff and a small grid of starts covers sheets where
    // the integral lands elsewhere.
    let first = crate::carlson::rf(e - roots[0], e - roots[1], e - roots[2]);
    let mut best: Option<(f64, Complex64)> = None;
    for start in std::iter::once(first).chain(fallback_starts(&wf.half_periods())) {
        let Some(w) = newton_inverse(wf, e, start) else { continue };
        let (_, dp) = wf.wp(w)?;
        let w = if (dp - nu).norm() <= (dp + nu).norm() { w } else { -w };
        let w = reduce_to_cell(w, &wf.half_periods());
        let (pw, dpw) = wf.wp(w)?;
        let residual = (pw - e).norm() + (dpw - nu).norm();
        if (pw - e).norm() <= 1e-9 * (1.0 + e.norm()) && (dpw - nu).norm() <= 1e-8 * (1.0 + nu.norm()) {
            return Ok(w);
        }
        if best.is_none_or(|(r, _)| residual < r) {
            best = Some((residual, w));
        }
    }
    Err(Error::InversionFailure {
        target: format!("℘(w) = {e}, ℘′(w) = {nu}"),
        residual: best.map_or(f64::INFINITY, |(r, _)| r),
        iterations: NEWTON_MAX_ITER,
    })
}

fn newton_inverse(wf: &Weierstrass, e: Complex64, start: Complex64) -> Option<Complex64> {
    let mut w = start;
    for _ in 0..NEWTON_MAX_ITER {
        let (p, dp) = wf.wp(w).ok()?;
        let f = p - e;
        if !f.is_finite() || dp.norm() == 0.0 {
            return None;
        }
        let step = f / dp;
        w -= step;
        if step.norm() <= 1e-15 * (1.0 + w.norm()) {
            break;
        }
    }
    let (p, _) = wf.wp(w).ok()?;
    ((p - e).norm() <= 1e-10 * (1.0 + e.norm())).then_some(w)
}

fn fallback_starts(hp: &HalfPeriods) -> Vec<Complex64> {
    let a = Complex64::new(hp.omega1.unwrap_or(1.5), 0.0);
    let b = hp.omega3.unwrap_or(Complex64::new(0.0, 1.5));
    let mut out = Vec::new();
    for i in 0..6 {
        for j in 0..6 {
            let x = -1.0 + (2 * i + 1) as f64 / 6.0;
            let y = -1.0 + (2 * j + 1) as f64 / 6.0;
            out.push(x * a + y * b);
        }
    }
    out
}

/// Translate `w` by periods into the cell `{x·2ω₁ + y·2ω₃ : |x|, |y| ≤ ½}`.
fn reduce_to_cell(w: Complex64, hp: &HalfPeriods) -> Complex64 {
    match (hp.omega1, hp.omega3) {
        (Some(o1), Some(o3)) => {
            let (a, b) = (Complex64::new(2.0 * o1, 0.0), 2.0 * o3);
            // solve w = x·a + y·b over the reals
            let det = a.re * b.im - a.im * b.re;
            let x = (w.re * b.im - w.im * b.re) / det;
            let y = (a.re * w.im - a.im * w.re) / det;
            w - x.round() * a - y.round() * b
        }
        (Some(o1), None) => w - (w.re / (2.0 * o1)).round() * 2.0 * o1,
        (None, Some(o3)) => {
            let b = 2.0 * o3;
            w - (w / b).re.round() * b
        }
        (None, None) => w,
    }
}

fn nilpotent_half_period(wf: &Weierstrass, e: Complex64) -> Result<Complex64> {
    let hp = wf.half_periods();
    let (Some(o1), Some(o3)) = (hp.omega1, hp.omega3) else {
        return Err(Error::CaseMismatch {
            requested: "CASE_II",
            reason: "the lattice is degenerate, so no half-period can carry a complex root".into(),
        });
    };
    let o1 = Complex64::new(o1, 0.0);
    let mut best = (f64::INFINITY, o1);
    for w in [o1, o3, o1 + o3] {
        let (p, _) = wf.wp(w)?;
        let d = (p - e).norm();
        if d < best.0 {
            best = (d, w);
        }
    }
    if best.0 > 1e-8 * (1.0 + e.norm()) {
        return Err(Error::InversionFailure {
            target: format!("half-period with ℘ = {e}"),
            residual: best.0,
            iterations: 3,
        });
    }
    Ok(best.1)
}

/// Frame of the null helix with constant curvature `k₀`: `exp(sH(k₀))`,
/// summed through `H² = ε(k₀ + i)·I`.
pub fn helix_frame(k0: f64, s: f64, params: &ModelParams) -> ComplexMat2 {
    let h = crate::dynamics::hamiltonian_k(k0, params);
    let lambda = (params.eps.sign() * Complex64::new(k0, 1.0)).sqrt();
    let x = s * lambda;
    ComplexMat2::IDENTITY.scale(x.cosh()) + h.scale(x.sinh() / lambda)
}

/// Closed-form extremal attached to one potential and one `(m, ε)`.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    potential: Potential,
    params: ModelParams,
    case: ClosedFormCase,
    /// Where the continued logarithm agrees with its principal value.
    anchor: f64,
}

impl ClosedForm {
    /// Selects Case I, Case II or the helix and precomputes `ν` and `w`.
    pub fn new(potential: &Potential, params: &ModelParams) -> Result<Self> {
        let inv = potential.invariants();
        let nu = nu(&inv, params);
        let case = if potential.is_constant() {
            ClosedFormCase { tag: ClosedFormTag::Helix, nu, w: None, e3: None }
        } else if is_nilpotent(&inv, params) {
            if inv.is_zero() {
                return Err(Error::CaseMismatch {
                    requested: "CASE_III_FORMAL",
                    reason: "only constructible through ClosedForm::formal_case_iii".into(),
                });
            }
            let w = find_w(potential, params)?;
            ClosedFormCase { tag: ClosedFormTag::CaseII, nu, w: Some(w), e3: Some(params.spectral_point()) }
        } else {
            let w = find_w(potential, params)?;
            ClosedFormCase { tag: ClosedFormTag::CaseI, nu, w: Some(w), e3: None }
        };
        Ok(Self { potential: potential.clone(), params: *params, case, anchor: anchor_point(potential) })
    }

    /// The formal third case, `φ = s³/3` on the rational potential. It has no
    /// certified frame: `ν = 0` never happens for real `m`.
    pub fn formal_case_iii(potential: &Potential, params: &ModelParams) -> Result<Self> {
        if potential.tag() != CaseTag::Rational {
            return Err(Error::CaseMismatch {
                requested: "CASE_III_FORMAL",
                reason: format!("needs the rational potential, got {}", potential.tag()),
            });
        }
        let case = ClosedFormCase {
            tag: ClosedFormTag::CaseIIIFormal,
            nu: nu(&potential.invariants(), params),
            w: None,
            e3: None,
        };
        Ok(Self { potential: potential.clone(), params: *params, case, anchor: anchor_point(potential) })
    }

    pub fn case(&self) -> ClosedFormCase {
        self.case
    }

    pub fn tag(&self) -> ClosedFormTag {
        self.case.tag
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    fn e(&self) -> Complex64 {
        self.params.spectral_point()
    }

    fn z(&self, s: f64) -> Complex64 {
        Complex64::new(s, 0.0) + self.potential.shift()
    }

    /// The integrand of `φ`: `ν/(h − e)` in Case I, `1/(h − e)` otherwise.
    pub fn phi_integrand(&self, s: f64) -> Result<Complex64> {
        let h = self.potential.eval(s)?.h;
        let num = match self.case.tag {
            ClosedFormTag::CaseI => self.case.nu,
            _ => Complex64::new(1.0, 0.0),
        };
        Ok(num / (h - self.e()))
    }

    /// The third-kind integral `φ(s)`. The helix has none and returns 0.
    pub fn phi(&self, s: f64) -> Result<Complex64> {
        match self.case.tag {
            ClosedFormTag::CaseI => self.phi_case1(s),
            ClosedFormTag::CaseII => {
                self.potential.eval(s)?;
                let inv = self.potential.invariants();
                let e = self.e();
                let w = self.case.w.expect("Case II has w");
                let zeta = self.potential.weierstrass().zeta(self.z(s) + w)?;
                Ok((zeta + e * s) / (inv.g2 / 4.0 - 3.0 * e * e))
            }
            ClosedFormTag::CaseIIIFormal => Ok(Complex64::new(s * s * s / 3.0, 0.0)),
            ClosedFormTag::Helix => Ok(Complex64::new(0.0, 0.0)),
        }
    }

    /// `log σ(z−w) − log σ(z+w)` on principal logarithms, plus `2sζ(w)`.
    fn phi_case1_principal(&self, s: f64) -> Result<(Complex64, Complex64)> {
        let wf = self.potential.weierstrass();
        let w = self.case.w.expect("Case I has w");
        let z = self.z(s);
        let logs = wf.log_sigma(z - w)? - wf.log_sigma(z + w)?;
        Ok((logs, 2.0 * s * wf.zeta(w)?))
    }

    fn phi_case1(&self, s: f64) -> Result<Complex64> {
        self.potential.eval(s)?;
        let (logs, linear) = self.phi_case1_principal(self.anchor)?;
        let mut cont = Complex64::new(logs.re, wrap_angle(logs.im)) + linear;
        // |φ′| ≤ |ν|/|Im(h − e)| = |ν|, so this step keeps every increment
        // below one radian and the nearest 2πi-translate is the continuation.
        let max_step = 1.0 / (1.0 + self.case.nu.norm());
        let n = ((s - self.anchor).abs() / max_step).ceil() as usize;
        for i in 1..=n {
            let t = self.anchor + (s - self.anchor) * i as f64 / n as f64;
            let (logs, linear) = self.phi_case1_principal(t)?;
            let raw = logs + linear;
            let turns = ((cont.im - raw.im) / std::f64::consts::TAU).round();
            cont = raw + Complex64::new(0.0, turns * std::f64::consts::TAU);
        }
        Ok(cont)
    }

    /// The canonical frame `M(s)`, with `M⁻¹M′ = H(h(s))` and `det M = 1`.
    pub fn frame(&self, s: f64) -> Result<ComplexMat2> {
        let j = self.potential.eval(s)?;
        let eps = self.params.eps.sign();
        match self.case.tag {
            ClosedFormTag::Helix => Ok(helix_frame(k_from_h(j.h, &self.params), s, &self.params)),
            ClosedFormTag::CaseI => {
                let q = (j.h - self.e()).sqrt();
                let nu = self.case.nu;
                let half = self.phi(s)? / 2.0;
                let n =
                    ComplexMat2::new(I * (j.h1 + nu) / q, 2.0 * I * eps * q, I * (nu - j.h1) / q, -2.0 * I * eps * q);
                let d = ComplexMat2::diag(half.exp(), (-half).exp());
                Ok((d * n).scale((4.0 * eps * nu).sqrt().inv()))
            }
            ClosedFormTag::CaseII => {
                let q = (j.h - self.e()).sqrt();
                let phi = self.phi(s)?;
                let zero = Complex64::new(0.0, 0.0);
                let one = Complex64::new(1.0, 0.0);
                let left = ComplexMat2::new(q.inv(), -phi / (2.0 * I), zero, one);
                let right = ComplexMat2::new(one, zero, -I * j.h1 / q, -2.0 * I * eps * q);
                Ok((left * right).scale((-2.0 * I * eps).sqrt().inv()))
            }
            ClosedFormTag::CaseIIIFormal => Err(Error::CaseMismatch {
                requested: "CASE_III_FORMAL",
                reason: "the formal case carries φ only, no certified frame".into(),
            }),
        }
    }

    /// The curve point `γ(s) = M J M*` on de Sitter space.
    pub fn point(&self, s: f64) -> Result<ComplexMat2> {
        Ok(project_unchecked(&self.frame(s)?))
    }

    /// One sample with the frame, the point, the jet and the curvature.
    pub fn sample(&self, s: f64) -> Result<FrameSample> {
        let gamma_frame = self.frame(s)?;
        let jet = self.potential.eval(s)?;
        Ok(FrameSample::new(s, gamma_frame, jet, &self.params))
    }

    /// Momentum map `M U M⁻¹` at `s`; constant along the extremal.
    pub fn momentum(&self, s: f64) -> Result<ComplexMat2> {
        let m = self.frame(s)?;
        let u = momentum_u(&self.potential.eval(s)?, &self.params);
        Ok(crate::dynamics::momentum_map_unchecked(&m, &u))
    }
}

fn wrap_angle(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let r = x - tau * (x / tau).round();
    if r <= -std::f64::consts::PI {
        r + tau
    } else {
        r
    }
}

/// A point of the domain where `φ`'s logarithm takes its principal value.
fn anchor_point(p: &Potential) -> f64 {
    let d = p.domain();
    match (d.lo.is_finite(), d.hi.is_finite()) {
        (true, true) => (d.lo + d.hi) / 2.0,
        (true, false) => d.lo + 1.0,
        (false, true) => d.hi - 1.0,
        (false, false) => 0.0,
    }
}

/// `(s, Γ(s), γ(s), jet, k)` from either the closed form or the oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameSample {
    pub s: f64,
    pub gamma_frame: ComplexMat2,
    pub point: MinkowskiVec,
    pub jet: Jet3,
    pub k: f64,
}

impl FrameSample {
    pub fn new(s: f64, gamma_frame: ComplexMat2, jet: Jet3, params: &ModelParams) -> Self {
        let point = coords_unchecked(&project_unchecked(&gamma_frame));
        Self { s, gamma_frame, point, jet, k: k_from_h(jet.h, params) }
    }

    /// `|det Γ − 1|`.
    pub fn det_drift(&self) -> f64 {
        (self.gamma_frame.det() - 1.0).norm()
    }
}

/// `φ(s)` for the case the dispatcher selects.
pub fn phi(p: &Potential, s: f64, params: &ModelParams) -> Result<Complex64> {
    ClosedForm::new(p, params)?.phi(s)
}

/// The Case I frame; errors when `det U = 0`.
pub fn frame_case1(p: &Potential, s: f64, params: &ModelParams) -> Result<ComplexMat2> {
    frame_of_tag(p, s, params, ClosedFormTag::CaseI)
}

/// The Case II frame; errors when `det U ≠ 0`.
pub fn frame_case2(p: &Potential, s: f64, params: &ModelParams) -> Result<ComplexMat2> {
    frame_of_tag(p, s, params, ClosedFormTag::CaseII)
}

fn frame_of_tag(p: &Potential, s: f64, params: &ModelParams, tag: ClosedFormTag) -> Result<ComplexMat2> {
    let cf = ClosedForm::new(p, params)?;
    if cf.tag() != tag {
        return Err(Error::CaseMismatch {
            requested: tag.as_str(),
            reason: format!("the configuration selects {}", cf.tag()),
        });
    }
    cf.frame(s)
}

/// Selects the case and returns it with the frame at `s`.
pub fn extremal_frame(p: &Potential, s: f64, params: &ModelParams) -> Result<(ClosedFormCase, ComplexMat2)> {
    let cf = ClosedForm::new(p, params)?;
    Ok((cf.case(), cf.frame(s)?))
}
