//! Reduced-curvature potentials: real solutions of (h′)² = 4h³ − g₂h − g₃.
//!
//! Up to translation in `s`, every potential is one of a short list of real
//! slices of ℘ or of its degenerate forms. Representatives are fixed with the
//! pole at `s = 0` for the unbounded ℘ branches and the minimum at `s = 0`
//! for the bounded ones.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::dynamics::ModelParams;
use crate::error::{Error, Result};
use crate::weierstrass::{DiscriminantClass, HalfPeriods, Invariants, Weierstrass};

/// Tolerance on the imaginary part of ℘ along a real slice.
pub const REALITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// Δ < 0, h = ℘ on (0, 2ω₁).
    WpNegDisc,
    /// Δ < 0, h = ℘(· + ω₃) on ℝ.
    Wp3NegDisc,
    /// Δ > 0, h = ℘ on (0, 2ω₁).
    WpPosDisc,
    /// Δ = 0, g₃ > 0, h = −3a tan²(√(−3a) s) − 2a.
    TanDegen,
    /// Δ = 0, g₃ < 0, h = 3a tanh²(√(3a) s) − 2a.
    TanhDegen,
    /// g₂ = g₃ = 0, h = s⁻² on (0, ∞).
    Rational,
    /// The equilibrium h ≡ a at a double root of the cubic (null helices).
    Constant,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::WpNegDisc => "WP_NEG_DISC",
            CaseTag::Wp3NegDisc => "WP3_NEG_DISC",
            CaseTag::WpPosDisc => "WP_POS_DISC",
            CaseTag::TanDegen => "TAN_DEGEN",
            CaseTag::TanhDegen => "TANH_DEGEN",
            CaseTag::Rational => "RATIONAL",
            CaseTag::Constant => "CONSTANT",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which real branch to take when Δ < 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Branch {
    /// ℘₃ for Δ < 0, the only listed branch otherwise.
    #[default]
    Auto,
    Wp,
    Wp3,
}

/// An open real interval; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, s: f64) -> bool {
        self.lo < s && s < self.hi
    }

    /// Whether `s` is inside and at least `guard` away from finite ends.
    pub fn contains_with_guard(&self, s: f64, guard: f64) -> bool {
        self.lo + guard < s && s < self.hi - guard
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = |x: f64| {
            if x == f64::INFINITY {
                "+∞".to_string()
            } else if x == f64::NEG_INFINITY {
                "−∞".to_string()
            } else {
                x.to_string()
            }
        };
        write!(f, "({}, {})", end(self.lo), end(self.hi))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialCase {
    pub tag: CaseTag,
    /// Present for the degenerate tags, from g₃ = −8a³.
    pub a: Option<f64>,
    pub domain: Interval,
}

/// Value and first two `s`-derivatives of a potential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet3 {
    pub h: f64,
    pub h1: f64,
    pub h2: f64,
}

impl Jet3 {
    pub const fn new(h: f64, h1: f64, h2: f64) -> Self {
        Self { h, h1, h2 }
    }

    /// h‴ along a solution of the reduced Euler–Lagrange equation.
    pub fn h3(&self) -> f64 {
        12.0 * self.h * self.h1
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.h, self.h1, self.h2]
    }
}

/// The potential case for the given invariants.
pub fn classify(inv: &Invariants, branch: Branch) -> Result<PotentialCase> {
    let class = inv.class();
    if branch == Branch::Wp3 && class != DiscriminantClass::Negative {
        return Err(Error::BranchUnavailable { requested: "WP3", discriminant: inv.discriminant() });
    }
    let case = match class {
        DiscriminantClass::Negative | DiscriminantClass::Positive => {
            let w1 = crate::weierstrass::half_periods(inv).omega1.expect("finite lattice");
            let tag = match (class, branch) {
                (DiscriminantClass::Negative, Branch::Wp) => CaseTag::WpNegDisc,
                (DiscriminantClass::Negative, _) => CaseTag::Wp3NegDisc,
                _ => CaseTag::WpPosDisc,
            };
            let domain = if tag == CaseTag::Wp3NegDisc { Interval::REAL_LINE } else { Interval::new(0.0, 2.0 * w1) };
            PotentialCase { tag, a: None, domain }
        }
        DiscriminantClass::DegenerateTrig => {
            let a = inv.degenerate_parameter();
            let half = PI / (-12.0 * a).sqrt();
            PotentialCase { tag: CaseTag::TanDegen, a: Some(a), domain: Interval::new(-half, half) }
        }
        DiscriminantClass::DegenerateHyp => {
            PotentialCase { tag: CaseTag::TanhDegen, a: Some(inv.degenerate_parameter()), domain: Interval::REAL_LINE }
        }
        DiscriminantClass::Zero => {
            PotentialCase { tag: CaseTag::Rational, a: None, domain: Interval::new(0.0, f64::INFINITY) }
        }
    };
    Ok(case)
}

/// A classified potential with its Weierstrass evaluator.
#[derive(Clone, Debug)]
pub struct Potential {
    inv: Invariants,
    case: PotentialCase,
    wf: Weierstrass,
    /// h(s) = ℘(s + shift) for the lattice cases.
    shift: Complex64,
}

impl Potential {
    pub fn new(inv: Invariants, branch: Branch) -> Result<Self> {
        let case = classify(&inv, branch)?;
        let wf = Weierstrass::new(inv);
        let hp = wf.half_periods();
        let shift = match case.tag {
            CaseTag::Wp3NegDisc | CaseTag::TanhDegen => hp.omega3.expect("finite ω₃"),
            CaseTag::TanDegen => Complex64::new(hp.omega1.expect("finite ω₁"), 0.0),
            _ => Complex64::new(0.0, 0.0),
        };
        Ok(Self { inv, case, wf, shift })
    }

    /// The constant solution h ≡ h0; its invariants make h0 a double root.
    pub fn constant(h0: f64) -> Self {
        let inv = Invariants::new(12.0 * h0 * h0, -8.0 * h0 * h0 * h0);
        let case = PotentialCase { tag: CaseTag::Constant, a: Some(h0), domain: Interval::REAL_LINE };
        Self { inv, case, wf: Weierstrass::new(inv), shift: Complex64::new(0.0, 0.0) }
    }

    pub fn invariants(&self) -> Invariants {
        self.inv
    }

    pub fn case(&self) -> PotentialCase {
        self.case
    }

    pub fn tag(&self) -> CaseTag {
        self.case.tag
    }

    pub fn domain(&self) -> Interval {
        self.case.domain
    }

    pub fn periods(&self) -> HalfPeriods {
        self.wf.half_periods()
    }

    pub fn weierstrass(&self) -> &Weierstrass {
        &self.wf
    }

    /// Offset `c` with h(s) = ℘(s + c) (zero for the rational and constant cases).
    pub fn shift(&self) -> Complex64 {
        self.shift
    }

    pub fn is_constant(&self) -> bool {
        self.case.tag == CaseTag::Constant
    }

    fn check(&self, s: f64) -> Result<()> {
        if !self.case.domain.contains_with_guard(s, self.wf.pole_guard()) {
            return Err(Error::OutOfDomain { s, domain: self.case.domain.to_string() });
        }
        Ok(())
    }

    /// `(h, h′, h″)` at `s`, with `h″ = 6h² − g₂/2`.
    pub fn eval(&self, s: f64) -> Result<Jet3> {
        self.check(s)?;
        let g2 = self.inv.g2;
        let (h, h1) = match self.case.tag {
            CaseTag::Constant => (self.case.a.unwrap_or(0.0), 0.0),
            CaseTag::Rational => (1.0 / (s * s), -2.0 / (s * s * s)),
            CaseTag::TanhDegen => {
                let a = self.case.a.expect("degenerate parameter");
                let c = (3.0 * a).sqrt();
                let t = (c * s).tanh();
                (3.0 * a * t * t - 2.0 * a, 6.0 * a * c * t * (1.0 - t * t))
            }
            CaseTag::TanDegen => {
                let a = self.case.a.expect("degenerate parameter");
                let b = (-3.0 * a).sqrt();
                let t = (b * s).tan();
                (-3.0 * a * t * t - 2.0 * a, -6.0 * a * b * t * (1.0 + t * t))
            }
            CaseTag::WpNegDisc | CaseTag::Wp3NegDisc | CaseTag::WpPosDisc => {
                let (p, dp) = self.wf.wp(Complex64::new(s, 0.0) + self.shift)?;
                (p.re, dp.re)
            }
        };
        Ok(Jet3::new(h, h1, 6.0 * h * h - g2 / 2.0))
    }

    /// `(h, h′)` through the complex Weierstrass evaluator, imaginary parts
    /// included. Used to audit the real-valuedness of the slice.
    pub fn eval_complex(&self, s: f64) -> Result<(Complex64, Complex64)> {
        self.check(s)?;
        if self.is_constant() {
            return Ok((Complex64::new(self.case.a.unwrap_or(0.0), 0.0), Complex64::new(0.0, 0.0)));
        }
        self.wf.wp(Complex64::new(s, 0.0) + self.shift)
    }

    /// A bounded piece of the domain kept `margin` away from finite ends.
    /// The real line is cut to `[-span, span]` and a half line to length `span`.
    pub fn sample_window(&self, margin: f64, span: f64) -> (f64, f64) {
        let d = self.case.domain;
        match (d.lo.is_finite(), d.hi.is_finite()) {
            (true, true) => (d.lo + margin, d.hi - margin),
            (true, false) => (d.lo + margin, d.lo + margin + span),
            (false, true) => (d.hi - margin - span, d.hi - margin),
            (false, false) => (-span, span),
        }
    }
}

/// Invariants recovered from a jet: g₂ = 12h² − 2h″, g₃ = 4h³ − g₂h − (h′)².
pub fn invariants_from_jet(j: &Jet3) -> Invariants {
    let g2 = 12.0 * j.h * j.h - 2.0 * j.h2;
    let g3 = 4.0 * j.h * j.h * j.h - g2 * j.h - j.h1 * j.h1;
    Invariants::new(g2, g3)
}

/// Curvature from reduced curvature: k = 2εh + m/3.
pub fn k_from_h(h: f64, params: &ModelParams) -> f64 {
    2.0 * params.eps.sign() * h + params.m / 3.0
}

/// Reduced curvature: h = (ε/2)(k − m/3).
pub fn h_from_k(k: f64, params: &ModelParams) -> f64 {
    params.eps.sign() / 2.0 * (k - params.m / 3.0)
}

/// The curvature jet `(k, k′, k″)` of a reduced-curvature jet.
pub fn k_jet(j: &Jet3, params: &ModelParams) -> [f64; 3] {
    let e = params.eps.sign();
    [k_from_h(j.h, params), 2.0 * e * j.h1, 2.0 * e * j.h2]
}
