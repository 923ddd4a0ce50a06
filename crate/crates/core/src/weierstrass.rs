//! Weierstrass ℘, ℘′, ζ and σ for real invariants.
//!
//! Finite lattices are handled by reducing the argument to the Voronoi cell
//! of a Gauss-reduced period basis, evaluating the Laurent expansions at
//! `z / 2ⁿ` and climbing back with the duplication formulas. The quasi-period
//! shifts of ζ and σ are applied afterwards. The degenerate lattices
//! (vanishing discriminant) use their closed trigonometric, hyperbolic or
//! rational forms.
//!
//! The discriminant follows the sign convention Δ = 27g₃² − g₂³, which is the
//! negative of the more common g₂³ − 27g₃². With this convention Δ < 0 means
//! three real roots and a rectangular period lattice.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::carlson::rf;
use crate::error::{Error, Result};

/// Default radius around lattice points inside which ℘ and ζ refuse to
/// evaluate.
pub const DEFAULT_POLE_GUARD: f64 = 1e-8;

/// Relative threshold under which the discriminant counts as zero.
pub const DISCRIMINANT_TOL: f64 = 1e-12;

const LAURENT_TERMS: usize = 64;
const SERIES_FRACTION: f64 = 0.5;
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real analytic invariants of the cubic `P(t) = 4t³ − g₂t − g₃`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Invariants {
    pub g2: f64,
    pub g3: f64,
}

impl Invariants {
    pub const fn new(g2: f64, g3: f64) -> Self {
        Self { g2, g3 }
    }

    /// Δ = 27g₃² − g₂³.
    pub fn discriminant(&self) -> f64 {
        27.0 * self.g3 * self.g3 - self.g2 * self.g2 * self.g2
    }

    /// P(t) = 4t³ − g₂t − g₃.
    pub fn cubic(&self, t: Complex64) -> Complex64 {
        4.0 * t * t * t - self.g2 * t - self.g3
    }

    pub fn cubic_derivative(&self, t: Complex64) -> Complex64 {
        12.0 * t * t - self.g2
    }

    pub fn is_zero(&self) -> bool {
        self.g2 == 0.0 && self.g3 == 0.0
    }

    pub fn class(&self) -> DiscriminantClass {
        if self.is_zero() {
            return DiscriminantClass::Zero;
        }
        let d = self.discriminant();
        let scale = self.g2.abs().powi(3) + 27.0 * self.g3 * self.g3;
        if d.abs() <= DISCRIMINANT_TOL * scale {
            if self.g3 > 0.0 {
                DiscriminantClass::DegenerateTrig
            } else {
                DiscriminantClass::DegenerateHyp
            }
        } else if d < 0.0 {
            DiscriminantClass::Negative
        } else {
            DiscriminantClass::Positive
        }
    }

    /// The parameter `a` with `g₃ = −8a³` for a degenerate cubic; the double
    /// root of `P` is `a` and the simple root is `−2a`.
    pub fn degenerate_parameter(&self) -> f64 {
        (-self.g3 / 8.0).cbrt()
    }

    /// Invariants of the lattice scaled by `t`: `(t⁻⁴g₂, t⁻⁶g₃)`.
    pub fn scaled(&self, t: f64) -> Self {
        Self::new(self.g2 / t.powi(4), self.g3 / t.powi(6))
    }
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g2 = {}, g3 = {})", self.g2, self.g3)
    }
}

/// The five real configurations of the period lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscriminantClass {
    /// Δ < 0: three real roots, rectangular lattice.
    Negative,
    /// Δ > 0: one real root, rhombic lattice.
    Positive,
    /// Δ = 0, g₃ > 0: real period finite, imaginary period infinite.
    DegenerateTrig,
    /// Δ = 0, g₃ < 0: real period infinite, imaginary period finite.
    DegenerateHyp,
    /// g₂ = g₃ = 0.
    Zero,
}

pub fn discriminant(inv: &Invariants) -> f64 {
    inv.discriminant()
}

/// Roots of `4t³ − g₂t − g₃`: real roots in descending order, then a complex
/// pair with the positive imaginary part first.
pub fn cubic_roots(inv: &Invariants) -> [Complex64; 3] {
    let re = |x: f64| Complex64::new(x, 0.0);
    match inv.class() {
        DiscriminantClass::Zero => [re(0.0); 3],
        DiscriminantClass::DegenerateTrig | DiscriminantClass::DegenerateHyp => {
            let a = inv.degenerate_parameter();
            if a > 0.0 {
                [re(a), re(a), re(-2.0 * a)]
            } else {
                [re(-2.0 * a), re(a), re(a)]
            }
        }
        DiscriminantClass::Negative => {
            // t³ + pt + q = 0 with three real roots (p < 0).
            let p = -inv.g2 / 4.0;
            let q = -inv.g3 / 4.0;
            let r = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            let mut roots = [0, 1, 2].map(|k| r * (theta - 2.0 * PI * k as f64 / 3.0).cos());
            roots.sort_by(|a, b| b.total_cmp(a));
            roots.map(|x| re(polish_real(inv, x)))
        }
        DiscriminantClass::Positive => {
            let p = -inv.g2 / 4.0;
            let q = -inv.g3 / 4.0;
            let d = (q * q / 4.0 + p * p * p / 27.0).sqrt();
            let u = (-q / 2.0 + d).cbrt();
            let v = (-q / 2.0 - d).cbrt();
            let real = polish_real(inv, u + v);
            // the complex pair sums to −real (Vieta); Newton then polishes it
            let half = -real / 2.0;
            let im = (0.75f64).sqrt() * (u - v).abs();
            let mut e2 = Complex64::new(half, im);
            e2 = polish_complex(inv, e2);
            [re(real), e2, e2.conj()]
        }
    }
}

fn polish_real(inv: &Invariants, x: f64) -> f64 {
    let mut x = x;
    for _ in 0..3 {
        let f = 4.0 * x * x * x - inv.g2 * x - inv.g3;
        let df = 12.0 * x * x - inv.g2;
        if df.abs() <= 1e-8 * (1.0 + inv.g2.abs()) {
            break;
        }
        let next = x - f / df;
        if !next.is_finite() {
            break;
        }
        x = next;
    }
    x
}

fn polish_complex(inv: &Invariants, z: Complex64) -> Complex64 {
    let mut z = z;
    for _ in 0..3 {
        let df = inv.cubic_derivative(z);
        if df.norm() <= 1e-8 * (1.0 + inv.g2.abs()) {
            break;
        }
        let next = z - inv.cubic(z) / df;
        if !next.is_finite() {
            break;
        }
        z = next;
    }
    z
}

/// Primitive half-periods; `None` marks `ω₁ = +∞` or `ω₃ = +i∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPeriods {
    pub omega1: Option<f64>,
    pub omega3: Option<Complex64>,
}

impl HalfPeriods {
    /// Shape ratio: `ω₃ = iνω₁` (rectangular) or `ω₃ = ½(1 + iν)ω₁` (rhombic).
    pub fn nu(&self) -> Option<f64> {
        let (w1, w3) = (self.omega1?, self.omega3?);
        if w3.re.abs() <= 1e-12 * w1 {
            Some(w3.im / w1)
        } else {
            Some(2.0 * w3.im / w1)
        }
    }
}

impl fmt::Display for HalfPeriods {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.omega1 {
            Some(w) => write!(f, "ω₁={w}")?,
            None => write!(f, "ω₁=+∞")?,
        }
        match self.omega3 {
            Some(w) if w.re == 0.0 => write!(f, ", ω₃={}i", w.im),
            Some(w) => write!(f, ", ω₃={}+{}i", w.re, w.im),
            None => write!(f, ", ω₃=+i∞"),
        }
    }
}

/// Half-periods from the complete integrals over the cubic, via Carlson's R_F.
pub fn half_periods(inv: &Invariants) -> HalfPeriods {
    let zero = Complex64::new(0.0, 0.0);
    match inv.class() {
        DiscriminantClass::Zero => HalfPeriods { omega1: None, omega3: None },
        DiscriminantClass::DegenerateTrig => {
            let a = inv.degenerate_parameter();
            HalfPeriods { omega1: Some(PI / (2.0 * (-3.0 * a).sqrt())), omega3: None }
        }
        DiscriminantClass::DegenerateHyp => {
            let a = inv.degenerate_parameter();
            HalfPeriods { omega1: None, omega3: Some(Complex64::new(0.0, PI / (2.0 * (3.0 * a).sqrt()))) }
        }
        DiscriminantClass::Negative => {
            let [e1, e2, e3] = cubic_roots(inv);
            let w1 = rf(zero, e1 - e2, e1 - e3).re;
            let w3 = rf(zero, e1 - e3, e2 - e3).re;
            HalfPeriods { omega1: Some(w1), omega3: Some(Complex64::new(0.0, w3)) }
        }
        DiscriminantClass::Positive => {
            let [e1, e2, e3] = cubic_roots(inv);
            let real = rf(zero, e1 - e2, e1 - e3).re;
            let imag = rf(zero, e2 - e1, e3 - e1).re;
            HalfPeriods { omega1: Some(real), omega3: Some(Complex64::new(real, imag) / 2.0) }
        }
    }
}

/// Values of the Weierstrass family at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeierstrassValues {
    pub wp: Complex64,
    pub wp_prime: Complex64,
    pub zeta: Complex64,
    /// A branch of log σ; only its exponential is meaningful.
    pub log_sigma: Complex64,
}

#[derive(Clone, Debug)]
struct Lattice {
    b1: Complex64,
    b2: Complex64,
    /// ζ(z + bᵢ) − ζ(z).
    quasi1: Complex64,
    quasi2: Complex64,
}

#[derive(Clone, Debug)]
enum Kind {
    Lattice(Lattice),
    /// ℘(z) = a + c² / sinh²(cz) with c² = 3a.
    Degenerate {
        a: f64,
        c: Complex64,
    },
    Rational,
}

/// Weierstrass functions with fixed real invariants; lattice data is computed
/// once at construction.
#[derive(Clone, Debug)]
pub struct Weierstrass {
    inv: Invariants,
    periods: HalfPeriods,
    coeffs: Vec<f64>,
    kind: Kind,
    guard: f64,
}

impl Weierstrass {
    pub fn new(inv: Invariants) -> Self {
        let periods = half_periods(&inv);
        let coeffs = laurent_coefficients(&inv, LAURENT_TERMS);
        let kind = match inv.class() {
            DiscriminantClass::Zero => Kind::Rational,
            DiscriminantClass::DegenerateTrig | DiscriminantClass::DegenerateHyp => {
                let a = inv.degenerate_parameter();
                Kind::Degenerate { a, c: Complex64::new(3.0 * a, 0.0).sqrt() }
            }
            DiscriminantClass::Negative | DiscriminantClass::Positive => {
                let w1 = periods.omega1.expect("finite lattice");
                let w3 = periods.omega3.expect("finite lattice");
                let (b1, b2) = gauss_reduce(Complex64::new(2.0 * w1, 0.0), 2.0 * w3);
                Kind::Lattice(Lattice { b1, b2, quasi1: Complex64::default(), quasi2: Complex64::default() })
            }
        };
        let mut wf = Self { inv, periods, coeffs, kind, guard: DEFAULT_POLE_GUARD };
        if let Kind::Lattice(lat) = &wf.kind {
            // ζ(z + b) − ζ(z) = 2ζ(b/2)
            let (b1, b2) = (lat.b1, lat.b2);
            let quasi1 = 2.0 * wf.near_origin(b1 / 2.0, b1.norm()).zeta;
            let quasi2 = 2.0 * wf.near_origin(b2 / 2.0, b1.norm()).zeta;
            if let Kind::Lattice(lat) = &mut wf.kind {
                lat.quasi1 = quasi1;
                lat.quasi2 = quasi2;
            }
        }
        wf
    }

    pub fn with_pole_guard(mut self, guard: f64) -> Self {
        self.guard = guard;
        self
    }

    pub fn invariants(&self) -> Invariants {
        self.inv
    }

    pub fn half_periods(&self) -> HalfPeriods {
        self.periods
    }

    pub fn pole_guard(&self) -> f64 {
        self.guard
    }

    /// Quasi-periods ηᵢ = ζ(ωᵢ) for the finite half-periods.
    pub fn eta(&self) -> (Option<Complex64>, Option<Complex64>) {
        let at = |w: Complex64| self.eval(w).ok().map(|v| v.zeta);
        (self.periods.omega1.and_then(|w| at(Complex64::new(w, 0.0))), self.periods.omega3.and_then(at))
    }

    /// Distance from `z` to the nearest pole of ℘.
    pub fn pole_distance(&self, z: Complex64) -> f64 {
        match &self.kind {
            Kind::Rational => z.norm(),
            Kind::Degenerate { c, .. } => {
                let t = z * c / (I * PI);
                let n = t.re.round();
                (z - I * PI * n / c).norm()
            }
            Kind::Lattice(lat) => reduce(lat, z).0.norm(),
        }
    }

    /// ℘, ℘′, ζ and log σ at `z`.
    pub fn eval(&self, z: Complex64) -> Result<WeierstrassValues> {
        if self.pole_distance(z) < self.guard {
            return Err(Error::PoleProximity { z: z.to_string(), guard: self.guard });
        }
        Ok(self.eval_unguarded(z))
    }

    /// `(℘(z), ℘′(z))`.
    pub fn wp(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let v = self.eval(z)?;
        Ok((v.wp, v.wp_prime))
    }

    pub fn zeta(&self, z: Complex64) -> Result<Complex64> {
        self.eval(z).map(|v| v.zeta)
    }

    pub fn log_sigma(&self, z: Complex64) -> Result<Complex64> {
        self.eval(z).map(|v| v.log_sigma)
    }

    /// σ(z); zero at lattice points.
    pub fn sigma(&self, z: Complex64) -> Complex64 {
        if self.pole_distance(z) == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.eval_unguarded(z).log_sigma.exp()
    }

    fn eval_unguarded(&self, z: Complex64) -> WeierstrassValues {
        match &self.kind {
            Kind::Rational => {
                WeierstrassValues { wp: 1.0 / (z * z), wp_prime: -2.0 / (z * z * z), zeta: 1.0 / z, log_sigma: z.ln() }
            }
            Kind::Degenerate { a, c } => degenerate_values(*a, *c, z),
            Kind::Lattice(lat) => {
                let (z0, n1, n2) = reduce(lat, z);
                let base = self.near_origin(z0, lat.b1.norm());
                let shift = n1 * lat.b1 + n2 * lat.b2;
                let quasi = n1 * lat.quasi1 + n2 * lat.quasi2;
                let both_even = n1.rem_euclid(2.0) == 0.0 && n2.rem_euclid(2.0) == 0.0;
                let sign = if both_even { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, PI) };
                WeierstrassValues {
                    wp: base.wp,
                    wp_prime: base.wp_prime,
                    zeta: base.zeta + quasi,
                    log_sigma: base.log_sigma + quasi * (z0 + shift / 2.0) + sign,
                }
            }
        }
    }

    /// Laurent expansion at `z / 2ⁿ` followed by `n` duplications. Valid for
    /// `z` inside the Voronoi cell of the origin; `radius` is the length of
    /// the shortest nonzero period.
    fn near_origin(&self, z: Complex64, radius: f64) -> WeierstrassValues {
        let target = SERIES_FRACTION * radius;
        let mut halvings = 0;
        let mut u = z;
        while u.norm() > target {
            u /= 2.0;
            halvings += 1;
        }
        let mut v = laurent(&self.coeffs, u);
        let g2 = self.inv.g2;
        for _ in 0..halvings {
            let second = 6.0 * v.wp * v.wp - g2 / 2.0;
            let slope = second / v.wp_prime;
            let wp2 = slope * slope / 4.0 - 2.0 * v.wp;
            let wp2_prime = -v.wp_prime - slope * (wp2 - v.wp);
            v = WeierstrassValues {
                wp: wp2,
                wp_prime: wp2_prime,
                zeta: 2.0 * v.zeta + slope / 2.0,
                log_sigma: 4.0 * v.log_sigma + (-v.wp_prime).ln(),
            };
        }
        v
    }
}

/// `(℘(z), ℘′(z))` for the given invariants.
pub fn wp(z: Complex64, inv: &Invariants) -> Result<(Complex64, Complex64)> {
    Weierstrass::new(*inv).wp(z)
}

pub fn zeta(z: Complex64, inv: &Invariants) -> Result<Complex64> {
    Weierstrass::new(*inv).zeta(z)
}

pub fn sigma(z: Complex64, inv: &Invariants) -> Complex64 {
    Weierstrass::new(*inv).sigma(z)
}

/// Coefficients `c_k` (index `k`, `c_0 = c_1 = 0`) of
/// ℘(z) = z⁻² + Σ_{k≥2} c_k z^{2k−2}.
fn laurent_coefficients(inv: &Invariants, terms: usize) -> Vec<f64> {
    let mut c = vec![0.0; terms + 1];
    if terms >= 2 {
        c[2] = inv.g2 / 20.0;
    }
    if terms >= 3 {
        c[3] = inv.g3 / 28.0;
    }
    for k in 4..=terms {
        let s: f64 = (2..=k - 2).map(|j| c[j] * c[k - j]).sum();
        c[k] = 3.0 * s / ((2 * k + 1) as f64 * (k - 3) as f64);
    }
    c
}

fn laurent(c: &[f64], u: Complex64) -> WeierstrassValues {
    let u2 = u * u;
    let mut wp = 1.0 / u2;
    let mut wp_prime = -2.0 / (u2 * u);
    let mut zeta = 1.0 / u;
    let mut log_sigma = u.ln();
    // running power u^{2k-3}
    let mut pow = u;
    for (k, &ck) in c.iter().enumerate().skip(2) {
        let kf = k as f64;
        // pow = u^{2k-3}
        let p_odd = pow;
        let p_even = pow * u; // u^{2k-2}
        wp += ck * p_even;
        wp_prime += (2.0 * kf - 2.0) * ck * p_odd;
        zeta -= ck * p_even * u / (2.0 * kf - 1.0);
        log_sigma -= ck * p_even * u2 / ((2.0 * kf - 1.0) * 2.0 * kf);
        pow *= u2;
    }
    WeierstrassValues { wp, wp_prime, zeta, log_sigma }
}

fn degenerate_values(a: f64, c: Complex64, z: Complex64) -> WeierstrassValues {
    // evaluate on Re(cz) ≥ 0 and use parity: ℘ even, ℘′ ζ σ odd
    let flip = (c * z).re < 0.0;
    let zz = if flip { -z } else { z };
    let x = c * zz;
    let q = (-2.0 * x).exp();
    let one_minus = 1.0 - q;
    let inv_sinh2 = 4.0 * q / (one_minus * one_minus);
    let coth = (1.0 + q) / one_minus;
    let wp = a + c * c * inv_sinh2;
    let mut wp_prime = -2.0 * c * c * c * coth * inv_sinh2;
    let mut zeta = -a * zz + c * coth;
    let mut log_sigma = x + one_minus.ln() - LN_2 - c.ln() - a * zz * zz / 2.0;
    if flip {
        wp_prime = -wp_prime;
        zeta = -zeta;
        log_sigma += Complex64::new(0.0, PI);
    }
    WeierstrassValues { wp, wp_prime, zeta, log_sigma }
}

fn gauss_reduce(mut b1: Complex64, mut b2: Complex64) -> (Complex64, Complex64) {
    // Lagrange–Gauss; stopping on |b2| ≥ |b1| rather than on μ = 0 keeps
    // rhombic lattices, where the projection is exactly ±½, from cycling
    if b2.norm_sqr() < b1.norm_sqr() {
        std::mem::swap(&mut b1, &mut b2);
    }
    loop {
        let mu = ((b2 * b1.conj()).re / b1.norm_sqr()).round();
        b2 -= mu * b1;
        if b2.norm_sqr() >= b1.norm_sqr() {
            return (b1, b2);
        }
        std::mem::swap(&mut b1, &mut b2);
    }
}

/// Nearest-lattice-point reduction: `z = z0 + n1·b1 + n2·b2`.
fn reduce(lat: &Lattice, z: Complex64) -> (Complex64, f64, f64) {
    let (b1, b2) = (lat.b1, lat.b2);
    let det = b1.re * b2.im - b1.im * b2.re;
    let x = (z.re * b2.im - z.im * b2.re) / det;
    let y = (b1.re * z.im - b1.im * z.re) / det;
    let (r1, r2) = (x.round(), y.round());
    let mut best = (z - r1 * b1 - r2 * b2, r1, r2);
    for d1 in -1..=1 {
        for d2 in -1..=1 {
            let (n1, n2) = (r1 + d1 as f64, r2 + d2 as f64);
            let cand = z - n1 * b1 - n2 * b2;
            if cand.norm_sqr() < best.0.norm_sqr() {
                best = (cand, n1, n2);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&Invariants::new(4.0, 0.0)), -64.0);
        assert_eq!(discriminant(&Invariants::new(0.0, 4.0)), 432.0);
        assert_eq!(discriminant(&Invariants::new(12.0, -8.0)), 0.0);
    }

    #[test]
    fn cubic_root_examples() {
        let r = cubic_roots(&Invariants::new(4.0, 0.0));
        for (got, want) in r.iter().zip([1.0, 0.0, -1.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-14, "{r:?}");
        }
        let r = cubic_roots(&Invariants::new(-4.0, 0.0));
        for (got, want) in r.iter().zip([c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]) {
            assert!((got - want).norm() < 1e-14, "{r:?}");
        }
        let r = cubic_roots(&Invariants::new(12.0, -8.0));
        for (got, want) in r.iter().zip([1.0, 1.0, -2.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-14, "{r:?}");
        }
    }

    #[test]
    fn cubic_roots_satisfy_vieta() {
        for (g2, g3) in [(4.0, 0.0), (0.0, 4.0), (5.0, -2.0), (12.0, -8.0), (-3.0, 7.0), (9.0, 1.0), (0.5, -0.1)] {
            let inv = Invariants::new(g2, g3);
            let r = cubic_roots(&inv);
            assert!((r[0] + r[1] + r[2]).norm() <= 1e-12, "{inv}: {r:?}");
            for e in r {
                assert!(inv.cubic(e).norm() <= 1e-10, "{inv}: P({e}) = {}", inv.cubic(e));
            }
        }
    }

    #[test]
    fn half_period_configurations() {
        let hp = half_periods(&Invariants::new(4.0, 0.0));
        let w1 = hp.omega1.unwrap();
        let w3 = hp.omega3.unwrap();
        assert!(w1 > 0.0 && w3.re == 0.0 && w3.im > 0.0);
        assert!((hp.nu().unwrap() - 1.0).abs() < 1e-13);

        let hp = half_periods(&Invariants::new(12.0, -8.0));
        assert_eq!(hp.omega1, None);
        assert!(hp.omega3.unwrap().im > 0.0);

        let hp = half_periods(&Invariants::new(0.0, 0.0));
        assert_eq!(hp, HalfPeriods { omega1: None, omega3: None });
        assert_eq!(hp.to_string(), "ω₁=+∞, ω₃=+i∞");

        let hp = half_periods(&Invariants::new(12.0, 8.0));
        assert!(hp.omega1.unwrap() > 0.0 && hp.omega3.is_none());

        let hp = half_periods(&Invariants::new(0.0, 4.0));
        let (w1, w3) = (hp.omega1.unwrap(), hp.omega3.unwrap());
        assert!((w3.re - w1 / 2.0).abs() < 1e-14 && w3.im > 0.0);
    }

    #[test]
    fn rational_limit_is_exact() {
        let wf = Weierstrass::new(Invariants::new(0.0, 0.0));
        let z = c(0.7, -0.3);
        let (p, dp) = wf.wp(z).unwrap();
        assert_eq!(p, 1.0 / (z * z));
        assert_eq!(dp, -2.0 / (z * z * z));
        assert_eq!(wf.zeta(z).unwrap(), 1.0 / z);
        assert!((wf.sigma(z) - z).norm() < 1e-15);
    }

    #[test]
    fn pole_guard() {
        let wf = Weierstrass::new(Invariants::new(4.0, 0.0));
        let w1 = wf.half_periods().omega1.unwrap();
        assert!(matches!(wf.wp(c(1e-9, 0.0)), Err(Error::PoleProximity { .. })));
        assert!(matches!(wf.zeta(c(2.0 * w1 + 5e-9, 0.0)), Err(Error::PoleProximity { .. })));
        assert!(wf.wp(c(1e-6, 0.0)).is_ok());
        assert_eq!(wf.sigma(c(0.0, 0.0)), c(0.0, 0.0));
        let relaxed = Weierstrass::new(Invariants::new(4.0, 0.0)).with_pole_guard(1e-12);
        assert!(relaxed.wp(c(1e-9, 0.0)).is_ok());
    }

    #[test]
    fn legendre_relation() {
        for (g2, g3) in [(4.0, 0.0), (0.0, 4.0), (5.0, -2.0), (-4.0, 0.0)] {
            let wf = Weierstrass::new(Invariants::new(g2, g3));
            let hp = wf.half_periods();
            let (w1, w3) = (c(hp.omega1.unwrap(), 0.0), hp.omega3.unwrap());
            let (e1, e3) = wf.eta();
            let lhs = e1.unwrap() * w3 - e3.unwrap() * w1;
            assert!((lhs - c(0.0, PI / 2.0)).norm() < 1e-11, "({g2},{g3}): {lhs}");
        }
    }

    #[test]
    fn degenerate_closed_forms_match_real_formulas() {
        // tanh case a = 1: ℘(s + ω₃) = 3 tanh²(√3 s) − 2
        let wf = Weierstrass::new(Invariants::new(12.0, -8.0));
        let w3 = wf.half_periods().omega3.unwrap();
        for s in [-2.0, -0.3, 0.0, 0.4, 3.0] {
            let (p, _) = wf.wp(c(s, 0.0) + w3).unwrap();
            let t = (3f64.sqrt() * s).tanh();
            assert!((p - c(3.0 * t * t - 2.0, 0.0)).norm() < 1e-13, "s={s}: {p}");
        }
        // tan case a = −1: ℘(s + ω₁) = 3 tan²(√3 s) + 2
        let wf = Weierstrass::new(Invariants::new(12.0, 8.0));
        let w1 = wf.half_periods().omega1.unwrap();
        for s in [-0.8, 0.0, 0.5] {
            let (p, _) = wf.wp(c(s + w1, 0.0)).unwrap();
            let t = (3f64.sqrt() * s).tan();
            assert!((p - c(3.0 * t * t + 2.0, 0.0)).norm() < 1e-12, "s={s}: {p}");
        }
    }
}
