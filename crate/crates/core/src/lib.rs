//! Extremal null curves in de Sitter 3-space.
//!
//! The crate computes extremals of the action `∫ (m + k) ds` on null curves,
//! where `k` is the curvature in the pseudo-arc parameter `s`. Closed-form
//! canonical frames are assembled from Weierstrass elliptic functions and can
//! be cross-checked against an independent Runge–Kutta integration of the
//! frame equation `Γ⁻¹Γ′ = H(k)`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod potential;
pub mod verify;
pub mod weierstrass;

mod carlson;

pub use num_complex::Complex64;

pub use closed_form::{ClosedForm, ClosedFormCase, ClosedFormTag, FrameSample};
pub use dynamics::{ModelParams, Spin};
pub use error::{Error, Result};
pub use linalg::{ComplexMat2, MinkowskiVec};
pub use potential::{Branch, CaseTag, Jet3, Potential};
pub use weierstrass::{HalfPeriods, Invariants, Weierstrass};
