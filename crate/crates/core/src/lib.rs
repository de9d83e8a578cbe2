//! Exact polyline geometry for polynomial convexity of curves in ℂⁿ.
//!
//! The crate is organised around [`curve::PolyCurve`], a piecewise-linear
//! map from a circle or interval into ℂⁿ (or ℝᵏ). On top of it sit
//!
//! - [`metrics`]: Hausdorff distances between samples and curve images,
//! - [`certificates`]: holomorphic one-forms, exact contour integrals,
//!   winding numbers and the nonzero-integral convexity certificate,
//! - [`perturb`]: local modifications that make a curve certifiably
//!   polynomially convex,
//! - [`embed`]: generic projections that repair injectivity of BV maps,
//! - [`closing`]: closing an arc into a simple closed curve inside a tube,
//! - [`hull_lab`]: reproducible convergence demonstrations.
//!
//! Every kernel runs in exact rational arithmetic ([`scalar::Q`]); the
//! curve, metric and certificate kernels also run in `f64`.

pub mod certificates;
pub mod closing;
pub mod curve;
pub mod embed;
pub mod error;
pub mod hull_lab;
pub mod metrics;
pub mod perturb;
pub mod rng;
pub mod scalar;

pub use curve::{AnyCurve, PolyCurve, SimplicityWitness, Space};
pub use error::{Error, ErrorKind, Result};
pub use scalar::{NumericMode, Scalar, Tolerance, Q};
