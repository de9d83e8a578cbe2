//! Polynomial-convexity certificates for simple closed curves.
//!
//! A rectifiable simple closed curve γ ⊂ ℂⁿ is polynomially convex as soon
//! as some holomorphic one-form has a nonzero integral over it. This module
//! integrates polynomial one-forms exactly, searches monomial forms, and
//! builds the explicit certificate form of a totally real triangle.

mod frame;
mod hyperbola;
pub mod integral;
pub mod poly;
mod winding;

use num_complex::Complex;
use num_traits::Zero;
use serde_json::{json, Value};

pub use frame::{complex_dependent, totally_real_frame, LinearFrame};
pub use hyperbola::HyperbolaLift;
pub use integral::{contour_integral, path_integral};
pub use poly::{exponents_of_degree, CPolynomial, Exponent, OneForm};
pub use winding::winding_number;

use crate::curve::PolyCurve;
use crate::error::{Error, Result};
use crate::scalar::{complex_from_json, complex_to_f64, complex_to_json, NumericMode, Scalar, Tolerance};

/// Value of a contour integral, `algebraic + 2πi · two_pi_i`.
///
/// Both parts lie in ℚ(i) in rational mode. Since π is transcendental the
/// value vanishes exactly when both parts do.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourValue<S: Scalar> {
    pub algebraic: Complex<S>,
    pub two_pi_i: Complex<S>,
}

impl<S: Scalar> ContourValue<S> {
    pub fn plain(algebraic: Complex<S>) -> Self {
        ContourValue {
            algebraic,
            two_pi_i: Complex::zero(),
        }
    }

    pub fn to_f64(&self) -> Complex<f64> {
        let i2pi = Complex::new(0.0, std::f64::consts::TAU);
        complex_to_f64(&self.algebraic) + i2pi * complex_to_f64(&self.two_pi_i)
    }

    /// Exact zero test in rational mode, |value| ≤ τ in float mode.
    pub fn is_zero_under(&self, tol: Tolerance) -> bool {
        match S::MODE {
            NumericMode::Rational => self.algebraic.is_zero() && self.two_pi_i.is_zero(),
            NumericMode::F64 => self.to_f64().norm() <= tol.tau,
        }
    }
}

/// A closed curve over which polynomial one-forms can be integrated exactly.
pub trait ClosedContour<S: Scalar> {
    fn nvars(&self) -> usize;
    fn integrate(&self, form: &OneForm<S>) -> Result<ContourValue<S>>;
    /// Fails with [`Error::NotSimple`] (or a zero-length error) when the curve is not simple.
    fn require_simple(&self, tol: Tolerance) -> Result<()>;
    fn digest(&self) -> String;
}

impl<S: Scalar> ClosedContour<S> for PolyCurve<S> {
    fn nvars(&self) -> usize {
        self.complex_dim().unwrap_or(0)
    }

    fn integrate(&self, form: &OneForm<S>) -> Result<ContourValue<S>> {
        contour_integral(self, form).map(ContourValue::plain)
    }

    fn require_simple(&self, tol: Tolerance) -> Result<()> {
        if !self.is_closed() {
            return Err(Error::NotClosed);
        }
        PolyCurve::require_simple(self, tol)
    }

    fn digest(&self) -> String {
        PolyCurve::digest(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Nonzero integral decided exactly.
    Certified,
    /// Nonzero integral decided with the float tolerance.
    CertifiedFloat,
    /// Zero integral: no conclusion either way.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "certified-polynomially-convex",
            Verdict::CertifiedFloat => "certified-polynomially-convex-float",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn is_certified(self) -> bool {
        !matches!(self, Verdict::Inconclusive)
    }

    fn parse(s: &str) -> Option<Self> {
        [Verdict::Certified, Verdict::CertifiedFloat, Verdict::Inconclusive]
            .into_iter()
            .find(|v| v.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<S: Scalar> {
    pub form: OneForm<S>,
    pub integral: ContourValue<S>,
    pub verdict: Verdict,
    pub curve_digest: String,
}

impl<S: Scalar> Certificate<S> {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "form": self.form.to_json(),
            "integral": complex_to_json(&self.integral.algebraic),
            "verdict": self.verdict.as_str(),
            "curve_digest": self.curve_digest,
            "mode": S::MODE.as_str(),
        });
        if !self.integral.two_pi_i.is_zero() {
            v["integral_2pi_i"] = complex_to_json(&self.integral.two_pi_i);
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Malformed(format!("certificate: missing `{k}`")));
        let form = OneForm::from_json(field("form")?)?;
        let algebraic = complex_from_json(field("integral")?)
            .map_err(|e| Error::Malformed(format!("certificate.integral: {e}")))?;
        let two_pi_i = match v.get("integral_2pi_i") {
            Some(x) => complex_from_json(x).map_err(|e| Error::Malformed(format!("certificate.integral_2pi_i: {e}")))?,
            None => Complex::zero(),
        };
        let verdict = field("verdict")?
            .as_str()
            .and_then(Verdict::parse)
            .ok_or_else(|| Error::Malformed("certificate: unknown verdict".into()))?;
        let curve_digest = field("curve_digest")?
            .as_str()
            .ok_or_else(|| Error::Malformed("certificate: `curve_digest` must be a string".into()))?
            .to_string();
        Ok(Certificate {
            form,
            integral: ContourValue { algebraic, two_pi_i },
            verdict,
            curve_digest,
        })
    }
}

fn verdict_for<S: Scalar>(value: &ContourValue<S>, tol: Tolerance) -> Verdict {
    if value.is_zero_under(tol) {
        Verdict::Inconclusive
    } else if S::MODE == NumericMode::Rational {
        Verdict::Certified
    } else {
        Verdict::CertifiedFloat
    }
}

fn check_nvars<S: Scalar, C: ClosedContour<S> + ?Sized>(curve: &C, form: &OneForm<S>) -> Result<()> {
    if curve.nvars() != form.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "curve in C^{}, form on C^{}",
            curve.nvars(),
            form.nvars()
        )));
    }
    Ok(())
}

/// Certifies γ with α once γ is known to be simple.
fn certify_simple<S: Scalar, C: ClosedContour<S> + ?Sized>(
    curve: &C,
    form: &OneForm<S>,
    digest: &str,
    tol: Tolerance,
) -> Result<Certificate<S>> {
    check_nvars(curve, form)?;
    let integral = curve.integrate(form)?;
    Ok(Certificate {
        form: form.clone(),
        verdict: verdict_for(&integral, tol),
        integral,
        curve_digest: digest.to_string(),
    })
}

/// Integrates α over the simple closed curve γ. A nonzero integral certifies
/// polynomial convexity; a zero integral is inconclusive.
pub fn certify<S: Scalar, C: ClosedContour<S> + ?Sized>(
    curve: &C,
    form: &OneForm<S>,
    tol: Tolerance,
) -> Result<Certificate<S>> {
    check_nvars(curve, form)?;
    curve.require_simple(tol)?;
    certify_simple(curve, form, &curve.digest(), tol)
}

/// Monomial forms z^a dz_j with |a| ≤ D, in search order: by degree, then
/// component j, then exponent in descending lexicographic order.
pub fn monomial_forms<S: Scalar>(nvars: usize, max_degree: u32) -> Vec<OneForm<S>> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let exps = exponents_of_degree(nvars, d);
        for j in 0..nvars {
            for e in &exps {
                out.push(OneForm::monomial(e.clone(), j));
            }
        }
    }
    out
}

/// Every monomial form up to degree D with its integral over γ, in search order.
pub fn search_table<S: Scalar, C: ClosedContour<S> + ?Sized>(
    curve: &C,
    max_degree: u32,
) -> Result<Vec<(OneForm<S>, ContourValue<S>)>> {
    monomial_forms(curve.nvars(), max_degree)
        .into_iter()
        .map(|f| curve.integrate(&f).map(|v| (f, v)))
        .collect()
}

/// First certifying monomial form of degree at most D, if any. `None` is
/// inconclusive: certificates may require higher degree or non-monomial forms.
pub fn certificate_search<S: Scalar, C: ClosedContour<S> + ?Sized>(
    curve: &C,
    max_degree: u32,
    tol: Tolerance,
) -> Result<Option<Certificate<S>>> {
    curve.require_simple(tol)?;
    let digest = curve.digest();
    for form in monomial_forms(curve.nvars(), max_degree) {
        let cert = certify_simple(curve, &form, &digest, tol)?;
        if cert.verdict.is_certified() {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}
