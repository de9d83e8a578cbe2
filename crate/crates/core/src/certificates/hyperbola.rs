//! Closed curves on the hyperbola {z₁z₂ = 1} ⊂ ℂ².
//!
//! The lift of a planar closed polyline γ avoiding 0 is t ↦ (γ(t), 1/γ(t)).
//! It is not a polyline in ℂ², but polynomial one-forms still integrate
//! exactly: P₁ dz₁ + P₂ dz₂ pulls back to the Laurent form
//! L(z) dz = (P₁(z, 1/z) − P₂(z, 1/z) z⁻²) dz on γ. Powers z^m with m ≠ −1
//! have single-valued antiderivatives, and ∮ dz/z = 2πi · wind(γ, 0).

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde_json::json;

use super::poly::{CPolynomial, OneForm};
use super::winding::winding_number;
use super::{ClosedContour, ContourValue};
use crate::curve::json::digest_json;
use crate::curve::vector::point_segment_dist2;
use crate::curve::{to_complex, PolyCurve, Space};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance};

#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolaLift<S: Scalar> {
    base: PolyCurve<S>,
    winding: i64,
}

fn powi<S: Scalar>(z: &Complex<S>, m: i64) -> Complex<S> {
    let mut acc = Complex::one();
    for _ in 0..m.unsigned_abs() {
        acc = acc * z.clone();
    }
    if m < 0 {
        Complex::<S>::one() / acc
    } else {
        acc
    }
}

impl<S: Scalar> HyperbolaLift<S> {
    /// Fails unless `base` is a closed planar curve staying away from 0.
    pub fn new(base: PolyCurve<S>, tol: Tolerance) -> Result<Self> {
        if base.space() != Space::Complex(1) {
            return Err(Error::DimensionMismatch("hyperbola lift needs a curve in C".into()));
        }
        if !base.is_closed() {
            return Err(Error::NotClosed);
        }
        let origin = vec![S::zero(), S::zero()];
        if base
            .segments()
            .any(|s| point_segment_dist2(&origin, s.start, s.end).is_negligible(tol, 1.0))
        {
            return Err(Error::VanishesOnCurve);
        }
        let winding = winding_number(&base, &CPolynomial::variable(1, 0), tol)?;
        Ok(HyperbolaLift { base, winding })
    }

    pub fn base(&self) -> &PolyCurve<S> {
        &self.base
    }

    /// Winding number of the base curve about 0.
    pub fn winding(&self) -> i64 {
        self.winding
    }

    /// Points (z, 1/z) at `per_segment` samples per base segment, in ℝ⁴ coordinates.
    pub fn sample_f64(&self, per_segment: usize) -> Vec<Vec<f64>> {
        let base = self.base.to_f64();
        let k = per_segment.max(1);
        let mut out = Vec::with_capacity(base.segment_count() * k);
        for seg in base.segments() {
            for i in 0..k {
                let s = i as f64 / k as f64;
                let z = Complex::new(
                    seg.start[0] + s * (seg.end[0] - seg.start[0]),
                    seg.start[1] + s * (seg.end[1] - seg.start[1]),
                );
                let w = z.inv();
                out.push(vec![z.re, z.im, w.re, w.im]);
            }
        }
        out
    }

    /// The Laurent coefficients of the pulled-back form.
    fn laurent(&self, form: &OneForm<S>) -> BTreeMap<i64, Complex<S>> {
        let mut out: BTreeMap<i64, Complex<S>> = BTreeMap::new();
        let mut add = |m: i64, c: Complex<S>| {
            let e = out.entry(m).or_insert_with(Complex::zero);
            *e = e.clone() + c;
        };
        for (e, c) in form.components()[0].terms() {
            add(e[0] as i64 - e[1] as i64, c.clone());
        }
        for (e, c) in form.components()[1].terms() {
            add(e[0] as i64 - e[1] as i64 - 2, -c.clone());
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

impl<S: Scalar> ClosedContour<S> for HyperbolaLift<S> {
    fn nvars(&self) -> usize {
        2
    }

    fn integrate(&self, form: &OneForm<S>) -> Result<ContourValue<S>> {
        if form.nvars() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "form on C^{} over a curve in C^2",
                form.nvars()
            )));
        }
        let laurent = self.laurent(form);
        let pts: Vec<Complex<S>> = self
            .base
            .points()
            .iter()
            .map(|p| to_complex(p)[0].clone())
            .collect();
        let m_pts = pts.len();
        let mut algebraic = Complex::zero();
        let mut two_pi_i = Complex::zero();
        for (&m, c) in &laurent {
            if m == -1 {
                two_pi_i = c.clone() * Complex::new(S::from_i64(self.winding), S::zero());
                continue;
            }
            // Antiderivative z^{m+1}/(m+1), differenced along every segment.
            let k = S::from_i64(m + 1);
            let mut sum = Complex::<S>::zero();
            for j in 0..m_pts {
                let a = &pts[j];
                let b = &pts[(j + 1) % m_pts];
                sum = sum + powi(b, m + 1) - powi(a, m + 1);
            }
            algebraic = algebraic + c.clone() * Complex::new(sum.re / k.clone(), sum.im / k);
        }
        Ok(ContourValue { algebraic, two_pi_i })
    }

    fn require_simple(&self, tol: Tolerance) -> Result<()> {
        // z ↦ (z, 1/z) is injective, so the lift is simple iff the base is.
        self.base.require_simple(tol)
    }

    fn digest(&self) -> String {
        digest_json(&json!({ "lift": "hyperbola", "base": self.base.to_json() }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::{certificate_search, certify, Verdict};
    use crate::curve::unit_roots;
    use crate::scalar::{dyadic, Q};

    fn circle(n: usize, center: (f64, f64), r: f64) -> PolyCurve<Q> {
        let pts = unit_roots(n)
            .into_iter()
            .map(|(c, s)| vec![dyadic(center.0 + r * c, 30), dyadic(center.1 + r * s, 30)])
            .collect();
        PolyCurve::from_points(Space::Complex(1), true, pts).unwrap()
    }

    #[test]
    fn lifted_unit_circle_is_certified_by_z2_dz1() {
        let lift = HyperbolaLift::new(circle(24, (0.0, 0.0), 1.0), Tolerance::default()).unwrap();
        assert_eq!(lift.winding(), 1);
        let cert = certify(&lift, &OneForm::monomial(vec![0, 1], 0), Tolerance::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
        assert!(cert.integral.algebraic.is_zero());
        assert_eq!(cert.integral.two_pi_i, Complex::one());
        assert!(cert.to_json().get("integral_2pi_i").is_some());
    }

    #[test]
    fn lift_of_curve_not_enclosing_zero_has_no_monomial_certificate() {
        let lift = HyperbolaLift::new(circle(20, (3.0, 0.5), 1.0), Tolerance::default()).unwrap();
        assert_eq!(lift.winding(), 0);
        for (form, v) in crate::certificates::search_table(&lift, 3).unwrap() {
            assert!(v.algebraic.is_zero() && v.two_pi_i.is_zero(), "{form}");
        }
        assert!(certificate_search(&lift, 3, Tolerance::default()).unwrap().is_none());
    }

    #[test]
    fn base_through_origin_is_rejected() {
        let pts = vec![
            vec![Q::from_i64(-1), Q::from_i64(0)],
            vec![Q::from_i64(1), Q::from_i64(0)],
            vec![Q::from_i64(0), Q::from_i64(1)],
        ];
        let c = PolyCurve::from_points(Space::Complex(1), true, pts).unwrap();
        assert!(matches!(HyperbolaLift::new(c, Tolerance::default()), Err(Error::VanishesOnCurve)));
    }
}
