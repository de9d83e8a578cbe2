//! Closed-form integration of polynomial one-forms along polylines.
//!
//! On a segment z(t) = z₀ + tΔ, t ∈ [0, 1], every component P_j(z(t)) is a
//! univariate polynomial Σ c_m t^m, so ∫ P_j(z(t)) Δ_j dt = Δ_j Σ c_m / (m+1).
//! In rational mode the result is exact.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::poly::{CPolynomial, OneForm};
use crate::curve::{to_complex, PolyCurve};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(crate) type UniPoly<S> = Vec<Complex<S>>;

fn uni_mul<S: Scalar>(a: &[Complex<S>], b: &[Complex<S>]) -> UniPoly<S> {
    let mut out = vec![Complex::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Coefficient vectors of (z₀ + tΔ)^e for e = 0..=max.
fn linear_powers<S: Scalar>(z0: &Complex<S>, d: &Complex<S>, max: u32) -> Vec<UniPoly<S>> {
    let mut out: Vec<UniPoly<S>> = vec![vec![Complex::one()]];
    let lin = [z0.clone(), d.clone()];
    for e in 1..=max as usize {
        let next = uni_mul(&out[e - 1], &lin);
        out.push(next);
    }
    out
}

/// Per-variable power tables for one segment.
pub(crate) struct SegmentPowers<S: Scalar> {
    powers: Vec<Vec<UniPoly<S>>>,
}

impl<S: Scalar> SegmentPowers<S> {
    pub(crate) fn new(start: &[Complex<S>], delta: &[Complex<S>], max_exp: &[u32]) -> Self {
        SegmentPowers {
            powers: start
                .iter()
                .zip(delta)
                .zip(max_exp)
                .map(|((z0, d), &m)| linear_powers(z0, d, m))
                .collect(),
        }
    }

    /// p(z₀ + tΔ) as a polynomial in t.
    pub(crate) fn compose(&self, p: &CPolynomial<S>) -> UniPoly<S> {
        let mut acc: UniPoly<S> = vec![Complex::zero()];
        for (e, c) in p.terms() {
            let mut term: UniPoly<S> = vec![c.clone()];
            for (k, &ek) in e.iter().enumerate() {
                if ek > 0 {
                    term = uni_mul(&term, &self.powers[k][ek as usize]);
                }
            }
            if term.len() > acc.len() {
                acc.resize(term.len(), Complex::zero());
            }
            for (a, t) in acc.iter_mut().zip(term) {
                *a = a.clone() + t;
            }
        }
        acc
    }
}

/// ∫₀¹ Σ c_m t^m dt.
pub(crate) fn integrate_unit<S: Scalar>(g: &[Complex<S>]) -> Complex<S> {
    g.iter().enumerate().fold(Complex::zero(), |acc, (m, c)| {
        let k = S::from_i64(m as i64 + 1);
        acc + Complex::new(c.re.clone() / k.clone(), c.im.clone() / k)
    })
}

/// ∫ α over the segment from `start` to `end`.
pub fn segment_integral<S: Scalar>(
    start: &[Complex<S>],
    end: &[Complex<S>],
    form: &OneForm<S>,
    max_exp: &[u32],
) -> Complex<S> {
    let delta: Vec<Complex<S>> = end
        .iter()
        .zip(start)
        .map(|(b, a)| b.clone() - a.clone())
        .collect();
    let powers = SegmentPowers::new(start, &delta, max_exp);
    let mut total = Complex::zero();
    for (j, p) in form.components().iter().enumerate() {
        if p.is_zero() || delta[j].is_zero() {
            continue;
        }
        total = total + integrate_unit(&powers.compose(p)) * delta[j].clone();
    }
    total
}

fn form_max_exponents<S: Scalar>(form: &OneForm<S>) -> Vec<u32> {
    let mut out = vec![0; form.nvars()];
    for p in form.components() {
        for (o, m) in out.iter_mut().zip(p.max_exponents()) {
            *o = (*o).max(m);
        }
    }
    out
}

fn check_dims<S: Scalar>(curve: &PolyCurve<S>, form: &OneForm<S>) -> Result<()> {
    match curve.complex_dim() {
        Some(n) if n == form.nvars() => Ok(()),
        Some(n) => Err(Error::DimensionMismatch(format!(
            "curve in C^{n}, form on C^{}",
            form.nvars()
        ))),
        None => Err(Error::DimensionMismatch(
            "one-forms integrate over complex curves only".into(),
        )),
    }
}

/// ∫_γ α along an open or closed polyline.
pub fn path_integral<S: Scalar>(curve: &PolyCurve<S>, form: &OneForm<S>) -> Result<Complex<S>> {
    check_dims(curve, form)?;
    let max_exp = form_max_exponents(form);
    let pts: Vec<Vec<Complex<S>>> = curve.points().iter().map(|p| to_complex(p)).collect();
    let mut total = Complex::zero();
    for seg in curve.segments() {
        let j = (seg.index + 1) % pts.len();
        total = total + segment_integral(&pts[seg.index], &pts[j], form, &max_exp);
    }
    Ok(total)
}

/// ∮_γ α over a closed polyline.
pub fn contour_integral<S: Scalar>(curve: &PolyCurve<S>, form: &OneForm<S>) -> Result<Complex<S>> {
    if !curve.is_closed() {
        return Err(Error::NotClosed);
    }
    path_integral(curve, form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{unit_roots, Space};
    use crate::scalar::{dyadic, Q};

    fn conj_ngon_f64(n: usize) -> PolyCurve<f64> {
        let pts = unit_roots(n).into_iter().map(|(c, s)| vec![c, s, c, -s]).collect();
        PolyCurve::from_points(Space::Complex(2), true, pts).unwrap()
    }

    #[test]
    fn exact_forms_vanish() {
        let c = conj_ngon_f64(12).to_rational();
        let dz1 = OneForm::<Q>::monomial(vec![0, 0], 0);
        assert!(contour_integral(&c, &dz1).unwrap().is_zero());
        let z1dz1 = OneForm::<Q>::monomial(vec![1, 0], 0);
        assert!(contour_integral(&c, &z1dz1).unwrap().is_zero());
    }

    #[test]
    fn conjugate_circle() {
        for n in [16usize, 100, 1024] {
            let v = contour_integral(&conj_ngon_f64(n), &OneForm::monomial(vec![0, 1], 0)).unwrap();
            let expected = n as f64 * (std::f64::consts::TAU / n as f64).sin();
            assert!(v.re.abs() < 1e-12);
            assert!((v.im - expected).abs() < 1e-12, "{n}: {} vs {expected}", v.im);
        }
    }

    #[test]
    fn conjugate_polygon_is_twice_i_times_area() {
        let pts: Vec<Vec<Q>> = unit_roots(64)
            .into_iter()
            .map(|(c, s)| {
                let (x, y) = (dyadic(c, 30), dyadic(s, 30));
                vec![x.clone(), y.clone(), x, -y]
            })
            .collect();
        let curve = PolyCurve::from_points(Space::Complex(2), true, pts.clone()).unwrap();
        let v = contour_integral(&curve, &OneForm::monomial(vec![0, 1], 0)).unwrap();
        let m = pts.len();
        let area2 = (0..m).fold(Q::zero(), |acc, j| {
            let (p, q) = (&pts[j], &pts[(j + 1) % m]);
            acc + &p[0] * &q[1] - &q[0] * &p[1]
        });
        assert!(v.re.is_zero());
        assert_eq!(v.im, area2);
    }

    #[test]
    fn open_curves_need_path_integral() {
        let c = PolyCurve::from_points(Space::Complex(1), false, vec![vec![0.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let z = OneForm::monomial(vec![1], 0);
        assert!(matches!(contour_integral(&c, &z), Err(Error::NotClosed)));
        assert_eq!(path_integral(&c, &z).unwrap(), Complex::new(2.0, 0.0));
    }

    #[test]
    fn dimension_mismatch() {
        let c = conj_ngon_f64(8);
        assert!(matches!(
            contour_integral(&c, &OneForm::monomial(vec![1], 0)),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
