//! Winding number of f∘γ about 0 by certified argument summation.
//!
//! On each segment, g(t) = f(z₀ + tΔ) is a polynomial in t. An interval with
//! midpoint m and half-width h is accepted once the Taylor expansion
//! g(m + s) = Σ d_k s^k satisfies |d₀| > 2 Σ_{k≥1} |d_k| h^k: then g stays in
//! a disc of radius |d₀|/2 about d₀, its argument moves by less than π/2, and
//! the principal-branch increment is the true one. Rejected intervals split.

use std::f64::consts::TAU;

use num_complex::Complex;

use super::integral::SegmentPowers;
use super::poly::CPolynomial;
use crate::curve::{to_complex, PolyCurve};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance};

const MAX_DEPTH: u32 = 50;

/// Coefficients of g(m + s) given those of g(t).
fn taylor_shift(g: &[Complex<f64>], m: f64) -> Vec<Complex<f64>> {
    let mut d = g.to_vec();
    // Repeated synthetic division by (t - m).
    let n = d.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let next = d[j + 1];
            d[j] += next * m;
        }
    }
    d
}

fn horner(g: &[Complex<f64>], t: f64) -> Complex<f64> {
    g.iter().rev().fold(Complex::new(0.0, 0.0), |acc, c| acc * t + c)
}

/// Argument change of g over [0, 1], or an error when g gets within `floor` of 0.
fn segment_arg_change(g: &[Complex<f64>], floor: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut stack = vec![(0.0f64, 1.0f64, 0u32)];
    while let Some((a, b, depth)) = stack.pop() {
        let m = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let d = taylor_shift(g, m);
        let d0 = d[0].norm();
        let mut tail = 0.0;
        let mut hk = 1.0;
        for dk in &d[1..] {
            hk *= h;
            tail += dk.norm() * hk;
        }
        if d0 > 2.0 * tail {
            if d0 - tail <= floor {
                return Err(Error::VanishesOnCurve);
            }
            let ga = horner(g, a);
            let gb = horner(g, b);
            total += (gb / ga).arg();
        } else {
            if depth >= MAX_DEPTH || d0 <= floor {
                return Err(Error::VanishesOnCurve);
            }
            // Push the right half first so intervals are consumed left to right.
            stack.push((m, b, depth + 1));
            stack.push((a, m, depth + 1));
        }
    }
    Ok(total)
}

/// Winding number of f∘γ about 0 for a closed curve γ in ℂⁿ.
///
/// Fails with [`Error::VanishesOnCurve`] when |f| is not bounded below by τ
/// on γ. The computation runs in `f64` in both numeric modes; the result is
/// an integer certified by the segment-wise lower bound above.
pub fn winding_number<S: Scalar>(curve: &PolyCurve<S>, f: &CPolynomial<S>, tol: Tolerance) -> Result<i64> {
    if !curve.is_closed() {
        return Err(Error::NotClosed);
    }
    match curve.complex_dim() {
        Some(n) if n == f.nvars() => {}
        _ => {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables on a curve in {:?}",
                f.nvars(),
                curve.space()
            )))
        }
    }
    let fc = f.map_scalar(Scalar::to_f64);
    let max_exp = fc.max_exponents();
    let pts: Vec<Vec<Complex<f64>>> = curve
        .points()
        .iter()
        .map(|p| to_complex(&p.iter().map(Scalar::to_f64).collect::<Vec<_>>()))
        .collect();
    let floor = tol.tau;
    let mut total = 0.0;
    for seg in curve.segments() {
        let start = &pts[seg.index];
        let end = &pts[(seg.index + 1) % pts.len()];
        let delta: Vec<Complex<f64>> = end.iter().zip(start).map(|(b, a)| b - a).collect();
        let g = SegmentPowers::new(start, &delta, &max_exp).compose(&fc);
        total += segment_arg_change(&g, floor)?;
    }
    let turns = total / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > 1e-6 {
        return Err(Error::Postcondition(format!(
            "argument sum {turns} is not an integer number of turns"
        )));
    }
    Ok(rounded as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{unit_roots, Space};
    use crate::scalar::Q;
    use num_traits::One;

    fn ngon(n: usize, center: (f64, f64), r: f64) -> PolyCurve<f64> {
        let pts = unit_roots(n)
            .into_iter()
            .map(|(c, s)| vec![center.0 + r * c, center.1 + r * s])
            .collect();
        PolyCurve::from_points(Space::Complex(1), true, pts).unwrap()
    }

    #[test]
    fn degree_one_winding() {
        let z = CPolynomial::<f64>::variable(1, 0);
        let tol = Tolerance::default();
        assert_eq!(winding_number(&ngon(16, (0.0, 0.0), 1.0), &z, tol).unwrap(), 1);
        assert_eq!(winding_number(&ngon(16, (0.0, 0.0), 1.0).reversed(), &z, tol).unwrap(), -1);
        assert_eq!(winding_number(&ngon(16, (3.0, 0.0), 1.0), &z, tol).unwrap(), 0);
        assert_eq!(winding_number(&ngon(16, (0.0, 0.0), 1.0), &CPolynomial::one(1), tol).unwrap(), 0);
        // z^3 winds three times.
        let z3 = CPolynomial::monomial(vec![3]);
        assert_eq!(winding_number(&ngon(5, (0.0, 0.0), 2.0), &z3, tol).unwrap(), 3);
    }

    #[test]
    fn triangle_winds_once_despite_coarse_sampling() {
        // Each segment sweeps 120 degrees of argument.
        let z = CPolynomial::<f64>::variable(1, 0);
        let c = ngon(3, (0.0, 0.0), 1.0).to_rational();
        assert_eq!(winding_number(&c, &z.map_scalar(Scalar::to_rational), Tolerance::default()).unwrap(), 1);
    }

    #[test]
    fn projection_of_conjugate_circle() {
        let pts = unit_roots(32).into_iter().map(|(c, s)| vec![c, s, c, -s]).collect();
        let c = PolyCurve::from_points(Space::Complex(2), true, pts).unwrap();
        let tol = Tolerance::default();
        assert_eq!(winding_number(&c, &CPolynomial::variable(2, 0), tol).unwrap(), 1);
        assert_eq!(winding_number(&c, &CPolynomial::variable(2, 1), tol).unwrap(), -1);
    }

    #[test]
    fn vanishing_on_curve_is_an_error() {
        let z = CPolynomial::<Q>::variable(1, 0);
        let through_origin = PolyCurve::from_points(
            Space::Complex(1),
            true,
            vec![
                vec![Q::from_i64(-1), Q::from_i64(0)],
                vec![Q::from_i64(1), Q::from_i64(0)],
                vec![Q::from_i64(0), Q::one()],
            ],
        )
        .unwrap();
        assert!(matches!(
            winding_number(&through_origin, &z, Tolerance::default()),
            Err(Error::VanishesOnCurve)
        ));
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let g = vec![Complex::new(1.0, 2.0), Complex::new(-3.0, 0.5), Complex::new(0.0, 1.0)];
        let d = taylor_shift(&g, 0.3);
        for s in [-0.2, 0.0, 0.4] {
            assert!((horner(&d, s) - horner(&g, 0.3 + s)).norm() < 1e-12);
        }
    }
}
