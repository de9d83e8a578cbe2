//! Complex-linear frames that flatten a totally real triangle.
//!
//! Given a ∈ ℂⁿ and ℂ-independent u, w, the frame T: ℂⁿ → ℂ² satisfies
//! T(u) = (1, 1) and T(w) = (i, −i). In the coordinates ζ = T(z − a) the
//! triangle a, a+u, a+w becomes 0, (1,1), (i,−i), which lies in the plane
//! {(ζ, ζ̄)}, and the form α = (T₂(z) − T₂(a)) dT₁(z) pulls back to ζ̄ dζ.
//! Its integral around the triangle is 2i times the area of (0, 1, i): i.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::poly::{CPolynomial, OneForm};
use crate::error::{Error, Result};
use crate::scalar::{abs2, complex_to_json, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct LinearFrame<S: Scalar> {
    /// Rows T₁ and T₂ of the 2×n matrix.
    pub rows: [Vec<Complex<S>>; 2],
    pub base: Vec<Complex<S>>,
    /// The two coordinates carrying the nonzero entries.
    pub pivots: (usize, usize),
}

impl<S: Scalar> LinearFrame<S> {
    /// T(z − base).
    pub fn apply(&self, z: &[Complex<S>]) -> [Complex<S>; 2] {
        let shifted: Vec<Complex<S>> = z
            .iter()
            .zip(&self.base)
            .map(|(x, a)| x.clone() - a.clone())
            .collect();
        [row_dot(&self.rows[0], &shifted), row_dot(&self.rows[1], &shifted)]
    }

    /// T applied to a vector (no base point).
    pub fn apply_linear(&self, v: &[Complex<S>]) -> [Complex<S>; 2] {
        [row_dot(&self.rows[0], v), row_dot(&self.rows[1], v)]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows.iter().map(|r| r.iter().map(complex_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "base": self.base.iter().map(complex_to_json).collect::<Vec<_>>(),
            "pivots": [self.pivots.0, self.pivots.1],
        })
    }
}

fn row_dot<S: Scalar>(row: &[Complex<S>], v: &[Complex<S>]) -> Complex<S> {
    row.iter()
        .zip(v)
        .fold(Complex::zero(), |acc, (r, x)| acc + r.clone() * x.clone())
}

/// The 2×2 minor u_p w_q − u_q w_p.
fn minor<S: Scalar>(u: &[Complex<S>], w: &[Complex<S>], p: usize, q: usize) -> Complex<S> {
    u[p].clone() * w[q].clone() - u[q].clone() * w[p].clone()
}

/// `true` when u and w are ℂ-linearly dependent (every 2×2 minor vanishes exactly).
pub fn complex_dependent<S: Scalar>(u: &[Complex<S>], w: &[Complex<S>]) -> bool {
    let n = u.len();
    (0..n).all(|p| (p + 1..n).all(|q| minor(u, w, p, q).is_zero()))
}

/// Builds the frame and its certificate form for the triangle a, a+u, a+w.
///
/// The underdetermined system is solved on the two coordinates whose minor
/// has the largest modulus (exact comparison), with zeros elsewhere.
pub fn totally_real_frame<S: Scalar>(
    a: &[Complex<S>],
    u: &[Complex<S>],
    w: &[Complex<S>],
) -> Result<(LinearFrame<S>, OneForm<S>)> {
    let n = a.len();
    if u.len() != n || w.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "frame vectors of lengths {}, {}, {}",
            n,
            u.len(),
            w.len()
        )));
    }
    if n < 2 {
        return Err(Error::ComplexDependent);
    }
    let mut best: Option<(usize, usize, Complex<S>, S)> = None;
    for p in 0..n {
        for q in p + 1..n {
            let d = minor(u, w, p, q);
            let size = abs2(&d);
            if best.as_ref().is_none_or(|b| size > b.3) {
                best = Some((p, q, d, size));
            }
        }
    }
    let (p, q, det, size) = best.expect("n >= 2");
    if size.is_zero() {
        return Err(Error::ComplexDependent);
    }
    let one = Complex::<S>::one();
    let i = Complex::new(S::zero(), S::one());
    let targets = [(one.clone(), i.clone()), (one, -i)];
    let rows = targets.map(|(tu, tw)| {
        let mut row = vec![Complex::zero(); n];
        row[p] = (tu.clone() * w[q].clone() - u[q].clone() * tw.clone()) / det.clone();
        row[q] = (u[p].clone() * tw - w[p].clone() * tu) / det.clone();
        row
    });
    // α_j = T₁ⱼ · (Σ_k T₂ₖ z_k − T₂(a)).
    let t2a = row_dot(&rows[1], a);
    let mut affine = CPolynomial::constant(n, -t2a);
    for (k, c) in rows[1].iter().enumerate() {
        if !c.is_zero() {
            affine = affine.add(&CPolynomial::variable(n, k).scale(c));
        }
    }
    let components = rows[0].iter().map(|c| affine.scale(c)).collect();
    let form = OneForm::new(components)?;
    let frame = LinearFrame {
        rows,
        base: a.to_vec(),
        pivots: (p, q),
    };
    Ok((frame, form))
}
