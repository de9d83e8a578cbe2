//! Local perturbations that make a simple closed curve certifiably
//! polynomially convex.
//!
//! Both variants build two candidate curves γ⁺ and γ⁻ that agree with γ
//! outside a small ball and differ from each other by a small closed curve σ
//! lying in a totally real plane. A linear one-form α with ∫_σ α ≠ 0 then
//! satisfies ∫_{γ⁺} α − ∫_{γ⁻} α = ∫_σ α, so one of the two candidates has a
//! nonzero integral and is certified. Everything runs in exact arithmetic.

mod rectifiable;
mod smooth;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::Zero;
use serde_json::{json, Value};

pub use rectifiable::perturb_rectifiable;
pub use smooth::perturb_smooth;

use crate::certificates::Certificate;
use crate::curve::vector::dist2;
use crate::curve::PolyCurve;
use crate::error::{Error, Result};
use crate::scalar::{complex_to_json, Scalar, Q};

/// Open Euclidean ball in ℂⁿ ≅ ℝ²ⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball<S: Scalar> {
    pub center: Vec<S>,
    pub radius: S,
}

impl<S: Scalar> Ball<S> {
    pub fn new(center: Vec<S>, radius: S) -> Result<Self> {
        if radius <= S::zero() {
            return Err(Error::Malformed("ball radius must be positive".into()));
        }
        Ok(Ball { center, radius })
    }

    /// Exact strict membership |x − center| < radius.
    pub fn contains(&self, x: &[S]) -> bool {
        dist2(x, &self.center) < self.radius.clone() * self.radius.clone()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "center": self.center.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "radius": self.radius.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let center = v
            .get("center")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("ball: missing `center`".into()))?
            .iter()
            .enumerate()
            .map(|(k, x)| S::from_json(x).map_err(|e| Error::Malformed(format!("ball.center[{k}]: {e}"))))
            .collect::<Result<Vec<S>>>()?;
        let radius = v
            .get("radius")
            .ok_or_else(|| Error::Malformed("ball: missing `radius`".into()))
            .and_then(|r| S::from_json(r).map_err(|e| Error::Malformed(format!("ball.radius: {e}"))))?;
        Self::new(center, radius)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        }
    }
}

/// Certified upper bounds on ‖γ − γ_a‖_bv and the limits they were checked against.
#[derive(Clone, Debug, PartialEq)]
pub struct BvBound {
    pub sup_upper: Q,
    pub var_upper: Q,
    pub sup_allowed: Q,
    pub var_allowed: Q,
    pub total_allowed: Q,
}

impl BvBound {
    pub fn total_upper(&self) -> Q {
        &self.sup_upper + &self.var_upper
    }

    fn to_json(&self) -> Value {
        json!({
            "sup_upper": self.sup_upper.to_json(),
            "var_upper": self.var_upper.to_json(),
            "sup_allowed": self.sup_allowed.to_json(),
            "var_allowed": self.var_allowed.to_json(),
            "total_allowed": self.total_allowed.to_json(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PerturbDetails {
    Rectifiable {
        ball_p: Ball<Q>,
        a: Vec<Q>,
        b: Vec<Q>,
        c: Vec<Q>,
        lambda_length_upper: Q,
        shrink_steps: usize,
    },
    Smooth {
        p: Vec<Q>,
        direction: Vec<Q>,
        amplitude: Q,
        support: (Q, Q),
        sup_distance_upper: Q,
        max_divided_difference: f64,
        direction_trials: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbResult {
    pub curve: PolyCurve<Q>,
    pub side: Side,
    pub certificate: Certificate<Q>,
    pub bv_distance: f64,
    pub bv_bound: BvBound,
    pub sigma_integral: Complex<Q>,
    pub plus_integral: Complex<Q>,
    pub minus_integral: Complex<Q>,
    pub input_digest: String,
    pub seed: u64,
    pub details: PerturbDetails,
}

fn points_json(p: &[Q]) -> Value {
    Value::Array(p.iter().map(Scalar::to_json).collect())
}

impl PerturbResult {
    pub fn to_json(&self) -> Value {
        let details = match &self.details {
            PerturbDetails::Rectifiable {
                ball_p,
                a,
                b,
                c,
                lambda_length_upper,
                shrink_steps,
            } => json!({
                "variant": "rectifiable",
                "ball_p": ball_p.to_json(),
                "a": points_json(a),
                "b": points_json(b),
                "c": points_json(c),
                "lambda_length_upper": lambda_length_upper.to_json(),
                "shrink_steps": shrink_steps,
            }),
            PerturbDetails::Smooth {
                p,
                direction,
                amplitude,
                support,
                sup_distance_upper,
                max_divided_difference,
                direction_trials,
            } => json!({
                "variant": "smooth",
                "p": points_json(p),
                "direction": points_json(direction),
                "amplitude": amplitude.to_json(),
                "support": [support.0.to_json(), support.1.to_json()],
                "sup_distance_upper": sup_distance_upper.to_json(),
                "max_divided_difference": max_divided_difference,
                "direction_trials": direction_trials,
            }),
        };
        json!({
            "curve": self.curve.to_json(),
            "side": self.side.as_str(),
            "certificate": self.certificate.to_json(),
            "bv_distance": self.bv_distance,
            "bv_bound": self.bv_bound.to_json(),
            "sigma_integral": complex_to_json(&self.sigma_integral),
            "plus_integral": complex_to_json(&self.plus_integral),
            "minus_integral": complex_to_json(&self.minus_integral),
            "input_digest": self.input_digest,
            "seed": self.seed,
            "details": details,
        })
    }
}

/// Largest multiple of 2^-bits not exceeding q.
pub fn floor_dyadic(q: &Q, bits: u32) -> Q {
    let scale = Q::from_integer(BigInt::from(1) << bits as usize);
    (q * &scale).floor() / scale
}

pub(crate) fn min_q(a: Q, b: Q) -> Q {
    if a < b {
        a
    } else {
        b
    }
}

/// Common preconditions of both variants.
fn check_inputs(gamma: &PolyCurve<Q>, eps: &Q, ball: &Ball<Q>) -> Result<usize> {
    if !gamma.is_closed() {
        return Err(Error::NotClosed);
    }
    let n = gamma
        .complex_dim()
        .ok_or_else(|| Error::Precondition("curve must live in C^n".into()))?;
    if n < 2 {
        return Err(Error::Precondition("perturbation needs n >= 2".into()));
    }
    if *eps <= Q::zero() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    if ball.center.len() != gamma.real_dim() {
        return Err(Error::DimensionMismatch(format!(
            "ball center has {} coordinates, curve has {}",
            ball.center.len(),
            gamma.real_dim()
        )));
    }
    Ok(n)
}

/// Segments (as endpoint pairs) of `a` missing from `b`.
fn segment_difference(a: &PolyCurve<Q>, b: &PolyCurve<Q>) -> Vec<(Vec<Q>, Vec<Q>)> {
    let key = |s: &[Q], e: &[Q]| (s.to_vec(), e.to_vec());
    let set_b: std::collections::HashSet<(Vec<Q>, Vec<Q>)> =
        b.segments().map(|s| key(s.start, s.end)).collect();
    a.segments()
        .map(|s| key(s.start, s.end))
        .filter(|k| !set_b.contains(k))
        .collect()
}

/// Exact check of γ \ B = γ_a \ B: every segment present in only one of the
/// two curves lies inside the open (convex) ball B.
pub(crate) fn agrees_outside(gamma: &PolyCurve<Q>, out: &PolyCurve<Q>, ball: &Ball<Q>) -> bool {
    segment_difference(gamma, out)
        .into_iter()
        .chain(segment_difference(out, gamma))
        .all(|(s, e)| ball.contains(&s) && ball.contains(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_membership_is_strict() {
        let b = Ball::new(vec![Q::zero(), Q::zero()], Q::from_i64(1)).unwrap();
        assert!(b.contains(&[Q::ratio(1, 2), Q::ratio(1, 2)]));
        assert!(!b.contains(&[Q::from_i64(1), Q::zero()]));
        assert!(Ball::new(vec![Q::zero()], Q::zero()).is_err());
        assert_eq!(Ball::<Q>::from_json(&b.to_json()).unwrap(), b);
    }

    #[test]
    fn floor_dyadic_rounds_down() {
        assert_eq!(floor_dyadic(&Q::ratio(1, 3), 2), Q::ratio(1, 4));
        assert_eq!(floor_dyadic(&Q::ratio(-1, 3), 2), Q::ratio(-1, 2));
        assert_eq!(floor_dyadic(&Q::ratio(3, 4), 2), Q::ratio(3, 4));
    }
}
