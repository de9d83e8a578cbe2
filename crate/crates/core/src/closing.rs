//! Closing an arc into a simple closed curve inside a tube around it, and
//! enlarging an arc to a certified polynomially convex closed curve.
//!
//! The arc λ from p to q is closed up by a cap [q, q + d], the reversed
//! translate λ + d, and a cap [p + d, p], for a seeded direction d of length
//! r/2. In real dimension ≥ 4 the translates λ and λ + d are disjoint for
//! generic d, since the difference set λ − λ is two-dimensional. When p and q
//! are already within r/4 of each other a two-segment connector is used.

use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};

use crate::certificates::Certificate;
use crate::curve::vector::{add, dist2, lerp, point_segment_dist2, scale};
use crate::curve::{AnyCurve, PolyCurve};
use crate::error::{Error, Result};
use crate::perturb::{floor_dyadic, perturb_rectifiable, Ball, PerturbResult};
use crate::rng::seeded;
use crate::scalar::{dyadic, sqrt_lower, sqrt_upper, Scalar, Tolerance, Q};

const MAX_TRIES: usize = 64;
/// Midpoint refinement depth of the tube membership test.
const MEMBERSHIP_DEPTH: u32 = 3;

/// Open tubular neighborhood {x : dist(x, core) < radius} of a polyline.
#[derive(Clone, Debug, PartialEq)]
pub struct Tube {
    pub core: PolyCurve<Q>,
    pub radius: Q,
}

impl Tube {
    pub fn new(core: PolyCurve<Q>, radius: Q) -> Result<Self> {
        if radius <= Q::zero() {
            return Err(Error::Malformed("tube radius must be positive".into()));
        }
        Ok(Tube { core, radius })
    }

    /// Squared distance from x to the core polyline.
    pub fn dist2(&self, x: &[Q]) -> Q {
        self.core
            .segments()
            .map(|s| point_segment_dist2(x, s.start, s.end))
            .reduce(|a, b| if b < a { b } else { a })
            .expect("core has a segment")
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.dist2(x) < &self.radius * &self.radius
    }

    /// Membership of every breakpoint of `curve` and of the dyadic points
    /// j/8 along each of its segments.
    pub fn contains_curve(&self, curve: &PolyCurve<Q>) -> bool {
        let steps = 1i64 << MEMBERSHIP_DEPTH;
        curve.segments().all(|s| {
            (0..steps).all(|j| self.contains(&lerp(s.start, s.end, &Q::ratio(j, steps))))
        }) && curve.points().iter().all(|x| self.contains(x))
    }

    pub fn to_json(&self) -> Value {
        json!({ "core": self.core.to_json(), "radius": self.radius.to_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let core = v
            .get("core")
            .ok_or_else(|| Error::Malformed("tube: missing `core`".into()))
            .and_then(AnyCurve::from_json)?
            .into_rational();
        let radius = v
            .get("radius")
            .ok_or_else(|| Error::Malformed("tube: missing `radius`".into()))
            .and_then(|r| Q::from_json(r).map_err(|e| Error::Malformed(format!("tube.radius: {e}"))))?;
        Self::new(core, radius)
    }
}

fn check_arc(lambda: &PolyCurve<Q>, omega: &Tube, tol: Tolerance) -> Result<()> {
    if lambda.is_closed() {
        return Err(Error::NotOpen);
    }
    if lambda.real_dim() < 4 {
        return Err(Error::Precondition(format!(
            "closing needs real dimension >= 4, got {}",
            lambda.real_dim()
        )));
    }
    if omega.core.real_dim() != lambda.real_dim() {
        return Err(Error::DimensionMismatch("tube and arc dimensions differ".into()));
    }
    lambda.require_simple(tol)?;
    if !omega.contains_curve(lambda) {
        return Err(Error::Precondition("the arc is not inside the tube".into()));
    }
    Ok(())
}

/// Gaussian direction scaled to length ≈ `len`, rounded to 2^-48.
fn random_vector(rng: &mut crate::rng::Rng, dim: usize, len: f64) -> Vec<Q> {
    let u: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    u.iter().map(|x| dyadic(len * x / norm, 48)).collect()
}

/// A simple closed curve inside Ω whose first |λ| vertices are λ.
pub fn close_arc(lambda: &PolyCurve<Q>, omega: &Tube, seed: u64, tol: Tolerance) -> Result<PolyCurve<Q>> {
    check_arc(lambda, omega, tol)?;
    let pts = lambda.points();
    let (p, q) = (&pts[0], &pts[pts.len() - 1]);
    let r = omega.radius.to_f64();
    if dyadic(r / 8.0, 48).is_zero() {
        return Err(Error::Precondition("tube radius is below 2^-45".into()));
    }
    let dim = lambda.real_dim();
    let mut rng = seeded(seed);
    let short = dist2(p, q) * Q::from_i64(16) < &omega.radius * &omega.radius;
    let mut last = String::from("no candidate tried");
    for trial in 0..MAX_TRIES {
        let added: Vec<Vec<Q>> = if short {
            // q → m → p with m near the midpoint of the chord.
            let mid = scale(&add(p, q), &Q::ratio(1, 2));
            let offset = if trial == 0 {
                vec![Q::zero(); dim]
            } else {
                random_vector(&mut rng, dim, r / 8.0)
            };
            vec![add(&mid, &offset)]
        } else {
            let d = random_vector(&mut rng, dim, r / 2.0);
            pts.iter().rev().map(|x| add(x, &d)).collect()
        };
        let all: Vec<Vec<Q>> = pts.iter().cloned().chain(added).collect();
        let closed = match PolyCurve::from_points(lambda.space(), true, all) {
            Ok(c) => c,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        if closed.zero_length_segment().is_some() {
            last = "zero-length connector".into();
            continue;
        }
        if !closed.is_simple(tol)?.simple {
            last = "connector meets the arc".into();
            continue;
        }
        if !omega.contains_curve(&closed) {
            last = "connector leaves the tube".into();
            continue;
        }
        return Ok(closed);
    }
    Err(Error::RetriesExhausted {
        attempts: MAX_TRIES,
        detail: last,
    })
}

/// Output of [`contain_in_pc_curve`].
#[derive(Clone, Debug, PartialEq)]
pub struct Containment {
    pub curve: PolyCurve<Q>,
    pub certificate: Certificate<Q>,
    /// The closed curve before perturbation.
    pub closed: PolyCurve<Q>,
    pub ball: Ball<Q>,
    pub perturbation: PerturbResult,
}

impl Containment {
    pub fn to_json(&self) -> Value {
        json!({
            "curve": self.curve.to_json(),
            "certificate": self.certificate.to_json(),
            "closed": self.closed.to_json(),
            "ball": self.ball.to_json(),
            "perturbation": self.perturbation.to_json(),
        })
    }
}

/// Every segment of λ is a segment of γ, traversed in the same direction.
pub fn contains_subpolyline(gamma: &PolyCurve<Q>, lambda: &PolyCurve<Q>) -> bool {
    let segs: std::collections::HashSet<(&[Q], &[Q])> =
        gamma.segments().map(|s| (s.start, s.end)).collect();
    lambda
        .segments()
        .all(|s| segs.contains(&(s.start, s.end)))
}

/// Closes λ inside Ω, then perturbs the closed curve inside a ball that
/// misses λ. The result is a certified polynomially convex simple closed
/// curve in Ω containing λ.
pub fn contain_in_pc_curve(
    lambda: &PolyCurve<Q>,
    omega: &Tube,
    eps: &Q,
    seed: u64,
    tol: Tolerance,
) -> Result<Containment> {
    let closed = close_arc(lambda, omega, seed, tol)?;
    let ball = connector_ball(&closed, lambda, omega)?;
    let perturbation = perturb_rectifiable(&closed, eps, &ball, seed, tol)?;
    let curve = perturbation.curve.clone();
    if !contains_subpolyline(&curve, lambda) {
        return Err(Error::Postcondition("the arc is not a sub-polyline of the output".into()));
    }
    if !omega.contains_curve(&curve) {
        return Err(Error::Postcondition("the output leaves the tube".into()));
    }
    curve.require_simple(tol)?;
    Ok(Containment {
        certificate: perturbation.certificate.clone(),
        curve,
        closed,
        ball,
        perturbation,
    })
}

/// The largest admissible ball centered at an added vertex: it misses λ and
/// lies inside Ω. Radii are dyadic lower bounds at half the clearance.
fn connector_ball(closed: &PolyCurve<Q>, lambda: &PolyCurve<Q>, omega: &Tube) -> Result<Ball<Q>> {
    let mut best: Option<Ball<Q>> = None;
    for x in &closed.points()[lambda.len()..] {
        let to_arc = lambda
            .segments()
            .map(|s| point_segment_dist2(x, s.start, s.end))
            .reduce(|a, b| if b < a { b } else { a })
            .expect("arc has a segment");
        let to_wall = &omega.radius - sqrt_upper(&omega.dist2(x));
        let clearance = {
            let a = sqrt_lower(&to_arc);
            if a < to_wall {
                a
            } else {
                to_wall
            }
        };
        let radius = floor_dyadic(&(clearance / Q::from_i64(2)), 48);
        if radius > Q::zero() && best.as_ref().is_none_or(|b| radius > b.radius) {
            best = Some(Ball::new(x.clone(), radius)?);
        }
    }
    best.ok_or_else(|| Error::Precondition("no admissible ball between the arc and the tube wall".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Space;

    fn segment_c2() -> PolyCurve<Q> {
        let pts = (0..=4)
            .map(|j| vec![Q::ratio(j, 4), Q::zero(), Q::ratio(j, 8), Q::zero()])
            .collect();
        PolyCurve::from_points(Space::Complex(2), false, pts).unwrap()
    }

    #[test]
    fn tube_membership() {
        let tube = Tube::new(segment_c2(), Q::ratio(1, 5)).unwrap();
        assert!(tube.contains(&[Q::ratio(1, 2), Q::ratio(1, 10), Q::ratio(1, 4), Q::zero()]));
        assert!(!tube.contains(&[Q::ratio(1, 2), Q::ratio(1, 5), Q::ratio(1, 4), Q::zero()]));
        assert_eq!(Tube::from_json(&tube.to_json()).unwrap(), tube);
    }

    #[test]
    fn segment_closes_to_a_stadium() {
        let lambda = segment_c2();
        let tube = Tube::new(lambda.clone(), Q::ratio(1, 5)).unwrap();
        let closed = close_arc(&lambda, &tube, 3, Tolerance::default()).unwrap();
        assert!(closed.is_simple(Tolerance::default()).unwrap().simple);
        assert_eq!(&closed.points()[..lambda.len()], lambda.points());
        assert!(contains_subpolyline(&closed, &lambda));
        assert!(tube.contains_curve(&closed));
        assert_eq!(closed.len(), 2 * lambda.len());
    }

    #[test]
    fn short_gap_uses_a_connector() {
        let pts = vec![
            vec![Q::zero(); 4],
            vec![Q::ratio(1, 2), Q::ratio(1, 2), Q::zero(), Q::zero()],
            vec![Q::zero(), Q::ratio(1, 2), Q::ratio(1, 2), Q::zero()],
            vec![Q::ratio(1, 100), Q::zero(), Q::zero(), Q::ratio(1, 100)],
        ];
        let lambda = PolyCurve::from_points(Space::Complex(2), false, pts).unwrap();
        let tube = Tube::new(lambda.clone(), Q::ratio(1, 5)).unwrap();
        let closed = close_arc(&lambda, &tube, 0, Tolerance::default()).unwrap();
        assert_eq!(closed.len(), lambda.len() + 1);
        assert!(closed.is_simple(Tolerance::default()).unwrap().simple);
    }

    #[test]
    fn rejects_planar_and_closed_input() {
        let planar = PolyCurve::from_points(Space::Complex(1), false, vec![vec![Q::zero(); 2], vec![Q::ratio(1, 1), Q::zero()]]).unwrap();
        let tube = Tube::new(planar.clone(), Q::ratio(1, 5)).unwrap();
        assert!(matches!(close_arc(&planar, &tube, 0, Tolerance::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn segment_is_contained_in_a_certified_curve() {
        let lambda = segment_c2();
        let tube = Tube::new(lambda.clone(), Q::ratio(1, 5)).unwrap();
        let out = contain_in_pc_curve(&lambda, &tube, &Q::ratio(1, 20), 5, Tolerance::default()).unwrap();
        assert!(out.certificate.verdict.is_certified());
        assert!(contains_subpolyline(&out.curve, &lambda));
        assert!(tube.contains_curve(&out.curve));
        let again = crate::certificates::contour_integral(&out.curve, &out.certificate.form).unwrap();
        assert_eq!(again, out.certificate.integral.algebraic);
        assert!(!again.is_zero());
    }
}
