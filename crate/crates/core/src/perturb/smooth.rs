//! Bump perturbation of a curve near a vertex.
//!
//! γ± = γ ± χ·v, where χ is a smooth bump in the parameter supported on
//! (t_p − w, t_p + w) and v is a random direction ℂ-independent of the
//! tangent at p. The loop σ = γ⁺|supp followed by γ⁻|supp reversed lies close
//! to the totally real plane spanned by the tangent and v.

use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{agrees_outside, check_inputs, floor_dyadic, min_q, Ball, BvBound, PerturbDetails, PerturbResult, Side};
use crate::certificates::{certify, complex_dependent, contour_integral, totally_real_frame};
use crate::curve::vector::{add, dist2, scale, sub, to_f64};
use crate::curve::{to_complex, PolyCurve};
use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::scalar::{dyadic, sqrt_upper, Scalar, Tolerance, Q};

const MAX_SHRINK: usize = 40;
const DIRECTIONS_PER_WIDTH: usize = 8;
const MAX_DEPENDENT_DRAWS: usize = 64;
/// Support points per half-width.
const KNOTS: i64 = 8;

/// e·exp(−1/(1−s²)) on |s| < 1, peak value 1 at s = 0.
fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

fn wrap(t: Q) -> Q {
    let one = Q::one();
    let f = t.floor();
    let r = t - f;
    if r >= one {
        Q::zero()
    } else {
        r
    }
}

/// Signed parameter offset t − t_p on the circle, in [−1/2, 1/2).
fn offset(t: &Q, tp: &Q) -> Q {
    let half = Q::ratio(1, 2);
    wrap(t - tp + &half) - half
}

fn random_direction(rng: &mut crate::rng::Rng, real_dim: usize) -> Vec<Q> {
    let raw: Vec<f64> = (0..real_dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    raw.iter().map(|x| dyadic(x / norm, 30)).collect()
}

/// Builds a certified polynomially convex curve within ε of γ in the bv norm
/// by a smooth bump at the first vertex of γ inside B.
pub fn perturb_smooth(
    gamma: &PolyCurve<Q>,
    eps: &Q,
    ball: &Ball<Q>,
    seed: u64,
    tol: Tolerance,
) -> Result<PerturbResult> {
    check_inputs(gamma, eps, ball)?;
    gamma.require_simple(tol)?;
    let ip = gamma
        .points()
        .iter()
        .position(|x| ball.contains(x))
        .ok_or(Error::BallMissesCurve)?;
    let p = gamma.points()[ip].clone();
    let tp = gamma.params()[ip].clone();
    let room = ball.radius.clone() - sqrt_upper(&dist2(&p, &ball.center));
    let amplitude = floor_dyadic(&min_q(eps / Q::from_i64(4), room / Q::from_i64(2)), 40);
    if amplitude <= Q::zero() {
        return Err(Error::ShrinkExhausted("no room for a bump inside B".into()));
    }
    let mut rng = seeded(seed);
    let mut width = Q::ratio(1, 8);
    let mut dependent_draws = 0;
    let mut trials = 0;
    let mut reason = String::from("support leaves B");

    for _ in 0..MAX_SHRINK {
        let knots: Vec<Q> = (-KNOTS..=KNOTS)
            .map(|k| wrap(&tp + &width * Q::ratio(k, KNOTS)))
            .collect();
        let reference = gamma.with_breakpoints(&knots)?;
        let m = reference.len();
        let jp = reference.params().iter().position(|t| *t == tp).expect("p kept");
        let chi: Vec<Q> = reference
            .params()
            .iter()
            .map(|t| {
                let s = (offset(t, &tp) / &width).to_f64();
                dyadic(amplitude.to_f64() * bump(s), 40)
            })
            .collect();
        let support: Vec<usize> = (0..m).filter(|&j| !chi[j].is_zero()).collect();
        let in_ball = |x: &[Q]| ball.contains(x);
        // Segments touching the support move, so their far ends must lie in B too.
        let closure_in_ball = support
            .iter()
            .flat_map(|&j| [(j + m - 1) % m, j, (j + 1) % m])
            .all(|j| in_ball(&reference.points()[j]));
        if !closure_in_ball {
            width /= Q::from_i64(2);
            continue;
        }
        let tangent = to_complex(&sub(
            &reference.points()[(jp + 1) % m],
            &reference.points()[(jp + m - 1) % m],
        ));
        let zp = to_complex(&p);

        for _ in 0..DIRECTIONS_PER_WIDTH {
            trials += 1;
            let v = random_direction(&mut rng, gamma.real_dim());
            let vc = to_complex(&v);
            if complex_dependent(&tangent, &vc) {
                dependent_draws += 1;
                if dependent_draws >= MAX_DEPENDENT_DRAWS {
                    return Err(Error::RetriesExhausted {
                        attempts: dependent_draws,
                        detail: "every direction was complex-dependent on the tangent".into(),
                    });
                }
                continue;
            }
            let displaced = |sign: i64| -> Vec<Vec<Q>> {
                reference
                    .points()
                    .iter()
                    .zip(&chi)
                    .map(|(x, c)| {
                        if c.is_zero() {
                            x.clone()
                        } else {
                            add(x, &scale(&v, &(c * Q::from_i64(sign))))
                        }
                    })
                    .collect()
            };
            let (pp, mp) = (displaced(1), displaced(-1));
            if !support.iter().all(|&j| in_ball(&pp[j]) && in_ball(&mp[j])) {
                reason = "displaced points leave B".into();
                break;
            }
            let plus = PolyCurve::new(gamma.space(), true, reference.params().to_vec(), pp)?;
            let minus = PolyCurve::new(gamma.space(), true, reference.params().to_vec(), mp)?;

            let (_, form) = totally_real_frame(&zp, &tangent, &vc)?;
            let sigma = sigma_loop(&plus, &minus, &support)?;
            let sigma_integral = contour_integral(&sigma, &form)?;
            if sigma_integral.is_zero()
                || crate::scalar::complex_is_negligible(&sigma_integral, tol, 1.0)
            {
                reason = "loop integral vanishes".into();
                continue;
            }
            if !plus.is_simple(tol)?.simple || !minus.is_simple(tol)?.simple {
                reason = "a displaced curve is not simple".into();
                continue;
            }
            let plus_integral = contour_integral(&plus, &form)?;
            let minus_integral = contour_integral(&minus, &form)?;
            if &plus_integral - &minus_integral != sigma_integral {
                return Err(Error::Postcondition("difference identity failed".into()));
            }
            let (side, curve) = if !plus_integral.is_zero() {
                (Side::Plus, plus)
            } else {
                (Side::Minus, minus)
            };
            let certificate = certify(&curve, &form, tol)?;
            if !certificate.verdict.is_certified() {
                return Err(Error::Postcondition("chosen side is not certified".into()));
            }

            let unchanged = (0..m)
                .filter(|j| chi[*j].is_zero())
                .all(|j| curve.points()[j] == reference.points()[j]);
            let sup2 = reference.sup_distance2(&curve)?;
            let (sup_upper, var_upper) = reference.bv_distance_upper(&curve)?;
            let bound = BvBound {
                sup_upper,
                var_upper,
                sup_allowed: eps.clone(),
                var_allowed: eps.clone(),
                total_allowed: eps.clone(),
            };
            if !unchanged
                || sup2 >= eps * eps
                || bound.total_upper() >= *eps
                || !agrees_outside(&reference, &curve, ball)
            {
                return Err(Error::Postcondition(format!(
                    "bump perturbation out of bounds (bv upper {})",
                    bound.total_upper().to_f64()
                )));
            }
            let max_divided_difference = divided_difference(&reference, &curve);
            let support_range = (
                wrap(&tp - &width),
                wrap(&tp + &width),
            );
            return Ok(PerturbResult {
                bv_distance: reference.bv_distance(&curve)?,
                curve,
                side,
                certificate,
                bv_bound: bound,
                sigma_integral,
                plus_integral,
                minus_integral,
                input_digest: gamma.digest(),
                seed,
                details: PerturbDetails::Smooth {
                    p: p.clone(),
                    direction: v,
                    amplitude: amplitude.clone(),
                    support: support_range,
                    sup_distance_upper: sqrt_upper(&sup2),
                    max_divided_difference,
                    direction_trials: trials,
                },
            });
        }
        width /= Q::from_i64(2);
    }
    Err(Error::ShrinkExhausted(format!(
        "no admissible bump after {MAX_SHRINK} halvings of its width (last: {reason})"
    )))
}

/// γ⁺ over the support (with one vertex of slack on each side) followed by
/// γ⁻ back over the same vertices.
fn sigma_loop(plus: &PolyCurve<Q>, minus: &PolyCurve<Q>, support: &[usize]) -> Result<PolyCurve<Q>> {
    let m = plus.len();
    // The support is a cyclic run of indices; find where it starts.
    let first = *support
        .iter()
        .find(|&&j| !support.contains(&((j + m - 1) % m)))
        .ok_or_else(|| Error::Precondition("bump support covers the curve".into()))?;
    let start = (first + m - 1) % m;
    let run: Vec<usize> = (0..support.len() + 2).map(|k| (start + k) % m).collect();
    let mut pts: Vec<Vec<Q>> = run.iter().map(|&j| plus.points()[j].clone()).collect();
    // The end vertices are shared, so skip them on the way back.
    pts.extend(run[1..run.len() - 1].iter().rev().map(|&j| minus.points()[j].clone()));
    PolyCurve::from_points(plus.space(), true, pts)
}

/// max |Δ(γ_a − γ)| / Δt over consecutive vertices.
fn divided_difference(reference: &PolyCurve<Q>, out: &PolyCurve<Q>) -> f64 {
    reference
        .segments()
        .zip(out.segments())
        .map(|(r, o)| {
            let d0 = sub(o.start, r.start);
            let d1 = sub(o.end, r.end);
            let dt = (o.t1.clone() - o.t0.clone()).to_f64();
            to_f64(&sub(&d1, &d0)).iter().map(|x| x * x).sum::<f64>().sqrt() / dt
        })
        .fold(0.0, f64::max)
}
