//! The chord-and-triangle perturbation of a rectifiable simple closed curve.
//!
//! A small ball B_p about a point p of γ cuts γ into a short arc λ through p
//! and the long arc Λ with end points a, b near the sphere. γ⁺ replaces λ by
//! the chord [a, b]; γ⁻ replaces it by [a, c] ∪ [c, b] for a point c off the
//! complex line through a and b. The triangle σ = ∂(a, b, c) is totally real.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;

use super::{agrees_outside, check_inputs, floor_dyadic, min_q, Ball, BvBound, PerturbDetails, PerturbResult, Side};
use crate::certificates::{certify, contour_integral, totally_real_frame, OneForm};
use crate::curve::vector::{add, closest_param, dist2, lerp, point_segment_dist2, scale, sub};
use crate::curve::{from_complex, to_complex, PolyCurve};
use crate::error::{Error, Result};
use crate::rng::{seeded, Rng as SeededRng};
use crate::scalar::{dyadic, sqrt_upper, Scalar, Tolerance, Q};

const MAX_SHRINK: usize = 60;
const C_TRIES: usize = 64;
const BISECTION_STEPS: usize = 48;

enum Attempt {
    Done(Box<PerturbResult>),
    Shrink(String),
}

/// First vertex of γ inside B, or else the point of the first segment that
/// meets B closest to its center. Returns γ refined to contain p, and p's index.
fn locate_p(gamma: &PolyCurve<Q>, ball: &Ball<Q>) -> Result<(PolyCurve<Q>, usize)> {
    for seg in gamma.segments() {
        if ball.contains(seg.start) {
            return Ok((gamma.clone(), seg.index));
        }
        let s = closest_param(seg.start, seg.end, &ball.center);
        let x = lerp(seg.start, seg.end, &s);
        if ball.contains(&x) {
            if s.is_one() {
                return Ok((gamma.clone(), (seg.index + 1) % gamma.len()));
            }
            let mut t = seg.t0.clone() + s * (seg.t1.clone() - seg.t0.clone());
            if t >= Q::one() {
                t -= Q::one();
            }
            let refined = gamma.refine(std::slice::from_ref(&t))?;
            let idx = refined
                .params()
                .iter()
                .position(|x| *x == t)
                .expect("inserted parameter");
            return Ok((refined, idx));
        }
    }
    Err(Error::BallMissesCurve)
}

/// Parameter s ∈ (0, 1) with `inside + s (outside − inside)` strictly inside
/// the ball and within 2^-48 (in s) of the sphere.
fn crossing(inside: &[Q], outside: &[Q], p: &[Q], rho2: &Q) -> Q {
    let mut lo = Q::zero();
    let mut hi = Q::one();
    let half = Q::ratio(1, 2);
    for _ in 0..BISECTION_STEPS {
        let mid = (&lo + &hi) * &half;
        if dist2(&lerp(inside, outside, &mid), p) < *rho2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn wrap(t: Q) -> Q {
    if t >= Q::one() {
        t - Q::one()
    } else {
        t
    }
}

/// A vector Hermitian-orthogonal (hence ℂ-independent) to u ≠ 0.
fn hermitian_normal(u: &[Complex<Q>]) -> Vec<Complex<Q>> {
    let mut idx: Vec<usize> = (0..u.len()).collect();
    idx.sort_by(|&i, &j| {
        crate::scalar::abs2(&u[j])
            .partial_cmp(&crate::scalar::abs2(&u[i]))
            .expect("comparable")
    });
    let (p, q) = (idx[0], idx[1]);
    let mut w = vec![Complex::zero(); u.len()];
    w[p] = -u[q].conj();
    w[q] = u[p].conj();
    w
}

/// Sorted (param, point) pairs into a closed curve.
fn assemble(gamma: &PolyCurve<Q>, mut pairs: Vec<(Q, Vec<Q>)>) -> Result<PolyCurve<Q>> {
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("comparable"));
    let (params, points) = pairs.into_iter().unzip();
    PolyCurve::new(gamma.space(), true, params, points)
}

/// Builds a certified polynomially convex curve within ε of γ in the bv
/// norm that agrees with γ outside the ball B.
pub fn perturb_rectifiable(
    gamma: &PolyCurve<Q>,
    eps: &Q,
    ball: &Ball<Q>,
    seed: u64,
    tol: Tolerance,
) -> Result<PerturbResult> {
    check_inputs(gamma, eps, ball)?;
    gamma.require_simple(tol)?;
    let (gp, ip) = locate_p(gamma, ball)?;
    let p = gp.points()[ip].clone();
    let room = ball.radius.clone() - sqrt_upper(&dist2(&p, &ball.center));
    if room <= Q::zero() {
        return Err(Error::ShrinkExhausted("p is too close to the boundary of B".into()));
    }
    let mut rho = min_q(eps / Q::from_i64(8), room) / Q::from_i64(2);
    let floored = floor_dyadic(&rho, 48);
    if floored > Q::zero() {
        rho = floored;
    }
    let mut rng = seeded(seed);
    let mut reason = String::new();
    for step in 0..MAX_SHRINK {
        match attempt(gamma, &gp, ip, &p, &rho, eps, ball, &mut rng, tol, step)? {
            Attempt::Done(result) => return Ok(PerturbResult { seed, ..*result }),
            Attempt::Shrink(why) => reason = why,
        }
        rho /= Q::from_i64(2);
    }
    Err(Error::ShrinkExhausted(format!(
        "no admissible B_p after {MAX_SHRINK} halvings (last: {reason})"
    )))
}

#[allow(clippy::too_many_arguments)]
fn attempt(
    gamma: &PolyCurve<Q>,
    gp: &PolyCurve<Q>,
    ip: usize,
    p: &[Q],
    rho: &Q,
    eps: &Q,
    ball: &Ball<Q>,
    rng: &mut SeededRng,
    tol: Tolerance,
    step: usize,
) -> Result<Attempt> {
    let m = gp.len();
    let pts = gp.points();
    let rho2 = rho * rho;
    let inside = |x: &[Q]| dist2(x, p) < rho2;

    // Walk forward and backward from p until the curve leaves B_p.
    let mut fwd = ip;
    let mut steps = 0;
    while inside(&pts[(fwd + 1) % m]) {
        fwd = (fwd + 1) % m;
        steps += 1;
        if steps >= m {
            return Ok(Attempt::Shrink("curve inside B_p".into()));
        }
    }
    let mut bwd = ip;
    while inside(&pts[(bwd + m - 1) % m]) {
        bwd = (bwd + m - 1) % m;
        steps += 1;
        if steps >= m - 1 {
            return Ok(Attempt::Shrink("arc through p covers the curve".into()));
        }
    }
    let fwd_out = (fwd + 1) % m;
    let bwd_out = (bwd + m - 1) % m;

    // b on the exit segment, a on the entry segment.
    let s_b = crossing(&pts[fwd], &pts[fwd_out], p, &rho2);
    let b = lerp(&pts[fwd], &pts[fwd_out], &s_b);
    let seg_b = gp.segment(fwd);
    let t_b = wrap(seg_b.t0.clone() + s_b * (seg_b.t1.clone() - seg_b.t0.clone()));
    let s_a = crossing(&pts[bwd], &pts[bwd_out], p, &rho2);
    let a = lerp(&pts[bwd], &pts[bwd_out], &s_a);
    let seg_a = gp.segment(bwd_out);
    let t_a = wrap(seg_a.t0.clone() + (Q::one() - s_a) * (seg_a.t1.clone() - seg_a.t0.clone()));
    if a == b {
        return Ok(Attempt::Shrink("a and b coincide".into()));
    }

    let reference = gp.with_breakpoints(&[t_a.clone(), t_b.clone()])?;
    let mr = reference.len();
    let ia = reference.params().iter().position(|t| *t == t_a).expect("a inserted");
    let ib = reference.params().iter().position(|t| *t == t_b).expect("b inserted");

    // λ runs forward from a to b; its length must stay below ε/8.
    let mut lambda_len = Q::zero();
    let mut j = ia;
    while j != ib {
        let k = (j + 1) % mr;
        lambda_len += sqrt_upper(&dist2(&reference.points()[j], &reference.points()[k]));
        j = k;
    }
    if lambda_len >= eps / Q::from_i64(8) {
        return Ok(Attempt::Shrink("arc through B_p is longer than eps/8".into()));
    }

    // Λ runs forward from b to a; apart from its end segments it avoids B_p.
    let mut lambda_big = Vec::new();
    let mut j = ib;
    loop {
        lambda_big.push(j);
        if j == ia {
            break;
        }
        j = (j + 1) % mr;
    }
    for w in lambda_big.windows(2).skip(1).take(lambda_big.len().saturating_sub(3)) {
        let (s, e) = (&reference.points()[w[0]], &reference.points()[w[1]]);
        if point_segment_dist2(p, s, e) < rho2 {
            return Ok(Attempt::Shrink("curve re-enters B_p".into()));
        }
    }

    let base: Vec<(Q, Vec<Q>)> = lambda_big
        .iter()
        .map(|&j| (reference.params()[j].clone(), reference.points()[j].clone()))
        .collect();
    let plus = assemble(gp, base.clone())?;
    if !plus.is_simple(tol)?.simple {
        return Ok(Attempt::Shrink("chord meets the rest of the curve".into()));
    }

    let t_c = {
        let end = if t_b > t_a { t_b.clone() } else { t_b.clone() + Q::one() };
        wrap((t_a.clone() + end) / Q::from_i64(2))
    };
    let za = to_complex(&a);
    let u = to_complex(&sub(&b, &a));
    let normal = hermitian_normal(&u);
    let normal_f: f64 = normal.iter().map(|z| crate::scalar::abs2(z).to_f64()).sum::<f64>().sqrt();
    let mid = scale(&add(&a, &b), &Q::ratio(1, 2));

    for trial in 0..C_TRIES {
        // First trial: displacement of length ρ/2 along the normal; then seeded rotations and scales.
        let (theta, frac) = if trial == 0 {
            (0.0, 1.0)
        } else {
            (rng.random::<f64>() * std::f64::consts::TAU, 0.25 + 0.75 * rng.random::<f64>())
        };
        let factor = dyadic(frac * rho.to_f64() / 2.0 / normal_f, 48);
        let rot = Complex::new(dyadic(theta.cos(), 40), dyadic(theta.sin(), 40));
        let disp: Vec<Complex<Q>> = normal
            .iter()
            .map(|z| z * &rot * Complex::new(factor.clone(), Q::zero()))
            .collect();
        let c = add(&mid, &from_complex(&disp));
        if !inside(&c) {
            continue;
        }
        let w = to_complex(&sub(&c, &a));
        let (_, form) = match totally_real_frame(&za, &u, &w) {
            Ok(x) => x,
            Err(Error::ComplexDependent) => continue,
            Err(e) => return Err(e),
        };
        let mut with_c = base.clone();
        with_c.push((t_c.clone(), c.clone()));
        let minus = assemble(gp, with_c)?;
        if !minus.is_simple(tol)?.simple {
            continue;
        }
        return finish(
            gamma, &reference, plus, minus, form, p, rho, eps, ball, &a, &b, &c, lambda_len, tol, step,
        )
        .map(|r| Attempt::Done(Box::new(r)));
    }
    Ok(Attempt::Shrink(format!("no admissible c in {C_TRIES} tries")))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    gamma: &PolyCurve<Q>,
    reference: &PolyCurve<Q>,
    plus: PolyCurve<Q>,
    minus: PolyCurve<Q>,
    form: OneForm<Q>,
    p: &[Q],
    rho: &Q,
    eps: &Q,
    ball: &Ball<Q>,
    a: &[Q],
    b: &[Q],
    c: &[Q],
    lambda_len: Q,
    tol: Tolerance,
    step: usize,
) -> Result<PerturbResult> {
    let n = a.len();
    let triangle = PolyCurve::from_points(gamma.space(), true, vec![a.to_vec(), b.to_vec(), c.to_vec()])?;
    let sigma_integral = contour_integral(&triangle, &form)?;
    let i = Complex::new(Q::zero(), Q::one());
    if sigma_integral != i {
        return Err(Error::Postcondition(format!(
            "triangle integral {sigma_integral:?} is not i"
        )));
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

    let (sup_upper, var_upper) = reference.bv_distance_upper(&curve)?;
    let bound = BvBound {
        sup_upper,
        var_upper,
        sup_allowed: &lambda_len + rho,
        var_allowed: &lambda_len + rho * Q::from_i64(4),
        total_allowed: eps * Q::ratio(7, 8),
    };
    if bound.sup_upper > bound.sup_allowed
        || bound.var_upper > bound.var_allowed
        || bound.total_upper() > bound.total_allowed
    {
        return Err(Error::Postcondition(format!(
            "bv bounds violated: sup {} (allowed {}), var {} (allowed {})",
            bound.sup_upper.to_f64(),
            bound.sup_allowed.to_f64(),
            bound.var_upper.to_f64(),
            bound.var_allowed.to_f64()
        )));
    }
    if !agrees_outside(reference, &curve, ball) {
        return Err(Error::Postcondition("output differs from the input outside B".into()));
    }
    debug_assert_eq!(n, gamma.real_dim());
    Ok(PerturbResult {
        bv_distance: reference.bv_distance(&curve)?,
        curve,
        side,
        certificate,
        bv_bound: bound,
        sigma_integral,
        plus_integral,
        minus_integral,
        input_digest: gamma.digest(),
        seed: 0,
        details: PerturbDetails::Rectifiable {
            ball_p: Ball::new(p.to_vec(), rho.clone())?,
            a: a.to_vec(),
            b: b.to_vec(),
            c: c.to_vec(),
            lambda_length_upper: lambda_len,
            shrink_steps: step,
        },
    })
}
