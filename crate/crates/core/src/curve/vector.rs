//! Small dense-vector helpers over any [`Scalar`].

use crate::scalar::Scalar;

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale<S: Scalar>(a: &[S], s: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn norm2<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

pub fn dist2<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| {
        let d = x.clone() - y.clone();
        acc + d.clone() * d
    })
}

/// `a + s (b - a)`.
pub fn lerp<S: Scalar>(a: &[S], b: &[S], s: &S) -> Vec<S> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + s.clone() * (y.clone() - x.clone()))
        .collect()
}

/// Parameter of the point of segment `[a, b]` closest to `x`, clamped to `[0, 1]`.
pub fn closest_param<S: Scalar>(a: &[S], b: &[S], x: &[S]) -> S {
    let u = sub(b, a);
    let uu = norm2(&u);
    if uu.is_zero() {
        return S::zero();
    }
    let s = dot(&sub(x, a), &u) / uu;
    if s < S::zero() {
        S::zero()
    } else if s > S::one() {
        S::one()
    } else {
        s
    }
}

/// Squared distance from `x` to the segment `[a, b]`; exact for rationals.
pub fn point_segment_dist2<S: Scalar>(x: &[S], a: &[S], b: &[S]) -> S {
    let s = closest_param(a, b, x);
    dist2(x, &lerp(a, b, &s))
}

pub fn to_f64<S: Scalar>(a: &[S]) -> Vec<f64> {
    a.iter().map(Scalar::to_f64).collect()
}

pub fn f64_dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn f64_point_segment_dist2(x: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut uu = 0.0;
    let mut uw = 0.0;
    for i in 0..x.len() {
        let u = b[i] - a[i];
        uu += u * u;
        uw += u * (x[i] - a[i]);
    }
    let s = if uu > 0.0 { (uw / uu).clamp(0.0, 1.0) } else { 0.0 };
    let mut d = 0.0;
    for i in 0..x.len() {
        let p = a[i] + s * (b[i] - a[i]);
        d += (x[i] - p) * (x[i] - p);
    }
    d
}
