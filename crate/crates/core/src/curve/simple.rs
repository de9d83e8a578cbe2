//! Exact simplicity (injectivity) predicates for polylines in ℝᵈ.
//!
//! Two segments `p + s·u` and `q + t·v` meet iff the closest pair of their
//! supporting lines lies inside both parameter ranges with zero residual, or,
//! when they are parallel, iff they are collinear with overlapping
//! projections. In rational mode every step is exact.


use super::vector::{add, dot, norm2, scale, sub, to_f64};
use super::PolyCurve;
use crate::error::{Error, Result};
use crate::scalar::{NumericMode, Scalar, Tolerance};

#[derive(Clone, Debug, PartialEq)]
pub struct SimplicityWitness<S> {
    pub simple: bool,
    /// Two curve parameters with a common image point.
    pub crossing: Option<(S, S)>,
}

fn in_unit<S: Scalar>(s: &S, tol: Tolerance) -> bool {
    let slack = S::from_f64(if S::MODE == NumericMode::F64 {
        tol.tau
    } else {
        0.0
    });
    *s >= -slack.clone() && *s <= S::one() + slack
}

fn clamp_unit<S: Scalar>(s: S) -> S {
    if s < S::zero() {
        S::zero()
    } else if s > S::one() {
        S::one()
    } else {
        s
    }
}

/// Parameters `(s, t)` of a common point of `[p, p+u]` and `[q, q+v]`, if any.
/// For overlapping collinear segments the overlap start is reported.
pub fn segment_intersection<S: Scalar>(
    p: &[S],
    u: &[S],
    q: &[S],
    v: &[S],
    tol: Tolerance,
) -> Option<(S, S)> {
    let w = sub(q, p);
    let uu = norm2(u);
    let vv = norm2(v);
    let uv = dot(u, v);
    let uw = dot(u, &w);
    let vw = dot(v, &w);
    let scale2 = uu.to_f64() * vv.to_f64();
    let det = uu.clone() * vv.clone() - uv.clone() * uv.clone();
    if !det.is_negligible(tol, scale2) {
        let s = (uw.clone() * vv.clone() - uv.clone() * vw.clone()) / det.clone();
        let t = (uv.clone() * uw - uu.clone() * vw) / det;
        if !in_unit(&s, tol) || !in_unit(&t, tol) {
            return None;
        }
        let s = clamp_unit(s);
        let t = clamp_unit(t);
        let residual = norm2(&sub(&add(p, &scale(u, &s)), &add(q, &scale(v, &t))));
        let reach = uu.to_f64() + vv.to_f64() + norm2(&w).to_f64();
        return if residual.is_negligible(tol, reach) {
            Some((s, t))
        } else {
            None
        };
    }
    // Parallel: collinear iff w is parallel to u.
    let ww = norm2(&w);
    let off_line = ww.clone() * uu.clone() - uw.clone() * uw.clone();
    if !off_line.is_negligible(tol, ww.to_f64() * uu.to_f64()) {
        return None;
    }
    let sq0 = uw.clone() / uu.clone();
    let sq1 = (uw + uv) / uu;
    let (lo, hi) = if sq0 <= sq1 { (sq0, sq1) } else { (sq1, sq0) };
    let lo = if lo > S::zero() { lo } else { S::zero() };
    let hi = if hi < S::one() { hi } else { S::one() };
    if lo > hi {
        return None;
    }
    let x = add(p, &scale(u, &lo));
    let t = dot(&sub(&x, q), v) / vv;
    Some((lo, clamp_unit(t)))
}

/// Adjacent segments share `p + u == q`; they fail only by doubling back.
fn adjacent_overlap<S: Scalar>(
    p: &[S],
    u: &[S],
    q: &[S],
    v: &[S],
    tol: Tolerance,
) -> Option<(S, S)> {
    let uu = norm2(u);
    let vv = norm2(v);
    let uv = dot(u, v);
    let det = uu.clone() * vv.clone() - uv.clone() * uv.clone();
    if !det.is_negligible(tol, uu.to_f64() * vv.to_f64()) || uv >= S::zero() {
        return None;
    }
    // Opposite directions along one line: the shorter segment folds onto the longer.
    if vv <= uu {
        let far = add(q, v);
        Some((dot(&sub(&far, p), u) / uu, S::one()))
    } else {
        Some((S::zero(), dot(&sub(p, q), v) / vv))
    }
}

fn check_segments<S: Scalar>(curve: &PolyCurve<S>, tol: Tolerance) -> Result<()> {
    if let Some(i) = curve.zero_length_segment() {
        return Err(Error::ZeroLengthSegment(i));
    }
    if S::MODE == NumericMode::F64 {
        let scale = curve.sup_norm2().to_f64().max(1.0);
        for seg in curve.segments() {
            if norm2(&sub(seg.end, seg.start)).to_f64() <= tol.tau * tol.tau * scale {
                return Err(Error::ZeroLengthSegment(seg.index));
            }
        }
    }
    Ok(())
}

fn are_adjacent(curve_closed: bool, nseg: usize, i: usize, j: usize) -> bool {
    j == i + 1 || (curve_closed && i == 0 && j == nseg - 1)
}

/// Tests one pair `i < j`; returns the two curve parameters of a common point.
fn test_pair<S: Scalar>(curve: &PolyCurve<S>, i: usize, j: usize, tol: Tolerance) -> Option<(S, S)> {
    let nseg = curve.segment_count();
    let a = curve.segment(i);
    let b = curve.segment(j);
    let u = sub(a.end, a.start);
    let v = sub(b.end, b.start);
    let hit = if are_adjacent(curve.is_closed(), nseg, i, j) {
        if j == i + 1 {
            adjacent_overlap(a.start, &u, b.start, &v, tol)
        } else {
            // Wrap pair (0, nseg-1): segment nseg-1 ends where segment 0 starts.
            adjacent_overlap(b.start, &v, a.start, &u, tol).map(|(t, s)| (s, t))
        }
    } else {
        segment_intersection(a.start, &u, b.start, &v, tol)
    }?;
    let (s, t) = hit;
    let pa = a.t0.clone() + s * (a.t1.clone() - a.t0.clone());
    let pb = b.t0.clone() + t * (b.t1.clone() - b.t0.clone());
    let closed = curve.is_closed();
    Some((wrap(pa, closed), wrap(pb, closed)))
}

fn wrap<S: Scalar>(t: S, closed: bool) -> S {
    if closed && t >= S::one() {
        t - S::one()
    } else {
        t
    }
}

/// Reference all-pairs test.
pub fn is_simple_naive<S: Scalar>(curve: &PolyCurve<S>, tol: Tolerance) -> Result<SimplicityWitness<S>> {
    check_segments(curve, tol)?;
    let nseg = curve.segment_count();
    for i in 0..nseg {
        for j in i + 1..nseg {
            if let Some(crossing) = test_pair(curve, i, j, tol) {
                return Ok(SimplicityWitness {
                    simple: false,
                    crossing: Some(crossing),
                });
            }
        }
    }
    Ok(SimplicityWitness {
        simple: true,
        crossing: None,
    })
}

/// Sweep-and-prune over padded float bounding boxes, then the exact pair test
/// in lexicographic pair order. Reports the same witness as [`is_simple_naive`].
pub fn is_simple<S: Scalar>(curve: &PolyCurve<S>, tol: Tolerance) -> Result<SimplicityWitness<S>> {
    check_segments(curve, tol)?;
    let nseg = curve.segment_count();
    let dim = curve.real_dim();
    let boxes: Vec<(Vec<f64>, Vec<f64>)> = curve
        .segments()
        .map(|s| {
            let a = to_f64(s.start);
            let b = to_f64(s.end);
            let mut lo = vec![0.0; dim];
            let mut hi = vec![0.0; dim];
            for k in 0..dim {
                let pad = 1e-7 * (1.0 + a[k].abs().max(b[k].abs())) + tol.tau;
                lo[k] = a[k].min(b[k]) - pad;
                hi[k] = a[k].max(b[k]) + pad;
            }
            (lo, hi)
        })
        .collect();
    let mut order: Vec<usize> = (0..nseg).collect();
    order.sort_by(|&x, &y| boxes[x].0[0].total_cmp(&boxes[y].0[0]).then(x.cmp(&y)));
    let mut pairs = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let lo_x = boxes[i].0[0];
        active.retain(|&j| boxes[j].1[0] >= lo_x);
        for &j in &active {
            let overlap = (1..dim).all(|k| boxes[i].0[k] <= boxes[j].1[k] && boxes[j].0[k] <= boxes[i].1[k]);
            if overlap {
                pairs.push((i.min(j), i.max(j)));
            }
        }
        active.push(i);
    }
    pairs.sort_unstable();
    for (i, j) in pairs {
        if let Some(crossing) = test_pair(curve, i, j, tol) {
            return Ok(SimplicityWitness {
                simple: false,
                crossing: Some(crossing),
            });
        }
    }
    Ok(SimplicityWitness {
        simple: true,
        crossing: None,
    })
}

impl<S: Scalar> PolyCurve<S> {
    pub fn is_simple(&self, tol: Tolerance) -> Result<SimplicityWitness<S>> {
        is_simple(self, tol)
    }

    /// Errors with [`Error::NotSimple`] unless the curve is simple.
    pub fn require_simple(&self, tol: Tolerance) -> Result<()> {
        let w = is_simple(self, tol)?;
        match w.crossing {
            None => Ok(()),
            Some((a, b)) => Err(Error::NotSimple(a.to_f64(), b.to_f64())),
        }
    }
}
