//! Piecewise-linear curves in ℂⁿ (or ℝᵏ), their norms and refinement.
//!
//! A [`PolyCurve`] is affine on every parameter cell. Closed curves wrap:
//! the last point joins the first over the cell `[t_{m-1}, 1 + t_0]`.
//! Every metric here is evaluated on breakpoints, which is exact because the
//! relevant functions are affine (or convex) between them.

pub mod json;
mod simple;
pub mod vector;

use num_complex::Complex;
use num_traits::Zero;

pub use json::AnyCurve;
pub use simple::{is_simple, is_simple_naive, segment_intersection, SimplicityWitness};

use crate::error::{Error, Result};
use crate::scalar::{sqrt_upper, Scalar, Q};
use vector::{dist2, lerp, norm2, sub};

/// Coordinate semantics of a curve's points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// ℂⁿ stored as `[re1, im1, …, ren, imn]`.
    Complex(usize),
    /// Plain ℝᵏ (bounded-variation maps of the embedding module).
    Real(usize),
}

impl Space {
    pub fn real_dim(self) -> usize {
        match self {
            Space::Complex(n) => 2 * n,
            Space::Real(k) => k,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyCurve<S> {
    space: Space,
    closed: bool,
    params: Vec<S>,
    points: Vec<Vec<S>>,
}

/// One affine piece of a curve.
#[derive(Clone, Debug)]
pub struct Segment<'a, S> {
    pub index: usize,
    pub start: &'a [S],
    pub end: &'a [S],
    pub t0: S,
    /// For the wrap segment of a closed curve this is `1 + t_0`.
    pub t1: S,
}

impl<S: Scalar> PolyCurve<S> {
    pub fn new(space: Space, closed: bool, params: Vec<S>, points: Vec<Vec<S>>) -> Result<Self> {
        let dim = space.real_dim();
        if dim == 0 {
            return Err(Error::Malformed("dimension must be positive".into()));
        }
        let min_points = if closed { 3 } else { 2 };
        if points.len() < min_points {
            return Err(Error::Malformed(format!(
                "{} curve needs at least {min_points} points, got {}",
                if closed { "closed" } else { "open" },
                points.len()
            )));
        }
        if params.len() != points.len() {
            return Err(Error::Malformed(format!(
                "{} params for {} points",
                params.len(),
                points.len()
            )));
        }
        for (j, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Malformed(format!(
                    "point {j} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if !p.iter().all(Scalar::is_finite_value) {
                return Err(Error::Malformed(format!("point {j} is not finite")));
            }
        }
        let zero = S::zero();
        let one = S::one();
        for (j, t) in params.iter().enumerate() {
            let in_domain = if closed {
                *t >= zero && *t < one
            } else {
                *t >= zero && *t <= one
            };
            if !in_domain || !t.is_finite_value() {
                return Err(Error::Malformed(format!(
                    "parameter {j} = {} outside the domain",
                    t.to_f64()
                )));
            }
            if j > 0 && params[j - 1] >= *t {
                return Err(Error::Malformed(format!(
                    "parameters not strictly increasing at index {j}"
                )));
            }
        }
        Ok(PolyCurve {
            space,
            closed,
            params,
            points,
        })
    }

    /// Uniform parameters `j/m` (closed) or `j/(m-1)` (open).
    pub fn from_points(space: Space, closed: bool, points: Vec<Vec<S>>) -> Result<Self> {
        let m = points.len();
        let denom = if closed { m } else { m.saturating_sub(1).max(1) };
        let params = (0..m).map(|j| S::ratio(j as i64, denom as i64)).collect();
        Self::new(space, closed, params, points)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn real_dim(&self) -> usize {
        self.space.real_dim()
    }

    /// Complex dimension n; `None` for real-space curves.
    pub fn complex_dim(&self) -> Option<usize> {
        match self.space {
            Space::Complex(n) => Some(n),
            Space::Real(_) => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn params(&self) -> &[S] {
        &self.params
    }

    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.points.len()
        } else {
            self.points.len() - 1
        }
    }

    pub fn segment(&self, i: usize) -> Segment<'_, S> {
        let m = self.points.len();
        let j = (i + 1) % m;
        let t1 = if j == 0 {
            S::one() + self.params[0].clone()
        } else {
            self.params[j].clone()
        };
        Segment {
            index: i,
            start: &self.points[i],
            end: &self.points[j],
            t0: self.params[i].clone(),
            t1,
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment<'_, S>> + '_ {
        (0..self.segment_count()).map(move |i| self.segment(i))
    }

    /// The complex coordinates of point `j`. Panics for real-space curves.
    pub fn complex_point(&self, j: usize) -> Vec<Complex<S>> {
        to_complex(&self.points[j])
    }

    /// Index of the first zero-length segment, if any.
    pub fn zero_length_segment(&self) -> Option<usize> {
        self.segments()
            .find(|s| norm2(&sub(s.end, s.start)).is_zero())
            .map(|s| s.index)
    }

    /// Reduces a parameter into the curve's domain (mod 1 for closed curves).
    fn normalize_param(&self, t: &S) -> S {
        if self.closed {
            let mut t = t.clone();
            while t >= S::one() {
                t = t - S::one();
            }
            while t < S::zero() {
                t = t + S::one();
            }
            t
        } else {
            t.clone()
        }
    }

    /// Point at parameter `t` (taken mod 1 for closed curves).
    pub fn point_at(&self, t: &S) -> Vec<S> {
        let t = self.normalize_param(t);
        let m = self.points.len();
        // Closed curves: parameters before t_0 belong to the wrap cell.
        if self.closed && t < self.params[0] {
            let seg = self.segment(m - 1);
            let tt = t + S::one();
            let s = (tt - seg.t0.clone()) / (seg.t1 - seg.t0);
            return lerp(seg.start, seg.end, &s);
        }
        let idx = match self
            .params
            .binary_search_by(|p| p.partial_cmp(&t).expect("comparable parameters"))
        {
            Ok(i) => return self.points[i].clone(),
            Err(i) => i - 1,
        };
        if !self.closed && idx + 1 >= m {
            return self.points[m - 1].clone();
        }
        let seg = self.segment(idx);
        let s = (t - seg.t0.clone()) / (seg.t1 - seg.t0);
        lerp(seg.start, seg.end, &s)
    }

    /// Sum of Euclidean segment lengths (including the wrap segment).
    pub fn total_variation(&self) -> f64 {
        self.segments()
            .map(|s| dist2(s.start, s.end).to_f64().sqrt())
            .sum()
    }

    /// Largest segment length.
    pub fn mesh(&self) -> f64 {
        self.segments()
            .map(|s| dist2(s.start, s.end).to_f64().sqrt())
            .fold(0.0, f64::max)
    }

    /// Sup norm, attained at a breakpoint because |γ| is convex on each cell.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm2().to_f64().sqrt()
    }

    pub fn sup_norm2(&self) -> S {
        self.points
            .iter()
            .map(|p| norm2(p))
            .fold(S::zero(), |a, b| if b > a { b } else { a })
    }

    /// ‖γ‖_bv = ‖γ‖_J + var γ.
    pub fn bv_norm(&self) -> f64 {
        self.sup_norm() + self.total_variation()
    }

    /// Inserts extra breakpoints; the map and its image are unchanged.
    pub fn refine(&self, extra_params: &[S]) -> Result<Self> {
        let mut params = self.params.clone();
        let mut points = self.points.clone();
        for t in extra_params {
            let in_domain = if self.closed {
                *t >= S::zero() && *t < S::one()
            } else {
                *t >= S::zero() && *t <= S::one()
            };
            if !in_domain {
                return Err(Error::ParameterOutOfDomain(t.to_f64()));
            }
            let pos = match params.binary_search_by(|p| p.partial_cmp(t).expect("comparable")) {
                Ok(_) => return Err(Error::DuplicateParameter(t.to_f64())),
                Err(pos) => pos,
            };
            let current = PolyCurve {
                space: self.space,
                closed: self.closed,
                params: params.clone(),
                points: points.clone(),
            };
            let x = current.point_at(t);
            params.insert(pos, t.clone());
            points.insert(pos, x);
        }
        Self::new(self.space, self.closed, params, points)
    }

    /// Like [`refine`](Self::refine), but parameters that are already
    /// breakpoints (or repeated) are skipped.
    pub fn with_breakpoints(&self, extra_params: &[S]) -> Result<Self> {
        let mut fresh: Vec<S> = Vec::new();
        for t in extra_params {
            let known = self
                .params
                .binary_search_by(|p| p.partial_cmp(t).expect("comparable"))
                .is_ok();
            if !known && !fresh.contains(t) {
                fresh.push(t.clone());
            }
        }
        self.refine(&fresh)
    }

    /// Subdivides every segment into `pieces` equal parts.
    pub fn subdivide(&self, pieces: usize) -> Self {
        if pieces <= 1 {
            return self.clone();
        }
        let mut params = Vec::new();
        let mut points = Vec::new();
        let k = S::from_i64(pieces as i64);
        for seg in self.segments() {
            for i in 0..pieces {
                let s = S::from_i64(i as i64) / k.clone();
                let t = seg.t0.clone() + s.clone() * (seg.t1.clone() - seg.t0.clone());
                params.push(self.normalize_param(&t));
                points.push(lerp(seg.start, seg.end, &s));
            }
        }
        if !self.closed {
            params.push(self.params[self.params.len() - 1].clone());
            points.push(self.points[self.points.len() - 1].clone());
        }
        // Wrap-cell samples may land before t_0; restore increasing order.
        let mut pairs: Vec<_> = params.into_iter().zip(points).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("comparable"));
        let (params, points) = pairs.into_iter().unzip();
        PolyCurve {
            space: self.space,
            closed: self.closed,
            params,
            points,
        }
    }

    /// The same image traversed backwards (γ(−t) for closed curves, γ(1−t) for open ones).
    pub fn reversed(&self) -> Self {
        let mut pairs: Vec<(S, Vec<S>)> = self
            .params
            .iter()
            .zip(&self.points)
            .map(|(t, p)| {
                let r = if self.closed {
                    if t.is_zero() {
                        S::zero()
                    } else {
                        S::one() - t.clone()
                    }
                } else {
                    S::one() - t.clone()
                };
                (r, p.clone())
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("comparable"));
        let (params, points) = pairs.into_iter().unzip();
        PolyCurve {
            space: self.space,
            closed: self.closed,
            params,
            points,
        }
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PolyCurve<T> {
        PolyCurve {
            space: self.space,
            closed: self.closed,
            params: self.params.iter().map(&f).collect(),
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn to_f64(&self) -> PolyCurve<f64> {
        self.map_scalar(Scalar::to_f64)
    }

    pub fn to_rational(&self) -> PolyCurve<Q> {
        self.map_scalar(Scalar::to_rational)
    }

    /// Same points, different coordinate semantics (dimensions must agree).
    pub fn with_space(&self, space: Space) -> Result<Self> {
        if space.real_dim() != self.real_dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot view {}-dimensional points as {:?}",
                self.real_dim(),
                space
            )));
        }
        Ok(PolyCurve {
            space,
            ..self.clone()
        })
    }

    /// Sorted union of both parameter sets.
    fn union_params(&self, other: &Self) -> Vec<S> {
        let mut all: Vec<S> = self.params.iter().chain(&other.params).cloned().collect();
        all.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
        all.dedup();
        all
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.real_dim() != other.real_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.real_dim(),
                other.real_dim()
            )));
        }
        if self.closed != other.closed {
            return Err(Error::ClosednessMismatch);
        }
        Ok(())
    }

    /// Values of γ − σ at every breakpoint of either curve.
    pub fn difference_samples(&self, other: &Self) -> Result<Vec<Vec<S>>> {
        self.check_compatible(other)?;
        Ok(self
            .union_params(other)
            .iter()
            .map(|t| sub(&self.point_at(t), &other.point_at(t)))
            .collect())
    }

    /// max_t |γ(t) − σ(t)|², exact.
    pub fn sup_distance2(&self, other: &Self) -> Result<S> {
        Ok(self
            .difference_samples(other)?
            .iter()
            .map(|d| norm2(d))
            .fold(S::zero(), |a, b| if b > a { b } else { a }))
    }

    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sup_distance2(other)?.to_f64().sqrt())
    }

    /// ‖γ − σ‖_bv split into its sup and variation parts.
    pub fn bv_distance_parts(&self, other: &Self) -> Result<(f64, f64)> {
        let diffs = self.difference_samples(other)?;
        let sup = diffs
            .iter()
            .map(|d| norm2(d).to_f64())
            .fold(0.0, f64::max)
            .sqrt();
        let var = difference_variation(&diffs, self.closed)
            .iter()
            .map(|d2| d2.to_f64().sqrt())
            .sum();
        Ok((sup, var))
    }

    pub fn bv_distance(&self, other: &Self) -> Result<f64> {
        let (sup, var) = self.bv_distance_parts(other)?;
        Ok(sup + var)
    }
}

/// Squared increments of a sampled difference map.
fn difference_variation<S: Scalar>(diffs: &[Vec<S>], closed: bool) -> Vec<S> {
    let mut out: Vec<S> = diffs.windows(2).map(|w| dist2(&w[0], &w[1])).collect();
    if closed && diffs.len() > 1 {
        out.push(dist2(&diffs[diffs.len() - 1], &diffs[0]));
    }
    out
}

/// Certified upper bounds for exact curves.
impl PolyCurve<Q> {
    pub fn total_variation_upper(&self) -> Q {
        self.segments()
            .map(|s| sqrt_upper(&dist2(s.start, s.end)))
            .fold(Q::zero(), |a, b| a + b)
    }

    /// Upper bounds on the sup and variation parts of ‖γ − σ‖_bv.
    pub fn bv_distance_upper(&self, other: &Self) -> Result<(Q, Q)> {
        let diffs = self.difference_samples(other)?;
        let sup2 = diffs
            .iter()
            .map(|d| norm2(d))
            .fold(Q::zero(), |a, b| if b > a { b } else { a });
        let var = difference_variation(&diffs, self.closed)
            .iter()
            .map(sqrt_upper)
            .fold(Q::zero(), |a, b| a + b);
        Ok((sqrt_upper(&sup2), var))
    }

    pub fn bv_norm_upper(&self) -> Q {
        sqrt_upper(&self.sup_norm2()) + self.total_variation_upper()
    }
}

pub fn to_complex<S: Scalar>(x: &[S]) -> Vec<Complex<S>> {
    x.chunks(2)
        .map(|c| Complex::new(c[0].clone(), c[1].clone()))
        .collect()
}

pub fn from_complex<S: Scalar>(z: &[Complex<S>]) -> Vec<S> {
    z.iter()
        .flat_map(|c| [c.re.clone(), c.im.clone()])
        .collect()
}

/// Regular N-gon on the unit circle, `ω^j` with ω = e^{2πi/N}, as f64 pairs.
pub fn unit_roots(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|j| {
            let th = std::f64::consts::TAU * j as f64 / n as f64;
            (th.cos(), th.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn square() -> PolyCurve<Q> {
        let pts = [(0, 0), (1, 0), (1, 1), (0, 1)]
            .iter()
            .map(|&(x, y)| vec![Q::from_i64(x), Q::from_i64(y)])
            .collect();
        PolyCurve::from_points(Space::Complex(1), true, pts).unwrap()
    }

    fn ngon(n: usize, r: f64) -> PolyCurve<f64> {
        let pts = unit_roots(n)
            .into_iter()
            .map(|(c, s)| vec![r * c, r * s])
            .collect();
        PolyCurve::from_points(Space::Complex(1), true, pts).unwrap()
    }

    #[test]
    fn square_perimeter() {
        assert_eq!(square().total_variation(), 4.0);
    }

    #[test]
    fn ngon_perimeter_matches_chord_formula() {
        for n in [3usize, 5, 16, 100] {
            let brute: f64 = (0..n)
                .map(|j| {
                    let a = std::f64::consts::TAU * j as f64 / n as f64;
                    let b = std::f64::consts::TAU * (j + 1) as f64 / n as f64;
                    ((a.cos() - b.cos()).powi(2) + (a.sin() - b.sin()).powi(2)).sqrt()
                })
                .sum();
            let formula = n as f64 * 2.0 * (std::f64::consts::PI / n as f64).sin();
            let tv = ngon(n, 1.0).total_variation();
            assert!((tv - formula).abs() < 1e-12);
            assert!((tv - brute).abs() < 1e-12);
        }
    }

    #[test]
    fn open_segment_length() {
        let c = PolyCurve::from_points(
            Space::Complex(1),
            false,
            vec![vec![0.0, 0.0], vec![1.0, 1.0]],
        )
        .unwrap();
        assert!((c.total_variation() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(c.segment_count(), 1);
    }

    #[test]
    fn sup_distance_translation_and_scaling() {
        let sq = square();
        assert_eq!(sq.sup_distance2(&sq).unwrap(), Q::zero());
        let shifted = sq.map_scalar(|x| x.clone());
        let pts: Vec<Vec<Q>> = shifted
            .points()
            .iter()
            .map(|p| vec![p[0].clone() + Q::ratio(1, 10), p[1].clone()])
            .collect();
        let shifted = PolyCurve::new(sq.space(), true, sq.params().to_vec(), pts).unwrap();
        assert_eq!(sq.sup_distance2(&shifted).unwrap(), Q::ratio(1, 100));

        let a = ngon(12, 1.0);
        let b = ngon(12, 2.0);
        assert!((a.sup_distance(&b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sup_distance_rejects_mismatch() {
        let closed = square();
        let open = PolyCurve::from_points(
            Space::Complex(1),
            false,
            vec![vec![Q::zero(), Q::zero()], vec![Q::one(), Q::zero()]],
        )
        .unwrap();
        assert!(matches!(
            closed.sup_distance(&open),
            Err(Error::ClosednessMismatch)
        ));
        let other = PolyCurve::from_points(
            Space::Complex(2),
            true,
            vec![vec![Q::zero(); 4], vec![Q::one(); 4], {
                let mut v = vec![Q::zero(); 4];
                v[1] = Q::one();
                v
            }],
        )
        .unwrap();
        assert!(matches!(
            closed.sup_distance(&other),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn bv_norm_examples() {
        let constant = PolyCurve::from_points(
            Space::Real(2),
            false,
            vec![vec![0.0, 0.0], vec![0.0, 0.0]],
        )
        .unwrap();
        assert_eq!(constant.bv_norm(), 0.0);

        let half = Q::ratio(1, 2);
        let centered = PolyCurve::from_points(
            Space::Complex(1),
            true,
            vec![
                vec![-half.clone(), -half.clone()],
                vec![half.clone(), -half.clone()],
                vec![half.clone(), half.clone()],
                vec![-half.clone(), half.clone()],
            ],
        )
        .unwrap();
        assert!((centered.bv_norm() - (2f64.sqrt() / 2.0 + 4.0)).abs() < 1e-15);

        let seg = PolyCurve::from_points(
            Space::Complex(1),
            false,
            vec![vec![0.0, 0.0], vec![1.0, 0.0]],
        )
        .unwrap();
        assert_eq!(seg.bv_norm(), 2.0);
    }

    #[test]
    fn refine_preserves_map() {
        let sq = square();
        assert_eq!(sq.refine(&[]).unwrap(), sq);
        let mids: Vec<Q> = (0..4).map(|j| Q::ratio(2 * j + 1, 8)).collect();
        let r = sq.refine(&mids).unwrap();
        assert_eq!(r.len(), 8);
        assert_eq!(r.total_variation(), 4.0);
        assert_eq!(r.sup_distance2(&sq).unwrap(), Q::zero());
        assert_eq!(r.total_variation_upper(), sq.total_variation_upper());
        assert!(matches!(
            sq.refine(&[Q::ratio(1, 4)]),
            Err(Error::DuplicateParameter(_))
        ));
        assert_eq!(sq.with_breakpoints(&[Q::ratio(1, 4), Q::ratio(1, 8), Q::ratio(1, 8)]).unwrap().len(), 5);
        assert!(matches!(
            sq.refine(&[Q::one()]),
            Err(Error::ParameterOutOfDomain(_))
        ));
    }

    #[test]
    fn wrap_cell_evaluation() {
        let pts = vec![
            vec![Q::zero(), Q::zero()],
            vec![Q::one(), Q::zero()],
            vec![Q::zero(), Q::one()],
        ];
        let params = vec![Q::ratio(1, 4), Q::ratio(1, 2), Q::ratio(3, 4)];
        let c = PolyCurve::new(Space::Complex(1), true, params, pts).unwrap();
        // Wrap cell runs from t = 3/4 (point (0,1)) to t = 5/4 (point (0,0)).
        assert_eq!(c.point_at(&Q::zero()), vec![Q::zero(), Q::ratio(1, 2)]);
        let r = c.refine(&[Q::zero()]).unwrap();
        assert_eq!(r.params()[0], Q::zero());
        assert_eq!(r.sup_distance2(&c).unwrap(), Q::zero());
    }

    #[test]
    fn reversal_keeps_image_and_length() {
        let sq = square();
        let r = sq.reversed();
        assert_eq!(r.total_variation(), 4.0);
        assert_eq!(r.points()[1], sq.points()[3]);
        assert_eq!(r.reversed(), sq);
    }

    #[test]
    fn rejects_invalid_curves() {
        assert!(PolyCurve::<f64>::from_points(
            Space::Complex(1),
            true,
            vec![vec![0.0, 0.0], vec![1.0, 0.0]]
        )
        .is_err());
        assert!(PolyCurve::new(
            Space::Complex(1),
            false,
            vec![0.5, 0.5],
            vec![vec![0.0, 0.0], vec![1.0, 0.0]]
        )
        .is_err());
        assert!(PolyCurve::new(
            Space::Complex(1),
            true,
            vec![0.0, 0.5, 1.0],
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]
        )
        .is_err());
        assert!(PolyCurve::from_points(
            Space::Complex(1),
            false,
            vec![vec![0.0, f64::NAN], vec![1.0, 0.0]]
        )
        .is_err());
    }

    #[test]
    fn subdivide_is_a_refinement() {
        let sq = square();
        let fine = sq.subdivide(3);
        assert_eq!(fine.len(), 12);
        assert_eq!(fine.sup_distance2(&sq).unwrap(), Q::zero());
    }
}
