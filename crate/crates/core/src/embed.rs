//! Injective approximation of continuous BV maps into ℝᵏ.
//!
//! A map γ is lifted to its graph σ, which is injective, and σ is pushed
//! back down by a linear map T close to the coordinate projection P. For a
//! direction v with v₁ ≠ 0, T = P∘T_v where T_v projects along span{v} onto
//! {0}×ℝ^{k−1}; T∘σ is injective exactly when v avoids the secant
//! directions of σ, which have measure zero on the sphere.

use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};

use crate::curve::vector::{f64_dist2, to_f64};
use crate::curve::{PolyCurve, Space};
use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::scalar::{dyadic, sqrt_upper, Scalar, Tolerance, Q};

const MAX_TRIALS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Interval,
    Circle,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Interval => "interval",
            Domain::Circle => "circle",
        }
    }
}

/// A continuous BV map from [0, 1] or ℝ/ℤ into ℝᵏ, sampled as a polyline.
/// Constant pieces are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct BvMap {
    curve: PolyCurve<Q>,
}

impl BvMap {
    /// Real-coordinate view of any curve.
    pub fn new(curve: PolyCurve<Q>) -> Result<Self> {
        let k = curve.real_dim();
        Ok(BvMap {
            curve: curve.with_space(Space::Real(k))?,
        })
    }

    pub fn from_points(domain: Domain, points: Vec<Vec<Q>>) -> Result<Self> {
        let k = points.first().map_or(0, Vec::len);
        PolyCurve::from_points(Space::Real(k), domain == Domain::Circle, points).map(|curve| BvMap { curve })
    }

    pub fn domain(&self) -> Domain {
        if self.curve.is_closed() {
            Domain::Circle
        } else {
            Domain::Interval
        }
    }

    pub fn dim(&self) -> usize {
        self.curve.real_dim()
    }

    pub fn curve(&self) -> &PolyCurve<Q> {
        &self.curve
    }

    pub fn into_curve(self) -> PolyCurve<Q> {
        self.curve
    }

    /// Injectivity of the map: no constant piece and an embedded image.
    pub fn is_injective(&self, tol: Tolerance) -> Result<bool> {
        if self.curve.zero_length_segment().is_some() {
            return Ok(false);
        }
        Ok(self.curve.is_simple(tol)?.simple)
    }

    pub fn to_json(&self) -> Value {
        self.curve.to_json()
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Self::new(crate::curve::AnyCurve::from_json(v)?.into_rational())
    }
}

/// Graph of γ: (t, γ(t)) on an interval, (cos 2πt, sin 2πt, γ(t)) on a circle.
///
/// Circle maps are first refined at the parameters k/8 so that the circle
/// factor is a convex polygon with at least eight vertices; cos and sin are
/// rounded to 2^-40.
pub fn graph_lift(gamma: &BvMap) -> Result<BvMap> {
    let curve = &gamma.curve;
    let k = gamma.dim();
    match gamma.domain() {
        Domain::Interval => {
            let points = curve
                .params()
                .iter()
                .zip(curve.points())
                .map(|(t, x)| std::iter::once(t.clone()).chain(x.iter().cloned()).collect())
                .collect();
            PolyCurve::new(Space::Real(k + 1), false, curve.params().to_vec(), points).map(|curve| BvMap { curve })
        }
        Domain::Circle => {
            let eighths: Vec<Q> = (0..8).map(|j| Q::ratio(j, 8)).collect();
            let refined = curve.with_breakpoints(&eighths)?;
            let points = refined
                .params()
                .iter()
                .zip(refined.points())
                .map(|(t, x)| {
                    let theta = std::f64::consts::TAU * t.to_f64();
                    [dyadic(theta.cos(), 40), dyadic(theta.sin(), 40)]
                        .into_iter()
                        .chain(x.iter().cloned())
                        .collect()
                })
                .collect();
            PolyCurve::new(Space::Real(k + 2), true, refined.params().to_vec(), points).map(|curve| BvMap { curve })
        }
    }
}

/// Covering data for γ × γ from an arc-length partition into m pieces.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverReport {
    pub length: f64,
    pub pieces: usize,
    /// δ(γ_j × γ_k) for all j, k.
    pub diameters: Vec<Vec<f64>>,
    pub max_diameter: f64,
    pub sum_squares: f64,
    /// √2 · l / m
    pub diameter_bound: f64,
    /// 2 l²
    pub sum_bound: f64,
    /// (π/4) Σ δ²
    pub measure_estimate: f64,
    pub holds: bool,
    pub degenerate: bool,
}

impl CoverReport {
    pub fn to_json(&self) -> Value {
        json!({
            "length": self.length,
            "pieces": self.pieces,
            "diameters": self.diameters,
            "max_diameter": self.max_diameter,
            "sum_squares": self.sum_squares,
            "diameter_bound": self.diameter_bound,
            "sum_bound": self.sum_bound,
            "measure_estimate": self.measure_estimate,
            "holds": self.holds,
            "degenerate": self.degenerate,
        })
    }
}

/// Vertices of the pieces of a polyline cut at equal arc length.
fn arc_length_pieces(points: &[Vec<f64>], m: usize) -> (f64, Vec<Vec<Vec<f64>>>) {
    let lens: Vec<f64> = points.windows(2).map(|w| f64_dist2(&w[0], &w[1]).sqrt()).collect();
    let total: f64 = lens.iter().sum();
    let mut pieces = vec![vec![points[0].clone()]];
    let mut walked = 0.0;
    let mut cut = 1;
    for (j, len) in lens.iter().enumerate() {
        let (a, b) = (&points[j], &points[j + 1]);
        while cut < m && walked + len > total * cut as f64 / m as f64 {
            let s = (total * cut as f64 / m as f64 - walked) / len;
            let x: Vec<f64> = a.iter().zip(b).map(|(p, q)| p + s * (q - p)).collect();
            pieces.last_mut().expect("nonempty").push(x.clone());
            pieces.push(vec![x]);
            cut += 1;
        }
        pieces.last_mut().expect("nonempty").push(b.clone());
        walked += len;
    }
    while pieces.len() < m {
        let last = points[points.len() - 1].clone();
        pieces.push(vec![last]);
    }
    (total, pieces)
}

fn diameter(piece: &[Vec<f64>]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, x) in piece.iter().enumerate() {
        for y in &piece[i + 1..] {
            best = best.max(f64_dist2(x, y));
        }
    }
    best.sqrt()
}

/// Covers γ × γ by the m² products of equal-length pieces and checks
/// δ ≤ √2·l/m and Σδ² ≤ 2l² (relative slack 1e-12 for rounding).
pub fn secant_cover_bound<S: Scalar>(gamma: &PolyCurve<S>, m: usize) -> Result<CoverReport> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let mut points: Vec<Vec<f64>> = gamma.points().iter().map(|p| to_f64(p)).collect();
    if gamma.is_closed() {
        points.push(points[0].clone());
    }
    let (length, pieces) = arc_length_pieces(&points, m);
    let diam: Vec<f64> = pieces.iter().map(|p| diameter(p)).collect();
    let diameters: Vec<Vec<f64>> = diam
        .iter()
        .map(|dj| diam.iter().map(|dk| (dj * dj + dk * dk).sqrt()).collect())
        .collect();
    let max_diameter = diameters.iter().flatten().copied().fold(0.0, f64::max);
    let sum_squares: f64 = diameters.iter().flatten().map(|d| d * d).sum();
    let diameter_bound = std::f64::consts::SQRT_2 * length / m as f64;
    let sum_bound = 2.0 * length * length;
    let slack = 1e-12 * (1.0 + sum_bound);
    Ok(CoverReport {
        length,
        pieces: m,
        max_diameter,
        sum_squares,
        diameter_bound,
        sum_bound,
        measure_estimate: std::f64::consts::FRAC_PI_4 * sum_squares,
        holds: max_diameter <= diameter_bound * (1.0 + 1e-12) + 1e-300 && sum_squares <= sum_bound + slack,
        degenerate: length == 0.0 && m > 1,
        diameters,
    })
}

/// T = P∘T_v : ℝᵏ → ℝ^{k−1}, T(x) = x_{2..k} − (x₁/v₁)·v_{2..k}.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionOp {
    pub direction: Vec<Q>,
    /// ‖T − P‖². T − P has rank one, so this is |v_{2..k}|² / v₁² exactly.
    pub deviation2: Q,
    /// Index of the accepted sample.
    pub trial: usize,
}

impl ProjectionOp {
    pub fn new(direction: Vec<Q>) -> Result<Self> {
        if direction.len() < 2 || direction[0].is_zero() {
            return Err(Error::Precondition("projection direction needs v1 != 0".into()));
        }
        let rest: Q = direction[1..].iter().map(|x| x * x).fold(Q::zero(), |a, b| a + b);
        let deviation2 = rest / (&direction[0] * &direction[0]);
        Ok(ProjectionOp {
            direction,
            deviation2,
            trial: 0,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.direction.len()
    }

    /// The (k−1)×k matrix of T.
    pub fn matrix(&self) -> Vec<Vec<Q>> {
        let k = self.input_dim();
        (1..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if j == 0 {
                            -(&self.direction[i] / &self.direction[0])
                        } else if j == i {
                            Q::one()
                        } else {
                            Q::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        let s = &x[0] / &self.direction[0];
        x[1..].iter().zip(&self.direction[1..]).map(|(xi, vi)| xi - &s * vi).collect()
    }

    pub fn deviation_upper(&self) -> Q {
        sqrt_upper(&self.deviation2)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "direction": self.direction.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "matrix": self.matrix().iter().map(|r| r.iter().map(Scalar::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "deviation2": self.deviation2.to_json(),
            "deviation_upper": self.deviation_upper().to_json(),
            "trial": self.trial,
        })
    }
}

fn project(op: &ProjectionOp, sigma: &BvMap) -> Result<BvMap> {
    let curve = &sigma.curve;
    let points = curve.points().iter().map(|x| op.apply(x)).collect();
    PolyCurve::new(
        Space::Real(op.input_dim() - 1),
        curve.is_closed(),
        curve.params().to_vec(),
        points,
    )
    .map(|curve| BvMap { curve })
}

/// Finds T with ‖T − P‖ < ε and T∘σ injective. Trial 0 is v = e₁ (T = P);
/// later trials use v = e₁ + δu with u Gaussian and δ halving every eight
/// trials, rounded to 2^-40.
pub fn generic_project(sigma: &BvMap, eps: &Q, seed: u64, tol: Tolerance) -> Result<(ProjectionOp, BvMap)> {
    let k = sigma.dim();
    if k < 4 {
        return Err(Error::Precondition(format!("generic projection needs k >= 4, got {k}")));
    }
    if *eps <= Q::zero() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    if !sigma.is_injective(tol)? {
        return Err(Error::NotInjective);
    }
    let eps2 = eps * eps;
    let mut rng = seeded(seed);
    let mut delta = (eps.to_f64() / 2.0).min(0.25);
    let mut last_crossing = None;
    for trial in 0..MAX_TRIALS {
        if trial > 0 && trial % 8 == 0 {
            delta /= 2.0;
        }
        let direction: Vec<Q> = if trial == 0 {
            (0..k).map(|j| if j == 0 { Q::one() } else { Q::zero() }).collect()
        } else {
            let u: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
            let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            u.iter()
                .enumerate()
                .map(|(j, x)| dyadic(if j == 0 { 1.0 } else { 0.0 } + delta * x / norm, 40))
                .collect()
        };
        let mut op = match ProjectionOp::new(direction) {
            Ok(op) => op,
            Err(_) => continue,
        };
        op.trial = trial;
        if op.deviation2 >= eps2 {
            continue;
        }
        let image = project(&op, sigma)?;
        if image.curve.zero_length_segment().is_some() {
            continue;
        }
        let w = image.curve.is_simple(tol)?;
        if w.simple {
            return Ok((op, image));
        }
        last_crossing = w.crossing.map(|(a, b)| (a.to_f64(), b.to_f64()));
    }
    Err(Error::RetriesExhausted {
        attempts: MAX_TRIALS,
        detail: match last_crossing {
            Some((a, b)) => format!("last rejected projection crosses itself at parameters {a} and {b}"),
            None => "no direction met the deviation budget".into(),
        },
    })
}

/// An injective map within ε of γ in the bv norm, with its construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub map: BvMap,
    /// Empty when γ was already injective.
    pub projections: Vec<ProjectionOp>,
    /// Certified upper bound on ‖output − γ‖_bv.
    pub bv_distance_upper: Q,
    /// ‖σ‖_bv upper bound used for the budget.
    pub lift_bv_norm_upper: Q,
    pub seed: u64,
}

impl Embedding {
    pub fn to_json(&self) -> Value {
        json!({
            "map": self.map.to_json(),
            "domain": self.map.domain().as_str(),
            "projections": self.projections.iter().map(ProjectionOp::to_json).collect::<Vec<_>>(),
            "bv_distance_upper": self.bv_distance_upper.to_json(),
            "bv_distance_upper_f64": self.bv_distance_upper.to_f64(),
            "lift_bv_norm_upper": self.lift_bv_norm_upper.to_json(),
            "seed": self.seed,
        })
    }
}

/// Replaces γ by T∘σ for its graph σ. Interval maps use one projection with
/// ‖T − P‖ < ε/‖σ‖_bv; circle maps use two, each with ‖Tᵢ − Pᵢ‖ < ε/(3‖σ‖_bv),
/// since ‖T₂T₁ − P₂P₁‖ ≤ (1 + d₂)d₁ + d₂.
pub fn make_injective(gamma: &BvMap, eps: &Q, seed: u64, tol: Tolerance) -> Result<Embedding> {
    let k = gamma.dim();
    if k < 3 {
        return Err(Error::Precondition(format!(
            "injective approximation needs k >= 3, got {k}"
        )));
    }
    if *eps <= Q::zero() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    if gamma.is_injective(tol)? {
        return Ok(Embedding {
            map: gamma.clone(),
            projections: Vec::new(),
            bv_distance_upper: Q::zero(),
            lift_bv_norm_upper: Q::zero(),
            seed,
        });
    }
    let sigma = graph_lift(gamma)?;
    let norm = sigma.curve.bv_norm_upper();
    let (map, projections) = match gamma.domain() {
        Domain::Interval => {
            let (op, image) = generic_project(&sigma, &(eps / &norm), seed, tol)?;
            (image, vec![op])
        }
        Domain::Circle => {
            let budget = eps / (&norm * Q::from_i64(3));
            let (op1, mid) = generic_project(&sigma, &budget, seed, tol)?;
            let (op2, image) = generic_project(&mid, &budget, seed.wrapping_add(1), tol)?;
            (image, vec![op1, op2])
        }
    };
    let (sup, var) = gamma.curve.bv_distance_upper(&map.curve)?;
    let bound = sup + var;
    if bound >= *eps {
        return Err(Error::Postcondition(format!(
            "bv distance bound {} is not below epsilon",
            bound.to_f64()
        )));
    }
    let predicted: f64 = projections.iter().map(|op| op.deviation_upper().to_f64()).sum::<f64>() * 2.0 * norm.to_f64();
    debug_assert!(bound.to_f64() <= predicted * (1.0 + 1e-9) + 1e-12);
    Ok(Embedding {
        map,
        projections,
        bv_distance_upper: bound,
        lift_bv_norm_upper: norm,
        seed,
    })
}

/// ‖(T∘σ) − (P∘σ)‖_bv and ‖T − P‖·‖σ‖_bv in floating point.
pub fn projection_norm_check(op: &ProjectionOp, sigma: &BvMap) -> Result<(f64, f64)> {
    let t = project(op, sigma)?;
    let p = project(&ProjectionOp::new(unit_first(op.input_dim()))?, sigma)?;
    let lhs = t.curve.to_f64().bv_distance(&p.curve.to_f64())?;
    let rhs = op.deviation_upper().to_f64() * sigma.curve.to_f64().bv_norm();
    Ok((lhs, rhs))
}

fn unit_first(k: usize) -> Vec<Q> {
    (0..k).map(|j| if j == 0 { Q::one() } else { Q::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> Q {
        Q::from_i64(x)
    }

    /// Planar figure-eight (two lobes through the origin) with zero third coordinate.
    pub(crate) fn figure_eight(extra: usize) -> BvMap {
        let mut pts = vec![
            vec![q(0), q(0)],
            vec![q(1), q(1)],
            vec![q(2), q(0)],
            vec![q(1), q(-1)],
            vec![q(0), q(0)],
            vec![q(-1), q(1)],
            vec![q(-2), q(0)],
            vec![q(-1), q(-1)],
        ];
        for p in &mut pts {
            p.extend(std::iter::repeat_n(q(0), extra));
        }
        BvMap::from_points(Domain::Circle, pts).unwrap()
    }

    #[test]
    fn interval_graph_is_injective() {
        let constant = BvMap::from_points(Domain::Interval, vec![vec![q(2), q(3)]; 4]).unwrap();
        assert!(!constant.is_injective(Tolerance::default()).unwrap());
        let lifted = graph_lift(&constant).unwrap();
        assert_eq!(lifted.dim(), 3);
        assert!(lifted.is_injective(Tolerance::default()).unwrap());
    }

    #[test]
    fn circle_graph_of_constant_is_a_polygon() {
        let constant = BvMap::from_points(Domain::Circle, vec![vec![q(1)]; 3]).unwrap();
        let lifted = graph_lift(&constant).unwrap();
        assert_eq!(lifted.dim(), 3);
        assert_eq!(lifted.curve().len(), 10);
        assert!(lifted.is_injective(Tolerance::default()).unwrap());
    }

    #[test]
    fn figure_eight_lifts_to_an_embedding() {
        let fig = figure_eight(1);
        assert!(!fig.is_injective(Tolerance::default()).unwrap());
        let lifted = graph_lift(&fig).unwrap();
        assert_eq!(lifted.dim(), 5);
        assert!(lifted.is_injective(Tolerance::default()).unwrap());
    }

    #[test]
    fn projection_matrix_and_deviation() {
        let op = ProjectionOp::new(vec![q(2), q(1), q(0), q(2)]).unwrap();
        assert_eq!(op.deviation2, Q::ratio(5, 4));
        let x = vec![q(4), q(1), q(1), q(1)];
        let by_matrix: Vec<Q> = op
            .matrix()
            .iter()
            .map(|row| row.iter().zip(&x).map(|(a, b)| a * b).fold(Q::zero(), |s, t| s + t))
            .collect();
        assert_eq!(op.apply(&x), by_matrix);
        assert_eq!(op.apply(&[q(2), q(1), q(0), q(2)]), vec![q(0); 3]);
    }

    #[test]
    fn cover_of_unit_segment() {
        let seg = PolyCurve::from_points(Space::Real(1), false, vec![vec![0.0], vec![1.0]]).unwrap();
        let r = secant_cover_bound(&seg, 4).unwrap();
        assert!(r.holds);
        for d in r.diameters.iter().flatten() {
            assert!((d - std::f64::consts::SQRT_2 / 4.0).abs() < 1e-15);
        }
        assert!((r.sum_squares - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cover_of_constant_map() {
        let c = PolyCurve::from_points(Space::Real(2), false, vec![vec![1.0, 1.0]; 3]).unwrap();
        let r = secant_cover_bound(&c, 5).unwrap();
        assert!(r.holds && r.degenerate);
        assert_eq!(r.sum_squares, 0.0);
        assert!(secant_cover_bound(&c, 0).is_err());
    }

    #[test]
    fn already_injective_is_returned_unchanged() {
        let seg = BvMap::from_points(Domain::Interval, vec![vec![q(0); 3], vec![q(1), q(2), q(3)]]).unwrap();
        let e = make_injective(&seg, &Q::ratio(1, 100), 0, Tolerance::default()).unwrap();
        assert_eq!(e.map, seg);
        assert!(e.projections.is_empty());
    }

    #[test]
    fn figure_eight_in_r3_becomes_injective() {
        let fig = figure_eight(1);
        let eps = Q::ratio(1, 100);
        let e = make_injective(&fig, &eps, 4, Tolerance::default()).unwrap();
        assert!(e.map.is_injective(Tolerance::default()).unwrap());
        assert_eq!(e.projections.len(), 2);
        assert!(e.bv_distance_upper < eps);
        assert_eq!(e, make_injective(&fig, &eps, 4, Tolerance::default()).unwrap());
    }

    #[test]
    fn constant_interval_map_becomes_a_short_segment() {
        let constant = BvMap::from_points(Domain::Interval, vec![vec![q(1), q(2), q(3)]; 3]).unwrap();
        let eps = Q::ratio(1, 100);
        let e = make_injective(&constant, &eps, 9, Tolerance::default()).unwrap();
        assert!(e.map.is_injective(Tolerance::default()).unwrap());
        assert!(e.bv_distance_upper < eps);
    }

    #[test]
    fn projection_budget_inequality() {
        let sigma = graph_lift(&figure_eight(2)).unwrap();
        let (op, _) = generic_project(&sigma, &Q::ratio(1, 10), 1, Tolerance::default()).unwrap();
        let (lhs, rhs) = projection_norm_check(&op, &sigma).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-12), "{lhs} > {rhs}");
    }
}
