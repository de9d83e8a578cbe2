//! Reproducible hull-convergence experiments.
//!
//! Hulls are never computed. Each [`HullModel`] is a closed form (a
//! polynomially convex curve, the interior of a Jordan polygon, possibly
//! lifted by z ↦ (z, 1/z), an analytic disc, or a union) that can be sampled
//! and compared against the sampled sets.

mod families;

pub use families::{
    graph_family, graph_hausdorff, graph_table, kallin_example, kallin_table, slit_annulus_family, slit_table,
    tangent_circles, tangent_table, GraphFamily, Kallin, SlitAnnulus, TangentCircles,
};

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};

use crate::certificates::{exponents_of_degree, CPolynomial};
use crate::curve::vector::f64_point_segment_dist2;
use crate::curve::PolyCurve;
use crate::error::{Error, Result};
use crate::metrics::{hausdorff_points, CompactSample};
use crate::rng::seeded;

/// Map applied to a planar region before it is placed in ℂⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lift {
    Identity,
    /// z ↦ (z, 1/z)
    Hyperbola,
}

#[derive(Clone, Debug, PartialEq)]
pub enum HullModel {
    /// A polynomially convex curve: its own hull.
    CurveOnly(PolyCurve<f64>),
    /// Closed interior of a simple closed polygon in ℂ, then lifted.
    PolygonWithInterior { boundary: PolyCurve<f64>, lift: Lift },
    /// {center + ζ·axis : |ζ| ≤ radius}
    ParametricDisc {
        center: Vec<Complex<f64>>,
        axis: Vec<Complex<f64>>,
        radius: f64,
    },
    ExplicitUnion(Vec<HullModel>),
}

fn flatten(z: &[Complex<f64>]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Crossing-number test for a planar polygon given by its vertices.
pub fn inside_polygon(boundary: &PolyCurve<f64>, x: f64, y: f64) -> bool {
    let mut inside = false;
    for s in boundary.segments() {
        let (x0, y0, x1, y1) = (s.start[0], s.start[1], s.end[0], s.end[1]);
        if (y0 > y) != (y1 > y) && x < x0 + (y - y0) * (x1 - x0) / (y1 - y0) {
            inside = !inside;
        }
    }
    inside
}

fn lift_point(lift: Lift, x: f64, y: f64) -> Vec<f64> {
    match lift {
        Lift::Identity => vec![x, y],
        Lift::Hyperbola => {
            let w = Complex::new(x, y).inv();
            vec![x, y, w.re, w.im]
        }
    }
}

fn dense(curve: &PolyCurve<f64>, h: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for s in curve.segments() {
        let len = crate::curve::vector::f64_dist2(s.start, s.end).sqrt();
        let k = ((len / h).ceil() as usize).max(1);
        for i in 0..k {
            let t = i as f64 / k as f64;
            out.push(s.start.iter().zip(s.end).map(|(a, b)| a + t * (b - a)).collect());
        }
    }
    if !curve.is_closed() {
        out.push(curve.points()[curve.len() - 1].clone());
    }
    out
}

impl HullModel {
    pub fn kind(&self) -> &'static str {
        match self {
            HullModel::CurveOnly(_) => "curve-only",
            HullModel::PolygonWithInterior { .. } => "polygon-with-interior",
            HullModel::ParametricDisc { .. } => "parametric-disc",
            HullModel::ExplicitUnion(_) => "explicit-union",
        }
    }

    pub fn real_dim(&self) -> usize {
        match self {
            HullModel::CurveOnly(c) => c.real_dim(),
            HullModel::PolygonWithInterior { lift, .. } => match lift {
                Lift::Identity => 2,
                Lift::Hyperbola => 4,
            },
            HullModel::ParametricDisc { center, .. } => 2 * center.len(),
            HullModel::ExplicitUnion(parts) => parts.first().map_or(0, HullModel::real_dim),
        }
    }

    /// Points of the modeled set at spacing about `h` (in the planar or disc
    /// parameter), including its boundary.
    pub fn sample(&self, h: f64) -> Vec<Vec<f64>> {
        match self {
            HullModel::CurveOnly(c) => dense(c, h),
            HullModel::PolygonWithInterior { boundary, lift } => {
                let mut out: Vec<Vec<f64>> = dense(boundary, h)
                    .into_iter()
                    .map(|p| lift_point(*lift, p[0], p[1]))
                    .collect();
                let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
                for p in boundary.points() {
                    for k in 0..2 {
                        lo[k] = lo[k].min(p[k]);
                        hi[k] = hi[k].max(p[k]);
                    }
                }
                let nx = ((hi[0] - lo[0]) / h).ceil() as i64;
                let ny = ((hi[1] - lo[1]) / h).ceil() as i64;
                for i in 0..=nx {
                    for j in 0..=ny {
                        let (x, y) = (lo[0] + i as f64 * h, lo[1] + j as f64 * h);
                        if inside_polygon(boundary, x, y) {
                            out.push(lift_point(*lift, x, y));
                        }
                    }
                }
                out
            }
            HullModel::ParametricDisc { center, axis, radius } => {
                let point = |zeta: Complex<f64>| -> Vec<f64> {
                    flatten(&center.iter().zip(axis).map(|(c, a)| c + zeta * a).collect::<Vec<_>>())
                };
                let n = ((radius / h).ceil() as i64).max(1);
                let mut out = Vec::new();
                for i in -n..=n {
                    for j in -n..=n {
                        let zeta = Complex::new(i as f64, j as f64) * (radius / n as f64);
                        if zeta.norm() <= *radius {
                            out.push(point(zeta));
                        }
                    }
                }
                let m = ((std::f64::consts::TAU * radius / h).ceil() as usize).max(8);
                out.extend((0..m).map(|j| {
                    point(Complex::from_polar(*radius, std::f64::consts::TAU * j as f64 / m as f64))
                }));
                out
            }
            HullModel::ExplicitUnion(parts) => parts.iter().flat_map(|p| p.sample(h)).collect(),
        }
    }

    pub fn sample_set(&self, h: f64) -> Result<CompactSample<f64>> {
        CompactSample::new(self.real_dim(), self.sample(h))
    }

    /// Distance from x to the modeled set: exact for planar polygons, discs
    /// and curves; within the sampling spacing for lifted polygons.
    pub fn distance_to(&self, x: &[f64], h: f64) -> f64 {
        match self {
            HullModel::CurveOnly(c) => c
                .segments()
                .map(|s| f64_point_segment_dist2(x, s.start, s.end))
                .fold(f64::INFINITY, f64::min)
                .sqrt(),
            HullModel::PolygonWithInterior {
                boundary,
                lift: Lift::Identity,
            } => {
                if inside_polygon(boundary, x[0], x[1]) {
                    0.0
                } else {
                    HullModel::CurveOnly(boundary.clone()).distance_to(x, h)
                }
            }
            HullModel::ParametricDisc { center, axis, radius } => {
                // Orthogonal projection onto the complex line, clamped to the disc.
                let z: Vec<Complex<f64>> = x.chunks(2).map(|c| Complex::new(c[0], c[1])).collect();
                let a2: f64 = axis.iter().map(|a| a.norm_sqr()).sum();
                let dot: Complex<f64> = z.iter().zip(center).zip(axis).map(|((z, c), a)| (z - c) * a.conj()).sum();
                let mut zeta = dot / a2;
                let limit = radius / a2.sqrt();
                if zeta.norm() > limit {
                    zeta *= limit / zeta.norm();
                }
                z.iter()
                    .zip(center)
                    .zip(axis)
                    .map(|((z, c), a)| (z - c - zeta * a).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            }
            HullModel::ExplicitUnion(parts) => parts.iter().map(|p| p.distance_to(x, h)).fold(f64::INFINITY, f64::min),
            HullModel::PolygonWithInterior { .. } => self
                .sample(h)
                .iter()
                .map(|p| crate::curve::vector::f64_dist2(p, x))
                .fold(f64::INFINITY, f64::min)
                .sqrt(),
        }
    }
}

/// A CSV-ready table of named columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    /// Column values parsed as floats.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        self.rows.iter().map(|r| r[j].parse().ok()).collect()
    }
}

/// Shortest round-trip formatting for CSV cells.
pub(crate) fn cell(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub index: usize,
    pub trial: usize,
    pub sup_set: f64,
    pub sup_hull: f64,
    pub sup_limit: f64,
    pub hausdorff: f64,
    pub eps: f64,
    pub tolerance: f64,
    /// |‖P‖ over the hull model − ‖P‖ over the set| ≤ tolerance.
    pub consistent: bool,
    /// ‖P‖ over the hull model ≤ ‖P‖_X + ε_k + tolerance.
    pub chain_holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub degree: u32,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<ReportRow>,
}

impl ConvergenceReport {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| !r.consistent || !r.chain_holds).count()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "index", "trial", "sup_set", "sup_hull", "sup_limit", "hausdorff", "eps", "tolerance", "consistent", "chain_holds",
        ]);
        for r in &self.rows {
            t.push(vec![
                r.index.to_string(),
                r.trial.to_string(),
                cell(r.sup_set),
                cell(r.sup_hull),
                cell(r.sup_limit),
                cell(r.hausdorff),
                cell(r.eps),
                cell(r.tolerance),
                r.consistent.to_string(),
                r.chain_holds.to_string(),
            ]);
        }
        t
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "trials": self.trials,
            "seed": self.seed,
            "violations": self.violations(),
            "csv": self.table().to_csv(),
        })
    }
}

fn sup_abs(p: &CPolynomial<f64>, pts: &[Vec<f64>]) -> f64 {
    pts.iter()
        .map(|x| {
            let z: Vec<Complex<f64>> = x.chunks(2).map(|c| Complex::new(c[0], c[1])).collect();
            p.eval(&z).norm()
        })
        .fold(0.0, f64::max)
}

/// Upper bound for |∇P| on the ball of radius r.
fn lipschitz(p: &CPolynomial<f64>, r: f64) -> f64 {
    p.terms()
        .map(|(e, c)| {
            let d: u32 = e.iter().sum();
            if d == 0 {
                0.0
            } else {
                c.norm() * d as f64 * r.powi(d as i32 - 1)
            }
        })
        .sum()
}

/// Test polynomials: trial 0 is 1, trial 1 the last coordinate, later
/// trials have Gaussian coefficients on all monomials up to `degree`.
fn test_polynomial(rng: &mut crate::rng::Rng, nvars: usize, degree: u32, trial: usize) -> CPolynomial<f64> {
    match trial {
        0 => CPolynomial::one(nvars),
        1 => CPolynomial::variable(nvars, nvars - 1),
        _ => {
            let exps: Vec<_> = (0..=degree).flat_map(|d| exponents_of_degree(nvars, d)).collect();
            let scale = 1.0 / exps.len() as f64;
            CPolynomial::from_terms(
                nvars,
                exps.into_iter().map(|e| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    (e, Complex::new(re * scale, im * scale))
                }),
            )
            .expect("consistent exponents")
        }
    }
}

/// For seeded polynomials P, compares ‖P‖ over each hull model with ‖P‖ over
/// the corresponding set (they agree when the model is the hull), and checks
/// ‖P‖ over the hull ≤ ‖P‖_X + L·d_H(X_k, X) with L a Lipschitz bound of P.
/// Sampling tolerance is 10·mesh·L.
pub fn hull_limit_inequality(
    sets: &[CompactSample<f64>],
    hulls: &[HullModel],
    limit: &CompactSample<f64>,
    degree: u32,
    trials: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    if sets.len() != hulls.len() {
        return Err(Error::Precondition(format!(
            "{} sets but {} hull models",
            sets.len(),
            hulls.len()
        )));
    }
    let dim = limit.dim();
    if !dim.is_multiple_of(2) || sets.iter().any(|s| s.dim() != dim) || hulls.iter().any(|h| h.real_dim() != dim) {
        return Err(Error::DimensionMismatch("sets, hulls and limit must share a complex dimension".into()));
    }
    let nvars = dim / 2;
    let mut rng = seeded(seed);
    let limit_mesh = limit.mesh();
    let prepared: Vec<(Vec<Vec<f64>>, f64, f64)> = sets
        .iter()
        .zip(hulls)
        .map(|(s, h)| {
            let mesh = s.mesh().max(limit_mesh);
            let dh = hausdorff_points(s, limit)?;
            Ok((h.sample(mesh.max(1e-3)), mesh, dh))
        })
        .collect::<Result<_>>()?;
    let radius = sets
        .iter()
        .chain(std::iter::once(limit))
        .flat_map(|s| s.points().iter())
        .chain(prepared.iter().flat_map(|p| p.0.iter()))
        .map(|x| x.iter().map(|c| c * c).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let mut rows = Vec::new();
    for trial in 0..trials {
        let p = test_polynomial(&mut rng, nvars, degree, trial);
        let l = lipschitz(&p, radius);
        let sup_limit = sup_abs(&p, limit.points());
        for (index, (set, (hull_pts, mesh, dh))) in sets.iter().zip(&prepared).enumerate() {
            let sup_set = sup_abs(&p, set.points());
            let sup_hull = sup_abs(&p, hull_pts);
            let tolerance = 10.0 * mesh * l + 1e-12 * (1.0 + sup_set);
            let eps = l * dh;
            rows.push(ReportRow {
                index,
                trial,
                sup_set,
                sup_hull,
                sup_limit,
                hausdorff: *dh,
                eps,
                tolerance,
                consistent: (sup_hull - sup_set).abs() <= tolerance,
                chain_holds: sup_hull <= sup_limit + eps + tolerance,
            });
        }
    }
    Ok(ConvergenceReport {
        degree,
        trials,
        seed,
        rows,
    })
}
