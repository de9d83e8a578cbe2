//! The example families: slit-annulus curves in ℂ, their images on the
//! hyperbola {zw = 1}, and two families of unions of circles in ℂ².

use std::f64::consts::{PI, SQRT_2, TAU};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{cell, HullModel, Lift, Table};
use crate::certificates::{
    certificate_search, certify, search_table, CPolynomial, Certificate, HyperbolaLift, OneForm,
};
use crate::curve::vector::{dist2, f64_dist2, point_segment_dist2};
use crate::curve::{PolyCurve, Space};
use crate::error::{Error, Result};
use crate::metrics::{hausdorff_points, hausdorff_polylines, sample_to_polyline, CompactSample};
use crate::scalar::{dyadic, Scalar, Tolerance, Q};
use crate::certificates::winding_number;

fn check_sizes(k: u32, n: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Precondition(format!("k must be at least 2, got {k}")));
    }
    if n < 16 {
        return Err(Error::Precondition(format!("need at least 16 vertices, got {n}")));
    }
    Ok(())
}

fn polar_q(r: f64, theta: f64) -> Vec<Q> {
    vec![dyadic(r * theta.cos(), 40), dyadic(r * theta.sin(), 40)]
}

/// Regular polygon with `n` vertices on a circle in ℂ.
pub(crate) fn circle_polygon(n: usize, radius: f64) -> PolyCurve<f64> {
    let pts = (0..n)
        .map(|j| {
            let t = TAU * j as f64 / n as f64;
            vec![radius * t.cos(), radius * t.sin()]
        })
        .collect();
    PolyCurve::from_points(Space::Complex(1), true, pts).expect("n >= 3")
}

/// Winding number of a planar curve about w.
fn winding_about(curve: &PolyCurve<f64>, w: [f64; 2], tol: Tolerance) -> Result<i64> {
    let f = CPolynomial::variable(1, 0).sub(&CPolynomial::constant(1, Complex::new(w[0], w[1])));
    winding_number(curve, &f, tol)
}

/// Segment [a, b] meets the closed positive real axis (|z| > 0 is assumed elsewhere).
fn meets_positive_axis(a: &[Q], b: &[Q]) -> bool {
    let (x0, y0, x1, y1) = (&a[0], &a[1], &b[0], &b[1]);
    let zero = Q::zero();
    if (*y0 > zero && *y1 > zero) || (*y0 < zero && *y1 < zero) {
        return false;
    }
    if y0 == y1 {
        return *x0 > zero || *x1 > zero;
    }
    let s = y0 / (y0 - y1);
    x0 + s * (x1 - x0) > zero
}

/// A polygonal curve γ_k in the slit annulus {1 < |z| < 1 + 1/k} \ [0, ∞)
/// whose interior contains the arc λ_k of radius 1 + 1/(2k) and arguments
/// [π/(2k), 2π − π/(2k)].
#[derive(Clone, Debug, PartialEq)]
pub struct SlitAnnulus {
    pub k: u32,
    pub curve: PolyCurve<Q>,
    pub hull: HullModel,
    /// Samples of λ_k, each verified to be enclosed by γ_k.
    pub lambda: Vec<[f64; 2]>,
}

/// Outer arc at radius 1 + 3/(4k), inner arc at radius 1 + 1/(4k), both over
/// arguments [π/(4k), 2π − π/(4k)], joined by radial segments. Vertices are
/// rounded to 2^-40 and the annulus containment is checked exactly.
pub fn slit_annulus_family(k: u32, n: usize, tol: Tolerance) -> Result<SlitAnnulus> {
    check_sizes(k, n)?;
    let kf = k as f64;
    let (outer, inner) = (1.0 + 3.0 / (4.0 * kf), 1.0 + 1.0 / (4.0 * kf));
    let theta0 = PI / (4.0 * kf);
    let n_out = n / 2;
    let n_in = n - n_out;
    let arg = |j: usize, m: usize| theta0 + (TAU - 2.0 * theta0) * j as f64 / (m - 1) as f64;
    let mut pts: Vec<Vec<Q>> = (0..n_out).map(|j| polar_q(outer, arg(j, n_out))).collect();
    pts.extend((0..n_in).rev().map(|j| polar_q(inner, arg(j, n_in))));
    let curve = PolyCurve::from_points(Space::Complex(1), true, pts)?;

    let origin = [Q::zero(), Q::zero()];
    let big = Q::one() + Q::ratio(1, k as i64);
    let big2 = &big * &big;
    let inside_annulus = curve.points().iter().all(|p| dist2(p, &origin) < big2)
        && curve
            .segments()
            .all(|s| point_segment_dist2(&origin, s.start, s.end) > Q::one() && !meets_positive_axis(s.start, s.end));
    if !inside_annulus {
        return Err(Error::Precondition(format!(
            "{n} vertices are too few to stay inside the slit annulus for k = {k}"
        )));
    }
    curve.require_simple(tol)?;
    let flt = curve.to_f64();
    if winding_about(&flt, [0.0, 0.0], tol)? != 0 {
        return Err(Error::Postcondition("slit-annulus curve winds around 0".into()));
    }
    let mid = 1.0 + 1.0 / (2.0 * kf);
    let lambda: Vec<[f64; 2]> = (0..64)
        .map(|j| {
            let t = PI / (2.0 * kf) + (TAU - PI / kf) * j as f64 / 63.0;
            [mid * t.cos(), mid * t.sin()]
        })
        .collect();
    for w in &lambda {
        if winding_about(&flt, *w, tol)? == 0 {
            return Err(Error::Postcondition(format!("λ_k point {w:?} is not enclosed")));
        }
    }
    Ok(SlitAnnulus {
        k,
        hull: HullModel::PolygonWithInterior {
            boundary: flt,
            lift: Lift::Identity,
        },
        curve,
        lambda,
    })
}

fn closed_disc(n: usize) -> HullModel {
    HullModel::PolygonWithInterior {
        boundary: circle_polygon(n, 1.0),
        lift: Lift::Identity,
    }
}

/// Per k: mesh, d_H(γ_k, circle), d_H(γ̂_k, circle), d_H(γ̂_k, closed disc),
/// dist(0, γ̂_k) and the winding number of γ_k about 0.
pub fn slit_table(ks: &[u32], n: usize, tol: Tolerance) -> Result<Table> {
    let mut t = Table::new(&[
        "k",
        "mesh",
        "dh_curve_circle",
        "dh_hull_circle",
        "dh_hull_disc",
        "dist_zero_hull",
        "winding_zero",
    ]);
    let circle = circle_polygon(4096, 1.0);
    for &k in ks {
        let s = slit_annulus_family(k, n, tol)?;
        let flt = s.curve.to_f64();
        let mesh = flt.mesh();
        let h = mesh / 4.0;
        let dh_curve = hausdorff_polylines(&flt, &circle, h)?;
        let hull = s.hull.sample_set(h)?;
        let circle_pts = CompactSample::new(2, super::dense(&circle, h))?;
        let disc = closed_disc(4096).sample_set(h)?;
        t.push(vec![
            k.to_string(),
            cell(mesh),
            cell(dh_curve),
            cell(hausdorff_points(&hull, &circle_pts)?),
            cell(hausdorff_points(&hull, &disc)?),
            cell(s.hull.distance_to(&[0.0, 0.0], h)),
            winding_about(&flt, [0.0, 0.0], tol)?.to_string(),
        ]);
    }
    Ok(t)
}

/// σ, the (z, z̄) polygon over the n-th roots of unity, and σ_k, the image
/// of γ_k under z ↦ (z, 1/z), handled exactly through the Laurent pullback.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphFamily {
    pub k: u32,
    pub sigma: PolyCurve<Q>,
    pub sigma_k: HyperbolaLift<Q>,
    pub hull: HullModel,
    pub hull_k: HullModel,
}

pub fn graph_family(k: u32, n: usize, tol: Tolerance) -> Result<GraphFamily> {
    let slit = slit_annulus_family(k, n, tol)?;
    let pts = (0..n)
        .map(|j| {
            let t = TAU * j as f64 / n as f64;
            let (c, s) = (dyadic(t.cos(), 40), dyadic(t.sin(), 40));
            vec![c.clone(), s.clone(), c, -s]
        })
        .collect();
    let sigma = PolyCurve::from_points(Space::Complex(2), true, pts)?;
    Ok(GraphFamily {
        k,
        hull: HullModel::CurveOnly(sigma.to_f64()),
        hull_k: HullModel::PolygonWithInterior {
            boundary: slit.curve.to_f64(),
            lift: Lift::Hyperbola,
        },
        sigma_k: HyperbolaLift::new(slit.curve, tol)?,
        sigma,
    })
}

impl GraphFamily {
    /// The certificate of σ with α = z₂ dz₁; its integral is i·n·sin(2π/n)
    /// up to the vertex rounding.
    pub fn sigma_certificate(&self, tol: Tolerance) -> Result<Certificate<Q>> {
        certify(&self.sigma, &OneForm::monomial(vec![0, 1], 0), tol)
    }
}

/// d_H(σ_k, σ), with σ_k sampled so that consecutive samples are at most h
/// apart and σ sampled at spacing h. Accurate to about h.
pub fn graph_hausdorff(g: &GraphFamily, h: f64) -> Result<f64> {
    // |d(1/z)| ≤ |dz| on |z| ≥ 1, so ℂ² spacing is at most √2 times the base spacing.
    let mesh = g.sigma_k.base().to_f64().mesh();
    let per = ((SQRT_2 * mesh / h).ceil() as usize).max(1);
    let lifted = CompactSample::new(4, g.sigma_k.sample_f64(per))?;
    let sigma = g.sigma.to_f64();
    let there = sample_to_polyline(&lifted, &sigma)?;
    let back = hausdorff_points(&CompactSample::new(4, super::dense(&sigma, h))?, &lifted)?;
    Ok(there.max(back))
}

/// Per k: d_H(σ_k, σ), the σ certificate integral, whether any monomial
/// form of degree ≤ 3 certifies σ_k, and the largest monomial integral over σ_k.
pub fn graph_table(ks: &[u32], n: usize, h: f64, tol: Tolerance) -> Result<Table> {
    let mut t = Table::new(&[
        "k",
        "dh_sigma_k_sigma",
        "sigma_integral_re",
        "sigma_integral_im",
        "sigma_k_certified_deg3",
        "sigma_k_max_monomial_integral",
    ]);
    for &k in ks {
        let g = graph_family(k, n, tol)?;
        let cert = g.sigma_certificate(tol)?;
        let value = cert.integral.to_f64();
        let found = certificate_search(&g.sigma_k, 3, tol)?.is_some();
        let max_monomial = search_table(&g.sigma_k, 3)?
            .iter()
            .map(|(_, v)| v.to_f64().norm())
            .fold(0.0, f64::max);
        t.push(vec![
            k.to_string(),
            cell(graph_hausdorff(&g, h)?),
            cell(value.re),
            cell(value.im),
            found.to_string(),
            cell(max_monomial),
        ]);
    }
    Ok(t)
}

fn c2_polygon(m: usize, f: impl Fn(Complex<f64>) -> [Complex<f64>; 2]) -> PolyCurve<f64> {
    let pts = (0..m)
        .map(|j| {
            let z = Complex::from_polar(1.0, TAU * j as f64 / m as f64);
            let [a, b] = f(z);
            vec![a.re, a.im, b.re, b.im]
        })
        .collect();
    PolyCurve::from_points(Space::Complex(2), true, pts).expect("m >= 3")
}

fn disc(center: [Complex<f64>; 2]) -> HullModel {
    HullModel::ParametricDisc {
        center: center.to_vec(),
        axis: vec![Complex::one(), Complex::zero()],
        radius: 1.0,
    }
}

fn union_sample(curves: &[&PolyCurve<f64>]) -> Result<CompactSample<f64>> {
    CompactSample::new(4, curves.iter().flat_map(|c| c.points().iter().cloned()).collect())
}

/// X_k = {(z, z̄/k)} ∪ {(2 + z, 1/k)} and X = {(z, 0)} ∪ {(2 + z, 0)} over
/// |z| = 1, each circle an m-gon, with the stated hulls
/// X̂_k = {(z, z̄/k)} ∪ {(2 + z, 1/k) : |z| ≤ 1} and X̂ = two closed discs.
#[derive(Clone, Debug, PartialEq)]
pub struct Kallin {
    pub k: u32,
    /// The two circles of X_k, then the two circles of X.
    pub components: [PolyCurve<f64>; 4],
    pub x_k: CompactSample<f64>,
    pub hull_k: HullModel,
    pub x: CompactSample<f64>,
    pub hull: HullModel,
    /// {(z, 0) : |z| = 1} ∪ {(2 + z, 0) : |z| ≤ 1}, the limit of the X̂_k.
    pub hull_limit: HullModel,
}

pub fn kallin_example(k: u32, m: usize) -> Result<Kallin> {
    if k < 1 || m < 3 {
        return Err(Error::Precondition("need k >= 1 and at least 3 samples per circle".into()));
    }
    let kf = k as f64;
    let two = Complex::new(2.0, 0.0);
    let a_k = c2_polygon(m, |z| [z, z.conj() / kf]);
    let e_k = c2_polygon(m, |z| [two + z, Complex::new(1.0 / kf, 0.0)]);
    let a = c2_polygon(m, |z| [z, Complex::zero()]);
    let e = c2_polygon(m, |z| [two + z, Complex::zero()]);
    Ok(Kallin {
        k,
        x_k: union_sample(&[&a_k, &e_k])?,
        x: union_sample(&[&a, &e])?,
        hull_k: HullModel::ExplicitUnion(vec![
            HullModel::CurveOnly(a_k.clone()),
            disc([two, Complex::new(1.0 / kf, 0.0)]),
        ]),
        hull: HullModel::ExplicitUnion(vec![disc([Complex::zero(); 2]), disc([two, Complex::zero()])]),
        hull_limit: HullModel::ExplicitUnion(vec![HullModel::CurveOnly(a.clone()), disc([two, Complex::zero()])]),
        components: [a_k, e_k, a, e],
    })
}

impl Kallin {
    /// Total length of the two circles of X_k.
    pub fn length_k(&self) -> f64 {
        self.components[0].total_variation() + self.components[1].total_variation()
    }

    /// sup over matched samples of |ρ_k − ρ|.
    pub fn sup_distance(&self) -> f64 {
        self.x_k
            .points()
            .iter()
            .zip(self.x.points())
            .map(|(p, q)| f64_dist2(p, q))
            .fold(0.0, f64::max)
            .sqrt()
    }

    /// d_H(lim X̂_k, X̂) on samples at spacing h. The point (0, 0) ∈ X̂ is at
    /// distance 1 from the limit set.
    pub fn inclusion_gap(&self, h: f64) -> Result<f64> {
        hausdorff_points(&self.hull_limit.sample_set(h)?, &self.hull.sample_set(h)?)
    }

    pub fn hull_to_limit(&self, h: f64) -> Result<f64> {
        hausdorff_points(&self.hull_k.sample_set(h)?, &self.hull_limit.sample_set(h)?)
    }
}

/// Per k: sup |ρ_k − ρ|, length of X_k, d_H(X̂_k, lim X̂_k) and d_H(lim X̂_k, X̂).
pub fn kallin_table(ks: &[u32], m: usize) -> Result<Table> {
    let mut t = Table::new(&["k", "sup_distance", "length", "length_bound", "dh_hull_k_limit", "inclusion_gap"]);
    let h = TAU / m as f64;
    for &k in ks {
        let x = kallin_example(k, m)?;
        t.push(vec![
            k.to_string(),
            cell(x.sup_distance()),
            cell(x.length_k()),
            cell(2.0 * (SQRT_2 + 1.0) * PI),
            cell(x.hull_to_limit(h)?),
            cell(x.inclusion_gap(h)?),
        ]);
    }
    Ok(t)
}

/// The unit circle {(e^{iθ}, e^{−iθ})} with circles G_k in the plane
/// {(z, z̄)} and E_k in p_k + (ℂ × {0}), k = 1..=count, each of radius
/// |p_k − p_{k+1}|/4 and touching the big circle only at
/// p_k = (e^{iπ/k}, e^{−iπ/k}). X uses every G_k; X_k swaps G_k for E_k.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentCircles {
    pub big: PolyCurve<f64>,
    pub g: Vec<PolyCurve<f64>>,
    pub e: Vec<PolyCurve<f64>>,
}

pub fn tangent_circles(count: usize, m: usize) -> Result<TangentCircles> {
    if count < 1 || m < 3 {
        return Err(Error::Precondition("need at least one small circle and 3 samples".into()));
    }
    let p = |k: usize| Complex::from_polar(1.0, PI / k as f64);
    let big = c2_polygon(m, |z| [z, z.conj()]);
    let mut g = Vec::new();
    let mut e = Vec::new();
    for k in 1..=count {
        let u = p(k);
        let r = SQRT_2 * (u - p(k + 1)).norm() / 4.0;
        // φ = π lands on p_k in both circles.
        g.push(c2_polygon(m, |w| {
            let z = u * (1.0 + r / SQRT_2 * (1.0 + w));
            [z, z.conj()]
        }));
        e.push(c2_polygon(m, |w| [u + u * r * (1.0 + w), u.conj()]));
    }
    Ok(TangentCircles { big, g, e })
}

impl TangentCircles {
    /// Components of X (k = None) or X_k.
    pub fn components(&self, k: Option<usize>) -> Vec<&PolyCurve<f64>> {
        std::iter::once(&self.big)
            .chain((0..self.g.len()).map(|j| if Some(j + 1) == k { &self.e[j] } else { &self.g[j] }))
            .collect()
    }

    pub fn length(&self, k: Option<usize>) -> f64 {
        self.components(k).iter().map(|c| c.total_variation()).sum()
    }

    /// sup |ρ_k − ρ| over matched samples; only G_k and E_k differ.
    pub fn sup_distance(&self, k: usize) -> f64 {
        self.g[k - 1]
            .points()
            .iter()
            .zip(self.e[k - 1].points())
            .map(|(a, b)| f64_dist2(a, b))
            .fold(0.0, f64::max)
            .sqrt()
    }

    pub fn sample(&self, k: Option<usize>) -> Result<CompactSample<f64>> {
        union_sample(&self.components(k))
    }
}

/// Per k: sup |ρ_k − ρ|, length of X_k and of X.
pub fn tangent_table(count: usize, m: usize) -> Result<Table> {
    let tc = tangent_circles(count, m)?;
    let mut t = Table::new(&["k", "sup_distance", "length_x_k", "length_x"]);
    let lx = tc.length(None);
    for k in 1..=count {
        t.push(vec![k.to_string(), cell(tc.sup_distance(k)), cell(tc.length(Some(k))), cell(lx)]);
    }
    Ok(t)
}
