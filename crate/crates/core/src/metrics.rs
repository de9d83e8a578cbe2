//! Hausdorff distances between finite samples and between polyline images.
//!
//! Point-cloud distances are exact in rational mode: the accelerated path
//! only prunes candidates and always returns the same squared distance as
//! the brute-force oracle.

use serde_json::Value;

use crate::curve::vector::{dist2, f64_dist2, f64_point_segment_dist2, lerp, to_f64};
use crate::curve::{json::digest_json, PolyCurve};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Finite point cloud standing in for a compact set.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactSample<S> {
    dim: usize,
    points: Vec<Vec<S>>,
}

impl<S: Scalar> CompactSample<S> {
    pub fn new(dim: usize, points: Vec<Vec<S>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed("sample dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::Malformed("sample must be nonempty".into()));
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
        Ok(CompactSample { dim, points })
    }

    /// The vertices of a curve.
    pub fn from_curve(curve: &PolyCurve<S>) -> Self {
        CompactSample {
            dim: curve.real_dim(),
            points: curve.points().to_vec(),
        }
    }

    /// Vertices plus `per_segment - 1` equally spaced interior points per segment.
    pub fn from_curve_dense(curve: &PolyCurve<S>, per_segment: usize) -> Self {
        let k = per_segment.max(1) as i64;
        let mut points = Vec::with_capacity(curve.segment_count() * k as usize + 1);
        for seg in curve.segments() {
            for i in 0..k {
                points.push(lerp(seg.start, seg.end, &S::ratio(i, k)));
            }
        }
        if !curve.is_closed() {
            points.push(curve.points()[curve.len() - 1].clone());
        }
        CompactSample {
            dim: curve.real_dim(),
            points,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
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

    /// Union of two samples of equal dimension.
    pub fn union(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        Ok(CompactSample {
            dim: self.dim,
            points,
        })
    }

    pub fn to_f64(&self) -> CompactSample<f64> {
        CompactSample {
            dim: self.dim,
            points: self.points.iter().map(|p| to_f64(p)).collect(),
        }
    }

    /// Largest nearest-neighbour distance: every sampled point has another
    /// sample within this distance. Zero for a single point.
    pub fn mesh(&self) -> f64 {
        let pts: Vec<Vec<f64>> = self.points.iter().map(|p| to_f64(p)).collect();
        if pts.len() < 2 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for (i, p) in pts.iter().enumerate() {
            let mut best = f64::INFINITY;
            for (j, q) in pts.iter().enumerate() {
                if i != j {
                    best = best.min(f64_dist2(p, q));
                }
            }
            worst = worst.max(best);
        }
        worst.sqrt()
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "dim": self.dim,
            "points": self
                .points
                .iter()
                .map(|p| p.iter().map(Scalar::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Malformed("sample: missing `dim`".into()))? as usize;
        let rows = v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("sample: missing `points`".into()))?;
        let mut points = Vec::with_capacity(rows.len());
        for (j, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Malformed(format!("points[{j}]: expected array")))?;
            let p = row
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    S::from_json(x).map_err(|e| Error::Malformed(format!("points[{j}][{k}]: {e}")))
                })
                .collect::<Result<Vec<S>>>()?;
            points.push(p);
        }
        Self::new(dim, points)
    }

    pub fn digest(&self) -> String {
        digest_json(&self.to_json())
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(format!("{a} vs {b}")));
    }
    Ok(())
}

fn max_scalar<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

/// Squared directed distance sup_{a∈A} min_{b∈B} |a − b|², by brute force.
pub fn directed2_brute<S: Scalar>(a: &CompactSample<S>, b: &CompactSample<S>) -> Result<S> {
    check_dims(a.dim, b.dim)?;
    Ok(a.points.iter().fold(S::zero(), |acc, p| {
        let best = b
            .points
            .iter()
            .map(|q| dist2(p, q))
            .reduce(|x, y| if y < x { y } else { x })
            .expect("nonempty sample");
        max_scalar(acc, best)
    }))
}

/// Squared Hausdorff distance by the O(|A||B|) oracle.
pub fn hausdorff2_brute<S: Scalar>(a: &CompactSample<S>, b: &CompactSample<S>) -> Result<S> {
    Ok(max_scalar(directed2_brute(a, b)?, directed2_brute(b, a)?))
}

/// Uniform grid over the first two coordinates of a sample.
struct Grid {
    origin: [f64; 2],
    cell: f64,
    cols: usize,
    rows: usize,
    buckets: Vec<Vec<usize>>,
}

impl Grid {
    fn build(points: &[Vec<f64>]) -> Grid {
        let proj = |p: &Vec<f64>| [p[0], if p.len() > 1 { p[1] } else { 0.0 }];
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            let x = proj(p);
            for i in 0..2 {
                lo[i] = lo[i].min(x[i]);
                hi[i] = hi[i].max(x[i]);
            }
        }
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        // About one point per cell for evenly spread data.
        let target = (points.len() as f64).sqrt().ceil().max(1.0);
        let cell = if extent > 0.0 { extent / target } else { 1.0 };
        let cols = ((hi[0] - lo[0]) / cell).floor() as usize + 1;
        let rows = ((hi[1] - lo[1]) / cell).floor() as usize + 1;
        let mut grid = Grid {
            origin: lo,
            cell,
            cols,
            rows,
            buckets: vec![Vec::new(); cols * rows],
        };
        for (i, p) in points.iter().enumerate() {
            let (c, r) = grid.locate(proj(p));
            grid.buckets[r * cols + c].push(i);
        }
        grid
    }

    fn locate(&self, x: [f64; 2]) -> (usize, usize) {
        let c = ((x[0] - self.origin[0]) / self.cell).floor();
        let r = ((x[1] - self.origin[1]) / self.cell).floor();
        (
            (c.max(0.0) as usize).min(self.cols - 1),
            (r.max(0.0) as usize).min(self.rows - 1),
        )
    }

    /// Cells at Chebyshev distance exactly `ring` from `(c, r)`.
    fn ring(&self, c: usize, r: usize, ring: usize) -> Vec<usize> {
        let (c, r, k) = (c as i64, r as i64, ring as i64);
        let mut out = Vec::new();
        for dr in -k..=k {
            for dc in -k..=k {
                if dr.abs() != k && dc.abs() != k {
                    continue;
                }
                let (cc, rr) = (c + dc, r + dr);
                if cc >= 0 && rr >= 0 && (cc as usize) < self.cols && (rr as usize) < self.rows {
                    out.push(rr as usize * self.cols + cc as usize);
                }
            }
        }
        out
    }

    fn max_ring(&self) -> usize {
        self.cols.max(self.rows)
    }
}

/// Squared directed distance using grid pruning and early exit. Returns the
/// same value as [`directed2_brute`]: pruning uses conservative float bounds
/// and every surviving candidate is compared exactly.
pub fn directed2<S: Scalar>(a: &CompactSample<S>, b: &CompactSample<S>) -> Result<S> {
    check_dims(a.dim, b.dim)?;
    let bf: Vec<Vec<f64>> = b.points.iter().map(|p| to_f64(p)).collect();
    let grid = Grid::build(&bf);
    let mut worst = S::zero();
    for p in &a.points {
        let pf = to_f64(p);
        let x = [pf[0], if pf.len() > 1 { pf[1] } else { 0.0 }];
        let (c, r) = grid.locate(x);
        let mut best: Option<S> = None;
        let mut ring = 0;
        'search: loop {
            for cell in grid.ring(c, r, ring) {
                for &j in &grid.buckets[cell] {
                    let d = dist2(p, &b.points[j]);
                    // Early exit: this point cannot raise the running maximum.
                    if d <= worst {
                        best = None;
                        break 'search;
                    }
                    if best.as_ref().is_none_or(|m| d < *m) {
                        best = Some(d);
                    }
                }
            }
            if ring >= grid.max_ring() {
                break;
            }
            if let Some(m) = &best {
                // Points beyond this ring lie at projected distance > ring * cell.
                let reach = ring as f64 * grid.cell * (1.0 - 1e-6);
                if reach * reach > m.to_f64() * (1.0 + 1e-9) + 1e-300 {
                    break;
                }
            }
            ring += 1;
        }
        if let Some(m) = best {
            worst = max_scalar(worst, m);
        }
    }
    Ok(worst)
}

/// Squared Hausdorff distance, exact in rational mode.
pub fn hausdorff2_points<S: Scalar>(a: &CompactSample<S>, b: &CompactSample<S>) -> Result<S> {
    Ok(max_scalar(directed2(a, b)?, directed2(b, a)?))
}

pub fn hausdorff_points<S: Scalar>(a: &CompactSample<S>, b: &CompactSample<S>) -> Result<f64> {
    Ok(hausdorff2_points(a, b)?.to_f64().sqrt())
}

/// Points of every segment at spacing at most `h`, vertices included.
fn sample_curve(curve: &PolyCurve<f64>, h: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for seg in curve.segments() {
        let len = f64_dist2(seg.start, seg.end).sqrt();
        let pieces = ((len / h).ceil() as usize).max(1);
        for i in 0..pieces {
            let s = i as f64 / pieces as f64;
            out.push(
                seg.start
                    .iter()
                    .zip(seg.end)
                    .map(|(x, y)| x + s * (y - x))
                    .collect(),
            );
        }
    }
    if !curve.is_closed() {
        out.push(curve.points()[curve.len() - 1].clone());
    }
    out
}

fn directed_to_polyline(samples: &[Vec<f64>], target: &PolyCurve<f64>) -> f64 {
    let segs: Vec<(&[f64], &[f64])> = target.segments().map(|s| (s.start, s.end)).collect();
    samples
        .iter()
        .map(|x| {
            segs.iter()
                .map(|(a, b)| f64_point_segment_dist2(x, a, b))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
        .sqrt()
}

/// Hausdorff distance between two polyline images. Each image is sampled at
/// spacing `h` and measured against the other's segments, so the returned
/// value is within `h/2` of the true distance (and never above it, up to
/// rounding).
pub fn hausdorff_polylines<S: Scalar>(gamma: &PolyCurve<S>, sigma: &PolyCurve<S>, h: f64) -> Result<f64> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::Precondition(format!("sampling step must be positive, got {h}")));
    }
    check_dims(gamma.real_dim(), sigma.real_dim())?;
    let g = gamma.to_f64();
    let s = sigma.to_f64();
    let d1 = directed_to_polyline(&sample_curve(&g, h), &s);
    let d2 = directed_to_polyline(&sample_curve(&s, h), &g);
    Ok(d1.max(d2))
}

/// Directed distance from sample points to a polyline image (exact up to rounding).
pub fn sample_to_polyline<S: Scalar>(sample: &CompactSample<S>, curve: &PolyCurve<S>) -> Result<f64> {
    check_dims(sample.dim, curve.real_dim())?;
    let pts: Vec<Vec<f64>> = sample.points.iter().map(|p| to_f64(p)).collect();
    Ok(directed_to_polyline(&pts, &curve.to_f64()))
}
