//! Static SVG plots of curves projected to the first complex coordinate.

use std::fmt::Write;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

pub struct Layer {
    pub label: String,
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

impl Layer {
    /// First complex coordinate of each point in ℝ^{2n}.
    pub fn projected(label: impl Into<String>, points: &[Vec<f64>], closed: bool) -> Self {
        Layer {
            label: label.into(),
            points: points.iter().map(|p| [p[0], p[1]]).collect(),
            closed,
        }
    }
}

pub fn render(title: &str, layers: &[Layer]) -> String {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in layers.iter().flat_map(|l| &l.points) {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    if !lo[0].is_finite() {
        lo = [-1.0, -1.0];
        hi = [1.0, 1.0];
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let map = |p: &[f64; 2]| (MARGIN + (p[0] - lo[0]) * scale, SIZE - MARGIN - (p[1] - lo[1]) * scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{h}" viewBox="0 0 {SIZE} {h}">"##,
        h = SIZE + 20.0 * layers.len() as f64 + 30.0
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="white"/>"##);
    let _ = writeln!(out, r##"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="14">{}</text>"##, escape(title));
    for (j, layer) in layers.iter().enumerate() {
        let color = COLORS[j % COLORS.len()];
        let mut d = String::new();
        for (i, p) in layer.points.iter().enumerate() {
            let (x, y) = map(p);
            let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
        }
        if layer.closed {
            d.push('Z');
        }
        let _ = writeln!(
            out,
            r##"<path d="{}" fill="none" stroke="{color}" stroke-width="1"/>"##,
            d.trim_end()
        );
        let y = SIZE + 20.0 * j as f64;
        let _ = writeln!(
            out,
            r##"<line x1="{MARGIN}" y1="{y}" x2="{x2}" y2="{y}" stroke="{color}" stroke-width="2"/><text x="{tx}" y="{ty}" font-family="sans-serif" font-size="12">{}</text>"##,
            escape(&layer.label),
            x2 = MARGIN + 24.0,
            tx = MARGIN + 30.0,
            ty = y + 4.0
        );
    }
    let _ = writeln!(
        out,
        r##"<text x="{MARGIN}" y="{y}" font-family="sans-serif" font-size="11" fill="#555">projection to the first complex coordinate z1 (Re horizontal, Im vertical)</text>"##,
        y = SIZE + 20.0 * layers.len() as f64 + 10.0
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_deterministically() {
        let layer = Layer::projected("square", &[vec![0.0, 0.0, 5.0, 5.0], vec![1.0, 0.0, 5.0, 5.0], vec![1.0, 1.0, 5.0, 5.0]], true);
        let a = render("t <1>", &[layer]);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("t &lt;1&gt;"));
        assert!(a.contains("first complex coordinate"));
        let again = render("t <1>", &[Layer::projected("square", &[vec![0.0, 0.0, 5.0, 5.0], vec![1.0, 0.0, 5.0, 5.0], vec![1.0, 1.0, 5.0, 5.0]], true)]);
        assert_eq!(a, again);
    }
}
