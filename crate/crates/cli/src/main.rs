//! `curvehull` command-line tool.
//!
//! Exit status: 0 success, 1 malformed input or I/O failure, 2 domain error
//! (e.g. a curve that is not simple), 3 retry or shrink exhaustion.

mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use curvehull::certificates::{certificate_search, certify, search_table, OneForm};
use curvehull::closing::{close_arc, contain_in_pc_curve, Tube};
use curvehull::curve::json::digest_json;
use curvehull::embed::{make_injective, BvMap};
use curvehull::hull_lab::{self, HullModel};
use curvehull::metrics::{hausdorff2_points, hausdorff_points, hausdorff_polylines, CompactSample};
use curvehull::perturb::{perturb_rectifiable, perturb_smooth, Ball};
use curvehull::scalar::{parse_rational, sqrt_bounds};
use curvehull::{AnyCurve, Error, ErrorKind, NumericMode, PolyCurve, Scalar, Tolerance, Q};

use output::{Envelope, Sink};
use svg::Layer;

#[derive(Parser)]
#[command(name = "curvehull", version, about = "Exact polyline tools for polynomial convexity of curves in C^n")]
struct Cli {
    /// Numeric mode: `rational` (exact) or `f64`.
    #[arg(long, global = true, default_value = "rational")]
    mode: NumericMode,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Float zero tolerance τ.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Output directory. Without it the main result is printed to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a one-form over a simple closed curve.
    Certify {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        form: PathBuf,
    },
    /// Search monomial forms z^a dz_j up to a degree for a certificate.
    Search {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
    /// Chord-and-triangle perturbation inside a ball (exact mode).
    Perturb {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        ball: PathBuf,
    },
    /// Bump perturbation inside a ball (exact mode).
    PerturbSmooth {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        ball: PathBuf,
    },
    /// Close an arc into a simple closed curve inside a tube.
    Close {
        #[arg(long)]
        arc: PathBuf,
        /// Tube around the arc itself.
        #[arg(long, conflicts_with = "tube")]
        radius: Option<String>,
        /// Tube file `{ "core": <curve>, "radius": "p/q" }`.
        #[arg(long)]
        tube: Option<PathBuf>,
    },
    /// Close an arc and perturb the closure into a certified curve.
    Contain {
        #[arg(long)]
        arc: PathBuf,
        #[arg(long, conflicts_with = "tube")]
        radius: Option<String>,
        #[arg(long)]
        tube: Option<PathBuf>,
        #[arg(long)]
        eps: String,
    },
    /// Injective approximation of a BV map in R^k (k >= 3).
    Embed {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        eps: String,
    },
    /// Hausdorff distance between two curves or point samples.
    Hausdorff {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Sampling step for curve images (default: a quarter of the smaller mesh).
        #[arg(long)]
        h: Option<f64>,
    },
    /// Convergence demonstrations; writes <name>.csv, <name>.svg and <name>.json.
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Subcommand)]
enum Demo {
    /// Slit-annulus curves γ_k.
    ///
    /// CSV columns: k, mesh, dh_curve_circle = d_H(γ_k, unit circle),
    /// dh_hull_circle = d_H(γ̂_k, circle), dh_hull_disc = d_H(γ̂_k, closed disc),
    /// dist_zero_hull = dist(0, γ̂_k), winding_zero = winding of γ_k about 0.
    Slit {
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 4, 8, 16])]
        k: Vec<u32>,
        #[arg(long, default_value_t = 512)]
        n: usize,
    },
    /// Images σ_k of γ_k on {zw = 1} and the (z, z̄) circle σ.
    ///
    /// CSV columns: k, dh_sigma_k_sigma = d_H(σ_k, σ), sigma_integral_re/_im =
    /// ∫_σ z2 dz1, sigma_k_certified_deg3 = whether a monomial form of degree
    /// <= 3 certifies σ_k, sigma_k_max_monomial_integral.
    Graph {
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 4, 8, 16])]
        k: Vec<u32>,
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, default_value_t = 0.01)]
        h: f64,
    },
    /// Two circles in C^2 whose hulls converge to a proper subset of the limit's hull.
    ///
    /// CSV columns: k, sup_distance = sup |ρ_k − ρ|, length of X_k, length_bound =
    /// 2(√2+1)π, dh_hull_k_limit = d_H(X̂_k, lim X̂_k), inclusion_gap =
    /// d_H(lim X̂_k, X̂). kallin_report.csv holds the polynomial sup checks:
    /// index (position in --k), trial, sup_set, sup_hull, sup_limit, hausdorff, eps, tolerance,
    /// consistent, chain_holds.
    Kallin {
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 4, 8, 16])]
        k: Vec<u32>,
        #[arg(long, default_value_t = 512)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// A circle with tangent circles swapped between two planes.
    ///
    /// CSV columns: k, sup_distance = sup |ρ_k − ρ|, length_x_k, length_x.
    Tangent {
        #[arg(long, default_value_t = 8)]
        count: usize,
        #[arg(long, default_value_t = 128)]
        m: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Malformed => 1,
            ErrorKind::Domain => 2,
            ErrorKind::Exhausted => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    }
}

type Run<T> = Result<T, Failure>;

fn read_json(path: &Path) -> Run<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure {
        code: 1,
        message: format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()),
    })
}

fn in_file<T>(path: &Path, r: curvehull::Result<T>) -> Run<T> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn read_curve(path: &Path, env: &mut Envelope, name: &str) -> Run<AnyCurve> {
    let v = read_json(path)?;
    env.input(name, digest_json(&v));
    in_file(path, AnyCurve::from_json(&v))
}

fn rational_arg(name: &str, s: &str) -> Run<Q> {
    parse_rational(s).map_err(|e| Failure {
        code: 1,
        message: format!("--{name}: {e}"),
    })
}

fn require_rational(mode: NumericMode, what: &str) -> Run<()> {
    if mode == NumericMode::F64 {
        return Err(Failure {
            code: 2,
            message: format!("{what} runs in exact arithmetic only; use --mode rational"),
        });
    }
    Ok(())
}

fn f64_points<S: Scalar>(c: &PolyCurve<S>) -> Vec<Vec<f64>> {
    c.to_f64().points().to_vec()
}

fn write_err(path: &Option<PathBuf>) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure {
        code: 1,
        message: format!("{}: {e}", path.as_deref().unwrap_or(Path::new("<stdout>")).display()),
    }
}

fn run(cli: Cli) -> Run<()> {
    let tol = Tolerance::new(cli.tol);
    let sink = Sink { dir: cli.out.clone() };
    let werr = write_err(&cli.out);
    let mode = cli.mode;
    let smooth = matches!(cli.command, Command::PerturbSmooth { .. });
    let new_env = |name: &str| Envelope::new(name, mode.as_str(), cli.seed, cli.tol);
    match cli.command {
        Command::Certify { curve, form } => {
            let mut env = new_env("certify");
            let c = read_curve(&curve, &mut env, "curve")?;
            let fv = read_json(&form)?;
            env.input("form", digest_json(&fv));
            let form_q = in_file(&form, OneForm::<Q>::from_json(&fv))?;
            let result = match mode {
                NumericMode::Rational => certify(&c.into_rational(), &form_q, tol)?.to_json(),
                NumericMode::F64 => certify(&c.into_f64(), &form_q.map_scalar(|q| q.to_f64()), tol)?.to_json(),
            };
            sink.main("certify.json", &env.wrap(result)).map_err(werr)
        }
        Command::Search { curve, degree } => {
            let mut env = new_env("search");
            let c = read_curve(&curve, &mut env, "curve")?;
            let result = match mode {
                NumericMode::Rational => search_json(&c.into_rational(), degree, tol)?,
                NumericMode::F64 => search_json(&c.into_f64(), degree, tol)?,
            };
            sink.main("search.json", &env.wrap(result)).map_err(werr)
        }
        Command::Perturb { curve, eps, ball } | Command::PerturbSmooth { curve, eps, ball } => {
            let name = if smooth { "perturb-smooth" } else { "perturb" };
            require_rational(mode, name)?;
            let mut env = new_env(name);
            let gamma = read_curve(&curve, &mut env, "curve")?.into_rational();
            let bv = read_json(&ball)?;
            env.input("ball", digest_json(&bv));
            let b = in_file(&ball, Ball::<Q>::from_json(&bv))?;
            let eps = rational_arg("eps", &eps)?;
            let r = if smooth {
                perturb_smooth(&gamma, &eps, &b, cli.seed, tol)?
            } else {
                perturb_rectifiable(&gamma, &eps, &b, cli.seed, tol)?
            };
            sink.main(&format!("{name}.json"), &env.wrap(r.to_json())).map_err(&werr)?;
            let plot = svg::render(
                name,
                &[
                    Layer::projected("input", &f64_points(&gamma), true),
                    Layer::projected(format!("output ({} side)", r.side.as_str()), &f64_points(&r.curve), true),
                ],
            );
            sink.side(&format!("{name}.svg"), &plot, false).map_err(werr)
        }
        Command::Close { arc, radius, tube } => {
            require_rational(mode, "close")?;
            let mut env = new_env("close");
            let lambda = read_curve(&arc, &mut env, "arc")?.into_rational();
            let omega = read_tube(&lambda, radius, tube, &mut env)?;
            let closed = close_arc(&lambda, &omega, cli.seed, tol)?;
            let result = json!({ "curve": closed.to_json(), "digest": closed.digest() });
            sink.main("close.json", &env.wrap(result)).map_err(&werr)?;
            let plot = svg::render(
                "close",
                &[
                    Layer::projected("arc", &f64_points(&lambda), false),
                    Layer::projected("closed curve", &f64_points(&closed), true),
                ],
            );
            sink.side("close.svg", &plot, false).map_err(werr)
        }
        Command::Contain { arc, radius, tube, eps } => {
            require_rational(mode, "contain")?;
            let mut env = new_env("contain");
            let lambda = read_curve(&arc, &mut env, "arc")?.into_rational();
            let omega = read_tube(&lambda, radius, tube, &mut env)?;
            let eps = rational_arg("eps", &eps)?;
            let r = contain_in_pc_curve(&lambda, &omega, &eps, cli.seed, tol)?;
            sink.main("contain.json", &env.wrap(r.to_json())).map_err(&werr)?;
            let plot = svg::render(
                "contain",
                &[
                    Layer::projected("arc", &f64_points(&lambda), false),
                    Layer::projected("certified curve", &f64_points(&r.curve), true),
                ],
            );
            sink.side("contain.svg", &plot, false).map_err(werr)
        }
        Command::Embed { map, eps } => {
            require_rational(mode, "embed")?;
            let mut env = new_env("embed");
            let v = read_json(&map)?;
            env.input("map", digest_json(&v));
            let gamma = in_file(&map, BvMap::from_json(&v))?;
            let eps = rational_arg("eps", &eps)?;
            let r = make_injective(&gamma, &eps, cli.seed, tol)?;
            sink.main("embed.json", &env.wrap(r.to_json())).map_err(werr)
        }
        Command::Hausdorff { a, b, h } => {
            let mut env = new_env("hausdorff");
            let va = read_json(&a)?;
            let vb = read_json(&b)?;
            env.input("a", digest_json(&va));
            env.input("b", digest_json(&vb));
            let result = hausdorff_json(&a, &va, &b, &vb, h, mode)?;
            sink.main("hausdorff.json", &env.wrap(result)).map_err(werr)
        }
        Command::Demo(demo) => run_demo(demo, &sink, new_env("demo"), tol),
    }
}

fn search_json<S: Scalar>(c: &PolyCurve<S>, degree: u32, tol: Tolerance) -> Run<Value> {
    let found = certificate_search(c, degree, tol)?;
    let table: Vec<Value> = search_table(c, degree)?
        .into_iter()
        .map(|(form, v)| json!({ "form": form.to_string(), "integral": curvehull::scalar::complex_to_json(&v.algebraic) }))
        .collect();
    Ok(json!({
        "degree": degree,
        "found": found.is_some(),
        "certificate": found.map(|c| c.to_json()),
        "table": table,
    }))
}

fn read_tube(lambda: &PolyCurve<Q>, radius: Option<String>, tube: Option<PathBuf>, env: &mut Envelope) -> Run<Tube> {
    match (radius, tube) {
        (Some(r), None) => Ok(Tube::new(lambda.clone(), rational_arg("radius", &r)?)?),
        (None, Some(path)) => {
            let v = read_json(&path)?;
            env.input("tube", digest_json(&v));
            in_file(&path, Tube::from_json(&v))
        }
        _ => Err(Failure {
            code: 1,
            message: "give exactly one of --radius and --tube".into(),
        }),
    }
}

enum Shape {
    Curve(AnyCurve),
    Sample(CompactSample<Q>),
}

fn shape(path: &Path, v: &Value) -> Run<Shape> {
    if v.get("params").is_some() {
        Ok(Shape::Curve(in_file(path, AnyCurve::from_json(v))?))
    } else {
        Ok(Shape::Sample(in_file(path, CompactSample::<Q>::from_json(v))?))
    }
}

fn hausdorff_json(a: &Path, va: &Value, b: &Path, vb: &Value, h: Option<f64>, mode: NumericMode) -> Run<Value> {
    match (shape(a, va)?, shape(b, vb)?) {
        (Shape::Curve(x), Shape::Curve(y)) => {
            let (x, y) = (x.into_f64(), y.into_f64());
            let step = h.unwrap_or(x.mesh().min(y.mesh()) / 4.0);
            Ok(json!({ "kind": "polylines", "h": step, "distance": hausdorff_polylines(&x, &y, step)? }))
        }
        (x, y) => {
            let as_sample = |s: Shape| match s {
                Shape::Curve(c) => CompactSample::from_curve(&c.into_rational()),
                Shape::Sample(s) => s,
            };
            let (x, y) = (as_sample(x), as_sample(y));
            match mode {
                NumericMode::Rational => {
                    let d2 = hausdorff2_points(&x, &y)?;
                    let (lo, hi) = sqrt_bounds(&d2);
                    Ok(json!({
                        "kind": "points",
                        "distance_squared": d2.to_json(),
                        "distance_lower": lo.to_json(),
                        "distance_upper": hi.to_json(),
                        "distance": d2.to_f64().sqrt(),
                    }))
                }
                NumericMode::F64 => Ok(json!({ "kind": "points", "distance": hausdorff_points(&x.to_f64(), &y.to_f64())? })),
            }
        }
    }
}

fn curve_layer(label: String, c: &PolyCurve<f64>) -> Layer {
    Layer::projected(label, c.points(), c.is_closed())
}

fn model_layers(label: &str, m: &HullModel, out: &mut Vec<Layer>) {
    match m {
        HullModel::CurveOnly(c) => out.push(curve_layer(label.to_string(), c)),
        HullModel::PolygonWithInterior { boundary, .. } => out.push(curve_layer(label.to_string(), boundary)),
        HullModel::ParametricDisc { center, axis, radius } => {
            let pts: Vec<Vec<f64>> = (0..128)
                .map(|j| {
                    let z = num_complex::Complex::from_polar(*radius, std::f64::consts::TAU * j as f64 / 128.0);
                    let w = center[0] + z * axis[0];
                    vec![w.re, w.im]
                })
                .collect();
            out.push(Layer::projected(format!("{label} (disc)"), &pts, true));
        }
        HullModel::ExplicitUnion(parts) => parts.iter().for_each(|p| model_layers(label, p, out)),
    }
}

fn write_demo(sink: &Sink, name: &str, csv: &str, plot: &str, manifest: Value) -> Run<()> {
    let werr = write_err(&sink.dir);
    sink.side(&format!("{name}.csv"), csv, true).map_err(&werr)?;
    sink.side(&format!("{name}.svg"), plot, false).map_err(&werr)?;
    if sink.dir.is_some() {
        sink.main(&format!("{name}.json"), &manifest).map_err(&werr)?;
    }
    Ok(())
}

fn run_demo(demo: Demo, sink: &Sink, mut env: Envelope, tol: Tolerance) -> Run<()> {
    let circle = |n: usize| curvehull::hull_lab::HullModel::CurveOnly(
        PolyCurve::from_points(
            curvehull::Space::Complex(1),
            true,
            curvehull::curve::unit_roots(n).into_iter().map(|(c, s)| vec![c, s]).collect(),
        )
        .expect("n >= 3"),
    );
    match demo {
        Demo::Slit { k, n } => {
            env.command = "demo slit".into();
            let table = hull_lab::slit_table(&k, n, tol)?;
            let mut layers = Vec::new();
            model_layers("unit circle", &circle(512), &mut layers);
            let mut digests = serde_json::Map::new();
            for &kk in &k {
                let s = hull_lab::slit_annulus_family(kk, n, tol)?;
                digests.insert(kk.to_string(), Value::String(s.curve.digest()));
                layers.push(curve_layer(format!("γ_{kk}"), &s.curve.to_f64()));
            }
            let csv = table.to_csv();
            let manifest = env.wrap(json!({ "k": k, "n": n, "curve_digests": digests, "csv_digest": digest_json(&Value::String(csv.clone())) }));
            write_demo(sink, "slit", &csv, &svg::render("slit-annulus curves", &layers), manifest)
        }
        Demo::Graph { k, n, h } => {
            env.command = "demo graph".into();
            let table = hull_lab::graph_table(&k, n, h, tol)?;
            let mut layers = Vec::new();
            let mut digests = serde_json::Map::new();
            for &kk in &k {
                let g = hull_lab::graph_family(kk, n, tol)?;
                if layers.is_empty() {
                    layers.push(curve_layer("σ".into(), &g.sigma.to_f64()));
                }
                digests.insert(kk.to_string(), Value::String(g.sigma_k.base().digest()));
                layers.push(curve_layer(format!("σ_{kk}"), &g.sigma_k.base().to_f64()));
            }
            let csv = table.to_csv();
            let manifest = env.wrap(json!({ "k": k, "n": n, "h": h, "base_digests": digests, "csv_digest": digest_json(&Value::String(csv.clone())) }));
            write_demo(sink, "graph", &csv, &svg::render("hyperbola images", &layers), manifest)
        }
        Demo::Kallin { k, m, degree, trials } => {
            env.command = "demo kallin".into();
            let table = hull_lab::kallin_table(&k, m)?;
            let data = k.iter().map(|&kk| hull_lab::kallin_example(kk, m)).collect::<curvehull::Result<Vec<_>>>()?;
            let limit = data
                .first()
                .map(|d| d.x.clone())
                .ok_or_else(|| Failure { code: 1, message: "--k must list at least one value".into() })?;
            let sets: Vec<_> = data.iter().map(|d| d.x_k.clone()).collect();
            let hulls: Vec<_> = data.iter().map(|d| d.hull_k.clone()).collect();
            let report = hull_lab::hull_limit_inequality(&sets, &hulls, &limit, degree, trials, env.seed)?;
            let mut layers = Vec::new();
            for d in &data {
                model_layers(&format!("X̂_{}", d.k), &d.hull_k, &mut layers);
            }
            model_layers("X̂", &data[0].hull, &mut layers);
            let csv = table.to_csv();
            let report_csv = report.table().to_csv();
            sink.side("kallin_report.csv", &report_csv, false).map_err(write_err(&sink.dir))?;
            let manifest = env.wrap(json!({
                "k": k, "m": m, "degree": degree, "trials": trials,
                "violations": report.violations(),
                "csv_digest": digest_json(&Value::String(csv.clone())),
                "report_digest": digest_json(&Value::String(report_csv)),
            }));
            write_demo(sink, "kallin", &csv, &svg::render("circles in C^2 and their hulls", &layers), manifest)
        }
        Demo::Tangent { count, m } => {
            env.command = "demo tangent".into();
            let table = hull_lab::tangent_table(count, m)?;
            let tc = hull_lab::tangent_circles(count, m)?;
            let mut layers = vec![curve_layer("big circle".into(), &tc.big)];
            layers.extend(tc.g.iter().enumerate().map(|(j, c)| curve_layer(format!("G_{}", j + 1), c)));
            layers.extend(tc.e.iter().enumerate().map(|(j, c)| curve_layer(format!("E_{}", j + 1), c)));
            let csv = table.to_csv();
            let manifest = env.wrap(json!({ "count": count, "m": m, "csv_digest": digest_json(&Value::String(csv.clone())) }));
            write_demo(sink, "tangent", &csv, &svg::render("tangent circles", &layers), manifest)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
