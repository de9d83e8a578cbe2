//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Runtime limits are part of each criterion.

use std::collections::HashSet;
use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;

use curvehull::certificates::{
    certificate_search, certify, contour_integral, exponents_of_degree, search_table, totally_real_frame,
    winding_number, CPolynomial, OneForm,
};
use curvehull::closing::{contain_in_pc_curve, contains_subpolyline, Tube};
use curvehull::curve::vector::point_segment_dist2;
use curvehull::curve::from_complex;
use curvehull::embed::{make_injective, secant_cover_bound, BvMap, Domain};
use curvehull::hull_lab::{graph_family, graph_hausdorff, hull_limit_inequality, kallin_example, slit_annulus_family};
use curvehull::metrics::hausdorff_polylines;
use curvehull::perturb::{perturb_rectifiable, Ball};
use curvehull::rng::seeded;
use curvehull::scalar::dyadic;
use curvehull::{PolyCurve, Scalar, Space, Tolerance, Q};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn q(n: i64, d: i64) -> Q {
    Q::ratio(n, d)
}

fn rand_q(rng: &mut impl Rng, bits: u32) -> Q {
    dyadic(rng.random_range(-1.0..1.0), bits)
}

fn rand_c(rng: &mut impl Rng, n: usize) -> Vec<Complex<Q>> {
    (0..n).map(|_| Complex::new(rand_q(rng, 16), rand_q(rng, 16))).collect()
}

fn frame_identity() -> Outcome {
    let mut rng = seeded(101);
    let mut count = 0;
    for trial in 0..100 {
        let n = 2 + trial % 2;
        let a = rand_c(&mut rng, n);
        let b = rand_c(&mut rng, n);
        let c = rand_c(&mut rng, n);
        let u: Vec<_> = b.iter().zip(&a).map(|(x, y)| x - y).collect();
        let w: Vec<_> = c.iter().zip(&a).map(|(x, y)| x - y).collect();
        let (_, form) = totally_real_frame(&a, &u, &w).map_err(err)?;
        let tri = PolyCurve::from_points(
            Space::Complex(n),
            true,
            vec![from_complex(&a), from_complex(&b), from_complex(&c)],
        )
        .map_err(err)?;
        let v = contour_integral(&tri, &form).map_err(err)?;
        ensure(v == Complex::new(Q::zero(), Q::one()), || format!("trial {trial}: integral {v}"))?;
        count += 1;
    }
    Ok(format!("{count} triangles, all integrals exactly i"))
}

fn conjugate_polygon<S: Scalar>(n: usize, round: impl Fn(f64) -> S) -> PolyCurve<S> {
    let pts = (0..n)
        .map(|j| {
            let t = TAU * j as f64 / n as f64;
            let (c, s) = (round(t.cos()), round(t.sin()));
            vec![c.clone(), s.clone(), c, S::zero() - s]
        })
        .collect();
    PolyCurve::from_points(Space::Complex(2), true, pts).expect("n >= 3")
}

fn conjugate_circle() -> Outcome {
    let form = OneForm::<Q>::monomial(vec![0, 1], 0);
    let n = 1024;
    let gf = conjugate_polygon(n, |x| x);
    let vf = contour_integral(&gf, &form.map_scalar(|x| x.to_f64())).map_err(err)?;
    let closed_form = n as f64 * (TAU / n as f64).sin();
    let float_err = (vf - Complex::new(0.0, closed_form)).norm();
    ensure(float_err < 1e-12, || format!("f64 N={n}: |I - iN sin(2pi/N)| = {float_err:e}"))?;
    let to_2pi = (vf - Complex::new(0.0, TAU)).norm();
    ensure(to_2pi < 1e-4, || format!("f64 N={n}: |I - 2pi i| = {to_2pi:e}"))?;

    let gq = conjugate_polygon(64, |x| dyadic(x, 40));
    let vq = contour_integral(&gq, &form).map_err(err)?;
    let pts = gq.points();
    let mut twice_area = Q::zero();
    for j in 0..pts.len() {
        let (p, r) = (&pts[j], &pts[(j + 1) % pts.len()]);
        twice_area += &p[0] * &r[1] - &r[0] * &p[1];
    }
    ensure(vq == Complex::new(Q::zero(), twice_area.clone()), || {
        format!("rational N=64: {vq} vs 2i*area = i*{twice_area}")
    })?;
    Ok(format!("f64 error {float_err:.1e}, |I - 2pi i| = {to_2pi:.1e}, rational N=64 matches shoelace exactly"))
}

fn random_polynomial(rng: &mut impl Rng, n: usize) -> CPolynomial<Q> {
    let mut terms = Vec::new();
    let mut seen = HashSet::new();
    for _ in 0..rng.random_range(1..=6) {
        let d = rng.random_range(0..=5u32);
        let exps = exponents_of_degree(n, d);
        let e = exps[rng.random_range(0..exps.len())].clone();
        if seen.insert(e.clone()) {
            terms.push((e, Complex::new(dyadic(rng.random_range(-2.0..2.0), 8), dyadic(rng.random_range(-2.0..2.0), 8))));
        }
    }
    CPolynomial::from_terms(n, terms).expect("distinct exponents")
}

fn exact_forms() -> Outcome {
    let mut rng = seeded(303);
    // Ten polylines for each n in {1, 2, 3}.
    let curves: Vec<PolyCurve<Q>> = (0..30)
        .map(|j| {
            let n = 1 + j / 10;
            let m = rng.random_range(3..=8);
            let pts = (0..m).map(|_| (0..2 * n).map(|_| dyadic(rng.random_range(-1.0..1.0), 10)).collect()).collect();
            PolyCurve::from_points(Space::Complex(n), true, pts).expect("m >= 3")
        })
        .collect();
    let mut count = 0;
    for j in 0..50 {
        let n = 1 + j % 3;
        let p = random_polynomial(&mut rng, n);
        let dp = OneForm::exact(&p);
        for c in curves.iter().filter(|c| c.complex_dim() == Some(n)) {
            let v = contour_integral(c, &dp).map_err(err)?;
            ensure(v.is_zero(), || format!("polynomial {j}: integral of dP is {v}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} integrals of dP, all exactly 0"))
}

/// A star-shaped polygon, simple by construction.
fn star(rng: &mut impl Rng, m: usize) -> Vec<(Q, Q)> {
    (0..m)
        .map(|j| {
            let t = TAU * (j as f64 + 0.4 * rng.random::<f64>()) / m as f64;
            let r = 0.6 + 0.8 * rng.random::<f64>();
            (dyadic(r * t.cos(), 20), dyadic(r * t.sin(), 20))
        })
        .collect()
}

fn random_simple_c2(rng: &mut impl Rng, in_line: bool, tol: Tolerance) -> PolyCurve<Q> {
    loop {
        let m = rng.random_range(6..=12);
        let planar = star(rng, m);
        let pts: Vec<Vec<Q>> = if in_line {
            // w = (1/2 + i/3) z
            let (cr, ci) = (q(1, 2), q(1, 3));
            planar
                .iter()
                .map(|(x, y)| vec![x.clone(), y.clone(), &cr * x - &ci * y, &cr * y + &ci * x])
                .collect()
        } else {
            let mat: Vec<[Q; 2]> = (0..4).map(|_| [rand_q(rng, 8), rand_q(rng, 8)]).collect();
            planar.iter().map(|(x, y)| mat.iter().map(|r| &r[0] * x + &r[1] * y).collect()).collect()
        };
        let Ok(c) = PolyCurve::from_points(Space::Complex(2), true, pts) else { continue };
        if c.zero_length_segment().is_none() && c.is_simple(tol).map(|w| w.simple).unwrap_or(false) {
            return c;
        }
    }
}

fn outside_segments(c: &PolyCurve<Q>, ball: &Ball<Q>) -> HashSet<(Vec<Q>, Vec<Q>)> {
    let r2 = &ball.radius * &ball.radius;
    c.segments()
        .filter(|s| point_segment_dist2(&ball.center, s.start, s.end) > r2)
        .map(|s| (s.start.to_vec(), s.end.to_vec()))
        .collect()
}

fn perturbation_suite() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = seeded(404);
    let eps = q(1, 10);
    let i = Complex::new(Q::zero(), Q::one());
    let mut worst = 0.0f64;
    for j in 0..10 {
        let gamma = random_simple_c2(&mut rng, j == 0, tol);
        let ball = Ball::new(gamma.points()[0].clone(), q(1, 4)).map_err(err)?;
        let r = perturb_rectifiable(&gamma, &eps, &ball, j as u64, tol).map_err(|e| format!("curve {j}: {e}"))?;
        ensure(r.curve.is_simple(tol).map_err(err)?.simple, || format!("curve {j}: output not simple"))?;
        let total = r.bv_bound.total_upper();
        ensure(total <= &eps * q(7, 8), || format!("curve {j}: bv upper bound {total} exceeds 7eps/8"))?;
        let measured = r.curve.bv_distance(&gamma).map_err(err)?;
        ensure(measured < eps.to_f64(), || format!("curve {j}: measured bv distance {measured}"))?;
        worst = worst.max(measured);
        ensure(outside_segments(&gamma, &ball) == outside_segments(&r.curve, &ball), || {
            format!("curve {j}: segment sets differ outside B")
        })?;
        let v = contour_integral(&r.curve, &r.certificate.form).map_err(err)?;
        ensure(!v.is_zero(), || format!("curve {j}: certificate integral is 0"))?;
        ensure(&r.plus_integral - &r.minus_integral == i, || format!("curve {j}: I+ - I- != i"))?;
    }
    Ok(format!("10 curves, worst bv distance {worst:.4} < eps = 0.1"))
}

fn arc_length_bound() -> Outcome {
    let mut rng = seeded(505);
    let mut worst = 0.0f64;
    for j in 0..20 {
        let m = rng.random_range(4..=24);
        let closed = j % 2 == 0;
        let pts = (0..m).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let c = PolyCurve::<f64>::from_points(Space::Real(3), closed, pts).map_err(err)?;
        let l = c.total_variation();
        for k in 0..=6 {
            let pieces = 1usize << k;
            let rep = secant_cover_bound(&c, pieces).map_err(err)?;
            let slack = 1.0 + 1e-12;
            let sum: f64 = rep.diameters.iter().flatten().map(|d| d * d).sum();
            ensure(sum <= 2.0 * l * l * slack, || format!("curve {j}, m={pieces}: sum {sum} > 2 l^2"))?;
            let dmax = rep.diameters.iter().flatten().cloned().fold(0.0, f64::max);
            ensure(dmax <= 2f64.sqrt() * l / pieces as f64 * slack, || {
                format!("curve {j}, m={pieces}: box diameter {dmax}")
            })?;
            worst = worst.max(sum / (2.0 * l * l));
        }
    }
    Ok(format!("140 covers, max sum/(2 l^2) = {worst:.3}"))
}

fn injectivity_repair() -> Outcome {
    let tol = Tolerance::default();
    let eps = q(1, 100);
    let eight: Vec<Vec<Q>> = (0..32)
        .map(|j| {
            let t = TAU * j as f64 / 32.0;
            vec![dyadic((2.0 * t).sin() / 2.0, 30), dyadic(t.sin(), 30), Q::zero()]
        })
        .collect();
    let constant = vec![vec![q(1, 3), q(-1, 5), q(2, 7)]; 5];
    let inputs = [
        ("figure-eight", BvMap::from_points(Domain::Circle, eight).map_err(err)?),
        ("constant", BvMap::from_points(Domain::Interval, constant).map_err(err)?),
    ];
    let mut notes = Vec::new();
    for (name, gamma) in &inputs {
        ensure(!gamma.is_injective(tol).map_err(err)?, || format!("{name}: input already injective"))?;
        let e = make_injective(gamma, &eps, 7, tol).map_err(|e| format!("{name}: {e}"))?;
        ensure(e.map.is_injective(tol).map_err(err)?, || format!("{name}: output not injective"))?;
        ensure(e.bv_distance_upper < eps, || format!("{name}: bound {}", e.bv_distance_upper))?;
        let measured = e.map.curve().bv_distance(gamma.curve()).map_err(err)?;
        ensure(measured < 0.01, || format!("{name}: measured bv distance {measured}"))?;
        let again = make_injective(gamma, &eps, 7, tol).map_err(err)?;
        ensure(again == e, || format!("{name}: rerun differs"))?;
        notes.push(format!("{name} {measured:.2e}"));
    }
    Ok(format!("bv distances {}", notes.join(", ")))
}

fn arc_containment() -> Outcome {
    let tol = Tolerance::default();
    let segment = PolyCurve::from_points(
        Space::Complex(2),
        false,
        vec![vec![Q::zero(); 4], vec![q(1, 1), q(1, 2), q(-1, 4), q(1, 8)]],
    )
    .map_err(err)?;
    let helix_pts = (0..16)
        .map(|j| {
            let t = 1.5 * PI * j as f64 / 15.0;
            vec![dyadic(t.cos(), 20), dyadic(t.sin(), 20), dyadic(t / TAU, 20), Q::zero()]
        })
        .collect();
    let helix = PolyCurve::from_points(Space::Complex(2), false, helix_pts).map_err(err)?;
    let mut notes = Vec::new();
    for (name, lambda) in [("segment", &segment), ("helix", &helix)] {
        for (radius, check_dh) in [(q(1, 5), false), (q(1, 20), true)] {
            let omega = Tube::new(lambda.clone(), radius.clone()).map_err(err)?;
            let eps = &radius / Q::from_i64(4);
            let r = contain_in_pc_curve(lambda, &omega, &eps, 11, tol).map_err(|e| format!("{name}: {e}"))?;
            ensure(contains_subpolyline(&r.curve, lambda), || format!("{name}: arc not contained"))?;
            ensure(omega.contains_curve(&r.curve), || format!("{name}: output leaves the tube"))?;
            ensure(r.curve.is_simple(tol).map_err(err)?.simple, || format!("{name}: output not simple"))?;
            let cert = certify(&r.curve, &r.certificate.form, tol).map_err(err)?;
            ensure(cert.verdict.is_certified(), || format!("{name}: not certified"))?;
            if check_dh {
                let h = 0.005;
                let dh = hausdorff_polylines(&r.curve.to_f64(), &lambda.to_f64(), h).map_err(err)?;
                ensure(dh < radius.to_f64() + h, || format!("{name}: d_H = {dh}"))?;
                notes.push(format!("{name} d_H {dh:.4}"));
            }
        }
    }
    Ok(format!("{} (radius 0.05)", notes.join(", ")))
}

fn circle_polygon(n: usize) -> PolyCurve<f64> {
    let pts = (0..n)
        .map(|j| {
            let t = TAU * j as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect();
    PolyCurve::from_points(Space::Complex(1), true, pts).expect("n >= 3")
}

/// Winding number about 0 from summed float angle increments.
fn float_winding(c: &PolyCurve<f64>) -> i64 {
    let pts = c.points();
    let total: f64 = (0..pts.len())
        .map(|j| {
            let (a, b) = (&pts[j], &pts[(j + 1) % pts.len()]);
            (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1])
        })
        .sum();
    (total / TAU).round() as i64
}

fn slit_annulus() -> Outcome {
    let tol = Tolerance::default();
    let circle = circle_polygon(4096);
    // Chords of the 4096-gon sit within 1 - cos(pi/4096) of the circle.
    let polygon_gap = 1.0 - (PI / 4096.0).cos();
    let mut notes = Vec::new();
    for k in [2u32, 4, 8, 16] {
        let s = slit_annulus_family(k, 512, tol).map_err(err)?;
        let c = s.curve.to_f64();
        let mesh = c.mesh();
        let dh = hausdorff_polylines(&c, &circle, mesh / 8.0).map_err(err)? + polygon_gap;
        ensure(dh <= 1.0 / k as f64 + mesh, || format!("k={k}: d_H(curve, circle) = {dh}"))?;
        let w = winding_number(&s.curve, &CPolynomial::variable(1, 0), tol).map_err(err)?;
        ensure(w == 0 && float_winding(&c) == 0, || format!("k={k}: winding {w}"))?;
        let d0 = s.hull.distance_to(&[0.0, 0.0], mesh);
        ensure(d0 >= 1.0 - mesh, || format!("k={k}: dist(0, hull) = {d0}"))?;
        notes.push(format!("k={k} d_H {dh:.3} dist0 {d0:.3}"));
    }
    Ok(notes.join("; "))
}

fn graph_demo() -> Outcome {
    let tol = Tolerance::default();
    let k = 4;
    let g = graph_family(k, 128, tol).map_err(err)?;
    let cert = g.sigma_certificate(tol).map_err(err)?;
    ensure(cert.verdict.is_certified(), || "sigma not certified by z2 dz1".into())?;
    ensure(certificate_search(&g.sigma_k, 3, tol).map_err(err)?.is_none(), || "sigma_k has a certificate".into())?;
    let table = search_table(&g.sigma_k, 3).map_err(err)?;
    for (form, v) in &table {
        ensure(v.algebraic.is_zero() && v.two_pi_i.is_zero(), || format!("integral of {form} is nonzero"))?;
    }
    let mesh = g.sigma_k.base().to_f64().mesh().max(g.sigma.to_f64().mesh());
    let dh = graph_hausdorff(&g, 0.01).map_err(err)?;
    ensure(dh <= 3.0 / k as f64 + mesh, || format!("d_H(sigma_k, sigma) = {dh}"))?;
    Ok(format!("{} monomial forms all exactly 0, d_H {dh:.3}", table.len()))
}

fn kallin_demo() -> Outcome {
    let m = 512;
    let ks = [1u32, 2, 4, 8, 16];
    let data = ks.iter().map(|&k| kallin_example(k, m)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let h = TAU / m as f64;
    let gap = data[0].inclusion_gap(h).map_err(err)?;
    ensure(gap >= 0.99, || format!("d_H(limit, hull) = {gap}"))?;
    let witness = data[0].hull_limit.distance_to(&[0.0; 4], h);
    ensure(witness >= 0.99, || format!("witness (0,0) at distance {witness}"))?;
    let bound = 2.0 * (2f64.sqrt() + 1.0) * PI;
    let lengths: Vec<f64> = data.iter().map(|d| d.length_k()).collect();
    let longest = lengths.iter().cloned().fold(0.0, f64::max);
    ensure(lengths.iter().all(|&l| l <= bound * 1.01), || format!("lengths {lengths:?} exceed {bound}"))?;
    ensure(longest >= bound * 0.99, || format!("longest {longest} not within 1% of {bound}"))?;
    let sets: Vec<_> = data.iter().map(|d| d.x_k.clone()).collect();
    let hulls: Vec<_> = data.iter().map(|d| d.hull_k.clone()).collect();
    let report = hull_limit_inequality(&sets, &hulls, &data[0].x, 3, 50, 17).map_err(err)?;
    ensure(report.violations() == 0, || format!("{} violations", report.violations()))?;
    Ok(format!("gap {gap:.4}, longest {longest:.4} vs bound {bound:.4}, {} checks", report.rows.len()))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("frame certificate identity", Duration::from_secs(5), frame_identity),
        ("conjugate-circle certificate", Duration::from_secs(1), conjugate_circle),
        ("exact-form vanishing", Duration::from_secs(10), exact_forms),
        ("perturbation suite", Duration::from_secs(10), perturbation_suite),
        ("secant cover bound", Duration::from_secs(5), arc_length_bound),
        ("injectivity repair", Duration::from_secs(5), injectivity_repair),
        ("arc containment pipeline", Duration::from_secs(10), arc_containment),
        ("slit-annulus demonstration", Duration::from_secs(10), slit_annulus),
        ("graph-family demonstration", Duration::from_secs(30), graph_demo),
        ("two-circle demonstration", Duration::from_secs(10), kallin_demo),
    ];
    let mut failed = 0;
    for (j, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|d| {
            if elapsed <= *limit {
                Ok(d)
            } else {
                Err(format!("{d}; took longer than {limit:?}"))
            }
        });
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {name} ({:.2} s): {detail}", j + 1, elapsed.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
