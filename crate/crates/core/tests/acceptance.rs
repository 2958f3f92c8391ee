//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use grasslp::bounds::{
    crossing_point, degree2_bound, degree2_coefficients, degree3_upper, dimension_sum_rate_check, lp_verify,
    mean_sigma, simplex_bound, CertificateInput,
};
use grasslp::codes::{audit, principal_y, CodeSet};
use grasslp::jack::{check_bibinom, pieri_q_sum};
use grasslp::partitions::{dim_on_ratio, enumerate, part};
use grasslp::rational::{frac, int, to_f64, Rational};
use grasslp::spectra::{lambda_k, JacobiOperator, Source};
use grasslp::threeterm::{closed_form_diag, closed_form_offdiag, ThreeTermData};
use grasslp::univariate::{row, UPoly};
use grasslp::zonal::ZonalTable;
use grasslp::SymPoly;
use num_traits::Zero;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn m_poly(m: usize, terms: &[(&[u32], Rational)]) -> SymPoly {
    SymPoly::from_terms(m, terms.iter().map(|(p, c)| (part(p), c.clone()))).unwrap()
}

fn zonal_examples() -> Outcome {
    let t0 = Instant::now();
    let mut checked = 0;
    for (m, n) in [(2usize, 5usize), (2, 6), (3, 7), (3, 8)] {
        let t = ZonalTable::build(m, n, 2).map_err(|e| e.to_string())?;
        let (mi, ni) = (m as i64, n as i64);
        let p1 = m_poly(m, &[(&[1], int(1)), (&[], -frac(mi * mi, ni))]);
        let p11 = m_poly(
            m,
            &[
                (&[1, 1], int(1)),
                (&[1], -frac((mi - 1) * (mi - 1), ni - 2)),
                (&[], frac(mi * mi * (mi - 1) * (mi - 1), 2 * (ni - 1) * (ni - 2))),
            ],
        );
        let p2 = m_poly(
            m,
            &[
                (&[2], int(1)),
                (&[1, 1], frac(2, 3)),
                (&[1], -frac(2 * (mi + 2) * (mi + 2), 3 * (ni + 4))),
                (&[], frac(mi * mi * (mi + 2) * (mi + 2), 3 * (ni + 2) * (ni + 4))),
            ],
        );
        for (k, raw) in [(part(&[1]), p1), (part(&[1, 1]), p11), (part(&[2]), p2)] {
            let normalized = raw.scale(&(int(1) / raw.eval_ones()));
            let got = t.get(&k).map_err(|e| e.to_string())?;
            ensure(got == &normalized, || format!("P{k} for (m, n) = ({m}, {n}): got {got}, expected {normalized}"))?;
            checked += 1;
        }
    }
    within(t0.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{checked} polynomials equal, {:.2?}", t0.elapsed()))
}

fn gram_dimension() -> Outcome {
    let t0 = Instant::now();
    let mut checked = 0;
    for m in 1..=3 {
        for n in [7, 9, 12] {
            let t = ZonalTable::build(m, n, 8).map_err(|e| e.to_string())?;
            for kappa in t.index().list().iter().filter(|p| p.degree() <= 4) {
                let p = t.get(kappa).unwrap();
                let g = t.inner_product(p, p).map_err(|e| e.to_string())? * t.dim_rational(kappa).unwrap();
                ensure(g == int(1), || format!("d[P,P] = {g} for {kappa}, m = {m}, n = {n}"))?;
                checked += 1;
            }
        }
    }
    within(t0.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{checked} cases, {:.2?}", t0.elapsed()))
}

fn three_term_structure() -> Outcome {
    let mut checked = 0;
    for m in 1..=3 {
        for n in [7, 9] {
            let t = ThreeTermData::build(m, n, 4).map_err(|e| e.to_string())?;
            let f = t.check_structure();
            ensure(f.is_empty(), || format!("m = {m}, n = {n}: {}", f[0].0))?;
            checked += 1;
        }
    }
    let t = ThreeTermData::build(2, 4, 4).map_err(|e| e.to_string())?;
    for s in 0..=4 {
        for kappa in t.level(s) {
            let b = t.b_diag(kappa);
            ensure(b == int(1), || format!("B[{kappa},{kappa}] = {b} for (m, n) = (2, 4)"))?;
        }
    }
    Ok(format!("{checked} (m, n) pairs to k = 4; B diag = m/2 at n = 2m"))
}

fn closed_forms() -> Outcome {
    let mut checked = 0;
    for m in 1..=3 {
        for n in 2 * m..=12 {
            let t = ThreeTermData::build(m, n, 3).map_err(|e| e.to_string())?;
            for kappa in enumerate(m, 3).list() {
                let diag = closed_form_diag(kappa, m, n).map_err(|e| e.to_string())?.exact;
                ensure(diag == t.b_diag(kappa), || format!("B at {kappa}, m = {m}, n = {n}"))?;
                checked += 1;
                for i in kappa.u_set(m) {
                    let mu = kappa.raise(i, m).unwrap();
                    let a = t.a_entry(kappa, &mu);
                    let expected = &a * &a / dim_on_ratio(kappa, i, m, n).unwrap();
                    let rad = closed_form_offdiag(kappa, i, m, n).map_err(|e| e.to_string())?.exact;
                    ensure(rad == expected, || format!("A' radicand at {kappa}, i = {}, m = {m}, n = {n}", i + 1))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} entries equal"))
}

fn christoffel_darboux() -> Outcome {
    let mut rng = common::rng(11);
    let mut checked = 0;
    for m in 1..=3 {
        for n in [7, 9] {
            let t = ThreeTermData::build(m, n, 3).map_err(|e| e.to_string())?;
            let mut point = || -> Vec<Rational> {
                (0..m).map(|_| frac(rng.gen_range(0..=60), rng.gen_range(1..=60))).collect()
            };
            let pts: Vec<_> = (0..20).map(|_| (point(), point())).collect();
            for s in 0..=3 {
                let f = t.cd_check(s, &pts).map_err(|e| e.to_string())?;
                ensure(f.is_empty(), || format!("m = {m}, n = {n}, k = {s}: {}", f[0].0))?;
                checked += 1;
            }
        }
    }
    Ok(format!("(i) and (ii) at 20 pairs for {checked} (m, n, k)"))
}

fn identity_suites() -> Outcome {
    let mut partitions = 0;
    for m in 1..=4 {
        for kappa in enumerate(m, 8).list() {
            let v = pieri_q_sum(kappa, m);
            ensure(v == int(m as i64), || format!("q-sum {v} at {kappa}, m = {m}"))?;
            partitions += 1;
        }
        let f = check_bibinom(m, 6);
        ensure(f.is_empty(), || f[0].0.clone())?;
    }
    Ok(format!("q-sum on {partitions} partitions; commutator identity to degree 6"))
}

fn rank_one_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [6, 10, 20] {
        let table = ZonalTable::build(1, n, 9).map_err(|e| e.to_string())?;
        for k in 0..=8 {
            let p = UPoly::from_sympoly(table.get(&row(k + 1)).unwrap()).map_err(|e| e.to_string())?;
            let roots: Vec<f64> = p.isolate_roots(&frac(1, 1 << 50)).iter().map(|r| to_f64(&r.midpoint())).collect();
            let ev = JacobiOperator::build(1, n, k, Source::Exact).map_err(|e| e.to_string())?.eigenvalues();
            ensure(roots.len() == ev.len(), || format!("n = {n}, k = {k}: {} roots, {} eigenvalues", roots.len(), ev.len()))?;
            for (a, b) in roots.iter().zip(&ev) {
                worst = worst.max((a - b).abs());
            }
        }
        let l0 = lambda_k(1, n, 0, Source::Exact).map_err(|e| e.to_string())?;
        let want = 1.0 / n as f64;
        ensure((l0 - want).abs() <= 2.0 * f64::EPSILON * want, || format!("lambda_0 = {l0} for n = {n}"))?;
    }
    ensure(worst < 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("max |root - eigenvalue| = {worst:.1e}"))
}

fn lambda_trend() -> Outcome {
    let t0 = Instant::now();
    let mut gaps = Vec::new();
    let mut last = 0.0;
    for k in [10, 20, 40] {
        last = lambda_k(2, 2 * k, k, Source::ClosedForm).map_err(|e| e.to_string())?;
        gaps.push((last - 1.5).abs());
    }
    ensure(gaps.windows(2).all(|w| w[1] <= w[0]), || format!("|lambda - 1.5| = {gaps:?} not non-increasing"))?;
    ensure(gaps[2] <= 0.05 * 1.5, || format!("lambda_40 = {last}"))?;
    within(t0.elapsed(), Duration::from_secs(120))?;
    Ok(format!("lambda_40 = {last:.4}, gaps {:.4}/{:.4}/{:.4}, {:.2?}", gaps[0], gaps[1], gaps[2], t0.elapsed()))
}

fn crossing_table() -> Outcome {
    let t0 = Instant::now();
    let table = [1.4528, 1.2714, 1.1853, 1.1372, 1.1067, 1.0856, 1.0702, 1.0584, 1.0492];
    let mut worst: f64 = 0.0;
    for (m, want) in (2..=10).zip(table) {
        let s0 = crossing_point(m).map_err(|e| e.to_string())?.s0;
        worst = worst.max((s0 - want).abs());
        ensure((s0 - want).abs() < 1e-3, || format!("m = {m}: {s0} vs {want}"))?;
    }
    within(t0.elapsed(), Duration::from_secs(5))?;
    Ok(format!("max deviation {worst:.1e}, {:.2?}", t0.elapsed()))
}

fn bound_anchors() -> Outcome {
    for (m, n) in [(2usize, 5usize), (2, 8), (3, 7)] {
        let (mi, ni) = (m as i64, n as i64);
        let at_mean = degree2_bound(m, n, &mean_sigma(m, n)).map_err(|e| e.to_string())?.exact_value();
        let want = frac((ni - 1) * (ni + 2), 2) / (int(1) - frac(mi, ni));
        ensure(at_mean.as_ref() == Some(&want), || format!("degree2 at m^2/n for ({m}, {n}): {at_mean:?}"))?;
        let s = mean_sigma(m, n) - frac(2 * mi * (ni - mi), ni * (ni - 1) * (ni + 2));
        let c = int(ni * (ni + 1) / 2);
        let a = simplex_bound(m, n, &s).map_err(|e| e.to_string())?.exact_value();
        let b = degree2_bound(m, n, &s).map_err(|e| e.to_string())?.exact_value();
        ensure(a.as_ref() == Some(&c) && b.as_ref() == Some(&c), || format!("({m}, {n}): simplex {a:?}, degree2 {b:?}"))?;
    }
    let (_, exact) = degree3_upper(2, 6);
    ensure(exact == Some(int(1)), || format!("degree-3 endpoint for (2, 6): {exact:?}"))?;
    Ok("degree2 at m^2/n, simplex = degree2 = C(n+1,2), degree-3 endpoint 1".into())
}

fn certificate_round_trip() -> Outcome {
    let mut checked = 0;
    for (m, n) in [(1usize, 4usize), (2, 5), (2, 8), (3, 7), (3, 9)] {
        let table = ZonalTable::build(m, n, 2).map_err(|e| e.to_string())?;
        let mean = mean_sigma(m, n);
        for s in [&mean * frac(1, 3), &mean * frac(9, 10), &mean * frac(11, 10), &mean * frac(3, 2)] {
            let linear = UPoly::new(vec![-s.clone(), int(1)]);
            let quad = linear.mul(&UPoly::x());
            for (name, cert, closed) in [
                ("simplex", linear, simplex_bound(m, n, &s)),
                ("degree2", quad.clone(), degree2_bound(m, n, &s)),
            ] {
                let Ok(closed) = closed else { continue };
                let lp = lp_verify(&CertificateInput::Sigma(cert), &s, &table).map_err(|e| format!("{name}: {e}"))?;
                ensure(lp.exact_value() == closed.exact_value(), || {
                    format!("{name} at ({m}, {n}, s = {s}): {:?} vs {:?}", lp.exact_value(), closed.exact_value())
                })?;
                checked += 1;
            }
            let e = table.p_expand(&quad.compose_sigma(m)).map_err(|e| e.to_string())?;
            let [f2, f11, f1, f0] = degree2_coefficients(m, n, &s, &Rational::zero());
            ensure(e.coeff(&part(&[2])) == f2 && e.coeff(&part(&[1])) == f1 && e.constant() == f0, || {
                format!("f-coefficients at ({m}, {n}, s = {s})")
            })?;
            ensure(m == 1 || e.coeff(&part(&[1, 1])) == f11, || format!("f11 at ({m}, {n}, s = {s})"))?;
        }
    }
    ensure(checked >= 10, || format!("only {checked} applicable comparisons"))?;
    Ok(format!("{checked} exact matches, f-coefficients equal"))
}

fn check_code(code: &CodeSet, rng: &mut impl Rng, label: &str) -> Result<(), String> {
    let rep = audit(code, 3).map_err(|e| format!("{label}: {e}"))?;
    for b in &rep.bounds {
        ensure(code.len() as f64 <= b.value * (1.0 + 1e-12), || format!("{label}: {} = {} < |C|", b.method, b.value))?;
    }
    for p in &rep.positivity {
        ensure(p.sum >= -1e-8, || format!("{label}: sum P{} = {}", p.kappa, p.sum))?;
    }
    let g = common::random_orthogonal(code.n, rng);
    let rotated: Vec<_> = code.frames.iter().map(|f| f * &g).collect();
    for i in 0..code.len() {
        for j in 0..code.len() {
            let a = principal_y(&code.frames[i], &code.frames[j]).unwrap().y;
            let b = principal_y(&rotated[i], &rotated[j]).unwrap().y;
            let dev = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            ensure(dev < 1e-9, || format!("{label}: rotation moved y by {dev:e}"))?;
        }
    }
    Ok(())
}

fn audit_soundness() -> Outcome {
    let mut rng = common::rng(99);
    for trial in 0..50 {
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(2 * m..=8);
        let size = rng.gen_range(2..=20);
        let code = common::random_code(n, m, size, &mut rng);
        check_code(&code, &mut rng, &format!("random code {trial} ({m}, {n}, {size})"))?;
    }
    let planes = CodeSet::new(
        6,
        2,
        vec![common::coordinate_frame(6, &[0, 1]), common::coordinate_frame(6, &[2, 3]), common::coordinate_frame(6, &[4, 5])],
        None,
        false,
    )
    .unwrap();
    check_code(&planes, &mut rng, "orthogonal planes")?;
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let rotated = nalgebra::DMatrix::from_row_slice(2, 4, &[c, 0.0, c, 0.0, 0.0, c, 0.0, c]);
    let pair = CodeSet::new(4, 2, vec![common::coordinate_frame(4, &[0, 1]), rotated], None, false).unwrap();
    check_code(&pair, &mut rng, "45-degree pair")?;
    Ok("50 random codes and 2 structured codes".into())
}

fn dimension_sum() -> Outcome {
    let mut slack = f64::INFINITY;
    for k in [10, 20, 30] {
        let (emp, bound) = dimension_sum_rate_check(2, k, 2 * k).map_err(|e| e.to_string())?;
        ensure(emp <= bound + 0.05, || format!("k = {k}: {emp} > {bound} + 0.05"))?;
        slack = slack.min(bound + 0.05 - emp);
    }
    Ok(format!("smallest slack {slack:.4}"))
}

fn figure_csv() -> Outcome {
    let step = 0.01;
    let out = Command::new(env!("CARGO_BIN_EXE_grasslp"))
        .args(["plot", "--m", "2", "--from", "0.01", "--to", "1.99", "--step", &step.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let rows: Vec<(f64, f64)> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('s'))
        .map(|l| {
            let c: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (c[0], c[1] - c[2])
        })
        .collect();
    let changes: Vec<usize> = (1..rows.len()).filter(|&i| (rows[i - 1].1 < 0.0) != (rows[i].1 < 0.0)).collect();
    ensure(changes.len() == 1, || format!("{} sign changes", changes.len()))?;
    let s0 = crossing_point(2).map_err(|e| e.to_string())?.s0;
    let (lo, hi) = (rows[changes[0] - 1].0, rows[changes[0]].0);
    ensure(lo - step <= s0 && s0 <= hi + step, || format!("change between {lo} and {hi}, s0 = {s0}"))?;
    Ok(format!("{} rows, one sign change in [{lo}, {hi}]", rows.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("zonal examples", zonal_examples),
        ("Gram/dimension cross-check", gram_dimension),
        ("three-term structure", three_term_structure),
        ("closed-form coefficients", closed_forms),
        ("Christoffel-Darboux", christoffel_darboux),
        ("identity suites", identity_suites),
        ("m=1 spectral oracle", rank_one_oracle),
        ("lambda trend", lambda_trend),
        ("crossing table", crossing_table),
        ("closed-form bound anchors", bound_anchors),
        ("certificate round-trip", certificate_round_trip),
        ("code audit soundness", audit_soundness),
        ("dimension-sum rate", dimension_sum),
        ("rate curves CSV", figure_csv),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
