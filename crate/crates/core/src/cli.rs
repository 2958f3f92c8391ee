//! Command-line front end.
//!
//! Exit codes: 0 success, 1 domain/applicability failure (including a
//! failed audit or selftest), 2 usage or input-file error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{
    best_bound, crossing_point, degree2_bound, degree3_bound, grid, hamming_rate, lp_rate, lp_verify,
    orthoplex_bound, rate_table, rho, simplex_bound, BoundResult, CertificateInput,
};
use crate::codes::{audit, load_code};
use crate::error::{Error, Result};
use crate::jack::{check_bibinom, check_pieri, pieri_q_sum, IdentityFailure, JackTable};
use crate::partitions::{enumerate, Partition};
use crate::rational::{frac, from_f64, int, parse, render, Rational};
use crate::spectra::{eigen_bound_simple, eigen_bound_teps, JacobiOperator, Source};
use crate::threeterm::{closed_form_diag, closed_form_offdiag, ThreeTermData};
use crate::univariate::UPoly;
use crate::zonal::ZonalTable;

#[derive(Parser, Debug)]
#[command(name = "grasslp", version, about = "Zonal polynomials and LP bounds for Grassmannian codes")]
pub struct Cli {
    /// Output format (text, except csv for `plot`).
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Exact,
    ClosedForm,
}

impl From<SourceArg> for Source {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Exact => Source::Exact,
            SourceArg::ClosedForm => Source::ClosedForm,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Simplex,
    Orthoplex,
    Degree2,
    Degree3,
    Eigen,
    Teps,
    Lp,
    Best,
}

#[derive(Args, Debug, Clone)]
pub struct Space {
    /// Subspace dimension.
    #[arg(long)]
    pub m: usize,
    /// Ambient dimension.
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug, Clone)]
pub struct Distance {
    /// `s = m − δ²`, decimal or p/q.
    #[arg(long, conflicts_with = "delta")]
    pub s: Option<String>,
    /// Minimal chordal distance δ.
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print P_κ on the monomial and Jack bases.
    Zonal {
        #[command(flatten)]
        space: Space,
        /// Comma-separated parts, e.g. 2,1 (empty or 0 for the trivial partition).
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
    },
    /// Dump J′_k, or the exact A/B/C blocks with --blocks.
    Matrix {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = SourceArg::ClosedForm)]
        source: SourceArg,
        /// Exact three-term blocks instead of the float operator.
        #[arg(long)]
        blocks: bool,
    },
    /// Largest eigenvalue of T_k (optionally perturbed), or the full spectrum.
    Eigen {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = SourceArg::ClosedForm)]
        source: SourceArg,
        /// Print every eigenvalue.
        #[arg(long)]
        all: bool,
        /// Comma-separated ε on the top block.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Evaluate one bound, or the best of all.
    Bound {
        #[command(flatten)]
        space: Space,
        #[command(flatten)]
        distance: Distance,
        #[arg(long, value_enum, default_value_t = Method::Best)]
        method: Method,
        /// Degree for eigen/teps; the largest degree tried for best.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Comma-separated ε for teps (default ε_κ = a_κ).
        #[arg(long)]
        eps: Option<String>,
        /// LP certificate as comma-separated coefficients of 1, σ, σ², …
        #[arg(long, allow_hyphen_values = true)]
        certificate: Option<String>,
    },
    /// Asymptotic LP and Hamming rates.
    Rate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        s: f64,
    },
    /// Crossing point of the LP and Hamming rates.
    Crossing {
        #[arg(long)]
        m: usize,
    },
    /// Check an explicit code against every bound.
    Audit {
        /// Code file (JSON).
        path: PathBuf,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        /// Re-orthonormalize frames that are off by more than the tolerance.
        #[arg(long)]
        reorthonormalize: bool,
    },
    /// Rate curves for plotting (CSV by default).
    Plot {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.05)]
        from: f64,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
    },
    /// Run the exact identity suite.
    Selftest {
        /// Smaller parameter ranges.
        #[arg(long)]
        quick: bool,
    },
}

/// What a subcommand produced.
struct Report {
    header: String,
    text: String,
    json: Value,
    csv: Option<String>,
    ok: bool,
}

impl Report {
    fn new(header: String, text: String, json: Value) -> Self {
        Report { header, text, json, csv: None, ok: true }
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

fn provenance(cmd: &str, m: Option<usize>, n: Option<usize>, k: Option<usize>) -> String {
    let show = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
    format!("grasslp {cmd} m={} n={} k={}", show(m), show(n), show(k))
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    if t.is_empty() {
        return Ok(Partition::empty());
    }
    let parts = t
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Parse(format!("partition {text:?}")))?;
    let sorted = parts.windows(2).all(|w| w[0] >= w[1]);
    if !sorted {
        return Err(Error::Parse(format!("partition {text:?}: parts must be weakly decreasing")));
    }
    Partition::new(parts)
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("number {p:?}")))
        })
        .collect()
}

fn distance_to_s(m: usize, d: &Distance) -> Result<Rational> {
    match (&d.s, d.delta) {
        (Some(s), _) => parse(s),
        (None, Some(delta)) => {
            let dr = from_f64(delta)?;
            Ok(int(m as i64) - &dr * &dr)
        }
        (None, None) => Err(Error::Parse("distance: one of --s or --delta is required".into())),
    }
}

fn bound_json(b: &BoundResult) -> Value {
    serde_json::to_value(b).expect("serializable")
}

fn bound_line(b: &BoundResult) -> String {
    let mut line = format!("{}: {}", b.method, b.value);
    if let Some(e) = &b.exact {
        let _ = write!(line, " (exact {e})");
    }
    if let Some(k) = b.k {
        let _ = write!(line, " [k = {k}]");
    }
    if let Some(n) = &b.note {
        let _ = write!(line, " -- {n}");
    }
    line
}

fn cmd_zonal(space: &Space, kappa: &str) -> Result<Report> {
    let kappa = parse_partition(kappa)?;
    let k = kappa.degree();
    let table = ZonalTable::cached(space.m, space.n, k)?;
    let p = table.get(&kappa)?;
    let header = provenance("zonal", Some(space.m), Some(space.n), Some(k));
    let eig = render(table.eigenvalue(&kappa)?);
    let dim = table.dim(&kappa)?.to_string();
    let jack = table.render_in_jack(&kappa)?;
    let text = format!("P{kappa} = {p}\nP{kappa} = {jack}\neigenvalue = {eig}\nd_2kappa = {dim}\n");
    let json = json!({
        "kappa": kappa.to_string(),
        "monomial": p.to_string(),
        "jack": jack,
        "terms": p.to_term_list(),
        "eigenvalue": eig,
        "dim": dim,
    });
    let mut csv = String::from("lambda,coefficient\n");
    for (lambda, c) in p.terms() {
        let _ = writeln!(csv, "\"{lambda}\",{}", render(c));
    }
    Ok(Report::new(header, text, json).with_csv(csv))
}

fn cmd_matrix(space: &Space, k: usize, source: Source, blocks: bool) -> Result<Report> {
    let header = provenance("matrix", Some(space.m), Some(space.n), Some(k));
    if blocks {
        let t = ThreeTermData::build(space.m, space.n, k)?;
        let mut text = String::new();
        let mut csv = String::from("block,s,row,col,value\n");
        let mut js = Vec::new();
        for s in 0..=k {
            let level: Vec<String> = t.level(s).iter().map(|p| p.to_string()).collect();
            let up: Vec<String> = t.level(s + 1).iter().map(|p| p.to_string()).collect();
            let down: Vec<String> = if s == 0 { Vec::new() } else { t.level(s - 1).iter().map(|p| p.to_string()).collect() };
            for (name, mat, cols) in [("A", &t.a[s], &up), ("B", &t.b[s], &level), ("C", &t.c[s], &down)] {
                let _ = writeln!(text, "{name}_{s}:");
                let mut rows = Vec::new();
                for i in 0..mat.rows {
                    let vals: Vec<String> = (0..mat.cols).map(|j| render(mat.get(i, j))).collect();
                    let _ = writeln!(text, "  {:>10}  [{}]", level[i], vals.join(", "));
                    for (j, v) in vals.iter().enumerate() {
                        let _ = writeln!(csv, "{name},{s},\"{}\",\"{}\",{v}", level[i], cols[j]);
                    }
                    rows.push(vals);
                }
                js.push(json!({"block": name, "s": s, "rows": level, "cols": cols, "values": rows}));
            }
        }
        return Ok(Report::new(header, text, json!({ "blocks": js })).with_csv(csv));
    }
    let j = JacobiOperator::build(space.m, space.n, k, source)?;
    let labels: Vec<String> = j.index.list().iter().map(|p| p.to_string()).collect();
    let mut text = String::new();
    let mut csv = String::from("row,col,value\n");
    let mut rows = Vec::new();
    for i in 0..j.dim() {
        let vals: Vec<f64> = (0..j.dim()).map(|c| j.matrix[(i, c)]).collect();
        let shown: Vec<String> = vals.iter().map(|v| format!("{v:.12}")).collect();
        let _ = writeln!(text, "{:>10}  {}", labels[i], shown.join(" "));
        for (c, v) in vals.iter().enumerate() {
            if *v != 0.0 {
                let _ = writeln!(csv, "\"{}\",\"{}\",{v}", labels[i], labels[c]);
            }
        }
        rows.push(vals);
    }
    let json = json!({"source": j.source, "labels": labels, "matrix": rows});
    Ok(Report::new(header, text, json).with_csv(csv))
}

fn cmd_eigen(space: &Space, k: usize, source: Source, all: bool, eps: Option<&str>) -> Result<Report> {
    let header = provenance("eigen", Some(space.m), Some(space.n), Some(k));
    let j = JacobiOperator::build(space.m, space.n, k, source)?;
    let labels: Vec<String> = j.index.list().iter().map(|p| p.to_string()).collect();
    if all {
        let ev = j.eigenvalues();
        let text: String = ev.iter().map(|v| format!("{v}\n")).collect();
        let csv: String = std::iter::once("index,eigenvalue\n".to_string())
            .chain(ev.iter().enumerate().map(|(i, v)| format!("{i},{v}\n")))
            .collect();
        return Ok(Report::new(header, text, json!({ "eigenvalues": ev })).with_csv(csv));
    }
    let p = match eps {
        Some(e) => j.perturbed(&parse_list(e)?)?,
        None => j.lambda_max()?,
    };
    let mut text = format!("lambda = {}\nresidual = {:e}\n", p.eigenvalue, p.residual);
    let mut csv = String::from("kappa,component\n");
    for (l, v) in labels.iter().zip(&p.vector) {
        let _ = writeln!(text, "  {l:>10}  {v}");
        let _ = writeln!(csv, "\"{l}\",{v}");
    }
    let json = json!({"lambda": p.eigenvalue, "residual": p.residual, "labels": labels, "vector": p.vector});
    Ok(Report::new(header, text, json).with_csv(csv))
}

fn cmd_bound(
    space: &Space,
    distance: &Distance,
    method: Method,
    k: usize,
    eps: Option<&str>,
    certificate: Option<&str>,
) -> Result<Report> {
    let (m, n) = (space.m, space.n);
    let s = distance_to_s(m, distance)?;
    let sf = crate::rational::to_f64(&s);
    let header = provenance("bound", Some(m), Some(n), Some(k));
    let eigen_result = |e: crate::spectra::EigenBoundResult, name: &str| BoundResult {
        method: name.into(),
        m,
        n,
        s: sf,
        value: e.bound,
        exact: None,
        window: crate::bounds::Window { lo: f64::NEG_INFINITY, hi: e.threshold, lo_open: true, hi_open: name == "teps" },
        k: Some(e.k),
        certificate: None,
        note: Some(format!(
            "lambda_(k-1) = {}, lambda_k = {}, lambda_eps = {}, residual = {:e}",
            e.lambda_prev, e.lambda_k, e.lambda_eps, e.residual
        )),
    };
    let single = match method {
        Method::Simplex => simplex_bound(m, n, &s)?,
        Method::Orthoplex => orthoplex_bound(m, n, &s)?,
        Method::Degree2 => degree2_bound(m, n, &s)?,
        Method::Degree3 => degree3_bound(m, n, &s)?,
        Method::Eigen => eigen_result(eigen_bound_simple(m, n, k, sf, Source::ClosedForm)?, "eigen"),
        Method::Teps => {
            let e = eps.map(parse_list).transpose()?;
            eigen_result(eigen_bound_teps(m, n, k, e.as_deref(), sf, Source::ClosedForm)?, "teps")
        }
        Method::Lp => {
            let text = certificate
                .ok_or_else(|| Error::Parse("certificate: --method lp needs --certificate".into()))?;
            let coeffs = text.split(',').map(parse).collect::<Result<Vec<_>>>()?;
            let u = UPoly::new(coeffs);
            let table = ZonalTable::cached(m, n, u.degree().max(1))?;
            lp_verify(&CertificateInput::Sigma(u), &s, &table)?
        }
        Method::Best => {
            let best = best_bound(m, n, &s, k)?;
            let mut text = String::new();
            match &best.best {
                Some(b) => {
                    let _ = writeln!(text, "best = {}", bound_line(b));
                }
                None => {
                    let _ = writeln!(text, "best = inf (no method applies)");
                }
            }
            let mut csv = String::from("method,k,value,exact\n");
            for b in &best.applicable {
                let _ = writeln!(text, "  {}", bound_line(b));
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    b.method,
                    b.k.map_or(String::new(), |k| k.to_string()),
                    b.value,
                    b.exact.clone().unwrap_or_default()
                );
            }
            for (method, reason) in &best.skipped {
                let _ = writeln!(text, "  {method}: not applicable ({reason})");
            }
            let json = serde_json::to_value(&best)?;
            return Ok(Report::new(header, text, json).with_csv(csv));
        }
    };
    let text = format!("{}\n", bound_line(&single));
    let csv = format!(
        "method,k,value,exact\n{},{},{},{}\n",
        single.method,
        single.k.map_or(String::new(), |k| k.to_string()),
        single.value,
        single.exact.clone().unwrap_or_default()
    );
    Ok(Report::new(header, text, bound_json(&single)).with_csv(csv))
}

fn cmd_rate(m: usize, s: f64) -> Result<Report> {
    let (lp, ham) = (lp_rate(m, s)?, hamming_rate(m, s)?);
    let r = rho(m, s);
    let text = format!("rho = {r}\nlp_rate = {lp}\nhamming_rate = {ham}\n");
    let csv = format!("s,rho,lp_rate,hamming_rate\n{s},{r},{lp},{ham}\n");
    let json = json!({"m": m, "s": s, "rho": r, "lp_rate": lp, "hamming_rate": ham});
    Ok(Report::new(provenance("rate", Some(m), None, None), text, json).with_csv(csv))
}

fn cmd_crossing(m: usize) -> Result<Report> {
    let c = crossing_point(m)?;
    let mut text = format!("{:.6}\n", c.s0);
    if c.extrapolated {
        text.push_str("(extrapolated: outside the checked range 2 <= m <= 10)\n");
    }
    let csv = format!("m,s0,extrapolated\n{m},{},{}\n", c.s0, c.extrapolated);
    Ok(Report::new(provenance("crossing", Some(m), None, None), text, serde_json::to_value(&c)?).with_csv(csv))
}

fn cmd_plot(m: usize, from: f64, to: Option<f64>, step: f64) -> Result<Report> {
    let to = to.unwrap_or(m as f64 - step);
    let rows = rate_table(m, &grid(from, to, step))?;
    let mut csv = String::from("s,lp_rate,hamming_rate\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{}", r.s, r.lp_rate, r.hamming_rate);
    }
    let text = csv.replace(',', "  ");
    Ok(Report::new(provenance("plot", Some(m), None, None), text, json!({ "rows": rows })).with_csv(csv))
}

fn cmd_audit(path: &Path, k_max: usize, reorth: bool) -> Result<Report> {
    let code = load_code(path, reorth)?;
    let rep = audit(&code, k_max)?;
    let header = provenance("audit", Some(rep.m), Some(rep.n), Some(k_max));
    let mut text = format!("|C| = {}\n", rep.size);
    if let Some(d) = &rep.min_distance {
        let _ = writeln!(text, "delta = {}\ns = {}\npair = {:?}", d.delta, d.s, d.pair);
    }
    for b in &rep.bounds {
        let k = b.k.map_or(String::new(), |k| format!(" [k = {k}]"));
        let _ = writeln!(text, "{}{k}: {} {}", b.method, b.value, if b.pass { "ok" } else { "VIOLATED" });
    }
    for (method, reason) in &rep.skipped {
        let _ = writeln!(text, "{method}: not applicable ({reason})");
    }
    for p in &rep.positivity {
        let _ = writeln!(text, "sum P{} = {:.12e}{}", p.kappa, p.sum, if p.nonnegative { "" } else { "  NEGATIVE" });
    }
    if let Some(note) = &rep.design_note {
        let _ = writeln!(text, "{note}");
    }
    for w in &rep.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    let _ = writeln!(text, "audit: {}", if rep.pass { "pass" } else { "FAIL" });
    let mut csv = String::from("kind,name,value,ok\n");
    for b in &rep.bounds {
        let _ = writeln!(csv, "bound,{},{},{}", b.method, b.value, b.pass);
    }
    for p in &rep.positivity {
        let _ = writeln!(csv, "positivity,\"{}\",{},{}", p.kappa, p.sum, p.nonnegative);
    }
    let ok = rep.pass;
    let mut report = Report::new(header, text, serde_json::to_value(&rep)?).with_csv(csv);
    report.ok = ok;
    Ok(report)
}

/// The exact identity suite; returns one `(name, failures)` entry per check.
pub fn selftest_suite(quick: bool) -> Result<Vec<(String, Vec<IdentityFailure>)>> {
    let mut out = Vec::new();
    let max_m = if quick { 2 } else { 3 };
    let kk = if quick { 2 } else { 3 };
    for m in 1..=max_m {
        for n in [7usize, 9] {
            let t = ThreeTermData::build(m, n, kk)?;
            out.push((format!("three-term structure m={m} n={n}"), t.check_structure()));
            let mut f = Vec::new();
            for kappa in enumerate(m, kk).list() {
                let diag = closed_form_diag(kappa, m, n)?.exact;
                if diag != t.b_diag(kappa) {
                    f.push(IdentityFailure(format!("closed-form B at {kappa}")));
                }
                for i in kappa.u_set(m) {
                    let mu = kappa.raise(i, m)?;
                    let a = t.a_entry(kappa, &mu);
                    let ratio = crate::partitions::dim_on_ratio(kappa, i, m, n)?;
                    if closed_form_offdiag(kappa, i, m, n)?.exact != &a * &a / ratio {
                        f.push(IdentityFailure(format!("closed-form A' at {kappa}, i = {}", i + 1)));
                    }
                }
            }
            out.push((format!("closed forms m={m} n={n}"), f));
            let pts = sample_points(m, 4, (m * 31 + n) as i64);
            let mut f = Vec::new();
            for s in 0..=kk {
                f.extend(t.cd_check(s, &pts)?);
            }
            out.push((format!("Christoffel-Darboux m={m} n={n}"), f));
        }
    }
    for m in 1..=4usize {
        let deg = if quick { 4 } else { 6 };
        let jt = JackTable::build(m, deg)?;
        out.push((format!("Pieri m={m}"), check_pieri(&jt)?));
        let mut f = Vec::new();
        for kappa in enumerate(m, 8).list() {
            if pieri_q_sum(kappa, m) != int(m as i64) {
                f.push(IdentityFailure(format!("q-sum identity at {kappa}")));
            }
        }
        out.push((format!("q-sum m={m}"), f));
        out.push((format!("bibinom m={m}"), check_bibinom(m, deg)));
    }
    Ok(out)
}

/// Deterministic rational sample pairs in `[0,1]^m`.
pub fn sample_points(m: usize, count: usize, seed: i64) -> Vec<(Vec<Rational>, Vec<Rational>)> {
    let mut state = seed.rem_euclid(9973) + 1;
    let mut next = || {
        state = (state * 7919 + 104_729) % 100_003;
        frac(state % 97, 96)
    };
    (0..count)
        .map(|_| {
            let x = (0..m).map(|_| next()).collect();
            let y = (0..m).map(|_| next()).collect();
            (x, y)
        })
        .collect()
}

fn cmd_selftest(quick: bool) -> Result<Report> {
    let suite = selftest_suite(quick)?;
    let mut text = String::new();
    let mut csv = String::from("check,failures\n");
    let mut js = Vec::new();
    let mut ok = true;
    for (name, fails) in &suite {
        ok &= fails.is_empty();
        let _ = writeln!(text, "{} {name}", if fails.is_empty() { "PASS" } else { "FAIL" });
        for f in fails {
            let _ = writeln!(text, "    {}", f.0);
        }
        let _ = writeln!(csv, "\"{name}\",{}", fails.len());
        js.push(json!({"check": name, "failures": fails.iter().map(|f| f.0.clone()).collect::<Vec<_>>()}));
    }
    let mut r = Report::new(provenance("selftest", None, None, None), text, json!({ "checks": js })).with_csv(csv);
    r.ok = ok;
    Ok(r)
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Zonal { space, kappa } => cmd_zonal(space, kappa),
        Command::Matrix { space, k, source, blocks } => cmd_matrix(space, *k, (*source).into(), *blocks),
        Command::Eigen { space, k, source, all, eps } => cmd_eigen(space, *k, (*source).into(), *all, eps.as_deref()),
        Command::Bound { space, distance, method, k, eps, certificate } => {
            cmd_bound(space, distance, *method, *k, eps.as_deref(), certificate.as_deref())
        }
        Command::Rate { m, s } => cmd_rate(*m, *s),
        Command::Crossing { m } => cmd_crossing(*m),
        Command::Audit { path, k_max, reorthonormalize } => cmd_audit(path, *k_max, *reorthonormalize),
        Command::Plot { m, from, to, step } => cmd_plot(*m, *from, *to, *step),
        Command::Selftest { quick } => cmd_selftest(*quick),
    }
}

fn render_report(r: &Report, format: Format) -> Option<String> {
    match format {
        Format::Text => Some(format!("# {}\n{}", r.header, r.text)),
        Format::Json => {
            let v = json!({"provenance": r.header, "result": r.json});
            Some(serde_json::to_string_pretty(&v).expect("serializable") + "\n")
        }
        Format::Csv => r.csv.as_ref().map(|c| format!("# {}\n{c}", r.header)),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) | Error::Json(_) | Error::MalformedCode(_) | Error::NonOrthonormal { .. } => 2,
        _ => 1,
    }
}

/// Runs with the given arguments (including the program name) and returns
/// the exit code, writing to stdout/stderr or `--out`.
pub fn run_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    // a plot defaults to CSV
    let format = match (&cli.command, cli.format) {
        (_, Some(f)) => f,
        (Command::Plot { .. }, None) => Format::Csv,
        (_, None) => Format::Text,
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let Some(body) = render_report(&report, format) else {
        eprintln!("error: this subcommand has no CSV form");
        return 2;
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    if report.ok {
        0
    } else {
        1
    }
}

pub fn main() -> i32 {
    run_with_args(std::env::args_os())
}
