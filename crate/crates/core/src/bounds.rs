//! Closed-form and asymptotic bounds, the LP certificate verifier, and the
//! LP-versus-Hamming rate comparison.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{dim_gl, partitions_of};
use crate::rational::{exact_sqrt, frac, from_f64, int, render, to_f64, Rational};
use crate::spectra::{best_eigen_simple, eigen_bound_teps, Source};
use crate::sympoly::SymPoly;
use crate::univariate::UPoly;
use crate::zonal::{PExpansion, ZonalTable};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Window {
    fn new(lo: f64, lo_open: bool, hi: f64, hi_open: bool) -> Self {
        Window { lo, hi, lo_open, hi_open }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    /// `F` as a polynomial in `σ`, when given that way.
    pub sigma_poly: Option<String>,
    /// `(κ, f_κ)` pairs.
    pub coefficients: Vec<(String, String)>,
    pub value_at_ones: String,
    pub f0: String,
    /// Whether `F ≤ 0` on the excluded region was decided exactly.
    pub rigorous: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundResult {
    pub method: String,
    pub m: usize,
    pub n: usize,
    pub s: f64,
    pub value: f64,
    /// Exact value for closed-form bounds.
    pub exact: Option<String>,
    pub window: Window,
    pub k: Option<usize>,
    pub certificate: Option<Certificate>,
    pub note: Option<String>,
}

impl BoundResult {
    fn closed(method: &str, m: usize, n: usize, s: &Rational, value: Rational, window: Window) -> Self {
        BoundResult {
            method: method.into(),
            m,
            n,
            s: to_f64(s),
            value: to_f64(&value),
            exact: Some(render(&value)),
            window,
            k: None,
            certificate: None,
            note: None,
        }
    }

    pub fn exact_value(&self) -> Option<Rational> {
        self.exact.as_deref().and_then(|e| crate::rational::parse(e).ok())
    }
}

fn check_mn(m: usize, n: usize) -> Result<()> {
    if m == 0 || n < 2 * m {
        return Err(Error::InvalidParameters(format!("need 1 <= m <= n/2, got m = {m}, n = {n}")));
    }
    Ok(())
}

fn not_applicable(method: &str, reason: String) -> Error {
    Error::NotApplicable { method: method.into(), reason }
}

fn r(m: usize) -> Rational {
    int(m as i64)
}

/// `m²/n`, the mean of `σ` under the invariant measure.
pub fn mean_sigma(m: usize, n: usize) -> Rational {
    frac((m * m) as i64, n as i64)
}

pub fn simplex_bound(m: usize, n: usize, s: &Rational) -> Result<BoundResult> {
    check_mn(m, n)?;
    let c = mean_sigma(m, n);
    if s >= &c {
        return Err(not_applicable("simplex", format!("needs s < m^2/n = {}", render(&c))));
    }
    let v = (r(m) - s) / (&c - s);
    Ok(BoundResult::closed("simplex", m, n, s, v, Window::new(f64::NEG_INFINITY, true, to_f64(&c), true)))
}

pub fn orthoplex_bound(m: usize, n: usize, s: &Rational) -> Result<BoundResult> {
    check_mn(m, n)?;
    let c = mean_sigma(m, n);
    let ni = n as i64;
    let v = match s.cmp(&c) {
        std::cmp::Ordering::Less => int((ni + 1) * ni / 2),
        std::cmp::Ordering::Equal => int((ni - 1) * (ni + 2)),
        std::cmp::Ordering::Greater => {
            return Err(not_applicable("orthoplex", format!("needs s <= m^2/n = {}", render(&c))))
        }
    };
    Ok(BoundResult::closed("orthoplex", m, n, s, v, Window::new(f64::NEG_INFINITY, true, to_f64(&c), false)))
}

fn degree2_gap(m: usize, n: usize) -> Rational {
    let (mi, ni) = (m as i64, n as i64);
    frac(2 * (ni - mi) * (ni - mi), ni * (ni - 1) * (ni + 2))
}

pub fn degree2_bound(m: usize, n: usize, s: &Rational) -> Result<BoundResult> {
    check_mn(m, n)?;
    let hi = mean_sigma(m, n) + degree2_gap(m, n);
    if !s.is_positive() || s >= &hi {
        return Err(not_applicable("degree2", format!("needs 0 < s < {}", render(&hi))));
    }
    let v = frac(n as i64, m as i64) * (r(m) - s) / (&hi - s);
    Ok(BoundResult::closed("degree2", m, n, s, v, Window::new(0.0, true, to_f64(&hi), true)))
}

/// `s` where the simplex and degree-2 bounds meet.
pub fn simplex_degree2_crossing(m: usize, n: usize) -> Rational {
    let (mi, ni) = (m as i64, n as i64);
    mean_sigma(m, n) - frac(2 * mi * (ni - mi), ni * (ni - 1) * (ni + 2))
}

/// `(b, c, d)` of the degree-3 bound.
/// `4(n−2m)²/(n(n−2)(n+4))`; at n = 2 (so m = 1) the pole cancels and the value is 0.
fn shift_b(mi: i64, ni: i64) -> Rational {
    if ni == 2 * mi {
        return int(0);
    }
    frac(4 * (ni - 2 * mi) * (ni - 2 * mi), ni * (ni - 2) * (ni + 4))
}

pub fn degree3_constants(m: usize, n: usize) -> (Rational, Rational, Rational) {
    let (mi, ni) = (m as i64, n as i64);
    let b = shift_b(mi, ni);
    let c = frac(2 * mi * mi * (ni - mi) * (ni - mi), ni * ni * (ni - 1) * (ni + 2));
    let d = frac(2 * mi * (ni - mi), ni * (ni - 1) * (ni + 2));
    (b, c, d)
}

/// Upper end `m²/n + b/2 + √(b²/4 + c)` of the degree-3 window: exact when
/// the radicand is a perfect square.
pub fn degree3_upper(m: usize, n: usize) -> (f64, Option<Rational>) {
    let (b, c, _) = degree3_constants(m, n);
    let half = &b / int(2);
    let rad = &half * &half + &c;
    let base = mean_sigma(m, n) + &half;
    match exact_sqrt(&rad) {
        Some(root) => {
            let v = base + root;
            (to_f64(&v), Some(v))
        }
        None => (to_f64(&base) + to_f64(&rad).sqrt(), None),
    }
}

pub fn degree3_bound(m: usize, n: usize, s: &Rational) -> Result<BoundResult> {
    check_mn(m, n)?;
    let (b, c, d) = degree3_constants(m, n);
    let mean = mean_sigma(m, n);
    let t = s - &mean;
    // s < m²/n + b/2 + √(b²/4 + c)  ⇔  x < 0 or x² < b²/4 + c, x = t − b/2
    let x = &t - &b / int(2);
    let below_top = x.is_negative() || &x * &x < &b * &b / int(4) + &c;
    let (hi, _) = degree3_upper(m, n);
    if !t.is_positive() || !below_top {
        return Err(not_applicable(
            "degree3",
            format!("needs {} < s < {hi}", render(&mean)),
        ));
    }
    let ni = n as i64;
    let num = (r(m) - s) * (&t + &d) * (&t + &d) * int((ni - 1) * (ni + 2));
    let den = int(2) * &t * (-(&t * &t) + &b * &t + &c);
    Ok(BoundResult::closed("degree3", m, n, s, num / den, Window::new(to_f64(&mean), true, hi, true)))
}

/// The displayed `P`-coefficients `(f_2, f_11, f_1, f_0)` of
/// `(σ − s)(σ − b)`.
pub fn degree2_coefficients(m: usize, n: usize, s: &Rational, b: &Rational) -> [Rational; 4] {
    let (mi, ni) = (m as i64, n as i64);
    let t = s - mean_sigma(m, n);
    let f2 = frac(mi * (mi + 2) * (ni - mi) * (ni - mi + 2), 3 * (ni + 2) * (ni + 4));
    // n = 2 forces m = 1, where the factor m − 1 kills the pole
    let f11 = if mi == 1 { int(0) } else { frac(2 * mi * (mi - 1) * (ni - mi) * (ni - mi - 1), 3 * (ni - 2) * (ni - 1)) };
    let f1 = r(m) * (int(1) - frac(mi, ni))
        * (mean_sigma(m, n) + shift_b(mi, ni) - &t - b);
    let f0 = frac(2 * mi * mi * (ni - mi) * (ni - mi), ni * ni * (ni - 1) * (ni + 2)) - mean_sigma(m, n) * &t
        + b * &t;
    [f2, f11, f1, f0]
}

/// An LP certificate: a polynomial in `σ`, or an explicit `P`-expansion.
#[derive(Clone, Debug)]
pub enum CertificateInput {
    Sigma(UPoly),
    Expansion(PExpansion),
}

/// Checks the two LP conditions for `F` at `s` and returns `F(1,…,1)/f_0`.
pub fn lp_verify(cert: &CertificateInput, s: &Rational, table: &ZonalTable) -> Result<BoundResult> {
    let (m, n) = (table.m(), table.n());
    let (expansion, poly, sigma_form) = match cert {
        CertificateInput::Sigma(u) => {
            let f = u.compose_sigma(m);
            (table.p_expand(&f)?, f, Some(u.to_string()))
        }
        CertificateInput::Expansion(e) => (e.clone(), e.reconstruct(table)?, None),
    };
    for (kappa, f) in &expansion.coeffs {
        if f.is_negative() {
            return Err(Error::CertificateInvalid(format!("coefficient of P{kappa} is {} < 0", render(f))));
        }
    }
    let f0 = expansion.constant();
    if !f0.is_positive() {
        return Err(Error::CertificateInvalid(format!("f_0 = {} is not positive", render(&f0))));
    }
    let upper = if s > &r(m) { r(m) } else { s.clone() };
    let rigorous = match cert {
        CertificateInput::Sigma(u) => {
            if !s.is_negative() && !u.nonpositive_on(&int(0), &upper) {
                let (at, v) = u.max_sample_on(&int(0), &upper).expect("nonempty interval");
                return Err(Error::CertificateInvalid(format!(
                    "F(sigma = {}) = {} > 0 inside the excluded region",
                    render(&at),
                    render(&v)
                )));
            }
            true
        }
        CertificateInput::Expansion(_) => {
            if let Some(y) = grid_violation(&poly, to_f64(s)) {
                return Err(Error::CertificateInvalid(format!("F > 0 at y = {y:?} inside the excluded region")));
            }
            false
        }
    };
    let at_ones = poly.eval_ones();
    let value = &at_ones / &f0;
    let mut out = BoundResult::closed("lp", m, n, s, value, Window::new(f64::NEG_INFINITY, true, to_f64(s), false));
    out.certificate = Some(Certificate {
        sigma_poly: sigma_form,
        coefficients: expansion.coeffs.iter().map(|(k, v)| (k.to_string(), render(v))).collect(),
        value_at_ones: render(&at_ones),
        f0: render(&f0),
        rigorous,
    });
    if !rigorous {
        out.note = Some("NON-RIGOROUS: condition (ii) checked on a grid only".into());
    }
    Ok(out)
}

/// Dense-grid search for a point of `[0,1]^m` with `σ ≤ s` where `F > 0`.
fn grid_violation(f: &SymPoly, s: f64) -> Option<Vec<f64>> {
    let m = f.m();
    let steps = match m {
        1 => 2000,
        2 => 200,
        3 => 40,
        _ => 12,
    };
    let mut idx = vec![0usize; m];
    loop {
        // descending tuples suffice by symmetry
        if idx.windows(2).all(|w| w[0] >= w[1]) {
            let y: Vec<f64> = idx.iter().map(|&i| i as f64 / steps as f64).collect();
            if y.iter().sum::<f64>() <= s + 1e-12 && f.eval_f64(&y).ok()? > 1e-12 {
                return Some(y);
            }
        }
        let mut p = 0;
        loop {
            if p == m {
                return None;
            }
            idx[p] += 1;
            if idx[p] <= steps {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

fn check_rate_domain(m: usize, s: f64) -> Result<()> {
    if m == 0 || !(s > 0.0 && s < m as f64) {
        return Err(Error::Domain(format!("rates need 0 < s < m, got s = {s}, m = {m}")));
    }
    Ok(())
}

/// `ρ = (m/2)(−1 + (1 − s/m)^{−1/2})`.
pub fn rho(m: usize, s: f64) -> f64 {
    let mf = m as f64;
    mf / 2.0 * (-1.0 + (1.0 - s / mf).powf(-0.5))
}

/// `m((1+ρ) ln(1+ρ) − ρ ln ρ)`, natural logarithm.
pub fn rate_of_rho(m: usize, rho: f64) -> f64 {
    let t = if rho > 0.0 { rho * rho.ln() } else { 0.0 };
    m as f64 * ((1.0 + rho) * (1.0 + rho).ln() - t)
}

pub fn lp_rate(m: usize, s: f64) -> Result<f64> {
    check_rate_domain(m, s)?;
    Ok(rate_of_rho(m, rho(m, s)))
}

/// `−m ln √(1 − √((s+m)/(2m)))`.
pub fn hamming_rate(m: usize, s: f64) -> Result<f64> {
    check_rate_domain(m, s)?;
    let mf = m as f64;
    Ok(-mf * (1.0 - ((s + mf) / (2.0 * mf)).sqrt()).sqrt().ln())
}

/// `4(ℓ + 1/m)/(ℓ + 2/m)²`.
pub fn lambda_limit(m: usize, ell: f64) -> Result<f64> {
    if m == 0 || !(ell > 0.0) {
        return Err(Error::Domain(format!("need m >= 1 and ell > 0, got m = {m}, ell = {ell}")));
    }
    let mf = m as f64;
    Ok(4.0 * (ell + 1.0 / mf) / (ell + 2.0 / mf).powi(2))
}

#[derive(Clone, Debug, Serialize)]
pub struct Crossing {
    pub m: usize,
    pub s0: f64,
    /// Outside the range `2 ≤ m ≤ 10` that has been checked.
    pub extrapolated: bool,
}

/// Root of `lp_rate − hamming_rate` in `]1, m[` by bisection.
pub fn crossing_point(m: usize) -> Result<Crossing> {
    let diff = |s: f64| -> Result<f64> { Ok(lp_rate(m, s)? - hamming_rate(m, s)?) };
    let (mut lo, mut hi) = (1.0 + 1e-6, m as f64 - 1e-6);
    if lo >= hi {
        return Err(Error::Domain(format!("no crossing bracket in ]1, m[ for m = {m}")));
    }
    let (flo, fhi) = (diff(lo)?, diff(hi)?);
    if flo.signum() == fhi.signum() {
        return Err(Error::Domain(format!("no sign change of the rate difference for m = {m}")));
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if diff(mid)?.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Crossing { m, s0: 0.5 * (lo + hi), extrapolated: !(2..=10).contains(&m) })
}

#[derive(Clone, Debug, Serialize)]
pub struct RateRow {
    pub s: f64,
    pub lp_rate: f64,
    pub hamming_rate: f64,
}

pub fn rate_table(m: usize, grid: &[f64]) -> Result<Vec<RateRow>> {
    grid.iter()
        .map(|&s| Ok(RateRow { s, lp_rate: lp_rate(m, s)?, hamming_rate: hamming_rate(m, s)? }))
        .collect()
}

/// `lo, lo+step, …` up to `hi` inclusive (within rounding).
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || hi < lo {
        return vec![lo];
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BestBound {
    pub m: usize,
    pub n: usize,
    pub s: f64,
    /// `None` when no method applies.
    pub best: Option<BoundResult>,
    pub applicable: Vec<BoundResult>,
    pub skipped: Vec<(String, String)>,
}

impl BestBound {
    pub fn value(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.value)
    }
}

/// Minimum over all applicable methods.
pub fn best_bound(m: usize, n: usize, s: &Rational, k_max: usize) -> Result<BestBound> {
    check_mn(m, n)?;
    let sf = to_f64(s);
    let mut applicable = Vec::new();
    let mut skipped = Vec::new();
    let mut note = |res: Result<BoundResult>| match res {
        Ok(b) => applicable.push(b),
        Err(Error::NotApplicable { method, reason }) => skipped.push((method, reason)),
        Err(e) => skipped.push(("?".into(), e.to_string())),
    };
    note(simplex_bound(m, n, s));
    note(orthoplex_bound(m, n, s));
    note(degree2_bound(m, n, s));
    note(degree3_bound(m, n, s));
    if k_max >= 1 {
        match best_eigen_simple(m, n, sf, k_max, Source::ClosedForm) {
            Some(e) => note(Ok(BoundResult {
                method: "eigen".into(),
                m,
                n,
                s: sf,
                value: e.bound,
                exact: None,
                window: Window::new(f64::NEG_INFINITY, true, e.threshold, false),
                k: Some(e.k),
                certificate: None,
                note: Some(format!("lambda_k = {}, residual = {:e}", e.lambda_k, e.residual)),
            })),
            None => note(Err(not_applicable("eigen", format!("s exceeds lambda_{} ", k_max.saturating_sub(1))))),
        }
        let mut best_teps: Option<BoundResult> = None;
        let mut last_err = None;
        for k in 1..=k_max {
            match eigen_bound_teps(m, n, k, None, sf, Source::ClosedForm) {
                Ok(e) => {
                    if best_teps.as_ref().is_none_or(|b| e.bound < b.value) {
                        best_teps = Some(BoundResult {
                            method: "teps".into(),
                            m,
                            n,
                            s: sf,
                            value: e.bound,
                            exact: None,
                            window: Window::new(f64::NEG_INFINITY, true, e.threshold, true),
                            k: Some(k),
                            certificate: None,
                            note: Some(format!("lambda_eps = {}, residual = {:e}", e.lambda_eps, e.residual)),
                        });
                    }
                }
                Err(e) => last_err = Some(e),
            }
        }
        match (best_teps, last_err) {
            (Some(b), _) => note(Ok(b)),
            (None, Some(e)) => note(Err(e)),
            (None, None) => {}
        }
    }
    let best = applicable
        .iter()
        .min_by(|a, b| a.value.partial_cmp(&b.value).expect("finite"))
        .cloned();
    Ok(BestBound { m, n, s: sf, best, applicable, skipped })
}

/// `(1/n) ln Σ_{|κ|=2k, ℓ(κ)≤m} dim F_n^κ` against `m((1+ρ)ln(1+ρ) − ρ ln ρ)`,
/// `ρ = 2k/n`.
pub fn dimension_sum_rate_check(m: usize, k: usize, n: usize) -> Result<(f64, f64)> {
    check_mn(m, n)?;
    let mut total = BigUint::zero();
    for kappa in partitions_of(2 * k, m) {
        total += dim_gl(&kappa, n);
    }
    let empirical = ln_big(&total) / n as f64;
    let rho = 2.0 * k as f64 / n as f64;
    Ok((empirical, rate_of_rho(m, rho)))
}

fn ln_big(x: &BigUint) -> f64 {
    if x.is_one() {
        return 0.0;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x >> shift).to_string().parse::<f64>().expect("digits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `Σ_{|κ|=j} dim F_n^κ` over partitions with at most `m` parts.
pub fn dimension_sum(m: usize, j: usize, n: usize) -> BigUint {
    partitions_of(j, m).iter().map(|k| dim_gl(k, n)).sum()
}

/// Parse helper shared with the CLI: `s` given directly or via `δ`.
pub fn s_from_delta(m: usize, delta: f64) -> Result<Rational> {
    let d = from_f64(delta)?;
    Ok(r(m) - &d * &d)
}
