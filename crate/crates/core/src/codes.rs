//! Explicit Grassmannian codes: ingest, principal angles, minimal chordal
//! distance, and an audit against every bound.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bounds::{best_bound, BestBound};
use crate::error::{Error, Result};
use crate::partitions::enumerate;
use crate::rational::from_f64;
use crate::zonal::ZonalTable;

/// Tolerance on `‖F Fᵗ − I‖_max` for an accepted frame.
pub const ORTHONORMAL_TOL: f64 = 1e-8;
/// `s` is rounded up by this much before bounds are consulted; every bound
/// is nondecreasing in `s`, so this can only weaken them.
pub const S_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct CodeFile {
    pub n: usize,
    pub m: usize,
    pub elements: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct CodeSet {
    pub n: usize,
    pub m: usize,
    /// `m × n`, orthonormal rows.
    pub frames: Vec<DMatrix<f64>>,
    pub labels: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairGeometry {
    /// `cos²θ_i`, descending, in `[0, 1]`.
    pub y: Vec<f64>,
    pub chordal: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinDistance {
    pub delta: f64,
    pub s: f64,
    pub pair: (usize, usize),
}

fn gram_deviation(f: &DMatrix<f64>) -> f64 {
    let g = f * f.transpose();
    let id = DMatrix::<f64>::identity(g.nrows(), g.ncols());
    (g - id).amax()
}

/// Gram–Schmidt on the rows; `None` when the rows are dependent.
fn orthonormalize(f: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let mut out = f.clone();
    for i in 0..out.nrows() {
        let mut row = out.row(i).into_owned();
        // two passes for stability
        for _ in 0..2 {
            for j in 0..i {
                let prev = out.row(j).into_owned();
                let c = row.dot(&prev);
                row -= prev * c;
            }
        }
        let norm = row.norm();
        if norm < 1e-10 * f.row(i).norm().max(1.0) {
            return None;
        }
        out.set_row(i, &(row / norm));
    }
    Some(out)
}

impl CodeSet {
    pub fn new(
        n: usize,
        m: usize,
        frames: Vec<DMatrix<f64>>,
        labels: Option<Vec<String>>,
        reorthonormalize: bool,
    ) -> Result<Self> {
        if m == 0 || n == 0 || m > n {
            return Err(Error::MalformedCode(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
        }
        let mut warnings = Vec::new();
        if 2 * m > n {
            warnings.push(format!("m = {m} > n/2 = {}; bounds assume m <= n/2 and are skipped", n as f64 / 2.0));
        }
        let mut checked = Vec::with_capacity(frames.len());
        for (idx, f) in frames.into_iter().enumerate() {
            if f.nrows() != m || f.ncols() != n {
                return Err(Error::MalformedCode(format!(
                    "element {idx} is {}x{}, expected {m}x{n}",
                    f.nrows(),
                    f.ncols()
                )));
            }
            if f.iter().any(|x| !x.is_finite()) {
                return Err(Error::MalformedCode(format!("element {idx} has a non-finite entry")));
            }
            let dev = gram_deviation(&f);
            if dev <= ORTHONORMAL_TOL {
                checked.push(f);
            } else if reorthonormalize {
                let g = orthonormalize(&f).ok_or_else(|| {
                    Error::MalformedCode(format!("element {idx} does not span an {m}-dimensional subspace"))
                })?;
                warnings.push(format!("element {idx} re-orthonormalized (Gram deviation {dev:e})"));
                checked.push(g);
            } else {
                return Err(Error::NonOrthonormal { index: idx, deviation: dev });
            }
        }
        let labels = match labels {
            Some(l) if l.len() == checked.len() => l,
            Some(l) => {
                return Err(Error::MalformedCode(format!(
                    "{} labels for {} elements",
                    l.len(),
                    checked.len()
                )))
            }
            None => (0..checked.len()).map(|i| i.to_string()).collect(),
        };
        Ok(CodeSet { n, m, frames: checked, labels, warnings })
    }

    pub fn from_file(file: CodeFile, reorthonormalize: bool) -> Result<Self> {
        let mut frames = Vec::with_capacity(file.elements.len());
        for (idx, rows) in file.elements.iter().enumerate() {
            if rows.len() != file.m || rows.iter().any(|r| r.len() != file.n) {
                return Err(Error::MalformedCode(format!(
                    "element {idx} must have {} rows of {} numbers",
                    file.m, file.n
                )));
            }
            frames.push(DMatrix::from_fn(file.m, file.n, |i, j| rows[i][j]));
        }
        CodeSet::new(file.n, file.m, frames, file.labels, reorthonormalize)
    }

    pub fn parse(text: &str, reorthonormalize: bool) -> Result<Self> {
        let file: CodeFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedCode(e.to_string()))?;
        CodeSet::from_file(file, reorthonormalize)
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn to_file(&self) -> CodeFile {
        CodeFile {
            n: self.n,
            m: self.m,
            elements: self
                .frames
                .iter()
                .map(|f| (0..self.m).map(|i| f.row(i).iter().copied().collect()).collect())
                .collect(),
            labels: Some(self.labels.clone()),
        }
    }
}

pub fn load_code(path: &Path, reorthonormalize: bool) -> Result<CodeSet> {
    CodeSet::parse(&fs::read_to_string(path)?, reorthonormalize)
}

/// `y_i = cos²θ_i` from the singular values of `p qᵗ`.
pub fn principal_y(p: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<PairGeometry> {
    if p.shape() != q.shape() {
        return Err(Error::DimensionMismatch { left: p.nrows() * p.ncols(), right: q.nrows() * q.ncols() });
    }
    let m = p.nrows();
    let cross = p * q.transpose();
    let sv = cross.singular_values();
    let mut y: Vec<f64> = sv.iter().map(|s| (s * s).clamp(0.0, 1.0)).collect();
    y.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let chordal = (m as f64 - y.iter().sum::<f64>()).max(0.0).sqrt();
    Ok(PairGeometry { y, chordal })
}

pub fn min_distance(code: &CodeSet) -> Result<MinDistance> {
    if code.len() < 2 {
        return Err(Error::InvalidParameters("minimal distance needs at least two elements".into()));
    }
    let mut best = MinDistance { delta: f64::INFINITY, s: 0.0, pair: (0, 1) };
    for i in 0..code.len() {
        for j in i + 1..code.len() {
            let g = principal_y(&code.frames[i], &code.frames[j])?;
            if g.chordal < best.delta {
                best = MinDistance { delta: g.chordal, s: code.m as f64 - g.chordal * g.chordal, pair: (i, j) };
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub method: String,
    pub k: Option<usize>,
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivitySum {
    pub kappa: String,
    pub sum: f64,
    pub nonnegative: bool,
    pub vanishes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub m: usize,
    pub size: usize,
    pub min_distance: Option<MinDistance>,
    pub s_used: Option<f64>,
    pub bounds: Vec<BoundCheck>,
    pub skipped: Vec<(String, String)>,
    pub positivity: Vec<PositivitySum>,
    /// Largest `t ≤ k_max` with vanishing sums for all `1 ≤ |κ| ≤ t`.
    pub design_strength: usize,
    pub design_note: Option<String>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

/// Checks `|C|` against every applicable bound and computes the positivity
/// sums `Σ_{p,q} P_κ(y(p,q))` for `|κ| ≤ k_max`.
pub fn audit(code: &CodeSet, k_max: usize) -> Result<AuditReport> {
    let (m, n) = (code.m, code.n);
    let size = code.len();
    let mut warnings = code.warnings.clone();
    let usable = 2 * m <= n;
    let md = if size >= 2 { Some(min_distance(code)?) } else { None };

    let mut bounds = Vec::new();
    let mut skipped = Vec::new();
    let mut s_used = None;
    if let (Some(d), true) = (&md, usable) {
        let s = (d.s + S_SLACK).clamp(0.0, m as f64);
        s_used = Some(s);
        let best: BestBound = best_bound(m, n, &from_f64(s)?, k_max)?;
        for b in best.applicable {
            let pass = size as f64 <= b.value * (1.0 + 1e-12);
            bounds.push(BoundCheck { method: b.method, k: b.k, value: b.value, pass });
        }
        skipped = best.skipped;
    }

    let mut positivity = Vec::new();
    let mut design_strength = 0;
    if usable {
        let table = ZonalTable::shared(m, n, k_max)?;
        let mut ys = Vec::with_capacity(size * size);
        for p in &code.frames {
            for q in &code.frames {
                ys.push(principal_y(p, q)?.y);
            }
        }
        let tol = 1e-8 * (size * size) as f64;
        let mut strength_open = true;
        for kappa in enumerate(m, k_max).list().iter().skip(1) {
            let poly = table.get(kappa)?;
            let mut sum = 0.0;
            for y in &ys {
                sum += poly.eval_f64(y)?;
            }
            let vanishes = sum.abs() <= tol;
            positivity.push(PositivitySum { kappa: kappa.to_string(), sum, nonnegative: sum >= -1e-8, vanishes });
        }
        for t in 1..=k_max {
            let all = positivity
                .iter()
                .zip(enumerate(m, k_max).list().iter().skip(1))
                .filter(|(_, k)| k.degree() == t)
                .all(|(p, _)| p.vanishes);
            if strength_open && all {
                design_strength = t;
            } else {
                strength_open = false;
            }
        }
    } else {
        warnings.push("positivity sums skipped (m > n/2)".into());
    }
    let design_note = (design_strength > 0).then(|| {
        format!("C is a {}-design: the sums vanish for 1 <= |kappa| <= {design_strength}", 2 * design_strength)
    });
    let pass = bounds.iter().all(|b| b.pass) && positivity.iter().all(|p| p.nonnegative);
    Ok(AuditReport {
        n,
        m,
        size,
        min_distance: md,
        s_used,
        bounds,
        skipped,
        positivity,
        design_strength,
        design_note,
        warnings,
        pass,
    })
}
