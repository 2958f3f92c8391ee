//! The operators `T_k`, `T_k^ε` as symmetric matrices in the normalized
//! basis `{√d_{2κ} P_κ}`, their Perron data, and the eigenvalue bounds.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{dim_on_half, enumerate, Partition, PartitionIndexSet};
use crate::rational::{from_biguint, int, to_f64, Rational};
use crate::threeterm::{closed_form_a, closed_form_diag, closed_form_offdiag, ThreeTermData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Blocks read off exact `P`-expansions.
    Exact,
    /// Blocks from the product formulas in `q_i`; scales to large `k`.
    ClosedForm,
}

#[derive(Clone, Debug)]
pub struct JacobiOperator {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub source: Source,
    pub index: PartitionIndexSet,
    pub matrix: DMatrix<f64>,
    /// `d_{2κ}` and `a_κ` for `|κ| = k`, exact.
    pub top_d: Vec<Rational>,
    pub top_a: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerronData {
    pub eigenvalue: f64,
    /// Unit norm, positive entries, normalized basis.
    pub vector: Vec<f64>,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenBoundResult {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub s: f64,
    pub epsilon: Vec<f64>,
    pub lambda_eps: f64,
    pub lambda_prev: f64,
    pub lambda_k: f64,
    /// Coordinates of `v^ε` on `P_κ`, `|κ| = k`.
    pub top_vector: Vec<f64>,
    pub bound: f64,
    /// Largest `s` for which the bound applies (strictly below for Teps).
    pub threshold: f64,
    pub residual: f64,
}

fn check_mn(m: usize, n: usize) -> Result<()> {
    if m == 0 || n < 2 * m {
        return Err(Error::InvalidParameters(format!("need 1 <= m <= n/2, got m = {m}, n = {n}")));
    }
    Ok(())
}

impl JacobiOperator {
    pub fn build(m: usize, n: usize, k: usize, source: Source) -> Result<Self> {
        check_mn(m, n)?;
        let index = enumerate(m, k);
        let dim = index.len();
        let mut matrix = DMatrix::<f64>::zeros(dim, dim);
        let (top_d, top_a);
        match source {
            Source::Exact => {
                let t = ThreeTermData::build(m, n, k)?;
                for s in 0..=k {
                    let base = index.block(s).start;
                    for i in 0..t.b[s].rows {
                        matrix[(base + i, base + i)] = to_f64(t.b[s].get(i, i));
                    }
                    if s < k {
                        let up = index.block(s + 1).start;
                        for i in 0..t.a[s].rows {
                            for j in 0..t.a[s].cols {
                                let a = t.a[s].get(i, j);
                                if a.is_zero() {
                                    continue;
                                }
                                let rad = a * a * &t.d[s][i] / &t.d[s + 1][j];
                                let v = to_f64(&rad).sqrt();
                                matrix[(base + i, up + j)] = v;
                                matrix[(up + j, base + i)] = v;
                            }
                        }
                    }
                }
                top_d = t.d[k].clone();
                top_a = t.a_values(k);
            }
            Source::ClosedForm => {
                for (row, kappa) in index.list().iter().enumerate() {
                    matrix[(row, row)] = closed_form_diag(kappa, m, n)?.value;
                    if kappa.degree() < k {
                        for i in kappa.u_set(m) {
                            let mu = kappa.raise(i, m)?;
                            let col = index.position(&mu).expect("indexed");
                            let v = closed_form_offdiag(kappa, i, m, n)?.value;
                            matrix[(row, col)] = v;
                            matrix[(col, row)] = v;
                        }
                    }
                }
                let top = index.of_degree(k);
                top_d = top
                    .iter()
                    .map(|p| Ok(from_biguint(&dim_on_half(p, m, n)?)))
                    .collect::<Result<_>>()?;
                top_a = top.iter().map(|p| a_value(p, m, n)).collect::<Result<_>>()?;
            }
        }
        Ok(JacobiOperator { m, n, k, source, index, matrix, top_d, top_a })
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn top_block(&self) -> std::ops::Range<usize> {
        self.index.block(self.k)
    }

    pub fn top_partitions(&self) -> &[Partition] {
        self.index.of_degree(self.k)
    }

    /// Every eigenvalue, increasing.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        ev
    }

    pub fn lambda_max(&self) -> Result<PerronData> {
        perron(&self.matrix)
    }

    /// Perron data of `J′ − diag(ε)` with `ε` supported on the top block.
    pub fn perturbed(&self, eps: &[f64]) -> Result<PerronData> {
        let top = self.top_block();
        if eps.len() != top.len() {
            return Err(Error::InvalidParameters(format!(
                "epsilon has {} entries, the top block has {}",
                eps.len(),
                top.len()
            )));
        }
        if let Some(bad) = eps.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(Error::InvalidParameters(format!("epsilon entries must be >= 0, got {bad}")));
        }
        let mut j = self.matrix.clone();
        for (o, e) in top.zip(eps) {
            j[(o, o)] -= e;
        }
        perron(&j)
    }

    /// Norm of the matrix (Frobenius).
    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }
}

/// `a_κ = Σ_i A[κ, κ^(i)]` from the product formula.
pub fn a_value(kappa: &Partition, m: usize, n: usize) -> Result<Rational> {
    let mut a = int(0);
    for i in kappa.u_set(m) {
        a += closed_form_a(kappa, i, m, n)?;
    }
    Ok(a)
}

fn perron(j: &DMatrix<f64>) -> Result<PerronData> {
    let eig = SymmetricEigen::new(j.clone());
    let (imax, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
        .ok_or_else(|| Error::Internal("empty matrix".into()))?;
    let mut v: DVector<f64> = eig.eigenvectors.column(imax).into_owned();
    if v.sum() < 0.0 {
        v = -v;
    }
    // a few shifted power steps: the shifted matrix is entrywise
    // nonnegative, so tiny entries settle on the positive side
    let shift = j.norm();
    let shifted = j + DMatrix::<f64>::identity(j.nrows(), j.ncols()) * shift;
    v = v.abs();
    for _ in 0..4 {
        v = &shifted * &v;
        v /= v.norm();
    }
    let lambda_r = v.dot(&(j * &v));
    let residual = (j * &v - &v * lambda_r).norm();
    let scale = j.norm().max(1.0);
    if residual > 1e-10 * scale || (lambda_r - lambda).abs() > 1e-9 * scale {
        return Err(Error::Convergence { iterations: 4, residual });
    }
    if v.iter().any(|&x| x <= 0.0) {
        return Err(Error::Internal("Perron vector has a non-positive entry".into()));
    }
    Ok(PerronData { eigenvalue: lambda_r, vector: v.iter().copied().collect(), residual })
}

/// `λ_k` for `(m, n)`.
pub fn lambda_k(m: usize, n: usize, k: usize, source: Source) -> Result<f64> {
    Ok(JacobiOperator::build(m, n, k, source)?.lambda_max()?.eigenvalue)
}

/// The perturbed-operator bound; `eps` defaults to `ε_κ = a_κ`.
pub fn eigen_bound_teps(
    m: usize,
    n: usize,
    k: usize,
    eps: Option<&[f64]>,
    s: f64,
    source: Source,
) -> Result<EigenBoundResult> {
    if k == 0 {
        return Err(Error::InvalidParameters("the perturbed bound needs k >= 1".into()));
    }
    let j = JacobiOperator::build(m, n, k, source)?;
    let eps: Vec<f64> = match eps {
        Some(e) => e.to_vec(),
        None => j.top_a.iter().map(to_f64).collect(),
    };
    if eps.iter().all(|e| *e == 0.0) {
        return Err(Error::InvalidParameters("epsilon must be nonzero".into()));
    }
    let pert = j.perturbed(&eps)?;
    let lambda_k = j.lambda_max()?.eigenvalue;
    let lambda_prev = JacobiOperator::build(m, n, k - 1, source)?.lambda_max()?.eigenvalue;
    let top = j.top_block();
    let d: Vec<f64> = j.top_d.iter().map(to_f64).collect();
    let a: Vec<f64> = j.top_a.iter().map(to_f64).collect();
    // P-coordinates: v_κ = √d_κ · w_κ
    let v: Vec<f64> = top.clone().zip(&d).map(|(o, dk)| pert.vector[o] * dk.sqrt()).collect();
    let num: f64 = v.iter().zip(&eps).zip(&a).map(|((v, e), a)| v * (e + a)).sum();
    let den: f64 = v.iter().zip(&eps).zip(&d).map(|((v, e), dk)| e * v * v / dk).sum();
    let mf = m as f64;
    let bound = num * num / ((mf - pert.eigenvalue) * den);
    if s >= pert.eigenvalue {
        return Err(Error::NotApplicable {
            method: "teps".into(),
            reason: format!("s = {s} is not below lambda^eps = {}", pert.eigenvalue),
        });
    }
    Ok(EigenBoundResult {
        m,
        n,
        k,
        s,
        epsilon: eps,
        lambda_eps: pert.eigenvalue,
        lambda_prev,
        lambda_k,
        top_vector: v,
        bound,
        threshold: pert.eigenvalue,
        residual: pert.residual,
    })
}

/// `4 Σ d_{2κ} a_κ / (m − λ_k)`, valid for `s ≤ λ_{k−1}`.
pub fn eigen_bound_simple(m: usize, n: usize, k: usize, s: f64, source: Source) -> Result<EigenBoundResult> {
    if k == 0 {
        return Err(Error::InvalidParameters("the corollary bound needs k >= 1".into()));
    }
    let j = JacobiOperator::build(m, n, k, source)?;
    let perron = j.lambda_max()?;
    let lambda_prev = JacobiOperator::build(m, n, k - 1, source)?.lambda_max()?.eigenvalue;
    if s > lambda_prev {
        return Err(Error::NotApplicable {
            method: "eigen".into(),
            reason: format!("s = {s} exceeds lambda_{} = {lambda_prev}; try a larger k", k - 1),
        });
    }
    let bound = 4.0 * simple_numerator(&j) / (m as f64 - perron.eigenvalue);
    Ok(EigenBoundResult {
        m,
        n,
        k,
        s,
        epsilon: Vec::new(),
        lambda_eps: perron.eigenvalue,
        lambda_prev,
        lambda_k: perron.eigenvalue,
        top_vector: Vec::new(),
        bound,
        threshold: lambda_prev,
        residual: perron.residual,
    })
}

/// `Σ_{|κ|=k} d_{2κ} a_κ`, summed exactly.
pub fn simple_numerator(j: &JacobiOperator) -> f64 {
    let total: Rational = j.top_d.iter().zip(&j.top_a).map(|(d, a)| d * a).sum();
    to_f64(&total)
}

/// Smallest corollary bound over `1 ≤ k ≤ k_max`, with its `k`.
pub fn best_eigen_simple(m: usize, n: usize, s: f64, k_max: usize, source: Source) -> Option<EigenBoundResult> {
    let mut lambdas = Vec::with_capacity(k_max + 1);
    let mut best: Option<EigenBoundResult> = None;
    for k in 0..=k_max {
        let j = JacobiOperator::build(m, n, k, source).ok()?;
        let p = j.lambda_max().ok()?;
        lambdas.push(p.eigenvalue);
        if k == 0 || s > lambdas[k - 1] {
            continue;
        }
        let bound = 4.0 * simple_numerator(&j) / (m as f64 - p.eigenvalue);
        if best.as_ref().is_none_or(|b| bound < b.bound) {
            best = Some(EigenBoundResult {
                m,
                n,
                k,
                s,
                epsilon: Vec::new(),
                lambda_eps: p.eigenvalue,
                lambda_prev: lambdas[k - 1],
                lambda_k: p.eigenvalue,
                top_vector: Vec::new(),
                bound,
                threshold: lambdas[k - 1],
                residual: p.residual,
            });
        }
    }
    best
}

/// Largest violation of the generalized Christoffel–Darboux formula
/// `(σ − λ^ε) v^ε = Σ v_κ (ε_κ P_κ + Q_κ)` over the sample points, with `v^ε`
/// scaled to unit maximum coordinate.
pub fn cd_residual(m: usize, n: usize, k: usize, eps: &[f64], points: &[Vec<f64>]) -> Result<f64> {
    let t = ThreeTermData::build(m, n, k)?;
    let j = JacobiOperator::build(m, n, k, Source::Exact)?;
    let pert = j.perturbed(eps)?;
    let table = t.table();
    let coords: Vec<f64> = j
        .index
        .list()
        .iter()
        .enumerate()
        .map(|(i, p)| Ok(pert.vector[i] * to_f64(&table.dim_rational(p)?).sqrt()))
        .collect::<Result<_>>()?;
    let scale = coords.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let qs = t.q_polys(k)?;
    let top = j.top_block();
    let mut worst = 0.0f64;
    for y in points {
        let sigma: f64 = y.iter().sum();
        let mut lhs = 0.0;
        for (c, p) in coords.iter().zip(j.index.list()) {
            lhs += c / scale * table.get(p)?.eval_f64(y)?;
        }
        lhs *= sigma - pert.eigenvalue;
        let mut rhs = 0.0;
        for ((o, e), kappa) in top.clone().zip(eps).zip(j.top_partitions()) {
            let (q, _) = &qs[kappa];
            rhs += coords[o] / scale * (e * table.get(kappa)?.eval_f64(y)? + q.eval_f64(y)?);
        }
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_operators() {
        let j = JacobiOperator::build(1, 4, 0, Source::Exact).unwrap();
        assert_eq!(j.matrix[(0, 0)], 0.25);
        let j = JacobiOperator::build(2, 4, 2, Source::Exact).unwrap();
        for i in 0..j.dim() {
            assert!((j.matrix[(i, i)] - 1.0).abs() < 1e-15);
        }
        let p = JacobiOperator::build(1, 7, 0, Source::ClosedForm).unwrap().lambda_max().unwrap();
        assert!((p.eigenvalue - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn sources_agree() {
        for (m, n, k) in [(1usize, 10usize, 4usize), (2, 7, 3), (3, 9, 2), (2, 4, 3)] {
            let a = JacobiOperator::build(m, n, k, Source::Exact).unwrap();
            let b = JacobiOperator::build(m, n, k, Source::ClosedForm).unwrap();
            assert!((&a.matrix - &b.matrix).amax() < 1e-12, "{m} {n} {k}");
            assert_eq!(a.top_d, b.top_d);
            assert_eq!(a.top_a, b.top_a);
        }
    }

    #[test]
    fn perturbation_interlaces() {
        let (m, n, k) = (2, 7, 3);
        let j = JacobiOperator::build(m, n, k, Source::ClosedForm).unwrap();
        let lk = j.lambda_max().unwrap().eigenvalue;
        let lprev = lambda_k(m, n, k - 1, Source::ClosedForm).unwrap();
        let top = j.top_block().len();
        let small = j.perturbed(&vec![1e-8; top]).unwrap().eigenvalue;
        assert!((small - lk).abs() < 1e-7);
        let e = j.perturbed(&vec![0.5; top]).unwrap().eigenvalue;
        assert!(lprev < e && e < lk);
        let big = j.perturbed(&vec![1e7; top]).unwrap().eigenvalue;
        assert!(big - lprev < 1e-5 && big > lprev);
        assert!(j.perturbed(&vec![-1.0; top]).is_err());
    }

    #[test]
    fn teps_below_corollary() {
        let (m, n) = (1, 10);
        for k in 1..=3 {
            let t = eigen_bound_teps(m, n, k, None, 0.0, Source::Exact).unwrap();
            let c = eigen_bound_simple(m, n, k, 0.0, Source::Exact).unwrap();
            assert!(t.bound <= c.bound * (1.0 + 1e-12), "{} {}", t.bound, c.bound);
        }
    }

    #[test]
    fn generalized_cd() {
        let pts: Vec<Vec<f64>> = (0..20).map(|i| vec![0.05 * i as f64, 0.9 - 0.04 * i as f64]).collect();
        let r = cd_residual(2, 7, 2, &[0.3, 0.7], &pts).unwrap();
        assert!(r < 1e-8, "{r}");
    }
}
