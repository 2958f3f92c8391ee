//! Jack polynomials `C_κ` (zonal polynomials of `GL(m,ℝ)/O(m,ℝ)`),
//! normalized by `C_κ(1,…,1) = 1`, and the two Pieri coefficient families.
//!
//! The polynomials are built as dominance-triangular eigenfunctions of the
//! degree-preserving operator `Δ₀`; the closed-form coefficients are kept
//! independent of that construction so each can check the other.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::partitions::{partitions_of, q_values, Partition};
use crate::rational::{frac, int, Rational};
use crate::sympoly::SymPoly;

#[derive(Clone, Debug)]
pub struct JackTable {
    m: usize,
    max_degree: usize,
    polys: BTreeMap<Partition, SymPoly>,
    eigenvalues: BTreeMap<Partition, Rational>,
}

impl JackTable {
    pub fn build(m: usize, max_degree: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameters("m must be at least 1".into()));
        }
        let mut polys = BTreeMap::new();
        let mut eigenvalues = BTreeMap::new();
        for d in 0..=max_degree {
            let basis = partitions_of(d, m);
            let images: Vec<SymPoly> = basis
                .iter()
                .map(|nu| SymPoly::monomial(m, nu.clone())?.apply_delta0())
                .collect::<Result<_>>()?;
            let diag: Vec<Rational> =
                basis.iter().zip(&images).map(|(nu, img)| img.coeff(nu)).collect();
            for (nu, img) in basis.iter().zip(&images) {
                if let Some((top, _)) = img.leading_term() {
                    if top > nu {
                        return Err(Error::Internal(format!(
                            "Δ₀ m{nu} has a term m{top} above the diagonal"
                        )));
                    }
                }
            }
            for (li, lambda) in basis.iter().enumerate() {
                let mut c: Vec<Rational> = vec![Rational::zero(); basis.len()];
                c[li] = int(1);
                for mi in (0..li).rev() {
                    let mu = &basis[mi];
                    let mut rhs = Rational::zero();
                    for ni in mi + 1..=li {
                        if !c[ni].is_zero() {
                            rhs += &c[ni] * images[ni].coeff(mu);
                        }
                    }
                    if rhs.is_zero() {
                        continue;
                    }
                    let gap = &diag[li] - &diag[mi];
                    if gap.is_zero() {
                        return Err(Error::EigenvalueCollision {
                            m,
                            n: 0,
                            kappa: lambda.clone(),
                            other: mu.clone(),
                        });
                    }
                    c[mi] = rhs / gap;
                }
                let poly = SymPoly::from_terms(m, basis.iter().cloned().zip(c))?;
                let at_ones = poly.eval_ones();
                let poly = poly.scale(&(int(1) / at_ones));
                polys.insert(lambda.clone(), poly);
                eigenvalues.insert(lambda.clone(), diag[li].clone());
            }
        }
        Ok(JackTable { m, max_degree, polys, eigenvalues })
    }

    pub(crate) fn from_parts(
        m: usize,
        max_degree: usize,
        polys: BTreeMap<Partition, SymPoly>,
        eigenvalues: BTreeMap<Partition, Rational>,
    ) -> Self {
        JackTable { m, max_degree, polys, eigenvalues }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn get(&self, kappa: &Partition) -> Result<&SymPoly> {
        self.polys.get(kappa).ok_or_else(|| self.missing(kappa))
    }

    /// Eigenvalue of `Δ₀` on `C_κ`.
    pub fn eigenvalue(&self, kappa: &Partition) -> Result<&Rational> {
        self.eigenvalues.get(kappa).ok_or_else(|| self.missing(kappa))
    }

    pub fn polys(&self) -> &BTreeMap<Partition, SymPoly> {
        &self.polys
    }

    fn missing(&self, kappa: &Partition) -> Error {
        if kappa.length() > self.m {
            Error::TooManyParts { partition: kappa.clone(), m: self.m }
        } else {
            Error::DegreeOverflow { degree: kappa.degree(), max: self.max_degree }
        }
    }

    /// Coefficients of `f` on the `C_κ` basis.
    pub fn expand(&self, f: &SymPoly) -> Result<BTreeMap<Partition, Rational>> {
        if f.m() != self.m {
            return Err(Error::DimensionMismatch { left: self.m, right: f.m() });
        }
        triangular_expand(f, |lambda| self.polys.get(lambda), self.max_degree)
    }
}

/// Expansion on a basis indexed by partitions whose element `λ` has leading
/// graded-lex monomial `m_λ`.
pub(crate) fn triangular_expand<'a, F>(
    f: &SymPoly,
    basis: F,
    max_degree: usize,
) -> Result<BTreeMap<Partition, Rational>>
where
    F: Fn(&Partition) -> Option<&'a SymPoly>,
{
    if f.degree() > max_degree {
        return Err(Error::DegreeOverflow { degree: f.degree(), max: max_degree });
    }
    let mut rest = f.clone();
    let mut out = BTreeMap::new();
    while let Some((lambda, c)) = rest.leading_term() {
        let lambda = lambda.clone();
        let b = basis(&lambda).ok_or_else(|| {
            Error::Internal(format!("basis element {lambda} missing from table"))
        })?;
        let lead = b.coeff(&lambda);
        if lead.is_zero() {
            return Err(Error::Internal(format!("basis element {lambda} has no leading term")));
        }
        let x = c / &lead;
        rest.add_scaled(b, &-x.clone())?;
        out.insert(lambda, x);
    }
    Ok(out)
}

/// `(b(κ^(i), κ), binom(κ^(i), κ))` from their closed forms; `i` is 0-based.
pub fn pieri_coeffs(kappa: &Partition, i: usize, m: usize) -> Result<(Rational, Rational)> {
    if !kappa.u_set(m).contains(&i) {
        return Err(Error::IndexNotAdmissible { op: "raise", partition: kappa.clone(), index: i, m });
    }
    let ki = kappa.part(i) as i64;
    let mut b = int(1);
    let mut prod = int(1);
    for j in 0..m {
        if j == i {
            continue;
        }
        let base = 2 * ki - 2 * kappa.part(j) as i64 + j as i64 - i as i64;
        b *= frac(base + 1, base);
        prod *= frac(base + 1, base + 2);
    }
    let lead = int(ki + 1) + frac(m as i64 - 1 - i as i64, 2);
    Ok((b, lead * prod))
}

/// `Σ_{i=1}^m ∏_{j≠i} (q_i − q_j + 1)/(q_i − q_j)`, which equals `m`.
pub fn pieri_q_sum(kappa: &Partition, m: usize) -> Rational {
    let q = q_values(kappa, m);
    (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i)
                .map(|j| frac(q[i] - q[j] + 1, q[i] - q[j]))
                .product::<Rational>()
        })
        .sum()
}

/// Raises of `κ` with both closed-form coefficients.
pub fn raises(kappa: &Partition, m: usize) -> Vec<(Partition, Rational, Rational)> {
    kappa
        .u_set(m)
        .into_iter()
        .map(|i| {
            let (b, binom) = pieri_coeffs(kappa, i, m).expect("index from u_set");
            (kappa.raise(i, m).expect("index from u_set"), b, binom)
        })
        .collect()
}

fn coeff_of(list: &[(Partition, Rational, Rational)], target: &Partition) -> (Rational, Rational) {
    list.iter()
        .find(|(p, _, _)| p == target)
        .map(|(_, b, c)| (b.clone(), c.clone()))
        .unwrap_or_else(|| (Rational::zero(), Rational::zero()))
}

/// Left side of the commutator identity `(εσ − σε) C_κ = m C_κ` read on
/// `C_{κ'}`, using only the closed-form coefficients.
pub fn bibinom_lhs(kappa: &Partition, kappa2: &Partition, m: usize) -> Rational {
    let mut total = Rational::zero();
    for (mu, b, _) in raises(kappa, m) {
        let (_, binom) = coeff_of(&raises(kappa2, m), &mu);
        total += b * binom;
    }
    for i in kappa.d_set(m) {
        let nu = kappa.lower(i).expect("index from d_set");
        let up = raises(&nu, m);
        let (_, binom_k) = coeff_of(&up, kappa);
        let (b_k2, _) = coeff_of(&up, kappa2);
        total -= binom_k * b_k2;
    }
    total
}

/// One failed identity, with a human-readable description.
#[derive(Clone, Debug)]
pub struct IdentityFailure(pub String);

/// Checks `σ C_κ = Σ b C_{κ^(i)}` and `ε C_κ = Σ binom C_{κ_(i)}` as exact
/// polynomial identities for every `κ` in the table below its top degree.
pub fn check_pieri(table: &JackTable) -> Result<Vec<IdentityFailure>> {
    let m = table.m;
    let sigma = SymPoly::sigma(m);
    let mut failures = Vec::new();
    for (kappa, c) in &table.polys {
        if kappa.degree() < table.max_degree {
            let mut rhs = SymPoly::zero(m);
            for (mu, b, _) in raises(kappa, m) {
                rhs.add_scaled(table.get(&mu)?, &b)?;
            }
            if &sigma * c != rhs {
                failures.push(IdentityFailure(format!("sigma-Pieri fails at {kappa} (m = {m})")));
            }
        }
        let mut rhs = SymPoly::zero(m);
        for i in kappa.d_set(m) {
            let nu = kappa.lower(i)?;
            let (_, binom) = coeff_of(&raises(&nu, m), kappa);
            rhs.add_scaled(table.get(&nu)?, &binom)?;
        }
        if c.apply_epsilon() != rhs {
            failures.push(IdentityFailure(format!("epsilon-Pieri fails at {kappa} (m = {m})")));
        }
    }
    Ok(failures)
}

/// Checks the commutator identity for all pairs of equal degree up to
/// `max_degree`.
pub fn check_bibinom(m: usize, max_degree: usize) -> Vec<IdentityFailure> {
    let mut failures = Vec::new();
    for d in 0..=max_degree {
        let level = partitions_of(d, m);
        for k1 in &level {
            for k2 in &level {
                let expected = if k1 == k2 { int(m as i64) } else { Rational::zero() };
                let got = bibinom_lhs(k1, k2, m);
                if got != expected {
                    failures.push(IdentityFailure(format!(
                        "commutator identity at ({k1}, {k2}), m = {m}: got {got}"
                    )));
                }
            }
        }
    }
    failures
}
