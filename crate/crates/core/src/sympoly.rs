//! Exact symmetric polynomials in `m` variables, stored on the
//! monomial-symmetric basis `m_λ`, together with the differential operators
//! `ε = Σ ∂_i` and the Grassmannian Laplace–Beltrami operator `Δ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::rational::{frac, int, render, to_f64, Rational};

pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct SymPoly {
    m: usize,
    coeffs: BTreeMap<Partition, Rational>,
}

/// Distinct permutations of `v`, in lexicographic order.
pub fn distinct_permutations(v: &[u32]) -> Vec<Exponent> {
    let mut cur: Vec<u32> = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        // next lexicographic permutation
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).expect("pivot");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

fn is_dominant(e: &[u32]) -> bool {
    e.windows(2).all(|w| w[0] >= w[1])
}

/// `(x^p y^q − x^q y^p)/(x − y)` as a list of `(exp_x, exp_y, sign)`.
fn divided_difference(p: u32, q: u32) -> Vec<(u32, u32, i64)> {
    use std::cmp::Ordering::*;
    match p.cmp(&q) {
        Equal => Vec::new(),
        Greater => (0..p - q).map(|t| (p - 1 - t, q + t, 1)).collect(),
        Less => (0..q - p).map(|t| (q - 1 - t, p + t, -1)).collect(),
    }
}

impl SymPoly {
    pub fn zero(m: usize) -> Self {
        SymPoly { m, coeffs: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: Rational) -> Self {
        let mut p = SymPoly::zero(m);
        p.add_term(Partition::empty(), c);
        p
    }

    pub fn one(m: usize) -> Self {
        SymPoly::constant(m, int(1))
    }

    /// The monomial-symmetric polynomial `m_λ`.
    pub fn monomial(m: usize, lambda: Partition) -> Result<Self> {
        if lambda.length() > m {
            return Err(Error::TooManyParts { partition: lambda, m });
        }
        let mut p = SymPoly::zero(m);
        p.add_term(lambda, int(1));
        Ok(p)
    }

    /// `σ = y_1 + … + y_m`.
    pub fn sigma(m: usize) -> Self {
        SymPoly::monomial(m, Partition::from_sorted(&[1])).expect("m >= 1")
    }

    /// Builds from `(partition, coefficient)` pairs; zero coefficients are
    /// dropped and repeated keys summed.
    pub fn from_terms<I>(m: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Partition, Rational)>,
    {
        let mut p = SymPoly::zero(m);
        for (lambda, c) in terms {
            if lambda.length() > m {
                return Err(Error::TooManyParts { partition: lambda, m });
            }
            p.add_term(lambda, c);
        }
        Ok(p)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Maximal `|λ|` over stored terms; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(Partition::degree).max().unwrap_or(0)
    }

    pub fn coeff(&self, lambda: &Partition) -> Rational {
        self.coeffs.get(lambda).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Partition, &Rational)> {
        self.coeffs.iter()
    }

    /// Graded-lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Partition, &Rational)> {
        self.coeffs.iter().next_back()
    }

    pub(crate) fn add_term(&mut self, lambda: Partition, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(lambda) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same_m(&self, other: &SymPoly) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch { left: self.m, right: other.m });
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> SymPoly {
        if c.is_zero() {
            return SymPoly::zero(self.m);
        }
        SymPoly {
            m: self.m,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_same_m(other)?;
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &SymPoly, c: &Rational) -> Result<()> {
        self.check_same_m(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (k, v) in &other.coeffs {
            self.add_term(k.clone(), v * c);
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_same_m(other)?;
        let m = self.m;
        let mut out = SymPoly::zero(m);
        let right: Vec<(Vec<Exponent>, &Rational)> = other
            .coeffs
            .iter()
            .map(|(mu, b)| (distinct_permutations(&mu.padded(m)), b))
            .collect();
        let mut acc: HashMap<Exponent, Rational> = HashMap::new();
        for (lambda, a) in &self.coeffs {
            let left = distinct_permutations(&lambda.padded(m));
            for (perms, b) in &right {
                let ab = a * *b;
                for alpha in &left {
                    for beta in perms {
                        let gamma: Exponent = alpha.iter().zip(beta).map(|(x, y)| x + y).collect();
                        if is_dominant(&gamma) {
                            *acc.entry(gamma).or_insert_with(Rational::zero) += &ab;
                        }
                    }
                }
            }
        }
        for (e, c) in acc {
            out.add_term(Partition::from_sorted(&e), c);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> SymPoly {
        let mut out = SymPoly::one(self.m);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Evaluation at a rational point.
    pub fn eval(&self, y: &[Rational]) -> Result<Rational> {
        if y.len() != self.m {
            return Err(Error::DimensionMismatch { left: self.m, right: y.len() });
        }
        let mut total = Rational::zero();
        for (lambda, c) in &self.coeffs {
            let mut s = Rational::zero();
            for alpha in distinct_permutations(&lambda.padded(self.m)) {
                let mut t = Rational::one();
                for (yi, &a) in y.iter().zip(&alpha) {
                    if a > 0 {
                        t *= num_traits::pow(yi.clone(), a as usize);
                    }
                }
                s += t;
            }
            total += c * s;
        }
        Ok(total)
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.m {
            return Err(Error::DimensionMismatch { left: self.m, right: y.len() });
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(lambda, c)| {
                let s: f64 = distinct_permutations(&lambda.padded(self.m))
                    .iter()
                    .map(|alpha| y.iter().zip(alpha).map(|(yi, &a)| yi.powi(a as i32)).product::<f64>())
                    .sum();
                to_f64(c) * s
            })
            .sum())
    }

    /// Exact value at `(1,…,1)`: each `m_λ` counts its distinct permutations.
    pub fn eval_ones(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|(lambda, c)| c * int(distinct_permutations(&lambda.padded(self.m)).len() as i64))
            .sum()
    }

    /// Full expansion on ordinary monomials.
    pub fn to_raw(&self) -> HashMap<Exponent, Rational> {
        let mut out = HashMap::new();
        for (lambda, c) in &self.coeffs {
            for alpha in distinct_permutations(&lambda.padded(self.m)) {
                out.insert(alpha, c.clone());
            }
        }
        out
    }

    /// Applies a linear operator given by its action on ordinary monomials
    /// and keeps the coefficients of dominant exponents. When `check` is set
    /// the full image is required to be symmetric.
    fn apply_monomial_operator<F>(&self, check: bool, mut op: F) -> Result<SymPoly>
    where
        F: FnMut(&[u32], &mut dyn FnMut(Exponent, Rational)),
    {
        let m = self.m;
        let mut acc: HashMap<Exponent, Rational> = HashMap::new();
        for (lambda, c) in &self.coeffs {
            for alpha in distinct_permutations(&lambda.padded(m)) {
                op(&alpha, &mut |e: Exponent, v: Rational| {
                    if check || is_dominant(&e) {
                        *acc.entry(e).or_insert_with(Rational::zero) += c * v;
                    }
                });
            }
        }
        if check {
            for (e, v) in &acc {
                if v.is_zero() {
                    continue;
                }
                let mut sorted = e.clone();
                sorted.sort_unstable_by(|a, b| b.cmp(a));
                let partner = acc.get(&sorted).cloned().unwrap_or_else(Rational::zero);
                if &partner != v {
                    return Err(Error::Internal(format!(
                        "operator image is not symmetric at exponent {e:?}"
                    )));
                }
            }
        }
        let mut out = SymPoly::zero(m);
        for (e, v) in acc {
            if is_dominant(&e) {
                out.add_term(Partition::from_sorted(&e), v);
            }
        }
        Ok(out)
    }

    /// `ε f = Σ_i ∂f/∂y_i`.
    pub fn apply_epsilon(&self) -> SymPoly {
        self.apply_monomial_operator(false, |alpha, emit| {
            for i in 0..alpha.len() {
                if alpha[i] > 0 {
                    let mut e = alpha.to_vec();
                    e[i] -= 1;
                    emit(e, int(alpha[i] as i64));
                }
            }
        })
        .expect("unchecked application cannot fail")
    }

    /// `Σ_i y_i ∂f/∂y_i` (the degree operator).
    pub fn apply_euler(&self) -> SymPoly {
        let mut out = SymPoly::zero(self.m);
        for (lambda, c) in &self.coeffs {
            out.add_term(lambda.clone(), c * int(lambda.degree() as i64));
        }
        out
    }

    /// The degree-preserving, `n`-independent part
    /// `Δ₀ = Σ y_i² ∂_i² + Σ_{i≠j} y_i² (y_i − y_j)^{-1} ∂_i`.
    pub fn apply_delta0(&self) -> Result<SymPoly> {
        self.apply_monomial_operator(true, delta0_on_monomial)
    }

    /// The Laplace–Beltrami operator `Δ` of `G_{m,n}` induced on symmetric
    /// polynomials in the principal-angle variables `y_i = cos² θ_i`.
    pub fn apply_delta(&self, n: usize) -> Result<SymPoly> {
        let m = self.m;
        if n < 2 * m {
            return Err(Error::InvalidParameters(format!("need n >= 2m, got m = {m}, n = {n}")));
        }
        let euler_coeff = frac(n as i64 - 2 * m as i64 + 2, 2);
        let half = frac(1, 2);
        self.apply_monomial_operator(true, |alpha, emit| {
            delta0_on_monomial(alpha, emit);
            let deg: u32 = alpha.iter().sum();
            if deg > 0 {
                emit(alpha.to_vec(), &euler_coeff * int(deg as i64));
            }
            for i in 0..alpha.len() {
                let a = alpha[i];
                if a == 0 {
                    continue;
                }
                let mut e = alpha.to_vec();
                e[i] -= 1;
                // −y_i ∂_i² − ½ ∂_i
                let c = -(int(a as i64 * (a as i64 - 1)) + &half * int(a as i64));
                emit(e, c);
            }
            // −Σ_{i≠j} y_i (y_i − y_j)^{-1} ∂_i, paired over i < j
            for i in 0..alpha.len() {
                for j in i + 1..alpha.len() {
                    let (a, b) = (alpha[i], alpha[j]);
                    if a == 0 {
                        continue;
                    }
                    for (ex, ey, sign) in divided_difference(a, b) {
                        let mut e = alpha.to_vec();
                        e[i] = ex;
                        e[j] = ey;
                        emit(e, int(-(a as i64) * sign));
                    }
                }
            }
        })
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    /// `(parts, "p/q")` pairs in graded-lex order; the textual form used by
    /// the on-disk table cache.
    pub fn to_term_list(&self) -> Vec<(Vec<u32>, String)> {
        self.coeffs
            .iter()
            .map(|(k, v)| (k.parts().to_vec(), render(v)))
            .collect()
    }

    pub fn from_term_list(m: usize, terms: &[(Vec<u32>, String)]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|(p, v)| Ok((Partition::new(p.clone())?, crate::rational::parse(v)?)))
            .collect::<Result<Vec<_>>>()?;
        SymPoly::from_terms(m, parsed)
    }
}

/// Action of `Δ₀` on the ordinary monomial `y^α`, written so that summing
/// over a full symmetric orbit reproduces the divided differences exactly.
fn delta0_on_monomial(alpha: &[u32], emit: &mut dyn FnMut(Exponent, Rational)) {
    let diag: i64 = alpha.iter().map(|&a| a as i64 * (a as i64 - 1)).sum();
    if diag != 0 {
        emit(alpha.to_vec(), int(diag));
    }
    for i in 0..alpha.len() {
        for j in i + 1..alpha.len() {
            let (a, b) = (alpha[i], alpha[j]);
            if a == 0 {
                continue;
            }
            for (ex, ey, sign) in divided_difference(a + 1, b) {
                let mut e = alpha.to_vec();
                e[i] = ex;
                e[j] = ey;
                emit(e, int(a as i64 * sign));
            }
        }
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (idx, (lambda, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if lambda.is_empty() {
                write!(f, "{}", render(&abs))?;
            } else if abs.is_one() {
                write!(f, "m{lambda}")?;
            } else {
                write!(f, "{}*m{lambda}", render(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymPoly[m={}]({})", self.m, self)
    }
}

impl Add for &SymPoly {
    type Output = SymPoly;
    fn add(self, rhs: &SymPoly) -> SymPoly {
        self.try_add(rhs).expect("mismatched variable count")
    }
}

impl Sub for &SymPoly {
    type Output = SymPoly;
    fn sub(self, rhs: &SymPoly) -> SymPoly {
        self.try_add(&-rhs).expect("mismatched variable count")
    }
}

impl Neg for &SymPoly {
    type Output = SymPoly;
    fn neg(self) -> SymPoly {
        self.scale(&int(-1))
    }
}

impl Mul for &SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: &SymPoly) -> SymPoly {
        self.try_mul(rhs).expect("mismatched variable count")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::part;

    fn mono(m: usize, p: &[u32]) -> SymPoly {
        SymPoly::monomial(m, part(p)).unwrap()
    }

    #[test]
    fn square_of_sigma() {
        let s = SymPoly::sigma(2);
        let expected = &mono(2, &[2]) + &mono(2, &[1, 1]).scale(&int(2));
        assert_eq!(&s * &s, expected);
        assert_eq!(&s * &SymPoly::one(2), s);
    }

    #[test]
    fn mismatched_m_is_an_error() {
        assert!(matches!(
            SymPoly::sigma(2).try_mul(&SymPoly::sigma(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn evaluation() {
        assert_eq!(SymPoly::sigma(2).eval_ones(), int(2));
        let v = mono(2, &[1, 1]).eval(&[frac(1, 2), frac(1, 3)]).unwrap();
        assert_eq!(v, frac(1, 6));
        let f = &mono(3, &[2, 1]) + &SymPoly::constant(3, frac(1, 3));
        let ones = vec![int(1); 3];
        assert_eq!(f.eval(&ones).unwrap(), f.eval_ones());
        assert!((f.eval_f64(&[0.5, 0.25, 0.125]).unwrap()
            - to_f64(&f.eval(&[frac(1, 2), frac(1, 4), frac(1, 8)]).unwrap()))
        .abs()
            < 1e-14);
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(SymPoly::sigma(3).apply_epsilon(), SymPoly::constant(3, int(3)));
        assert_eq!(mono(2, &[2]).apply_epsilon(), SymPoly::sigma(2).scale(&int(2)));
        assert!(SymPoly::one(2).apply_epsilon().is_zero());
    }

    #[test]
    fn delta_on_constants_and_sigma() {
        assert!(SymPoly::one(3).apply_delta(7).unwrap().is_zero());
        // Δσ = (n/2) σ − m²/2
        for (m, n) in [(1, 4), (2, 5), (2, 6), (3, 9)] {
            let s = SymPoly::sigma(m);
            let expected = &s.scale(&frac(n as i64, 2)) - &SymPoly::constant(m, frac((m * m) as i64, 2));
            assert_eq!(s.apply_delta(n).unwrap(), expected, "m={m} n={n}");
        }
    }

    #[test]
    fn sigma_minus_m2_over_n_is_an_eigenvector() {
        for (m, n) in [(1, 4), (2, 4), (2, 7), (3, 6), (3, 10)] {
            let p = &SymPoly::sigma(m) - &SymPoly::constant(m, frac((m * m) as i64, n as i64));
            let dp = p.apply_delta(n).unwrap();
            assert_eq!(dp, p.scale(&frac(n as i64, 2)));
        }
    }

    #[test]
    fn divided_difference_small() {
        assert_eq!(divided_difference(2, 0), vec![(1, 0, 1), (0, 1, 1)]);
        assert_eq!(divided_difference(0, 2), vec![(1, 0, -1), (0, 1, -1)]);
        assert!(divided_difference(3, 3).is_empty());
    }

    #[test]
    fn render_is_canonical() {
        let p = &SymPoly::sigma(2) - &SymPoly::one(2);
        assert_eq!(p.to_string(), "m(1) - 1");
        let q = &mono(2, &[1, 1]).scale(&frac(-3, 2)) + &mono(2, &[2]);
        assert_eq!(q.to_string(), "m(2) - 3/2*m(1,1)");
        assert_eq!(SymPoly::zero(2).to_string(), "0");
    }

    #[test]
    fn permutations_are_distinct() {
        assert_eq!(distinct_permutations(&[1, 1, 0]).len(), 3);
        assert_eq!(distinct_permutations(&[2, 1, 0]).len(), 6);
        assert_eq!(distinct_permutations(&[]).len(), 1);
    }
}
