//! Three-term relation `σ P_s = A_s P_{s+1} + B_s P_s + C_s P_{s−1}`, the
//! closed forms for the normalized entries, and the Christoffel–Darboux
//! kernel.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::jack::IdentityFailure;
use crate::partitions::{q_values, Partition};
use crate::rational::{frac, int, to_f64, Rational};
use crate::sympoly::SymPoly;
use crate::zonal::ZonalTable;

/// Dense exact matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> RMatrix {
        let mut t = RMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// `diag(d) · self`.
    pub fn left_diag(&self, d: &[Rational]) -> RMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * self.cols + j] *= &d[i];
            }
        }
        out
    }

    pub fn row_sum(&self, i: usize) -> Rational {
        (0..self.cols).map(|j| self.get(i, j)).sum()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| to_f64(self.get(i, j))).collect())
            .collect()
    }
}

/// Exact three-term matrices for degrees `0..=k`.
#[derive(Clone, Debug)]
pub struct ThreeTermData {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    table: Arc<ZonalTable>,
    /// `a[s]` is `π_s × π_{s+1}`.
    pub a: Vec<RMatrix>,
    /// `b[s]` is `π_s × π_s`.
    pub b: Vec<RMatrix>,
    /// `c[s]` is `π_s × π_{s−1}`; `c[0]` is `1 × 0`.
    pub c: Vec<RMatrix>,
    /// `d[s][i] = d_{2κ}` for the `i`-th partition of degree `s`.
    pub d: Vec<Vec<Rational>>,
}

impl ThreeTermData {
    /// Expands `σ P_κ` for every `|κ| ≤ k`.
    pub fn build(m: usize, n: usize, k: usize) -> Result<Self> {
        let table = ZonalTable::shared(m, n, k + 1)?;
        Self::from_table(table, k)
    }

    pub fn from_table(table: Arc<ZonalTable>, k: usize) -> Result<Self> {
        if table.max_degree() < k + 1 {
            return Err(Error::DegreeOverflow { degree: k + 1, max: table.max_degree() });
        }
        let (m, n) = (table.m(), table.n());
        let idx = table.index();
        let sigma = SymPoly::sigma(m);
        let (mut a, mut b, mut c, mut d) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for s in 0..=k {
            let level = idx.of_degree(s);
            let up = idx.of_degree(s + 1);
            let down = if s == 0 { &[][..] } else { idx.of_degree(s - 1) };
            let mut am = RMatrix::zeros(level.len(), up.len());
            let mut bm = RMatrix::zeros(level.len(), level.len());
            let mut cm = RMatrix::zeros(level.len(), down.len());
            for (i, kappa) in level.iter().enumerate() {
                let e = table.p_expand(&(&sigma * table.get(kappa)?))?;
                for (mu, v) in e.coeffs {
                    let deg = mu.degree();
                    let (target, list) = if deg == s + 1 {
                        (&mut am, up)
                    } else if deg == s {
                        (&mut bm, level)
                    } else if deg + 1 == s {
                        (&mut cm, down)
                    } else {
                        return Err(Error::Internal(format!(
                            "σ·P{kappa} has a component on P{mu}"
                        )));
                    };
                    let j = list.iter().position(|p| p == &mu).expect("indexed");
                    target.set(i, j, v);
                }
            }
            a.push(am);
            b.push(bm);
            c.push(cm);
            d.push(level.iter().map(|p| table.dim_rational(p)).collect::<Result<Vec<_>>>()?);
        }
        Ok(ThreeTermData { m, n, k, table, a, b, c, d })
    }

    pub fn table(&self) -> &ZonalTable {
        &self.table
    }

    pub fn level(&self, s: usize) -> &[Partition] {
        self.table.index().of_degree(s)
    }

    /// `A_s[κ, μ]` by partition.
    pub fn a_entry(&self, kappa: &Partition, mu: &Partition) -> Rational {
        let s = kappa.degree();
        if s > self.k || mu.degree() != s + 1 {
            return Rational::zero();
        }
        let i = self.level(s).iter().position(|p| p == kappa);
        let j = self.level(s + 1).iter().position(|p| p == mu);
        match (i, j) {
            (Some(i), Some(j)) => self.a[s].get(i, j).clone(),
            _ => Rational::zero(),
        }
    }

    pub fn b_diag(&self, kappa: &Partition) -> Rational {
        let s = kappa.degree();
        match self.level(s).iter().position(|p| p == kappa) {
            Some(i) if s <= self.k => self.b[s].get(i, i).clone(),
            _ => Rational::zero(),
        }
    }

    /// `Q_κ = Σ_μ A_k[κ,μ] P_μ` and `a_κ = Q_κ(1,…,1)` for `|κ| = s`.
    pub fn q_polys(&self, s: usize) -> Result<BTreeMap<Partition, (SymPoly, Rational)>> {
        if s > self.k {
            return Err(Error::DegreeOverflow { degree: s, max: self.k });
        }
        let mut out = BTreeMap::new();
        for (i, kappa) in self.level(s).iter().enumerate() {
            let mut q = SymPoly::zero(self.m);
            for (j, mu) in self.level(s + 1).iter().enumerate() {
                let v = self.a[s].get(i, j);
                if !v.is_zero() {
                    q.add_scaled(self.table.get(mu)?, v)?;
                }
            }
            let a = self.a[s].row_sum(i);
            out.insert(kappa.clone(), (q, a));
        }
        Ok(out)
    }

    /// `a_κ` for `|κ| = s` without building `Q_κ`.
    pub fn a_values(&self, s: usize) -> Vec<Rational> {
        (0..self.a[s].rows).map(|i| self.a[s].row_sum(i)).collect()
    }

    /// Structural identities of the relation; empty when all hold.
    pub fn check_structure(&self) -> Vec<IdentityFailure> {
        let mut f = Vec::new();
        let m_r = int(self.m as i64);
        let tag = format!("(m = {}, n = {})", self.m, self.n);
        for s in 0..=self.k {
            let level = self.level(s);
            let db = self.b[s].left_diag(&self.d[s]);
            if db.transpose() != db {
                f.push(IdentityFailure(format!("D_{s} B_{s} is not symmetric {tag}")));
            }
            if s > 0 {
                let dc = self.c[s].left_diag(&self.d[s]);
                let da = self.a[s - 1].left_diag(&self.d[s - 1]);
                if dc != da.transpose() {
                    f.push(IdentityFailure(format!("D_{s} C_{s} != (D_{} A_{})^t {tag}", s - 1, s - 1)));
                }
            }
            for (i, kappa) in level.iter().enumerate() {
                for j in 0..level.len() {
                    let v = self.b[s].get(i, j);
                    if i != j && !v.is_zero() {
                        f.push(IdentityFailure(format!("B_{s} has off-diagonal entry at {kappa} {tag}")));
                    }
                    if v.is_negative() {
                        f.push(IdentityFailure(format!("B_{s} has a negative entry at {kappa} {tag}")));
                    }
                }
                let raises: Vec<Partition> = kappa
                    .u_set(self.m)
                    .into_iter()
                    .map(|r| kappa.raise(r, self.m).expect("admissible"))
                    .collect();
                for (j, mu) in self.level(s + 1).iter().enumerate() {
                    let v = self.a[s].get(i, j);
                    let expected = raises.contains(mu);
                    if expected && !v.is_positive() {
                        f.push(IdentityFailure(format!("A_{s}[{kappa},{mu}] is not positive {tag}")));
                    }
                    if !expected && !v.is_zero() {
                        f.push(IdentityFailure(format!("A_{s}[{kappa},{mu}] should vanish {tag}")));
                    }
                }
                let total = self.a[s].row_sum(i) + self.b[s].row_sum(i) + self.c[s].row_sum(i);
                if total != m_r {
                    f.push(IdentityFailure(format!("row sum at {kappa} is {total}, not m {tag}")));
                }
            }
        }
        f
    }

    /// `K_s(x, y) = Σ_{|ν|≤s} d_{2ν} P_ν(x) P_ν(y)`.
    pub fn cd_kernel(&self, s: usize, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        let mut total = Rational::zero();
        for t in 0..=s.min(self.k + 1) {
            for nu in self.level(t) {
                let p = self.table.get(nu)?;
                total += self.table.dim_rational(nu)? * p.eval(x)? * p.eval(y)?;
            }
        }
        Ok(total)
    }

    /// `K_s(x, ·)` as a polynomial.
    pub fn cd_kernel_poly(&self, s: usize, x: &[Rational]) -> Result<SymPoly> {
        let mut out = SymPoly::zero(self.m);
        for t in 0..=s {
            for nu in self.level(t) {
                let p = self.table.get(nu)?;
                out.add_scaled(p, &(self.table.dim_rational(nu)? * p.eval(x)?))?;
            }
        }
        Ok(out)
    }

    /// Both Christoffel–Darboux identities at degree `s` and the points
    /// given; empty when all hold exactly.
    pub fn cd_check(&self, s: usize, points: &[(Vec<Rational>, Vec<Rational>)]) -> Result<Vec<IdentityFailure>> {
        let qs = self.q_polys(s)?;
        let m_r = int(self.m as i64);
        let mut f = Vec::new();
        for (x, y) in points {
            let sx: Rational = x.iter().sum();
            let sy: Rational = y.iter().sum();
            let lhs = (&sx - &sy) * self.cd_kernel(s, x, y)?;
            let mut rhs = Rational::zero();
            let mut rhs2 = Rational::zero();
            for (kappa, (q, _)) in &qs {
                let p = self.table.get(kappa)?;
                let d = self.table.dim_rational(kappa)?;
                rhs += &d * (q.eval(x)? * p.eval(y)? - p.eval(x)? * q.eval(y)?);
                let eq = q.apply_epsilon().eval(y)?;
                let ep = p.apply_epsilon().eval(y)?;
                rhs2 += &d / &m_r * (eq * p.eval(y)? - ep * q.eval(y)?);
            }
            if lhs != rhs {
                f.push(IdentityFailure(format!("CD identity (i) fails at degree {s}, x = {x:?}, y = {y:?}")));
            }
            if self.cd_kernel(s, y, y)? != rhs2 {
                f.push(IdentityFailure(format!("CD identity (ii) fails at degree {s}, y = {y:?}")));
            }
        }
        Ok(f)
    }
}

/// Closed-form entry of the normalized operator.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormEntry {
    /// Exact value for a diagonal entry; exact radicand for an off-diagonal one.
    pub exact: Rational,
    pub value: f64,
}

fn dfun(x: i64) -> Rational {
    frac(x * x, x * x - 1)
}

fn cfun(x: i64, big_n: i64) -> Rational {
    if x == 0 {
        frac(1, big_n + 2)
    } else {
        frac((x + 1) * (x + big_n), (2 * x + big_n) * (2 * x + big_n + 2))
    }
}

fn check_mn(kappa: &Partition, m: usize, n: usize) -> Result<()> {
    if m == 0 || n < 2 * m {
        return Err(Error::InvalidParameters(format!("need 1 <= m <= n/2, got m = {m}, n = {n}")));
    }
    if kappa.length() > m {
        return Err(Error::TooManyParts { partition: kappa.clone(), m });
    }
    Ok(())
}

/// `B_s[κ,κ]` from the closed form in `q_i = 2κ_i − i + m`, `N = n − 2m`.
pub fn closed_form_diag(kappa: &Partition, m: usize, n: usize) -> Result<ClosedFormEntry> {
    check_mn(kappa, m, n)?;
    let q = q_values(kappa, m);
    let big_n = n as i64 - 2 * m as i64;
    let quarter = frac(big_n, 4);
    let mut v = frac(m as i64, 2);
    for i in kappa.u_set(m) {
        let mut p = int(1);
        for (j, &qj) in q.iter().enumerate() {
            if j != i {
                p *= dfun(q[i] - qj + 1);
            }
        }
        v -= &quarter * p * frac(q[i] + 2, 2 * q[i] + big_n + 2);
    }
    for i in kappa.d_set(m) {
        let mut p = int(1);
        for (j, &qj) in q.iter().enumerate() {
            if j != i {
                p *= dfun(q[i] - qj - 1);
            }
        }
        v += &quarter * p * frac(q[i], 2 * q[i] + big_n - 2);
    }
    let value = to_f64(&v);
    Ok(ClosedFormEntry { exact: v, value })
}

/// `A′_s[κ, κ^(i)]` (0-based `i`) as its exact square.
pub fn closed_form_offdiag(kappa: &Partition, i: usize, m: usize, n: usize) -> Result<ClosedFormEntry> {
    check_mn(kappa, m, n)?;
    if !kappa.u_set(m).contains(&i) {
        return Err(Error::IndexNotAdmissible { op: "raise", partition: kappa.clone(), index: i, m });
    }
    let q = q_values(kappa, m);
    let big_n = n as i64 - 2 * m as i64;
    let mut r = cfun(q[i], big_n) * cfun(q[i] + 1, big_n);
    for (j, &qj) in q.iter().enumerate() {
        if j != i {
            r *= dfun(q[i] - qj + 1) * dfun(q[i] + qj + big_n + 1);
        }
    }
    let value = to_f64(&r).sqrt();
    Ok(ClosedFormEntry { exact: r, value })
}

/// `A_s[κ, κ^(i)]` (unnormalized) from its product formula.
pub fn closed_form_a(kappa: &Partition, i: usize, m: usize, n: usize) -> Result<Rational> {
    check_mn(kappa, m, n)?;
    if !kappa.u_set(m).contains(&i) {
        return Err(Error::IndexNotAdmissible { op: "raise", partition: kappa.clone(), index: i, m });
    }
    let q = q_values(kappa, m);
    let big_n = n as i64 - 2 * m as i64;
    let qi = q[i];
    let mut r = int(1);
    for (j, &qj) in q.iter().enumerate() {
        if j != i {
            r *= frac(qi - qj + 1, qi - qj) * frac(qi + qj + big_n + 1, qi + qj + big_n);
        }
    }
    if qi == 0 {
        // limiting value, needed when N = 0
        r *= frac(big_n + 1, big_n + 2);
    } else {
        r *= frac((qi + big_n) * (qi + big_n + 1), (2 * qi + big_n) * (2 * qi + big_n + 2));
    }
    Ok(r)
}

/// Rank-one closed forms `(b_s, a′_s²)`.
pub fn rank_one_entries(s: usize, n: usize) -> (Rational, Rational) {
    let (s, n) = (s as i64, n as i64);
    let b = (int(1) - frac((n - 2) * (n - 4), (4 * s + n) * (4 * s + n - 4))) / int(2);
    let a2 = frac(
        (2 * s + 1) * (2 * s + 2) * (2 * s + n - 2) * (2 * s + n - 1),
        (4 * s + n - 2) * (4 * s + n) * (4 * s + n) * (4 * s + n + 2),
    );
    (b, a2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{dim_on_ratio, enumerate, part};

    #[test]
    fn degree_zero_blocks() {
        let (m, n) = (2usize, 7usize);
        let t = ThreeTermData::build(m, n, 1).unwrap();
        assert_eq!(t.b[0].get(0, 0), &frac(4, 7));
        assert_eq!(t.a[0].get(0, 0), &(int(2) * frac(5, 7)));
        assert!(t.check_structure().is_empty());
    }

    #[test]
    fn half_dimension_diagonal() {
        let t = ThreeTermData::build(2, 4, 3).unwrap();
        for s in 0..=3 {
            for i in 0..t.b[s].rows {
                assert_eq!(t.b[s].get(i, i), &int(1));
            }
        }
        assert!(t.check_structure().is_empty());
    }

    #[test]
    fn closed_forms_agree() {
        for (m, n) in [(1usize, 7usize), (2, 7), (2, 4), (3, 9), (3, 6)] {
            let t = ThreeTermData::build(m, n, 2).unwrap();
            for kappa in enumerate(m, 2).list() {
                assert_eq!(closed_form_diag(kappa, m, n).unwrap().exact, t.b_diag(kappa), "{kappa} {m} {n}");
                for i in kappa.u_set(m) {
                    let mu = kappa.raise(i, m).unwrap();
                    let a = t.a_entry(kappa, &mu);
                    assert_eq!(closed_form_a(kappa, i, m, n).unwrap(), a);
                    let ratio = dim_on_ratio(kappa, i, m, n).unwrap();
                    let rad = closed_form_offdiag(kappa, i, m, n).unwrap().exact;
                    assert_eq!(rad, &a * &a / ratio, "{kappa} i={i} {m} {n}");
                }
            }
        }
    }

    #[test]
    fn rank_one_displays() {
        let n = 10;
        for s in 0..=3usize {
            let kappa = if s == 0 { Partition::empty() } else { part(&[s as u32]) };
            let (b, a2) = rank_one_entries(s, n);
            assert_eq!(closed_form_diag(&kappa, 1, n).unwrap().exact, b);
            assert_eq!(closed_form_offdiag(&kappa, 0, 1, n).unwrap().exact, a2);
        }
    }

    #[test]
    fn christoffel_darboux_small() {
        let t = ThreeTermData::build(2, 7, 2).unwrap();
        let pts = vec![
            (vec![frac(1, 3), frac(1, 5)], vec![frac(2, 7), frac(1, 2)]),
            (vec![frac(3, 4), int(0)], vec![frac(1, 9), frac(5, 6)]),
        ];
        for s in 0..=2 {
            assert!(t.cd_check(s, &pts).unwrap().is_empty());
        }
        assert_eq!(t.cd_kernel(0, &pts[0].0, &pts[0].1).unwrap(), int(1));
    }
}
