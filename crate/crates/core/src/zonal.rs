//! Zonal polynomials `P_κ` of `G_{m,n}`: eigenvectors of `Δ` that are
//! containment-triangular on the Jack basis and take the value 1 at
//! `(1,…,1)`. Also the exact inner product of the invariant measure and the
//! change of basis onto `{P_κ}`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jack::{triangular_expand, JackTable};
use crate::partitions::{dim_on_half, enumerate, Partition, PartitionIndexSet};
use crate::rational::{int, parse, render, Rational};
use crate::sympoly::SymPoly;

/// Environment variable naming a directory for on-disk table caching.
pub const CACHE_DIR_ENV: &str = "GRASSLP_CACHE_DIR";
const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct ZonalTable {
    m: usize,
    n: usize,
    max_degree: usize,
    index: PartitionIndexSet,
    jack: JackTable,
    polys: BTreeMap<Partition, SymPoly>,
    eigenvalues: BTreeMap<Partition, Rational>,
    dims: BTreeMap<Partition, BigUint>,
    /// `P_κ = Σ_μ β_{κ,μ} C_μ`, including `μ = κ`.
    beta: BTreeMap<Partition, BTreeMap<Partition, Rational>>,
    /// `C_κ = Σ_μ α_{κ,μ} P_μ`, including `μ = κ`.
    alpha: BTreeMap<Partition, BTreeMap<Partition, Rational>>,
}

/// Coefficients of a symmetric polynomial on the `P_κ` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PExpansion {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub coeffs: BTreeMap<Partition, Rational>,
}

impl PExpansion {
    pub fn coeff(&self, kappa: &Partition) -> Rational {
        self.coeffs.get(kappa).cloned().unwrap_or_else(Rational::zero)
    }

    /// `f_0`, the coefficient on `P_() = 1`.
    pub fn constant(&self) -> Rational {
        self.coeff(&Partition::empty())
    }

    /// `Σ f_κ P_κ`.
    pub fn reconstruct(&self, table: &ZonalTable) -> Result<SymPoly> {
        let mut out = SymPoly::zero(self.m);
        for (kappa, c) in &self.coeffs {
            out.add_scaled(table.get(kappa)?, c)?;
        }
        Ok(out)
    }

    /// `Σ f_κ`, the value at `(1,…,1)`.
    pub fn value_at_ones(&self) -> Rational {
        self.coeffs.values().sum()
    }
}

fn check_params(m: usize, n: usize) -> Result<()> {
    if m == 0 || n < 2 * m {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= m <= n/2, got m = {m}, n = {n}"
        )));
    }
    Ok(())
}

impl ZonalTable {
    /// Builds every `P_κ` with `|κ| ≤ max_degree`, `ℓ(κ) ≤ m`.
    pub fn build(m: usize, n: usize, max_degree: usize) -> Result<Self> {
        check_params(m, n)?;
        let jack = JackTable::build(m, max_degree)?;
        Self::from_jack(m, n, max_degree, jack, None)
    }

    fn from_jack(
        m: usize,
        n: usize,
        max_degree: usize,
        jack: JackTable,
        known_beta: Option<(BTreeMap<Partition, BTreeMap<Partition, Rational>>, BTreeMap<Partition, Rational>)>,
    ) -> Result<Self> {
        let index = enumerate(m, max_degree);
        let (beta, eigenvalues) = match known_beta {
            Some(b) => b,
            None => solve_beta(m, n, &index, &jack)?,
        };

        let mut polys = BTreeMap::new();
        for (kappa, coeffs) in &beta {
            let mut p = SymPoly::zero(m);
            for (mu, c) in coeffs {
                p.add_scaled(jack.get(mu)?, c)?;
            }
            polys.insert(kappa.clone(), p);
        }
        let mut dims = BTreeMap::new();
        for kappa in index.list() {
            dims.insert(kappa.clone(), dim_on_half(kappa, m, n)?);
        }
        let mut table = ZonalTable {
            m,
            n,
            max_degree,
            index,
            jack,
            polys,
            eigenvalues,
            dims,
            beta,
            alpha: BTreeMap::new(),
        };
        let mut alpha = BTreeMap::new();
        for (kappa, c) in table.jack.polys() {
            alpha.insert(kappa.clone(), table.p_expand(c)?.coeffs);
        }
        table.alpha = alpha;
        Ok(table)
    }

    /// Like [`ZonalTable::build`], but reuses tables already built in this
    /// process (any table of at least the requested degree) and, when
    /// `GRASSLP_CACHE_DIR` is set, tables saved on disk.
    pub fn shared(m: usize, n: usize, max_degree: usize) -> Result<Arc<ZonalTable>> {
        static MEMO: OnceLock<Mutex<HashMap<(usize, usize), Arc<ZonalTable>>>> = OnceLock::new();
        let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = memo.lock().expect("memo lock").get(&(m, n)) {
            if t.max_degree >= max_degree {
                return Ok(Arc::clone(t));
            }
        }
        let table = Arc::new(Self::cached(m, n, max_degree)?);
        let mut guard = memo.lock().expect("memo lock");
        let entry = guard.entry((m, n)).or_insert_with(|| Arc::clone(&table));
        if entry.max_degree < table.max_degree {
            *entry = Arc::clone(&table);
        }
        Ok(table)
    }

    /// Builds, consulting the on-disk cache when `GRASSLP_CACHE_DIR` is set.
    pub fn cached(m: usize, n: usize, max_degree: usize) -> Result<Self> {
        check_params(m, n)?;
        let Some(dir) = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from) else {
            return Self::build(m, n, max_degree);
        };
        let path = dir.join(format!("zonal-v{CACHE_VERSION}-m{m}-n{n}-k{max_degree}.json"));
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(file) = serde_json::from_str::<CacheFile>(&text) {
                if let Ok(t) = file.into_table(m, n, max_degree) {
                    return Ok(t);
                }
            }
        }
        let table = Self::build(m, n, max_degree)?;
        // the cache is an optimization; failures to write it are ignored
        if fs::create_dir_all(&dir).is_ok() {
            let tmp = path.with_extension("json.tmp");
            if let Ok(text) = serde_json::to_string(&CacheFile::from_table(&table)) {
                if fs::write(&tmp, text).is_ok() {
                    let _ = fs::rename(&tmp, &path);
                }
            }
        }
        Ok(table)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn index(&self) -> &PartitionIndexSet {
        &self.index
    }

    pub fn jack(&self) -> &JackTable {
        &self.jack
    }

    pub fn polys(&self) -> &BTreeMap<Partition, SymPoly> {
        &self.polys
    }

    pub fn get(&self, kappa: &Partition) -> Result<&SymPoly> {
        self.polys.get(kappa).ok_or_else(|| self.missing(kappa))
    }

    /// Eigenvalue of `Δ` on `P_κ`.
    pub fn eigenvalue(&self, kappa: &Partition) -> Result<&Rational> {
        self.eigenvalues.get(kappa).ok_or_else(|| self.missing(kappa))
    }

    /// `d_{2κ} = dim V_n^{2κ}`.
    pub fn dim(&self, kappa: &Partition) -> Result<&BigUint> {
        self.dims.get(kappa).ok_or_else(|| self.missing(kappa))
    }

    pub fn dim_rational(&self, kappa: &Partition) -> Result<Rational> {
        Ok(crate::rational::from_biguint(self.dim(kappa)?))
    }

    /// `β_{κ,μ}` with `P_κ = Σ β_{κ,μ} C_μ`.
    pub fn beta(&self, kappa: &Partition) -> Result<&BTreeMap<Partition, Rational>> {
        self.beta.get(kappa).ok_or_else(|| self.missing(kappa))
    }

    /// `α_{κ,μ}` with `C_κ = Σ α_{κ,μ} P_μ`.
    pub fn alpha(&self, kappa: &Partition) -> Result<&BTreeMap<Partition, Rational>> {
        self.alpha.get(kappa).ok_or_else(|| self.missing(kappa))
    }

    fn missing(&self, kappa: &Partition) -> Error {
        if kappa.length() > self.m {
            Error::TooManyParts { partition: kappa.clone(), m: self.m }
        } else {
            Error::DegreeOverflow { degree: kappa.degree(), max: self.max_degree }
        }
    }

    /// Exact change of basis onto `{P_κ}`.
    pub fn p_expand(&self, f: &SymPoly) -> Result<PExpansion> {
        if f.m() != self.m {
            return Err(Error::DimensionMismatch { left: self.m, right: f.m() });
        }
        let coeffs = triangular_expand(f, |lambda| self.polys.get(lambda), self.max_degree)?;
        Ok(PExpansion { m: self.m, n: self.n, k: self.max_degree, coeffs })
    }

    /// `[f, g] = ∫ f g dμ`, read off as the constant term of the
    /// `P`-expansion of `f g`.
    pub fn inner_product(&self, f: &SymPoly, g: &SymPoly) -> Result<Rational> {
        let prod = f.try_mul(g)?;
        Ok(self.p_expand(&prod)?.constant())
    }

    /// `∫ f dμ`.
    pub fn integrate(&self, f: &SymPoly) -> Result<Rational> {
        Ok(self.p_expand(f)?.constant())
    }

    /// `P_κ` written on the Jack basis, e.g. `3/2*C(1) - 1/2`.
    pub fn render_in_jack(&self, kappa: &Partition) -> Result<String> {
        let beta = self.beta(kappa)?;
        let mut out = String::new();
        for (idx, (mu, c)) in beta.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match idx {
                0 if c.is_negative() => out.push('-'),
                0 => {}
                _ => out.push_str(&format!(" {sign} ")),
            }
            out.push_str(&format!("{}*C{mu}", render(&c.abs())));
        }
        Ok(out)
    }
}

type BetaSolution = (BTreeMap<Partition, BTreeMap<Partition, Rational>>, BTreeMap<Partition, Rational>);

/// Solves `(Δ − λ_κ) P = 0` on the Jack basis, one partition at a time,
/// descending in degree.
fn solve_beta(m: usize, n: usize, index: &PartitionIndexSet, jack: &JackTable) -> Result<BetaSolution> {
    // delta_c[μ][ν] = coefficient of C_ν in Δ C_μ
    let mut delta_c: BTreeMap<Partition, BTreeMap<Partition, Rational>> = BTreeMap::new();
    let mut eigen = BTreeMap::new();
    for mu in index.list() {
        let image = jack.get(mu)?.apply_delta(n)?;
        let coeffs = jack.expand(&image)?;
        for nu in coeffs.keys() {
            let ok = nu == mu || nu.degree() + 1 == mu.degree();
            if !ok {
                return Err(Error::Internal(format!(
                    "Δ C{mu} has an unexpected component on C{nu}"
                )));
            }
        }
        eigen.insert(mu.clone(), coeffs.get(mu).cloned().unwrap_or_else(Rational::zero));
        delta_c.insert(mu.clone(), coeffs);
    }

    let mut beta = BTreeMap::new();
    for kappa in index.list() {
        let lambda = &eigen[kappa];
        let mut x: BTreeMap<Partition, Rational> = BTreeMap::new();
        x.insert(kappa.clone(), int(1));
        for d in (0..kappa.degree()).rev() {
            for nu in index.of_degree(d) {
                let mut rhs = Rational::zero();
                for mu in index.of_degree(d + 1) {
                    if let Some(xm) = x.get(mu) {
                        if let Some(c) = delta_c[mu].get(nu) {
                            rhs += xm * c;
                        }
                    }
                }
                if rhs.is_zero() {
                    continue;
                }
                let gap = lambda - &eigen[nu];
                if gap.is_zero() {
                    return Err(Error::EigenvalueCollision {
                        m,
                        n,
                        kappa: kappa.clone(),
                        other: nu.clone(),
                    });
                }
                if !kappa.contains(nu) {
                    return Err(Error::Internal(format!(
                        "P{kappa} picks up C{nu}, which is not contained in {kappa}"
                    )));
                }
                x.insert(nu.clone(), rhs / gap);
            }
        }
        let norm: Rational = x.values().sum();
        if norm.is_zero() {
            return Err(Error::DegenerateParameters {
                m,
                n,
                kappa: kappa.clone(),
                reason: "the eigenvector vanishes at (1,...,1)".into(),
            });
        }
        let x = x.into_iter().map(|(k, v)| (k, v / &norm)).collect();
        beta.insert(kappa.clone(), x);
    }
    Ok((beta, eigen))
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    m: usize,
    n: usize,
    max_degree: usize,
    jack: Vec<CachedJack>,
    zonal: Vec<CachedZonal>,
}

#[derive(Serialize, Deserialize)]
struct CachedJack {
    kappa: Vec<u32>,
    eigenvalue: String,
    terms: Vec<(Vec<u32>, String)>,
}

#[derive(Serialize, Deserialize)]
struct CachedZonal {
    kappa: Vec<u32>,
    eigenvalue: String,
    beta: Vec<(Vec<u32>, String)>,
}

impl CacheFile {
    fn from_table(t: &ZonalTable) -> Self {
        let jack = t
            .jack
            .polys()
            .iter()
            .map(|(k, p)| CachedJack {
                kappa: k.parts().to_vec(),
                eigenvalue: render(t.jack.eigenvalue(k).expect("present")),
                terms: p.to_term_list(),
            })
            .collect();
        let zonal = t
            .beta
            .iter()
            .map(|(k, b)| CachedZonal {
                kappa: k.parts().to_vec(),
                eigenvalue: render(&t.eigenvalues[k]),
                beta: b.iter().map(|(p, v)| (p.parts().to_vec(), render(v))).collect(),
            })
            .collect();
        CacheFile { version: CACHE_VERSION, m: t.m, n: t.n, max_degree: t.max_degree, jack, zonal }
    }

    fn into_table(self, m: usize, n: usize, max_degree: usize) -> Result<ZonalTable> {
        if self.version != CACHE_VERSION || self.m != m || self.n != n || self.max_degree != max_degree {
            return Err(Error::Internal("cache file does not match request".into()));
        }
        let mut polys = BTreeMap::new();
        let mut jack_eigen = BTreeMap::new();
        for j in &self.jack {
            let k = Partition::new(j.kappa.clone())?;
            polys.insert(k.clone(), SymPoly::from_term_list(m, &j.terms)?);
            jack_eigen.insert(k, parse(&j.eigenvalue)?);
        }
        let mut beta = BTreeMap::new();
        let mut eigen = BTreeMap::new();
        for z in &self.zonal {
            let k = Partition::new(z.kappa.clone())?;
            let b = z
                .beta
                .iter()
                .map(|(p, v)| Ok((Partition::new(p.clone())?, parse(v)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            beta.insert(k.clone(), b);
            eigen.insert(k, parse(&z.eigenvalue)?);
        }
        let expected = enumerate(m, max_degree).len();
        if polys.len() != expected || beta.len() != expected {
            return Err(Error::Internal("cache file is incomplete".into()));
        }
        let jack = JackTable::from_parts(m, max_degree, polys, jack_eigen);
        ZonalTable::from_jack(m, n, max_degree, jack, Some((beta, eigen)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::part;
    use crate::rational::frac;

    #[test]
    fn p1_for_m2_n4_is_sigma_minus_one() {
        let t = ZonalTable::build(2, 4, 1).unwrap();
        let expected = &SymPoly::sigma(2) - &SymPoly::one(2);
        assert_eq!(t.get(&part(&[1])).unwrap(), &expected);
    }

    #[test]
    fn expansions() {
        let (m, n) = (3usize, 8usize);
        let t = ZonalTable::build(m, n, 2).unwrap();
        let e = t.p_expand(&SymPoly::sigma(m)).unwrap();
        assert_eq!(e.constant(), frac((m * m) as i64, n as i64));
        assert_eq!(e.coeff(&part(&[1])), int(m as i64) * (int(1) - frac(m as i64, n as i64)));
        assert_eq!(e.coeffs.len(), 2);
        let e = t.p_expand(&SymPoly::one(m)).unwrap();
        assert_eq!(e.coeffs.len(), 1);
        let p2 = t.get(&part(&[2])).unwrap();
        let e = t.p_expand(p2).unwrap();
        assert_eq!(e.coeffs.into_iter().collect::<Vec<_>>(), vec![(part(&[2]), int(1))]);
        assert!(matches!(
            t.p_expand(&SymPoly::sigma(m).pow(3)),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn small_inner_products() {
        let t = ZonalTable::build(1, 4, 2).unwrap();
        let one = SymPoly::one(1);
        assert_eq!(t.inner_product(&one, &one).unwrap(), int(1));
        let p1 = t.get(&part(&[1])).unwrap();
        assert_eq!(t.inner_product(p1, p1).unwrap(), frac(1, 9));

        let t = ZonalTable::build(2, 6, 3).unwrap();
        let a = t.get(&part(&[1])).unwrap();
        let b = t.get(&part(&[1, 1])).unwrap();
        assert_eq!(t.inner_product(a, b).unwrap(), int(0));
    }

    #[test]
    fn rejects_small_n() {
        assert!(matches!(ZonalTable::build(3, 5, 1), Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn containment_structure_and_normalization() {
        let t = ZonalTable::build(3, 9, 3).unwrap();
        for (k, p) in t.polys() {
            assert_eq!(p.eval_ones(), int(1));
            for mu in t.beta(k).unwrap().keys() {
                assert!(k.contains(mu));
            }
            let dp = p.apply_delta(9).unwrap();
            assert_eq!(dp, p.scale(t.eigenvalue(k).unwrap()));
        }
    }

    #[test]
    fn alpha_inverts_beta() {
        let t = ZonalTable::build(2, 7, 3).unwrap();
        for (k, c) in t.jack().polys() {
            let mut rebuilt = SymPoly::zero(2);
            for (mu, a) in t.alpha(k).unwrap() {
                rebuilt.add_scaled(t.get(mu).unwrap(), a).unwrap();
            }
            assert_eq!(&rebuilt, c);
        }
    }
}
