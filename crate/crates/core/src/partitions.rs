//! Partitions, their graded-lexicographic enumeration, raising/lowering
//! operators and the two dimension formulas that index everything else.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{frac, int, Rational};

/// A weakly decreasing tuple of non-negative integers, stored without
/// trailing zeros.
///
/// Ordering is graded lexicographic: first by degree, then lexicographically
/// on the parts. This is the row/column order of every matrix in the crate.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameters(format!(
                "parts {parts:?} are not weakly decreasing"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Builds from a slice that is known to be weakly decreasing.
    pub(crate) fn from_sorted(parts: &[u32]) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        let end = parts.iter().rposition(|&p| p > 0).map_or(0, |i| i + 1);
        Partition(parts[..end].to_vec())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Part `i` (0-based); zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parts padded with zeros to length `m`.
    pub fn padded(&self, m: usize) -> Vec<u32> {
        let mut v = self.0.clone();
        v.resize(m.max(v.len()), 0);
        v
    }

    /// `2κ`.
    pub fn doubled(&self) -> Partition {
        Partition(self.0.iter().map(|p| 2 * p).collect())
    }

    /// `κ/2` when every part is even.
    pub fn halved(&self) -> Option<Partition> {
        if self.0.iter().all(|p| p % 2 == 0) {
            Some(Partition(self.0.iter().map(|p| p / 2).collect()))
        } else {
            None
        }
    }

    /// Containment `self ⊇ other`: every part at least the other's.
    pub fn contains(&self, other: &Partition) -> bool {
        other.length() <= self.length() && other.0.iter().zip(&self.0).all(|(o, s)| s >= o)
    }

    /// Indices `i` (0-based) for which `κ^(i)` is a partition with at most
    /// `m` parts.
    pub fn u_set(&self, m: usize) -> Vec<usize> {
        (0..m)
            .filter(|&i| i == 0 || self.part(i - 1) > self.part(i))
            .collect()
    }

    /// Indices `i` (0-based) for which `κ_(i)` is a partition.
    pub fn d_set(&self, m: usize) -> Vec<usize> {
        (0..m.max(self.length()))
            .filter(|&i| self.part(i) > self.part(i + 1))
            .collect()
    }

    /// `κ^(i)`: part `i` (0-based) increased by one.
    pub fn raise(&self, i: usize, m: usize) -> Result<Partition> {
        if i >= m || !(i == 0 || self.part(i - 1) > self.part(i)) {
            return Err(Error::IndexNotAdmissible {
                op: "raise",
                partition: self.clone(),
                index: i,
                m,
            });
        }
        let mut v = self.padded(i + 1);
        v[i] += 1;
        Ok(Partition::from_sorted(&v))
    }

    /// `κ_(i)`: part `i` (0-based) decreased by one.
    pub fn lower(&self, i: usize) -> Result<Partition> {
        if self.part(i) <= self.part(i + 1) {
            return Err(Error::IndexNotAdmissible {
                op: "lower",
                partition: self.clone(),
                index: i,
                m: self.length(),
            });
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Ok(Partition::from_sorted(&v))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma-separated parts, optionally wrapped in parentheses: `2,1`,
    /// `(2,1)`, `()`, `0`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if t.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidParameters(format!("bad partition {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

/// Convenience constructor for literal partitions; panics on invalid input.
pub fn part(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).expect("literal partition must be weakly decreasing")
}

/// All partitions of `d` with at most `m` parts, in increasing lexicographic
/// order.
pub fn partitions_of(d: usize, m: usize) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition::from_sorted(prefix));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in 1..=rem.min(max) {
            prefix.push(p);
            rec(rem - p, p, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d as u32, d as u32, m, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All partitions with at most `m` parts and degree at most `k`, in
/// graded-lexicographic order.
#[derive(Clone, Debug)]
pub struct PartitionIndexSet {
    m: usize,
    k: usize,
    list: Vec<Partition>,
    offsets: Vec<usize>,
    index: HashMap<Partition, usize>,
}

impl PartitionIndexSet {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_degree(&self) -> usize {
        self.k
    }

    pub fn list(&self) -> &[Partition] {
        &self.list
    }

    /// `s_k`.
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    /// Partitions of degree exactly `j`.
    pub fn of_degree(&self, j: usize) -> &[Partition] {
        if j > self.k {
            return &[];
        }
        &self.list[self.offsets[j]..self.offsets[j + 1]]
    }

    /// `π_j`.
    pub fn count(&self, j: usize) -> usize {
        self.of_degree(j).len()
    }

    pub fn position(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index range of the degree-`j` block.
    pub fn block(&self, j: usize) -> std::ops::Range<usize> {
        self.offsets[j]..self.offsets[j + 1]
    }
}

pub fn enumerate(m: usize, k: usize) -> PartitionIndexSet {
    let mut list = Vec::new();
    let mut offsets = vec![0];
    for j in 0..=k {
        list.extend(partitions_of(j, m));
        offsets.push(list.len());
    }
    let index = list.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    PartitionIndexSet { m, k, list, offsets, index }
}

/// `q_i = 2κ_i − i + m` with 1-based `i`; strictly decreasing.
pub fn q_values(kappa: &Partition, m: usize) -> Vec<i64> {
    (0..m)
        .map(|i| 2 * kappa.part(i) as i64 - (i as i64 + 1) + m as i64)
        .collect()
}

/// Dimension of the irreducible `GL(r)` representation with highest weight
/// `κ` (Weyl's product formula).
pub fn dim_gl(kappa: &Partition, r: usize) -> BigUint {
    assert!(kappa.length() <= r, "partition {kappa} longer than rank {r}");
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    let len = kappa.length();
    for i in 0..r.min(len) {
        for j in i + 1..r {
            let ki = kappa.part(i) as u64;
            let kj = kappa.part(j) as u64;
            let gap = (j - i) as u64;
            num *= ki - kj + gap;
            den *= gap;
        }
    }
    num / den
}

/// Ratio `d_{2κ^(i)} / d_{2κ}` for the `O(n)` representations `V^{2κ}`.
pub fn dim_on_ratio(kappa: &Partition, i: usize, m: usize, n: usize) -> Result<Rational> {
    if !kappa.u_set(m).contains(&i) {
        return Err(Error::IndexNotAdmissible {
            op: "raise",
            partition: kappa.clone(),
            index: i,
            m,
        });
    }
    let q = q_values(kappa, m);
    let big_n = n as i64 - 2 * m as i64;
    let qi = q[i];
    let mut r = int(1);
    for (j, &qj) in q.iter().enumerate() {
        if j == i {
            continue;
        }
        r *= frac(qi - qj + 2, qi - qj);
        r *= frac(qi + qj + big_n + 2, qi + qj + big_n);
    }
    if qi == 0 {
        r *= frac((big_n + 4) * (big_n + 1), 2);
    } else {
        r *= frac(
            (2 * qi + big_n + 4) * (qi + big_n) * (qi + big_n + 1),
            (2 * qi + big_n) * (qi + 1) * (qi + 2),
        );
    }
    Ok(r)
}

/// `d_{2κ} = dim V_n^{2κ}` for a half-partition `κ` with at most `m` parts,
/// obtained by multiplying raising ratios along a path from `()`.
pub fn dim_on_half(kappa: &Partition, m: usize, n: usize) -> Result<BigUint> {
    check_rank(kappa, m, n)?;
    let mut current = Partition::empty();
    let mut value = int(1);
    for row in 0..kappa.length() {
        for _ in 0..kappa.part(row) {
            value *= dim_on_ratio(&current, row, m, n)?;
            current = current.raise(row, m)?;
        }
    }
    to_positive_integer(&value, kappa)
}

/// `d_{2κ}` along an explicit raising path (sequence of 0-based indices).
pub fn dim_on_along(path: &[usize], m: usize, n: usize) -> Result<(Partition, BigUint)> {
    let mut current = Partition::empty();
    let mut value = int(1);
    for &i in path {
        value *= dim_on_ratio(&current, i, m, n)?;
        current = current.raise(i, m)?;
    }
    check_rank(&current, m, n)?;
    let d = to_positive_integer(&value, &current)?;
    Ok((current, d))
}

/// `d_{2κ}` where `two_kappa` is the even partition `2κ`.
pub fn dim_on(two_kappa: &Partition, m: usize, n: usize) -> Result<BigUint> {
    let half = two_kappa.halved().ok_or_else(|| {
        Error::InvalidParameters(format!("{two_kappa} has an odd part"))
    })?;
    dim_on_half(&half, m, n)
}

fn check_rank(kappa: &Partition, m: usize, n: usize) -> Result<()> {
    if m == 0 || n < 2 * m {
        return Err(Error::InvalidParameters(format!(
            "need m >= 1 and n >= 2m, got m = {m}, n = {n}"
        )));
    }
    if kappa.length() > m {
        return Err(Error::TooManyParts { partition: kappa.clone(), m });
    }
    Ok(())
}

fn to_positive_integer(value: &Rational, kappa: &Partition) -> Result<BigUint> {
    if !value.is_integer() || !value.is_positive() {
        return Err(Error::Internal(format!(
            "dimension of V^(2{kappa}) evaluated to non-integer {value}"
        )));
    }
    Ok(BigInt::to_biguint(&value.to_integer()).expect("positive"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_small_cases() {
        let set = enumerate(2, 3);
        assert_eq!(set.of_degree(3), &[part(&[2, 1]), part(&[3])]);
        assert_eq!(set.count(3), 2);

        let set = enumerate(1, 5);
        assert!((0..=5).all(|j| set.count(j) == 1));
        assert_eq!(set.len(), 6);

        let set = enumerate(3, 2);
        assert_eq!(set.list(), &[part(&[]), part(&[1]), part(&[1, 1]), part(&[2])]);
    }

    #[test]
    fn enumerate_matches_brute_force_count() {
        for m in 1..=4 {
            for k in 0..=9u32 {
                // brute force: weakly decreasing tuples of length m summing to k
                let mut count = 0;
                let mut stack = vec![(Vec::<u32>::new(), k)];
                while let Some((prefix, rem)) = stack.pop() {
                    if prefix.len() == m {
                        if rem == 0 {
                            count += 1;
                        }
                        continue;
                    }
                    let max = prefix.last().copied().unwrap_or(k);
                    for p in 0..=max.min(rem) {
                        let mut next = prefix.clone();
                        next.push(p);
                        stack.push((next, rem - p));
                    }
                }
                assert_eq!(partitions_of(k as usize, m).len(), count, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn raise_lower_and_sets() {
        let k = part(&[2, 1]);
        assert_eq!(k.raise(0, 2).unwrap(), part(&[3, 1]));
        assert_eq!(k.u_set(2), vec![0, 1]);
        let k = part(&[2, 2]);
        assert_eq!(k.lower(1).unwrap(), part(&[2, 1]));
        assert_eq!(k.d_set(2), vec![1]);
        let k = part(&[1, 1]);
        assert_eq!(k.u_set(2), vec![0]);
        assert!(matches!(k.raise(1, 2), Err(Error::IndexNotAdmissible { .. })));
        assert!(part(&[1]).lower(1).is_err());
    }

    #[test]
    fn q_values_examples() {
        assert_eq!(q_values(&part(&[]), 2), vec![1, 0]);
        assert_eq!(q_values(&part(&[2, 1]), 2), vec![5, 2]);
        assert_eq!(q_values(&part(&[3, 1, 1]), 3), vec![8, 3, 2]);
    }

    #[test]
    fn dim_gl_examples() {
        assert_eq!(dim_gl(&part(&[1]), 2), BigUint::from(2u32));
        assert_eq!(dim_gl(&part(&[1, 1]), 2), BigUint::from(1u32));
        assert_eq!(dim_gl(&part(&[]), 5), BigUint::from(1u32));
        // symmetric powers: dim S^k(C^r) = C(r+k-1, k)
        assert_eq!(dim_gl(&part(&[4]), 3), BigUint::from(15u32));
    }

    #[test]
    fn dim_on_examples() {
        assert_eq!(dim_on(&part(&[2]), 1, 4).unwrap(), BigUint::from(9u32));
        assert_eq!(dim_on(&part(&[]), 2, 7).unwrap(), BigUint::from(1u32));
        // harmonic polynomials of degree 2 in n variables: (n+2)(n-1)/2
        for n in 2..20usize {
            assert_eq!(
                dim_on(&part(&[2]), 1, n).unwrap(),
                BigUint::from((n + 2) * (n - 1) / 2)
            );
        }
        assert!(dim_on(&part(&[3]), 1, 4).is_err());
    }

    #[test]
    fn dim_on_two_paths_agree() {
        // (1)->(2)->(2,1)->(2,2) vs (1)->(1,1)->(2,1)->(2,2)
        let (a, da) = dim_on_along(&[0, 0, 1, 1], 2, 5).unwrap();
        let (b, db) = dim_on_along(&[0, 1, 0, 1], 2, 5).unwrap();
        assert_eq!(a, part(&[2, 2]));
        assert_eq!(a, b);
        assert_eq!(da, db);
    }

    #[test]
    fn dim_on_is_independent_of_the_rank_parameter() {
        for n in 8..13 {
            for k in [part(&[1]), part(&[2]), part(&[1, 1]), part(&[3, 1])] {
                let a = dim_on_half(&k, 2, n).unwrap();
                let b = dim_on_half(&k, 3, n).unwrap();
                let c = dim_on_half(&k, 4, n).unwrap();
                assert_eq!(a, b, "{k} n={n}");
                assert_eq!(a, c, "{k} n={n}");
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let p: Partition = "2,1".parse().unwrap();
        assert_eq!(p, part(&[2, 1]));
        assert_eq!(p.to_string(), "(2,1)");
        assert_eq!("()".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!("0".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1,2".parse::<Partition>().is_err());
    }
}
