//! Exact univariate rational polynomials with Sturm-sequence root isolation.
//! Used for the rank-one spectral oracle and for rigorous sign checks of
//! LP certificates that are polynomials in `σ`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::rational::{frac, int, render, to_f64, Rational};
use crate::sympoly::SymPoly;

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UPoly(Vec<Rational>);

/// Isolating interval for one real root. `lo == hi` means the root is
/// exactly `lo`; otherwise `lo < root < hi` and neither endpoint is a root.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn x() -> Self {
        UPoly(vec![int(0), int(1)])
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::new(vec![c])
    }

    /// The polynomial `y ↦ f(y)` of a one-variable symmetric polynomial.
    pub fn from_sympoly(f: &SymPoly) -> Result<Self> {
        if f.m() != 1 {
            return Err(Error::DimensionMismatch { left: 1, right: f.m() });
        }
        let mut coeffs = vec![int(0); f.degree() + 1];
        for (lambda, c) in f.terms() {
            coeffs[lambda.degree()] = c.clone();
        }
        Ok(UPoly::new(coeffs))
    }

    /// `Σ c_j σ^j` as a symmetric polynomial in `m` variables.
    pub fn compose_sigma(&self, m: usize) -> SymPoly {
        let sigma = SymPoly::sigma(m);
        let mut out = SymPoly::zero(m);
        // Horner
        for c in self.0.iter().rev() {
            out = &(&out * &sigma) + &SymPoly::constant(m, c.clone());
        }
        out
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &UPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        UPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    /// `(quotient, remainder)`; panics on a zero divisor.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.0.clone();
        if rem.len() < d.0.len() {
            return (UPoly::zero(), self.clone());
        }
        let lead = d.leading();
        let mut quot = vec![Rational::zero(); rem.len() - d.0.len() + 1];
        for shift in (0..quot.len()).rev() {
            let c = &rem[shift + d.0.len() - 1] / &lead;
            if !c.is_zero() {
                for (j, b) in d.0.iter().enumerate() {
                    rem[shift + j] -= &c * b;
                }
            }
            quot[shift] = c;
        }
        rem.truncate(d.0.len() - 1);
        (UPoly::new(quot), UPoly::new(rem))
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading();
        a.scale(&(int(1) / lead))
    }

    /// Same roots, all simple.
    pub fn square_free(&self) -> UPoly {
        if self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    fn sturm_chain(&self) -> Vec<UPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&int(-1)));
        }
        chain
    }

    /// Bound on the absolute value of every real root.
    pub fn cauchy_bound(&self) -> Rational {
        let lead = self.leading().abs();
        let mut best = Rational::zero();
        for c in &self.0[..self.0.len().saturating_sub(1)] {
            let r = c.abs() / &lead;
            if r > best {
                best = r;
            }
        }
        best + int(1)
    }

    /// Isolating intervals for all distinct real roots, in increasing order,
    /// each narrower than `width` unless the root is exact.
    pub fn isolate_roots(&self, width: &Rational) -> Vec<RootInterval> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let g = self.square_free();
        let chain = g.sturm_chain();
        let bound = g.cauchy_bound();
        let (lo, hi) = (-bound.clone(), bound);
        let total = variations(&chain, &lo) - variations(&chain, &hi);
        let mut out = Vec::new();
        let mut stack = vec![(lo, hi, total)];
        while let Some((l, r, count)) = stack.pop() {
            if count == 0 {
                continue;
            }
            if count == 1 {
                // endpoints are never roots, so the sign changes across a simple root
                out.push(g.refine(l, r, width));
                continue;
            }
            let mid = split_point(&g, &l, &r);
            let vm = variations(&chain, &mid);
            let left = variations(&chain, &l) - vm;
            stack.push((mid.clone(), r, count - left));
            stack.push((l, mid, left));
        }
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out
    }

    fn refine(&self, mut l: Rational, mut r: Rational, width: &Rational) -> RootInterval {
        let left_sign = self.eval(&l).is_positive();
        while &(&r - &l) >= width {
            let mid = (&l + &r) / int(2);
            let v = self.eval(&mid);
            if v.is_zero() {
                return RootInterval { lo: mid.clone(), hi: mid };
            }
            if v.is_positive() == left_sign {
                l = mid;
            } else {
                r = mid;
            }
        }
        RootInterval { lo: l, hi: r }
    }

    /// Real roots as floats, each located to within `1e-15` relative.
    pub fn real_roots_f64(&self) -> Vec<f64> {
        let w = frac(1, 1_000_000_000_000_000);
        self.isolate_roots(&w).iter().map(|r| to_f64(&r.midpoint())).collect()
    }

    /// Decides `self(x) ≤ 0` for all `x ∈ [a, b]` exactly.
    pub fn nonpositive_on(&self, a: &Rational, b: &Rational) -> bool {
        self.max_sample_on(a, b).is_none_or(|(_, v)| !v.is_positive())
    }

    /// A point of `[a, b]` where the polynomial is maximal among a set of
    /// test points that meets every sign-constant piece of the interval.
    pub fn max_sample_on(&self, a: &Rational, b: &Rational) -> Option<(Rational, Rational)> {
        if a > b {
            return None;
        }
        let mut points = vec![a.clone(), b.clone()];
        let width = (b - a) / int(4) + frac(1, 1_000_000);
        for root in self.isolate_roots(&width) {
            for p in [root.lo, root.hi] {
                if &p >= a && &p <= b {
                    points.push(p);
                }
            }
        }
        points.sort();
        points.dedup();
        let mids: Vec<Rational> =
            points.windows(2).map(|w| (&w[0] + &w[1]) / int(2)).collect();
        points.extend(mids);
        points
            .into_iter()
            .map(|p| {
                let v = self.eval(&p);
                (p, v)
            })
            .max_by(|x, y| x.1.cmp(&y.1))
    }
}

fn variations(chain: &[UPoly], x: &Rational) -> i64 {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for p in chain {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if last.is_some_and(|l| l != pos) {
            count += 1;
        }
        last = Some(pos);
    }
    count
}

/// A point strictly inside `(l, r)` that is not a root of `g`.
fn split_point(g: &UPoly, l: &Rational, r: &Rational) -> Rational {
    let span = r - l;
    let mut den = 2i64;
    loop {
        for num in 1..den {
            let p = l + &span * frac(num, den);
            if !g.eval(&p).is_zero() {
                return p;
            }
        }
        den += 1;
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{}", render(&a))?,
                _ if a.is_one() => {}
                _ => write!(f, "{}*", render(&a))?,
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({self})")
    }
}

/// The one-part partition `(j)`, or `()` for `j = 0`.
pub fn row(j: usize) -> Partition {
    if j == 0 {
        Partition::empty()
    } else {
        Partition::new(vec![j as u32]).expect("single part")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn roots_of_product() {
        // (x-1)(x-2)(x+3)
        let f = p(&[6, -7, 0, 1]);
        let r = f.real_roots_f64();
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        // x^2 - 2
        let r = p(&[-2, 0, 1]).real_roots_f64();
        assert!((r[1] - 2f64.sqrt()).abs() < 1e-14);
        assert!(p(&[1, 0, 1]).real_roots_f64().is_empty());
    }

    #[test]
    fn repeated_roots_are_counted_once() {
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        assert_eq!(f.real_roots_f64().len(), 2);
    }

    #[test]
    fn sign_checks() {
        // (x - 1/2) x is <= 0 on [0, 1/2] only
        let f = UPoly::new(vec![int(0), frac(-1, 2), int(1)]);
        assert!(f.nonpositive_on(&int(0), &frac(1, 2)));
        assert!(!f.nonpositive_on(&int(0), &frac(3, 5)));
        // -(x-1/3)^2 touches zero inside
        let g = UPoly::new(vec![frac(-1, 9), frac(2, 3), int(-1)]);
        assert!(g.nonpositive_on(&int(0), &int(1)));
        assert!(!g.scale(&int(-1)).nonpositive_on(&int(0), &int(1)));
        assert!(UPoly::zero().nonpositive_on(&int(0), &int(1)));
    }

    #[test]
    fn compose_and_back() {
        let f = p(&[1, -3, 2]);
        let s = f.compose_sigma(1);
        assert_eq!(UPoly::from_sympoly(&s).unwrap(), f);
        assert_eq!(f.to_string(), "2*x^2 - 3*x + 1");
    }
}
