//! Polynomials: sparse multivariate with integer coefficients and dense univariate over `Q`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn overflow() -> Error {
    Error::ResourceExceeded("polynomial coefficient overflow".into())
}

/// Sparse polynomial in `nvars` variables with `i128` coefficients.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i128>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, &c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            let body = match (mono.is_empty(), mag) {
                (true, _) => mag.to_string(),
                (false, 1) => mono.join("*"),
                (false, _) => format!("{mag}*{}", mono.join("*")),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, " {sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(nvars, vec![0; nvars], 1)
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, coeff: i128) -> Self {
        let mut p = Self::zero(nvars);
        if coeff != 0 {
            p.terms.insert(exps, coeff);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, i128)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exps: &[u32]) -> i128 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: i128) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = o.get().checked_add(c).ok_or_else(overflow)?;
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: i128) -> Result<MultiPoly> {
        let mut out = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c.checked_mul(k).ok_or_else(overflow)?)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        let mut out = Self::zero(self.nvars);
        for (a, &x) in &self.terms {
            for (b, &y) in &other.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x.checked_mul(y).ok_or_else(overflow)?)?;
            }
        }
        Ok(out)
    }

    /// Multiplies by the monomial `x^exps`.
    pub fn shift(&self, exps: &[u32]) -> MultiPoly {
        let terms = self.terms.iter().map(|(e, &c)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), c)).collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    /// Sum of all coefficients, i.e. the value at the all-ones point.
    pub fn value_at_ones(&self) -> i128 {
        self.terms.values().sum()
    }

    /// Substitutes every variable by one common variable.
    pub fn to_univariate(&self) -> Vec<i128> {
        let mut out = vec![0i128; self.total_degree() as usize + 1];
        for (e, &c) in &self.terms {
            out[e.iter().sum::<u32>() as usize] += c;
        }
        out
    }

    /// Power series quotient `self / den` truncated at total degree `depth`; requires
    /// `den(0) = 1`. Returns coefficients keyed by exponent vector.
    pub fn series_div(&self, den: &MultiPoly, depth: u32) -> Result<BTreeMap<Vec<u32>, i128>> {
        let zero = vec![0u32; self.nvars];
        if den.coeff(&zero) != 1 {
            return Err(Error::InvalidArgument("series division needs a denominator with constant term 1".into()));
        }
        let rest: Vec<(&Vec<u32>, i128)> = den.terms.iter().filter(|(e, _)| **e != zero).map(|(e, &c)| (e, c)).collect();
        // Q = N - (D - 1) Q, processed by total degree
        let mut by_degree: Vec<BTreeMap<Vec<u32>, i128>> = vec![BTreeMap::new(); depth as usize + 1];
        for (e, &c) in &self.terms {
            let d = e.iter().sum::<u32>();
            if d <= depth {
                by_degree[d as usize].insert(e.clone(), c);
            }
        }
        let mut out: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
        for d in 0..=depth as usize {
            let current = std::mem::take(&mut by_degree[d]);
            for (e, c) in current {
                if c == 0 {
                    continue;
                }
                for &(de, dc) in &rest {
                    let deg = d as u32 + de.iter().sum::<u32>();
                    if deg > depth {
                        continue;
                    }
                    let ne: Vec<u32> = e.iter().zip(de.iter()).map(|(a, b)| a + b).collect();
                    let slot = by_degree[deg as usize].entry(ne).or_insert(0);
                    *slot = slot.checked_sub(c.checked_mul(dc).ok_or_else(overflow)?).ok_or_else(overflow)?;
                }
                out.insert(e, c);
            }
        }
        Ok(out)
    }
}

/// Dense univariate polynomial over `Q`, coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*u"),
                _ => format!("{c}*u^{i}"),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_integers(c: &[i128]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigRational::zero();
        Self::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dl = d.leading();
        let dd = d.degree();
        if rem.len() < d.coeffs.len() {
            return (Self::new(Vec::new()), self.clone());
        }
        let mut q = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree(&self) -> UniPoly {
        if self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Scales so that the constant term is 1 (requires a nonzero constant term).
    pub fn normalize_constant(&self) -> UniPoly {
        let c = self.coeffs.first().cloned().unwrap_or_else(BigRational::zero);
        if c.is_zero() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(Self::new(r.coeffs.iter().map(|c| -c).collect()));
        }
        chain
    }

    fn sign_changes(chain: &[UniPoly], x: &BigRational) -> usize {
        let mut last = 0i32;
        let mut changes = 0;
        for p in chain {
            let v = p.eval(x);
            let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        let chain = self.sturm_chain();
        Self::sign_changes(&chain, a).saturating_sub(Self::sign_changes(&chain, b))
    }

    /// The smallest real root in `(a, b]`, enclosed to width at most `tol`.
    pub fn smallest_root_in(&self, a: &BigRational, b: &BigRational, tol: &BigRational) -> Option<(BigRational, BigRational)> {
        let chain = self.sturm_chain();
        let count = |lo: &BigRational, hi: &BigRational| {
            Self::sign_changes(&chain, lo).saturating_sub(Self::sign_changes(&chain, hi))
        };
        if count(a, b) == 0 {
            return None;
        }
        let (mut lo, mut hi) = (a.clone(), b.clone());
        let two = BigRational::from_integer(2.into());
        while &hi - &lo > *tol {
            let mid = (&lo + &hi) / &two;
            if count(&lo, &mid) > 0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some((lo, hi))
    }

    pub fn one() -> UniPoly {
        Self::new(vec![BigRational::one()])
    }
}
