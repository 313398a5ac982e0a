//! The real cyclotomic field generated by `2cos(pi/N)`.
//!
//! Elements are coordinate vectors over the power basis `1, θ, …, θ^(d-1)` where
//! `θ = 2cos(pi/N)` and `d` is the degree of its minimal polynomial. Group matrices only
//! ever hold algebraic integers, so the hot path works over `i64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Order;
use crate::error::{Error, Result};

/// Bits of fixed-point precision used when locating `θ`.
const PRECISION_BITS: u32 = 200;

fn overflow() -> Error {
    Error::ResourceExceeded("integer overflow in exact field arithmetic".into())
}

/// Exact division by a monic divisor; fails if the remainder is nonzero.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Result<Vec<i64>> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() < den.len() {
        return Err(Error::ValidationMismatch("cyclotomic division underflow".into()));
    }
    let mut q = vec![0i64; rem.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd];
        q[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] = rem[k + j].checked_sub(c.checked_mul(dj).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
    }
    if rem.iter().any(|&r| r != 0) {
        return Err(Error::ValidationMismatch("cyclotomic division left a remainder".into()));
    }
    Ok(q)
}

/// The `n`-th cyclotomic polynomial, coefficients low to high.
pub fn cyclotomic(n: u32) -> Result<Vec<i64>> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    let mut acc = num;
    for d in 1..n {
        if n % d == 0 {
            acc = poly_div_exact(&acc, &cyclotomic(d)?)?;
        }
    }
    Ok(acc)
}

/// The polynomials `C_j` with `C_j(z + 1/z) = z^j + z^(-j)`, for `j = 0..=k`.
fn chebyshev_like(k: usize) -> Result<Vec<Vec<i64>>> {
    let mut out: Vec<Vec<i64>> = vec![vec![2], vec![0, 1]];
    while out.len() <= k {
        let j = out.len();
        let mut next = vec![0i64; j + 1];
        for (i, &c) in out[j - 1].iter().enumerate() {
            next[i + 1] = c;
        }
        for (i, &c) in out[j - 2].iter().enumerate() {
            next[i] = next[i].checked_sub(c).ok_or_else(overflow)?;
        }
        out.push(next);
    }
    out.truncate(k + 1);
    Ok(out)
}

/// Monic minimal polynomial of `2cos(pi/n)`, derived from the palindromic cyclotomic
/// polynomial of order `2n`.
pub fn minimal_polynomial(n: u32) -> Result<Vec<i64>> {
    let phi = cyclotomic(2 * n)?;
    let d = (phi.len() - 1) / 2;
    let cheb = chebyshev_like(d)?;
    let mut psi = vec![0i64; d + 1];
    psi[0] = phi[d];
    for j in 1..=d {
        for (i, &c) in cheb[j].iter().enumerate() {
            psi[i] = psi[i].checked_add(phi[d + j].checked_mul(c).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
    }
    Ok(psi)
}

fn fixed_one() -> BigInt {
    BigInt::one() << PRECISION_BITS
}

/// `atan(1/x)` in fixed point.
fn fixed_atan_inv(x: u32) -> BigInt {
    let one = fixed_one();
    let x2 = BigInt::from(x) * x;
    let mut power = &one / x;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// `π` in fixed point via Machin's formula.
fn fixed_pi() -> BigInt {
    fixed_atan_inv(5) * 16 - fixed_atan_inv(239) * 4
}

/// `cos(y)` in fixed point for a fixed-point `y`.
fn fixed_cos(y: &BigInt) -> BigInt {
    let one = fixed_one();
    let y2 = (y * y) >> PRECISION_BITS;
    let mut term = one.clone();
    let mut sum = one;
    let mut k = 1u32;
    loop {
        term = ((&term * &y2) >> PRECISION_BITS) / ((2 * k - 1) * (2 * k));
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    sum
}

fn eval_rational(poly: &[i64], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for &c in poly.iter().rev() {
        acc = acc * x + BigRational::from_integer(BigInt::from(c));
    }
    acc
}

/// The number field `Q(2cos(pi/N))` together with an isolating interval for its generator.
pub struct NumberField {
    order: u32,
    minpoly: Vec<i64>,
    reduction: Vec<Vec<i64>>,
    powers: Vec<f64>,
    isolating: (BigRational, BigRational),
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField").field("order", &self.order).field("minpoly", &self.minpoly).finish()
    }
}

impl NumberField {
    /// Builds the field for `θ = 2cos(pi/n)` and checks the derived minimal polynomial
    /// numerically before use.
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("field order must be >= 2, got {n}")));
        }
        let minpoly = minimal_polynomial(n)?;
        let d = minpoly.len() - 1;
        let theta_fixed = fixed_cos(&(fixed_pi() / n)) * 2;
        let scale = BigRational::from_integer(fixed_one());
        let theta = BigRational::from_integer(theta_fixed) / &scale;
        let residual = eval_rational(&minpoly, &theta).abs();
        let tol = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(30));
        if residual > tol {
            return Err(Error::ValidationMismatch(format!(
                "minimal polynomial of 2cos(pi/{n}) failed the numeric check"
            )));
        }
        let slack = BigRational::new(BigInt::one(), BigInt::one() << (PRECISION_BITS - 20));
        let lo = &theta - &slack;
        let hi = &theta + &slack;
        let (slo, shi) = (eval_rational(&minpoly, &lo).signum(), eval_rational(&minpoly, &hi).signum());
        if slo == shi || slo.is_zero() || shi.is_zero() {
            return Err(Error::ValidationMismatch(format!("could not isolate 2cos(pi/{n})")));
        }
        // θ^k for k = d..=2d-2, reduced to the power basis
        let mut reduction = Vec::new();
        let mut cur: Vec<i64> = minpoly[..d].iter().map(|&c| -c).collect();
        for _ in d..=(2 * d).saturating_sub(2).max(d) {
            reduction.push(cur.clone());
            let mut shifted = vec![0i64; d];
            let top = cur[d - 1];
            for i in (1..d).rev() {
                shifted[i] = cur[i - 1];
            }
            for i in 0..d {
                shifted[i] = shifted[i].checked_sub(top.checked_mul(minpoly[i]).ok_or_else(overflow)?).ok_or_else(overflow)?;
            }
            cur = shifted;
        }
        let theta_f = theta.to_f64().unwrap_or(0.0);
        let powers = (0..d).map(|k| theta_f.powi(k as i32)).collect();
        Ok(NumberField { order: n, minpoly, reduction, powers, isolating: (lo, hi) })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// Monic minimal polynomial of the generator, coefficients low to high.
    pub fn minimal_polynomial(&self) -> &[i64] {
        &self.minpoly
    }

    /// Coordinates of `2cos(pi/m)`; `m = inf` gives 2.
    pub fn two_cos(&self, m: Order) -> Result<Vec<i64>> {
        let d = self.degree();
        let mut out = vec![0i64; d];
        match m {
            Order::Infinity => out[0] = 2,
            Order::Finite(2) => {}
            Order::Finite(3) => out[0] = 1,
            Order::Finite(m) => {
                if m == 0 || self.order % m != 0 {
                    return Err(Error::InvalidArgument(format!("2cos(pi/{m}) is not in this field")));
                }
                let k = (self.order / m) as usize;
                let c = chebyshev_like(k)?.pop().unwrap();
                out = self.reduce(&c)?;
            }
        }
        Ok(out)
    }

    /// Reduces an integer polynomial in `θ` of any degree.
    pub fn reduce(&self, poly: &[i64]) -> Result<Vec<i64>> {
        let d = self.degree();
        let mut p = poly.to_vec();
        // long division by the monic minimal polynomial
        for k in (d..p.len()).rev() {
            let c = p[k];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.minpoly.iter().enumerate() {
                p[k - d + i] = p[k - d + i].checked_sub(c.checked_mul(m).ok_or_else(overflow)?).ok_or_else(overflow)?;
            }
        }
        p.resize(d, 0);
        Ok(p)
    }

    /// Product of two reduced coordinate vectors.
    pub fn mul(&self, a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
        let d = self.degree();
        let mut out = vec![0i64; d];
        self.mul_acc(a, b, 1, &mut out)?;
        Ok(out)
    }

    /// `out += sign * a * b` where `sign` is ±1.
    pub fn mul_acc(&self, a: &[i64], b: &[i64], sign: i64, out: &mut [i64]) -> Result<()> {
        let d = self.degree();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x.checked_mul(sign).ok_or_else(overflow)?;
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let p = x.checked_mul(y).ok_or_else(overflow)?;
                let k = i + j;
                if k < d {
                    out[k] = out[k].checked_add(p).ok_or_else(overflow)?;
                } else {
                    for (l, &r) in self.reduction[k - d].iter().enumerate() {
                        if r != 0 {
                            out[l] = out[l].checked_add(p.checked_mul(r).ok_or_else(overflow)?).ok_or_else(overflow)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Floating-point value of a coordinate vector.
    pub fn approx(&self, a: &[i64]) -> f64 {
        a.iter().zip(&self.powers).map(|(&c, &p)| c as f64 * p).sum()
    }

    /// Exact sign of an integer coordinate vector.
    pub fn sign(&self, a: &[i64]) -> Ordering {
        if a.iter().all(|&c| c == 0) {
            return Ordering::Equal;
        }
        let d = self.degree();
        let mut value = 0.0f64;
        let mut magnitude = 0.0f64;
        for (&c, &p) in a.iter().zip(&self.powers) {
            value += c as f64 * p;
            magnitude += (c as f64 * p).abs();
        }
        let bound = magnitude * f64::EPSILON * (8 * d + 16) as f64;
        if value.abs() > bound {
            return if value > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        let coords: Vec<BigRational> = a.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        self.sign_exact(&coords)
    }

    /// Sign of a nonzero rational coordinate vector by interval refinement of `θ`.
    fn sign_exact(&self, coords: &[BigRational]) -> Ordering {
        if coords.iter().all(Zero::is_zero) {
            return Ordering::Equal;
        }
        let (mut lo, mut hi) = self.isolating.clone();
        let lo_sign = eval_rational(&self.minpoly, &lo).signum();
        loop {
            let (vlo, vhi) = eval_interval(coords, &lo, &hi);
            if vlo.is_positive() {
                return Ordering::Greater;
            }
            if vhi.is_negative() {
                return Ordering::Less;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            let s = eval_rational(&self.minpoly, &mid).signum();
            if s.is_zero() {
                // θ is irrational unless the degree is 1, where it is the exact value
                let v: BigRational = coords.iter().enumerate().map(|(i, c)| c * pow(&mid, i)).sum();
                return v.cmp(&BigRational::zero());
            }
            if s == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
}

fn pow(x: &BigRational, k: usize) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..k {
        r *= x;
    }
    r
}

/// Enclosure of `Σ c_i x^i` for `x ∈ [lo, hi]`, evaluated term by term.
fn eval_interval(coords: &[BigRational], lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut acc_lo = BigRational::zero();
    let mut acc_hi = BigRational::zero();
    for (i, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (a, b) = (pow(lo, i), pow(hi, i));
        let (plo, phi) = if i % 2 == 0 && lo.is_negative() && hi.is_positive() {
            (BigRational::zero(), if a > b { a } else { b })
        } else if a <= b {
            (a, b)
        } else {
            (b, a)
        };
        if c.is_positive() {
            acc_lo += c * &plo;
            acc_hi += c * &phi;
        } else {
            acc_lo += c * &phi;
            acc_hi += c * &plo;
        }
    }
    (acc_lo, acc_hi)
}

/// An exact element of `Q(2cos(pi/N))`.
#[derive(Clone)]
pub struct AlgebraicReal {
    coords: Vec<BigRational>,
    field: Arc<NumberField>,
}

impl AlgebraicReal {
    pub fn from_integer_coords(field: Arc<NumberField>, coords: &[i64]) -> Self {
        let coords = coords.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        AlgebraicReal { coords, field }
    }

    pub fn from_rational(field: Arc<NumberField>, value: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); field.degree()];
        coords[0] = value;
        AlgebraicReal { coords, field }
    }

    /// The generator `2cos(pi/N)` itself.
    pub fn generator(field: Arc<NumberField>) -> Self {
        let mut c = vec![0i64; field.degree()];
        if field.degree() > 1 {
            c[1] = 1;
        }
        let mut out = Self::from_integer_coords(field.clone(), &c);
        if field.degree() == 1 {
            out.coords[0] = BigRational::from_integer((-field.minpoly[0]).into());
        }
        out
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn sign(&self) -> Ordering {
        self.field.sign_exact(&self.coords)
    }

    pub fn to_f64(&self) -> f64 {
        self.coords
            .iter()
            .zip(&self.field.powers)
            .map(|(c, &p)| c.to_f64().unwrap_or(f64::NAN) * p)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) {
        assert!(Arc::ptr_eq(&self.field, &other.field) || self.field.order == other.field.order, "field mismatch");
    }
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coords == other.coords
    }
}

impl Eq for AlgebraicReal {}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (~{})", self, self.to_f64())
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*θ"),
                _ => format!("{c}*θ^{i}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl Add for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn add(self, rhs: &AlgebraicReal) -> AlgebraicReal {
        self.check(rhs);
        let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect();
        AlgebraicReal { coords, field: self.field.clone() }
    }
}

impl Sub for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn sub(self, rhs: &AlgebraicReal) -> AlgebraicReal {
        self.check(rhs);
        let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect();
        AlgebraicReal { coords, field: self.field.clone() }
    }
}

impl Neg for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> AlgebraicReal {
        AlgebraicReal { coords: self.coords.iter().map(|c| -c).collect(), field: self.field.clone() }
    }
}

impl Mul for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn mul(self, rhs: &AlgebraicReal) -> AlgebraicReal {
        self.check(rhs);
        let d = self.field.degree();
        let mut full = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            for (j, b) in rhs.coords.iter().enumerate() {
                full[i + j] += a * b;
            }
        }
        let m = &self.field.minpoly;
        for k in (d..full.len()).rev() {
            let c = std::mem::take(&mut full[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                let delta = &c * BigRational::from_integer(m[i].into());
                full[k - d + i] -= delta;
            }
        }
        full.truncate(d);
        AlgebraicReal { coords: full, field: self.field.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_minimal_polynomials() {
        assert_eq!(minimal_polynomial(2).unwrap(), vec![0, 1]);
        assert_eq!(minimal_polynomial(3).unwrap(), vec![-1, 1]);
        assert_eq!(minimal_polynomial(4).unwrap(), vec![-2, 0, 1]);
        assert_eq!(minimal_polynomial(5).unwrap(), vec![-1, -1, 1]);
        assert_eq!(minimal_polynomial(6).unwrap(), vec![-3, 0, 1]);
    }

    #[test]
    fn cyclotomic_degrees() {
        for (n, phi) in [(1u32, 1usize), (2, 1), (6, 2), (10, 4), (12, 4), (30, 8), (42, 12)] {
            assert_eq!(cyclotomic(n).unwrap().len() - 1, phi, "n = {n}");
        }
    }

    #[test]
    fn golden_ratio() {
        let f = Arc::new(NumberField::new(5).unwrap());
        let phi = f.two_cos(Order::Finite(5)).unwrap();
        assert_eq!(phi, vec![0, 1]);
        assert!((f.approx(&phi) - 1.618_033_988_749_895).abs() < 1e-12);
        let sq = f.mul(&phi, &phi).unwrap();
        // φ² = φ + 1
        assert_eq!(sq, vec![1, 1]);
        assert_eq!(f.two_cos(Order::Finite(5)).unwrap(), phi);
    }

    #[test]
    fn field_values_match_cosines() {
        for n in [2u32, 3, 4, 5, 6, 7, 8, 10, 12, 14, 15, 30, 42] {
            let f = NumberField::new(n).unwrap();
            for m in (2..=n).filter(|m| n % m == 0) {
                let c = f.two_cos(Order::Finite(m)).unwrap();
                let want = 2.0 * (std::f64::consts::PI / m as f64).cos();
                assert!((f.approx(&c) - want).abs() < 1e-9, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn exact_sign_of_tiny_values() {
        let f = Arc::new(NumberField::new(5).unwrap());
        // F_{k+1} - F_k φ alternates in sign and shrinks geometrically
        let (mut a, mut b) = (1i64, 1i64);
        for k in 0..60 {
            let v = [b, -a];
            let expected = if k % 2 == 0 { Ordering::Less } else { Ordering::Greater };
            assert_eq!(f.sign(&v), expected, "k = {k}");
            let next = a + b;
            a = b;
            b = next;
        }
    }

    #[test]
    fn public_arithmetic() {
        let f = Arc::new(NumberField::new(5).unwrap());
        let phi = AlgebraicReal::generator(f.clone());
        let one = AlgebraicReal::from_rational(f.clone(), BigRational::one());
        let lhs = &phi * &phi;
        let rhs = &phi + &one;
        assert_eq!(lhs, rhs);
        assert_eq!((&phi - &one).sign(), Ordering::Greater);
        assert_eq!((-&phi).sign(), Ordering::Less);
        assert!((phi.to_f64() - 1.618_033_988_75).abs() < 1e-9);
    }
}
