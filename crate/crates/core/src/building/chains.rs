use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coxeter::{is_spherical, GenSet};
use crate::error::{Error, Result};

use super::graph_product::{GraphProductBuilding, NormalForm};

/// A simplex of the building: a residue representative and a flag `T_0 < ... < T_k`
/// of spherical subsets. The representative is the shortest chamber of its `T_0`-residue.
pub type SimplexId = (NormalForm, Vec<GenSet>);

/// Distance kept between a chain's support and the edge of the enumerated ball.
pub const MARGIN: usize = 2;

/// A finitely supported rational chain of fixed degree, kept reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingChain {
    pub degree: usize,
    pub coefficients: BTreeMap<SimplexId, BigRational>,
}

impl BuildingChain {
    pub fn zero(degree: usize) -> Self {
        BuildingChain { degree, coefficients: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Adds `c * simplex`, canonicalising the representative first.
    pub fn add(&mut self, b: &GraphProductBuilding, rep: &NormalForm, flag: &[GenSet], c: BigRational) -> Result<()> {
        if flag.len() != self.degree + 1 {
            return Err(Error::InvalidArgument(format!("flag of length {} in a degree-{} chain", flag.len(), self.degree)));
        }
        if flag.windows(2).any(|w| w[0] == w[1] || !w[0].is_subset(w[1])) {
            return Err(Error::InvalidArgument("flag must be strictly increasing".into()));
        }
        if let Some(bad) = flag.iter().find(|t| !is_spherical(b.spec().matrix(), **t)) {
            return Err(Error::InvalidArgument(format!("flag member {bad:?} is not spherical")));
        }
        let key = (b.residue_representative(rep, flag[0]), flag.to_vec());
        self.add_canonical(key, c);
        Ok(())
    }

    fn add_canonical(&mut self, key: SimplexId, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coefficients.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn scaled_add(&mut self, other: &BuildingChain, factor: &BigRational) {
        for (k, v) in &other.coefficients {
            self.add_canonical(k.clone(), v * factor);
        }
    }

    pub fn sub(&self, other: &BuildingChain) -> BuildingChain {
        let mut out = self.clone();
        out.scaled_add(other, &-BigRational::one());
        out
    }

    /// Largest representative length in the support.
    pub fn support_radius(&self) -> usize {
        self.coefficients.keys().map(|(r, _)| r.len()).max().unwrap_or(0)
    }

    /// `||chain||_p^p` as a float.
    pub fn norm_pow_f64(&self, p: f64) -> f64 {
        self.coefficients.values().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY).powf(p)).sum()
    }
}

fn check_margin(b: &GraphProductBuilding, chain: &BuildingChain) -> Result<()> {
    let r = chain.support_radius();
    if r + MARGIN > b.radius() {
        return Err(Error::MarginViolation(format!(
            "support reaches length {r}, building radius {} needs a margin of {MARGIN}",
            b.radius()
        )));
    }
    Ok(())
}

/// Simplicial boundary: face `i` drops `T_i`; dropping `T_0` coarsens the residue.
pub fn boundary(b: &GraphProductBuilding, chain: &BuildingChain) -> Result<BuildingChain> {
    check_margin(b, chain)?;
    if chain.degree == 0 {
        return Ok(BuildingChain::zero(0));
    }
    let mut out = BuildingChain::zero(chain.degree - 1);
    for ((rep, flag), c) in &chain.coefficients {
        for i in 0..flag.len() {
            let mut face = flag.clone();
            face.remove(i);
            let coef = if i % 2 == 0 { c.clone() } else { -c.clone() };
            out.add(b, rep, &face, coef)?;
        }
    }
    Ok(out)
}

/// Pushforward along the retraction onto the standard apartment centred at the base
/// chamber: every syllable exponent becomes 1.
pub fn retraction_pushforward(b: &GraphProductBuilding, chain: &BuildingChain) -> Result<BuildingChain> {
    check_margin(b, chain)?;
    let mut out = BuildingChain::zero(chain.degree);
    for ((rep, flag), c) in &chain.coefficients {
        let image: NormalForm = rep.iter().map(|&(s, _)| (s, 1)).collect();
        out.add(b, &image, flag, c.clone())?;
    }
    Ok(out)
}

/// Pullback: an apartment simplex spreads over its fibre with weight `1/q_w`.
pub fn retraction_pullback(b: &GraphProductBuilding, chain: &BuildingChain) -> Result<BuildingChain> {
    check_margin(b, chain)?;
    let q = b.spec().thickness().values().to_vec();
    let mut out = BuildingChain::zero(chain.degree);
    for ((rep, flag), c) in &chain.coefficients {
        if rep.iter().any(|&(_, e)| e != 1) {
            return Err(Error::InvalidArgument("pullback expects a chain on the standard apartment".into()));
        }
        let w = GraphProductBuilding::project(rep);
        let q_w: BigInt = w.iter().map(|&s| BigInt::from(q[s])).product();
        let share = c / BigRational::from_integer(q_w);
        for chamber in b.fiber(&w) {
            out.add(b, &chamber, flag, share.clone())?;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JensenVerdict {
    Pass,
    Fail,
    Indeterminate,
}

/// Outcome of comparing `||ρ*ρ_* η||_p` with `||η||_p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JensenCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// The averaged chain equals the input, so the norms are equal.
    pub equal: bool,
    pub verdict: JensenVerdict,
}

/// Checks `||ρ*ρ_* η||_p <= ||η||_p` exactly for rational `p > 1`.
pub fn jensen_check(b: &GraphProductBuilding, eta: &BuildingChain, p: &BigRational) -> Result<JensenCheck> {
    if *p <= BigRational::one() {
        return Err(Error::InvalidArgument(format!("p must exceed 1, got {p}")));
    }
    let averaged = retraction_pullback(b, &retraction_pushforward(b, eta)?)?;
    let pf = p.to_f64().unwrap_or(f64::NAN);
    let lhs = averaged.norm_pow_f64(pf).powf(1.0 / pf);
    let rhs = eta.norm_pow_f64(pf).powf(1.0 / pf);
    if averaged == *eta {
        return Ok(JensenCheck { lhs, rhs, equal: true, verdict: JensenVerdict::Pass });
    }
    let verdict = compare_norms(&averaged, eta, p);
    Ok(JensenCheck { lhs, rhs, equal: false, verdict })
}

/// Compares `sum |a_i|^p` against `sum |b_i|^p`: exact for integer `p`, otherwise by
/// nested root enclosures of growing precision.
fn compare_norms(a: &BuildingChain, b: &BuildingChain, p: &BigRational) -> JensenVerdict {
    let num = p.numer().to_biguint().unwrap();
    let den = p.denom().to_biguint().unwrap();
    let (Some(num), Some(den)) = (num.to_u32(), den.to_u32()) else {
        return JensenVerdict::Indeterminate;
    };
    let powers = |ch: &BuildingChain| -> Vec<BigRational> {
        ch.coefficients.values().map(|c| num_traits::pow(c.abs(), num as usize)).collect()
    };
    let (pa, pb) = (powers(a), powers(b));
    if den == 1 {
        let sa: BigRational = pa.iter().sum();
        let sb: BigRational = pb.iter().sum();
        return if sa <= sb { JensenVerdict::Pass } else { JensenVerdict::Fail };
    }
    for bits in [64u64, 256, 1024, 4096] {
        let (alo, ahi) = root_sum_bounds(&pa, den, bits);
        let (blo, bhi) = root_sum_bounds(&pb, den, bits);
        if ahi <= blo {
            return JensenVerdict::Pass;
        }
        if alo > bhi {
            return JensenVerdict::Fail;
        }
    }
    JensenVerdict::Indeterminate
}

/// Bounds on `sum x_i^{1/n}` with each root enclosed to `bits` binary digits.
fn root_sum_bounds(xs: &[BigRational], n: u32, bits: u64) -> (BigRational, BigRational) {
    let scale = BigUint::one() << bits;
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for x in xs {
        // x^{1/n} = (num * den^{n-1})^{1/n} / den
        let numer = x.numer().to_biguint().unwrap();
        let denom = x.denom().to_biguint().unwrap();
        let radicand = numer * num_traits::pow(denom.clone(), n as usize - 1) * num_traits::pow(scale.clone(), n as usize);
        let r = radicand.nth_root(n);
        let exact = num_traits::pow(r.clone(), n as usize) == radicand;
        let d = BigInt::from(denom * &scale);
        lo += BigRational::new(BigInt::from(r.clone()), d.clone());
        hi += BigRational::new(BigInt::from(if exact { r } else { r + 1u32 }), d);
    }
    (lo, hi)
}
