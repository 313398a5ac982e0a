//! The growth series as a rational function, from finite parabolic subgroups.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coxeter::{
    ball_enumerate_parabolic, class_index, length_profile_grouped, maximal_spherical_subsets, spherical_subsets,
    CoxeterMatrix, GenSet, Limits, Representation,
};
use crate::error::{Error, Result};
use crate::poly::{MultiPoly, UniPoly};

/// Depth to which the Taylor expansion is checked against enumeration.
pub const VALIDATION_DEPTH: usize = 12;

/// Visit budget for the validation enumeration.
const VALIDATION_VISITS: u64 = 5_000_000;

/// `W(u) = numerator / denominator`, one variable per group of conjugacy classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalGrowthSeries {
    /// Variable carrying each conjugacy class.
    pub variable_of_class: Vec<usize>,
    pub numerator: MultiPoly,
    pub denominator: MultiPoly,
    /// Length through which the expansion was checked against enumeration.
    pub validated_depth: usize,
    /// True when `W` is finite (the denominator is 1).
    pub finite: bool,
}

impl RationalGrowthSeries {
    pub fn variables(&self) -> usize {
        self.numerator.nvars()
    }

    /// Taylor coefficients through total degree `depth`.
    pub fn taylor(&self, depth: usize) -> Result<BTreeMap<Vec<u32>, i128>> {
        self.numerator.series_div(&self.denominator, depth as u32)
    }

    /// All variables identified and common factors cancelled; the denominator has
    /// constant term 1.
    pub fn univariate(&self) -> (UniPoly, UniPoly) {
        let num = UniPoly::from_integers(&self.numerator.to_univariate());
        let den = UniPoly::from_integers(&self.denominator.to_univariate());
        let g = num.gcd(&den);
        let (num, den) = (num.div_rem(&g).0, den.div_rem(&g).0);
        let c = den.coeffs()[0].clone();
        let scale = |p: &UniPoly| UniPoly::new(p.coeffs().iter().map(|x| x / &c).collect());
        (scale(&num), scale(&den))
    }
}

/// Elements of a finite parabolic subgroup: `(word letters, descent set, class type)`.
struct FiniteParabolic {
    elements: Vec<(GenSet, GenSet, Vec<u32>)>,
}

fn enumerate_finite(rep: &Representation, t: GenSet, vars_of_gen: &[usize], nvars: usize, limits: Limits) -> Result<FiniteParabolic> {
    let ball = ball_enumerate_parabolic(rep, t, 4096, limits)?;
    if !ball.exhausted {
        return Err(Error::ResourceExceeded("finite parabolic subgroup did not close within radius 4096".into()));
    }
    let mut elements = Vec::with_capacity(ball.total());
    for (_, e) in ball.iter() {
        let letters = e.word.iter().fold(GenSet::EMPTY, |a, &s| a.with(s as usize));
        let mut ct = vec![0u32; nvars];
        for &s in &e.word {
            ct[vars_of_gen[s as usize]] += 1;
        }
        elements.push((letters, e.descent, ct));
    }
    Ok(FiniteParabolic { elements })
}

impl FiniteParabolic {
    fn poincare(&self, nvars: usize, filter: impl Fn(GenSet, GenSet) -> bool) -> Result<MultiPoly> {
        let mut p = MultiPoly::zero(nvars);
        for (letters, descent, ct) in &self.elements {
            if filter(*letters, *descent) {
                p.add_term(ct.clone(), 1)?;
            }
        }
        Ok(p)
    }

    /// Class type of the longest element of `W_T` for `T` inside this subgroup.
    fn longest_in(&self, t: GenSet) -> Vec<u32> {
        self.elements
            .iter()
            .filter(|(letters, _, _)| letters.is_subset(t))
            .max_by_key(|(_, _, ct)| ct.iter().sum::<u32>())
            .map(|(_, _, ct)| ct.clone())
            .unwrap()
    }
}

/// The growth series, univariate or with one variable per conjugacy class.
pub fn rational_growth_series(m: &CoxeterMatrix, per_class: bool, limits: Limits) -> Result<RationalGrowthSeries> {
    let classes = class_index(m).iter().max().map_or(0, |c| c + 1);
    let vars: Vec<usize> = if per_class { (0..classes).collect() } else { vec![0; classes] };
    growth_series_grouped(m, &vars, limits)
}

/// The growth series with caller-chosen variables per class, validated against enumeration.
pub(crate) fn growth_series_grouped(
    m: &CoxeterMatrix,
    variable_of_class: &[usize],
    limits: Limits,
) -> Result<RationalGrowthSeries> {
    let rep = Representation::new(m)?;
    let nvars = variable_of_class.iter().max().map_or(0, |v| v + 1).max(1);
    let class_of = class_index(m);
    let vars_of_gen: Vec<usize> = class_of.iter().map(|&c| variable_of_class[c]).collect();
    let full = m.full_set();
    let spherical = spherical_subsets(m);
    let (numerator, denominator, finite) = if spherical.contains(&full) {
        let fp = enumerate_finite(&rep, full, &vars_of_gen, nvars, limits)?;
        (fp.poincare(nvars, |_, _| true)?, MultiPoly::one(nvars), true)
    } else {
        let maximal = maximal_spherical_subsets(m);
        let groups: Vec<FiniteParabolic> = maximal
            .iter()
            .map(|&mm| enumerate_finite(&rep, mm, &vars_of_gen, nvars, limits))
            .collect::<Result<_>>()?;
        let poincare: Vec<MultiPoly> =
            groups.iter().map(|g| g.poincare(nvars, |_, _| true)).collect::<Result<_>>()?;
        let mut others = Vec::with_capacity(maximal.len());
        for i in 0..maximal.len() {
            let mut p = MultiPoly::one(nvars);
            for (j, q) in poincare.iter().enumerate() {
                if j != i {
                    p = p.mul(q)?;
                }
            }
            others.push(p);
        }
        let mut lcm = MultiPoly::one(nvars);
        for q in &poincare {
            lcm = lcm.mul(q)?;
        }
        let mut den = MultiPoly::zero(nvars);
        for &t in &spherical {
            let i = maximal.iter().position(|&mm| t.is_subset(mm)).unwrap();
            let coset = groups[i].poincare(nvars, |_, d| d.intersection(t).is_empty())?;
            let top = groups[i].longest_in(t);
            let sign = if t.len() % 2 == 0 { 1 } else { -1 };
            den = den.add(&coset.shift(&top).mul(&others[i])?.scale(sign)?)?;
        }
        (lcm, den, false)
    };
    let mut series = RationalGrowthSeries {
        variable_of_class: variable_of_class.to_vec(),
        numerator,
        denominator,
        validated_depth: 0,
        finite,
    };
    series.validated_depth = validate(&rep, &series, &vars_of_gen, limits)?;
    Ok(series)
}

fn validate(rep: &Representation, series: &RationalGrowthSeries, vars_of_gen: &[usize], limits: Limits) -> Result<usize> {
    let budget = limits.max_visits.min(VALIDATION_VISITS);
    // the deepest ball the budget allows, sized by the series itself; a wrong series
    // still fails the comparison below at whatever depth is chosen
    let full_taylor = series.taylor(VALIDATION_DEPTH)?;
    let mut by_length = vec![0i128; VALIDATION_DEPTH + 1];
    for (exps, c) in &full_taylor {
        let k = exps.iter().sum::<u32>() as usize;
        if k <= VALIDATION_DEPTH {
            by_length[k] += c;
        }
    }
    let mut ball = 0i128;
    let mut depth = 2;
    for (k, c) in by_length.iter().enumerate() {
        ball += c;
        if ball > budget as i128 {
            break;
        }
        depth = depth.max(k);
    }
    let profile = length_profile_grouped(rep, rep.matrix().full_set(), depth, limits, vars_of_gen)?;
    let taylor = series.taylor(depth)?;
    let mut expected: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
    for layer in &profile.counts {
        for (ct, c) in layer {
            expected.insert(ct.clone(), *c as i128);
        }
    }
    let got: BTreeMap<Vec<u32>, i128> = taylor.into_iter().filter(|(_, c)| *c != 0).collect();
    if got != expected {
        let first = expected
            .iter()
            .find(|(k, v)| got.get(*k) != Some(v))
            .map(|(k, v)| format!("coefficient of {k:?}: series {} vs enumeration {v}", got.get(k).copied().unwrap_or(0)))
            .or_else(|| got.iter().find(|(k, _)| !expected.contains_key(*k)).map(|(k, v)| format!("series has extra term {k:?} = {v}")))
            .unwrap_or_default();
        return Err(Error::ValidationMismatch(format!("growth series expansion disagrees with enumeration: {first}")));
    }
    Ok(depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::systems::*;

    fn uni(m: &CoxeterMatrix) -> (UniPoly, UniPoly) {
        rational_growth_series(m, false, Limits::default()).unwrap().univariate()
    }

    #[test]
    fn infinite_dihedral_series() {
        let (n, d) = uni(&infinite_dihedral());
        assert_eq!(n, UniPoly::from_integers(&[1, 1]));
        assert_eq!(d, UniPoly::from_integers(&[1, -1]));
    }

    #[test]
    fn finite_a2_is_polynomial() {
        let s = rational_growth_series(&type_a(2), false, Limits::default()).unwrap();
        assert!(s.finite);
        let (n, d) = s.univariate();
        assert_eq!(n, UniPoly::from_integers(&[1, 2, 2, 1]));
        assert_eq!(d, UniPoly::one());
    }

    #[test]
    fn pentagon_series() {
        let s = rational_growth_series(&pentagon(), false, Limits::default()).unwrap();
        assert_eq!(s.validated_depth, VALIDATION_DEPTH);
        let (n, d) = s.univariate();
        assert_eq!(n, UniPoly::from_integers(&[1, 2, 1]));
        assert_eq!(d, UniPoly::from_integers(&[1, -3, 1]));
        let t = s.taylor(4).unwrap();
        assert_eq!(t.get(&vec![2]), Some(&15));
    }

    #[test]
    fn per_class_series_validates() {
        for m in [pentagon(), triangle(3, 3, 3), triangle(7, 3, 2), type_b(3), triangle(4, 4, 2)] {
            let s = rational_growth_series(&m, true, Limits::default()).unwrap();
            assert!(s.validated_depth >= 8, "{m:?}");
        }
    }
}
