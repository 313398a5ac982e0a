//! Regular buildings: thickness data, sphere sizes, the pullback-cycle series, critical
//! exponents, and an explicit right-angled building with retraction chain maps.

mod chains;
mod graph_product;
mod oracle;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coxeter::{
    class_index, is_affine_system, is_spherical, length_profile_parabolic, CoxeterMatrix, GenSet, GroupElement,
    LengthProfile, Representation,
};
use crate::davis::is_type_pm;
use crate::error::{Error, Result};
use crate::growth::{
    classify_convergence, growth_rate, rate_from_class_logs, Convergence, GrowthOptions, GrowthRateEstimate,
    RateMethod, WeightVector,
};
use crate::numeric::{Extended, Method, Quantity};

pub use chains::{
    boundary, jensen_check, retraction_pullback, retraction_pushforward, BuildingChain, JensenCheck, JensenVerdict,
    SimplexId, MARGIN,
};
pub use graph_product::{GraphProductBuilding, NormalForm, Syllable};
pub use oracle::{verify_oracle, IdentityTally, JensenTally, OracleOptions, OracleSummary, SphereCount};

/// Thickness minus one per generator: every `s`-panel has `q_s + 1` chambers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThicknessVector {
    values: Vec<u64>,
}

impl ThicknessVector {
    pub fn new(m: &CoxeterMatrix, per_gen: Vec<u64>) -> Result<Self> {
        if per_gen.contains(&0) {
            return Err(Error::InvalidArgument("thickness values must be >= 1".into()));
        }
        // class constancy is checked by the weight conversion
        WeightVector::from_generators(m, &per_gen)?;
        Ok(ThicknessVector { values: per_gen })
    }

    pub fn uniform(m: &CoxeterMatrix, q: u64) -> Result<Self> {
        Self::new(m, vec![q; m.rank()])
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Generators with `q_s = 1`.
    pub fn thin_generators(&self) -> GenSet {
        GenSet::from_indices(self.values.iter().enumerate().filter(|(_, &q)| q == 1).map(|(i, _)| i))
    }
}

/// A Coxeter system with a valid thickness vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularBuildingSpec {
    matrix: CoxeterMatrix,
    thickness: ThicknessVector,
}

impl RegularBuildingSpec {
    pub fn new(matrix: CoxeterMatrix, thickness: Vec<u64>) -> Result<Self> {
        if thickness.len() != matrix.rank() {
            return Err(Error::InvalidArgument(format!(
                "expected {} thickness values, got {}",
                matrix.rank(),
                thickness.len()
            )));
        }
        let thickness = ThicknessVector::new(&matrix, thickness)?;
        Ok(RegularBuildingSpec { matrix, thickness })
    }

    pub fn uniform(matrix: CoxeterMatrix, q: u64) -> Result<Self> {
        let n = matrix.rank();
        Self::new(matrix, vec![q; n])
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn thickness(&self) -> &ThicknessVector {
        &self.thickness
    }

    /// Some `q_s = 1`: the theorem-grade hypotheses fail.
    pub fn is_thin(&self) -> bool {
        !self.thickness.thin_generators().is_empty()
    }

    pub fn weights(&self) -> WeightVector {
        WeightVector::from_generators(&self.matrix, &self.thickness.values).expect("validated on construction")
    }
}

/// `q_w`: the number of chambers at W-distance `w` from a fixed chamber.
pub fn sphere_cardinality(spec: &RegularBuildingSpec, w: &GroupElement) -> BigInt {
    w.word().iter().map(|&s| BigInt::from(spec.thickness.values[s])).product()
}

/// `e_q(W)`, which is infinite when the thin generators span an infinite subgroup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThicknessRate {
    pub value: Extended,
    pub estimate: Option<GrowthRateEstimate>,
}

impl ThicknessRate {
    pub fn quantity(&self) -> Quantity {
        match &self.estimate {
            None => Quantity::exact(self.value),
            Some(e) => Quantity { value: Extended::Finite(e.value), uncertainty: e.uncertainty, method: method_of(e) },
        }
    }

    pub fn convergence(&self, x: f64) -> Convergence {
        match &self.estimate {
            None => Convergence::Diverges,
            Some(e) => classify_convergence(e, x),
        }
    }
}

fn method_of(e: &GrowthRateEstimate) -> Method {
    match (e.method, e.uncertainty == 0.0) {
        (RateMethod::SeriesSingularity, true) => Method::Exact,
        (RateMethod::SeriesSingularity, false) => Method::SeriesSingularity,
        (RateMethod::EnumerationFit, _) => Method::EnumerationFit,
    }
}

pub fn thickness_growth_rate(spec: &RegularBuildingSpec, opts: GrowthOptions) -> Result<ThicknessRate> {
    let m = &spec.matrix;
    let thin = spec.thickness.thin_generators();
    if !is_spherical(m, thin) {
        return Ok(ThicknessRate { value: Extended::Infinity, estimate: None });
    }
    let estimate = if thin.is_empty() {
        growth_rate(m, &spec.weights(), opts)?
    } else {
        let logs: Vec<f64> = spec.weights().logs();
        rate_from_class_logs(m, &logs, opts.limits)?.ok_or_else(|| {
            Error::DegenerateWeights("thin generators present and the growth series is unavailable".into())
        })?
    };
    Ok(ThicknessRate { value: Extended::Finite(estimate.value), estimate: Some(estimate) })
}

/// Partial sums of `sum_{l(w) <= n} q_w^{1-p}` with the convergence verdict at `x = p - 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpPullback {
    pub p: BigRational,
    pub partial_sums: Vec<f64>,
    /// Exact sums, present when `p - 1` is an integer.
    pub exact_partial_sums: Option<Vec<BigRational>>,
    pub e_q: ThicknessRate,
    pub verdict: Convergence,
}

pub fn lp_pullback_norm(spec: &RegularBuildingSpec, p: &BigRational, depth: usize, opts: GrowthOptions) -> Result<LpPullback> {
    let rep = Representation::new(&spec.matrix)?;
    let profile = length_profile_parabolic(&rep, spec.matrix.full_set(), depth, opts.limits)?;
    let e_q = thickness_growth_rate(spec, opts)?;
    lp_pullback_from_profile(spec, &profile, p, e_q)
}

/// As [`lp_pullback_norm`], from a per-class length profile and a computed `e_q`.
pub fn lp_pullback_from_profile(spec: &RegularBuildingSpec, profile: &LengthProfile, p: &BigRational, e_q: ThicknessRate) -> Result<LpPullback> {
    if *p <= BigRational::one() {
        return Err(Error::InvalidArgument(format!("p must exceed 1, got {p}")));
    }
    let m = &spec.matrix;
    let idx = class_index(m);
    let classes = idx.iter().max().map_or(0, |c| c + 1);
    let mut q_class = vec![1u64; classes];
    for (s, &c) in idx.iter().enumerate() {
        q_class[c] = spec.thickness.values[s];
    }
    let exponent = p - BigRational::one();
    let exact = exponent.is_integer().then(|| exponent.to_integer().to_usize()).flatten();
    let pf = p.to_f64().unwrap_or(f64::NAN);
    let mut sums = Vec::with_capacity(profile.radius + 1);
    let mut exact_sums = exact.map(|_| Vec::with_capacity(profile.radius + 1));
    let mut acc = 0.0f64;
    let mut acc_exact = BigRational::zero();
    for layer in &profile.counts {
        for (ct, count) in layer {
            let log_q: f64 = ct.iter().zip(&q_class).map(|(&k, &q)| k as f64 * (q as f64).ln()).sum();
            acc += *count as f64 * ((1.0 - pf) * log_q).exp();
            if let Some(e) = exact {
                let q_w: BigInt = ct.iter().zip(&q_class).map(|(&k, &q)| num_traits::pow(BigInt::from(q), k as usize)).product();
                acc_exact += BigRational::new(BigInt::from(*count), num_traits::pow(q_w, e));
            }
        }
        sums.push(acc);
        if let Some(v) = exact_sums.as_mut() {
            v.push(acc_exact.clone());
        }
    }
    let verdict = e_q.convergence(pf - 1.0);
    Ok(LpPullback { p: p.clone(), partial_sums: sums, exact_partial_sums: exact_sums, e_q, verdict })
}

/// Critical exponents of `l^p`-homology and cohomology in the top degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalExponents {
    pub e_q: Quantity,
    /// `1 + e_q`.
    pub p_homology: Quantity,
    /// `1 + 1/e_q`.
    pub p_cohomology: Quantity,
    /// The nerve is an orientable gallery-connected pseudomanifold, so both values are
    /// exact thresholds rather than one-sided bounds.
    pub pm_grade: bool,
    pub affine: bool,
    /// Some `q_s = 1`; the thickness hypothesis `q >= 2` fails.
    pub thin: bool,
    pub warnings: Vec<String>,
}

pub fn critical_exponents(spec: &RegularBuildingSpec, opts: GrowthOptions) -> Result<CriticalExponents> {
    let rate = thickness_growth_rate(spec, opts)?;
    let e = rate.quantity();
    let affine = is_affine_system(&spec.matrix);
    let pm_grade = is_type_pm(&spec.matrix)?.is_pm();
    let (p_homology, p_cohomology) = match e.value {
        Extended::Infinity => (Quantity::exact(Extended::Infinity), Quantity::exact(Extended::Finite(1.0))),
        Extended::Finite(x) => {
            let hom = Quantity { value: Extended::Finite(1.0 + x), uncertainty: e.uncertainty, method: e.method };
            let coh = if x == 0.0 && e.uncertainty == 0.0 {
                Quantity::exact(Extended::Infinity)
            } else {
                let u = if x > e.uncertainty { e.uncertainty / (x * (x - e.uncertainty)) } else { f64::INFINITY };
                Quantity { value: Extended::Finite(x).one_plus_reciprocal(), uncertainty: u, method: Method::Derived }
            };
            (hom, coh)
        }
    };
    let mut warnings = Vec::new();
    let thin = spec.is_thin();
    if thin {
        warnings.push(format!(
            "thin building: q_s = 1 for {:?}; the exponent characterisation needs q >= 2",
            spec.thickness.thin_generators().names(spec.matrix.generators())
        ));
    }
    if !pm_grade {
        warnings.push("nerve is not of type PM: the homology exponent is only an upper bound for the onset of non-vanishing".into());
    }
    Ok(CriticalExponents { e_q: e, p_homology, p_cohomology, pm_grade, affine, thin, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::systems::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sphere_sizes_match_oracle() {
        let spec = RegularBuildingSpec::uniform(pentagon(), 2).unwrap();
        let b = GraphProductBuilding::build(&spec, 4, 1_000_000).unwrap();
        let rep = Representation::new(spec.matrix()).unwrap();
        let ball = crate::coxeter::ball_enumerate(&rep, 4, Default::default()).unwrap();
        let weighted: usize = ball.layer_sizes().iter().enumerate().map(|(k, &c)| c << k).sum();
        assert_eq!(b.chamber_count(), weighted);
        for (_, e) in ball.iter() {
            let w = rep.element_from_word(&e.word.iter().map(|&s| s as usize).collect::<Vec<_>>()).unwrap();
            let expected = sphere_cardinality(&spec, &w);
            assert_eq!(BigInt::from(b.sphere_count(w.word()).unwrap()), expected);
        }
    }

    #[test]
    fn dihedral_tree() {
        let spec = RegularBuildingSpec::uniform(infinite_dihedral(), 2).unwrap();
        let b = GraphProductBuilding::build(&spec, 3, 1000).unwrap();
        assert_eq!(b.sphere_count(&[0, 1, 0]).unwrap(), 8);
        let thin = RegularBuildingSpec::uniform(infinite_dihedral(), 1).unwrap();
        let a = GraphProductBuilding::build(&thin, 3, 1000).unwrap();
        assert_eq!(a.layers().iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 2, 2, 2]);
        assert!(matches!(
            GraphProductBuilding::build(&RegularBuildingSpec::uniform(triangle(3, 3, 3), 2).unwrap(), 2, 100),
            Err(Error::NotRightAngled)
        ));
    }

    #[test]
    fn pullback_series() {
        let spec = RegularBuildingSpec::uniform(infinite_dihedral(), 2).unwrap();
        let lp = lp_pullback_norm(&spec, &r(2, 1), 10, GrowthOptions::default()).unwrap();
        let exact = lp.exact_partial_sums.unwrap();
        assert_eq!(exact[10], r(3, 1) - r(2, 1024));
        assert_eq!(lp.verdict, Convergence::Converges);
        let pent = RegularBuildingSpec::uniform(pentagon(), 2).unwrap();
        assert_eq!(lp_pullback_norm(&pent, &r(2, 1), 6, GrowthOptions::default()).unwrap().verdict, Convergence::Diverges);
        assert_eq!(lp_pullback_norm(&pent, &r(5, 2), 6, GrowthOptions::default()).unwrap().verdict, Convergence::Converges);
    }

    #[test]
    fn exponents() {
        let c = critical_exponents(&RegularBuildingSpec::uniform(triangle(3, 3, 3), 2).unwrap(), GrowthOptions::default()).unwrap();
        assert_eq!(c.p_homology.value, Extended::Finite(1.0));
        assert_eq!(c.p_cohomology.value, Extended::Infinity);
        assert!(c.pm_grade && c.affine);
        let c = critical_exponents(&RegularBuildingSpec::uniform(pentagon(), 2).unwrap(), GrowthOptions::default()).unwrap();
        let e = ((3.0 + 5f64.sqrt()) / 2.0).ln() / 2f64.ln();
        assert!((c.p_homology.value.finite().unwrap() - (1.0 + e)).abs() < 1e-8);
        assert!((c.p_cohomology.value.finite().unwrap() - (1.0 + 1.0 / e)).abs() < 1e-8);
        let thin = critical_exponents(&RegularBuildingSpec::uniform(pentagon(), 1).unwrap(), GrowthOptions::default()).unwrap();
        assert!(thin.thin);
        assert_eq!(thin.p_homology.value, Extended::Infinity);
    }

    #[test]
    fn oracle_battery_small() {
        let spec = RegularBuildingSpec::uniform(pentagon(), 2).unwrap();
        let s = verify_oracle(&spec, &OracleOptions { trials: 50, ..Default::default() }).unwrap();
        assert!(s.all_passed, "{s:?}");
        assert_eq!(s.sphere_counts.len(), 166);
    }

    #[test]
    fn partially_thin_uses_finite_parabolic() {
        let spec = RegularBuildingSpec::new(pentagon(), vec![1, 2, 2, 2, 2]).unwrap();
        let rate = thickness_growth_rate(&spec, GrowthOptions::default()).unwrap();
        let full = thickness_growth_rate(&RegularBuildingSpec::uniform(pentagon(), 2).unwrap(), GrowthOptions::default()).unwrap();
        assert!(rate.value.finite().unwrap() > full.value.finite().unwrap());
    }

    fn chamber_flag(b: &GraphProductBuilding, c: &NormalForm) -> BuildingChain {
        let mut ch = BuildingChain::zero(0);
        ch.add(b, c, &[GenSet::EMPTY], BigRational::one()).unwrap();
        ch
    }

    #[test]
    fn retraction_maps() {
        let spec = RegularBuildingSpec::uniform(pentagon(), 2).unwrap();
        let b = GraphProductBuilding::build(&spec, 4, 1_000_000).unwrap();
        let base = chamber_flag(&b, &Vec::new());
        assert_eq!(retraction_pullback(&b, &base).unwrap(), base);
        let w: NormalForm = vec![(0, 1), (2, 1)];
        let up = retraction_pullback(&b, &chamber_flag(&b, &w)).unwrap();
        assert_eq!(up.len(), 4);
        assert!(up.coefficients.values().all(|c| *c == r(1, 4)));
        assert_eq!(retraction_pushforward(&b, &up).unwrap(), chamber_flag(&b, &w));
        let far: NormalForm = vec![(0, 1), (2, 1), (4, 1)];
        assert!(matches!(retraction_pullback(&b, &chamber_flag(&b, &far)), Err(Error::MarginViolation(_))));
    }

    #[test]
    fn boundary_squares_to_zero_and_commutes() {
        let spec = RegularBuildingSpec::uniform(pentagon(), 2).unwrap();
        let b = GraphProductBuilding::build(&spec, 5, 1_000_000).unwrap();
        let mut eta = BuildingChain::zero(2);
        let flag = [GenSet::EMPTY, GenSet::singleton(0), GenSet::from_indices([0, 1])];
        eta.add(&b, &vec![(2, 2), (3, 1)], &flag, r(3, 2)).unwrap();
        eta.add(&b, &vec![(1, 1)], &flag, r(-1, 1)).unwrap();
        let d = boundary(&b, &eta).unwrap();
        assert!(boundary(&b, &d).unwrap().is_zero());
        let push = retraction_pushforward(&b, &eta).unwrap();
        assert_eq!(boundary(&b, &push).unwrap(), retraction_pushforward(&b, &d).unwrap());
        assert_eq!(boundary(&b, &retraction_pullback(&b, &push).unwrap()).unwrap(), retraction_pullback(&b, &boundary(&b, &push).unwrap()).unwrap());
        let j = jensen_check(&b, &eta, &r(2, 1)).unwrap();
        assert_eq!(j.verdict, JensenVerdict::Pass);
        let j = jensen_check(&b, &eta, &r(3, 2)).unwrap();
        assert_eq!(j.verdict, JensenVerdict::Pass);
    }
}
