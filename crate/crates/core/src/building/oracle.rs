use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coxeter::{ball_enumerate, GenSet, Limits, Representation};
use crate::davis::davis_chamber;
use crate::error::Result;

use super::chains::{boundary, jensen_check, retraction_pullback, retraction_pushforward, BuildingChain, JensenVerdict, MARGIN};
use super::graph_product::GraphProductBuilding;
use super::{sphere_cardinality, RegularBuildingSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub radius: usize,
    pub trials: usize,
    pub p_values: Vec<BigRational>,
    pub seed: u64,
    pub limits: Limits,
}

impl Default for OracleOptions {
    fn default() -> Self {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        OracleOptions { radius: 4, trials: 1000, p_values: vec![r(3, 2), r(2, 1), r(3, 1)], seed: 0x5eed, limits: Limits::default() }
    }
}

/// Chambers at W-distance `w` from the base chamber, against `q_w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereCount {
    pub word: Vec<String>,
    pub count: u64,
    pub q_w: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityTally {
    pub identity: String,
    pub checked: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JensenTally {
    pub p: String,
    pub pass: usize,
    pub fail: usize,
    pub indeterminate: usize,
    /// Trials in which the averaged chain equals the input.
    pub equalities: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub radius: usize,
    pub chambers: usize,
    pub sphere_counts: Vec<SphereCount>,
    pub sphere_mismatches: usize,
    pub identities: Vec<IdentityTally>,
    pub jensen: Vec<JensenTally>,
    pub all_passed: bool,
}

/// Builds the right-angled building and runs the sphere-count, chain-identity and
/// Jensen checks on random rational chains.
pub fn verify_oracle(spec: &RegularBuildingSpec, opts: &OracleOptions) -> Result<OracleSummary> {
    let b = GraphProductBuilding::build(spec, opts.radius, opts.limits.max_elements)?;
    let m = spec.matrix();
    let rep = Representation::new(m)?;
    let ball = ball_enumerate(&rep, opts.radius, opts.limits)?;
    let mut sphere_counts = Vec::new();
    let mut sphere_mismatches = 0;
    for (_, e) in ball.iter() {
        let word: Vec<usize> = e.word.iter().map(|&s| s as usize).collect();
        let count = b.sphere_count(&word)?;
        let q_w = sphere_cardinality(spec, &rep.element_from_word(&word)?);
        if BigInt::from(count) != q_w {
            sphere_mismatches += 1;
        }
        sphere_counts.push(SphereCount { word: word.iter().map(|&s| m.generators()[s].clone()).collect(), count, q_w: q_w.to_string() });
    }

    let chamber = davis_chamber(m)?;
    let flags: Vec<Vec<Vec<GenSet>>> = (0..=chamber.dimension())
        .map(|k| {
            chamber.complex.simplices(k).iter().map(|s| s.iter().map(|&v| chamber.vertex_sets[v]).collect()).collect()
        })
        .collect();
    let usable = opts.radius.saturating_sub(MARGIN);
    let chambers: Vec<_> = b.layers().iter().take(usable + 1).flatten().cloned().collect();

    let names = [
        "boundary of boundary vanishes",
        "boundary commutes with pushforward",
        "boundary commutes with pullback",
        "pushforward after pullback is the identity",
        "pullback after pushforward is idempotent",
    ];
    let mut tallies: Vec<IdentityTally> = names.iter().map(|n| IdentityTally { identity: (*n).into(), checked: 0, failed: 0 }).collect();
    let mut jensen: Vec<JensenTally> = opts
        .p_values
        .iter()
        .map(|p| JensenTally { p: p.to_string(), pass: 0, fail: 0, indeterminate: 0, equalities: 0 })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.trials {
        let k = rng.gen_range(0..flags.len());
        let mut eta = BuildingChain::zero(k);
        for _ in 0..rng.gen_range(1..=5) {
            let flag = &flags[k][rng.gen_range(0..flags[k].len())];
            let c = &chambers[rng.gen_range(0..chambers.len())];
            let mut num = rng.gen_range(-9i64..=8);
            if num >= 0 {
                num += 1;
            }
            let coef = BigRational::new(num.into(), rng.gen_range(1i64..=6).into());
            eta.add(&b, c, flag, coef)?;
        }
        let push = retraction_pushforward(&b, &eta)?;
        let pull = retraction_pullback(&b, &push)?;
        let d_eta = boundary(&b, &eta)?;
        let d_push = boundary(&b, &push)?;
        let checks = [
            boundary(&b, &d_eta)?.is_zero(),
            d_push == retraction_pushforward(&b, &d_eta)?,
            boundary(&b, &pull)? == retraction_pullback(&b, &d_push)?,
            retraction_pushforward(&b, &pull)? == push,
            retraction_pullback(&b, &retraction_pushforward(&b, &pull)?)? == pull,
        ];
        for (t, ok) in tallies.iter_mut().zip(checks) {
            t.checked += 1;
            t.failed += usize::from(!ok);
        }
        for (tally, p) in jensen.iter_mut().zip(&opts.p_values) {
            let j = jensen_check(&b, &eta, p)?;
            tally.equalities += usize::from(j.equal);
            match j.verdict {
                JensenVerdict::Pass => tally.pass += 1,
                JensenVerdict::Fail => tally.fail += 1,
                JensenVerdict::Indeterminate => tally.indeterminate += 1,
            }
        }
    }
    let all_passed = sphere_mismatches == 0
        && tallies.iter().all(|t| t.failed == 0)
        && jensen.iter().all(|j| j.fail == 0 && j.indeterminate == 0);
    Ok(OracleSummary {
        radius: opts.radius,
        chambers: b.chamber_count(),
        sphere_counts,
        sphere_mismatches,
        identities: tallies,
        jensen,
        all_passed,
    })
}
