//! Growth functions, weighted growth rates and convergence of `W(t^{-x})`.

mod rate;
mod series;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::coxeter::{
    class_index, length_profile_grouped, CoxeterMatrix, GroupElement, LengthProfile, Limits, Representation,
};
use crate::error::{Error, Result};

pub(crate) use rate::rate_from_class_logs;
pub use rate::{
    classify_convergence, enumeration_fit, entropy, growth_rate, rate_comparison_bounds, Convergence, FitDetail,
    GrowthOptions, GrowthRateEstimate, RateMethod,
};
pub use series::{rational_growth_series, RationalGrowthSeries, VALIDATION_DEPTH};

/// One rational weight `t_i >= 1` per generator conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector {
    values: Vec<BigRational>,
}

impl WeightVector {
    pub fn new(m: &CoxeterMatrix, per_class: Vec<BigRational>) -> Result<Self> {
        let classes = class_index(m).iter().max().map_or(0, |c| c + 1);
        if per_class.len() != classes {
            return Err(Error::InvalidArgument(format!(
                "expected {classes} class weights, got {}",
                per_class.len()
            )));
        }
        if let Some(bad) = per_class.iter().find(|v| **v < BigRational::one()) {
            return Err(Error::InvalidArgument(format!("weights must be >= 1, got {bad}")));
        }
        Ok(WeightVector { values: per_class })
    }

    /// The same integer weight on every class.
    pub fn uniform(m: &CoxeterMatrix, t: u64) -> Result<Self> {
        let classes = class_index(m).iter().max().map_or(0, |c| c + 1);
        Self::new(m, vec![BigRational::from_integer(BigInt::from(t)); classes])
    }

    /// Weights given per generator; generators in one class must agree.
    pub fn from_generators(m: &CoxeterMatrix, per_gen: &[u64]) -> Result<Self> {
        if per_gen.len() != m.rank() {
            return Err(Error::InvalidArgument(format!("expected {} weights, got {}", m.rank(), per_gen.len())));
        }
        let idx = class_index(m);
        let classes = idx.iter().max().map_or(0, |c| c + 1);
        let mut vals: Vec<Option<u64>> = vec![None; classes];
        for (s, &q) in per_gen.iter().enumerate() {
            match vals[idx[s]] {
                None => vals[idx[s]] = Some(q),
                Some(prev) if prev != q => {
                    let g = m.generators();
                    let other = (0..s).find(|&t| idx[t] == idx[s]).unwrap();
                    return Err(Error::ThicknessClass(format!(
                        "generators `{}` and `{}` are conjugate (joined by odd m) but have values {prev} and {q}",
                        g[other], g[s]
                    )));
                }
                _ => {}
            }
        }
        Self::new(m, vals.into_iter().map(|v| BigRational::from_integer(BigInt::from(v.unwrap()))).collect())
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn logs(&self) -> Vec<f64> {
        self.values.iter().map(|v| ln_rational(v)).collect()
    }

    /// The weight of each generator.
    pub fn per_generator(&self, m: &CoxeterMatrix) -> Vec<BigRational> {
        class_index(m).iter().map(|&c| self.values[c].clone()).collect()
    }

    /// Weights of the parabolic subsystem on `t`, whose classes may split.
    pub fn restrict(&self, m: &CoxeterMatrix, t: crate::coxeter::GenSet) -> Result<(CoxeterMatrix, WeightVector)> {
        let sub = m.restrict(t)?;
        let per_gen = self.per_generator(m);
        let idx = class_index(&sub);
        let classes = idx.iter().max().map_or(0, |c| c + 1);
        let mut vals = vec![BigRational::one(); classes];
        for (i, s) in t.iter().enumerate() {
            vals[idx[i]] = per_gen[s].clone();
        }
        let w = WeightVector::new(&sub, vals)?;
        Ok((sub, w))
    }

    /// True when some weight equals 1.
    pub fn is_degenerate(&self) -> bool {
        self.values.iter().any(|v| v.is_one())
    }

    /// Groups classes with equal weights: returns `(group of each class, log of each group)`,
    /// groups ordered by increasing weight.
    pub fn groups(&self) -> (Vec<usize>, Vec<f64>) {
        let mut distinct: Vec<BigRational> = self.values.clone();
        distinct.sort();
        distinct.dedup();
        let group = self.values.iter().map(|v| distinct.binary_search(v).unwrap()).collect();
        (group, distinct.iter().map(ln_rational).collect())
    }
}

pub(crate) fn ln_rational(v: &BigRational) -> f64 {
    let (n, d) = (v.numer(), v.denom());
    let ln_big = |x: &BigInt| -> f64 {
        let bits = x.bits();
        if bits < 1000 {
            x.to_f64().unwrap().ln()
        } else {
            let shift = bits - 900;
            (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        }
    };
    ln_big(n) - ln_big(d)
}

/// `t_w` from a class-type vector.
pub fn weight_of_class_type(class_type: &[u32], t: &WeightVector) -> BigRational {
    class_type.iter().zip(&t.values).fold(BigRational::one(), |acc, (&k, v)| acc * num_traits::pow(v.clone(), k as usize))
}

/// `t_w`: product of class weights along a reduced word of `w`.
pub fn weight_of(m: &CoxeterMatrix, w: &GroupElement, t: &WeightVector) -> BigRational {
    let idx = class_index(m);
    let mut ct = vec![0u32; t.values.len()];
    for &s in w.word() {
        ct[idx[s]] += 1;
    }
    weight_of_class_type(&ct, t)
}

/// Enumeration data for a weight vector: counts by length and weight group, and the
/// counting function `Q_n = #{w : t_w <= e^n}` on its guaranteed-complete range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub radius: usize,
    /// Weight group of each conjugacy class (classes with equal weight share a group).
    pub group_of_class: Vec<usize>,
    /// `log t` of each weight group.
    pub group_logs: Vec<f64>,
    /// Counts per length and per weight-group letter vector.
    pub profile: LengthProfile,
    /// `Q_n` for `n = 0..q_n.len()`, each complete.
    pub q_n: Vec<u64>,
    /// Some weight equals 1, so `Q_n` does not see length.
    pub degenerate: bool,
}

impl GrowthTable {
    /// `c_k` for `k <= radius`.
    pub fn layer_counts(&self) -> Vec<u64> {
        self.profile.totals()
    }

    /// Largest `v` such that every element with `log t_w <= v` is counted.
    pub fn complete_log_range(&self) -> f64 {
        let min = self.group_logs.iter().cloned().fold(f64::INFINITY, f64::min);
        self.radius as f64 * min
    }

    /// Jump points `(v, Q(v))` of the counting function on its complete range.
    pub fn jump_points(&self) -> Vec<(f64, u64)> {
        let v_max = self.complete_log_range();
        let mut pts: Vec<(f64, u64)> = Vec::new();
        for layer in &self.profile.counts {
            for (ct, c) in layer {
                let v: f64 = ct.iter().zip(&self.group_logs).map(|(&k, l)| k as f64 * l).sum();
                if v <= v_max * (1.0 + 1e-12) {
                    pts.push((v, *c));
                }
            }
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, u64)> = Vec::new();
        let mut acc = 0u64;
        for (v, c) in pts {
            acc += c;
            match out.last_mut() {
                Some(last) if (v - last.0).abs() <= 1e-12 * v.abs().max(1.0) => last.1 = acc,
                _ => out.push((v, acc)),
            }
        }
        out
    }
}

/// Enumerates to radius `r` and tabulates `Q_n` for the weights `t`.
pub fn growth_table(m: &CoxeterMatrix, t: &WeightVector, r: usize, limits: Limits) -> Result<GrowthTable> {
    let rep = Representation::new(m)?;
    let (group_of_class, _) = t.groups();
    let class_of = class_index(m);
    let group_of_gen: Vec<usize> = class_of.iter().map(|&c| group_of_class[c]).collect();
    let profile = length_profile_grouped(&rep, m.full_set(), r, limits, &group_of_gen)?;
    Ok(table_from_grouped(t, profile))
}

/// As [`growth_table`], from an already computed per-class profile.
pub fn growth_table_from_profile(t: &WeightVector, per_class: &LengthProfile) -> GrowthTable {
    let (group_of_class, logs) = t.groups();
    table_from_grouped(t, per_class.regroup(&group_of_class, logs.len()))
}

fn table_from_grouped(t: &WeightVector, profile: LengthProfile) -> GrowthTable {
    let (group_of_class, group_logs) = t.groups();
    let degenerate = t.is_degenerate();
    let r = profile.radius;
    let mut table = GrowthTable { radius: r, group_of_class, group_logs, profile, q_n: Vec::new(), degenerate };
    let v_max = table.complete_log_range();
    let jumps = table.jump_points();
    if degenerate {
        let total: u64 = table.profile.totals().iter().sum();
        table.q_n = vec![total];
    } else {
        let n_max = (v_max * (1.0 + 1e-12)).floor() as usize;
        table.q_n = (0..=n_max)
            .map(|n| jumps.iter().take_while(|(v, _)| *v <= n as f64 * (1.0 + 1e-12)).last().map_or(0, |p| p.1))
            .collect();
    }
    table
}
