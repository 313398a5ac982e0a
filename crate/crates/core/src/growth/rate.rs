//! Weighted growth rates: the series singularity and the enumeration fit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::series::growth_series_grouped;
use super::{growth_table, GrowthTable, WeightVector};
use crate::coxeter::{class_index, is_affine_system, is_spherical, CoxeterMatrix, Limits};
use crate::error::{Error, Result};

/// Scan step along the curve `x -> t^{-x}`.
const SCAN_STEP: f64 = 1e-2;
/// Target half-width of root brackets.
const ROOT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateMethod {
    SeriesSingularity,
    EnumerationFit,
}

/// Regression details of an enumeration fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitDetail {
    pub radius: usize,
    /// `[V/2, V]` with `V` the complete range of `log t_w`.
    pub window: (f64, f64),
    pub points: usize,
    pub parameters: usize,
    pub standard_error: f64,
    /// Change of the slope against the preceding window `[V/4, V/2]`.
    pub drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRateEstimate {
    pub value: f64,
    /// Half-width of the reported bracket.
    pub uncertainty: f64,
    pub method: RateMethod,
    pub fit: Option<FitDetail>,
}

impl GrowthRateEstimate {
    pub fn bracket(&self) -> (f64, f64) {
        (self.value - self.uncertainty, self.value + self.uncertainty)
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.bracket();
        lo <= x && x <= hi
    }

    fn exact(value: f64) -> Self {
        GrowthRateEstimate { value, uncertainty: 0.0, method: RateMethod::SeriesSingularity, fit: None }
    }

    /// The rate for weights raised to the power `alpha`.
    fn scaled(mut self, alpha: f64) -> Self {
        self.value /= alpha;
        self.uncertainty /= alpha;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convergence {
    Converges,
    Diverges,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthOptions {
    pub limits: Limits,
    /// Enumeration radius used by the fit.
    pub fit_depth: usize,
    /// Skip the series and always fit.
    pub force_fit: bool,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions { limits: Limits::default(), fit_depth: 12, force_fit: false }
    }
}

/// `e_t(W)`: the exponential growth rate of `#{w : t_w <= e^n}`.
pub fn growth_rate(m: &CoxeterMatrix, t: &WeightVector, opts: GrowthOptions) -> Result<GrowthRateEstimate> {
    if t.is_degenerate() && !is_spherical(m, m.full_set()) {
        return Err(Error::DegenerateWeights(
            "some weight equals 1; the series substitution t^-x breaks down and the counting function ignores length"
                .into(),
        ));
    }
    if opts.force_fit {
        return enumeration_fit(&growth_table(m, t, opts.fit_depth, opts.limits)?);
    }
    let (groups, logs) = t.groups();
    match series_rate(m, &groups, &logs, opts.limits)? {
        Some(est) => Ok(est),
        None => enumeration_fit(&growth_table(m, t, opts.fit_depth, opts.limits)?),
    }
}

/// `e(W)`: the exponential growth rate of the ball sizes (every weight equal to `e`).
pub fn entropy(m: &CoxeterMatrix, opts: GrowthOptions) -> Result<GrowthRateEstimate> {
    let classes = class_index(m).iter().max().map_or(0, |c| c + 1);
    if !opts.force_fit {
        if let Some(est) = series_rate(m, &vec![0; classes], &[1.0], opts.limits)? {
            return Ok(est);
        }
    }
    // weight 3 has log > 1, so rescale the fitted rate back to unit logs
    let t = WeightVector::uniform(m, 3)?;
    let est = enumeration_fit(&growth_table(m, &t, opts.fit_depth, opts.limits)?)?;
    Ok(est.scaled(1.0 / 3f64.ln()))
}

/// Series-method rate for per-class logs, some of which may be zero. The classes with
/// zero log must generate a finite parabolic subgroup (the caller checks this).
pub(crate) fn rate_from_class_logs(m: &CoxeterMatrix, class_logs: &[f64], limits: Limits) -> Result<Option<GrowthRateEstimate>> {
    let mut distinct: Vec<f64> = class_logs.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let groups: Vec<usize> = class_logs.iter().map(|l| distinct.iter().position(|d| d == l).unwrap()).collect();
    series_rate(m, &groups, &distinct, limits)
}

/// Series method. `None` means the series could not be used and the caller should fit.
fn series_rate(m: &CoxeterMatrix, groups: &[usize], logs: &[f64], limits: Limits) -> Result<Option<GrowthRateEstimate>> {
    if is_spherical(m, m.full_set()) {
        return Ok(Some(GrowthRateEstimate::exact(0.0)));
    }
    let series = match growth_series_grouped(m, groups, limits) {
        Ok(s) => s,
        Err(Error::ResourceExceeded(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let affine = is_affine_system(m);
    if logs.len() == 1 {
        return Ok(univariate_root(&series, logs[0], affine));
    }
    Ok(scan_root(m, &series.denominator, logs, affine))
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

/// Smallest positive root `u_0` of the reduced univariate denominator, as `-ln(u_0)/log t`.
fn univariate_root(series: &super::RationalGrowthSeries, log_t: f64, affine: bool) -> Option<GrowthRateEstimate> {
    let (_, den) = series.univariate();
    let p = den.squarefree();
    let zero = BigRational::zero();
    let one = BigRational::one();
    if p.count_roots(&zero, &one) == 0 {
        return None;
    }
    if p.eval(&one).is_zero() && p.count_roots(&zero, &(&one - BigRational::new(BigInt::one(), BigInt::from(1u64) << 200))) == 0 {
        // the only root in (0, 1] is 1 itself: polynomial growth
        return affine.then(|| GrowthRateEstimate::exact(0.0)).or(Some(GrowthRateEstimate::exact(0.0)));
    }
    let (lo, hi) = p.smallest_root_in(&zero, &one, &BigRational::new(BigInt::one(), BigInt::from(1000)))?;
    let lo_f = lo.to_f64()?.max(f64::MIN_POSITIVE);
    let tol = rational(lo_f * log_t * ROOT_TOLERANCE);
    let (lo, hi) = p.smallest_root_in(&lo, &hi, &tol).unwrap_or((lo, hi));
    let (lo, hi) = (lo.to_f64()?, hi.to_f64()?);
    let x_hi = -lo.ln() / log_t;
    let x_lo = -hi.ln() / log_t;
    let slack = 4.0 * f64::EPSILON * x_hi.abs().max(1.0);
    Some(GrowthRateEstimate {
        value: 0.5 * (x_lo + x_hi),
        uncertainty: 0.5 * (x_hi - x_lo) + slack,
        method: RateMethod::SeriesSingularity,
        fit: None,
    })
}

/// Whether `P(t^{-x})` is certainly positive, by outward-rounded evaluation.
fn certainly_positive(den: &crate::poly::MultiPoly, logs: &[f64], x: f64) -> bool {
    let mut sum = 0.0f64;
    let mut err = 0.0f64;
    let mut mag = 0.0f64;
    for (e, c) in den.terms() {
        let arg: f64 = e.iter().zip(logs).map(|(&k, l)| k as f64 * l).sum::<f64>() * x;
        let term = c as f64 * (-arg).exp();
        sum += term;
        mag += term.abs();
        err += term.abs() * (arg.abs() + 8.0) * 4.0 * f64::EPSILON;
    }
    let bound = err + mag * (den.terms().count() as f64 + 2.0) * f64::EPSILON;
    sum - bound > 0.0
}

/// Sign scan downward from a safe upper bound, then bisection.
fn scan_root(m: &CoxeterMatrix, den: &crate::poly::MultiPoly, logs: &[f64], affine: bool) -> Option<GrowthRateEstimate> {
    let at_one = den.value_at_ones();
    if at_one == 0 && affine {
        return Some(GrowthRateEstimate::exact(0.0));
    }
    if at_one >= 0 {
        return None;
    }
    // zero logs (thin generators) do not bound the scan
    let min_log = logs.iter().cloned().filter(|&l| l > 0.0).fold(f64::INFINITY, f64::min);
    let x_top = ((m.rank().saturating_sub(1)).max(2) as f64).ln() / min_log + 1.0;
    if !certainly_positive(den, logs, x_top) {
        return None;
    }
    let positive = |x: f64| if x <= 0.0 { false } else { certainly_positive(den, logs, x) };
    let mut hi = x_top;
    let mut lo;
    loop {
        lo = (hi - SCAN_STEP).max(0.0);
        if !positive(lo) {
            break;
        }
        hi = lo;
    }
    while hi - lo > 2.0 * ROOT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if positive(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(GrowthRateEstimate {
        value: 0.5 * (lo + hi),
        uncertainty: 0.5 * (hi - lo),
        method: RateMethod::SeriesSingularity,
        fit: None,
    })
}

/// Least squares of `log Q` on `(1, v, log v)` (or `(1, v)` with few points);
/// returns `(slope, standard error)`.
fn regress(points: &[(f64, u64)]) -> Option<(f64, f64, usize)> {
    let n = points.len();
    if n < 3 {
        return None;
    }
    let p = if n >= 6 { 3 } else { 2 };
    let mean_v = points.iter().map(|q| q.0).sum::<f64>() / n as f64;
    let mean_l = points.iter().map(|q| q.0.ln()).sum::<f64>() / n as f64;
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|&(v, _)| {
            let mut r = vec![1.0, v - mean_v];
            if p == 3 {
                r.push(v.ln() - mean_l);
            }
            r
        })
        .collect();
    let y: Vec<f64> = points.iter().map(|&(_, q)| (q as f64).ln()).collect();
    let mut ata = vec![vec![0.0; p]; p];
    let mut aty = vec![0.0; p];
    for (r, &yi) in rows.iter().zip(&y) {
        for i in 0..p {
            aty[i] += r[i] * yi;
            for j in 0..p {
                ata[i][j] += r[i] * r[j];
            }
        }
    }
    let inv = invert(&ata)?;
    let beta: Vec<f64> = (0..p).map(|i| (0..p).map(|j| inv[i][j] * aty[j]).sum()).collect();
    let rss: f64 = rows
        .iter()
        .zip(&y)
        .map(|(r, &yi)| {
            let f: f64 = r.iter().zip(&beta).map(|(a, b)| a * b).sum();
            (yi - f).powi(2)
        })
        .sum();
    let sigma2 = if n > p { rss / (n - p) as f64 } else { 0.0 };
    Some((beta[1], (sigma2 * inv[1][1]).max(0.0).sqrt(), p))
}

fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        let d = m[col][col];
        for x in m[col].iter_mut() {
            *x /= d;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                if f != 0.0 {
                    let pivot_row = m[col].clone();
                    for (x, pv) in m[r].iter_mut().zip(pivot_row) {
                        *x -= f * pv;
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Regression estimate of `e_t` from the counting function on its complete range.
pub fn enumeration_fit(table: &GrowthTable) -> Result<GrowthRateEstimate> {
    if table.degenerate {
        return Err(Error::DegenerateWeights("a weight equals 1: log t = 0 gives no complete range".into()));
    }
    let v_max = table.complete_log_range();
    let jumps = table.jump_points();
    let in_window = |a: f64, b: f64| -> Vec<(f64, u64)> {
        jumps.iter().copied().filter(|&(v, _)| v >= a * (1.0 - 1e-12) && v <= b * (1.0 + 1e-12) && v > 0.0).collect()
    };
    let main = in_window(v_max / 2.0, v_max);
    let (slope, se, params) = regress(&main).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "enumeration radius {} leaves only {} points in the fit window; increase the depth",
            table.radius,
            main.len()
        ))
    })?;
    let drift = match regress(&in_window(v_max / 4.0, v_max / 2.0)) {
        Some((prev, _, _)) => (slope - prev).abs(),
        None => slope.abs(),
    };
    Ok(GrowthRateEstimate {
        value: slope,
        uncertainty: 3.0 * se + drift,
        method: RateMethod::EnumerationFit,
        fit: Some(FitDetail {
            radius: table.radius,
            window: (v_max / 2.0, v_max),
            points: main.len(),
            parameters: params,
            standard_error: se,
            drift,
        }),
    })
}

/// Convergence of `W(t^{-x})`, undecided within the estimate's uncertainty.
pub fn classify_convergence(est: &GrowthRateEstimate, x: f64) -> Convergence {
    if x > est.value + est.uncertainty {
        Convergence::Converges
    } else if x < est.value - est.uncertainty {
        Convergence::Diverges
    } else {
        Convergence::Indeterminate
    }
}

/// `[e(W)/log t_max, e(W)/log t_min]`, widened by the uncertainty of `e(W)`.
pub fn rate_comparison_bounds(m: &CoxeterMatrix, t: &WeightVector, opts: GrowthOptions) -> Result<(f64, f64)> {
    if t.is_degenerate() {
        return Err(Error::DegenerateWeights("comparison bounds need every weight > 1".into()));
    }
    let e = entropy(m, opts)?;
    let logs = t.logs();
    let lmin = logs.iter().cloned().fold(f64::INFINITY, f64::min);
    let lmax = logs.iter().cloned().fold(0.0, f64::max);
    Ok(((e.value - e.uncertainty).max(0.0) / lmax, (e.value + e.uncertainty) / lmin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::systems::*;

    fn golden_entropy() -> f64 {
        ((3.0 + 5f64.sqrt()) / 2.0).ln()
    }

    #[test]
    fn pentagon_entropy_from_series() {
        let e = entropy(&pentagon(), GrowthOptions::default()).unwrap();
        assert_eq!(e.method, RateMethod::SeriesSingularity);
        assert!(e.uncertainty <= 1e-9);
        assert!((e.value - golden_entropy()).abs() < 1e-8);
    }

    #[test]
    fn pentagon_weight_two() {
        let m = pentagon();
        let t = WeightVector::uniform(&m, 2).unwrap();
        let e = growth_rate(&m, &t, GrowthOptions::default()).unwrap();
        assert!((e.value - golden_entropy() / 2f64.ln()).abs() < 1e-8);
        assert_eq!(classify_convergence(&e, 1.0), Convergence::Diverges);
        assert_eq!(classify_convergence(&e, 1.5), Convergence::Converges);
        assert_eq!(classify_convergence(&e, e.value), Convergence::Indeterminate);
    }

    #[test]
    fn mixed_weights_scan_inside_bounds() {
        let m = pentagon();
        let t = WeightVector::from_generators(&m, &[2, 2, 2, 2, 4]).unwrap();
        let e = growth_rate(&m, &t, GrowthOptions::default()).unwrap();
        assert_eq!(e.method, RateMethod::SeriesSingularity);
        let (lo, hi) = rate_comparison_bounds(&m, &t, GrowthOptions::default()).unwrap();
        assert!(lo <= e.value && e.value <= hi, "{lo} {} {hi}", e.value);
        assert!(e.uncertainty <= 1e-9);
    }

    #[test]
    fn affine_and_finite_rates_vanish() {
        for m in [infinite_dihedral(), triangle(3, 3, 3), triangle(4, 4, 2)] {
            let t = WeightVector::uniform(&m, 2).unwrap();
            let e = growth_rate(&m, &t, GrowthOptions::default()).unwrap();
            assert_eq!(e.value, 0.0, "{m:?}");
        }
        let t = WeightVector::uniform(&type_a(3), 2).unwrap();
        assert_eq!(growth_rate(&type_a(3), &t, GrowthOptions::default()).unwrap().value, 0.0);
    }

    #[test]
    fn unit_weight_is_rejected() {
        let m = pentagon();
        let t = WeightVector::uniform(&m, 1).unwrap();
        assert!(matches!(growth_rate(&m, &t, GrowthOptions::default()), Err(Error::DegenerateWeights(_))));
    }

    #[test]
    fn fit_tracks_series() {
        let m = pentagon();
        let t = WeightVector::uniform(&m, 2).unwrap();
        let fit = growth_rate(&m, &t, GrowthOptions { force_fit: true, ..Default::default() }).unwrap();
        assert_eq!(fit.method, RateMethod::EnumerationFit);
        assert!(fit.contains(golden_entropy() / 2f64.ln()), "{fit:?}");
    }
}
