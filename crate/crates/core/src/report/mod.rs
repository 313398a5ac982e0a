//! Report assembly for the command-line front end: input documents, per-stage sections,
//! and text and machine renderings.

mod input;
mod text;

use std::path::PathBuf;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::building::{
    critical_exponents, lp_pullback_from_profile, thickness_growth_rate, verify_oracle, CriticalExponents,
    OracleOptions, OracleSummary, RegularBuildingSpec, ThicknessRate,
};
use crate::cache::{cached_length_profile, CacheStatus, GrowthCache};
use crate::coxeter::{
    classify_parabolic, LengthProfile, generator_conjugacy_classes, is_affine_system, CoxeterMatrix, Limits, ParabolicKind,
};
use crate::davis::{bestvina_support_from, davis_chamber, nerve, vcd_real, BestvinaSupport, VcdWitness};
use crate::error::{Error, Result};
use crate::growth::{
    enumeration_fit, entropy, growth_table_from_profile, rational_growth_series, Convergence, GrowthOptions,
    GrowthRateEstimate,
};
use crate::homology::{pm_verdict, PmVerdict};
use crate::hyperbolic::{confdim_bounds, moussong_hyperbolic, ConfdimBoundsReport, ConfdimOptions, HyperbolicityVerdict, Lambda};
use crate::numeric::Quantity;

pub use input::{parse_input, parse_lambda, parse_p_grid, parse_rational, InputSpec, DEFAULT_THICKNESS};
pub use text::render_text;

pub const TOOL_NAME: &str = "coxbuild";
pub const DEFAULT_P_GRID: &str = "1.25,1.5,2,2.25,2.5,3,4";

/// A section that was computed or deliberately skipped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Section<T> {
    Computed { value: T },
    Skipped { reason: String },
}

impl<T> Section<T> {
    pub fn computed(&self) -> Option<&T> {
        match self {
            Section::Computed { value } => Some(value),
            Section::Skipped { .. } => None,
        }
    }
}

/// Errors meaning "does not apply to this input" become skipped sections; resource
/// caps, validation failures and I/O errors propagate.
fn section<T>(r: Result<T>) -> Result<Section<T>> {
    match r {
        Ok(value) => Ok(Section::Computed { value }),
        Err(e @ (Error::ResourceExceeded(_) | Error::RadiusExceeded { .. } | Error::ValidationMismatch(_) | Error::Io(_))) => Err(e),
        Err(e) => Ok(Section::Skipped { reason: e.to_string() }),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportOptions {
    /// Enumeration depth for the fit cross-check and the p-grid partial sums.
    pub depth: usize,
    /// Radius of the explicit building.
    pub radius: usize,
    pub p_grid: Vec<BigRational>,
    pub lambda: Option<Lambda>,
    pub apartment_confdim: Option<f64>,
    pub limits: Limits,
    pub cache_dir: Option<PathBuf>,
    pub timings: bool,
    pub oracle_trials: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            depth: 12,
            radius: 4,
            p_grid: parse_p_grid(DEFAULT_P_GRID).expect("valid default grid"),
            lambda: None,
            apartment_confdim: None,
            limits: Limits::default(),
            cache_dir: None,
            timings: false,
            oracle_trials: 1000,
        }
    }
}

impl ReportOptions {
    fn growth(&self) -> GrowthOptions {
        GrowthOptions { limits: self.limits, fit_depth: self.depth, force_fit: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub generators: Vec<String>,
    pub digest: String,
    /// `(generator, q_s)` in generator order.
    pub thickness: Vec<(String, u64)>,
    pub thickness_given: bool,
    pub lambda: Option<Lambda>,
    pub apartment_confdim: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationSection {
    pub label: String,
    pub kind: ParabolicKind,
    pub affine: bool,
    pub hyperbolicity: HyperbolicityVerdict,
    pub conjugacy_classes: Vec<Vec<String>>,
    pub summary: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NerveSection {
    pub face_counts: Vec<usize>,
    pub pm: PmVerdict,
    pub type_pm: bool,
    pub chamber_face_counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VcdSection {
    pub vcd: usize,
    pub spherical_only: usize,
    pub chamber_dimension: usize,
    pub witnesses: Vec<VcdWitness>,
    pub bestvina: Section<BestvinaSupport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSection {
    /// `W(x) = numerator / denominator` in one variable, common factors cancelled.
    pub numerator: String,
    pub denominator: String,
    /// The same series with one variable `x_i` per generator class.
    pub class_numerator: String,
    pub class_denominator: String,
    pub validated_depth: usize,
    pub layer_counts: Vec<u64>,
    pub entropy: GrowthRateEstimate,
    pub e_q: ThicknessRate,
    /// Independent regression estimate of `e_q` from the enumeration.
    pub e_q_fit: Section<GrowthRateEstimate>,
    /// `Q_n`: number of elements with `q_w <= e^n`, on the range the enumeration covers.
    pub weighted_counts: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub p: String,
    pub p_value: f64,
    pub partial_sum: f64,
    pub exact_partial_sum: Option<String>,
    pub verdict: Convergence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentsSection {
    pub exponents: CriticalExponents,
    /// Convergence of `sum q_w^{1-p}`, partial sums to the enumeration depth.
    pub depth: usize,
    pub grid: Vec<GridRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub tool: String,
    pub version: String,
    pub input: InputEcho,
    pub classification: Option<ClassificationSection>,
    pub nerve: Option<NerveSection>,
    pub vcd: Option<Section<VcdSection>>,
    pub growth: Option<Section<GrowthSection>>,
    pub exponents: Option<Section<ExponentsSection>>,
    pub confdim: Option<Section<ConfdimBoundsReport>>,
    pub oracle: Option<Section<OracleSummary>>,
    pub notes: Vec<String>,
    /// Milliseconds per stage, only when requested.
    pub timings: Option<Vec<(String, f64)>>,
}

/// Which sections to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Classify,
    Nerve,
    Growth,
    Exponents,
    Confdim,
    Oracle,
}

impl Stage {
    pub const FULL: [Stage; 5] = [Stage::Classify, Stage::Nerve, Stage::Growth, Stage::Exponents, Stage::Confdim];
}

struct Clock {
    enabled: bool,
    entries: Vec<(String, f64)>,
}

impl Clock {
    fn run<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.entries.push((name.into(), start.elapsed().as_secs_f64() * 1e3));
        }
        out
    }
}

fn echo(input: &InputSpec) -> InputEcho {
    InputEcho {
        generators: input.matrix.generators().to_vec(),
        digest: input.matrix.digest(),
        thickness: input.matrix.generators().iter().cloned().zip(input.thickness.iter().copied()).collect(),
        thickness_given: input.thickness_given,
        lambda: input.lambda,
        apartment_confdim: input.apartment_confdim,
    }
}

pub fn classification_section(m: &CoxeterMatrix) -> Result<ClassificationSection> {
    let ty = classify_parabolic(m, m.full_set());
    let affine = is_affine_system(m);
    let hyperbolicity = moussong_hyperbolic(m)?;
    let hyp = if hyperbolicity.hyperbolic { "hyperbolic" } else { "not hyperbolic" };
    let label = ty.label();
    let summary = match ty.kind {
        ParabolicKind::Finite => format!("finite ({label}), {hyp}"),
        _ if affine => format!("affine ({label}), {hyp}"),
        _ => format!("infinite, non-affine, {hyp}"),
    };
    let conjugacy_classes = generator_conjugacy_classes(m).into_iter().map(|c| c.names(m.generators())).collect();
    Ok(ClassificationSection { label, kind: ty.kind, affine, hyperbolicity, conjugacy_classes, summary })
}

pub fn nerve_section(m: &CoxeterMatrix) -> Result<NerveSection> {
    let n = nerve(m)?;
    let pm = pm_verdict(&n.complex);
    let chamber = davis_chamber(m)?;
    Ok(NerveSection { face_counts: n.complex.face_counts(), type_pm: pm.is_pm(), pm, chamber_face_counts: chamber.complex.face_counts() })
}

fn vcd_section(spec: &RegularBuildingSpec, opts: &ReportOptions) -> Result<VcdSection> {
    let m = spec.matrix();
    let v = vcd_real(m)?;
    let chamber_dimension = davis_chamber(m)?.dimension();
    let bestvina = section(bestvina_support_from(m, &v, &spec.weights(), opts.growth()))?;
    Ok(VcdSection { vcd: v.d, spherical_only: v.spherical_d, chamber_dimension, witnesses: v.witnesses, bestvina })
}

fn growth_section(spec: &RegularBuildingSpec, opts: &ReportOptions, profile: &LengthProfile) -> Result<GrowthSection> {
    let m = spec.matrix();
    let series = rational_growth_series(m, true, opts.limits)?;
    let uni = series.univariate();
    let entropy = entropy(m, opts.growth())?;
    let e_q = thickness_growth_rate(spec, opts.growth())?;
    let table = growth_table_from_profile(&spec.weights(), profile);
    let e_q_fit = if e_q.value.is_infinite() {
        Section::Skipped { reason: "thin generators span an infinite subgroup".into() }
    } else if profile.exhausted() {
        Section::Skipped { reason: "finite group: no asymptotic regime to fit".into() }
    } else {
        section(enumeration_fit(&table))?
    };
    Ok(GrowthSection {
        numerator: uni.0.to_string(),
        denominator: uni.1.to_string(),
        class_numerator: series.numerator.to_string(),
        class_denominator: series.denominator.to_string(),
        validated_depth: series.validated_depth,
        layer_counts: profile.totals(),
        entropy,
        e_q,
        e_q_fit,
        weighted_counts: table.q_n,
    })
}

fn exponents_section(spec: &RegularBuildingSpec, opts: &ReportOptions, profile: &LengthProfile) -> Result<ExponentsSection> {
    let exponents = critical_exponents(spec, opts.growth())?;
    let e_q = thickness_growth_rate(spec, opts.growth())?;
    let grid = opts
        .p_grid
        .iter()
        .map(|p| {
            let lp = lp_pullback_from_profile(spec, profile, p, e_q.clone())?;
            Ok(GridRow {
                p: p.to_string(),
                p_value: p.to_f64().unwrap_or(f64::NAN),
                partial_sum: *lp.partial_sums.last().unwrap_or(&0.0),
                exact_partial_sum: lp.exact_partial_sums.and_then(|v| v.last().map(|x| x.to_string())),
                verdict: lp.verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExponentsSection { exponents, depth: opts.depth, grid })
}

/// Runs the requested stages on a parsed input.
pub fn build_report(input: &InputSpec, stages: &[Stage], opts: &ReportOptions) -> Result<InvariantReport> {
    run_report(input, stages, opts).map(|(r, _)| r)
}

/// As [`build_report`], also returning how the length-profile cache was used. The
/// status stays out of the report so that warm and cold runs print the same bytes.
pub fn run_report(input: &InputSpec, stages: &[Stage], opts: &ReportOptions) -> Result<(InvariantReport, CacheStatus)> {
    let m = &input.matrix;
    let spec = RegularBuildingSpec::new(m.clone(), input.thickness.clone())?;
    let cache = match &opts.cache_dir {
        Some(dir) => Some(GrowthCache::new(dir)?),
        None => None,
    };
    let mut cache_status = CacheStatus::Disabled;
    let mut profile: Option<LengthProfile> = None;
    let mut load_profile = |clock: &mut Clock| -> Result<LengthProfile> {
        if let Some(p) = &profile {
            return Ok(p.clone());
        }
        let (p, status) = clock.run("profile", || cached_length_profile(m, opts.depth, opts.limits, cache.as_ref()))?;
        cache_status = status;
        profile = Some(p.clone());
        Ok(p)
    };
    let mut clock = Clock { enabled: opts.timings, entries: Vec::new() };
    let mut report = InvariantReport {
        tool: TOOL_NAME.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        input: echo(input),
        classification: None,
        nerve: None,
        vcd: None,
        growth: None,
        exponents: None,
        confdim: None,
        oracle: None,
        notes: Vec::new(),
        timings: None,
    };
    if !input.thickness_given {
        report.notes.push(format!("no thickness given: using q = {DEFAULT_THICKNESS} for every generator"));
    }
    let finite = classify_parabolic(m, m.full_set()).is_finite();
    if finite {
        report.notes.push("finite Weyl group: all higher invariants trivial (growth rate 0, bounded buildings)".into());
    }
    if spec.is_thin() {
        report.notes.push("thin building (some q_s = 1): theorem-grade statements need q >= 2".into());
    }
    for stage in stages {
        match stage {
            Stage::Classify => report.classification = Some(clock.run("classify", || classification_section(m))?),
            Stage::Nerve => {
                report.nerve = Some(clock.run("nerve", || nerve_section(m))?);
                report.vcd = Some(clock.run("vcd", || section(vcd_section(&spec, opts)))?);
            }
            Stage::Growth => {
                let p = load_profile(&mut clock)?;
                report.growth = Some(clock.run("growth", || section(growth_section(&spec, opts, &p)))?)
            }
            Stage::Exponents => {
                let p = load_profile(&mut clock)?;
                report.exponents = Some(clock.run("exponents", || section(exponents_section(&spec, opts, &p)))?)
            }
            Stage::Confdim => {
                let copts = ConfdimOptions {
                    lambda: opts.lambda.or(input.lambda),
                    apartment_confdim: opts.apartment_confdim.or(input.apartment_confdim),
                    growth: opts.growth(),
                };
                report.confdim = Some(clock.run("confdim", || section(confdim_bounds(&spec, &copts)))?);
            }
            Stage::Oracle => {
                let oopts = OracleOptions { radius: opts.radius, trials: opts.oracle_trials, limits: opts.limits, ..Default::default() };
                report.oracle = Some(clock.run("oracle", || section(verify_oracle(&spec, &oopts)))?);
            }
        }
    }
    if opts.timings {
        report.timings = Some(clock.entries);
    }
    drop(load_profile);
    Ok((report, cache_status))
}

/// Machine format: pretty-printed JSON with stable key names.
pub fn render_machine(report: &InvariantReport) -> String {
    serde_json::to_string_pretty(report).expect("reports serialise")
}

pub fn parse_machine(text: &str) -> Result<InvariantReport> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

/// A quantity line for the text format.
pub(crate) fn fmt_quantity(q: &Quantity) -> String {
    q.to_string()
}
