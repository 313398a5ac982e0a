//! Hyperbolicity of Coxeter groups, Hausdorff dimensions of visual boundaries, and
//! conformal-dimension bounds for building boundaries.

use serde::{Deserialize, Serialize};

use crate::building::{thickness_growth_rate, RegularBuildingSpec};
use crate::coxeter::{classify_parabolic, diagram_components, is_spherical, ComponentClass, CoxeterMatrix, GenSet};
use crate::davis::{is_type_pm, vcd_real, MAX_SUBSET_RANK};
use crate::error::{Error, Result};
use crate::growth::{GrowthOptions, GrowthRateEstimate};
use crate::numeric::{Extended, Method, Quantity};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Obstruction {
    /// An irreducible affine parabolic subsystem of rank at least 3.
    AffineRank3 { subset: GenSet, names: Vec<String>, label: String },
    /// Two disjoint infinite parabolic subsystems commuting with each other.
    CommutingInfinitePair { first: GenSet, second: GenSet, first_names: Vec<String>, second_names: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicityVerdict {
    pub hyperbolic: bool,
    pub obstruction: Option<Obstruction>,
}

fn index_list(t: GenSet) -> Vec<usize> {
    t.iter().collect()
}

/// Two-clause hyperbolicity test; reports the least witness of the first failing clause.
pub fn moussong_hyperbolic(m: &CoxeterMatrix) -> Result<HyperbolicityVerdict> {
    if m.rank() > MAX_SUBSET_RANK {
        return Err(Error::ResourceExceeded(format!("rank {} exceeds {MAX_SUBSET_RANK} for the subset search", m.rank())));
    }
    let subsets: Vec<GenSet> = m.full_set().subsets().collect();
    let affine = subsets
        .iter()
        .copied()
        .filter(|t| t.len() >= 3 && diagram_components(m, *t).len() == 1)
        .filter(|t| classify_parabolic(m, *t).components.iter().all(|c| c.class == ComponentClass::Affine))
        .min_by_key(|t| index_list(*t));
    if let Some(t) = affine {
        let label = classify_parabolic(m, t).label();
        return Ok(HyperbolicityVerdict {
            hyperbolic: false,
            obstruction: Some(Obstruction::AffineRank3 { subset: t, names: t.names(m.generators()), label }),
        });
    }
    // any infinite parabolic contains a minimal non-spherical subset
    let minimal: Vec<GenSet> = subsets
        .iter()
        .copied()
        .filter(|&t| !is_spherical(m, t) && t.iter().all(|s| is_spherical(m, t.without(s))))
        .collect();
    let mut pair: Option<(GenSet, GenSet)> = None;
    for &a in &minimal {
        for &b in &minimal {
            if !a.intersection(b).is_empty() || index_list(a) >= index_list(b) {
                continue;
            }
            if a.iter().all(|s| b.iter().all(|t| m.commute(s, t))) {
                let key = (index_list(a), index_list(b));
                if pair.map_or(true, |(x, y)| key < (index_list(x), index_list(y))) {
                    pair = Some((a, b));
                }
            }
        }
    }
    Ok(match pair {
        Some((a, b)) => HyperbolicityVerdict {
            hyperbolic: false,
            obstruction: Some(Obstruction::CommutingInfinitePair {
                first: a,
                second: b,
                first_names: a.names(m.generators()),
                second_names: b.names(m.generators()),
            }),
        },
        None => HyperbolicityVerdict { hyperbolic: true, obstruction: None },
    })
}

/// The visual parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Lambda {
    Value(f64),
    /// `exp(e_q(W))`, for which the apartment boundary has Hausdorff dimension 1.
    Bourdon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    UserSupplied,
    VcdFloor,
    FuchsianExact,
    BourdonPreset,
}

/// Checks hyperbolicity and thickness, and returns a positive finite `e_q`.
fn hyperbolic_rate(spec: &RegularBuildingSpec, opts: GrowthOptions) -> Result<GrowthRateEstimate> {
    let m = spec.matrix();
    if let Some(o) = moussong_hyperbolic(m)?.obstruction {
        return Err(Error::NotHyperbolic(format!("{o:?}")));
    }
    if spec.is_thin() {
        return Err(Error::ThinBuilding("boundary dimensions need q >= 2".into()));
    }
    let rate = thickness_growth_rate(spec, opts)?;
    let e = rate.estimate.expect("thick buildings have a finite rate");
    if e.value - e.uncertainty <= 0.0 {
        return Err(Error::AffineDegenerate);
    }
    Ok(e)
}

fn resolve_lambda(lambda: Lambda, e: &GrowthRateEstimate) -> Result<(f64, f64)> {
    // returns (log λ, its uncertainty)
    match lambda {
        Lambda::Bourdon => Ok((e.value, e.uncertainty)),
        Lambda::Value(l) if l > 1.0 && l.is_finite() => Ok((l.ln(), 0.0)),
        Lambda::Value(l) => Err(Error::InvalidArgument(format!("lambda must be a finite real > 1, got {l}"))),
    }
}

fn ratio(num: f64, dnum: f64, den: f64, dden: f64) -> Quantity {
    let value = num / den;
    // identical errors cancel for the preset; bound them independently otherwise
    let unc = if dnum == 0.0 && dden == 0.0 { 0.0 } else { (dnum + value.abs() * dden) / (den - dden).max(f64::MIN_POSITIVE) };
    Quantity { value: Extended::Finite(value), uncertainty: unc, method: Method::Derived }
}

/// `Hausdim(∂Σ, d_q) = e_q(W) / log λ`.
pub fn coornaert_hausdim(spec: &RegularBuildingSpec, lambda: Lambda, opts: GrowthOptions) -> Result<Quantity> {
    let e = hyperbolic_rate(spec, opts)?;
    if lambda == Lambda::Bourdon {
        return Ok(Quantity::exact(Extended::Finite(1.0)));
    }
    let (ll, dll) = resolve_lambda(lambda, &e)?;
    Ok(ratio(e.value, e.uncertainty, ll, dll))
}

/// `(1 + e_q(W)) / log λ`, the upper bound for the building boundary.
pub fn building_hausdim_upper(spec: &RegularBuildingSpec, lambda: Lambda, opts: GrowthOptions) -> Result<Quantity> {
    let e = hyperbolic_rate(spec, opts)?;
    upper_from_rate(&e, lambda)
}

fn upper_from_rate(e: &GrowthRateEstimate, lambda: Lambda) -> Result<Quantity> {
    if lambda == Lambda::Bourdon {
        let x = Extended::Finite(e.value).one_plus_reciprocal().finite().unwrap();
        let unc = e.uncertainty / (e.value * (e.value - e.uncertainty));
        return Ok(Quantity { value: Extended::Finite(x), uncertainty: unc, method: Method::Derived });
    }
    let (ll, dll) = resolve_lambda(lambda, e)?;
    Ok(ratio(1.0 + e.value, e.uncertainty, ll, dll))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfdimOptions {
    pub lambda: Option<Lambda>,
    pub apartment_confdim: Option<f64>,
    pub growth: GrowthOptions,
}

/// A bound with where its apartment input came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: Quantity,
    pub provenance: Provenance,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum UpperBound {
    Concrete(Bound),
    /// No λ given: the bound is `numerator / log λ`.
    Symbolic { numerator: Quantity, formula: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfdimBoundsReport {
    pub e_q: GrowthRateEstimate,
    /// `1 + 1/e_q`.
    pub factor: Quantity,
    pub vcd: usize,
    pub lower: Bound,
    /// The weaker floor `(vcd - 1)(1 + 1/e_q)`, always reported.
    pub vcd_floor: Quantity,
    pub upper: UpperBound,
    pub fuchsian: Option<FuchsianReport>,
}

fn scaled(q: Quantity, by: f64) -> Quantity {
    Quantity {
        value: q.value.finite().map_or(Extended::Infinity, |v| Extended::Finite(v * by)),
        uncertainty: q.uncertainty * by.abs(),
        method: Method::Derived,
    }
}

pub fn confdim_bounds(spec: &RegularBuildingSpec, opts: &ConfdimOptions) -> Result<ConfdimBoundsReport> {
    let e = hyperbolic_rate(spec, opts.growth)?;
    let factor = upper_from_rate(&e, Lambda::Bourdon)?;
    let vcd = vcd_real(spec.matrix())?.d;
    let vcd_floor = scaled(factor, vcd.saturating_sub(1) as f64);
    let lower = match opts.apartment_confdim {
        Some(a) if a.is_finite() && a >= 0.0 => Bound {
            value: scaled(factor, a),
            provenance: Provenance::UserSupplied,
            formula: format!("{a} * (1 + 1/e_q)"),
        },
        Some(a) => return Err(Error::InvalidArgument(format!("apartment conformal dimension must be finite and >= 0, got {a}"))),
        None => Bound {
            value: vcd_floor,
            provenance: Provenance::VcdFloor,
            formula: format!("(vcd - 1) * (1 + 1/e_q) with vcd = {vcd}"),
        },
    };
    let upper = match opts.lambda {
        Some(l) => Bound {
            value: upper_from_rate(&e, l)?,
            provenance: if l == Lambda::Bourdon { Provenance::BourdonPreset } else { Provenance::UserSupplied },
            formula: "(1 + e_q) / log λ".into(),
        }
        .into(),
        None => UpperBound::Symbolic {
            numerator: Quantity { value: Extended::Finite(1.0 + e.value), uncertainty: e.uncertainty, method: Method::Derived },
            formula: "(1 + e_q) / log λ".into(),
        },
    };
    let fuchsian = fuchsian_report(spec, opts.growth)?;
    Ok(ConfdimBoundsReport { e_q: e, factor, vcd, lower, vcd_floor, upper, fuchsian })
}

impl From<Bound> for UpperBound {
    fn from(b: Bound) -> Self {
        UpperBound::Concrete(b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PRange {
    BelowThreshold,
    AboveThreshold,
}

/// One line of the vanishing table: `l^p H^degree` (reduced when `reduced`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingRow {
    pub degree: usize,
    pub range: PRange,
    pub reduced: bool,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuchsianReport {
    /// `1 + 1/e_q`.
    pub confdim: Quantity,
    pub detection: String,
    pub table: Vec<VanishingRow>,
}

/// Conformal dimension and degree 1/2 vanishing for polygon groups: nerve a circle and
/// the group hyperbolic. `None` when detection fails.
pub fn fuchsian_report(spec: &RegularBuildingSpec, opts: GrowthOptions) -> Result<Option<FuchsianReport>> {
    let m = spec.matrix();
    let pm = is_type_pm(m)?;
    let circle = pm.top_dimension == Some(1) && pm.pseudomanifold && pm.gallery_connected;
    if !circle || !moussong_hyperbolic(m)?.hyperbolic || spec.is_thin() {
        return Ok(None);
    }
    let e = hyperbolic_rate(spec, opts)?;
    let confdim = upper_from_rate(&e, Lambda::Bourdon)?;
    let row = |degree, range, reduced, vanishes| VanishingRow { degree, range, reduced, vanishes };
    let table = vec![
        row(1, PRange::BelowThreshold, false, true),
        row(2, PRange::BelowThreshold, true, false),
        row(1, PRange::AboveThreshold, false, false),
        row(2, PRange::AboveThreshold, false, true),
    ];
    Ok(Some(FuchsianReport { confdim, detection: "combinatorial criterion: nerve is a circle and the group is hyperbolic".into(), table }))
}
