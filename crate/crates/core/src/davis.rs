//! The nerve, the Davis chamber and its mirrors, and the homological dimension data.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::{is_spherical, spherical_subsets, CoxeterMatrix, GenSet};
use crate::error::{Error, Result};
use crate::growth::{growth_rate, GrowthOptions, GrowthRateEstimate, WeightVector};
use crate::homology::{betti, order_complex, pm_verdict, PmVerdict, SimplicialComplex};

/// Largest rank for which every subset of generators is examined.
pub const MAX_SUBSET_RANK: usize = 20;

fn subset_label(m: &CoxeterMatrix, t: GenSet) -> String {
    if t.is_empty() {
        "{}".into()
    } else {
        format!("{{{}}}", t.names(m.generators()).join(","))
    }
}

/// Simplicial complex on the generators whose simplices are the nonempty spherical subsets.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub complex: SimplicialComplex,
    pub simplices: Vec<GenSet>,
}

pub fn nerve(m: &CoxeterMatrix) -> Result<Nerve> {
    let simplices: Vec<GenSet> = spherical_subsets(m).into_iter().filter(|t| !t.is_empty()).collect();
    let complex = SimplicialComplex::from_faces(m.generators().to_vec(), simplices.iter().map(|t| t.iter().collect::<Vec<_>>()))?;
    Ok(Nerve { complex, simplices })
}

/// Pseudomanifold data of the nerve.
pub fn is_type_pm(m: &CoxeterMatrix) -> Result<PmVerdict> {
    Ok(pm_verdict(&nerve(m)?.complex))
}

/// Order complex of the spherical subsets (the empty set included), with mirrors.
#[derive(Clone, Debug)]
pub struct DavisChamber {
    pub complex: SimplicialComplex,
    /// The spherical subset at each vertex, in vertex order.
    pub vertex_sets: Vec<GenSet>,
    rank: usize,
}

pub fn davis_chamber(m: &CoxeterMatrix) -> Result<DavisChamber> {
    let poset = spherical_subsets(m);
    let labels: Vec<String> = poset.iter().map(|&t| subset_label(m, t)).collect();
    let complex = order_complex(labels.clone(), |i, j| i != j && poset[i].is_subset(poset[j]))?;
    let vertex_sets = complex
        .vertices()
        .iter()
        .map(|l| poset[labels.iter().position(|x| x == l).unwrap()])
        .collect();
    let chamber = DavisChamber { complex, vertex_sets, rank: m.rank() };
    let b = betti(&chamber.complex, None);
    if b.first() != Some(&1) || b.iter().skip(1).any(|&x| x != 0) {
        return Err(Error::ValidationMismatch(format!("Davis chamber is not acyclic: betti {b:?}")));
    }
    Ok(chamber)
}

impl DavisChamber {
    pub fn dimension(&self) -> usize {
        self.complex.dimension().unwrap_or(0)
    }

    /// Union of the mirrors of the generators in `t`: chains whose elements all meet `t`
    /// in one common generator.
    pub fn mirror_union(&self, t: GenSet) -> Result<SimplicialComplex> {
        let mut faces: Vec<Vec<usize>> = Vec::new();
        for s in t.iter().filter(|&s| s < self.rank) {
            let verts: Vec<usize> = (0..self.vertex_sets.len()).filter(|&v| self.vertex_sets[v].contains(s)).collect();
            // the mirror is the full subcomplex on `verts`
            for k in 1..=self.complex.dimension().map_or(0, |d| d + 1) {
                for simplex in self.complex.simplices(k - 1) {
                    if simplex.iter().all(|v| verts.binary_search(v).is_ok()) {
                        faces.push(simplex.clone());
                    }
                }
            }
        }
        self.complex.subcomplex(faces)
    }

    pub fn mirror(&self, s: usize) -> Result<SimplicialComplex> {
        self.mirror_union(GenSet::singleton(s))
    }
}

/// A subset `T` whose mirror union gives nonzero relative homology in the top degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcdWitness {
    pub subset: GenSet,
    pub names: Vec<String>,
    pub spherical: bool,
    /// Whether `S \ T` is spherical.
    pub complement_spherical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcdResult {
    /// Maximum over all subsets `T`.
    pub d: usize,
    /// Maximum over spherical `T` only.
    pub spherical_d: usize,
    /// Every `T` with nonzero relative rank in degree `d`.
    pub witnesses: Vec<VcdWitness>,
    /// Relative Betti numbers of `(D, D^T)` for each examined `T`, in subset order.
    pub relative_betti: Vec<(GenSet, Vec<usize>)>,
}

/// `max { n : H_n(D, D^T) != 0 }` over subsets `T`.
pub fn vcd_real(m: &CoxeterMatrix) -> Result<VcdResult> {
    if m.rank() > MAX_SUBSET_RANK {
        return Err(Error::ResourceExceeded(format!("rank {} exceeds {MAX_SUBSET_RANK} for the subset scan", m.rank())));
    }
    let chamber = davis_chamber(m)?;
    let subsets: Vec<GenSet> = m.full_set().subsets().collect();
    let results: Vec<(GenSet, Vec<usize>)> = subsets
        .par_iter()
        .map(|&t| {
            let l = chamber.mirror_union(t)?;
            Ok((t, betti(&chamber.complex, Some(&l))))
        })
        .collect::<Result<_>>()?;
    let top = |b: &[usize]| b.iter().rposition(|&x| x != 0).unwrap_or(0);
    let d = results.iter().map(|(_, b)| top(b)).max().unwrap_or(0);
    let spherical_d = results.iter().filter(|(t, _)| is_spherical(m, *t)).map(|(_, b)| top(b)).max().unwrap_or(0);
    let full = m.full_set();
    let witnesses = results
        .iter()
        .filter(|(_, b)| b.get(d).is_some_and(|&x| x != 0))
        .map(|&(t, _)| VcdWitness {
            subset: t,
            names: t.names(m.generators()),
            spherical: is_spherical(m, t),
            complement_spherical: is_spherical(m, full.difference(t)),
        })
        .collect();
    Ok(VcdResult { d, spherical_d, witnesses, relative_betti: results })
}

/// The spherical set `F_0` and the generator set `S_0` of the top-degree cycle, with the
/// growth rate of the parabolic subgroup on `S_0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestvinaSupport {
    pub f0: GenSet,
    pub s0: GenSet,
    pub f0_names: Vec<String>,
    pub s0_names: Vec<String>,
    /// The witness `T` (with `F_0 = S \ T`) the choice came from.
    pub from_witness: GenSet,
    pub refined_rate: GrowthRateEstimate,
}

pub fn bestvina_support(m: &CoxeterMatrix, q: &WeightVector, opts: GrowthOptions) -> Result<BestvinaSupport> {
    let vcd = vcd_real(m)?;
    bestvina_support_from(m, &vcd, q, opts)
}

/// As [`bestvina_support`], reusing a computed [`VcdResult`].
pub fn bestvina_support_from(m: &CoxeterMatrix, vcd: &VcdResult, q: &WeightVector, opts: GrowthOptions) -> Result<BestvinaSupport> {
    if vcd.d == 0 {
        return Err(Error::NoWitness);
    }
    let full = m.full_set();
    // candidates F_0 = S \ T; maximal under inclusion, then least by generator order
    let candidates: Vec<(GenSet, GenSet)> = vcd
        .witnesses
        .iter()
        .filter(|w| w.complement_spherical)
        .map(|w| (full.difference(w.subset), w.subset))
        .collect();
    let maximal: Vec<(GenSet, GenSet)> = candidates
        .iter()
        .copied()
        .filter(|(f, _)| !candidates.iter().any(|(g, _)| g != f && f.is_subset(*g)))
        .collect();
    let &(f0, from_witness) = maximal
        .iter()
        .min_by_key(|(f, _)| f.iter().collect::<Vec<_>>())
        .ok_or(Error::NoWitness)?;
    let s0 = spherical_subsets(m)
        .into_iter()
        .filter(|&f| f != f0 && f0.is_subset(f))
        .fold(GenSet::EMPTY, |acc, f| acc.union(f.difference(f0)));
    let refined_rate = if s0.is_empty() {
        GrowthRateEstimate { value: 0.0, uncertainty: 0.0, method: crate::growth::RateMethod::SeriesSingularity, fit: None }
    } else {
        let (sub, w) = q.restrict(m, s0)?;
        growth_rate(&sub, &w, opts)?
    };
    Ok(BestvinaSupport {
        f0,
        s0,
        f0_names: f0.names(m.generators()),
        s0_names: s0.names(m.generators()),
        from_witness,
        refined_rate,
    })
}
