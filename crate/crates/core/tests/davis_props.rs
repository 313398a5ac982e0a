mod common;

use common::*;
use coxbuild_core::coxeter::*;
use coxbuild_core::davis::*;
use coxbuild_core::growth::{growth_rate, GrowthOptions, WeightVector};
use coxbuild_core::homology::{betti, order_complex};
use proptest::prelude::*;

/// Nonempty spherical subsets found by exhausting each parabolic subgroup.
fn spherical_by_enumeration(m: &CoxeterMatrix) -> Vec<GenSet> {
    let rep = Representation::new(m).unwrap();
    let limits = Limits { max_elements: 20_000, ..Limits::default() };
    m.full_set()
        .subsets()
        .filter(|t| !t.is_empty())
        .filter(|&t| ball_enumerate_parabolic(&rep, t, 64, limits).is_ok_and(|b| b.exhausted))
        .collect()
}

/// Number of strictly increasing chains of each length in a family of sets.
fn chain_counts(faces: &[GenSet]) -> Vec<usize> {
    let mut sorted = faces.to_vec();
    sorted.sort_by_key(|t| t.len());
    // ending[i][k]: chains with k+1 elements ending at sorted[i]
    let mut ending: Vec<Vec<usize>> = Vec::new();
    for (i, &f) in sorted.iter().enumerate() {
        let mut row = vec![1usize];
        for (j, &g) in sorted[..i].iter().enumerate() {
            if g != f && g.is_subset(f) {
                for (k, &c) in ending[j].iter().enumerate() {
                    if row.len() <= k + 1 {
                        row.resize(k + 2, 0);
                    }
                    row[k + 1] += c;
                }
            }
        }
        ending.push(row);
    }
    let len = ending.iter().map(Vec::len).max().unwrap_or(0);
    (0..len).map(|k| ending.iter().map(|r| r.get(k).copied().unwrap_or(0)).sum()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn chamber_is_the_cone_on_the_subdivided_nerve(m in matrix_strategy(2..=4)) {
        let faces = spherical_by_enumeration(&m);
        let n = nerve(&m).unwrap();
        let mut ours = n.simplices.clone();
        ours.sort();
        let mut theirs = faces.clone();
        theirs.sort();
        prop_assert_eq!(ours, theirs);
        let chains = chain_counts(&faces);
        let sd = order_complex(
            faces.iter().map(|t| format!("{:?}", t.names(m.generators()))).collect::<Vec<_>>(),
            |i, j| i != j && faces[i].is_subset(faces[j]),
        ).unwrap();
        prop_assert_eq!(sd.face_counts(), chains.clone());
        let chamber = davis_chamber(&m).unwrap();
        // cone: one apex, and every chain of the subdivision spans a simplex with it
        let mut cone = vec![1 + chains[0]];
        for k in 1..=chains.len() {
            cone.push(chains.get(k).copied().unwrap_or(0) + chains[k - 1]);
        }
        prop_assert_eq!(chamber.complex.face_counts(), cone);
        let b = betti(&chamber.complex, None);
        prop_assert_eq!(b[0], 1);
        prop_assert!(b[1..].iter().all(|&x| x == 0));
    }

    #[test]
    fn vcd_is_bounded_by_the_chamber_dimension(m in matrix_strategy(2..=5)) {
        let v = vcd_real(&m).unwrap();
        let dim = davis_chamber(&m).unwrap().dimension();
        prop_assert!(v.d <= dim);
        prop_assert!(v.spherical_d <= v.d);
        if classify_parabolic(&m, m.full_set()).is_finite() {
            prop_assert_eq!(v.d, 0);
        }
        let pm = is_type_pm(&m).unwrap();
        if pm.is_pm() && !classify_parabolic(&m, m.full_set()).is_finite() {
            prop_assert_eq!(v.d, dim);
            prop_assert!(v.witnesses.iter().any(|w| w.subset == m.full_set()));
        }
    }

    #[test]
    fn parabolic_subsystems_have_smaller_vcd(m in matrix_strategy(2..=4)) {
        let whole = vcd_real(&m).unwrap().d;
        for t in m.full_set().subsets().filter(|t| !t.is_empty()) {
            let sub = m.restrict(t).unwrap();
            prop_assert!(vcd_real(&sub).unwrap().d <= whole);
        }
    }

    #[test]
    fn refined_rate_is_at_most_the_full_rate(m in matrix_strategy(3..=4)) {
        prop_assume!(!classify_parabolic(&m, m.full_set()).is_finite());
        let q = WeightVector::uniform(&m, 2).unwrap();
        let opts = GrowthOptions::default();
        let b = bestvina_support(&m, &q, opts).unwrap();
        let full = growth_rate(&m, &q, opts).unwrap();
        prop_assert!(b.refined_rate.value <= full.value + full.uncertainty + b.refined_rate.uncertainty);
        prop_assert!(b.f0.intersection(b.s0).is_empty());
        prop_assert!(classify_parabolic(&m, b.f0).is_finite());
        // every generator of S_0 extends F_0 to a spherical subset
        for s in b.s0.iter() {
            prop_assert!(classify_parabolic(&m, b.f0.with(s)).is_finite());
        }
    }
}

#[test]
fn named_vcd_values() {
    for (m, d) in [
        (systems::infinite_dihedral(), 1),
        (systems::triangle(3, 3, 3), 2),
        (systems::pentagon(), 2),
        (systems::triangle(7, 3, 2), 2),
        (systems::commuting_infinite_dihedrals(), 2),
        (systems::type_a(3), 0),
    ] {
        assert_eq!(vcd_real(&m).unwrap().d, d, "{}", m.canonical_text());
    }
}
