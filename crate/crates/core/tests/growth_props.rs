mod common;

use std::collections::{HashMap, HashSet};

use common::*;
use coxbuild_core::coxeter::*;
use coxbuild_core::growth::*;
use coxbuild_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Independent sphere counts: breadth-first search over floating-point matrices of the
/// geometric representation, elements identified by rounded entries.
fn float_sphere_counts(m: &CoxeterMatrix, depth: usize) -> Option<Vec<u64>> {
    let n = m.rank();
    let b = |i: usize, j: usize| match m.m(i, j) {
        Order::Finite(1) => 1.0,
        Order::Finite(k) => -(std::f64::consts::PI / k as f64).cos(),
        Order::Infinity => -1.0,
    };
    // sigma_s(e_j) = e_j - 2 B(e_s, e_j) e_s, acting on columns
    let key = |mat: &[f64]| -> Vec<i64> { mat.iter().map(|x| (x * 1e6).round() as i64).collect() };
    let identity: Vec<f64> = (0..n * n).map(|k| if k / n == k % n { 1.0 } else { 0.0 }).collect();
    let mut seen: HashSet<Vec<i64>> = HashSet::from([key(&identity)]);
    let mut layer = vec![identity];
    let mut counts = vec![1u64];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..n {
                // w * sigma_s: column j of w sigma_s = w (sigma_s e_j)
                let mut out = w.clone();
                for j in 0..n {
                    let c = 2.0 * b(s, j);
                    for i in 0..n {
                        out[i * n + j] -= c * w[i * n + s];
                    }
                }
                if seen.insert(key(&out)) {
                    next.push(out);
                }
            }
            if seen.len() > 300_000 {
                return None;
            }
        }
        counts.push(next.len() as u64);
        layer = next;
    }
    Some(counts)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn classes(m: &CoxeterMatrix) -> usize {
    class_index(m).iter().max().map_or(0, |c| c + 1)
}

fn infinite(m: &CoxeterMatrix) -> bool {
    !classify_parabolic(m, m.full_set()).is_finite()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn series_coefficients_match_enumeration(m in matrix_strategy(2..=4)) {
        let series = match rational_growth_series(&m, true, Limits::default()) {
            Ok(s) => s,
            Err(Error::ResourceExceeded(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let depth = 10;
        let taylor = series.taylor(depth).unwrap();
        let rep = Representation::new(&m).unwrap();
        let profile = length_profile(&rep, depth, Limits::default()).unwrap();
        let mut expected: HashMap<Vec<u32>, i128> = HashMap::new();
        for layer in &profile.counts {
            for (ct, c) in layer {
                expected.insert(ct.clone(), *c as i128);
            }
        }
        let got: HashMap<Vec<u32>, i128> = taylor.into_iter().filter(|(_, c)| *c != 0).collect();
        prop_assert_eq!(got, expected);
        if let Some(float_counts) = float_sphere_counts(&m, 8) {
            prop_assert_eq!(&profile.totals()[..=8], &float_counts[..]);
        }
    }

    #[test]
    fn heavier_weights_grow_slower(m in matrix_strategy(3..=4), base in proptest::collection::vec(2i64..5, 4), bump in 0usize..4) {
        prop_assume!(infinite(&m));
        let k = classes(&m);
        let t: Vec<BigRational> = base[..k].iter().map(|&v| rat(v)).collect();
        let mut heavier = t.clone();
        heavier[bump % k] += rat(3);
        let opts = GrowthOptions::default();
        let light = growth_rate(&m, &WeightVector::new(&m, t).unwrap(), opts).unwrap();
        let heavy = growth_rate(&m, &WeightVector::new(&m, heavier).unwrap(), opts).unwrap();
        prop_assert!(light.value + light.uncertainty >= heavy.value - heavy.uncertainty,
            "{light:?} vs {heavy:?}");
    }

    #[test]
    fn powers_of_weights_rescale_the_rate(m in matrix_strategy(3..=4), alpha in prop_oneof![Just((2u32, 1u32)), Just((3, 1)), Just((1, 2))]) {
        prop_assume!(infinite(&m));
        let k = classes(&m);
        let base: Vec<i64> = (0..k).map(|i| [4, 9][i % 2]).collect();
        let pow = |v: i64| -> BigRational {
            let (a, b) = alpha;
            let root = if b == 2 { (v as f64).sqrt().round() as i64 } else { v };
            rat(root.pow(a))
        };
        let t = WeightVector::new(&m, base.iter().map(|&v| rat(v)).collect()).unwrap();
        let ta = WeightVector::new(&m, base.iter().map(|&v| pow(v)).collect()).unwrap();
        let a = alpha.0 as f64 / alpha.1 as f64;
        let opts = GrowthOptions::default();
        let r = growth_rate(&m, &t, opts).unwrap();
        let ra = growth_rate(&m, &ta, opts).unwrap();
        let tol = r.uncertainty / a + ra.uncertainty + 1e-9;
        prop_assert!((ra.value - r.value / a).abs() <= tol, "{r:?} {ra:?} alpha {a}");
    }

    #[test]
    fn convergence_verdicts_are_antitone(value in 0.0f64..3.0, unc in 0.0f64..0.5, x in 0.0f64..4.0, dx in 0.0f64..2.0) {
        let est = GrowthRateEstimate { value, uncertainty: unc, method: RateMethod::EnumerationFit, fit: None };
        if classify_convergence(&est, x) == Convergence::Converges {
            prop_assert_eq!(classify_convergence(&est, x + dx), Convergence::Converges);
        }
        if classify_convergence(&est, x + dx) == Convergence::Diverges {
            prop_assert_eq!(classify_convergence(&est, x), Convergence::Diverges);
        }
    }
}

fn affine_systems() -> Vec<CoxeterMatrix> {
    vec![
        systems::infinite_dihedral(),
        systems::triangle(3, 3, 3),
        systems::triangle(4, 4, 2),
        systems::triangle(6, 3, 2),
        from_upper(4, &[Order::Finite(3), Order::Finite(2), Order::Finite(3), Order::Finite(3), Order::Finite(2), Order::Finite(3)]),
    ]
}

#[test]
fn affine_rates_contain_zero() {
    for m in affine_systems() {
        assert!(is_affine_system(&m), "{}", m.canonical_text());
        let t = WeightVector::uniform(&m, 2).unwrap();
        let r = growth_rate(&m, &t, GrowthOptions::default()).unwrap();
        assert!(r.contains(0.0), "{r:?}");
        let e = entropy(&m, GrowthOptions::default()).unwrap();
        assert!(e.contains(0.0), "{e:?}");
    }
}

#[test]
fn affine_fit_slopes_shrink_with_radius() {
    let m = systems::triangle(3, 3, 3);
    let t = WeightVector::uniform(&m, 2).unwrap();
    let slope = |r: usize| enumeration_fit(&growth_table(&m, &t, r, Limits::default()).unwrap()).unwrap().value.abs();
    let (s12, s24, s36) = (slope(12), slope(24), slope(36));
    assert!(s24 < s12 && s36 < s24, "{s12} {s24} {s36}");
}

#[test]
fn float_oracle_agrees_on_named_systems() {
    for m in [systems::pentagon(), systems::triangle(3, 3, 3), systems::triangle(7, 3, 2), systems::type_a(3)] {
        let rep = Representation::new(&m).unwrap();
        let exact = length_profile(&rep, 9, Limits::default()).unwrap().totals();
        assert_eq!(Some(exact), float_sphere_counts(&m, 9));
    }
}
