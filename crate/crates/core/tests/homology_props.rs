use std::collections::HashMap;

use coxbuild_core::homology::*;
use proptest::prelude::*;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Rank of an integer matrix by row elimination with gcd steps (no division), the way
/// a Smith normal form computation proceeds.
fn integer_rank(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        loop {
            // smallest nonzero pivot below `rank`
            let pivot = (rank..rows.len()).filter(|&r| rows[r][c] != 0).min_by_key(|&r| rows[r][c].abs());
            let Some(p) = pivot else { break };
            rows.swap(rank, p);
            let mut done = true;
            for r in rank + 1..rows.len() {
                if rows[r][c] != 0 {
                    let q = rows[r][c] / rows[rank][c];
                    for k in c..cols {
                        rows[r][k] -= q * rows[rank][k];
                    }
                    if rows[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                rank += 1;
                break;
            }
        }
        for row in rows.iter_mut() {
            let g = row.iter().fold(0, |g, &x| gcd(g, x));
            if g > 1 {
                row.iter_mut().for_each(|x| *x /= g);
            }
        }
    }
    rank
}

/// Betti numbers of `(k, l)` from dense boundary matrices built here from the simplex lists.
fn oracle_betti(k: &SimplicialComplex, l: Option<&SimplicialComplex>) -> Vec<usize> {
    let top = k.dimension().map_or(0, |d| d + 1);
    let cells: Vec<Vec<Vec<usize>>> = (0..top)
        .map(|d| k.simplices(d).iter().filter(|s| !l.is_some_and(|l| l.contains(s))).cloned().collect())
        .collect();
    let mut ranks = vec![0usize; top + 1];
    for d in 1..top {
        let row_of: HashMap<&Vec<usize>, usize> = cells[d - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut m = vec![vec![0i128; cells[d].len()]; cells[d - 1].len()];
        for (c, s) in cells[d].iter().enumerate() {
            for j in 0..s.len() {
                let mut face = s.clone();
                face.remove(j);
                if let Some(&r) = row_of.get(&face) {
                    m[r][c] = if j % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        ranks[d] = integer_rank(m);
    }
    (0..top).map(|d| cells[d].len() - ranks[d] - ranks[d + 1]).collect()
}

fn complex_strategy() -> impl Strategy<Value = SimplicialComplex> {
    (3usize..=7).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::btree_set(0..n, 1..=4), 1..8).prop_map(move |faces| {
            let faces: Vec<Vec<usize>> = faces.into_iter().map(|f| f.into_iter().collect()).collect();
            SimplicialComplex::from_faces(names(n), faces).unwrap()
        })
    })
}

fn surfaces() -> Vec<(SimplicialComplex, bool)> {
    let octahedron: Vec<[usize; 3]> = vec![[0, 2, 4], [0, 2, 5], [0, 3, 4], [0, 3, 5], [1, 2, 4], [1, 2, 5], [1, 3, 4], [1, 3, 5]];
    let torus: Vec<[usize; 3]> = (0..7).flat_map(|i| [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 2) % 7, (i + 3) % 7]]).collect();
    let rp2: Vec<[usize; 3]> = vec![
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
        [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
    ];
    vec![
        (SimplicialComplex::from_faces(names(6), octahedron).unwrap(), true),
        (SimplicialComplex::from_faces(names(7), torus).unwrap(), true),
        (SimplicialComplex::from_faces(names(6), rp2).unwrap(), false),
    ]
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn betti_numbers_match_integer_elimination(k in complex_strategy(), keep in proptest::collection::vec(any::<bool>(), 8)) {
        prop_assert!(k.len() <= 200);
        prop_assert_eq!(betti(&k, None), oracle_betti(&k, None));
        let sub: Vec<Vec<usize>> = k.maximal_simplices().into_iter().zip(&keep).filter(|(_, &b)| b).map(|(s, _)| s[..s.len() - 1].to_vec()).filter(|s| !s.is_empty()).collect();
        let l = k.subcomplex(sub).unwrap();
        prop_assert_eq!(betti(&k, Some(&l)), oracle_betti(&k, Some(&l)));
    }

    #[test]
    fn euler_characteristic_from_betti(k in complex_strategy()) {
        let b = betti(&k, None);
        let chi: i64 = b.iter().enumerate().map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        prop_assert_eq!(chi, k.euler_characteristic());
    }

    #[test]
    fn fundamental_cycles_are_cycles(k in complex_strategy()) {
        let v = pm_verdict(&k);
        check_cycle(&k, &v);
    }

    #[test]
    fn pm_flags_survive_relabelling(which in 0usize..3, perm in permutation(7)) {
        let (k, orientable) = surfaces().swap_remove(which);
        let n = k.vertices().len();
        let perm: Vec<usize> = perm.into_iter().filter(|&i| i < n).collect();
        let v = pm_verdict(&k);
        let w = pm_verdict(&k.relabel(&perm).unwrap());
        prop_assert_eq!(v.orientable, orientable);
        prop_assert_eq!((v.pseudomanifold, v.gallery_connected, v.orientable, v.top_dimension),
            (w.pseudomanifold, w.gallery_connected, w.orientable, w.top_dimension));
        check_cycle(&k.relabel(&perm).unwrap(), &w);
    }

    #[test]
    fn random_relabelling_keeps_verdicts(k in complex_strategy(), perm in permutation(7)) {
        let n = k.vertices().len();
        let perm: Vec<usize> = perm.into_iter().filter(|&i| i < n).collect();
        let r = k.relabel(&perm).unwrap();
        let (v, w) = (pm_verdict(&k), pm_verdict(&r));
        prop_assert_eq!((v.purely_dimensional, v.pseudomanifold, v.gallery_connected, v.orientable),
            (w.purely_dimensional, w.pseudomanifold, w.gallery_connected, w.orientable));
        prop_assert_eq!(betti(&k, None), betti(&r, None));
    }
}

fn check_cycle(k: &SimplicialComplex, v: &PmVerdict) {
    if !v.orientable {
        assert!(v.fundamental_cycle.is_none());
        return;
    }
    let n = v.top_dimension.unwrap();
    let cycle = v.fundamental_cycle.as_ref().unwrap();
    assert_eq!(cycle.len(), k.simplices(n).len());
    assert!(cycle.iter().all(|&c| c == 1 || c == -1));
    let chain: Vec<(usize, i64)> = cycle.iter().enumerate().map(|(i, &c)| (i, c as i64)).collect();
    assert!(ChainComplex::new(k, None).apply(n, &chain).is_empty());
    assert!(betti(k, None)[n] >= 1);
}

#[test]
fn surfaces_have_expected_homology() {
    let expected = [vec![1, 0, 1], vec![1, 2, 1], vec![1, 0, 0]];
    for ((k, _), b) in surfaces().iter().zip(expected) {
        assert_eq!(betti(k, None), b);
        assert_eq!(oracle_betti(k, None), b);
        assert!(pm_verdict(k).pseudomanifold);
    }
}
