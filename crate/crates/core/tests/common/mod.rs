#![allow(dead_code)]

use coxbuild_core::coxeter::{CoxeterMatrix, Order};
use proptest::prelude::*;

const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

pub fn order_strategy() -> impl Strategy<Value = Order> {
    prop_oneof![
        3 => Just(Order::Finite(2)),
        3 => Just(Order::Finite(3)),
        1 => Just(Order::Finite(4)),
        1 => Just(Order::Finite(5)),
        1 => Just(Order::Finite(6)),
        2 => Just(Order::Infinity),
    ]
}

/// Coxeter matrices of rank in `ranks`, entries from {2, 3, 4, 5, 6, inf}.
pub fn matrix_strategy(ranks: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = CoxeterMatrix> {
    ranks.prop_flat_map(|n| {
        proptest::collection::vec(order_strategy(), n * (n - 1) / 2).prop_map(move |entries| from_upper(n, &entries))
    })
}

/// Right-angled matrices: each pair commutes or is free.
pub fn right_angled_strategy(ranks: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = CoxeterMatrix> {
    ranks.prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |free| {
            let entries: Vec<Order> =
                free.into_iter().map(|f| if f { Order::Infinity } else { Order::Finite(2) }).collect();
            from_upper(n, &entries)
        })
    })
}

pub fn from_upper(n: usize, entries: &[Order]) -> CoxeterMatrix {
    let mut k = 0;
    let mut upper = vec![vec![Order::Finite(1); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            upper[i][j] = entries[k];
            k += 1;
        }
    }
    CoxeterMatrix::from_fn(&NAMES[..n], |i, j| upper[i][j]).unwrap()
}

/// `m` with generators reordered so that new generator `i` is old `perm[i]`.
pub fn permuted(m: &CoxeterMatrix, perm: &[usize]) -> CoxeterMatrix {
    let names: Vec<&str> = perm.iter().map(|&i| m.generators()[i].as_str()).collect();
    CoxeterMatrix::from_fn(&names, |i, j| m.m(perm[i], perm[j])).unwrap()
}
