//! Named Coxeter systems used throughout the examples and tests.

use super::{CoxeterMatrix, Order};

fn names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| if n <= 26 { ((b'a' + i as u8) as char).to_string() } else { format!("s{i}") })
        .collect()
}

fn build(n: usize, f: impl Fn(usize, usize) -> Order) -> CoxeterMatrix {
    let gens = names(n);
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    CoxeterMatrix::from_fn(&refs, f).expect("named systems are valid")
}

/// `Ã_1`: two generators with `m = ∞`.
pub fn infinite_dihedral() -> CoxeterMatrix {
    CoxeterMatrix::from_fn(&["s", "t"], |_, _| Order::Infinity).unwrap()
}

/// Dihedral group of order `2m`.
pub fn dihedral(m: u32) -> CoxeterMatrix {
    CoxeterMatrix::from_fn(&["s", "t"], |_, _| Order::Finite(m)).unwrap()
}

/// Triangle group with `m_ab = p`, `m_bc = q`, `m_ac = r`.
pub fn triangle(p: u32, q: u32, r: u32) -> CoxeterMatrix {
    build(3, |i, j| match (i, j) {
        (0, 1) => Order::Finite(p),
        (1, 2) => Order::Finite(q),
        _ => Order::Finite(r),
    })
}

/// Type `A_n` (symmetric group on `n + 1` letters).
pub fn type_a(n: usize) -> CoxeterMatrix {
    build(n, |i, j| if j == i + 1 { Order::Finite(3) } else { Order::Finite(2) })
}

/// Type `B_n`, with the 4-edge between the last two generators.
pub fn type_b(n: usize) -> CoxeterMatrix {
    build(n, |i, j| match j - i {
        1 if j == n - 1 => Order::Finite(4),
        1 => Order::Finite(3),
        _ => Order::Finite(2),
    })
}

/// Right-angled Coxeter group of a graph on `n` vertices: adjacent vertices commute,
/// all other pairs generate infinite dihedral groups.
pub fn right_angled(n: usize, commuting: &[(usize, usize)]) -> CoxeterMatrix {
    build(n, |i, j| {
        if commuting.iter().any(|&(a, b)| (a.min(b), a.max(b)) == (i, j)) {
            Order::Finite(2)
        } else {
            Order::Infinity
        }
    })
}

/// Right-angled `n`-gon reflection group (nerve is an `n`-cycle).
pub fn right_angled_polygon(n: usize) -> CoxeterMatrix {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    right_angled(n, &edges)
}

/// The right-angled pentagon group.
pub fn pentagon() -> CoxeterMatrix {
    right_angled_polygon(5)
}

/// `S = {s, t, u}` with `m_st = m_tu = 2`, `m_su = ∞`: the nerve is a path with two edges.
pub fn path_nerve() -> CoxeterMatrix {
    CoxeterMatrix::from_fn(&["s", "t", "u"], |i, j| {
        if (i, j) == (0, 2) { Order::Infinity } else { Order::Finite(2) }
    })
    .unwrap()
}

/// `Ã_2` with an extra generator commuting with everything.
pub fn triangle_with_cone_vertex() -> CoxeterMatrix {
    build(4, |_, j| if j == 3 { Order::Finite(2) } else { Order::Finite(3) })
}

/// Product of two infinite dihedral groups, `{a, b} × {c, d}`.
pub fn commuting_infinite_dihedrals() -> CoxeterMatrix {
    build(4, |i, j| if (i, j) == (0, 1) || (i, j) == (2, 3) { Order::Infinity } else { Order::Finite(2) })
}
