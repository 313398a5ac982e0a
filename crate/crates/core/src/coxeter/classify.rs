//! Finite and affine diagram recognition.

use serde::{Deserialize, Serialize};

use super::{CoxeterMatrix, GenSet, Order};

/// Kind of a parabolic subsystem `(W_T, T)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParabolicKind {
    Finite,
    AffineIrreducibleProduct,
    OtherInfinite,
}

/// Classification of one connected diagram component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentClass {
    Finite,
    Affine,
    /// The infinite dihedral diagram, affine only under the whole-system convention.
    InfiniteDihedral,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub class: ComponentClass,
    pub members: GenSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicType {
    pub kind: ParabolicKind,
    pub components: Vec<Component>,
}

impl ParabolicType {
    pub fn is_finite(&self) -> bool {
        self.kind == ParabolicKind::Finite
    }

    /// Component labels joined with `x`, e.g. `A1xA1` or `~A2`.
    pub fn label(&self) -> String {
        if self.components.is_empty() {
            return "trivial".into();
        }
        self.components.iter().map(|c| c.label.as_str()).collect::<Vec<_>>().join("x")
    }
}

/// Connected components of the diagram restricted to `t` (edges where `m != 2`).
pub fn diagram_components(m: &CoxeterMatrix, t: GenSet) -> Vec<GenSet> {
    let mut seen = GenSet::EMPTY;
    let mut out = Vec::new();
    for start in t.iter() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = GenSet::singleton(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for u in t.iter() {
                if !comp.contains(u) && !m.commute(u, v) {
                    comp = comp.with(u);
                    stack.push(u);
                }
            }
        }
        seen = seen.union(comp);
        out.push(comp);
    }
    out
}

/// Classifies the parabolic subsystem generated by `t`.
pub fn classify_parabolic(m: &CoxeterMatrix, t: GenSet) -> ParabolicType {
    let components: Vec<Component> = diagram_components(m, t)
        .into_iter()
        .map(|c| {
            let (label, class) = classify_component(m, c);
            Component { label, class, members: c }
        })
        .collect();
    let kind = if components.iter().all(|c| c.class == ComponentClass::Finite) {
        ParabolicKind::Finite
    } else if components
        .iter()
        .all(|c| matches!(c.class, ComponentClass::Finite | ComponentClass::Affine))
    {
        ParabolicKind::AffineIrreducibleProduct
    } else {
        ParabolicKind::OtherInfinite
    };
    ParabolicType { kind, components }
}

/// Whether `W_T` is finite.
pub fn is_spherical(m: &CoxeterMatrix, t: GenSet) -> bool {
    diagram_components(m, t).into_iter().all(|c| classify_component(m, c).1 == ComponentClass::Finite)
}

/// The whole-system affine convention: a product of finite systems and at least one
/// irreducible affine system, the infinite dihedral diagram included.
pub fn is_affine_system(m: &CoxeterMatrix) -> bool {
    let ty = classify_parabolic(m, m.full_set());
    let mut any_affine = false;
    for c in &ty.components {
        match c.class {
            ComponentClass::Finite => {}
            ComponentClass::Affine | ComponentClass::InfiniteDihedral => any_affine = true,
            ComponentClass::Other => return false,
        }
    }
    any_affine
}

/// All spherical subsets, ordered by size then bitmask. Always contains the empty set.
pub fn spherical_subsets(m: &CoxeterMatrix) -> Vec<GenSet> {
    let n = m.rank();
    let mut out = vec![GenSet::EMPTY];
    let mut frontier = vec![GenSet::EMPTY];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for t in frontier {
            // extend only by generators above the current maximum, so each set is seen once
            let lo = t.max().map_or(0, |x| x + 1);
            for s in lo..n {
                let u = t.with(s);
                if u.iter().all(|v| v == s || is_spherical(m, u.without(v))) && is_spherical(m, u) {
                    next.push(u);
                }
            }
        }
        next.sort_by_key(|g| g.0);
        out.extend(next.iter().copied());
        frontier = next;
    }
    out.sort_by_key(|g| g.graded_key());
    out
}

/// Maximal elements of the spherical poset.
pub fn maximal_spherical_subsets(m: &CoxeterMatrix) -> Vec<GenSet> {
    let all = spherical_subsets(m);
    all.iter()
        .copied()
        .filter(|&t| (0..m.rank()).all(|s| t.contains(s) || !all.contains(&t.with(s))))
        .collect()
}

/// Classes of generators under conjugacy: components of the graph of odd finite edges.
/// Classes are listed by smallest member.
pub fn generator_conjugacy_classes(m: &CoxeterMatrix) -> Vec<GenSet> {
    let n = m.rank();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if m.m(i, j).is_odd() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<GenSet> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for s in 0..n {
        let r = find(&mut parent, s);
        if root_slot[r] == usize::MAX {
            root_slot[r] = classes.len();
            classes.push(GenSet::EMPTY);
        }
        classes[root_slot[r]] = classes[root_slot[r]].with(s);
    }
    classes
}

/// Class index of each generator, consistent with [`generator_conjugacy_classes`].
pub fn class_index(m: &CoxeterMatrix) -> Vec<usize> {
    let classes = generator_conjugacy_classes(m);
    let mut idx = vec![0; m.rank()];
    for (c, set) in classes.iter().enumerate() {
        for s in set.iter() {
            idx[s] = c;
        }
    }
    idx
}

fn label_of(m: &CoxeterMatrix, a: usize, b: usize) -> u32 {
    match m.m(a, b) {
        Order::Finite(k) => k,
        Order::Infinity => 0,
    }
}

fn classify_component(m: &CoxeterMatrix, comp: GenSet) -> (String, ComponentClass) {
    use ComponentClass::*;
    let nodes: Vec<usize> = comp.iter().collect();
    let n = nodes.len();
    let nbrs = |v: usize| -> Vec<usize> { nodes.iter().copied().filter(|&u| u != v && !m.commute(u, v)).collect() };
    let mut edges = 0;
    let mut has_inf = false;
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            if !m.commute(a, b) {
                edges += 1;
                has_inf |= m.m(a, b) == Order::Infinity;
            }
        }
    }
    if n == 1 {
        return ("A1".into(), Finite);
    }
    if has_inf {
        return if n == 2 { ("~A1".into(), InfiniteDihedral) } else { ("other".into(), Other) };
    }
    if n == 2 {
        let k = label_of(m, nodes[0], nodes[1]);
        return match k {
            3 => ("A2".into(), Finite),
            4 => ("B2".into(), Finite),
            6 => ("G2".into(), Finite),
            k => (format!("I2({k})"), Finite),
        };
    }
    let degree: Vec<usize> = nodes.iter().map(|&v| nbrs(v).len()).collect();
    if edges == n {
        let cycle = degree.iter().all(|&d| d == 2);
        let all3 = nodes.iter().all(|&v| nbrs(v).iter().all(|&u| label_of(m, u, v) == 3));
        return if cycle && all3 { (format!("~A{}", n - 1), Affine) } else { ("other".into(), Other) };
    }
    if edges != n - 1 {
        return ("other".into(), Other);
    }
    // a connected graph with n-1 edges is a tree
    let max_deg = *degree.iter().max().unwrap();
    if max_deg <= 2 {
        let start = nodes[degree.iter().position(|&d| d == 1).unwrap()];
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&nx) = nbrs(cur).iter().find(|&&u| u != prev) {
            order.push(nx);
            prev = cur;
            cur = nx;
        }
        let labels: Vec<u32> = order.windows(2).map(|w| label_of(m, w[0], w[1])).collect();
        let mut rev = labels.clone();
        rev.reverse();
        return classify_path(&labels).or_else(|| classify_path(&rev)).unwrap_or(("other".into(), Other));
    }
    let labels_all3 = nodes.iter().all(|&v| nbrs(v).iter().all(|&u| label_of(m, u, v) == 3));
    let branch: Vec<usize> = nodes.iter().zip(&degree).filter(|(_, &d)| d >= 3).map(|(&v, _)| v).collect();
    if max_deg == 4 {
        return if n == 5 && labels_all3 { ("~D4".into(), Affine) } else { ("other".into(), Other) };
    }
    if max_deg > 4 {
        return ("other".into(), Other);
    }
    if branch.len() == 2 {
        if !labels_all3 {
            return ("other".into(), Other);
        }
        let leaf_nbrs = |v: usize| nbrs(v).iter().filter(|&&u| nbrs(u).len() == 1).count();
        return if branch.iter().all(|&b| leaf_nbrs(b) == 2) {
            (format!("~D{}", n - 1), Affine)
        } else {
            ("other".into(), Other)
        };
    }
    if branch.len() != 1 {
        return ("other".into(), Other);
    }
    let center = branch[0];
    // each arm: labels walking outward from the center
    let mut arms: Vec<Vec<u32>> = nbrs(center)
        .into_iter()
        .map(|first| {
            let mut labels = vec![label_of(m, center, first)];
            let (mut prev, mut cur) = (center, first);
            while let Some(&nx) = nbrs(cur).iter().find(|&&u| u != prev) {
                labels.push(label_of(m, cur, nx));
                prev = cur;
                cur = nx;
            }
            labels
        })
        .collect();
    arms.sort_by_key(|a| a.len());
    let lens: Vec<usize> = arms.iter().map(Vec::len).collect();
    if labels_all3 {
        let named = match (lens[0], lens[1], lens[2]) {
            (1, 1, r) => (format!("D{}", r + 3), Finite),
            (1, 2, 2) => ("E6".into(), Finite),
            (1, 2, 3) => ("E7".into(), Finite),
            (1, 2, 4) => ("E8".into(), Finite),
            (2, 2, 2) => ("~E6".into(), Affine),
            (1, 3, 3) => ("~E7".into(), Affine),
            (1, 2, 5) => ("~E8".into(), Affine),
            _ => ("other".into(), Other),
        };
        return named;
    }
    // ~B_n: two short arms and one arm whose outermost edge carries the 4
    if lens[0] == 1 && lens[1] == 1 && arms[0][0] == 3 && arms[1][0] == 3 {
        let long = &arms[2];
        let (last, rest) = long.split_last().unwrap();
        if *last == 4 && rest.iter().all(|&l| l == 3) {
            return (format!("~B{}", n - 1), Affine);
        }
    }
    ("other".into(), Other)
}

fn classify_path(labels: &[u32]) -> Option<(String, ComponentClass)> {
    use ComponentClass::*;
    let n = labels.len() + 1;
    let k = labels.len();
    let all3 = |s: &[u32]| s.iter().all(|&l| l == 3);
    if all3(labels) {
        return Some((format!("A{n}"), Finite));
    }
    if labels[k - 1] == 4 && all3(&labels[..k - 1]) {
        return Some((format!("B{n}"), Finite));
    }
    if labels == [3, 4, 3] {
        return Some(("F4".into(), Finite));
    }
    if labels == [3, 5] {
        return Some(("H3".into(), Finite));
    }
    if labels == [3, 3, 5] {
        return Some(("H4".into(), Finite));
    }
    if k >= 2 && labels[0] == 4 && labels[k - 1] == 4 && all3(&labels[1..k - 1]) {
        return Some((format!("~C{}", n - 1), Affine));
    }
    if labels == [3, 3, 4, 3] {
        return Some(("~F4".into(), Affine));
    }
    if labels == [3, 6] {
        return Some(("~G2".into(), Affine));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::systems::*;

    fn kind(m: &CoxeterMatrix) -> (ParabolicKind, String) {
        let t = classify_parabolic(m, m.full_set());
        (t.kind, t.label())
    }

    #[test]
    fn dihedral_cases() {
        assert_eq!(kind(&dihedral(5)), (ParabolicKind::Finite, "I2(5)".into()));
        assert_eq!(kind(&infinite_dihedral()), (ParabolicKind::OtherInfinite, "~A1".into()));
        assert!(is_affine_system(&infinite_dihedral()));
    }

    #[test]
    fn triangles() {
        assert_eq!(kind(&triangle(3, 3, 3)), (ParabolicKind::AffineIrreducibleProduct, "~A2".into()));
        assert_eq!(kind(&triangle(3, 5, 2)).0, ParabolicKind::Finite);
        assert_eq!(kind(&triangle(4, 4, 2)), (ParabolicKind::AffineIrreducibleProduct, "~C2".into()));
        assert_eq!(kind(&triangle(3, 6, 2)), (ParabolicKind::AffineIrreducibleProduct, "~G2".into()));
        assert_eq!(kind(&triangle(7, 3, 2)).0, ParabolicKind::OtherInfinite);
        assert!(is_affine_system(&triangle(3, 3, 3)));
        assert!(!is_affine_system(&triangle(7, 3, 2)));
    }

    #[test]
    fn spherical_counts() {
        assert_eq!(spherical_subsets(&infinite_dihedral()).len(), 3);
        assert_eq!(spherical_subsets(&triangle(3, 3, 3)).len(), 7);
        assert_eq!(spherical_subsets(&pentagon()).len(), 11);
        assert_eq!(maximal_spherical_subsets(&pentagon()).len(), 5);
    }

    #[test]
    fn conjugacy_classes() {
        assert_eq!(generator_conjugacy_classes(&infinite_dihedral()).len(), 2);
        assert_eq!(generator_conjugacy_classes(&triangle(3, 3, 3)).len(), 1);
        assert_eq!(generator_conjugacy_classes(&pentagon()).len(), 5);
        assert_eq!(generator_conjugacy_classes(&type_b(3)).len(), 2);
    }

    #[test]
    fn named_finite_types() {
        assert_eq!(kind(&type_a(5)).1, "A5");
        assert_eq!(kind(&type_b(4)).1, "B4");
        let d5 = CoxeterMatrix::from_fn(&["a", "b", "c", "d", "e"], |i, j| match (i, j) {
            (0, 2) | (1, 2) | (2, 3) | (3, 4) => Order::Finite(3),
            _ => Order::Finite(2),
        })
        .unwrap();
        assert_eq!(kind(&d5).1, "D5");
    }
}
