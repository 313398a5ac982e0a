//! Breadth-first balls and streaming length profiles of the Cayley graph.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::class_index;
use super::element::{Arith, FieldArith, IntArith, Kernel};
use super::{Backend, GenSet, Representation};
use crate::error::{Error, Result};

/// Default cap on stored group elements.
pub const DEFAULT_MAX_ELEMENTS: usize = 2_000_000;
/// Default cap on visited elements for streaming profiles.
pub const DEFAULT_MAX_VISITS: u64 = 4_000_000_000;

/// Resource caps for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_elements: usize,
    pub max_visits: u64,
    pub parallel: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_elements: DEFAULT_MAX_ELEMENTS, max_visits: DEFAULT_MAX_VISITS, parallel: true }
    }
}

impl Limits {
    pub fn sequential(self) -> Self {
        Limits { parallel: false, ..self }
    }
}

/// One element of a ball enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedElement {
    pub key: Box<[i64]>,
    /// Lexicographically least reduced word.
    pub word: Vec<u8>,
    pub descent: GenSet,
    /// Letters per conjugacy class in any reduced word.
    pub class_type: Vec<u32>,
}

/// Elements of the ball of radius `R`, grouped by length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallEnumeration {
    pub radius: usize,
    pub generators: GenSet,
    pub classes: usize,
    pub layers: Vec<Vec<EnumeratedElement>>,
    /// True when the group generated by `generators` was exhausted within the radius.
    pub exhausted: bool,
}

impl BallEnumeration {
    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &EnumeratedElement)> {
        self.layers.iter().enumerate().flat_map(|(k, l)| l.iter().map(move |e| (k, e)))
    }
}

/// Enumerates the ball of radius `radius` in the full group.
pub fn ball_enumerate(rep: &Representation, radius: usize, limits: Limits) -> Result<BallEnumeration> {
    ball_enumerate_parabolic(rep, rep.matrix().full_set(), radius, limits)
}

/// Enumerates the ball of radius `radius` in the parabolic subgroup generated by `gens`.
pub fn ball_enumerate_parabolic(
    rep: &Representation,
    gens: GenSet,
    radius: usize,
    limits: Limits,
) -> Result<BallEnumeration> {
    match rep.backend() {
        Backend::Integer => bfs(&Kernel { rep, arith: IntArith }, gens, radius, limits),
        Backend::Field(f) => bfs(&Kernel { rep, arith: FieldArith(f) }, gens, radius, limits),
    }
}

struct Child {
    key: Box<[i64]>,
    word: Vec<u8>,
    class_type: Vec<u32>,
}

fn bfs<A: Arith>(k: &Kernel<'_, A>, gens: GenSet, radius: usize, limits: Limits) -> Result<BallEnumeration> {
    let rep = k.rep;
    let class_of = class_index(rep.matrix());
    let classes = class_of.iter().max().map_or(0, |m| m + 1);
    let identity = EnumeratedElement {
        key: rep.identity_key().into_boxed_slice(),
        word: Vec::new(),
        descent: GenSet::EMPTY,
        class_type: vec![0; classes],
    };
    let mut layers = vec![vec![identity]];
    let mut total = 1usize;
    let mut exhausted = false;
    for _ in 0..radius {
        let prev = layers.last().unwrap();
        let expand = |e: &EnumeratedElement| -> Result<Vec<Child>> {
            let mut out = Vec::new();
            for s in gens.difference(e.descent).iter() {
                let mut key = e.key.to_vec();
                k.right_mul_in_place(&mut key, s)?;
                let mut word = e.word.clone();
                word.push(s as u8);
                let mut class_type = e.class_type.clone();
                class_type[class_of[s]] += 1;
                out.push(Child { key: key.into_boxed_slice(), word, class_type });
            }
            Ok(out)
        };
        let mut children: Vec<Child> = if limits.parallel {
            prev.par_iter().map(expand).collect::<Result<Vec<_>>>()?.into_iter().flatten().collect()
        } else {
            prev.iter().map(expand).collect::<Result<Vec<_>>>()?.into_iter().flatten().collect()
        };
        let cmp = |a: &Child, b: &Child| a.key.cmp(&b.key).then_with(|| a.word.cmp(&b.word));
        if limits.parallel {
            children.par_sort_unstable_by(cmp);
        } else {
            children.sort_unstable_by(cmp);
        }
        children.dedup_by(|b, a| a.key == b.key);
        total += children.len();
        if total > limits.max_elements {
            return Err(Error::ResourceExceeded(format!(
                "ball enumeration exceeded {} elements; lower the radius or raise the element cap",
                limits.max_elements
            )));
        }
        let finish = |c: Child| -> EnumeratedElement {
            let descent = gens.iter().filter(|&j| column_negative(k, &c.key, j)).fold(GenSet::EMPTY, GenSet::with);
            EnumeratedElement { key: c.key, word: c.word, descent, class_type: c.class_type }
        };
        let layer: Vec<EnumeratedElement> = if limits.parallel {
            children.into_par_iter().map(finish).collect()
        } else {
            children.into_iter().map(finish).collect()
        };
        if layer.is_empty() {
            exhausted = true;
        }
        layers.push(layer);
    }
    if !exhausted && radius > 0 {
        // one more look: the group is exhausted when no element of the last layer has an ascent
        exhausted = layers.last().unwrap().iter().all(|e| gens.difference(e.descent).is_empty());
    } else if radius == 0 {
        exhausted = gens.is_empty();
    }
    Ok(BallEnumeration { radius, generators: gens, classes, layers, exhausted })
}

fn column_negative<A: Arith>(k: &Kernel<'_, A>, m: &[i64], j: usize) -> bool {
    let cl = k.col_len();
    k.root_negative(&m[j * cl..(j + 1) * cl])
}

/// Per-length, per-class-type element counts, produced without storing elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthProfile {
    pub radius: usize,
    pub classes: usize,
    /// `counts[k]` lists `(class type, count)` for length `k`, sorted by class type.
    pub counts: Vec<Vec<(Vec<u32>, u64)>>,
}

impl LengthProfile {
    /// `c_k` for `k = 0..=radius`.
    pub fn totals(&self) -> Vec<u64> {
        self.counts.iter().map(|l| l.iter().map(|(_, c)| c).sum()).collect()
    }

    /// Whether the group is finite and fully contained in the profile.
    pub fn exhausted(&self) -> bool {
        self.counts.last().is_some_and(|l| l.is_empty())
    }

    /// Restricts to lengths `<= r`.
    pub fn truncate(&self, r: usize) -> LengthProfile {
        let r = r.min(self.radius);
        LengthProfile { radius: r, classes: self.classes, counts: self.counts[..=r].to_vec() }
    }

    /// Merges classes into groups: `group_of[class]` among `groups` groups.
    pub fn regroup(&self, group_of: &[usize], groups: usize) -> LengthProfile {
        let counts = self
            .counts
            .iter()
            .map(|layer| {
                let mut map: std::collections::BTreeMap<Vec<u32>, u64> = Default::default();
                for (ct, c) in layer {
                    let mut g = vec![0u32; groups];
                    for (class, &k) in ct.iter().enumerate() {
                        g[group_of[class]] += k;
                    }
                    *map.entry(g).or_default() += c;
                }
                map.into_iter().collect()
            })
            .collect();
        LengthProfile { radius: self.radius, classes: groups, counts }
    }

    /// Builds a profile from a stored ball.
    pub fn from_ball(ball: &BallEnumeration) -> LengthProfile {
        let counts = ball
            .layers
            .iter()
            .map(|layer| {
                let mut map: HashMap<&[u32], u64> = HashMap::new();
                for e in layer {
                    *map.entry(&e.class_type).or_default() += 1;
                }
                let mut v: Vec<(Vec<u32>, u64)> = map.into_iter().map(|(k, c)| (k.to_vec(), c)).collect();
                v.sort();
                v
            })
            .collect();
        LengthProfile { radius: ball.radius, classes: ball.classes, counts }
    }
}

enum Counter {
    Dense { base: u64, cells: Vec<u64> },
    Sparse(HashMap<Vec<u32>, u64>),
}

const DENSE_LIMIT: u64 = 1 << 22;

/// Counts elements of the ball by length and class type with a depth-first walk of the
/// tree in which the parent of `u` is `u` times its largest right descent.
pub fn length_profile(rep: &Representation, radius: usize, limits: Limits) -> Result<LengthProfile> {
    length_profile_parabolic(rep, rep.matrix().full_set(), radius, limits)
}

pub fn length_profile_parabolic(
    rep: &Representation,
    gens: GenSet,
    radius: usize,
    limits: Limits,
) -> Result<LengthProfile> {
    let class_of = class_index(rep.matrix());
    length_profile_grouped(rep, gens, radius, limits, &class_of)
}

/// Like [`length_profile_parabolic`], but counts letters per caller-supplied group of
/// generators (`group_of[s]`) instead of per conjugacy class. Grouping classes with equal
/// weights keeps the counter small.
pub fn length_profile_grouped(
    rep: &Representation,
    gens: GenSet,
    radius: usize,
    limits: Limits,
    group_of: &[usize],
) -> Result<LengthProfile> {
    if group_of.len() != rep.rank() {
        return Err(Error::InvalidArgument("one group index per generator is required".into()));
    }
    match rep.backend() {
        Backend::Integer => dfs(&Kernel { rep, arith: IntArith }, gens, radius, limits, group_of),
        Backend::Field(f) => dfs(&Kernel { rep, arith: FieldArith(f) }, gens, radius, limits, group_of),
    }
}

fn dfs<A: Arith>(
    k: &Kernel<'_, A>,
    gens: GenSet,
    radius: usize,
    limits: Limits,
    class_of: &[usize],
) -> Result<LengthProfile> {
    let rep = k.rep;
    let n = rep.rank();
    let classes = class_of.iter().max().map_or(0, |m| m + 1);
    let base = radius as u64 + 1;
    let mut counter = match base.checked_pow(classes as u32) {
        Some(size) if size <= DENSE_LIMIT => Counter::Dense { base, cells: vec![0; size as usize] },
        _ => Counter::Sparse(HashMap::new()),
    };
    let strides: Vec<u64> = (0..classes).map(|c| base.saturating_pow(c as u32)).collect();
    // generators above s that commute with s: their descent status is inherited
    let commuting_above: Vec<GenSet> = (0..n)
        .map(|s| (s + 1..n).filter(|&t| gens.contains(t) && rep.matrix().commute(s, t)).fold(GenSet::EMPTY, GenSet::with))
        .collect();
    let noncommuting_above: Vec<Vec<usize>> =
        (0..n).map(|s| rep.neighbours(s).iter().copied().filter(|&t| t > s && gens.contains(t)).collect()).collect();
    let noncommuting_below: Vec<Vec<usize>> =
        (0..n).map(|s| rep.neighbours(s).iter().copied().filter(|&t| t < s && gens.contains(t)).collect()).collect();
    let commuting_below: Vec<GenSet> = (0..n)
        .map(|s| (0..s).filter(|&t| gens.contains(t) && rep.matrix().commute(s, t)).fold(GenSet::EMPTY, GenSet::with))
        .collect();

    let kl = rep.key_len();
    let mut mats = vec![0i64; kl * (radius + 1)];
    mats[..kl].copy_from_slice(&rep.identity_key());
    let mut desc = vec![GenSet::EMPTY; radius + 1];
    let mut next_gen = vec![0usize; radius + 1];
    let mut ct = vec![0u32; classes];
    let mut ct_index = vec![0u64; radius + 1];
    let mut chosen = vec![0usize; radius + 1];
    let mut visits: u64 = 1;
    let record = |counter: &mut Counter, idx: u64, ct: &[u32]| match counter {
        Counter::Dense { cells, .. } => cells[idx as usize] += 1,
        Counter::Sparse(map) => *map.entry(ct.to_vec()).or_default() += 1,
    };
    record(&mut counter, 0, &ct);
    let gen_list: Vec<usize> = gens.iter().collect();
    let mut depth = 0usize;
    if radius > 0 {
        next_gen[0] = 0;
        loop {
            // find the next valid child of the node at `depth`
            let mut found = None;
            while next_gen[depth] < gen_list.len() {
                let s = gen_list[next_gen[depth]];
                next_gen[depth] += 1;
                let d = desc[depth];
                if d.contains(s) || !d.intersection(commuting_above[s]).is_empty() {
                    continue;
                }
                let m = &mats[depth * kl..(depth + 1) * kl];
                let mut ok = true;
                for &t in &noncommuting_above[s] {
                    if k.root_after_negative(m, s, t)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    found = Some(s);
                    break;
                }
            }
            match found {
                Some(s) => {
                    visits += 1;
                    if visits > limits.max_visits {
                        return Err(Error::ResourceExceeded(format!(
                            "length profile exceeded {} visited elements; lower the depth",
                            limits.max_visits
                        )));
                    }
                    let c = class_of[s];
                    ct[c] += 1;
                    let idx = ct_index[depth] + strides[c];
                    record(&mut counter, idx, &ct);
                    if depth + 1 < radius {
                        let (lo, hi) = mats.split_at_mut((depth + 1) * kl);
                        let child = &mut hi[..kl];
                        child.copy_from_slice(&lo[depth * kl..]);
                        k.right_mul_in_place(child, s)?;
                        let mut d = GenSet::singleton(s).union(desc[depth].intersection(commuting_below[s]));
                        for &t in &noncommuting_below[s] {
                            let cl = k.col_len();
                            if k.root_negative(&child[t * cl..(t + 1) * cl]) {
                                d = d.with(t);
                            }
                        }
                        chosen[depth] = s;
                        depth += 1;
                        desc[depth] = d;
                        ct_index[depth] = idx;
                        next_gen[depth] = 0;
                    } else {
                        ct[c] -= 1;
                    }
                }
                None => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                    ct[class_of[chosen[depth]]] -= 1;
                }
            }
        }
    }
    let mut counts: Vec<Vec<(Vec<u32>, u64)>> = vec![Vec::new(); radius + 1];
    match counter {
        Counter::Dense { base, cells } => {
            for (idx, &c) in cells.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let mut rem = idx as u64;
                let mut v = vec![0u32; classes];
                for x in v.iter_mut() {
                    *x = (rem % base) as u32;
                    rem /= base;
                }
                let len: u32 = v.iter().sum();
                counts[len as usize].push((v, c));
            }
        }
        Counter::Sparse(map) => {
            for (v, c) in map {
                let len: u32 = v.iter().sum();
                counts[len as usize].push((v, c));
            }
        }
    }
    for l in &mut counts {
        l.sort();
    }
    Ok(LengthProfile { radius, classes, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::systems::*;

    fn sizes(m: &crate::coxeter::CoxeterMatrix, r: usize) -> Vec<usize> {
        let rep = Representation::new(m).unwrap();
        ball_enumerate(&rep, r, Limits::default()).unwrap().layer_sizes()
    }

    #[test]
    fn small_balls() {
        assert_eq!(sizes(&infinite_dihedral(), 5), vec![1, 2, 2, 2, 2, 2]);
        assert_eq!(sizes(&pentagon(), 2), vec![1, 5, 15]);
        assert_eq!(sizes(&type_a(2), 10), vec![1, 2, 2, 1, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn finite_group_orders() {
        for (m, order) in [(type_a(3), 24usize), (type_b(3), 48), (triangle(3, 5, 2), 120), (dihedral(7), 14)] {
            let rep = Representation::new(&m).unwrap();
            let ball = ball_enumerate(&rep, 40, Limits::default()).unwrap();
            assert!(ball.exhausted);
            assert_eq!(ball.total(), order);
        }
    }

    #[test]
    fn profile_matches_ball() {
        for m in [pentagon(), triangle(3, 3, 3), triangle(7, 3, 2), type_b(3), infinite_dihedral()] {
            let rep = Representation::new(&m).unwrap();
            let ball = ball_enumerate(&rep, 7, Limits::default()).unwrap();
            let prof = length_profile(&rep, 7, Limits::default()).unwrap();
            assert_eq!(LengthProfile::from_ball(&ball), prof);
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let rep = Representation::new(&triangle(7, 3, 2)).unwrap();
        let a = ball_enumerate(&rep, 9, Limits::default()).unwrap();
        let b = ball_enumerate(&rep, 9, Limits::default().sequential()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn element_cap_is_all_or_nothing() {
        let rep = Representation::new(&pentagon()).unwrap();
        let limits = Limits { max_elements: 100, ..Limits::default() };
        assert!(matches!(ball_enumerate(&rep, 6, limits), Err(Error::ResourceExceeded(_))));
    }
}
