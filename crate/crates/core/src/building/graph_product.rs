use std::collections::HashMap;

use crate::coxeter::{CoxeterMatrix, GenSet};
use crate::error::{Error, Result};

use super::RegularBuildingSpec;

/// A syllable `s^e` with `1 <= e <= q_s`.
pub type Syllable = (u8, u32);
/// A chamber as its syllable normal form: reduced, shuffled to the lexicographically
/// least order allowed by commutation.
pub type NormalForm = Vec<Syllable>;

/// The right-angled building of a graph product of cyclic groups `Z/(q_s + 1)`,
/// enumerated to a radius around the base chamber.
#[derive(Clone, Debug)]
pub struct GraphProductBuilding {
    spec: RegularBuildingSpec,
    radius: usize,
    /// `commutes[s]`: generators commuting with `s` (m = 2).
    commutes: Vec<GenSet>,
    /// Chambers by length of the normal form.
    layers: Vec<Vec<NormalForm>>,
    index: HashMap<NormalForm, usize>,
}

impl GraphProductBuilding {
    pub fn build(spec: &RegularBuildingSpec, radius: usize, max_chambers: usize) -> Result<Self> {
        let m = spec.matrix();
        if !m.is_right_angled() {
            return Err(Error::NotRightAngled);
        }
        let commutes = commutation(m);
        let q = spec.thickness().values().to_vec();
        let mut layers: Vec<Vec<NormalForm>> = vec![vec![Vec::new()]];
        let mut index: HashMap<NormalForm, usize> = HashMap::from([(Vec::new(), 0)]);
        for k in 0..radius {
            let mut next: Vec<NormalForm> = Vec::new();
            for c in &layers[k] {
                for s in 0..m.rank() {
                    for e in 1..=q[s] as u32 {
                        let d = right_multiply(&commutes, &q, c, (s as u8, e));
                        if d.len() == k + 1 && !index.contains_key(&d) {
                            index.insert(d.clone(), index.len());
                            next.push(d);
                        }
                    }
                }
            }
            if index.len() > max_chambers {
                return Err(Error::ResourceExceeded(format!("building ball exceeds {max_chambers} chambers")));
            }
            next.sort();
            layers.push(next);
        }
        let b = GraphProductBuilding { spec: spec.clone(), radius, commutes, layers, index };
        b.verify()?;
        Ok(b)
    }

    pub fn spec(&self) -> &RegularBuildingSpec {
        &self.spec
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn chamber_count(&self) -> usize {
        self.index.len()
    }

    pub fn layers(&self) -> &[Vec<NormalForm>] {
        &self.layers
    }

    pub fn contains(&self, c: &NormalForm) -> bool {
        self.index.contains_key(c)
    }

    pub fn chambers(&self) -> impl Iterator<Item = &NormalForm> {
        self.layers.iter().flatten()
    }

    fn q(&self) -> Vec<u64> {
        self.spec.thickness().values().to_vec()
    }

    /// `c * s^e` in normal form.
    pub fn multiply(&self, c: &NormalForm, syl: Syllable) -> NormalForm {
        right_multiply(&self.commutes, &self.q(), c, syl)
    }

    /// `a^{-1} b` in normal form.
    pub fn quotient(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        let q = self.q();
        let mut out: NormalForm = Vec::new();
        for &(s, e) in a.iter().rev() {
            out = right_multiply(&self.commutes, &q, &out, (s, q[s as usize] as u32 + 1 - e));
        }
        for &syl in b {
            out = right_multiply(&self.commutes, &q, &out, syl);
        }
        out
    }

    /// The Coxeter group element (as its lexicographically least reduced word) of a chamber.
    pub fn project(c: &NormalForm) -> Vec<usize> {
        c.iter().map(|&(s, _)| s as usize).collect()
    }

    /// W-valued distance `d_W(a, b)` as the least reduced word.
    pub fn distance(&self, a: &NormalForm, b: &NormalForm) -> Vec<usize> {
        Self::project(&self.quotient(a, b))
    }

    /// The `s`-panel of `c`: `c` and its `q_s` neighbours of type `s`.
    pub fn panel(&self, c: &NormalForm, s: usize) -> Vec<NormalForm> {
        let q = self.q();
        let base = strip(&self.commutes, c, GenSet::singleton(s));
        let mut out: Vec<NormalForm> =
            (0..=q[s] as u32).map(|e| if e == 0 { base.clone() } else { self.multiply(&base, (s as u8, e)) }).collect();
        out.sort();
        out
    }

    /// Shortest member of the `t`-residue of `c`, for pairwise-commuting `t`.
    pub fn residue_representative(&self, c: &NormalForm, t: GenSet) -> NormalForm {
        strip(&self.commutes, c, t)
    }

    /// Number of chambers `c` with `d_W(base, c) = w`.
    pub fn sphere_count(&self, w: &[usize]) -> Result<u64> {
        if w.len() > self.radius {
            return Err(Error::RadiusExceeded { length: w.len(), radius: self.radius });
        }
        Ok(self.layers[w.len()].iter().filter(|c| Self::project(c) == w).count() as u64)
    }

    /// All chambers at W-distance `w` from the base chamber, built directly.
    pub fn fiber(&self, w: &[usize]) -> Vec<NormalForm> {
        let q = self.q();
        let mut out: Vec<NormalForm> = vec![Vec::new()];
        for &s in w {
            out = out
                .into_iter()
                .flat_map(|c| (1..=q[s] as u32).map(move |e| {
                    let mut d = c.clone();
                    d.push((s as u8, e));
                    d
                }))
                .collect();
        }
        out
    }

    /// Checks the two building axioms inside the ball: every panel has `q_s + 1` distinct
    /// chambers, and the gallery distance from the base equals the length of `d_W`, which is
    /// reduced.
    fn verify(&self) -> Result<()> {
        let q = self.q();
        for (k, layer) in self.layers.iter().enumerate() {
            for c in layer {
                if c.len() != k || Self::project(c).len() != k {
                    return Err(Error::ValidationMismatch(format!("chamber {c:?} at gallery distance {k}")));
                }
                let word = Self::project(c);
                if !is_reduced_right_angled(&self.commutes, &word) {
                    return Err(Error::ValidationMismatch(format!("projection {word:?} is not reduced")));
                }
                if k + 1 <= self.radius {
                    for s in 0..q.len() {
                        let p = self.panel(c, s);
                        let mut dedup = p.clone();
                        dedup.dedup();
                        if dedup.len() != q[s] as usize + 1 || !p.iter().all(|x| self.contains(x)) {
                            return Err(Error::ValidationMismatch(format!("panel of type {s} at {c:?} has wrong size")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn commutation(m: &CoxeterMatrix) -> Vec<GenSet> {
    (0..m.rank()).map(|s| GenSet::from_indices((0..m.rank()).filter(|&t| t != s && m.commute(s, t)))).collect()
}

fn commutes(c: &[GenSet], s: u8, t: u8) -> bool {
    c[s as usize].contains(t as usize)
}

/// Right multiplication by a syllable followed by canonical reshuffling.
fn right_multiply(c: &[GenSet], q: &[u64], form: &NormalForm, (s, e): Syllable) -> NormalForm {
    let mut out = form.clone();
    let modulus = q[s as usize] as u32 + 1;
    for i in (0..out.len()).rev() {
        let (t, f) = out[i];
        if t == s {
            let g = (f + e) % modulus;
            if g == 0 {
                out.remove(i);
            } else {
                out[i].1 = g;
            }
            return canonical(c, out);
        }
        if !commutes(c, s, t) {
            break;
        }
    }
    out.push((s, e));
    canonical(c, out)
}

/// Least shuffle: repeatedly take the smallest generator whose syllable commutes with
/// every syllable before it.
fn canonical(c: &[GenSet], mut rest: NormalForm) -> NormalForm {
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for i in 0..rest.len() {
            let free = rest[..i].iter().all(|&(t, _)| commutes(c, rest[i].0, t));
            if free && best.map_or(true, |b| rest[i].0 < rest[b].0) {
                best = Some(i);
            }
        }
        out.push(rest.remove(best.unwrap()));
    }
    out
}

/// Removes trailing syllables whose generators lie in `t` (pairwise commuting).
fn strip(c: &[GenSet], form: &NormalForm, t: GenSet) -> NormalForm {
    let mut out = form.clone();
    let mut i = out.len();
    while i > 0 {
        i -= 1;
        let s = out[i].0;
        if t.contains(s as usize) && out[i + 1..].iter().all(|&(u, _)| commutes(c, s, u)) {
            out.remove(i);
        }
    }
    canonical(c, out)
}

fn is_reduced_right_angled(c: &[GenSet], word: &[usize]) -> bool {
    for j in 0..word.len() {
        for i in 0..j {
            if word[i] == word[j] && word[i + 1..j].iter().all(|&u| c[word[j]].contains(u)) {
                return false;
            }
        }
    }
    true
}
