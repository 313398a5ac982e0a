use std::collections::HashMap;

use crate::error::{Error, Result};

/// Largest complex accepted by the exact homology routines.
pub const MAX_SIMPLICES: usize = 50_000;

/// A finite abstract simplicial complex. Simplices are strictly increasing
/// vertex-index tuples, oriented by vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    /// `simplices[k]` holds the k-simplices in sorted order.
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SimplicialComplex {
    /// The downward closure of `faces`. Each face is sorted and deduplicated.
    pub fn from_faces<I, F>(vertices: Vec<String>, faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[usize]>,
    {
        let n = vertices.len();
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<usize>>> = Vec::new();
        let mut total = 0usize;
        for f in faces {
            let mut f = f.as_ref().to_vec();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                continue;
            }
            if let Some(&v) = f.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidArgument(format!("vertex index {v} out of range ({n} vertices)")));
            }
            if f.len() > 30 {
                return Err(Error::ResourceExceeded(format!("simplex of dimension {} is too large", f.len() - 1)));
            }
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                let sub: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                let d = sub.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize_with(d + 1, Default::default);
                }
                if by_dim[d].insert(sub) {
                    total += 1;
                    if total > MAX_SIMPLICES {
                        return Err(Error::ResourceExceeded(format!("complex exceeds {MAX_SIMPLICES} simplices")));
                    }
                }
            }
        }
        Ok(Self::from_sorted(vertices, by_dim.into_iter().map(|s| s.into_iter().collect()).collect()))
    }

    fn from_sorted(vertices: Vec<String>, simplices: Vec<Vec<Vec<usize>>>) -> Self {
        let index = simplices
            .iter()
            .map(|layer| layer.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        SimplicialComplex { vertices, simplices, index }
    }

    pub fn empty(vertices: Vec<String>) -> Self {
        Self::from_sorted(vertices, Vec::new())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    /// Dimension, or `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn face_counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let k = simplex.len().checked_sub(1)?;
        self.index.get(k)?.get(simplex).copied()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.index_of(simplex).is_some()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().enumerate().map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    /// Simplices not properly contained in another simplex.
    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        let mut covered: Vec<Vec<bool>> = self.simplices.iter().map(|l| vec![false; l.len()]).collect();
        for k in 1..self.simplices.len() {
            for s in &self.simplices[k] {
                for i in 0..s.len() {
                    let face = drop_vertex(s, i);
                    covered[k - 1][self.index[k - 1][&face]] = true;
                }
            }
        }
        let mut out = Vec::new();
        for (k, layer) in self.simplices.iter().enumerate() {
            for (i, s) in layer.iter().enumerate() {
                if !covered[k][i] {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Whether every simplex of `other` (over the same vertex list) lies in `self`.
    pub fn contains_complex(&self, other: &SimplicialComplex) -> bool {
        other.simplices.iter().flatten().all(|s| self.contains(s))
    }

    /// The subcomplex generated by the given faces, over the same vertex list.
    pub fn subcomplex<I, F>(&self, faces: I) -> Result<SimplicialComplex>
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[usize]>,
    {
        let sub = SimplicialComplex::from_faces(self.vertices.clone(), faces)?;
        if !self.contains_complex(&sub) {
            return Err(Error::InvalidArgument("subcomplex has simplices outside the complex".into()));
        }
        Ok(sub)
    }

    /// Union of two subcomplexes over the same vertex list.
    pub fn union(&self, other: &SimplicialComplex) -> Result<SimplicialComplex> {
        SimplicialComplex::from_faces(
            self.vertices.clone(),
            self.simplices.iter().flatten().chain(other.simplices.iter().flatten()),
        )
    }

    /// The complex with vertices renamed by the permutation `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Result<SimplicialComplex> {
        let mut names = vec![String::new(); self.vertices.len()];
        for (old, &new) in perm.iter().enumerate() {
            names[new] = self.vertices[old].clone();
        }
        let faces: Vec<Vec<usize>> = self.maximal_simplices().iter().map(|s| s.iter().map(|&v| perm[v]).collect()).collect();
        SimplicialComplex::from_faces(names, faces)
    }
}

pub(crate) fn drop_vertex(s: &[usize], i: usize) -> Vec<usize> {
    let mut f = Vec::with_capacity(s.len() - 1);
    f.extend_from_slice(&s[..i]);
    f.extend_from_slice(&s[i + 1..]);
    f
}

/// The order complex of a finite poset given by its strict order relation.
/// Vertex order follows a linear extension computed from `less`.
pub fn order_complex<L, F>(labels: Vec<L>, less: F) -> Result<SimplicialComplex>
where
    L: Into<String>,
    F: Fn(usize, usize) -> bool,
{
    let n = labels.len();
    let below: Vec<usize> = (0..n).map(|i| (0..n).filter(|&j| less(j, i)).count()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (below[i], i));
    let mut position = vec![0; n];
    for (p, &i) in order.iter().enumerate() {
        position[i] = p;
    }
    let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
    let vertices: Vec<String> = order.iter().map(|&i| labels[i].clone()).collect();
    let up: Vec<Vec<usize>> =
        order.iter().map(|&i| order.iter().copied().filter(|&j| less(i, j)).map(|j| position[j]).collect()).collect();

    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|p| vec![p]).collect();
    while let Some(chain) = stack.pop() {
        let top = *chain.last().unwrap();
        for &next in &up[top] {
            let mut c = chain.clone();
            c.push(next);
            stack.push(c);
        }
        chains.push(chain);
        if chains.len() > MAX_SIMPLICES {
            return Err(Error::ResourceExceeded(format!("order complex exceeds {MAX_SIMPLICES} simplices")));
        }
    }
    SimplicialComplex::from_faces(vertices, chains)
}
