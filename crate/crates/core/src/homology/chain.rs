use num_rational::BigRational;
use num_traits::Zero;

use super::complex::{drop_vertex, SimplicialComplex};

/// Sparse column: `(row, entry)` pairs with strictly increasing rows.
pub type SparseColumn = Vec<(usize, i64)>;

/// Rational chain complex of a pair `(K, L)`: chains of `K` modulo chains of `L`.
/// Boundary signs alternate along the increasing vertex order.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    /// `basis[k]`: indices into `K`'s k-simplices that survive the quotient.
    basis: Vec<Vec<usize>>,
    /// `boundaries[k]` maps `C_k -> C_{k-1}`; `boundaries[0]` is empty.
    boundaries: Vec<Vec<SparseColumn>>,
}

impl ChainComplex {
    /// Builds the quotient complex and asserts `∂∂ = 0`.
    pub fn new(k: &SimplicialComplex, l: Option<&SimplicialComplex>) -> Self {
        let top = k.dimension().map_or(0, |d| d + 1);
        let mut basis = Vec::with_capacity(top);
        let mut position: Vec<Vec<Option<usize>>> = Vec::with_capacity(top);
        for d in 0..top {
            let mut b = Vec::new();
            let mut pos = vec![None; k.simplices(d).len()];
            for (i, s) in k.simplices(d).iter().enumerate() {
                if !l.is_some_and(|l| l.contains(s)) {
                    pos[i] = Some(b.len());
                    b.push(i);
                }
            }
            basis.push(b);
            position.push(pos);
        }
        let mut boundaries = vec![Vec::new()];
        for d in 1..top {
            let cols = basis[d]
                .iter()
                .map(|&i| {
                    let s = &k.simplices(d)[i];
                    let mut col: SparseColumn = (0..s.len())
                        .filter_map(|j| {
                            let face = k.index_of(&drop_vertex(s, j)).unwrap();
                            position[d - 1][face].map(|r| (r, if j % 2 == 0 { 1 } else { -1 }))
                        })
                        .collect();
                    col.sort_unstable();
                    col
                })
                .collect();
            boundaries.push(cols);
        }
        let cc = ChainComplex { basis, boundaries };
        cc.assert_square_zero();
        cc
    }

    fn assert_square_zero(&self) {
        for d in 2..self.boundaries.len() {
            for col in &self.boundaries[d] {
                let image = self.apply(d - 1, col);
                assert!(image.is_empty(), "boundary of a boundary is nonzero in degree {d}");
            }
        }
    }

    /// Applies `∂_d` to an integer chain of degree `d`.
    pub fn apply(&self, d: usize, chain: &[(usize, i64)]) -> SparseColumn {
        let mut acc = std::collections::BTreeMap::<usize, i64>::new();
        if d == 0 {
            return Vec::new();
        }
        for &(i, c) in chain {
            for &(r, e) in &self.boundaries[d][i] {
                *acc.entry(r).or_default() += c * e;
            }
        }
        acc.into_iter().filter(|&(_, v)| v != 0).collect()
    }

    pub fn rank_of_chains(&self, d: usize) -> usize {
        self.basis.get(d).map_or(0, Vec::len)
    }

    /// Indices into the complex's d-simplices of the quotient basis.
    pub fn basis(&self, d: usize) -> &[usize] {
        self.basis.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn boundary(&self, d: usize) -> &[SparseColumn] {
        self.boundaries.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn top(&self) -> usize {
        self.basis.len()
    }

    /// Rank of `∂_d` over the rationals.
    pub fn boundary_rank(&self, d: usize) -> usize {
        if d == 0 || d >= self.boundaries.len() {
            return 0;
        }
        rational_rank(&self.boundaries[d])
    }

    /// Betti numbers `b_0..=b_top` of the quotient complex.
    pub fn betti(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=self.top()).map(|d| self.boundary_rank(d)).collect();
        (0..self.top()).map(|d| self.rank_of_chains(d) - ranks[d] - ranks[d + 1]).collect()
    }
}

/// Exact rank of a sparse integer matrix by column reduction over the rationals.
pub fn rational_rank(columns: &[SparseColumn]) -> usize {
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, BigRational)>> = Default::default();
    let mut rank = 0;
    for col in columns {
        let mut v: Vec<(usize, BigRational)> = col.iter().map(|&(r, e)| (r, BigRational::from_integer(e.into()))).collect();
        while let Some((low, lead)) = v.last().cloned() {
            match pivots.get(&low) {
                Some(p) => {
                    let factor = &lead / &p.last().unwrap().1;
                    v = axpy(&v, &factor, p);
                }
                None => {
                    pivots.insert(low, v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// `v - factor * p` for sorted sparse vectors.
fn axpy(v: &[(usize, BigRational)], factor: &BigRational, p: &[(usize, BigRational)]) -> Vec<(usize, BigRational)> {
    let mut out = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < p.len() {
        if j >= p.len() || (i < v.len() && v[i].0 < p[j].0) {
            out.push(v[i].clone());
            i += 1;
        } else if i >= v.len() || p[j].0 < v[i].0 {
            out.push((p[j].0, -(factor * &p[j].1)));
            j += 1;
        } else {
            let x = &v[i].1 - factor * &p[j].1;
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Betti numbers of `K` or of the pair `(K, L)`.
pub fn betti(k: &SimplicialComplex, l: Option<&SimplicialComplex>) -> Vec<usize> {
    ChainComplex::new(k, l).betti()
}

/// Reduced Betti numbers: the augmentation only affects absolute homology of a nonempty complex.
pub fn reduced_betti(k: &SimplicialComplex, l: Option<&SimplicialComplex>) -> Vec<usize> {
    let mut b = betti(k, l);
    let relative = l.is_some_and(|l| !l.is_empty());
    if !relative && !b.is_empty() {
        b[0] -= 1;
    }
    b
}
