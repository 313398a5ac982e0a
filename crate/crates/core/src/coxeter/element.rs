//! Elements of `W` as exact matrices in the geometric representation.

use std::cmp::Ordering;
use std::sync::Arc;

use super::field::{AlgebraicReal, NumberField};
use super::{CoxeterMatrix, GenSet, Order};
use crate::error::{Error, Result};

fn overflow() -> Error {
    Error::ResourceExceeded("integer overflow in matrix arithmetic".into())
}

/// Scalar arithmetic used by the matrix kernels. Scalars are `width()` consecutive `i64`s.
pub(crate) trait Arith: Sync {
    /// `dst -= a * src`
    fn sub_mul(&self, dst: &mut [i64], a: &[i64], src: &[i64]) -> Result<()>;
    fn sign(&self, x: &[i64]) -> Ordering;
    /// Sign of `x - a * y`.
    fn sign_after(&self, x: &[i64], a: &[i64], y: &[i64]) -> Result<Ordering> {
        let mut tmp = x.to_vec();
        self.sub_mul(&mut tmp, a, y)?;
        Ok(self.sign(&tmp))
    }
}

pub(crate) struct IntArith;

impl Arith for IntArith {
    #[inline]
    fn sub_mul(&self, dst: &mut [i64], a: &[i64], src: &[i64]) -> Result<()> {
        let p = a[0].checked_mul(src[0]).ok_or_else(overflow)?;
        dst[0] = dst[0].checked_sub(p).ok_or_else(overflow)?;
        Ok(())
    }

    #[inline]
    fn sign(&self, x: &[i64]) -> Ordering {
        x[0].cmp(&0)
    }

    #[inline]
    fn sign_after(&self, x: &[i64], a: &[i64], y: &[i64]) -> Result<Ordering> {
        let p = a[0].checked_mul(y[0]).ok_or_else(overflow)?;
        Ok(x[0].checked_sub(p).ok_or_else(overflow)?.cmp(&0))
    }
}

pub(crate) struct FieldArith<'a>(pub &'a NumberField);

impl Arith for FieldArith<'_> {
    fn sub_mul(&self, dst: &mut [i64], a: &[i64], src: &[i64]) -> Result<()> {
        self.0.mul_acc(a, src, -1, dst)
    }

    fn sign(&self, x: &[i64]) -> Ordering {
        self.0.sign(x)
    }
}

/// Which coordinate ring the representation uses.
#[derive(Clone, Debug)]
pub enum Backend {
    /// Crystallographic systems: an integral generalized Cartan matrix.
    Integer,
    /// `Z[2cos(pi/N)]` with `N` the lcm of the finite entries.
    Field(Arc<NumberField>),
}

/// The geometric representation of a Coxeter system, with `s(α_t) = α_t - a_st α_s`.
#[derive(Clone, Debug)]
pub struct Representation {
    matrix: CoxeterMatrix,
    backend: Backend,
    rank: usize,
    width: usize,
    /// `cartan[s][t*width..(t+1)*width]` holds `a_st`.
    cartan: Vec<Vec<i64>>,
    neighbours: Vec<Vec<usize>>,
    scalar_field: Arc<NumberField>,
}

/// An element of `W` with its length and lexicographically least reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    matrix: Vec<i64>,
    length: usize,
    word: Vec<usize>,
}

impl GroupElement {
    /// Column-major matrix coordinates; column `j` is the image of the simple root `α_j`.
    pub fn key(&self) -> &[i64] {
        &self.matrix
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Lexicographically least reduced word, as generator indices.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }
}

fn crystallographic(m: &CoxeterMatrix) -> bool {
    (0..m.rank()).all(|i| {
        (0..m.rank()).all(|j| i == j || matches!(m.m(i, j), Order::Finite(2 | 3 | 4 | 6) | Order::Infinity))
    })
}

/// Smallest `n` whose field `Q(2cos(pi/n))` holds every `2cos(pi/m_st)`. Entries 2 and 3
/// give the integers 0 and 1, so they do not enlarge the field.
fn field_order(matrix: &CoxeterMatrix) -> u32 {
    let n = matrix.rank();
    let mut l = 1u32;
    for i in 0..n {
        for j in i + 1..n {
            if let Order::Finite(m) = matrix.m(i, j) {
                if m > 3 {
                    l = num_integer::lcm(l, m);
                }
            }
        }
    }
    l.max(2)
}

impl Representation {
    /// Chooses the integer backend when every finite entry is 2, 3, 4 or 6.
    pub fn new(matrix: &CoxeterMatrix) -> Result<Self> {
        if crystallographic(matrix) {
            Self::build(matrix, false)
        } else {
            Self::build(matrix, true)
        }
    }

    /// Always uses the number-field backend.
    pub fn with_field(matrix: &CoxeterMatrix) -> Result<Self> {
        Self::build(matrix, true)
    }

    fn build(matrix: &CoxeterMatrix, field: bool) -> Result<Self> {
        let n = matrix.rank();
        let scalar_field = Arc::new(NumberField::new(2)?);
        let (backend, width) = if field {
            let f = Arc::new(NumberField::new(field_order(matrix))?);
            let w = f.degree();
            (Backend::Field(f), w)
        } else {
            (Backend::Integer, 1)
        };
        let mut cartan = vec![vec![0i64; n * width]; n];
        for s in 0..n {
            for t in 0..n {
                let entry: Vec<i64> = if s == t {
                    let mut two = vec![0i64; width];
                    two[0] = 2;
                    two
                } else {
                    match &backend {
                        Backend::Integer => vec![match matrix.m(s, t) {
                            Order::Finite(2) => 0,
                            Order::Finite(3) => -1,
                            Order::Finite(4) => if s < t { -1 } else { -2 },
                            Order::Finite(6) => if s < t { -1 } else { -3 },
                            Order::Infinity => -2,
                            Order::Finite(_) => unreachable!("non-crystallographic entry"),
                        }],
                        Backend::Field(f) => f.two_cos(matrix.m(s, t))?.iter().map(|c| -c).collect(),
                    }
                };
                cartan[s][t * width..(t + 1) * width].copy_from_slice(&entry);
            }
        }
        let neighbours = (0..n).map(|s| (0..n).filter(|&t| t != s && !matrix.commute(s, t)).collect()).collect();
        Ok(Representation { matrix: matrix.clone(), backend, rank: n, width, cartan, neighbours, scalar_field })
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of `i64` slots per scalar.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Length of a raw matrix key.
    pub fn key_len(&self) -> usize {
        self.rank * self.rank * self.width
    }

    pub(crate) fn neighbours(&self, s: usize) -> &[usize] {
        &self.neighbours[s]
    }

    pub(crate) fn cartan_entry(&self, s: usize, t: usize) -> &[i64] {
        &self.cartan[s][t * self.width..(t + 1) * self.width]
    }

    pub(crate) fn identity_key(&self) -> Vec<i64> {
        let mut m = vec![0i64; self.key_len()];
        for j in 0..self.rank {
            m[(j * self.rank + j) * self.width] = 1;
        }
        m
    }

    /// Runs `f` with the arithmetic kernel of this representation.
    pub(crate) fn with_arith<R>(&self, f: impl FnOnce(&dyn ArithDispatch) -> R) -> R {
        match &self.backend {
            Backend::Integer => f(&Kernel { rep: self, arith: IntArith }),
            Backend::Field(fl) => f(&Kernel { rep: self, arith: FieldArith(fl) }),
        }
    }

    /// Exact coordinate of `α_i` in `w(α_j)`.
    pub fn entry(&self, w: &GroupElement, i: usize, j: usize) -> AlgebraicReal {
        let off = (j * self.rank + i) * self.width;
        let raw = &w.matrix[off..off + self.width];
        match &self.backend {
            Backend::Integer => AlgebraicReal::from_integer_coords(self.scalar_field.clone(), raw),
            Backend::Field(f) => AlgebraicReal::from_integer_coords(f.clone(), raw),
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { matrix: self.identity_key(), length: 0, word: Vec::new() }
    }

    fn check_gen(&self, s: usize) -> Result<()> {
        if s >= self.rank {
            return Err(Error::UnknownGenerator(format!("#{s}")));
        }
        Ok(())
    }

    pub fn simple_reflection(&self, s: usize) -> Result<GroupElement> {
        self.multiply(&self.identity(), s)
    }

    /// Right descent set of a raw matrix key.
    pub fn descent_of_key(&self, key: &[i64]) -> GenSet {
        self.with_arith(|k| k.descent(key))
    }

    pub fn descent_set(&self, w: &GroupElement) -> GenSet {
        self.descent_of_key(&w.matrix)
    }

    /// `w s`, with length and canonical word updated.
    pub fn multiply(&self, w: &GroupElement, s: usize) -> Result<GroupElement> {
        self.check_gen(s)?;
        let down = self.descent_set(w).contains(s);
        let mut m = w.matrix.clone();
        self.with_arith(|k| k.right_mul(&mut m, s))?;
        let length = if down { w.length - 1 } else { w.length + 1 };
        let mut out = GroupElement { matrix: m, length, word: Vec::new() };
        let mut witness = w.word.clone();
        if down {
            // any reduced word for w s works as the unwinding seed
            witness = self.unwind(&out.matrix)?;
            witness.reverse();
        } else {
            witness.push(s);
        }
        out.word = self.canonical_from_reduced(&witness)?;
        Ok(out)
    }

    /// Element represented by an arbitrary word.
    pub fn element_from_word(&self, word: &[usize]) -> Result<GroupElement> {
        let mut w = self.identity();
        for &s in word {
            w = self.multiply(&w, s)?;
        }
        Ok(w)
    }

    /// Descent-greedy unwinding: repeatedly strips the smallest right descent.
    /// Returns the stripped letters in order (the reverse of a reduced word).
    pub fn unwind(&self, key: &[i64]) -> Result<Vec<usize>> {
        let mut m = key.to_vec();
        let mut out = Vec::new();
        self.with_arith(|k| -> Result<()> {
            loop {
                let d = k.descent(&m);
                let Some(s) = d.min() else { return Ok(()) };
                k.right_mul(&mut m, s)?;
                out.push(s);
            }
        })?;
        Ok(out)
    }

    /// Lexicographically least reduced word of the element with the given reduced word.
    pub fn canonical_from_reduced(&self, reduced: &[usize]) -> Result<Vec<usize>> {
        // the inverse's right descents are the element's left descents
        let mut inv = self.identity_key();
        self.with_arith(|k| -> Result<Vec<usize>> {
            for &s in reduced.iter().rev() {
                k.right_mul(&mut inv, s)?;
            }
            let mut word = Vec::with_capacity(reduced.len());
            loop {
                let d = k.descent(&inv);
                let Some(s) = d.min() else { return Ok(word) };
                k.right_mul(&mut inv, s)?;
                word.push(s);
            }
        })
    }

    /// Whether `word` is reduced.
    pub fn is_reduced(&self, word: &[usize]) -> Result<bool> {
        let mut m = self.identity_key();
        self.with_arith(|k| -> Result<bool> {
            for &s in word {
                if k.descent(&m).contains(s) {
                    return Ok(false);
                }
                k.right_mul(&mut m, s)?;
            }
            Ok(true)
        })
    }

    /// Rebuilds an element from a raw key and a reduced word for it.
    pub fn element_from_parts(&self, key: Vec<i64>, reduced: &[usize]) -> Result<GroupElement> {
        let word = self.canonical_from_reduced(reduced)?;
        Ok(GroupElement { matrix: key, length: word.len(), word })
    }
}

/// Object-safe view of the arithmetic kernels.
pub(crate) trait ArithDispatch {
    fn right_mul(&self, m: &mut [i64], s: usize) -> Result<()>;
    fn descent(&self, m: &[i64]) -> GenSet;
    fn column_negative(&self, m: &[i64], j: usize) -> bool;
}

pub(crate) struct Kernel<'a, A: Arith> {
    pub rep: &'a Representation,
    pub arith: A,
}

impl<A: Arith> Kernel<'_, A> {
    #[inline]
    pub fn col_len(&self) -> usize {
        self.rep.rank * self.rep.width
    }


    /// Whether column `t` of `m s` is a negative root (for `t != s`), without building it.
    #[inline]
    pub fn root_after_negative(&self, m: &[i64], s: usize, t: usize) -> Result<bool> {
        let cl = self.col_len();
        let w = self.rep.width;
        let a = self.rep.cartan_entry(s, t);
        let dst = &m[t * cl..(t + 1) * cl];
        let src = &m[s * cl..(s + 1) * cl];
        for i in 0..self.rep.rank {
            match self.arith.sign_after(&dst[i * w..(i + 1) * w], a, &src[i * w..(i + 1) * w])? {
                Ordering::Equal => continue,
                o => return Ok(o == Ordering::Less),
            }
        }
        Ok(false)
    }

    /// Whether a root (given as a column) is negative.
    #[inline]
    pub fn root_negative(&self, col: &[i64]) -> bool {
        let w = self.rep.width;
        for i in 0..self.rep.rank {
            let x = &col[i * w..(i + 1) * w];
            if x.iter().any(|&c| c != 0) {
                return self.arith.sign(x) == Ordering::Less;
            }
        }
        false
    }

    #[inline]
    pub fn right_mul_in_place(&self, m: &mut [i64], s: usize) -> Result<()> {
        let cl = self.col_len();
        let w = self.rep.width;
        let (before, rest) = m.split_at_mut(s * cl);
        let (src, after) = rest.split_at_mut(cl);
        for &t in self.rep.neighbours(s) {
            let a = self.rep.cartan_entry(s, t);
            let dst = if t < s { &mut before[t * cl..(t + 1) * cl] } else { &mut after[(t - s - 1) * cl..(t - s) * cl] };
            for i in 0..self.rep.rank {
                self.arith.sub_mul(&mut dst[i * w..(i + 1) * w], a, &src[i * w..(i + 1) * w])?;
            }
        }
        for x in src.iter_mut() {
            *x = -*x;
        }
        Ok(())
    }
}

impl<A: Arith> ArithDispatch for Kernel<'_, A> {
    fn right_mul(&self, m: &mut [i64], s: usize) -> Result<()> {
        self.right_mul_in_place(m, s)
    }

    fn descent(&self, m: &[i64]) -> GenSet {
        let mut d = GenSet::EMPTY;
        for j in 0..self.rep.rank {
            if self.column_negative(m, j) {
                d = d.with(j);
            }
        }
        d
    }

    fn column_negative(&self, m: &[i64], j: usize) -> bool {
        let cl = self.col_len();
        self.root_negative(&m[j * cl..(j + 1) * cl])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::systems::*;

    #[test]
    fn involution_and_identity() {
        let m = triangle(3, 3, 3);
        let rep = Representation::new(&m).unwrap();
        let s = rep.simple_reflection(0).unwrap();
        assert_eq!(s.length(), 1);
        let ss = rep.multiply(&s, 0).unwrap();
        assert!(ss.is_identity());
        assert_eq!(ss, rep.identity());
        assert_eq!(rep.descent_set(&rep.identity()), GenSet::EMPTY);
    }

    #[test]
    fn commuting_reflection_is_diagonal() {
        let m = dihedral(2);
        let rep = Representation::new(&m).unwrap();
        let s = rep.simple_reflection(0).unwrap();
        assert_eq!(s.key(), &[-1, 0, 0, 1]);
    }

    #[test]
    fn golden_ratio_entry() {
        let rep = Representation::new(&dihedral(5)).unwrap();
        assert!(matches!(rep.backend(), Backend::Field(_)));
        let s = rep.simple_reflection(0).unwrap();
        // s(α_t) = α_t + φ α_s
        let e = rep.entry(&s, 0, 1);
        assert!((e.to_f64() - 1.618_033_988_749_895).abs() < 1e-12);
        let poly = e.field().minimal_polynomial().to_vec();
        assert_eq!(poly, vec![-1, -1, 1]);
    }

    #[test]
    fn infinite_dihedral_words() {
        let rep = Representation::new(&infinite_dihedral()).unwrap();
        let w = rep.element_from_word(&[0, 1, 0, 1, 0, 1]).unwrap();
        assert_eq!(w.length(), 6);
        assert_eq!(w.word(), &[0, 1, 0, 1, 0, 1]);
        let sts = rep.element_from_word(&[0, 1, 0]).unwrap();
        assert_eq!(rep.descent_set(&sts), GenSet::singleton(0));
    }

    #[test]
    fn longest_element_of_a2() {
        let rep = Representation::new(&type_a(2)).unwrap();
        let w0 = rep.element_from_word(&[1, 0, 1]).unwrap();
        assert_eq!(w0.length(), 3);
        assert_eq!(w0.word(), &[0, 1, 0]);
        assert_eq!(rep.descent_set(&w0), GenSet::from_indices([0, 1]));
        let four = rep.multiply(&w0, 0).unwrap();
        assert_eq!(four.length(), 2);
    }

    #[test]
    fn integer_and_field_backends_agree_on_lengths() {
        let m = type_b(3);
        let a = Representation::new(&m).unwrap();
        let b = Representation::with_field(&m).unwrap();
        let word = [0, 1, 2, 1, 0, 2, 1, 2, 0];
        let x = a.element_from_word(&word).unwrap();
        let y = b.element_from_word(&word).unwrap();
        assert_eq!(x.length(), y.length());
        assert_eq!(x.word(), y.word());
    }
}
