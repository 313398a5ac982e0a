//! Finite simplicial complexes and their rational homology.

mod chain;
mod complex;
mod pm;

pub use chain::{betti, rational_rank, reduced_betti, ChainComplex, SparseColumn};
pub use complex::{order_complex, SimplicialComplex, MAX_SIMPLICES};
pub use pm::{pm_verdict, PmVerdict};

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    pub(crate) fn projective_plane() -> SimplicialComplex {
        let facets = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
            [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
        ];
        SimplicialComplex::from_faces(names(6), facets).unwrap()
    }

    #[test]
    fn circle_and_disk() {
        let circle = SimplicialComplex::from_faces(names(3), [[0, 1], [1, 2], [0, 2]]).unwrap();
        assert_eq!(betti(&circle, None), vec![1, 1]);
        assert_eq!(reduced_betti(&circle, None), vec![0, 1]);
        let disk = SimplicialComplex::from_faces(names(3), [[0, 1, 2]]).unwrap();
        assert_eq!(betti(&disk, Some(&circle)), vec![0, 0, 1]);
    }

    #[test]
    fn projective_plane_over_rationals() {
        let rp2 = projective_plane();
        assert_eq!(rp2.face_counts(), vec![6, 15, 10]);
        assert_eq!(betti(&rp2, None), vec![1, 0, 0]);
        let v = pm_verdict(&rp2);
        assert!(v.pseudomanifold && v.gallery_connected && !v.orientable);
        assert!(v.fundamental_cycle.is_none());
    }

    #[test]
    fn order_complexes() {
        let chain = order_complex(vec!["a", "b", "c"], |i, j| i < j).unwrap();
        assert_eq!(chain.face_counts(), vec![3, 3, 1]);
        let anti = order_complex(vec!["a", "b", "c"], |_, _| false).unwrap();
        assert_eq!(anti.face_counts(), vec![3]);
    }

    #[test]
    fn verdicts() {
        let pentagon = SimplicialComplex::from_faces(names(5), (0..5).map(|i| [i, (i + 1) % 5])).unwrap();
        let v = pm_verdict(&pentagon);
        assert!(v.is_pm());
        assert_eq!(v.top_dimension, Some(1));
        let path = SimplicialComplex::from_faces(names(3), [[0, 1], [1, 2]]).unwrap();
        let v = pm_verdict(&path);
        assert!(!v.pseudomanifold && !v.orientable);
        let points = SimplicialComplex::from_faces(names(2), [[0], [1]]).unwrap();
        assert!(pm_verdict(&points).is_pm());
    }

    #[test]
    fn size_guard() {
        let big: Vec<Vec<usize>> = vec![(0..17).collect()];
        assert!(matches!(
            SimplicialComplex::from_faces(names(17), big),
            Err(crate::error::Error::ResourceExceeded(_))
        ));
    }
}
