use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::chain::ChainComplex;
use super::complex::{drop_vertex, SimplicialComplex};

/// Pseudomanifold, gallery-connectivity and orientability data of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PmVerdict {
    pub purely_dimensional: bool,
    pub pseudomanifold: bool,
    pub gallery_connected: bool,
    pub orientable: bool,
    pub top_dimension: Option<usize>,
    /// Signs of the top simplices (in the complex's order) forming a cycle.
    pub fundamental_cycle: Option<Vec<i8>>,
}

impl PmVerdict {
    /// Orientable, gallery connected pseudomanifold.
    pub fn is_pm(&self) -> bool {
        self.purely_dimensional && self.pseudomanifold && self.gallery_connected && self.orientable
    }
}

/// Decides the pseudomanifold predicates.
///
/// In dimension 0 the codimension-one face of every point is empty: the
/// complex counts as a pseudomanifold exactly when it has two points, which
/// are then gallery connected and oriented by opposite signs.
pub fn pm_verdict(k: &SimplicialComplex) -> PmVerdict {
    let Some(n) = k.dimension() else {
        return PmVerdict {
            purely_dimensional: true,
            pseudomanifold: false,
            gallery_connected: false,
            orientable: false,
            top_dimension: None,
            fundamental_cycle: None,
        };
    };
    let maximal = k.maximal_simplices();
    let purely_dimensional = maximal.iter().all(|s| s.len() == n + 1);
    let top = k.simplices(n);

    if n == 0 {
        let two = top.len() == 2;
        return PmVerdict {
            purely_dimensional,
            pseudomanifold: two,
            gallery_connected: top.len() <= 2 || two,
            orientable: two,
            top_dimension: Some(0),
            fundamental_cycle: two.then(|| vec![1, -1]),
        };
    }

    // codimension-one face -> incident top simplices with incidence signs
    let mut incidence: HashMap<Vec<usize>, Vec<(usize, i8)>> = HashMap::new();
    for (i, s) in top.iter().enumerate() {
        for j in 0..s.len() {
            incidence.entry(drop_vertex(s, j)).or_default().push((i, if j % 2 == 0 { 1 } else { -1 }));
        }
    }
    let pseudomanifold = purely_dimensional
        && k.simplices(n - 1).iter().all(|f| incidence.get(f).is_some_and(|v| v.len() == 2));

    let mut adjacency: Vec<Vec<(usize, i8)>> = vec![Vec::new(); top.len()];
    for v in incidence.values() {
        for a in 0..v.len() {
            for b in 0..v.len() {
                if a != b {
                    // relative sign making the shared face cancel
                    adjacency[v[a].0].push((v[b].0, -v[a].1 * v[b].1));
                }
            }
        }
    }
    let mut sign = vec![0i8; top.len()];
    let mut components = 0;
    let mut consistent = true;
    for start in 0..top.len() {
        if sign[start] != 0 {
            continue;
        }
        components += 1;
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &(b, rel) in &adjacency[a] {
                let want = sign[a] * rel;
                if sign[b] == 0 {
                    sign[b] = want;
                    queue.push_back(b);
                } else if sign[b] != want {
                    consistent = false;
                }
            }
        }
    }
    let gallery_connected = purely_dimensional && components == 1;
    let mut orientable = pseudomanifold && consistent;
    if orientable {
        let cc = ChainComplex::new(k, None);
        let chain: Vec<(usize, i64)> = sign.iter().enumerate().map(|(i, &s)| (i, s as i64)).collect();
        orientable = cc.apply(n, &chain).is_empty();
    }
    PmVerdict {
        purely_dimensional,
        pseudomanifold,
        gallery_connected,
        orientable,
        top_dimension: Some(n),
        fundamental_cycle: orientable.then_some(sign),
    }
}
