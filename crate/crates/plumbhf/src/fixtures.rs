//! Built-in example graphs.
//!
//! The Brieskorn family `sigma_2_family(n)` realizes Σ(2, 2n+1, 4n+3):
//! a central (-1)-vertex with three legs, a single -2, a single
//! -(4n+3), and a chain [-3, -2, ..., -2] with n-1 trailing -2s. The
//! shape is pinned by two checks used in the tests: the form is
//! unimodular (|det| = 1) and the U-kernel generators come out as
//! (1, 0, -1, -4n-3+2i, 0, ..., 0) for i = 1..2n.

use crate::error::{Error, Result};
use crate::graph::PlumbingGraph;
use crate::lattice::CharVector;

/// Star of four -2 vertices, center first. |det| = 4.
pub fn d4() -> PlumbingGraph {
    PlumbingGraph::new(vec![-2; 4], vec![(0, 1), (0, 2), (0, 3)]).expect("valid fixture")
}

/// Plumbing of Σ(3,5,7): central -2, a -3 leaf, a chain of four -2s,
/// and a chain of six -2s, in that vertex order. |det| = 1.
pub fn sigma_3_5_7() -> PlumbingGraph {
    let weights = {
        let mut w = vec![-2, -3];
        w.extend([-2; 10]);
        w
    };
    let edges = vec![
        (0, 1),
        (0, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (0, 6),
        (6, 7),
        (7, 8),
        (8, 9),
        (9, 10),
        (10, 11),
    ];
    PlumbingGraph::new(weights, edges).expect("valid fixture")
}

/// Eight-vertex Seifert star: center -4, six -2 legs, one -3 leg last.
/// The boundary is M(-4; 1/2 x6, 1/3) and |det| = 128.
pub fn seifert_star() -> PlumbingGraph {
    let mut weights = vec![-4];
    weights.extend([-2; 6]);
    weights.push(-3);
    let edges = (1..8).map(|v| (0, v)).collect();
    PlumbingGraph::new(weights, edges).expect("valid fixture")
}

/// Largest family index accepted by [`sigma_2_family`].
pub const FAMILY_MAX: u32 = 12;

/// Negative-definite plumbing of Σ(2, 2n+1, 4n+3) for `1 <= n <= FAMILY_MAX`.
pub fn sigma_2_family(n: u32) -> Result<PlumbingGraph> {
    if n < 1 || n > FAMILY_MAX {
        return Err(Error::InvalidInput(format!(
            "family index must be 1..={FAMILY_MAX}, got {n}"
        )));
    }
    let n = n as usize;
    let mut weights = vec![-1, -2, -3, -(4 * n as i32 + 3)];
    weights.extend(std::iter::repeat(-2).take(n - 1));
    let mut edges = vec![(0, 1), (0, 2), (0, 3)];
    let mut prev = 2;
    for v in 4..n + 3 {
        edges.push((prev, v));
        prev = v;
    }
    PlumbingGraph::new(weights, edges)
}

/// The U-kernel generators of the family fixture, lexicographically
/// sorted: (1, 0, -1, -4n-3+2i, 0, ..., 0) for i = 1..2n.
pub fn sigma_2_family_generators(n: u32) -> Vec<CharVector> {
    let n = n as usize;
    (1..=2 * n)
        .map(|i| {
            let mut x = vec![1, 0, -1, -(4 * n as i32 + 3) + 2 * i as i32];
            x.extend(std::iter::repeat(0).take(n - 1));
            CharVector::from_raw(x)
        })
        .collect()
}

/// Rotation numbers of the family's canonical Stein structure; the
/// Chern vector is the generator with fourth entry -(2n+3).
pub fn sigma_2_family_rotations(n: u32) -> Vec<i32> {
    let n = n as usize;
    let mut r = vec![1, 0, -1, -(2 * n as i32 + 3)];
    r.extend(std::iter::repeat(0).take(n - 1));
    r
}
