//! Plumbing trees, their intersection forms, and validation.
//!
//! A plumbing graph is a connected weighted tree. Vertices are indexed
//! `0..n` in file order; that order fixes the coordinate order of every
//! vector downstream. The intersection form has the weights on the
//! diagonal and a 1 for every edge, and is inverted exactly over the
//! rationals.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingGraph {
    weights: Vec<i32>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl PlumbingGraph {
    /// Builds a graph from vertex weights and edges, checking the tree
    /// invariants (no self-loops, no duplicate edges, connected, acyclic).
    pub fn new(weights: Vec<i32>, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        for e in edges.iter_mut() {
            if e.0 == e.1 {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {}", e.0)));
            }
            if e.0 >= n || e.1 >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {}-{} mentions an unknown vertex",
                    e.0, e.1
                )));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }

        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }

        // connectivity by BFS from vertex 0
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached != n {
            return Err(Error::InvalidGraph("graph is disconnected".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidGraph("cycle detected".into()));
        }

        Ok(PlumbingGraph {
            weights,
            edges,
            adjacency,
        })
    }

    /// Parses the text graph format: `v <id> <weight>` and `e <id> <id>`
    /// records, one per line, `#` starting a comment. Vertex ids must be
    /// exactly `0..n-1`; file order of the `v` records fixes the vertex
    /// order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut declared: Vec<(usize, i32)> = Vec::new();
        let mut edges: Vec<(usize, usize, usize)> = Vec::new(); // (a, b, line)

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut tok = content.split_whitespace();
            let Some(kind) = tok.next() else { continue };
            let parse_int = |s: Option<&str>, what: &str| -> Result<i64> {
                let s = s.ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("missing {what}"),
                })?;
                s.parse::<i64>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad {what} `{s}`"),
                })
            };
            match kind {
                "v" => {
                    let id = parse_int(tok.next(), "vertex id")?;
                    let w = parse_int(tok.next(), "weight")?;
                    if id < 0 {
                        return Err(Error::Parse {
                            line,
                            msg: "vertex id must be non-negative".into(),
                        });
                    }
                    if w < i32::MIN as i64 || w > i32::MAX as i64 {
                        return Err(Error::Parse {
                            line,
                            msg: "weight out of range".into(),
                        });
                    }
                    declared.push((id as usize, w as i32));
                }
                "e" => {
                    let a = parse_int(tok.next(), "vertex id")?;
                    let b = parse_int(tok.next(), "vertex id")?;
                    if a < 0 || b < 0 {
                        return Err(Error::Parse {
                            line,
                            msg: "vertex id must be non-negative".into(),
                        });
                    }
                    edges.push((a as usize, b as usize, line));
                }
                other => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("unknown record `{other}`"),
                    })
                }
            }
            if tok.next().is_some() {
                return Err(Error::Parse {
                    line,
                    msg: "trailing tokens".into(),
                });
            }
        }

        let n = declared.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut weights = vec![None; n];
        for (id, w) in declared {
            if id >= n {
                return Err(Error::InvalidGraph(format!(
                    "vertex ids must be 0..{} but found {id}",
                    n - 1
                )));
            }
            if weights[id].replace(w).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id {id}")));
            }
        }
        let weights: Vec<i32> = weights.into_iter().map(|w| w.unwrap()).collect();

        for &(a, b, line) in &edges {
            if a >= n || b >= n {
                return Err(Error::Parse {
                    line,
                    msg: format!("edge {a}-{b} mentions an unknown vertex"),
                });
            }
        }
        Self::new(weights, edges.into_iter().map(|(a, b, _)| (a, b)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, v: usize) -> i32 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[i32] {
        &self.weights
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Vertices with `m(v) + d(v) > 0`.
    pub fn bad_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.weight(v) as i64 + self.degree(v) as i64 > 0)
            .collect()
    }
}

fn intersection_matrix(graph: &PlumbingGraph) -> Vec<Vec<i32>> {
    let n = graph.vertex_count();
    let mut m = vec![vec![0i32; n]; n];
    for v in 0..n {
        m[v][v] = graph.weight(v);
    }
    for &(a, b) in graph.edges() {
        m[a][b] = 1;
        m[b][a] = 1;
    }
    m
}

/// Fraction-free determinant (Bareiss) with row pivoting.
fn determinant(matrix: &[Vec<i32>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev; // exact by Bareiss
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

fn leading_principal_minors(matrix: &[Vec<i32>]) -> Vec<BigInt> {
    (1..=matrix.len())
        .map(|k| {
            let sub: Vec<Vec<i32>> = matrix[..k].iter().map(|row| row[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

/// The intersection form of a plumbing graph together with its exact
/// rational inverse and integer determinant.
#[derive(Debug, Clone)]
pub struct IntersectionForm {
    matrix: Vec<Vec<i32>>,
    inverse: Vec<Vec<BigRational>>,
    determinant: BigInt,
}

impl IntersectionForm {
    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i32>] {
        &self.matrix
    }

    pub fn row(&self, v: usize) -> &[i32] {
        &self.matrix[v]
    }

    pub fn weight(&self, v: usize) -> i32 {
        self.matrix[v][v]
    }

    pub fn weights(&self) -> Vec<i32> {
        (0..self.n()).map(|v| self.matrix[v][v]).collect()
    }

    pub fn determinant(&self) -> &BigInt {
        &self.determinant
    }

    pub fn inverse(&self) -> &[Vec<BigRational>] {
        &self.inverse
    }

    /// `I^{-1} x` as exact rationals.
    pub fn solve(&self, x: &[i32]) -> Vec<BigRational> {
        self.inverse
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .map(|(a, &b)| a * BigRational::from(BigInt::from(b)))
                    .sum()
            })
            .collect()
    }
}

/// Builds the intersection form of `graph`, rejecting singular forms.
pub fn intersection_form(graph: &PlumbingGraph) -> Result<IntersectionForm> {
    let matrix = intersection_matrix(graph);
    let det = determinant(&matrix);
    if det.is_zero() {
        return Err(Error::SingularForm);
    }
    let n = matrix.len();

    // Gauss-Jordan over exact rationals.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from(BigInt::from(matrix[i][j]))
                    } else {
                        BigRational::from(BigInt::from((j - n == i) as i32))
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("nonsingular");
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= piv.clone();
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let t = &a[c][j] * &f;
                    a[r][j] -= t;
                }
            }
        }
    }
    let inverse: Vec<Vec<BigRational>> = a.into_iter().map(|row| row[n..].to_vec()).collect();

    let form = IntersectionForm {
        matrix,
        inverse,
        determinant: det,
    };
    debug_assert!(form.check_inverse());
    Ok(form)
}

impl IntersectionForm {
    /// `matrix * inverse == identity`, exactly.
    pub fn check_inverse(&self) -> bool {
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                let s: BigRational = (0..n)
                    .map(|k| {
                        BigRational::from(BigInt::from(self.matrix[i][k])) * &self.inverse[k][j]
                    })
                    .sum();
                let want = BigRational::from(BigInt::from((i == j) as i32));
                if s != want {
                    return false;
                }
            }
        }
        true
    }
}

/// How much of the pipeline a graph supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// Negative definite with at most one bad vertex.
    Full,
    /// Negative definite with exactly two bad vertices; homology
    /// computations only see even-degree generators, so the contact
    /// checks refuse to run.
    EvenDegreesOnly,
    /// Not negative definite, or more than two bad vertices.
    Unsupported,
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Support::Full => "FULL",
            Support::EvenDegreesOnly => "EVEN_DEGREES_ONLY",
            Support::Unsupported => "UNSUPPORTED",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub is_tree: bool,
    pub negative_definite: bool,
    pub determinant: BigInt,
    pub bad_vertices: Vec<usize>,
    pub support: Support,
}

/// Checks definiteness (Sylvester, exact leading principal minors) and
/// counts bad vertices. All findings go in the report; nothing errors.
pub fn validate(graph: &PlumbingGraph) -> ValidationReport {
    let matrix = intersection_matrix(graph);
    let minors = leading_principal_minors(&matrix);
    let negative_definite = minors
        .iter()
        .enumerate()
        .all(|(i, m)| !m.is_zero() && (m.is_negative() == (i % 2 == 0)));
    let determinant = minors.last().cloned().unwrap_or_else(BigInt::one);
    let bad_vertices = graph.bad_vertices();
    let support = if !negative_definite {
        Support::Unsupported
    } else {
        match bad_vertices.len() {
            0 | 1 => Support::Full,
            2 => Support::EvenDegreesOnly,
            _ => Support::Unsupported,
        }
    };
    ValidationReport {
        is_tree: true,
        negative_definite,
        determinant,
        bad_vertices,
        support,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn d4() -> PlumbingGraph {
        PlumbingGraph::new(vec![-2; 4], vec![(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn parse_single_vertex() {
        let g = PlumbingGraph::parse("v 0 -2\n").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.weight(0), -2);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn parse_d4_star() {
        let text = "# central vertex first\nv 0 -2\nv 1 -2\nv 2 -2\nv 3 -2\ne 0 1\ne 0 2\ne 0 3\n";
        let g = PlumbingGraph::parse(text).unwrap();
        assert_eq!(g, d4());
        let form = intersection_form(&g).unwrap();
        assert_eq!(form.determinant(), &BigInt::from(4));
    }

    #[test]
    fn parse_rejects_self_loop() {
        let err = PlumbingGraph::parse("v 0 -2\ne 0 0\n").unwrap_err();
        assert!(matches!(err, Error::InvalidGraph(_)), "{err}");
    }

    #[test]
    fn parse_rejects_duplicate_id() {
        let err = PlumbingGraph::parse("v 0 -2\nv 0 -3\n").unwrap_err();
        assert!(err.to_string().contains("duplicate vertex id"));
    }

    #[test]
    fn parse_rejects_unknown_edge_endpoint() {
        let err = PlumbingGraph::parse("v 0 -2\nv 1 -2\ne 0 5\n").unwrap_err();
        assert!(err.to_string().contains("unknown vertex"));
    }

    #[test]
    fn parse_rejects_disconnected() {
        let err = PlumbingGraph::parse("v 0 -2\nv 1 -2\n").unwrap_err();
        assert!(err.to_string().contains("disconnected"));
    }

    #[test]
    fn parse_rejects_cycle() {
        let err =
            PlumbingGraph::parse("v 0 -2\nv 1 -2\nv 2 -2\ne 0 1\ne 1 2\ne 2 0\n").unwrap_err();
        assert!(err.to_string().contains("cycle"));
    }

    #[test]
    fn parse_rejects_malformed_line() {
        let err = PlumbingGraph::parse("v 0 -2\nq 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn single_vertex_form() {
        let g = PlumbingGraph::parse("v 0 -5\n").unwrap();
        let form = intersection_form(&g).unwrap();
        assert_eq!(form.determinant(), &BigInt::from(-5));
        assert_eq!(
            form.inverse()[0][0],
            BigRational::new(BigInt::from(-1), BigInt::from(5))
        );
    }

    #[test]
    fn singular_form_rejected() {
        // degree-4 star of -2s has determinant 0
        let g = PlumbingGraph::new(vec![-2; 5], vec![(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert!(matches!(intersection_form(&g), Err(Error::SingularForm)));
        let report = validate(&g);
        assert!(!report.negative_definite);
        assert_eq!(report.support, Support::Unsupported);
    }

    #[test]
    fn validate_d4() {
        let report = validate(&d4());
        assert!(report.negative_definite);
        assert_eq!(report.bad_vertices, vec![0]); // center: -2 + 3 > 0
        assert_eq!(report.support, Support::Full);
    }

    #[test]
    fn validate_positive_vertex() {
        let g = PlumbingGraph::parse("v 0 1\n").unwrap();
        let report = validate(&g);
        assert!(!report.negative_definite);
        assert_eq!(report.support, Support::Unsupported);
    }

    #[test]
    fn inverse_is_exact() {
        let g = crate::fixtures::sigma_3_5_7();
        let form = intersection_form(&g).unwrap();
        assert!(form.check_inverse());
        assert_eq!(form.determinant(), &BigInt::from(1));
    }

    #[test]
    fn eight_vertex_star_determinant() {
        let g = crate::fixtures::seifert_star();
        let form = intersection_form(&g).unwrap();
        assert_eq!(form.determinant(), &BigInt::from(128));
        assert_eq!(validate(&g).support, Support::Full);
    }
}
