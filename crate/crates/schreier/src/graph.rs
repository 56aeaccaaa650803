//! Finite labelled digraphs and the group presentations they define.
//!
//! A labelled digraph has distinct named vertices and integer-labelled
//! edges. Labels are nonzero; only the magnitude `m = |label|` matters to
//! the group, where an edge `u ->m v` contributes the relator
//! `[u, v^m] = u v^m u^-1 v^-m`. Edges with `m = 1` are symmetric in the
//! group, so they are stored undirected (endpoint order normalized); at
//! most one edge may join an unordered pair of vertices, loops are
//! rejected, and when every label is 1 the construction is the usual
//! right-angled Artin group of the underlying undirected graph.

use crate::present::Presentation;
use crate::words::{commutator, valid_name, Alphabet, Word};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid vertex name {0:?}")]
    BadName(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("edge {from:?} -> {to:?} has label 0")]
    ZeroLabel { from: String, to: String },
    #[error("loop at vertex {0:?}")]
    Loop(String),
    #[error("vertices {0:?} and {1:?} are joined by more than one edge")]
    DuplicateEdge(String, String),
    #[error("malformed graph json: {0}")]
    Json(String),
}

/// One edge. `given` keeps the label as written (sign and all); the group
/// only sees `label() = |given|`. Edges with magnitude 1 are undirected
/// and normalized so `from <= to`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    given: i64,
}

impl Edge {
    pub fn label(&self) -> i64 {
        self.given.abs()
    }

    pub fn given(&self) -> i64 {
        self.given
    }

    pub fn is_undirected(&self) -> bool {
        self.label() == 1
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LabelledDigraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<(String, i64, String)>,
}

impl LabelledDigraph {
    pub fn new<S: Into<String>>(
        vertices: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (S, i64, S)>,
    ) -> Result<Self, GraphError> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for v in &vertices {
            if !valid_name(v) {
                return Err(GraphError::BadName(v.clone()));
            }
            if !seen.insert(v.clone()) {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let index = |name: &str| -> Result<usize, GraphError> {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
        };
        let mut out = Vec::new();
        let mut pairs = HashSet::new();
        for (from, given, to) in edges {
            let from = from.into();
            let to = to.into();
            let (mut f, mut t) = (index(&from)?, index(&to)?);
            if given == 0 {
                return Err(GraphError::ZeroLabel { from, to });
            }
            if f == t {
                return Err(GraphError::Loop(from));
            }
            if !pairs.insert((f.min(t), f.max(t))) {
                return Err(GraphError::DuplicateEdge(from, to));
            }
            if given.abs() == 1 && f > t {
                std::mem::swap(&mut f, &mut t);
            }
            out.push(Edge { from: f, to: t, given });
        }
        Ok(LabelledDigraph { vertices: vertices.clone(), edges: out })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edge_between(u, v).is_some()
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| (e.from == u && e.to == v) || (e.from == v && e.to == u))
    }

    pub fn all_labels_one(&self) -> bool {
        self.edges.iter().all(|e| e.label() == 1)
    }

    /// Forgets labels and orientation.
    pub fn underlying_undirected(&self) -> UndirectedGraph {
        let mut g = UndirectedGraph::empty(self.vertices.clone());
        for e in &self.edges {
            g.add_edge(e.from, e.to);
        }
        g
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let raw: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        LabelledDigraph::new(raw.vertices, raw.edges)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let raw = GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    (self.vertices[e.from].clone(), e.given, self.vertices[e.to].clone())
                })
                .collect(),
        };
        serde_json::to_value(raw).expect("graph serializes")
    }
}

/// Brute-force labelled-digraph isomorphism. Intended for the small named
/// graphs in this crate; cost is |V|! permutations.
pub fn are_isomorphic(g: &LabelledDigraph, h: &LabelledDigraph) -> bool {
    if g.vertex_count() != h.vertex_count() || g.edges.len() != h.edges.len() {
        return false;
    }
    fn edge_set(g: &LabelledDigraph, perm: Option<&[usize]>) -> Vec<(usize, usize, i64)> {
        let mut out: Vec<(usize, usize, i64)> = g
            .edges
            .iter()
            .map(|e| {
                let (mut f, mut t) = match perm {
                    Some(p) => (p[e.from], p[e.to]),
                    None => (e.from, e.to),
                };
                if e.is_undirected() && f > t {
                    std::mem::swap(&mut f, &mut t);
                }
                (f, t, e.label())
            })
            .collect();
        out.sort_unstable();
        out
    }
    let target = edge_set(h, None);
    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm.
    let mut c = vec![0usize; n];
    if edge_set(g, Some(&perm)) == target {
        return true;
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if edge_set(g, Some(&perm)) == target {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

/// The group of a labelled graph: one generator per vertex, one relator
/// `[u, v^m]` per edge `u ->m v`, in edge order.
pub fn build_bgamma(g: &LabelledDigraph) -> Presentation {
    let alphabet = Alphabet::new(g.vertices().to_vec()).expect("vertex names validated");
    let relators: Vec<Word> = g
        .edges()
        .iter()
        .map(|e| {
            let u = Word::generator(crate::words::GeneratorId(e.from));
            let v = Word::generator_power(crate::words::GeneratorId(e.to), e.label());
            commutator(&u, &v)
        })
        .collect();
    Presentation::new(alphabet, relators).expect("edge relators are nonempty")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DetectError {
    #[error("relator {index} is not of the form [x, y^m]: {detail}")]
    NotEdgeShaped { index: usize, detail: String },
    #[error("generators {0:?} and {1:?} appear together in more than one relator")]
    AmbiguousPair(String, String),
}

/// Reads a presentation back as a labelled graph, if every relator is
/// `[x, y^m]` with `m >= 1`. Inverse to `build_bgamma` up to edge signs.
pub fn detect_rabsag(p: &Presentation) -> Result<LabelledDigraph, DetectError> {
    let alpha = p.alphabet();
    let mut edges: Vec<(String, i64, String)> = Vec::new();
    let mut pairs: HashSet<(usize, usize)> = HashSet::new();
    for (index, r) in p.relators().iter().enumerate() {
        let bad = |detail: &str| DetectError::NotEdgeShaped { index, detail: detail.into() };
        let mut gens: Vec<(usize, u64)> = Vec::new();
        for (g, e) in r.syllables() {
            match gens.iter_mut().find(|(h, _)| *h == g.0) {
                Some((_, count)) => *count += e.unsigned_abs(),
                None => gens.push((g.0, e.unsigned_abs())),
            }
        }
        if gens.len() != 2 {
            return Err(bad(&format!("{} distinct generators", gens.len())));
        }
        let (x, y, m) = match (gens[0], gens[1]) {
            ((x, 2), (y, my)) if my >= 2 && my % 2 == 0 => (x, y, (my / 2) as i64),
            ((y, my), (x, 2)) if my >= 2 && my % 2 == 0 => (x, y, (my / 2) as i64),
            _ => return Err(bad("letter counts do not fit x twice, y an even number of times")),
        };
        if x == y {
            return Err(bad("only one generator"));
        }
        let x_id = crate::words::GeneratorId(x);
        let y_id = crate::words::GeneratorId(y);
        let shape = commutator(&Word::generator(x_id), &Word::generator_power(y_id, m));
        if r.canonical_cyclic() != shape.canonical_cyclic() {
            return Err(bad("not a commutator of the expected shape"));
        }
        if !pairs.insert((x.min(y), x.max(y))) {
            return Err(DetectError::AmbiguousPair(
                alpha.name(x_id).to_string(),
                alpha.name(y_id).to_string(),
            ));
        }
        edges.push((alpha.name(x_id).to_string(), m, alpha.name(y_id).to_string()));
    }
    Ok(LabelledDigraph::new(alpha.names().to_vec(), edges).expect("validated edge list"))
}

/// Specializes `detect_rabsag` to the label-1 case: every relator must be a
/// commutator of two generators.
pub fn detect_raag(p: &Presentation) -> Result<UndirectedGraph, DetectError> {
    let g = detect_rabsag(p)?;
    if let Some(e) = g.edges().iter().find(|e| e.label() != 1) {
        return Err(DetectError::NotEdgeShaped {
            index: g.edges().iter().position(|x| x == e).unwrap(),
            detail: format!("exponent {} on second generator", e.label()),
        });
    }
    Ok(g.underlying_undirected())
}

/// A witness for an induced subgraph `a -1- b ->k c` with `a`, `c`
/// non-adjacent and `k >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct P3kWitness {
    pub undirected_leaf: usize,
    pub center: usize,
    pub directed_leaf: usize,
    pub k: i64,
}

/// First induced path `a -1- b ->k c` (k >= 2) in scan order, if any.
pub fn find_induced_p3k(g: &LabelledDigraph) -> Option<P3kWitness> {
    let n = g.vertex_count();
    for b in 0..n {
        for a in 0..n {
            let Some(e1) = g.edge_between(a, b) else { continue };
            if !e1.is_undirected() {
                continue;
            }
            for e2 in g.edges() {
                if e2.from != b || e2.label() < 2 {
                    continue;
                }
                let c = e2.to;
                if c != a && !g.adjacent(a, c) {
                    return Some(P3kWitness {
                        undirected_leaf: a,
                        center: b,
                        directed_leaf: c,
                        k: e2.label(),
                    });
                }
            }
        }
    }
    None
}

/// If the graph is a star `x0 ->l xi` (all edges sharing one source, one
/// common label, each leaf hit once), returns (leaf count, label).
pub fn detect_star(g: &LabelledDigraph) -> Option<(usize, i64)> {
    let n = g.vertex_count();
    if n < 2 || g.edges().len() != n - 1 {
        return None;
    }
    let label = g.edges()[0].label();
    if !g.edges().iter().all(|e| e.label() == label) {
        return None;
    }
    'center: for c in 0..n {
        let mut seen = HashSet::new();
        for e in g.edges() {
            let leaf = if e.from == c {
                e.to
            } else if e.is_undirected() && e.to == c {
                e.from
            } else {
                continue 'center;
            };
            if !seen.insert(leaf) {
                continue 'center;
            }
        }
        return Some((n - 1, label));
    }
    None
}

// Named constructions.

/// Star with center `x0` and `k` leaves, each edge labelled `l` out of the
/// center.
pub fn make_star(k: usize, l: i64) -> LabelledDigraph {
    let vertices: Vec<String> = (0..=k).map(|i| format!("x{i}")).collect();
    let edges: Vec<(String, i64, String)> =
        (1..=k).map(|i| ("x0".to_string(), l, format!("x{i}"))).collect();
    LabelledDigraph::new(vertices, edges).expect("star is valid")
}

/// Bristled star: center `x0` joined plainly to arms `x1..xl`; each arm
/// carries `k-1` bristles `xi_1..xi_{k-1}` on edges labelled `l` out of
/// the arm.
pub fn make_bristled(k: usize, l: i64) -> LabelledDigraph {
    assert!(k >= 1 && l >= 1);
    let mut vertices = vec!["x0".to_string()];
    let mut edges = Vec::new();
    for i in 1..=l {
        let arm = format!("x{i}");
        vertices.push(arm.clone());
        edges.push(("x0".to_string(), 1, arm.clone()));
        for j in 1..k {
            let bristle = format!("x{i}_{j}");
            vertices.push(bristle.clone());
            edges.push((arm.clone(), l, bristle));
        }
    }
    LabelledDigraph::new(vertices, edges).expect("bristled star is valid")
}

/// Path `x0 - x1 - ... - x{n-1}`, all labels 1.
pub fn path_graph(n: usize) -> LabelledDigraph {
    let vertices: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let edges: Vec<(String, i64, String)> =
        (1..n).map(|i| (format!("x{}", i - 1), 1, format!("x{i}"))).collect();
    LabelledDigraph::new(vertices, edges).expect("path is valid")
}

/// Cycle on `n >= 3` vertices, all labels 1.
pub fn cycle_graph(n: usize) -> LabelledDigraph {
    assert!(n >= 3);
    let vertices: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut edges: Vec<(String, i64, String)> =
        (1..n).map(|i| (format!("x{}", i - 1), 1, format!("x{i}"))).collect();
    edges.push((format!("x{}", n - 1), 1, "x0".to_string()));
    LabelledDigraph::new(vertices, edges).expect("cycle is valid")
}

/// Complete graph on `n` vertices, all labels 1.
pub fn complete_graph(n: usize) -> LabelledDigraph {
    let vertices: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((format!("x{i}"), 1, format!("x{j}")));
        }
    }
    LabelledDigraph::new(vertices, edges).expect("complete graph is valid")
}

/// The path `x0 -1- x1 ->k x2` (plain edge plus one edge labelled `k`).
pub fn p3k_graph(k: i64) -> LabelledDigraph {
    LabelledDigraph::new(
        vec!["x0".to_string(), "x1".to_string(), "x2".to_string()],
        vec![
            ("x1".to_string(), 1, "x0".to_string()),
            ("x1".to_string(), k, "x2".to_string()),
        ],
    )
    .expect("valid")
}

/// Three vertices: `w0 ->2 w1` and `w0 -1- w2`.
pub fn gamma1_graph() -> LabelledDigraph {
    LabelledDigraph::new(
        vec!["w0".to_string(), "w1".to_string(), "w2".to_string()],
        vec![
            ("w0".to_string(), 2, "w1".to_string()),
            ("w0".to_string(), 1, "w2".to_string()),
        ],
    )
    .expect("valid")
}

/// Square `w0 w1 w2 w3` with plain edges plus the chord `w0 ->2 w2`.
pub fn gamma2_graph() -> LabelledDigraph {
    let v: Vec<String> = (0..4).map(|i| format!("w{i}")).collect();
    LabelledDigraph::new(
        v,
        vec![
            ("w0".to_string(), 1, "w1".to_string()),
            ("w1".to_string(), 1, "w2".to_string()),
            ("w2".to_string(), 1, "w3".to_string()),
            ("w3".to_string(), 1, "w0".to_string()),
            ("w0".to_string(), 2, "w2".to_string()),
        ],
    )
    .expect("valid")
}

/// A 4-cycle `x1 x2 x3 x4` plus a hub `x0` joined plainly to all of it.
pub fn hub_and_square_graph() -> LabelledDigraph {
    let v: Vec<String> = (0..5).map(|i| format!("x{i}")).collect();
    LabelledDigraph::new(
        v,
        vec![
            ("x1".to_string(), 1, "x2".to_string()),
            ("x2".to_string(), 1, "x3".to_string()),
            ("x3".to_string(), 1, "x4".to_string()),
            ("x4".to_string(), 1, "x1".to_string()),
            ("x0".to_string(), 1, "x1".to_string()),
            ("x0".to_string(), 1, "x2".to_string()),
            ("x0".to_string(), 1, "x3".to_string()),
            ("x0".to_string(), 1, "x4".to_string()),
        ],
    )
    .expect("valid")
}

/// Simple undirected graph with named vertices, adjacency-matrix backed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UndirectedGraph {
    vertices: Vec<String>,
    adj: Vec<bool>,
}

impl UndirectedGraph {
    pub fn empty(vertices: Vec<String>) -> Self {
        let n = vertices.len();
        UndirectedGraph { vertices, adj: vec![false; n * n] }
    }

    pub fn from_edges(vertices: Vec<String>, edges: &[(usize, usize)]) -> Self {
        let mut g = UndirectedGraph::empty(vertices);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "loop");
        let n = self.vertices.len();
        self.adj[u * n + v] = true;
        self.adj[v * n + u] = true;
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.vertices.len() + v]
    }

    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn degree(&self, u: usize) -> usize {
        (0..self.vertices.len()).filter(|&v| self.has_edge(u, v)).count()
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.has_edge(u, v)).collect()
    }

    pub fn complement(&self) -> UndirectedGraph {
        let n = self.vertices.len();
        let mut g = UndirectedGraph::empty(self.vertices.clone());
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn induced(&self, keep: &[usize]) -> UndirectedGraph {
        let vertices: Vec<String> = keep.iter().map(|&i| self.vertices[i].clone()).collect();
        let mut g = UndirectedGraph::empty(vertices);
        for (a, &u) in keep.iter().enumerate() {
            for (b, &v) in keep.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// Connected components as sorted vertex-index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// No four vertices induce a 4-cycle: equivalently, no non-adjacent
    /// pair has two non-adjacent common neighbors.
    pub fn is_c4_free(&self) -> bool {
        let n = self.vertices.len();
        for u in 0..n {
            for w in u + 1..n {
                if self.has_edge(u, w) {
                    continue;
                }
                let common: Vec<usize> = (0..n)
                    .filter(|&v| v != u && v != w && self.has_edge(u, v) && self.has_edge(w, v))
                    .collect();
                for (i, &v) in common.iter().enumerate() {
                    for &x in &common[i + 1..] {
                        if !self.has_edge(v, x) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// No four vertices induce a path: the cograph recursion, since the
    /// path-free graphs are exactly those where every induced subgraph on
    /// two or more vertices is disconnected or co-disconnected.
    pub fn is_p4_free(&self) -> bool {
        if self.vertices.len() <= 1 {
            return true;
        }
        let comps = self.components();
        if comps.len() > 1 {
            return comps.iter().all(|c| self.induced(c).is_p4_free());
        }
        let co = self.complement();
        let co_comps = co.components();
        if co_comps.len() > 1 {
            return co_comps.iter().all(|c| self.induced(c).is_p4_free());
        }
        false
    }

    /// Comparability graphs of forests are exactly the graphs with no
    /// induced 4-cycle and no induced 4-path.
    pub fn is_transitive_forest(&self) -> bool {
        self.is_c4_free() && self.is_p4_free()
    }

    /// Acyclic as an undirected graph (checked by union-find on edges).
    pub fn is_forest(&self) -> bool {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (u, v) in self.edge_pairs() {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return false;
            }
            parent[ru] = rv;
        }
        true
    }

    /// If the graph is one center adjacent to every other vertex and no
    /// other edges, returns the leaf count.
    pub fn star_leaf_count(&self) -> Option<usize> {
        let n = self.vertices.len();
        if n < 2 {
            return None;
        }
        for c in 0..n {
            if self.degree(c) == n - 1 && (0..n).all(|v| v == c || self.degree(v) == 1) {
                return Some(n - 1);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(vertices: &[&str], edges: &[(&str, i64, &str)]) -> LabelledDigraph {
        LabelledDigraph::new(
            vertices.iter().map(|s| s.to_string()),
            edges.iter().map(|&(a, m, b)| (a.to_string(), m, b.to_string())),
        )
        .unwrap()
    }

    #[test]
    fn construction_rejects_bad_input() {
        let try_new = |vs: &[&str], es: &[(&str, i64, &str)]| {
            LabelledDigraph::new(
                vs.iter().map(|s| s.to_string()),
                es.iter().map(|&(a, m, b)| (a.to_string(), m, b.to_string())),
            )
        };
        assert!(matches!(try_new(&["a", "a"], &[]), Err(GraphError::DuplicateVertex(_))));
        assert!(matches!(try_new(&["1a"], &[]), Err(GraphError::BadName(_))));
        assert!(matches!(
            try_new(&["a", "b"], &[("a", 1, "c")]),
            Err(GraphError::UnknownVertex(_))
        ));
        assert!(matches!(
            try_new(&["a", "b"], &[("a", 0, "b")]),
            Err(GraphError::ZeroLabel { .. })
        ));
        assert!(matches!(try_new(&["a"], &[("a", 1, "a")]), Err(GraphError::Loop(_))));
        assert!(matches!(
            try_new(&["a", "b"], &[("a", 1, "b"), ("b", 2, "a")]),
            Err(GraphError::DuplicateEdge(..))
        ));
    }

    #[test]
    fn unit_labels_are_stored_undirected() {
        let graph = g(&["a", "b"], &[("b", 1, "a")]);
        let e = graph.edges()[0];
        assert_eq!((e.from, e.to, e.label()), (0, 1, 1));
        assert!(e.is_undirected());
        // Negative labels keep their sign but act by magnitude.
        let graph = g(&["a", "b"], &[("a", -3, "b")]);
        let e = graph.edges()[0];
        assert_eq!(e.given(), -3);
        assert_eq!(e.label(), 3);
        assert!(!e.is_undirected());
    }

    #[test]
    fn json_round_trip() {
        let graph = gamma2_graph();
        let text = graph.to_json_value().to_string();
        assert_eq!(LabelledDigraph::from_json(&text).unwrap(), graph);
        assert!(LabelledDigraph::from_json("{\"vertices\": 3}").is_err());
    }

    #[test]
    fn star_and_bristled_shapes() {
        let s = make_star(3, 2);
        assert_eq!(s.vertex_count(), 4);
        assert!(s.edges().iter().all(|e| e.from == 0 && e.label() == 2));
        assert_eq!(detect_star(&s), Some((3, 2)));

        let plain = make_star(2, 1);
        assert!(plain.all_labels_one());
        assert_eq!(detect_star(&plain), Some((2, 1)));
        assert_eq!(plain.underlying_undirected().star_leaf_count(), Some(2));

        assert_eq!(detect_star(&path_graph(4)), None);
        assert_eq!(detect_star(&gamma1_graph()), None);

        let b = make_bristled(2, 3);
        // Center, 3 arms, one bristle per arm.
        assert_eq!(b.vertex_count(), 7);
        assert_eq!(b.edges().len(), 6);
        assert_eq!(b.edges().iter().filter(|e| e.label() == 1).count(), 3);
        assert_eq!(b.edges().iter().filter(|e| e.label() == 3).count(), 3);
        // k = 1 puts no bristles on the arms: the plain star remains.
        assert!(are_isomorphic(&make_bristled(1, 2), &make_star(2, 1)));
    }

    #[test]
    fn bgamma_relators() {
        let p = build_bgamma(&gamma1_graph());
        assert_eq!(p.to_string(), "< w0, w1, w2 | [w0, w1^2], [w0, w2] >");
        let free = build_bgamma(&LabelledDigraph::new(vec!["a".to_string()], vec![]).unwrap());
        assert_eq!(free.relators().len(), 0);
    }

    #[test]
    fn detect_round_trips_construction() {
        for graph in [
            gamma1_graph(),
            gamma2_graph(),
            make_star(3, 2),
            make_bristled(3, 2),
            path_graph(5),
            hub_and_square_graph(),
        ] {
            let detected = detect_rabsag(&build_bgamma(&graph)).unwrap();
            assert_eq!(detected, graph, "round trip failed");
        }
    }

    #[test]
    fn detect_rejects_non_edge_relators() {
        let p = crate::parse::parse_presentation("< a, b | a^2 >").unwrap();
        assert!(matches!(detect_rabsag(&p), Err(DetectError::NotEdgeShaped { .. })));
        let p = crate::parse::parse_presentation("< a, b, c | [a, b*c] >").unwrap();
        assert!(matches!(detect_rabsag(&p), Err(DetectError::NotEdgeShaped { .. })));
        let p = crate::parse::parse_presentation("< a, b | a*b*a^-1*b >").unwrap();
        assert!(matches!(detect_rabsag(&p), Err(DetectError::NotEdgeShaped { .. })));
        // Same letter counts as [a, b^2] but different cyclic word.
        let p = crate::parse::parse_presentation("< a, b | a*b^2*a^-1*b^2 >").unwrap();
        assert!(matches!(detect_rabsag(&p), Err(DetectError::NotEdgeShaped { .. })));
        let p = crate::parse::parse_presentation("< a, b | [a, b], [b, a^2] >").unwrap();
        assert!(matches!(detect_rabsag(&p), Err(DetectError::AmbiguousPair(..))));
    }

    #[test]
    fn detect_raag_wants_unit_labels() {
        let p = crate::parse::parse_presentation("< a, b, c | [a, b], [b, c] >").unwrap();
        let graph = detect_raag(&p).unwrap();
        assert_eq!(graph.edge_pairs(), vec![(0, 1), (1, 2)]);
        let p = crate::parse::parse_presentation("< a, b | [a, b^2] >").unwrap();
        assert!(detect_raag(&p).is_err());
    }

    #[test]
    fn isomorphism_on_small_graphs() {
        let relabeled = g(
            &["p", "q", "r", "s"],
            &[
                ("q", 1, "p"),
                ("q", 1, "r"),
                ("s", 1, "p"),
                ("s", 1, "r"),
                ("q", 2, "s"),
            ],
        );
        assert!(are_isomorphic(&gamma2_graph(), &relabeled));
        let wrong_label = g(
            &["p", "q", "r", "s"],
            &[
                ("q", 1, "p"),
                ("q", 1, "r"),
                ("s", 1, "p"),
                ("s", 1, "r"),
                ("q", 3, "s"),
            ],
        );
        assert!(!are_isomorphic(&gamma2_graph(), &wrong_label));
        // Direction matters for labels >= 2.
        let flipped = g(&["a", "b"], &[("a", 2, "b")]);
        let other = g(&["a", "b"], &[("b", 2, "a")]);
        assert!(are_isomorphic(&flipped, &other)); // iso swaps the names
        let path_out = g(&["a", "b", "c"], &[("a", 2, "b"), ("b", 2, "c")]);
        let path_in = g(&["a", "b", "c"], &[("a", 2, "b"), ("c", 2, "b")]);
        assert!(!are_isomorphic(&path_out, &path_in));
    }

    #[test]
    fn p3k_search() {
        let w = find_induced_p3k(&gamma1_graph()).unwrap();
        assert_eq!((w.center, w.undirected_leaf, w.directed_leaf, w.k), (0, 2, 1, 2));
        assert_eq!(find_induced_p3k(&p3k_graph(3)).unwrap().k, 3);
        // The chordal square has no such triple: every plain neighbor of
        // w0 is adjacent to w2.
        assert_eq!(find_induced_p3k(&gamma2_graph()), None);
        assert_eq!(find_induced_p3k(&make_star(3, 2)), None);
        assert_eq!(find_induced_p3k(&path_graph(4)), None);
        // An in-edge of the center does not make the pattern.
        let inward = g(&["a", "b", "c"], &[("b", 1, "a"), ("c", 2, "b")]);
        assert_eq!(find_induced_p3k(&inward), None);
        // Bristled stars with two or more arms contain the pattern.
        assert!(find_induced_p3k(&make_bristled(2, 2)).is_some());
    }

    fn und(n: usize, edges: &[(usize, usize)]) -> UndirectedGraph {
        UndirectedGraph::from_edges((0..n).map(|i| format!("v{i}")).collect(), edges)
    }

    #[test]
    fn four_cycle_detection() {
        let c4 = und(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(!c4.is_c4_free());
        let c5 = und(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert!(c5.is_c4_free());
        let k4 = und(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(k4.is_c4_free());
        let p4 = und(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(p4.is_c4_free());
        assert!(!hub_and_square_graph().underlying_undirected().is_c4_free());
    }

    #[test]
    fn four_path_detection() {
        let p4 = und(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(!p4.is_p4_free());
        let p3 = und(3, &[(0, 1), (1, 2)]);
        assert!(p3.is_p4_free());
        let c4 = und(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(c4.is_p4_free());
        let c5 = und(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert!(!c5.is_p4_free());
        assert!(und(4, &[]).is_p4_free());
        let star = und(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(star.is_p4_free());
    }

    #[test]
    fn transitive_forest_examples() {
        let star = und(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(star.is_transitive_forest());
        let k3 = und(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(k3.is_transitive_forest());
        let p4 = und(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(!p4.is_transitive_forest());
        let c4 = und(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(!c4.is_transitive_forest());
    }

    #[test]
    fn forests_and_stars() {
        assert!(und(4, &[(0, 1), (1, 2), (1, 3)]).is_forest());
        assert!(und(3, &[]).is_forest());
        assert!(!und(3, &[(0, 1), (1, 2), (0, 2)]).is_forest());
        assert_eq!(und(3, &[(0, 1), (0, 2)]).star_leaf_count(), Some(2));
        assert_eq!(und(2, &[(0, 1)]).star_leaf_count(), Some(1));
        assert_eq!(und(4, &[(0, 1), (1, 2), (2, 3)]).star_leaf_count(), None);
        assert_eq!(und(1, &[]).star_leaf_count(), None);
    }

    /// Brute-force four-vertex-subset scans as an oracle for the two
    /// induced-subgraph predicates.
    fn oracle_c4_p4(g: &UndirectedGraph) -> (bool, bool) {
        let n = g.vertex_count();
        let mut c4 = true;
        let mut p4 = true;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        let sub = g.induced(&[a, b, c, d]);
                        let deg: Vec<usize> = (0..4).map(|v| sub.degree(v)).collect();
                        let edges = sub.edge_pairs().len();
                        let mut sorted = deg.clone();
                        sorted.sort_unstable();
                        if edges == 4 && sorted == [2, 2, 2, 2] {
                            c4 = false;
                        }
                        if edges == 3 && sorted == [1, 1, 2, 2] && sub.is_connected() {
                            p4 = false;
                        }
                    }
                }
            }
        }
        (c4, p4)
    }

    #[test]
    fn predicates_agree_with_subset_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            let n = rng.gen_range(1..=7);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let graph = und(n, &edges);
            let (c4, p4) = oracle_c4_p4(&graph);
            assert_eq!(graph.is_c4_free(), c4, "c4 mismatch on {edges:?}");
            assert_eq!(graph.is_p4_free(), p4, "p4 mismatch on {edges:?}");
        }
    }
}
