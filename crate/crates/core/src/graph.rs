//! Locally finite graphs behind a neighbor oracle, and the BFS machinery
//! (balls, spheres, distances) used everywhere else in the crate.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default bound on the number of vertices any single exploration may visit.
pub const DEFAULT_VERTEX_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("exploration exceeded the vertex cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("center set is empty")]
    EmptyCenter,
    #[error("invalid graph: {0}")]
    Invalid(String),
}

/// Canonical vertex key.
///
/// The bytes are the provider's canonical text encoding of the vertex, so two
/// ids compare equal exactly when they name the same vertex. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(Arc<str>);

impl VertexId {
    /// Wraps an already-canonical encoding. Providers are responsible for
    /// canonicity; user input should go through [`GraphProvider::parse_vertex`].
    pub fn new(canonical: impl Into<Arc<str>>) -> Self {
        VertexId(canonical.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexId({})", self.0)
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d).map(VertexId::new)
    }
}

/// A connected, locally finite graph given lazily by its neighbor oracle.
///
/// Implementations must keep neighbor lists symmetric, loop-free,
/// duplicate-free and deterministically ordered, with at most
/// `degree_bound()` entries.
pub trait GraphProvider: Send + Sync {
    fn name(&self) -> String;

    fn degree_bound(&self) -> usize;

    fn basepoint(&self) -> VertexId;

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError>;

    /// Decodes user-supplied text into the canonical id, rejecting anything
    /// that does not name a vertex.
    fn parse_vertex(&self, text: &str) -> Result<VertexId, GraphError>;

    /// Planar coordinates for rendering, when the graph has natural ones.
    fn layout_hint(&self, _v: &VertexId) -> Option<[f64; 2]> {
        None
    }

    /// Cut-vertex structure, for graphs built as a chain of finite beads.
    fn bead_chain(&self) -> Option<&crate::groups::BeadChain> {
        None
    }
}

impl<G: GraphProvider + ?Sized> GraphProvider for Arc<G> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn degree_bound(&self) -> usize {
        (**self).degree_bound()
    }
    fn basepoint(&self) -> VertexId {
        (**self).basepoint()
    }
    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        (**self).neighbors(v)
    }
    fn parse_vertex(&self, text: &str) -> Result<VertexId, GraphError> {
        (**self).parse_vertex(text)
    }
    fn layout_hint(&self, v: &VertexId) -> Option<[f64; 2]> {
        (**self).layout_hint(v)
    }
    fn bead_chain(&self) -> Option<&crate::groups::BeadChain> {
        (**self).bead_chain()
    }
}

/// Parses a list of textual ids into canonical, de-duplicated ids (first
/// occurrence wins).
pub fn parse_vertices<S: AsRef<str>>(
    g: &dyn GraphProvider,
    texts: &[S],
) -> Result<Vec<VertexId>, GraphError> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(texts.len());
    for t in texts {
        let v = g.parse_vertex(t.as_ref())?;
        if seen.insert(v.clone()) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Layer-by-layer breadth-first walk from a finite center set.
///
/// Layer `k` holds exactly the vertices at distance `k` from the center, in
/// discovery order (which follows the provider's neighbor order).
pub struct LayerWalker<'g> {
    graph: &'g dyn GraphProvider,
    seen: HashSet<VertexId>,
    current: Vec<VertexId>,
    radius: usize,
    cap: usize,
    started: bool,
}

impl<'g> LayerWalker<'g> {
    pub fn new(
        graph: &'g dyn GraphProvider,
        center: &[VertexId],
        cap: usize,
    ) -> Result<Self, GraphError> {
        if center.is_empty() {
            return Err(GraphError::EmptyCenter);
        }
        let mut seen = HashSet::new();
        let mut current = Vec::new();
        for v in center {
            if seen.insert(v.clone()) {
                current.push(v.clone());
            }
        }
        if current.len() > cap {
            return Err(GraphError::CapExceeded { cap });
        }
        Ok(LayerWalker {
            graph,
            seen,
            current,
            radius: 0,
            cap,
            started: false,
        })
    }

    /// Returns the next layer (layer 0 first). An empty layer means the
    /// component is exhausted.
    pub fn next_layer(&mut self) -> Result<&[VertexId], GraphError> {
        if !self.started {
            self.started = true;
            return Ok(&self.current);
        }
        let mut next = Vec::new();
        for v in &self.current {
            for w in self.graph.neighbors(v)? {
                if !self.seen.contains(&w) {
                    self.seen.insert(w.clone());
                    next.push(w);
                    if self.seen.len() > self.cap {
                        return Err(GraphError::CapExceeded { cap: self.cap });
                    }
                }
            }
        }
        self.current = next;
        self.radius += 1;
        Ok(&self.current)
    }

    /// Radius of the layer most recently returned.
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn visited(&self) -> usize {
        self.seen.len()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.seen.contains(v)
    }
}

/// All vertices within `radius` of a center set, with exact distances and
/// the induced edges among them.
#[derive(Debug, Clone)]
pub struct FiniteBall {
    pub center: Vec<VertexId>,
    pub radius: usize,
    pub vertices: Vec<(VertexId, usize)>,
    /// Induced edges as index pairs `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
    /// Per-vertex count of neighbors lying outside the ball.
    pub external_degree: Vec<usize>,
    index: HashMap<VertexId, usize>,
}

impl FiniteBall {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.index.contains_key(v)
    }

    pub fn distance_of(&self, v: &VertexId) -> Option<usize> {
        self.index_of(v).map(|i| self.vertices[i].1)
    }

    /// Number of vertices at each distance `0..=radius`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius + 1];
        for (_, d) in &self.vertices {
            sizes[*d] += 1;
        }
        sizes
    }

    /// Edges with exactly one endpoint in the ball, counted in the ambient graph.
    pub fn boundary_edges(&self) -> usize {
        self.external_degree.iter().sum()
    }

    /// The ball as a finite graph, remembering how many ambient edges leave
    /// each vertex.
    pub fn to_graph(&self) -> FiniteGraph {
        let labels = self.vertices.iter().map(|(v, _)| v.clone()).collect();
        let mut g = FiniteGraph::with_labels(format!("ball({})", self.radius), labels, &self.edges)
            .expect("ball edges are valid by construction");
        g.external = self.external_degree.clone();
        g
    }
}

/// Computes the ball of the given radius around `center`.
///
/// Fails with [`GraphError::CapExceeded`] when more than `cap` vertices
/// would be visited.
pub fn ball(
    g: &dyn GraphProvider,
    center: &[VertexId],
    radius: usize,
    cap: usize,
) -> Result<FiniteBall, GraphError> {
    let mut walker = LayerWalker::new(g, center, cap)?;
    let mut vertices = Vec::new();
    let mut index = HashMap::new();
    let center: Vec<VertexId> = walker.next_layer()?.to_vec();
    for v in &center {
        index.insert(v.clone(), vertices.len());
        vertices.push((v.clone(), 0));
    }
    for d in 1..=radius {
        let layer = walker.next_layer()?;
        if layer.is_empty() {
            break;
        }
        for v in layer {
            index.insert(v.clone(), vertices.len());
            vertices.push((v.clone(), d));
        }
    }

    let mut adjacency: Vec<Vec<usize>> = Vec::with_capacity(vertices.len());
    let mut external_degree = Vec::with_capacity(vertices.len());
    for (v, _) in &vertices {
        let mut inside = Vec::new();
        let mut outside = 0;
        for w in g.neighbors(v)? {
            match index.get(&w) {
                Some(&j) => inside.push(j),
                None => outside += 1,
            }
        }
        adjacency.push(inside);
        external_degree.push(outside);
    }

    #[cfg(debug_assertions)]
    for (i, nbrs) in adjacency.iter().enumerate() {
        for &j in nbrs {
            debug_assert!(
                adjacency[j].contains(&i),
                "asymmetric neighbor oracle in {}: {} -> {}",
                g.name(),
                vertices[i].0,
                vertices[j].0
            );
        }
    }

    let mut edges = Vec::new();
    for (i, nbrs) in adjacency.iter().enumerate() {
        for &j in nbrs {
            if i < j {
                edges.push((i, j));
            }
        }
    }

    Ok(FiniteBall {
        center,
        radius,
        vertices,
        edges,
        external_degree,
        index,
    })
}

/// Exact distance when it does not exceed the cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Distance {
    Exact(usize),
    BeyondCutoff,
}

pub fn distance(
    g: &dyn GraphProvider,
    x: &VertexId,
    y: &VertexId,
    cutoff: usize,
    cap: usize,
) -> Result<Distance, GraphError> {
    let mut walker = LayerWalker::new(g, std::slice::from_ref(x), cap)?;
    loop {
        let layer = walker.next_layer()?;
        if layer.is_empty() {
            return Ok(Distance::BeyondCutoff);
        }
        if layer.contains(y) {
            return Ok(Distance::Exact(walker.radius()));
        }
        if walker.radius() >= cutoff {
            return Ok(Distance::BeyondCutoff);
        }
    }
}

/// `|{v : dist(v, center) = k}|` for `k = 0..=max_radius`.
pub fn sphere_sizes(
    g: &dyn GraphProvider,
    center: &[VertexId],
    max_radius: usize,
    cap: usize,
) -> Result<Vec<usize>, GraphError> {
    let mut walker = LayerWalker::new(g, center, cap)?;
    let mut sizes = Vec::with_capacity(max_radius + 1);
    for _ in 0..=max_radius {
        sizes.push(walker.next_layer()?.len());
    }
    Ok(sizes)
}

/// A finite simple graph with optional per-vertex counts of edges leaving it
/// into some ambient graph.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    name: String,
    labels: Vec<VertexId>,
    adjacency: Vec<Vec<usize>>,
    external: Vec<usize>,
    index: HashMap<VertexId, usize>,
}

impl FiniteGraph {
    /// Vertices `0..n`, labelled by their decimal index.
    pub fn from_edges(
        name: impl Into<String>,
        n: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let labels = (0..n).map(|i| VertexId::new(i.to_string())).collect();
        Self::with_labels(name, labels, edges)
    }

    pub fn with_labels(
        name: impl Into<String>,
        labels: Vec<VertexId>,
        edges: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::Invalid(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(GraphError::Invalid(format!("self-loop at {a}")));
            }
            if !adjacency[a].contains(&b) {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GraphError::Invalid(format!("duplicate label {l}")));
            }
        }
        Ok(FiniteGraph {
            name: name.into(),
            labels,
            adjacency,
            external: vec![0; n],
            index,
        })
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(format!("path({n})"), n, &edges).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(format!("cycle({n})"), n, &edges).expect("valid cycle")
    }

    /// `K_{1,leaves}` with the center labelled `0`.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::from_edges(format!("star({leaves})"), leaves + 1, &edges).expect("valid star")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Self::from_edges(format!("complete({n})"), n, &edges).expect("valid complete graph")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &VertexId {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn adjacency(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn external_degree(&self, i: usize) -> usize {
        self.external[i]
    }

    pub fn has_external_edges(&self) -> bool {
        self.external.iter().any(|&e| e > 0)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&j| i < j).map(|&j| (i, j)));
        }
        out
    }
}

impl GraphProvider for FiniteGraph {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn degree_bound(&self) -> usize {
        self.adjacency
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .max(1)
    }

    fn basepoint(&self) -> VertexId {
        self.labels[0].clone()
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        let i = self
            .index_of(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
        Ok(self.adjacency[i]
            .iter()
            .map(|&j| self.labels[j].clone())
            .collect())
    }

    fn parse_vertex(&self, text: &str) -> Result<VertexId, GraphError> {
        let v = VertexId::new(text.trim());
        if self.index.contains_key(&v) {
            Ok(v)
        } else {
            Err(GraphError::UnknownVertex(text.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_distances() {
        let g = FiniteGraph::path(5);
        let d = distance(&g, g.label(0), g.label(4), 10, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(d, Distance::Exact(4));
        let d = distance(&g, g.label(0), g.label(4), 3, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(d, Distance::BeyondCutoff);
        let d = distance(&g, g.label(2), g.label(2), 0, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(d, Distance::Exact(0));
    }

    #[test]
    fn ball_of_star_counts_external_edges_as_zero() {
        let g = FiniteGraph::star(5);
        let b = ball(&g, &[g.label(0).clone()], 1, 100).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b.edges.len(), 5);
        assert_eq!(b.boundary_edges(), 0);
        let b = ball(&g, &[g.label(1).clone()], 1, 100).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.boundary_edges(), 4);
    }

    #[test]
    fn empty_center_rejected() {
        let g = FiniteGraph::path(3);
        assert_eq!(ball(&g, &[], 1, 10).unwrap_err(), GraphError::EmptyCenter);
    }

    #[test]
    fn cap_is_enforced() {
        let g = FiniteGraph::complete(10);
        let err = ball(&g, &[g.label(0).clone()], 1, 5).unwrap_err();
        assert_eq!(err, GraphError::CapExceeded { cap: 5 });
    }

    #[test]
    fn unknown_vertex() {
        let g = FiniteGraph::path(3);
        assert!(matches!(
            g.parse_vertex("7"),
            Err(GraphError::UnknownVertex(_))
        ));
        assert!(matches!(
            g.neighbors(&VertexId::new("x")),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn finite_graph_rejects_loops() {
        assert!(FiniteGraph::from_edges("bad", 2, &[(1, 1)]).is_err());
        assert!(FiniteGraph::from_edges("bad", 2, &[(0, 2)]).is_err());
    }
}
