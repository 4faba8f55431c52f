use serde::{Deserialize, Serialize};

use super::GroupError;
use crate::graph::{GraphError, GraphProvider, VertexId};

/// Infinite tree in which every vertex has degree `degree`.
///
/// Vertices are root-addressed paths: `r` is the root and `r.i.j` is reached
/// by taking child `i` of the root and then child `j`. The root has children
/// `0..degree`, every other vertex has children `0..degree-1`.
#[derive(Debug, Clone)]
pub struct RegularTree {
    degree: usize,
}

impl RegularTree {
    pub fn new(degree: usize) -> Result<Self, GroupError> {
        if degree < 2 {
            return Err(GroupError::InvalidParameter(
                "regular tree degree must be at least 2".into(),
            ));
        }
        Ok(RegularTree { degree })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn decode(&self, text: &str) -> Option<Vec<usize>> {
        let mut parts = text.trim().split('.');
        if parts.next()? != "r" {
            return None;
        }
        let mut path = Vec::new();
        for p in parts {
            let i: usize = p.parse().ok()?;
            let limit = if path.is_empty() {
                self.degree
            } else {
                self.degree - 1
            };
            if i >= limit {
                return None;
            }
            path.push(i);
        }
        Some(path)
    }

    fn encode(path: &[usize]) -> VertexId {
        let mut s = String::from("r");
        for i in path {
            s.push('.');
            s.push_str(&i.to_string());
        }
        VertexId::new(s)
    }
}

impl GraphProvider for RegularTree {
    fn name(&self) -> String {
        format!("regular-tree({})", self.degree)
    }

    fn degree_bound(&self) -> usize {
        self.degree
    }

    fn basepoint(&self) -> VertexId {
        VertexId::new("r")
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        let mut path = self
            .decode(v.as_str())
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
        let mut out = Vec::with_capacity(self.degree);
        let children = if path.is_empty() {
            self.degree
        } else {
            let last = path.pop().unwrap();
            out.push(Self::encode(&path));
            path.push(last);
            self.degree - 1
        };
        for i in 0..children {
            path.push(i);
            out.push(Self::encode(&path));
            path.pop();
        }
        Ok(out)
    }

    fn parse_vertex(&self, text: &str) -> Result<VertexId, GraphError> {
        self.decode(text)
            .map(|p| Self::encode(&p))
            .ok_or_else(|| GraphError::UnknownVertex(text.to_string()))
    }

    /// Radial layout: depth is the radius, each subtree owns an angular slice.
    fn layout_hint(&self, v: &VertexId) -> Option<[f64; 2]> {
        let path = self.decode(v.as_str())?;
        let (mut lo, mut hi) = (0.0f64, std::f64::consts::TAU);
        for (depth, &i) in path.iter().enumerate() {
            let k = if depth == 0 {
                self.degree
            } else {
                self.degree - 1
            } as f64;
            let w = (hi - lo) / k;
            lo += w * i as f64;
            hi = lo + w;
        }
        let r = path.len() as f64;
        let theta = (lo + hi) / 2.0;
        Some([r * theta.cos(), r * theta.sin()])
    }
}

/// Bead sizes along a bead chain; bead `k` (for `k >= 1`) contributes
/// `size(k)` new vertices, its exit cut vertex included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BeadProfile {
    /// `size(k) = 2^k`; balls grow like `exp(c·sqrt(n))`.
    #[default]
    Doubling,
    /// `size(k) = k^2`.
    Squares,
    Constant(u64),
    /// Explicit sizes, the last one repeating forever.
    Sizes(Vec<u64>),
}

const MAX_BEAD_SIZE: u64 = 1 << 40;

impl BeadProfile {
    pub fn size(&self, k: u64) -> u64 {
        debug_assert!(k >= 1);
        let s = match self {
            BeadProfile::Doubling => {
                if k >= 40 {
                    MAX_BEAD_SIZE
                } else {
                    1 << k
                }
            }
            BeadProfile::Squares => k.saturating_mul(k),
            BeadProfile::Constant(s) => *s,
            BeadProfile::Sizes(v) => v[((k - 1) as usize).min(v.len() - 1)],
        };
        s.min(MAX_BEAD_SIZE)
    }

    fn label(&self) -> String {
        match self {
            BeadProfile::Doubling => "doubling".into(),
            BeadProfile::Squares => "squares".into(),
            BeadProfile::Constant(s) => format!("constant-{s}"),
            BeadProfile::Sizes(v) => {
                let parts: Vec<_> = v.iter().map(u64::to_string).collect();
                format!("sizes-{}", parts.join("-"))
            }
        }
    }

    fn validate(&self) -> Result<(), GroupError> {
        match self {
            BeadProfile::Constant(0) => Err(GroupError::InvalidParameter(
                "bead size must be positive".into(),
            )),
            BeadProfile::Sizes(v) => {
                if v.is_empty() || v[0] == 0 {
                    return Err(GroupError::InvalidParameter(
                        "bead sizes must be a non-empty list of positive integers".into(),
                    ));
                }
                if v.windows(2).any(|w| w[0] > w[1]) {
                    return Err(GroupError::InvalidParameter(
                        "bead sizes must be non-decreasing".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Where a vertex sits in a bead chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeadPosition {
    /// Cut vertex `c_k`; `c_0` is the basepoint at the closed end.
    Cut(u64),
    /// Heap node `node` (1-based) of bead `bead`.
    Inner { bead: u64, node: u64 },
}

/// One-ended ray of finite beads joined at cut vertices.
///
/// Bead `k` sits between cut vertices `c_{k-1}` and `c_k`. Its
/// `size(k) - 1` inner vertices form a heap-ordered binary tree (node `i`
/// has children `2i`, `2i+1`); node 1 hangs off `c_{k-1}` and the last node
/// carries `c_k`. A bead of size 1 is a single edge `c_{k-1} c_k`. Every cut
/// vertex other than `c_0` has degree 2 and separates the finite prefix from
/// the infinite remainder; all degrees are at most 3.
#[derive(Debug, Clone)]
pub struct BeadChain {
    profile: BeadProfile,
}

const MAX_BEAD_INDEX: u64 = 1 << 32;

impl BeadChain {
    pub fn new(profile: BeadProfile) -> Result<Self, GroupError> {
        profile.validate()?;
        Ok(BeadChain { profile })
    }

    pub fn profile(&self) -> &BeadProfile {
        &self.profile
    }

    pub fn bead_size(&self, k: u64) -> u64 {
        self.profile.size(k)
    }

    fn inner_count(&self, k: u64) -> u64 {
        self.profile.size(k) - 1
    }

    pub fn cut_vertex(&self, k: u64) -> VertexId {
        VertexId::new(format!("c{k}"))
    }

    fn inner(&self, bead: u64, node: u64) -> VertexId {
        VertexId::new(format!("b{bead}.{node}"))
    }

    pub fn locate(&self, v: &VertexId) -> Option<BeadPosition> {
        let s = v.as_str().trim();
        if let Some(k) = s.strip_prefix('c') {
            let k: u64 = k.parse().ok()?;
            return (k < MAX_BEAD_INDEX).then_some(BeadPosition::Cut(k));
        }
        let (bead, node) = s.strip_prefix('b')?.split_once('.')?;
        let bead: u64 = bead.parse().ok()?;
        let node: u64 = node.parse().ok()?;
        if bead == 0 || bead >= MAX_BEAD_INDEX || node == 0 || node > self.inner_count(bead) {
            return None;
        }
        Some(BeadPosition::Inner { bead, node })
    }

    /// Index `j` of the nearest cut vertex `c_j` that separates `v` from the
    /// infinite end without being `v` itself.
    pub fn next_cut_index(&self, v: &VertexId) -> Option<u64> {
        Some(match self.locate(v)? {
            BeadPosition::Cut(k) => k + 1,
            BeadPosition::Inner { bead, .. } => bead,
        })
    }

    fn entry_of(&self, bead: u64) -> VertexId {
        if self.inner_count(bead) == 0 {
            self.cut_vertex(bead)
        } else {
            self.inner(bead, 1)
        }
    }

    fn exit_side_of(&self, bead: u64) -> VertexId {
        let m = self.inner_count(bead);
        if m == 0 {
            self.cut_vertex(bead - 1)
        } else {
            self.inner(bead, m)
        }
    }
}

impl GraphProvider for BeadChain {
    fn name(&self) -> String {
        format!("bead-chain({})", self.profile.label())
    }

    fn degree_bound(&self) -> usize {
        3
    }

    fn basepoint(&self) -> VertexId {
        self.cut_vertex(0)
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        let pos = self
            .locate(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
        let mut out = Vec::with_capacity(3);
        match pos {
            BeadPosition::Cut(k) => {
                if k >= 1 {
                    out.push(self.exit_side_of(k));
                }
                out.push(self.entry_of(k + 1));
            }
            BeadPosition::Inner { bead, node } => {
                let m = self.inner_count(bead);
                out.push(if node == 1 {
                    self.cut_vertex(bead - 1)
                } else {
                    self.inner(bead, node / 2)
                });
                for child in [2 * node, 2 * node + 1] {
                    if child <= m {
                        out.push(self.inner(bead, child));
                    }
                }
                if node == m {
                    out.push(self.cut_vertex(bead));
                }
            }
        }
        Ok(out)
    }

    fn parse_vertex(&self, text: &str) -> Result<VertexId, GraphError> {
        match self.locate(&VertexId::new(text.trim())) {
            Some(BeadPosition::Cut(k)) => Ok(self.cut_vertex(k)),
            Some(BeadPosition::Inner { bead, node }) => Ok(self.inner(bead, node)),
            None => Err(GraphError::UnknownVertex(text.to_string())),
        }
    }

    fn bead_chain(&self) -> Option<&BeadChain> {
        Some(self)
    }
}
