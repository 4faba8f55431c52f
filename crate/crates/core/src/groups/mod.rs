//! Finitely generated groups with exact canonical forms, their Cayley graphs,
//! and the non-group graph families used in experiments.

mod abelian;
mod bs;
mod families;
mod free;
pub mod grigorchuk;
mod heisenberg;
mod lamplighter;
pub mod semigroup;
mod spec;

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{GraphError, GraphProvider, VertexId};

pub use abelian::FreeAbelian;
pub use bs::{BaumslagSolitar12, Dyadic};
pub use families::{BeadChain, BeadPosition, BeadProfile, RegularTree};
pub use free::FreeGroup;
pub use grigorchuk::Grigorchuk;
pub use heisenberg::Heisenberg;
pub use lamplighter::Lamplighter;
pub use semigroup::{search_free_pair, semigroup_tree, PairSearch, SemigroupNode, SemigroupTree};
pub use spec::{GraphSpec, GroupKind, GroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cannot decode element `{0}`")]
    InvalidElement(String),
    #[error("invalid generating set: {0}")]
    InvalidGenerator(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<GroupError> for GraphError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Graph(g) => g,
            GroupError::InvalidElement(s) => GraphError::UnknownVertex(s),
            other => GraphError::Invalid(other.to_string()),
        }
    }
}

/// A group with exact arithmetic and a canonical text encoding:
/// `encode(g) == encode(h)` exactly when `g == h`.
pub trait Group: Send + Sync + 'static {
    type Element: Clone + Eq + Hash + Debug + Send + Sync;

    fn name(&self) -> String;
    fn identity(&self) -> Self::Element;
    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inverse(&self, a: &Self::Element) -> Self::Element;
    fn encode(&self, a: &Self::Element) -> String;
    fn decode(&self, text: &str) -> Result<Self::Element, GroupError>;
    /// Standard generators, already closed under inversion.
    fn standard_generators(&self) -> Vec<Self::Element>;

    fn layout(&self, _a: &Self::Element) -> Option<[f64; 2]> {
        None
    }
}

/// Right-multiplication Cayley graph: `g ~ g·s` for `s` in the generating set.
pub struct CayleyGraph<G: Group> {
    group: G,
    generators: Vec<G::Element>,
    name: String,
}

impl<G: Group> CayleyGraph<G> {
    /// Builds the Cayley graph, using the standard generators when none are
    /// given. Rejects identity generators and sets not closed under inversion.
    pub fn new(group: G, generators: Option<Vec<G::Element>>) -> Result<Self, GroupError> {
        let custom = generators.is_some();
        let raw = generators.unwrap_or_else(|| group.standard_generators());
        if raw.is_empty() {
            return Err(GroupError::InvalidGenerator("empty generating set".into()));
        }
        let identity = group.identity();
        let mut seen = HashSet::new();
        let mut gens = Vec::new();
        for s in raw {
            if s == identity {
                return Err(GroupError::InvalidGenerator(
                    "identity listed as a generator".into(),
                ));
            }
            if seen.insert(s.clone()) {
                gens.push(s);
            }
        }
        for s in &gens {
            if !seen.contains(&group.inverse(s)) {
                return Err(GroupError::InvalidGenerator(format!(
                    "inverse of `{}` is missing",
                    group.encode(s)
                )));
            }
        }
        let name = if custom {
            let listed: Vec<_> = gens.iter().map(|s| group.encode(s)).collect();
            format!("{}[{}]", group.name(), listed.join(" "))
        } else {
            group.name()
        };
        Ok(CayleyGraph {
            group,
            generators: gens,
            name,
        })
    }

    /// Same graph under a different display name.
    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn generators(&self) -> &[G::Element] {
        &self.generators
    }

    fn decode_vertex(&self, v: &VertexId) -> Result<G::Element, GraphError> {
        self.group
            .decode(v.as_str())
            .map_err(|_| GraphError::UnknownVertex(v.to_string()))
    }
}

impl<G: Group> GraphProvider for CayleyGraph<G> {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn degree_bound(&self) -> usize {
        self.generators.len()
    }

    fn basepoint(&self) -> VertexId {
        VertexId::new(self.group.encode(&self.group.identity()))
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        let g = self.decode_vertex(v)?;
        Ok(self
            .generators
            .iter()
            .map(|s| VertexId::new(self.group.encode(&self.group.multiply(&g, s))))
            .collect())
    }

    fn parse_vertex(&self, text: &str) -> Result<VertexId, GraphError> {
        let g = self
            .group
            .decode(text)
            .map_err(|_| GraphError::UnknownVertex(text.to_string()))?;
        Ok(VertexId::new(self.group.encode(&g)))
    }

    fn layout_hint(&self, v: &VertexId) -> Option<[f64; 2]> {
        self.group
            .decode(v.as_str())
            .ok()
            .and_then(|g| self.group.layout(&g))
    }
}

/// Object-safe view of a Cayley graph that also exposes the group law on
/// canonical ids.
pub trait GroupGraph: GraphProvider {
    fn identity_id(&self) -> VertexId;
    fn parse_element(&self, text: &str) -> Result<VertexId, GroupError>;
    fn multiply_ids(&self, a: &VertexId, b: &VertexId) -> Result<VertexId, GroupError>;
    fn inverse_id(&self, a: &VertexId) -> Result<VertexId, GroupError>;
    fn generator_ids(&self) -> Vec<VertexId>;
}

impl<G: Group> GroupGraph for CayleyGraph<G> {
    fn identity_id(&self) -> VertexId {
        self.basepoint()
    }

    fn parse_element(&self, text: &str) -> Result<VertexId, GroupError> {
        let g = self.group.decode(text)?;
        Ok(VertexId::new(self.group.encode(&g)))
    }

    fn multiply_ids(&self, a: &VertexId, b: &VertexId) -> Result<VertexId, GroupError> {
        let x = self.group.decode(a.as_str())?;
        let y = self.group.decode(b.as_str())?;
        Ok(VertexId::new(
            self.group.encode(&self.group.multiply(&x, &y)),
        ))
    }

    fn inverse_id(&self, a: &VertexId) -> Result<VertexId, GroupError> {
        let x = self.group.decode(a.as_str())?;
        Ok(VertexId::new(self.group.encode(&self.group.inverse(&x))))
    }

    fn generator_ids(&self) -> Vec<VertexId> {
        self.generators
            .iter()
            .map(|s| VertexId::new(self.group.encode(s)))
            .collect()
    }
}

/// Decodes a list of generator texts for `group`.
pub(crate) fn decode_generators<G: Group>(
    group: &G,
    texts: Option<&[String]>,
) -> Result<Option<Vec<G::Element>>, GroupError> {
    texts
        .map(|ts| ts.iter().map(|t| group.decode(t)).collect())
        .transpose()
}

pub(crate) fn build_cayley<G: Group>(
    group: G,
    generators: Option<&[String]>,
) -> Result<Arc<CayleyGraph<G>>, GroupError> {
    let gens = decode_generators(&group, generators)?;
    Ok(Arc::new(CayleyGraph::new(group, gens)?))
}
