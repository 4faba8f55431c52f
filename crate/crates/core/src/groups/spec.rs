use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    build_cayley, BaumslagSolitar12, BeadChain, BeadProfile, CayleyGraph, FreeAbelian, FreeGroup,
    Grigorchuk, GroupError, GroupGraph, Heisenberg, Lamplighter, RegularTree,
};
use crate::graph::{FiniteGraph, GraphProvider};

/// Which group a Cayley graph is built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupKind {
    FreeAbelian { rank: usize },
    Free { rank: usize },
    Heisenberg,
    Lamplighter,
    Bs12,
    Grigorchuk,
}

/// A group together with an optional generating set (element encodings).
/// Without one, the standard generators and their inverses are used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub generators: Option<Vec<String>>,
}

impl GroupSpec {
    pub fn new(kind: GroupKind) -> Self {
        GroupSpec {
            kind,
            generators: None,
        }
    }

    pub fn with_generators<S: Into<String>>(mut self, gens: impl IntoIterator<Item = S>) -> Self {
        self.generators = Some(gens.into_iter().map(Into::into).collect());
        self
    }

    /// The Cayley graph of this group, with the group law available on ids.
    pub fn cayley(&self) -> Result<Arc<dyn GroupGraph>, GroupError> {
        let gens = self.generators.as_deref();
        Ok(match &self.kind {
            GroupKind::FreeAbelian { rank } => build_cayley(FreeAbelian::new(*rank)?, gens)?,
            GroupKind::Free { rank } => build_cayley(FreeGroup::new(*rank)?, gens)?,
            GroupKind::Heisenberg => build_cayley(Heisenberg, gens)?,
            GroupKind::Lamplighter => build_cayley(Lamplighter, gens)?,
            GroupKind::Bs12 => build_cayley(BaumslagSolitar12, gens)?,
            GroupKind::Grigorchuk => build_cayley(Grigorchuk::new(), gens)?,
        })
    }

    pub fn to_graph_spec(&self) -> GraphSpec {
        let generators = self.generators.clone();
        match self.kind {
            GroupKind::FreeAbelian { rank } => GraphSpec::FreeAbelian { rank, generators },
            GroupKind::Free { rank } => GraphSpec::Free { rank, generators },
            GroupKind::Heisenberg => GraphSpec::Heisenberg { generators },
            GroupKind::Lamplighter => GraphSpec::Lamplighter { generators },
            GroupKind::Bs12 => GraphSpec::Bs12 { generators },
            GroupKind::Grigorchuk => GraphSpec::Grigorchuk { generators },
        }
    }
}

/// Any graph the toolkit can build: a Cayley graph of one of the supported
/// groups, or one of the graph families.
///
/// Serialized with an inline `kind` tag, e.g. `{ kind = "free-abelian",
/// rank = 2 }` or `{ kind = "bead-chain", profile = "squares" }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSpec {
    FreeAbelian {
        rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    Free {
        rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    Heisenberg {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    Lamplighter {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    Bs12 {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    Grigorchuk {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    RegularTree {
        degree: usize,
    },
    /// `Z^dim` with the standard generators.
    Grid {
        dim: usize,
    },
    BeadChain {
        #[serde(default)]
        profile: BeadProfile,
    },
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Star {
        leaves: usize,
    },
    Complete {
        n: usize,
    },
    /// Finite graph on vertices `0..n`.
    Explicit {
        n: usize,
        edges: Vec<(usize, usize)>,
    },
}

impl GraphSpec {
    pub fn as_group(&self) -> Option<GroupSpec> {
        let (kind, generators) = match self {
            GraphSpec::FreeAbelian { rank, generators } => {
                (GroupKind::FreeAbelian { rank: *rank }, generators)
            }
            GraphSpec::Free { rank, generators } => (GroupKind::Free { rank: *rank }, generators),
            GraphSpec::Heisenberg { generators } => (GroupKind::Heisenberg, generators),
            GraphSpec::Lamplighter { generators } => (GroupKind::Lamplighter, generators),
            GraphSpec::Bs12 { generators } => (GroupKind::Bs12, generators),
            GraphSpec::Grigorchuk { generators } => (GroupKind::Grigorchuk, generators),
            GraphSpec::Grid { dim } => (GroupKind::FreeAbelian { rank: *dim }, &None),
            _ => return None,
        };
        Some(GroupSpec {
            kind,
            generators: generators.clone(),
        })
    }

    pub fn build(&self) -> Result<Arc<dyn GraphProvider>, GroupError> {
        if let GraphSpec::Grid { dim } = self {
            let named =
                CayleyGraph::new(FreeAbelian::new(*dim)?, None)?.named(format!("grid({dim})"));
            return Ok(Arc::new(named));
        }
        if let Some(group) = self.as_group() {
            let g: Arc<dyn GraphProvider> = group.cayley()?;
            return Ok(g);
        }
        let invalid = |m: &str| GroupError::InvalidParameter(m.to_string());
        Ok(match self {
            GraphSpec::RegularTree { degree } => Arc::new(RegularTree::new(*degree)?),
            GraphSpec::BeadChain { profile } => Arc::new(BeadChain::new(profile.clone())?),
            GraphSpec::Path { n } => {
                if *n == 0 {
                    return Err(invalid("path needs at least one vertex"));
                }
                Arc::new(FiniteGraph::path(*n))
            }
            GraphSpec::Cycle { n } => {
                if *n < 3 {
                    return Err(invalid("cycle needs at least three vertices"));
                }
                Arc::new(FiniteGraph::cycle(*n))
            }
            GraphSpec::Star { leaves } => Arc::new(FiniteGraph::star(*leaves)),
            GraphSpec::Complete { n } => {
                if *n == 0 {
                    return Err(invalid("complete graph needs at least one vertex"));
                }
                Arc::new(FiniteGraph::complete(*n))
            }
            GraphSpec::Explicit { n, edges } => {
                if *n == 0 {
                    return Err(invalid("explicit graph needs at least one vertex"));
                }
                Arc::new(FiniteGraph::from_edges(
                    format!("explicit({n})"),
                    *n,
                    edges,
                )?)
            }
            _ => unreachable!("group specs handled above"),
        })
    }
}
