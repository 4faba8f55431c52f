//! Certifying that two elements generate a free semigroup, up to a depth.

use std::collections::HashMap;

use serde::Serialize;

use super::{GroupError, GroupGraph};
use crate::graph::{GraphError, LayerWalker, VertexId};

#[derive(Debug, Clone, Serialize)]
pub struct SemigroupNode {
    /// Positive word over `u`, `v` (empty for the root).
    pub word: String,
    pub element: VertexId,
    pub parent: Option<usize>,
}

/// All positive words in `u`, `v` of length at most `depth`, evaluated in the
/// group. Node `i` has children `2i+1` (append `u`) and `2i+2` (append `v`).
#[derive(Debug, Clone, Serialize)]
pub struct SemigroupTree {
    pub u: VertexId,
    pub v: VertexId,
    pub depth: usize,
    pub nodes: Vec<SemigroupNode>,
    pub distinct: usize,
    pub free_up_to_depth: bool,
    /// First pair of distinct words found to be equal, if any.
    pub collision: Option<(String, String)>,
}

impl SemigroupTree {
    /// Number of tree edges incident to node `i`.
    pub fn degree(&self, i: usize) -> usize {
        let children = [2 * i + 1, 2 * i + 2]
            .iter()
            .filter(|&&c| c < self.nodes.len())
            .count();
        children + usize::from(self.nodes[i].parent.is_some())
    }
}

fn check_generators(group: &dyn GroupGraph, u: &VertexId, v: &VertexId) -> Result<(), GroupError> {
    let e = group.identity_id();
    for x in [u, v] {
        if *x == e {
            return Err(GroupError::InvalidParameter(
                "semigroup generators must not be the identity".into(),
            ));
        }
    }
    Ok(())
}

/// Builds the depth-truncated semigroup tree and reports whether all
/// `2^(depth+1) - 1` words name distinct elements.
pub fn semigroup_tree(
    group: &dyn GroupGraph,
    u: &VertexId,
    v: &VertexId,
    depth: usize,
    cap: usize,
) -> Result<SemigroupTree, GroupError> {
    check_generators(group, u, v)?;
    if depth == 0 {
        return Err(GroupError::InvalidParameter(
            "depth must be at least 1".into(),
        ));
    }
    let total = 1usize
        .checked_shl(depth as u32 + 1)
        .map(|n| n - 1)
        .filter(|&n| n <= cap)
        .ok_or(GroupError::Graph(GraphError::CapExceeded { cap }))?;

    let mut nodes = Vec::with_capacity(total);
    let mut first_word: HashMap<VertexId, usize> = HashMap::with_capacity(total);
    let mut collision = None;
    nodes.push(SemigroupNode {
        word: String::new(),
        element: group.identity_id(),
        parent: None,
    });
    first_word.insert(group.identity_id(), 0);
    for i in 1..total {
        let parent = (i - 1) / 2;
        let (letter, gen) = if i % 2 == 1 { ('u', u) } else { ('v', v) };
        let element = group.multiply_ids(&nodes[parent].element, gen)?;
        let mut word = nodes[parent].word.clone();
        word.push(letter);
        match first_word.get(&element) {
            Some(&j) => {
                if collision.is_none() {
                    collision = Some((nodes[j].word.clone(), word.clone()));
                }
            }
            None => {
                first_word.insert(element.clone(), i);
            }
        }
        nodes.push(SemigroupNode {
            word,
            element,
            parent: Some(parent),
        });
    }
    Ok(SemigroupTree {
        u: u.clone(),
        v: v.clone(),
        depth,
        distinct: first_word.len(),
        free_up_to_depth: collision.is_none(),
        collision,
        nodes,
    })
}

/// Whether all positive words of length `<= depth` are distinct, stopping at
/// the first collision.
fn free_up_to(
    group: &dyn GroupGraph,
    u: &VertexId,
    v: &VertexId,
    depth: usize,
) -> Result<bool, GroupError> {
    let mut seen = std::collections::HashSet::new();
    let mut layer = vec![group.identity_id()];
    seen.insert(group.identity_id());
    for _ in 0..depth {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for x in &layer {
            for g in [u, v] {
                let y = group.multiply_ids(x, g)?;
                if !seen.insert(y.clone()) {
                    return Ok(false);
                }
                next.push(y);
            }
        }
        layer = next;
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct PairSearch {
    pub max_word_length: usize,
    pub depth: usize,
    pub candidates: usize,
    pub pairs_tested: usize,
    pub found: Option<SemigroupTree>,
}

/// Scans unordered pairs of distinct non-identity elements of word length at
/// most `max_word_length`, in breadth-first order of the Cayley graph, and
/// returns the first pair that is free up to `depth`.
pub fn search_free_pair(
    group: &dyn GroupGraph,
    max_word_length: usize,
    depth: usize,
    cap: usize,
) -> Result<PairSearch, GroupError> {
    let mut walker = LayerWalker::new(group, &[group.identity_id()], cap)?;
    walker.next_layer()?;
    let mut candidates = Vec::new();
    for _ in 0..max_word_length {
        candidates.extend_from_slice(walker.next_layer()?);
    }
    let mut pairs_tested = 0;
    for (i, u) in candidates.iter().enumerate() {
        for v in &candidates[i + 1..] {
            pairs_tested += 1;
            if free_up_to(group, u, v, depth)? {
                let tree = semigroup_tree(group, u, v, depth, cap)?;
                debug_assert!(tree.free_up_to_depth);
                return Ok(PairSearch {
                    max_word_length,
                    depth,
                    candidates: candidates.len(),
                    pairs_tested,
                    found: Some(tree),
                });
            }
        }
    }
    Ok(PairSearch {
        max_word_length,
        depth,
        candidates: candidates.len(),
        pairs_tested,
        found: None,
    })
}
