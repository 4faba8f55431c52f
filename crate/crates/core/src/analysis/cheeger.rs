use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::graph::{FiniteBall, FiniteGraph, VertexId};

pub const DEFAULT_EXACT_CAP: usize = 20;

/// Which vertex sets `K` are admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsetFamily {
    /// `0 < |K| <= |V|/2`, the usual convention for finite graphs.
    HalfOrLess,
    /// `K` non-empty and not all of `V`.
    Proper,
    /// Any non-empty `K`; meaningful when the graph sits inside an ambient
    /// graph whose edges leaving `V` count towards the boundary.
    AllNonEmpty,
}

impl SubsetFamily {
    fn admits(&self, size: usize, n: usize) -> bool {
        size > 0
            && match self {
                SubsetFamily::HalfOrLess => 2 * size <= n,
                SubsetFamily::Proper => size < n,
                SubsetFamily::AllNonEmpty => true,
            }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            SubsetFamily::HalfOrLess => "non-empty K with |K| <= |V|/2",
            SubsetFamily::Proper => "proper non-empty K",
            SubsetFamily::AllNonEmpty => "all non-empty K",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheegerMode {
    ExactSmall,
    BallSweep,
    LocalSearch,
}

/// Best `|∂K| / |K|` found over a family of vertex sets. Always an upper
/// bound on the infimum over that family; exact in mode `exact-small`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheegerEstimate {
    pub mode: CheegerMode,
    pub family: SubsetFamily,
    pub subsets_considered: u64,
    pub best_ratio: Ratio<u64>,
    pub boundary: u64,
    pub witness: Vec<VertexId>,
}

/// Edge boundary of `K` (given by membership flags), counting edges to the
/// rest of the graph and edges leaving into the ambient graph.
pub fn boundary_of(g: &FiniteGraph, members: &[bool]) -> u64 {
    let mut b = 0;
    for (v, &inside) in members.iter().enumerate() {
        if inside {
            b += g.external_degree(v) as u64;
            b += g.adjacency(v).iter().filter(|&&w| !members[w]).count() as u64;
        }
    }
    b
}

/// Exact minimum of `|∂K| / |K|` over the family by enumerating all subsets.
pub fn cheeger_exact_small(
    g: &FiniteGraph,
    family: SubsetFamily,
    cap: usize,
) -> Result<CheegerEstimate, AnalysisError> {
    let n = g.len();
    if n > cap || n > 30 {
        return Err(AnalysisError::TooLarge {
            size: n,
            cap: cap.min(30),
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.adjacency(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let ext: Vec<u64> = (0..n).map(|v| g.external_degree(v) as u64).collect();

    let mut best: Option<(Ratio<u64>, u64, u32)> = None;
    let mut considered = 0u64;
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if !family.admits(size, n) {
            continue;
        }
        considered += 1;
        let mut b = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            b += ((adj[v] & !mask).count_ones() as u64) + ext[v];
        }
        let r = Ratio::new(b, size as u64);
        if best.is_none_or(|(br, _, _)| r < br) {
            best = Some((r, b, mask));
        }
    }
    let (best_ratio, boundary, mask) = best.ok_or_else(|| {
        AnalysisError::InvalidParameter(format!("no admissible subset ({})", family.describe()))
    })?;
    Ok(CheegerEstimate {
        mode: CheegerMode::ExactSmall,
        family,
        subsets_considered: considered,
        best_ratio,
        boundary,
        witness: (0..n)
            .filter(|v| mask >> v & 1 == 1)
            .map(|v| g.label(v).clone())
            .collect(),
    })
}

/// Best ball `B(k)`, `k <= radius`, inside a computed ball, boundary counted
/// in the ambient graph.
pub fn ball_sweep(b: &FiniteBall) -> CheegerEstimate {
    let g = b.to_graph();
    let mut best: Option<(Ratio<u64>, u64, usize)> = None;
    for k in 0..=b.radius {
        let members: Vec<bool> = b.vertices.iter().map(|(_, d)| *d <= k).collect();
        let size = members.iter().filter(|&&m| m).count() as u64;
        if size == 0 {
            continue;
        }
        let bd = boundary_of(&g, &members);
        let r = Ratio::new(bd, size);
        if best.is_none_or(|(br, _, _)| r < br) {
            best = Some((r, bd, k));
        }
    }
    let (best_ratio, boundary, k) = best.expect("ball has a center");
    CheegerEstimate {
        mode: CheegerMode::BallSweep,
        family: SubsetFamily::AllNonEmpty,
        subsets_considered: b.radius as u64 + 1,
        best_ratio,
        boundary,
        witness: b
            .vertices
            .iter()
            .filter(|(_, d)| *d <= k)
            .map(|(v, _)| v.clone())
            .collect(),
    }
}

struct Local<'a> {
    g: &'a FiniteGraph,
    family: SubsetFamily,
    members: Vec<bool>,
    size: usize,
    boundary: u64,
    /// Per vertex: neighbors currently in `K`.
    inside: Vec<u64>,
}

impl<'a> Local<'a> {
    fn new(g: &'a FiniteGraph, family: SubsetFamily, members: Vec<bool>) -> Self {
        let size = members.iter().filter(|&&m| m).count();
        let boundary = boundary_of(g, &members);
        let inside = (0..g.len())
            .map(|v| g.adjacency(v).iter().filter(|&&w| members[w]).count() as u64)
            .collect();
        Local {
            g,
            family,
            members,
            size,
            boundary,
            inside,
        }
    }

    fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.boundary, self.size as u64)
    }

    /// Boundary and size after toggling `v`, if the result is admissible.
    fn toggled(&self, v: usize) -> Option<(u64, usize)> {
        let deg = self.g.adjacency(v).len() as u64 + self.g.external_degree(v) as u64;
        let inn = self.inside[v];
        if self.members[v] {
            let size = self.size - 1;
            self.family
                .admits(size, self.g.len())
                .then(|| (self.boundary + 2 * inn - deg, size))
        } else {
            let size = self.size + 1;
            self.family
                .admits(size, self.g.len())
                .then(|| (self.boundary + deg - 2 * inn, size))
        }
    }

    fn toggle(&mut self, v: usize) {
        let (b, s) = self.toggled(v).expect("admissible move");
        self.boundary = b;
        self.size = s;
        self.members[v] = !self.members[v];
        for &w in self.g.adjacency(v) {
            if self.members[v] {
                self.inside[w] += 1;
            } else {
                self.inside[w] -= 1;
            }
        }
    }
}

/// Steepest descent over single-vertex additions and removals, from the
/// whole admissible start plus seeded random starts. Each move costs one
/// iteration; with zero iterations the first start's ratio is returned.
pub fn cheeger_local_search(
    g: &FiniteGraph,
    family: SubsetFamily,
    iterations: usize,
    starts: usize,
    seed: u64,
) -> Result<CheegerEstimate, AnalysisError> {
    let n = g.len();
    if !family.admits(1, n) {
        return Err(AnalysisError::InvalidParameter(
            "graph too small for this subset family".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let largest = (1..=n).rev().find(|&s| family.admits(s, n)).unwrap_or(1);
    let bfs_prefix = |root: usize, size: usize| -> Vec<bool> {
        let mut members = vec![false; n];
        let mut queue = std::collections::VecDeque::from([root]);
        members[root] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in g.adjacency(v) {
                if count < size && !members[w] {
                    members[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        members
    };

    let mut budget = iterations;
    let mut considered = 0u64;
    let mut best: Option<(Ratio<u64>, u64, Vec<bool>)> = None;
    for start in 0..starts.max(1) {
        let members = if start == 0 {
            bfs_prefix(0, largest)
        } else {
            bfs_prefix(rng.gen_range(0..n), rng.gen_range(1..=largest))
        };
        let mut local = Local::new(g, family, members);
        considered += 1;
        while budget > 0 {
            let current = local.ratio();
            let mut best_move: Option<(Ratio<u64>, usize)> = None;
            for v in 0..n {
                if let Some((b, s)) = local.toggled(v) {
                    considered += 1;
                    let r = Ratio::new(b, s as u64);
                    if r < current && best_move.is_none_or(|(br, _)| r < br) {
                        best_move = Some((r, v));
                    }
                }
            }
            let Some((_, v)) = best_move else { break };
            local.toggle(v);
            budget -= 1;
        }
        if best.as_ref().is_none_or(|(br, _, _)| local.ratio() < *br) {
            best = Some((local.ratio(), local.boundary, local.members.clone()));
        }
        if budget == 0 {
            break;
        }
    }
    let (best_ratio, boundary, members) = best.expect("at least one start");
    Ok(CheegerEstimate {
        mode: CheegerMode::LocalSearch,
        family,
        subsets_considered: considered,
        best_ratio,
        boundary,
        witness: (0..n)
            .filter(|&v| members[v])
            .map(|v| g.label(v).clone())
            .collect(),
    })
}

/// How far local search lands above the exact optimum on a graph small
/// enough to enumerate: `local - exact`, never negative.
pub fn calibrate_local_search(
    small: &FiniteGraph,
    family: SubsetFamily,
    iterations: usize,
    starts: usize,
    seed: u64,
) -> Result<Ratio<u64>, AnalysisError> {
    let exact = cheeger_exact_small(small, family, small.len().max(DEFAULT_EXACT_CAP))?;
    let local = cheeger_local_search(small, family, iterations, starts, seed)?;
    Ok(local.best_ratio - exact.best_ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ball, GraphProvider, DEFAULT_VERTEX_CAP};
    use crate::groups::GraphSpec;

    #[test]
    fn small_examples() {
        let p3 = FiniteGraph::path(3);
        let e = cheeger_exact_small(&p3, SubsetFamily::Proper, 20).unwrap();
        assert_eq!(e.best_ratio, Ratio::new(1, 2));
        assert_eq!(e.witness.len(), 2);

        let k4 = FiniteGraph::complete(4);
        let e = cheeger_exact_small(&k4, SubsetFamily::HalfOrLess, 20).unwrap();
        assert_eq!(e.best_ratio, Ratio::from_integer(2));

        let k2 = FiniteGraph::path(2);
        let e = cheeger_exact_small(&k2, SubsetFamily::Proper, 20).unwrap();
        assert_eq!(e.best_ratio, Ratio::from_integer(1));
    }

    #[test]
    fn cap_is_enforced() {
        let g = FiniteGraph::path(21);
        assert!(matches!(
            cheeger_exact_small(&g, SubsetFamily::Proper, 20),
            Err(AnalysisError::TooLarge { .. })
        ));
    }

    #[test]
    fn witness_recomputes_to_ratio() {
        let g = FiniteGraph::cycle(9);
        for fam in [SubsetFamily::HalfOrLess, SubsetFamily::Proper] {
            let e = cheeger_exact_small(&g, fam, 20).unwrap();
            let members: Vec<bool> = g.labels().iter().map(|l| e.witness.contains(l)).collect();
            let b = boundary_of(&g, &members);
            assert_eq!(Ratio::new(b, e.witness.len() as u64), e.best_ratio);
        }
    }

    #[test]
    fn zero_iterations_return_the_start() {
        let z2 = GraphSpec::Grid { dim: 2 }.build().unwrap();
        let b = ball(&*z2, &[z2.basepoint()], 6, DEFAULT_VERTEX_CAP).unwrap();
        let g = b.to_graph();
        let e = cheeger_local_search(&g, SubsetFamily::AllNonEmpty, 0, 4, 1).unwrap();
        assert_eq!(
            e.best_ratio,
            Ratio::new(b.boundary_edges() as u64, b.len() as u64)
        );
    }

    #[test]
    fn local_search_beats_the_ball() {
        let z2 = GraphSpec::Grid { dim: 2 }.build().unwrap();
        let b = ball(&*z2, &[z2.basepoint()], 6, DEFAULT_VERTEX_CAP).unwrap();
        let g = b.to_graph();
        let e = cheeger_local_search(&g, SubsetFamily::AllNonEmpty, 500, 4, 1).unwrap();
        assert!(e.best_ratio <= Ratio::new(b.boundary_edges() as u64, b.len() as u64));
        assert!(ball_sweep(&b).best_ratio >= e.best_ratio);
    }
}
