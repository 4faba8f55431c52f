//! Protection strategies and the exhaustive adversarial solver.

mod barricade;
pub mod exhaustive;

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::FireState;
use crate::graph::{GraphError, GraphProvider, VertexId};

pub use barricade::SphereBarricade;
pub use exhaustive::{
    exhaustive_no_containment, replay_certificate, verify_confining, ConfiningStrategy,
    EscapeCertificate, ExhaustiveConfig, SearchError, SearchOutcome, SearchStats,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("no radius up to {r_max} has a sphere the budget can cover in time")]
    NoFeasibleRadius { r_max: usize },
    #[error("strategy `{strategy}` does not apply to graph `{graph}`")]
    InapplicableProvider { strategy: String, graph: String },
    #[error("invalid strategy parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Chooses `W_n` each turn. The engine validates every choice.
pub trait Strategy: Send {
    fn name(&self) -> String;

    fn choose(
        &mut self,
        state: &FireState,
        graph: &dyn GraphProvider,
        budget: usize,
    ) -> Result<Vec<VertexId>, StrategyError>;
}

/// Never protects anything.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullStrategy;

impl Strategy for NullStrategy {
    fn name(&self) -> String {
        "null".into()
    }

    fn choose(
        &mut self,
        _: &FireState,
        _: &dyn GraphProvider,
        _: usize,
    ) -> Result<Vec<VertexId>, StrategyError> {
        Ok(Vec::new())
    }
}

/// Plays a fixed list of turns, then nothing.
#[derive(Debug, Clone)]
pub struct Scripted {
    turns: Vec<Vec<VertexId>>,
}

impl Scripted {
    pub fn new(turns: Vec<Vec<VertexId>>) -> Self {
        Scripted { turns }
    }
}

impl Strategy for Scripted {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn choose(
        &mut self,
        state: &FireState,
        _: &dyn GraphProvider,
        _: usize,
    ) -> Result<Vec<VertexId>, StrategyError> {
        Ok(self.turns.get(state.time()).cloned().unwrap_or_default())
    }
}

/// Keeps a protected cut vertex between the fire and the infinite end of a
/// bead chain.
#[derive(Debug, Clone, Default)]
pub struct CutVertexStrategy;

impl CutVertexStrategy {
    pub fn new(g: &dyn GraphProvider) -> Result<Self, StrategyError> {
        if g.bead_chain().is_none() {
            return Err(StrategyError::InapplicableProvider {
                strategy: "cut-vertex".into(),
                graph: g.name(),
            });
        }
        Ok(CutVertexStrategy)
    }
}

impl Strategy for CutVertexStrategy {
    fn name(&self) -> String {
        "cut-vertex".into()
    }

    fn choose(
        &mut self,
        state: &FireState,
        graph: &dyn GraphProvider,
        budget: usize,
    ) -> Result<Vec<VertexId>, StrategyError> {
        let chain = graph
            .bead_chain()
            .ok_or_else(|| StrategyError::InapplicableProvider {
                strategy: self.name(),
                graph: graph.name(),
            })?;
        if budget == 0 {
            return Ok(Vec::new());
        }
        let mut beyond = 0;
        for v in state.burning() {
            let k = chain
                .next_cut_index(v)
                .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
            beyond = beyond.max(k);
        }
        let cut = chain.cut_vertex(beyond);
        if state.protected().contains(&cut) {
            Ok(Vec::new())
        } else {
            Ok(vec![cut])
        }
    }
}

/// Scoring rule for [`GreedyFrontier`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreedyWeight {
    /// Number of burning neighbors.
    #[default]
    BurningNeighbors,
    /// Number of open (unburned, unprotected) neighbors.
    OpenDegree,
}

/// Protects the highest-scoring open vertices next to the fire, ties broken
/// by id.
#[derive(Debug, Clone, Default)]
pub struct GreedyFrontier {
    weight: GreedyWeight,
}

impl GreedyFrontier {
    pub fn new(weight: GreedyWeight) -> Self {
        GreedyFrontier { weight }
    }

    /// Candidates with their scores, best first.
    pub fn ranked(
        &self,
        state: &FireState,
        graph: &dyn GraphProvider,
    ) -> Result<Vec<(VertexId, usize)>, GraphError> {
        let mut scored = Vec::new();
        for v in state.open_frontier(graph)? {
            let nbrs = graph.neighbors(&v)?;
            let score = match self.weight {
                GreedyWeight::BurningNeighbors => {
                    nbrs.iter().filter(|w| state.burning().contains(*w)).count()
                }
                GreedyWeight::OpenDegree => nbrs.iter().filter(|w| state.is_open(w)).count(),
            };
            scored.push((v, score));
        }
        scored.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        Ok(scored)
    }
}

impl Strategy for GreedyFrontier {
    fn name(&self) -> String {
        match self.weight {
            GreedyWeight::BurningNeighbors => "greedy-frontier".into(),
            GreedyWeight::OpenDegree => "greedy-frontier(open-degree)".into(),
        }
    }

    fn choose(
        &mut self,
        state: &FireState,
        graph: &dyn GraphProvider,
        budget: usize,
    ) -> Result<Vec<VertexId>, StrategyError> {
        let ranked = self.ranked(state, graph)?;
        Ok(ranked.into_iter().take(budget).map(|(v, _)| v).collect())
    }
}

/// Seeded random legal moves, for testing the engine and validator.
///
/// Candidates are the open vertices within distance two of the fire, or a
/// fixed pool when one is given.
#[derive(Debug, Clone)]
pub struct RandomLegal {
    rng: ChaCha8Rng,
    pool: Option<Vec<VertexId>>,
}

impl RandomLegal {
    pub fn new(seed: u64) -> Self {
        RandomLegal {
            rng: ChaCha8Rng::seed_from_u64(seed),
            pool: None,
        }
    }

    pub fn with_pool(seed: u64, pool: Vec<VertexId>) -> Self {
        RandomLegal {
            rng: ChaCha8Rng::seed_from_u64(seed),
            pool: Some(pool),
        }
    }
}

impl Strategy for RandomLegal {
    fn name(&self) -> String {
        "random-legal".into()
    }

    fn choose(
        &mut self,
        state: &FireState,
        graph: &dyn GraphProvider,
        budget: usize,
    ) -> Result<Vec<VertexId>, StrategyError> {
        let mut candidates: Vec<VertexId> = match &self.pool {
            Some(pool) => pool.iter().filter(|v| state.is_open(v)).cloned().collect(),
            None => {
                let near = state.open_frontier(graph)?;
                let mut seen: HashSet<VertexId> = near.iter().cloned().collect();
                let mut out = near.clone();
                for v in &near {
                    for w in graph.neighbors(v)? {
                        if state.is_open(&w) && seen.insert(w.clone()) {
                            out.push(w);
                        }
                    }
                }
                out
            }
        };
        candidates.sort();
        candidates.dedup();
        let k = self.rng.gen_range(0..=budget.min(candidates.len()));
        Ok(candidates
            .choose_multiple(&mut self.rng, k)
            .cloned()
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::BudgetSchedule;
    use crate::graph::FiniteGraph;
    use crate::groups::{BeadChain, BeadProfile, GraphSpec};
    use crate::play::{play, Outcome};

    fn id(g: &dyn GraphProvider, s: &str) -> VertexId {
        g.parse_vertex(s).unwrap()
    }

    #[test]
    fn greedy_on_path_end() {
        let g = FiniteGraph::path(4);
        let r = play(
            &g,
            &[id(&g, "0")],
            BudgetSchedule::constant(1),
            &mut GreedyFrontier::default(),
            10,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::Contained);
        assert_eq!(r.contained_at, Some(1));
        assert_eq!(r.trace[0].protected, vec![id(&g, "1")]);
    }

    #[test]
    fn greedy_on_star_center() {
        let g = FiniteGraph::star(5);
        let r = play(
            &g,
            &[id(&g, "0")],
            BudgetSchedule::constant(5),
            &mut GreedyFrontier::default(),
            10,
        )
        .unwrap();
        assert_eq!(r.contained_at, Some(1));
        assert_eq!(r.final_fire_size, 1);
    }

    #[test]
    fn greedy_z2_budget_one_is_undetermined() {
        let g = GraphSpec::Grid { dim: 2 }.build().unwrap();
        let r = play(
            &*g,
            &[id(&*g, "0,0")],
            BudgetSchedule::constant(1),
            &mut GreedyFrontier::default(),
            50,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::Undetermined);
    }

    #[test]
    fn cut_vertex_inside_bead_three() {
        let g = BeadChain::new(BeadProfile::Doubling).unwrap();
        let mut s = CutVertexStrategy::new(&g).unwrap();
        let fire = id(&g, "b3.2");
        let r = play(&g, &[fire], BudgetSchedule::constant(1), &mut s, 200).unwrap();
        assert_eq!(r.outcome, Outcome::Contained);
        assert_eq!(r.total_protected, 1);
        assert_eq!(r.trace[0].protected, vec![g.cut_vertex(3)]);
    }

    #[test]
    fn cut_vertex_on_a_cut_vertex() {
        let g = BeadChain::new(BeadProfile::Doubling).unwrap();
        let mut s = CutVertexStrategy::new(&g).unwrap();
        let r = play(
            &g,
            &[g.cut_vertex(2)],
            BudgetSchedule::constant(1),
            &mut s,
            200,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::Contained);
        assert_eq!(r.total_protected, 1);
        assert_eq!(r.trace[0].protected, vec![g.cut_vertex(3)]);
    }

    #[test]
    fn cut_vertex_rejects_grids() {
        let g = GraphSpec::Grid { dim: 2 }.build().unwrap();
        assert!(matches!(
            CutVertexStrategy::new(&*g),
            Err(StrategyError::InapplicableProvider { .. })
        ));
    }

    #[test]
    fn cut_vertex_with_late_budget_still_contains() {
        let g = BeadChain::new(BeadProfile::Constant(3)).unwrap();
        let mut s = CutVertexStrategy::new(&g).unwrap();
        let sched = BudgetSchedule::new(num_rational::Ratio::new(1, 3), 1);
        let r = play(&g, &[g.cut_vertex(0)], sched, &mut s, 200).unwrap();
        assert_eq!(r.outcome, Outcome::Contained);
    }

    #[test]
    fn random_legal_is_seeded() {
        let g = GraphSpec::Grid { dim: 2 }.build().unwrap();
        let x0 = [id(&*g, "0,0")];
        let run = |seed| {
            play(
                &*g,
                &x0,
                BudgetSchedule::constant(3),
                &mut RandomLegal::new(seed),
                8,
            )
            .unwrap()
            .trace
        };
        assert_eq!(run(7), run(7));
    }
}
