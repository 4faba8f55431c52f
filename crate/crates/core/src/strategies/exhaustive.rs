//! Complete minimax search on a truncated graph.
//!
//! The fire escapes when it reaches distance `R` from the initial fire within
//! the horizon. Since the sphere `S_R` separates the ball from the rest of the
//! graph, the search only needs the ball `B(R)`, which is encoded as 128-bit
//! vertex masks.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Scripted;
use crate::game::BudgetSchedule;
use crate::graph::{ball, GraphError, GraphProvider, VertexId};
use crate::groups::GraphSpec;
use crate::play::play;

pub const CERTIFICATE_FORMAT: &str = "firebreak-certificate/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExhaustiveConfig {
    pub truncation_depth: usize,
    pub horizon: usize,
    /// Largest ball the search accepts (at most 128).
    pub vertex_cap: usize,
    /// Search nodes allowed before giving up as inconclusive.
    pub node_limit: u64,
}

impl ExhaustiveConfig {
    pub const DEFAULT_VERTEX_CAP: usize = 64;
    pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

    pub fn new(truncation_depth: usize, horizon: usize) -> Self {
        ExhaustiveConfig {
            truncation_depth,
            horizon,
            vertex_cap: Self::DEFAULT_VERTEX_CAP,
            node_limit: Self::DEFAULT_NODE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub memo_entries: u64,
    pub ball_vertices: usize,
    pub sphere_vertices: usize,
}

/// Proof by exhaustion that no legal strategy keeps the fire inside
/// `B(R - 1)` through the horizon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeCertificate {
    pub format: String,
    pub graph: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_spec: Option<GraphSpec>,
    pub initial_fire: Vec<VertexId>,
    pub schedule: BudgetSchedule,
    pub truncation_depth: usize,
    pub horizon: usize,
    pub statement: String,
    pub search_stats: SearchStats,
}

impl EscapeCertificate {
    /// Whether this certificate rules out confinement for the given game:
    /// same graph and fire, no more budget, at least as long a horizon.
    pub fn covers(
        &self,
        graph: &str,
        initial_fire: &[VertexId],
        schedule: BudgetSchedule,
        horizon: usize,
    ) -> bool {
        let mine: BTreeSet<_> = self.initial_fire.iter().collect();
        let theirs: BTreeSet<_> = initial_fire.iter().collect();
        self.graph == graph
            && mine == theirs
            && schedule.dominated_by(&self.schedule)
            && horizon >= self.horizon
    }
}

/// A strategy found by the search that keeps the fire off `S_R` through the
/// horizon. `turns[n - 1]` is `W_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfiningStrategy {
    pub graph: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_spec: Option<GraphSpec>,
    pub initial_fire: Vec<VertexId>,
    pub schedule: BudgetSchedule,
    pub truncation_depth: usize,
    pub horizon: usize,
    pub turns: Vec<Vec<VertexId>>,
    /// The fire has stopped spreading by the last listed turn.
    pub contained: bool,
    pub search_stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Escape(EscapeCertificate),
    Confining(ConfiningStrategy),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("ball has more than {cap} vertices")]
    CapExceeded { cap: usize },
    #[error("search inconclusive after {nodes} nodes")]
    NodeLimit { nodes: u64 },
    #[error("invalid search parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

struct Truncation {
    labels: Vec<VertexId>,
    adjacency: Vec<u128>,
    boundary: u128,
    fire: u128,
}

fn truncate(
    g: &dyn GraphProvider,
    x0: &[VertexId],
    depth: usize,
    cap: usize,
) -> Result<Truncation, SearchError> {
    let b = ball(g, x0, depth, cap).map_err(|e| match e {
        GraphError::CapExceeded { cap } => SearchError::CapExceeded { cap },
        other => SearchError::Graph(other),
    })?;
    let mut adjacency = vec![0u128; b.len()];
    for &(i, j) in &b.edges {
        adjacency[i] |= 1 << j;
        adjacency[j] |= 1 << i;
    }
    let mut boundary = 0u128;
    let mut fire = 0u128;
    for (i, (_, d)) in b.vertices.iter().enumerate() {
        if *d == depth {
            boundary |= 1 << i;
        }
        if *d == 0 {
            fire |= 1 << i;
        }
    }
    Ok(Truncation {
        labels: b.vertices.into_iter().map(|(v, _)| v).collect(),
        adjacency,
        boundary,
        fire,
    })
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

struct Search<'a> {
    t: &'a Truncation,
    schedule: BudgetSchedule,
    horizon: usize,
    node_limit: u64,
    /// Winning states map to the move that keeps the fire confined.
    memo: HashMap<(u128, u128, usize), Option<u128>>,
    stats: SearchStats,
}

impl Search<'_> {
    fn nbhd(&self, m: u128) -> u128 {
        bits(m).fold(0, |acc, i| acc | self.t.adjacency[i])
    }

    /// Whether the player can keep the fire off the boundary from turn `n` on.
    fn confinable(
        &mut self,
        burning: u128,
        protected: u128,
        n: usize,
    ) -> Result<bool, SearchError> {
        if burning & self.t.boundary != 0 {
            return Ok(false);
        }
        if n > self.horizon {
            return Ok(true);
        }
        let open = self.nbhd(burning) & !burning & !protected;
        if open == 0 {
            return Ok(true);
        }
        let key = (burning, protected, n);
        if let Some(hit) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(hit.is_some());
        }
        self.stats.nodes += 1;
        if self.stats.nodes > self.node_limit {
            return Err(SearchError::NodeLimit {
                nodes: self.stats.nodes,
            });
        }

        // Only vertices the fire could still reach before the horizon matter.
        let mut reach = 0u128;
        let mut layer = burning;
        for _ in n..=self.horizon {
            layer = self.nbhd(layer) & !burning & !protected & !reach;
            if layer == 0 {
                break;
            }
            reach |= layer;
        }
        let candidates: Vec<usize> = bits(reach).collect();
        // Protecting more never hurts, so only maximal moves are tried.
        let k = self.schedule.budget(n).min(candidates.len());

        let mut winning = None;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let w = idx.iter().fold(0u128, |acc, &i| acc | 1 << candidates[i]);
            let p = protected | w;
            let next = burning | (self.nbhd(burning) & !p);
            if self.confinable(next, p, n + 1)? {
                winning = Some(w);
                break;
            }
            if !next_combination(&mut idx, candidates.len()) {
                break;
            }
        }
        self.memo.insert(key, winning);
        Ok(winning.is_some())
    }
}

/// Advances `idx` to the next `k`-combination of `0..m` in lexicographic
/// order; false when exhausted.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < m - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn check_params(x0: &[VertexId], cfg: &ExhaustiveConfig) -> Result<(), SearchError> {
    if x0.is_empty() {
        return Err(GraphError::EmptyCenter.into());
    }
    if cfg.truncation_depth == 0 {
        return Err(SearchError::InvalidParameter(
            "truncation depth must be positive".into(),
        ));
    }
    if cfg.horizon == 0 || cfg.horizon > cfg.truncation_depth {
        return Err(SearchError::InvalidParameter(format!(
            "horizon must be between 1 and the truncation depth {}",
            cfg.truncation_depth
        )));
    }
    if cfg.vertex_cap > 128 {
        return Err(SearchError::InvalidParameter(
            "vertex cap is at most 128".into(),
        ));
    }
    Ok(())
}

/// Decides whether any legal strategy keeps the fire within distance
/// `R - 1` of `x0` through the horizon.
pub fn exhaustive_no_containment(
    g: &dyn GraphProvider,
    x0: &[VertexId],
    schedule: BudgetSchedule,
    cfg: &ExhaustiveConfig,
) -> Result<SearchOutcome, SearchError> {
    check_params(x0, cfg)?;
    let t = truncate(g, x0, cfg.truncation_depth, cfg.vertex_cap)?;
    let mut search = Search {
        t: &t,
        schedule,
        horizon: cfg.horizon,
        node_limit: cfg.node_limit,
        memo: HashMap::new(),
        stats: SearchStats {
            ball_vertices: t.labels.len(),
            sphere_vertices: t.boundary.count_ones() as usize,
            ..SearchStats::default()
        },
    };
    let confinable = search.confinable(t.fire, 0, 1)?;
    search.stats.memo_entries = search.memo.len() as u64;
    let initial_fire: Vec<VertexId> = bits(t.fire).map(|i| t.labels[i].clone()).collect();

    if !confinable {
        let statement = format!(
            "no strategy with budget {schedule} keeps the fire within distance {} of the initial fire through turn {}",
            cfg.truncation_depth - 1,
            cfg.horizon
        );
        return Ok(SearchOutcome::Escape(EscapeCertificate {
            format: CERTIFICATE_FORMAT.into(),
            graph: g.name(),
            graph_spec: None,
            initial_fire,
            schedule,
            truncation_depth: cfg.truncation_depth,
            horizon: cfg.horizon,
            statement,
            search_stats: search.stats,
        }));
    }

    let mut turns = Vec::new();
    let (mut burning, mut protected) = (t.fire, 0u128);
    let mut n = 1;
    while let Some(Some(w)) = search.memo.get(&(burning, protected, n)) {
        turns.push(bits(*w).map(|i| t.labels[i].clone()).collect());
        protected |= w;
        burning |= search.nbhd(burning) & !protected;
        n += 1;
    }
    let contained = search.nbhd(burning) & !burning & !protected == 0;
    Ok(SearchOutcome::Confining(ConfiningStrategy {
        graph: g.name(),
        graph_spec: None,
        initial_fire,
        schedule,
        truncation_depth: cfg.truncation_depth,
        horizon: cfg.horizon,
        turns,
        contained,
        search_stats: search.stats,
    }))
}

/// Re-derives a certificate by brute force: every sequence of legal moves of
/// every size, without memoization or pruning, must let the fire reach
/// distance `R`. Returns `Ok(false)` if some sequence confines the fire.
pub fn replay_certificate(
    g: &dyn GraphProvider,
    cert: &EscapeCertificate,
    node_limit: u64,
) -> Result<bool, SearchError> {
    if g.name() != cert.graph {
        return Err(SearchError::InvalidParameter(format!(
            "certificate is for `{}`, not `{}`",
            cert.graph,
            g.name()
        )));
    }
    let x0: Vec<VertexId> = cert
        .initial_fire
        .iter()
        .map(|v| g.parse_vertex(v.as_str()))
        .collect::<Result<_, _>>()?;

    // Own BFS, adjacency lists and status vectors.
    let mut dist: HashMap<VertexId, usize> = x0.iter().map(|v| (v.clone(), 0)).collect();
    let mut order: Vec<VertexId> = x0.clone();
    let mut head = 0;
    while head < order.len() {
        let v = order[head].clone();
        head += 1;
        let d = dist[&v];
        if d == cert.truncation_depth {
            continue;
        }
        for w in g.neighbors(&v)? {
            if !dist.contains_key(&w) {
                dist.insert(w.clone(), d + 1);
                order.push(w);
            }
        }
    }
    let index: HashMap<&VertexId, usize> = order.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut adj = vec![Vec::new(); order.len()];
    for (i, v) in order.iter().enumerate() {
        for w in g.neighbors(v)? {
            if let Some(&j) = index.get(&w) {
                adj[i].push(j);
            }
        }
    }
    let at_depth: Vec<bool> = order
        .iter()
        .map(|v| dist[v] == cert.truncation_depth)
        .collect();

    #[derive(Clone, Copy, PartialEq)]
    enum S {
        Open,
        Fire,
        Guard,
    }
    struct Brute<'a> {
        adj: &'a [Vec<usize>],
        at_depth: &'a [bool],
        schedule: BudgetSchedule,
        horizon: usize,
        nodes: u64,
        limit: u64,
    }
    impl Brute<'_> {
        fn all_escape(&mut self, s: &[S], n: usize) -> Result<bool, SearchError> {
            if s.iter()
                .zip(self.at_depth)
                .any(|(x, d)| *x == S::Fire && *d)
            {
                return Ok(true);
            }
            if n > self.horizon {
                return Ok(false);
            }
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(SearchError::NodeLimit { nodes: self.nodes });
            }
            let open: Vec<usize> = (0..s.len()).filter(|&i| s[i] == S::Open).collect();
            let budget = self.schedule.budget(n).min(open.len());
            for size in 0..=budget {
                let mut idx: Vec<usize> = (0..size).collect();
                loop {
                    let mut next = s.to_vec();
                    for &i in &idx {
                        next[open[i]] = S::Guard;
                    }
                    let mut spread = next.clone();
                    for (v, x) in next.iter().enumerate() {
                        if *x == S::Fire {
                            for &u in &self.adj[v] {
                                if next[u] == S::Open {
                                    spread[u] = S::Fire;
                                }
                            }
                        }
                    }
                    if !self.all_escape(&spread, n + 1)? {
                        return Ok(false);
                    }
                    if size == 0 || !next_combination(&mut idx, open.len()) {
                        break;
                    }
                }
            }
            Ok(true)
        }
    }

    let mut state = vec![S::Open; order.len()];
    for v in &x0 {
        state[index[v]] = S::Fire;
    }
    let mut brute = Brute {
        adj: &adj,
        at_depth: &at_depth,
        schedule: cert.schedule,
        horizon: cert.horizon,
        nodes: 0,
        limit: node_limit,
    };
    brute.all_escape(&state, 1)
}

/// Plays a confining strategy through the engine and checks that the fire
/// never reaches distance `R` within the horizon, and that containment
/// matches the search's claim.
pub fn verify_confining(g: &dyn GraphProvider, s: &ConfiningStrategy) -> Result<bool, SearchError> {
    let inner = ball(g, &s.initial_fire, s.truncation_depth - 1, usize::MAX)?;
    let mut scripted = Scripted::new(s.turns.clone());
    let report = match play(g, &s.initial_fire, s.schedule, &mut scripted, s.horizon) {
        Ok(r) => r,
        Err(_) => return Ok(false),
    };
    let mut state = crate::game::new_game(g, &s.initial_fire, s.schedule)
        .map_err(|e| SearchError::InvalidParameter(e.to_string()))?;
    for w in s.turns.iter().take(s.horizon) {
        if state.step(g, w).is_err() {
            return Ok(false);
        }
        if state.burning().iter().any(|v| !inner.contains(v)) {
            return Ok(false);
        }
    }
    let contained_ok = !s.contained || report.contained_at.is_some_and(|t| t <= s.turns.len());
    Ok(contained_ok && report.final_fire_size <= inner.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;
    use crate::groups::RegularTree;

    fn id(g: &dyn GraphProvider, s: &str) -> VertexId {
        g.parse_vertex(s).unwrap()
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut idx = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut idx, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
    }

    #[test]
    fn path_middle_fire_is_confined() {
        let g = FiniteGraph::path(5);
        let out = exhaustive_no_containment(
            &g,
            &[id(&g, "2")],
            BudgetSchedule::constant(2),
            &ExhaustiveConfig::new(2, 2),
        )
        .unwrap();
        let SearchOutcome::Confining(s) = out else {
            panic!("expected a confining strategy")
        };
        assert_eq!(s.turns[0], vec![id(&g, "1"), id(&g, "3")]);
        assert!(s.contained);
        assert!(verify_confining(&g, &s).unwrap());
    }

    #[test]
    fn star_center_fire_is_confined_at_once() {
        let g = FiniteGraph::star(3);
        let out = exhaustive_no_containment(
            &g,
            &[id(&g, "0")],
            BudgetSchedule::constant(3),
            &ExhaustiveConfig::new(1, 1),
        )
        .unwrap();
        let SearchOutcome::Confining(s) = out else {
            panic!("expected a confining strategy")
        };
        assert_eq!(s.turns.len(), 1);
        assert_eq!(s.turns[0].len(), 3);
    }

    #[test]
    fn small_tree_certificate_replays() {
        let g = RegularTree::new(3).unwrap();
        let out = exhaustive_no_containment(
            &g,
            &[g.basepoint()],
            BudgetSchedule::constant(1),
            &ExhaustiveConfig::new(2, 2),
        )
        .unwrap();
        let SearchOutcome::Escape(cert) = out else {
            panic!("expected a certificate")
        };
        assert!(replay_certificate(&g, &cert, 1_000_000).unwrap());
        let json = serde_json::to_string(&cert).unwrap();
        let back: EscapeCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn budget_two_confines_the_tree_at_depth_two() {
        let g = RegularTree::new(3).unwrap();
        let out = exhaustive_no_containment(
            &g,
            &[g.basepoint()],
            BudgetSchedule::constant(2),
            &ExhaustiveConfig::new(2, 2),
        )
        .unwrap();
        assert!(matches!(out, SearchOutcome::Confining(_)));
    }

    #[test]
    fn rejects_oversized_balls_and_bad_horizons() {
        let g = RegularTree::new(3).unwrap();
        let mut cfg = ExhaustiveConfig::new(6, 6);
        assert_eq!(
            exhaustive_no_containment(&g, &[g.basepoint()], BudgetSchedule::constant(1), &cfg),
            Err(SearchError::CapExceeded { cap: 64 })
        );
        cfg.horizon = 7;
        assert!(matches!(
            exhaustive_no_containment(&g, &[g.basepoint()], BudgetSchedule::constant(1), &cfg),
            Err(SearchError::InvalidParameter(_))
        ));
    }
}
