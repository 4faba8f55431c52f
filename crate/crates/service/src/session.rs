use std::sync::Arc;
use std::time::Instant;

use axum::http::StatusCode;
use firebreak_core::graph::ball;
use firebreak_core::strategies::GreedyFrontier;
use firebreak_core::{
    new_game, BudgetSchedule, FireState, GameError, GraphError, GraphProvider, GraphSpec, Trace,
    VertexId,
};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;

pub const VIEW_SCHEMA: &str = "firebreak-view/1";

/// Largest number of vertices a single view may contain. Sessions never let
/// the fire and protections grow past it, so the fire itself always fits.
pub const VIEW_VERTEX_CAP: usize = 20_000;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub graph: GraphSpec,
    /// Canonical vertex ids; the basepoint when omitted.
    #[serde(default)]
    pub fire: Option<Vec<String>>,
    pub schedule: BudgetSchedule,
    #[serde(default)]
    pub view_radius: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtectRequest {
    pub vertices: Vec<String>,
    /// Remove the vertices from the pending set instead of adding them.
    #[serde(default)]
    pub revoke: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Burning,
    Protected,
    Open,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewVertex {
    pub id: VertexId,
    /// Distance from the fire.
    pub distance: usize,
    pub layout: [f64; 2],
    pub status: Status,
    pub pending: bool,
}

/// A window of the board around the fire.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct View {
    pub schema: String,
    pub session: String,
    pub graph: String,
    pub schedule: BudgetSchedule,
    /// Turns played so far.
    pub time: usize,
    /// `f(time + 1)`, the budget of the turn being prepared.
    pub budget: usize,
    pub pending: Vec<VertexId>,
    pub contained: bool,
    pub contained_at: Option<usize>,
    pub fire_size: usize,
    pub protected_count: usize,
    pub radius: usize,
    pub vertices: Vec<ViewVertex>,
    pub edges: Vec<[VertexId; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hint {
    pub advisory: bool,
    pub strategy: String,
    pub vertices: Vec<VertexId>,
}

/// One interactive game. Protections accumulate in `pending` and are only
/// applied to the engine state by [`Session::step`].
pub struct Session {
    id: String,
    spec: GraphSpec,
    graph: Arc<dyn GraphProvider>,
    state: FireState,
    pending: Vec<VertexId>,
    view_radius: usize,
    pub(crate) created: Instant,
    pub(crate) touched: Instant,
}

fn parse_ids(g: &dyn GraphProvider, texts: &[String]) -> Result<Vec<VertexId>, ApiError> {
    texts
        .iter()
        .map(|t| {
            g.parse_vertex(t).map_err(|e| {
                ApiError::unprocessable("unknown-vertex", e.to_string())
                    .with_vertices(vec![t.clone()])
            })
        })
        .collect()
}

impl Session {
    pub fn create(
        id: String,
        req: CreateRequest,
        default_radius: usize,
        vertex_cap: usize,
    ) -> Result<Self, ApiError> {
        let graph = req
            .graph
            .build()
            .map_err(|e| ApiError::unprocessable("invalid-graph", e.to_string()))?;
        let fire = match &req.fire {
            Some(ids) => parse_ids(&*graph, ids)?,
            None => vec![graph.basepoint()],
        };
        let state = new_game(&*graph, &fire, req.schedule)
            .map_err(ApiError::from)?
            .with_vertex_cap(vertex_cap.min(VIEW_VERTEX_CAP));
        let now = Instant::now();
        Ok(Session {
            id,
            spec: req.graph,
            graph,
            state,
            pending: Vec::new(),
            view_radius: req.view_radius.unwrap_or(default_radius),
            created: now,
            touched: now,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn state(&self) -> &FireState {
        &self.state
    }

    pub fn pending(&self) -> &[VertexId] {
        &self.pending
    }

    pub fn view_radius(&self) -> usize {
        self.view_radius
    }

    pub fn created(&self) -> Instant {
        self.created
    }

    pub fn last_used(&self) -> Instant {
        self.touched
    }

    /// The board within `radius` of the fire, or within the largest smaller
    /// radius that fits in [`VIEW_VERTEX_CAP`] vertices.
    pub fn view(&self, radius: usize) -> Result<View, ApiError> {
        let g = &*self.graph;
        let sources: Vec<VertexId> = self.state.burning().iter().cloned().collect();
        let mut radius = radius;
        let b = loop {
            match ball(g, &sources, radius, VIEW_VERTEX_CAP) {
                Ok(b) => break b,
                Err(GraphError::CapExceeded { .. }) if radius > 0 => radius -= 1,
                Err(e) => return Err(e.into()),
            }
        };

        let mut layers: Vec<Vec<usize>> = vec![Vec::new(); radius + 1];
        for (i, (_, d)) in b.vertices.iter().enumerate() {
            layers[*d].push(i);
        }
        let mut fallback = vec![[0.0; 2]; b.len()];
        for (d, layer) in layers.iter_mut().enumerate() {
            layer.sort_by(|&i, &j| b.vertices[i].0.cmp(&b.vertices[j].0));
            for (k, &i) in layer.iter().enumerate() {
                let angle = std::f64::consts::TAU * (k as f64 + 0.5) / layer.len() as f64;
                fallback[i] = [d as f64 * angle.cos(), d as f64 * angle.sin()];
            }
        }

        let mut vertices: Vec<ViewVertex> = b
            .vertices
            .iter()
            .zip(fallback)
            .map(|((v, d), fb)| ViewVertex {
                id: v.clone(),
                distance: *d,
                layout: g.layout_hint(v).unwrap_or(fb),
                status: if self.state.burning().contains(v) {
                    Status::Burning
                } else if self.state.protected().contains(v) {
                    Status::Protected
                } else {
                    Status::Open
                },
                pending: self.pending.contains(v),
            })
            .collect();
        vertices.sort_by(|a, b| a.distance.cmp(&b.distance).then_with(|| a.id.cmp(&b.id)));
        let mut edges: Vec<[VertexId; 2]> = b
            .edges
            .iter()
            .map(|&(i, j)| {
                let (a, c) = (&b.vertices[i].0, &b.vertices[j].0);
                if a <= c {
                    [a.clone(), c.clone()]
                } else {
                    [c.clone(), a.clone()]
                }
            })
            .collect();
        edges.sort();

        Ok(View {
            schema: VIEW_SCHEMA.into(),
            session: self.id.clone(),
            graph: g.name(),
            schedule: self.state.schedule(),
            time: self.state.time(),
            budget: self.state.next_budget(),
            pending: self.pending.clone(),
            contained: self.state.is_contained(),
            contained_at: self.state.contained_at(),
            fire_size: self.state.burning().len(),
            protected_count: self.state.protected().len(),
            radius,
            vertices,
            edges,
        })
    }

    fn ensure_running(&self) -> Result<(), ApiError> {
        match self.state.contained_at() {
            Some(t) => Err(ApiError::new(
                StatusCode::CONFLICT,
                "game-over",
                format!("the fire was contained at turn {t}"),
            )),
            None => Ok(()),
        }
    }

    /// Adds vertices to, or revokes them from, the pending protections. The
    /// whole request is rejected if any part of it is illegal.
    pub fn protect(&mut self, req: &ProtectRequest) -> Result<(), ApiError> {
        self.ensure_running()?;
        let ids = parse_ids(&*self.graph, &req.vertices)?;
        if req.revoke {
            let missing: Vec<String> = ids
                .iter()
                .filter(|v| !self.pending.contains(v))
                .map(|v| v.to_string())
                .collect();
            if !missing.is_empty() {
                return Err(
                    ApiError::unprocessable("not-pending", "vertices are not pending")
                        .with_vertices(missing),
                );
            }
            self.pending.retain(|v| !ids.contains(v));
            return Ok(());
        }
        let mut candidate = self.pending.clone();
        candidate.extend(ids);
        self.state
            .validate_move(&*self.graph, &candidate)
            .map_err(ApiError::from)?;
        self.pending = candidate;
        Ok(())
    }

    /// Commits the pending protections and lets the fire spread.
    pub fn step(&mut self) -> Result<(), ApiError> {
        self.ensure_running()?;
        self.state
            .step(&*self.graph, &self.pending)
            .map_err(ApiError::from)?;
        self.pending.clear();
        Ok(())
    }

    /// Greedy suggestions for the rest of this turn's budget.
    pub fn hint(&self) -> Result<Hint, ApiError> {
        let greedy = GreedyFrontier::default();
        let left = self.state.next_budget().saturating_sub(self.pending.len());
        let vertices = greedy
            .ranked(&self.state, &*self.graph)
            .map_err(|e| ApiError::from(GameError::Graph(e)))?
            .into_iter()
            .map(|(v, _)| v)
            .filter(|v| !self.pending.contains(v))
            .take(left)
            .collect();
        Ok(Hint {
            advisory: true,
            strategy: "greedy-frontier".into(),
            vertices,
        })
    }

    /// The committed turns as a JSON Lines trace.
    pub fn trace(&self) -> String {
        Trace::from_state(
            &*self.graph,
            &self.state,
            Some(self.spec.clone()),
            "interactive",
        )
        .to_jsonl()
    }
}

impl From<GraphError> for ApiError {
    fn from(e: GraphError) -> Self {
        GameError::Graph(e).into()
    }
}
