//! Running a strategy against the engine up to a horizon.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{new_game, BudgetSchedule, GameError, TurnRecord};
use crate::graph::{GraphError, GraphProvider, VertexId, DEFAULT_VERTEX_CAP};
use crate::strategies::{EscapeCertificate, Strategy, StrategyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Contained,
    /// Not contained by the horizon, and an escape certificate shows no
    /// strategy could have confined the fire.
    EscapedHorizon,
    /// Not contained by the horizon; nothing more is known.
    Undetermined,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Contained => "contained",
            Outcome::EscapedHorizon => "escaped-horizon",
            Outcome::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub graph: String,
    pub strategy: String,
    pub schedule: BudgetSchedule,
    pub initial_fire: Vec<VertexId>,
    pub outcome: Outcome,
    pub contained_at: Option<usize>,
    pub final_fire_size: usize,
    pub total_protected: usize,
    pub horizon: usize,
    pub trace: Vec<TurnRecord>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlayError {
    #[error("invalid game setup: {0}")]
    Setup(GameError),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("strategy failed: {0}")]
    Strategy(#[from] StrategyError),
    /// The strategy proposed an illegal move.
    #[error("strategy fault at turn {turn}: {error}")]
    StrategyFault { turn: usize, error: GameError },
    #[error("turn {turn}: {error}")]
    Graph { turn: usize, error: GraphError },
}

#[derive(Debug, Clone, Copy)]
pub struct PlayOptions<'a> {
    /// Upgrades an uncontained run to [`Outcome::EscapedHorizon`] when it
    /// covers the game.
    pub certificate: Option<&'a EscapeCertificate>,
    /// Bound on burning plus protected vertices.
    pub vertex_cap: usize,
}

impl Default for PlayOptions<'_> {
    fn default() -> Self {
        PlayOptions {
            certificate: None,
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

pub fn play(
    g: &dyn GraphProvider,
    x0: &[VertexId],
    schedule: BudgetSchedule,
    strategy: &mut dyn Strategy,
    horizon: usize,
) -> Result<ContainmentReport, PlayError> {
    play_with(g, x0, schedule, strategy, horizon, PlayOptions::default())
}

pub fn play_with(
    g: &dyn GraphProvider,
    x0: &[VertexId],
    schedule: BudgetSchedule,
    strategy: &mut dyn Strategy,
    horizon: usize,
    options: PlayOptions<'_>,
) -> Result<ContainmentReport, PlayError> {
    if horizon == 0 {
        return Err(PlayError::ZeroHorizon);
    }
    let certificate = options.certificate;
    let mut state = new_game(g, x0, schedule)
        .map_err(PlayError::Setup)?
        .with_vertex_cap(options.vertex_cap);
    while state.time() < horizon && !state.is_contained() {
        let budget = state.next_budget();
        let w = strategy.choose(&state, g, budget)?;
        let turn = state.time() + 1;
        state.step(g, &w).map_err(|error| match error {
            GameError::Graph(error) => PlayError::Graph { turn, error },
            error => PlayError::StrategyFault { turn, error },
        })?;
    }
    let outcome = if state.is_contained() {
        Outcome::Contained
    } else if certificate
        .is_some_and(|c| c.covers(&g.name(), state.initial_fire(), schedule, horizon))
    {
        Outcome::EscapedHorizon
    } else {
        Outcome::Undetermined
    };
    Ok(ContainmentReport {
        graph: g.name(),
        strategy: strategy.name(),
        schedule,
        initial_fire: state.initial_fire().to_vec(),
        outcome,
        contained_at: state.contained_at(),
        final_fire_size: state.burning().len(),
        total_protected: state.protected().len(),
        horizon,
        trace: state.turns().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::RegularTree;
    use crate::strategies::NullStrategy;

    #[test]
    fn tree_null_strategy_fills_the_ball() {
        let g = RegularTree::new(3).unwrap();
        let r = play(
            &g,
            &[g.basepoint()],
            BudgetSchedule::constant(4),
            &mut NullStrategy,
            10,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::Undetermined);
        assert_eq!(r.final_fire_size, 3 * (1 << 10) - 2);
        assert_eq!(r.trace.len(), 10);
    }

    #[test]
    fn zero_horizon_is_rejected() {
        let g = RegularTree::new(3).unwrap();
        assert_eq!(
            play(
                &g,
                &[g.basepoint()],
                BudgetSchedule::constant(1),
                &mut NullStrategy,
                0
            ),
            Err(PlayError::ZeroHorizon)
        );
    }
}
