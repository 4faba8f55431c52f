//! The firefighter game on lazily generated infinite graphs.
//!
//! A fire starts on a finite vertex set. Each turn `n` the player protects at
//! most `f(n) = ⌊C · n^d⌋` vertices, then the fire spreads to every
//! unprotected neighbor. The crate provides:
//!
//! - [`graph`]: the neighbor-oracle abstraction, BFS layers and finite balls;
//! - [`groups`]: Cayley graphs of exactly represented groups and a few graph
//!   families;
//! - [`game`], [`play`] and [`trace`]: the rules, the play loop and replayable
//!   traces;
//! - [`strategies`]: containment strategies and an exhaustive solver;
//! - [`analysis`]: growth, Følner and Cheeger diagnostics.

pub mod analysis;
pub mod game;
pub mod graph;
pub mod groups;
pub mod play;
pub mod strategies;
pub mod trace;

pub use game::{new_game, BudgetSchedule, FireState, GameError, TurnRecord};
pub use graph::{FiniteBall, FiniteGraph, GraphError, GraphProvider, VertexId, DEFAULT_VERTEX_CAP};
pub use groups::{GraphSpec, GroupKind, GroupSpec};
pub use play::{play, ContainmentReport, Outcome, PlayError};
pub use strategies::{EscapeCertificate, Strategy, StrategyError};
pub use trace::{Trace, TraceError};
