//! The firefighter game as an exact state machine.
//!
//! Each turn `n >= 1` the player protects a set `W_n` of at most `f(n)`
//! vertices that are neither burning nor already protected; then the fire
//! spreads to every unprotected neighbor of a burning vertex. Burning and
//! protected vertices stay that way forever.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{GraphError, GraphProvider, VertexId, DEFAULT_VERTEX_CAP};

/// `f(n) = ⌊C · n^d⌋` firefighters at turn `n`. Unused budget is lost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BudgetSchedule {
    c: Ratio<u64>,
    d: u32,
}

impl BudgetSchedule {
    pub fn new(c: Ratio<u64>, d: u32) -> Self {
        BudgetSchedule { c, d }
    }

    pub fn constant(c: u64) -> Self {
        BudgetSchedule::new(Ratio::from_integer(c), 0)
    }

    pub fn c(&self) -> Ratio<u64> {
        self.c
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Budget at turn `n` (saturating; `n = 0` has no budget).
    pub fn budget(&self, n: usize) -> usize {
        if n == 0 {
            return 0;
        }
        let pow = (n as u128).checked_pow(self.d);
        let numer = pow.and_then(|p| p.checked_mul(*self.c.numer() as u128));
        match numer {
            Some(x) => usize::try_from(x / *self.c.denom() as u128).unwrap_or(usize::MAX),
            None if self.c.is_zero() => 0,
            None => usize::MAX,
        }
    }

    /// `Σ_{k=1..n} f(k)`, saturating.
    pub fn cumulative(&self, n: usize) -> usize {
        (1..=n).fold(0usize, |acc, k| acc.saturating_add(self.budget(k)))
    }

    /// Whether every turn of `self` has at most the budget of `other`.
    pub fn dominated_by(&self, other: &BudgetSchedule) -> bool {
        self.d == other.d && self.c <= other.c
    }
}

impl fmt::Display for BudgetSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C={} d={}", self.c, self.d)
    }
}

/// Parses `C` from `"3"`, `"3/2"` or a finite decimal such as `"1.5"`.
pub fn parse_ratio(text: &str) -> Result<Ratio<u64>, String> {
    let t = text.trim();
    if let Some((int, frac)) = t.split_once('.') {
        let digits = frac.len() as u32;
        let denom = 10u64
            .checked_pow(digits)
            .ok_or_else(|| format!("too many decimals in `{t}`"))?;
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| format!("invalid number `{t}`"))?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| format!("invalid number `{t}`"))?
        };
        let numer = int
            .checked_mul(denom)
            .and_then(|x| x.checked_add(frac))
            .ok_or_else(|| format!("number `{t}` out of range"))?;
        return Ok(Ratio::new(numer, denom));
    }
    let r = Ratio::<u64>::from_str(t).map_err(|_| format!("invalid rational `{t}`"))?;
    Ok(r)
}

#[derive(Serialize, Deserialize)]
struct ScheduleRepr {
    c: RatioRepr,
    d: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RatioRepr {
    Int(u64),
    Float(f64),
    Text(String),
}

impl Serialize for BudgetSchedule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScheduleRepr {
            c: RatioRepr::Text(self.c.to_string()),
            d: self.d,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BudgetSchedule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ScheduleRepr::deserialize(d)?;
        let c = match repr.c {
            RatioRepr::Int(n) => Ratio::from_integer(n),
            RatioRepr::Float(x) => {
                if !(x.is_finite() && x >= 0.0) {
                    return Err(serde::de::Error::custom("C must be a non-negative number"));
                }
                parse_ratio(&x.to_string()).map_err(serde::de::Error::custom)?
            }
            RatioRepr::Text(t) => parse_ratio(&t).map_err(serde::de::Error::custom)?,
        };
        Ok(BudgetSchedule::new(c, repr.d))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("initial fire is empty")]
    EmptyFire,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("turn {turn}: {requested} vertices requested but the budget is {budget}")]
    BudgetExceeded {
        turn: usize,
        budget: usize,
        requested: usize,
    },
    #[error("cannot protect burning vertices: {}", join_ids(.vertices))]
    ProtectingBurning { vertices: Vec<VertexId> },
    #[error("vertices already protected: {}", join_ids(.vertices))]
    DoubleProtection { vertices: Vec<VertexId> },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn join_ids(v: &[VertexId]) -> String {
    v.iter().map(VertexId::as_str).collect::<Vec<_>>().join(" ")
}

impl GameError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            GameError::EmptyFire => "empty-fire",
            GameError::UnknownVertex(_) => "unknown-vertex",
            GameError::BudgetExceeded { .. } => "budget-exceeded",
            GameError::ProtectingBurning { .. } => "protecting-burning-vertex",
            GameError::DoubleProtection { .. } => "double-protection",
            GameError::Graph(GraphError::CapExceeded { .. }) => "cap-exceeded",
            GameError::Graph(GraphError::UnknownVertex(_)) => "unknown-vertex",
            GameError::Graph(_) => "graph-error",
        }
    }

    /// Vertices the error is about, if any.
    pub fn offending(&self) -> Vec<String> {
        match self {
            GameError::UnknownVertex(v) | GameError::Graph(GraphError::UnknownVertex(v)) => {
                vec![v.clone()]
            }
            GameError::ProtectingBurning { vertices }
            | GameError::DoubleProtection { vertices } => {
                vertices.iter().map(|v| v.to_string()).collect()
            }
            _ => Vec::new(),
        }
    }
}

/// One committed turn: the protected set `W_n`, `|X_n|` after spreading, and
/// the budget `f(n)` in force.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub n: usize,
    pub protected: Vec<VertexId>,
    pub fire: usize,
    pub budget: usize,
}

/// Game position at time `n`: the burning set `X_n`, all protections so far,
/// and the containment time once the fire can no longer spread.
#[derive(Debug, Clone)]
pub struct FireState {
    schedule: BudgetSchedule,
    initial: Vec<VertexId>,
    burning: BTreeSet<VertexId>,
    protected: BTreeSet<VertexId>,
    /// Vertices that caught fire in the most recent spread (or `X_0`).
    frontier: Vec<VertexId>,
    time: usize,
    contained_at: Option<usize>,
    turns: Vec<TurnRecord>,
    vertex_cap: usize,
}

fn check_vertex(g: &dyn GraphProvider, v: &VertexId) -> Result<(), GameError> {
    match g.parse_vertex(v.as_str()) {
        Ok(canon) if canon == *v => Ok(()),
        _ => Err(GameError::UnknownVertex(v.to_string())),
    }
}

/// Starts a game with fire `x0` at time 0.
pub fn new_game(
    g: &dyn GraphProvider,
    x0: &[VertexId],
    schedule: BudgetSchedule,
) -> Result<FireState, GameError> {
    if x0.is_empty() {
        return Err(GameError::EmptyFire);
    }
    let mut burning = BTreeSet::new();
    let mut frontier = Vec::new();
    for v in x0 {
        check_vertex(g, v)?;
        if burning.insert(v.clone()) {
            frontier.push(v.clone());
        }
    }
    let mut state = FireState {
        schedule,
        initial: frontier.clone(),
        burning,
        protected: BTreeSet::new(),
        frontier,
        time: 0,
        contained_at: None,
        turns: Vec::new(),
        vertex_cap: DEFAULT_VERTEX_CAP,
    };
    if !state.has_open_neighbor(g)? {
        state.contained_at = Some(0);
    }
    Ok(state)
}

impl FireState {
    /// Bounds `|X_n| + |P_n|`; a step that would exceed it fails with
    /// [`GraphError::CapExceeded`].
    pub fn with_vertex_cap(mut self, cap: usize) -> Self {
        self.vertex_cap = cap;
        self
    }

    pub fn schedule(&self) -> BudgetSchedule {
        self.schedule
    }

    pub fn initial_fire(&self) -> &[VertexId] {
        &self.initial
    }

    pub fn burning(&self) -> &BTreeSet<VertexId> {
        &self.burning
    }

    pub fn protected(&self) -> &BTreeSet<VertexId> {
        &self.protected
    }

    pub fn frontier(&self) -> &[VertexId] {
        &self.frontier
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn contained_at(&self) -> Option<usize> {
        self.contained_at
    }

    pub fn is_contained(&self) -> bool {
        self.contained_at.is_some()
    }

    pub fn turns(&self) -> &[TurnRecord] {
        &self.turns
    }

    /// Budget for the next turn, `f(time + 1)`.
    pub fn next_budget(&self) -> usize {
        self.schedule.budget(self.time + 1)
    }

    pub fn is_open(&self, v: &VertexId) -> bool {
        !self.burning.contains(v) && !self.protected.contains(v)
    }

    fn has_open_neighbor(&self, g: &dyn GraphProvider) -> Result<bool, GraphError> {
        for v in &self.frontier {
            for w in g.neighbors(v)? {
                if self.is_open(&w) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Unburned, unprotected vertices adjacent to the fire, in discovery order.
    pub fn open_frontier(&self, g: &dyn GraphProvider) -> Result<Vec<VertexId>, GraphError> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for v in &self.frontier {
            for w in g.neighbors(v)? {
                if self.is_open(&w) && seen.insert(w.clone()) {
                    out.push(w);
                }
            }
        }
        Ok(out)
    }

    /// Checks `w` against every precondition of [`FireState::step`] without
    /// changing the state.
    pub fn validate_move(&self, g: &dyn GraphProvider, w: &[VertexId]) -> Result<(), GameError> {
        let turn = self.time + 1;
        let budget = self.schedule.budget(turn);
        if w.len() > budget {
            return Err(GameError::BudgetExceeded {
                turn,
                budget,
                requested: w.len(),
            });
        }
        let mut seen = HashSet::new();
        let mut repeated = Vec::new();
        for v in w {
            check_vertex(g, v)?;
            if !seen.insert(v) {
                repeated.push(v.clone());
            }
        }
        let burning: Vec<_> = w
            .iter()
            .filter(|v| self.burning.contains(*v))
            .cloned()
            .collect();
        if !burning.is_empty() {
            return Err(GameError::ProtectingBurning { vertices: burning });
        }
        repeated.extend(w.iter().filter(|v| self.protected.contains(*v)).cloned());
        if !repeated.is_empty() {
            return Err(GameError::DoubleProtection { vertices: repeated });
        }
        Ok(())
    }

    /// Plays one turn: protect `w`, then spread. On error the state is
    /// unchanged.
    pub fn step(&mut self, g: &dyn GraphProvider, w: &[VertexId]) -> Result<(), GameError> {
        self.validate_move(g, w)?;
        let mut protected = self.protected.clone();
        protected.extend(w.iter().cloned());

        let mut newly = Vec::new();
        let mut added = HashSet::new();
        for v in &self.frontier {
            for u in g.neighbors(v)? {
                if !self.burning.contains(&u) && !protected.contains(&u) && added.insert(u.clone())
                {
                    newly.push(u);
                }
            }
        }
        if self.burning.len() + newly.len() + protected.len() > self.vertex_cap {
            return Err(GameError::Graph(GraphError::CapExceeded {
                cap: self.vertex_cap,
            }));
        }

        self.protected = protected;
        self.burning.extend(newly.iter().cloned());
        self.frontier = newly;
        self.time += 1;
        self.turns.push(TurnRecord {
            n: self.time,
            protected: w.to_vec(),
            fire: self.burning.len(),
            budget: self.schedule.budget(self.time),
        });
        if self.contained_at.is_none() && !self.has_open_neighbor(g)? {
            self.contained_at = Some(self.time);
        }
        Ok(())
    }
}
